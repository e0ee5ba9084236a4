#include "ptens/quadrature.hpp"

#include <boost/math/special_functions/legendre.hpp>
#include <cmath>
#include <numbers>

#include "ptens/errors.hpp"

namespace ptens {

Rule1D gauss_legendre(int n, double a, double b) {
  if (n < 1) throw InvalidArgument("gauss_legendre: need at least one node");
  const auto zeros = boost::math::legendre_p_zeros<double>(n);  // nonnegative zeros
  Rule1D rule;
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  auto push = [&](double x) {
    const double dp = boost::math::legendre_p_prime(n, x);
    rule.nodes.push_back(mid + half * x);
    rule.weights.push_back(half * 2.0 / ((1.0 - x * x) * dp * dp));
  };
  for (auto it = zeros.rbegin(); it != zeros.rend(); ++it) {
    if (*it != 0.0) push(-*it);
  }
  for (double x : zeros) push(x);
  return rule;
}

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

ExteriorRule exterior_rule(const ExteriorMap& map, int n_angular, int n_radial) {
  const auto radial = gauss_legendre(n_radial, 0.0, 1.0);
  ExteriorRule rule;
  const double dt = 2.0 * std::numbers::pi / n_angular;
  for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
    const double x = radial.nodes[i];
    const double r = 1.0 / x;
    // dA(w) = r dr dt, dr = dx / x^2
    const double jac = r / (x * x) * radial.weights[i] * dt;
    for (int k = 0; k < n_angular; ++k) {
      const cplx w = std::polar(r, dt * k);
      const cplx dphi = map.eval_prime(w);
      rule.w.push_back(w);
      rule.z.push_back(map.eval(w));
      rule.weight.push_back(jac * std::norm(dphi));
    }
  }
  return rule;
}

AreaRule disk_region_rule(cplx center, double radius, int n_angular, int n_radial) {
  AreaRule rule;
  if (radius <= 0.0) return rule;
  const auto radial = gauss_legendre(n_radial, 0.0, radius);
  const double dt = 2.0 * std::numbers::pi / n_angular;
  for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
    for (int k = 0; k < n_angular; ++k) {
      rule.points.push_back(center + std::polar(radial.nodes[i], dt * (k + 0.5)));
      rule.weights.push_back(radial.weights[i] * radial.nodes[i] * dt);
    }
  }
  return rule;
}

}  // namespace ptens
