#include "ptens/faber.hpp"

#include <cmath>
#include <numbers>

#include "ptens/errors.hpp"

namespace ptens {

namespace {

// Coefficient a_m of w^{-m} in phi, zero beyond the map's degree.
cplx laurent(const ExteriorMap& map, int m) {
  const auto& c = map.laurent_coeffs();
  return m < static_cast<int>(c.size()) ? c[m] : cplx(0.0);
}

}  // namespace

cplx horner(const std::vector<cplx>& coeffs, cplx z) {
  cplx acc(0.0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

// Generating function  w phi'(w) / (phi(w) - z) = sum_n Ftilde_n(z) w^{-n}
// yields  cap*Ftilde_{m+1} = (z - a_0) Ftilde_m - sum_{k=1}^m a_k Ftilde_{m-k} - m a_m.
std::vector<FaberPolynomial> faber_all(const ExteriorMap& map, int n_max) {
  if (n_max < 0) throw InvalidArgument("faber_all: n_max must be nonnegative");
  const double cap = map.cap();
  const cplx a0 = laurent(map, 0);
  const int deg = map.degree();

  // Ftilde_0 .. Ftilde_{n_max+1}, each as ascending coefficients.
  std::vector<std::vector<cplx>> ft(n_max + 2);
  ft[0] = {cplx(1.0)};
  for (int m = 0; m <= n_max; ++m) {
    std::vector<cplx> next(m + 2, cplx(0.0));
    for (int i = 0; i <= m; ++i) {
      next[i + 1] += ft[m][i];
      next[i] -= a0 * ft[m][i];
    }
    for (int k = 1; k <= std::min(m, deg); ++k) {
      const cplx ak = laurent(map, k);
      for (std::size_t i = 0; i < ft[m - k].size(); ++i) next[i] -= ak * ft[m - k][i];
    }
    next[0] -= static_cast<double>(m) * laurent(map, m);
    for (auto& v : next) v /= cap;
    ft[m + 1] = std::move(next);
  }

  std::vector<FaberPolynomial> out(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    const auto& src = ft[n + 1];
    out[n].degree = n;
    out[n].mono_coeffs.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
      out[n].mono_coeffs[i] = src[i + 1] * static_cast<double>(i + 1) / static_cast<double>(n + 1);
    }
  }
  return out;
}

FaberBasis::FaberBasis(ExteriorMap map, int n_max)
    : map_(std::move(map)), n_max_(n_max), polys_(faber_all(map_, n_max)) {}

void FaberBasis::recurrence(cplx z, int count, std::vector<cplx>* ft, std::vector<cplx>* dft) const {
  const double cap = map_.cap();
  const cplx shift = z - laurent(map_, 0);
  const int deg = map_.degree();
  auto& f = *ft;
  auto& d = *dft;
  f.assign(count + 1, cplx(0.0));
  d.assign(count + 1, cplx(0.0));
  f[0] = 1.0;
  for (int m = 0; m < count; ++m) {
    cplx fv = shift * f[m];
    cplx dv = f[m] + shift * d[m];
    for (int k = 1; k <= std::min(m, deg); ++k) {
      const cplx ak = laurent(map_, k);
      fv -= ak * f[m - k];
      dv -= ak * d[m - k];
    }
    if (m <= deg) fv -= static_cast<double>(m) * laurent(map_, m);
    f[m + 1] = fv / cap;
    d[m + 1] = dv / cap;
  }
}

std::vector<cplx> FaberBasis::values(cplx z, int count) const {
  if (count < 0 || count > n_max_ + 1) throw InvalidArgument("FaberBasis::values: count out of range");
  std::vector<cplx> f, d;
  recurrence(z, count, &f, &d);
  std::vector<cplx> out(count);
  for (int n = 0; n < count; ++n) out[n] = d[n + 1] / static_cast<double>(n + 1);
  return out;
}

std::vector<cplx> FaberBasis::antiderivative_values(cplx z, int count) const {
  if (count < 0 || count > n_max_ + 1) {
    throw InvalidArgument("FaberBasis::antiderivative_values: count out of range");
  }
  std::vector<cplx> f, d;
  recurrence(z, count, &f, &d);
  std::vector<cplx> out(count);
  for (int n = 0; n < count; ++n) out[n] = f[n + 1] / static_cast<double>(n + 1);
  return out;
}

std::vector<cplx> faber_oracle_coeffs(const ExteriorMap& map, int n, double radius, int nodes) {
  if (n < 0) throw InvalidArgument("faber_oracle_coeffs: n must be nonnegative");
  if (radius <= map.univalence_radius()) throw InvalidArgument("faber_oracle_coeffs: radius too small");
  const double two_pi = 2.0 * std::numbers::pi;

  // Laurent coefficient of w^p in a function sampled on |w| = radius.
  auto coefficient = [&](auto&& fn, int p) {
    cplx acc(0.0);
    for (int i = 0; i < nodes; ++i) {
      const double t = two_pi * i / nodes;
      acc += fn(std::polar(radius, t)) * std::polar(1.0, -p * t);
    }
    return acc / (static_cast<double>(nodes) * std::pow(radius, p));
  };

  // h(w) = w^n / phi'(w) = (Phi^n Phi')(phi(w)).
  std::vector<cplx> target(n + 1);
  for (int p = 0; p <= n; ++p) {
    target[p] = coefficient([&](cplx w) { return std::pow(w, n) / map.eval_prime(w); }, p);
  }
  // powers[k][p] = coefficient of w^p in phi(w)^k, p = 0..k.
  std::vector<std::vector<cplx>> powers(n + 1);
  for (int k = 0; k <= n; ++k) {
    powers[k].resize(k + 1);
    for (int p = 0; p <= k; ++p) {
      powers[k][p] = coefficient([&](cplx w) { return std::pow(map.eval(w), k); }, p);
    }
  }
  // sum_k a_k [phi^k]_p = [h]_p for p = n..0; upper triangular in (p, k).
  std::vector<cplx> a(n + 1, cplx(0.0));
  for (int p = n; p >= 0; --p) {
    cplx rhs = target[p];
    for (int k = p + 1; k <= n; ++k) rhs -= a[k] * powers[k][p];
    a[p] = rhs / powers[p][p];
  }
  return a;
}

RemainderEval remainder_eval(const FaberBasis& basis, int n, cplx z) {
  if (n < 0 || n > basis.n_max()) throw InvalidArgument("remainder_eval: n out of range");
  const auto w = big_phi_eval(basis.map(), z);
  if (!w) throw InvalidArgument("remainder_eval: z lies inside K");
  const cplx fn = basis.values(z, n + 1)[n];
  const cplx principal = std::pow(*w, n) * big_phi_prime(basis.map(), *w);
  return {fn - principal, fn, principal};
}

cplx remainder_at_w(const FaberBasis& basis, int n, cplx w) {
  if (n < 0 || n > basis.n_max()) throw InvalidArgument("remainder_at_w: n out of range");
  const cplx z = basis.map().eval(w);
  return basis.values(z, n + 1)[n] - std::pow(w, n) / basis.map().eval_prime(w);
}

}  // namespace ptens
