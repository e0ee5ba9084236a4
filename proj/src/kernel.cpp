#include "ptens/kernel.hpp"

#include <cmath>
#include <numbers>

#include "ptens/errors.hpp"
#include "ptens/quadrature.hpp"

namespace ptens {

namespace {

constexpr double kPi = std::numbers::pi;

void check_N(const OrthoPolySet& polys, int N) {
  if (N < 1) throw InvalidArgument("kernel: N must be positive");
  if (N > polys.n_max() + 1) throw InvalidArgument("kernel: N exceeds the available polynomials");
  if (!is_infinite(polys.s()) && N > std::floor(polys.s() - 1.0)) {
    throw InvalidArgument("kernel: need N <= floor(s - 1)");
  }
}

cplx kernel_value(const OrthoPolySet& polys, int N, cplx z, cplx u) {
  const auto pz = polys.values(z, N);
  if (z == u) {
    double acc = 0.0;
    for (const auto& v : pz) acc += std::norm(v);
    return acc;
  }
  const auto pu = polys.values(u, N);
  cplx acc(0.0);
  for (int n = 0; n < N; ++n) acc += pz[n] * std::conj(pu[n]);
  return acc;
}

cplx boundary_image(const ExteriorMap& map, cplx z, const char* who) {
  const auto w = big_phi_eval(map, z);
  if (!w) throw InvalidArgument(std::string(who) + ": point lies inside K");
  return *w;
}

}  // namespace

double kernel_weight(const ExteriorMap& map, cplx z, double s) { return potential_weight_sqrt(map, z, s); }

KernelEval kernel_sum(const OrthoPolySet& polys, int N, cplx z, cplx u) {
  check_N(polys, N);
  return {kernel_value(polys, N, z, u), N, polys.s(), false};
}

KernelEval weighted_kernel(const OrthoPolySet& polys, int N, cplx z, cplx u) {
  check_N(polys, N);
  const double wz = kernel_weight(polys.map(), z, polys.s());
  const double wu = z == u ? wz : kernel_weight(polys.map(), u, polys.s());
  const cplx value = wz * wu == 0.0 ? cplx(0.0) : wz * wu * kernel_value(polys, N, z, u);
  return {value, N, polys.s(), true};
}

cplx kernel_asymptotic_w(int N, double s, cplx x, cplx y, cplx dz, cplx du) {
  if (N < 1) throw InvalidArgument("kernel_asymptotic: N must be positive");
  if (!is_infinite(s) && N > std::floor(s - 1.0)) throw InvalidArgument("kernel_asymptotic: need N <= floor(s - 1)");
  const double inv_s = is_infinite(s) ? 0.0 : 1.0 / s;
  const cplx u = x * std::conj(y);
  const cplx prefactor = dz * std::conj(du) / kPi;
  const cplx one_minus = 1.0 - u;
  if (std::abs(one_minus) < std::max(1e-8, 1.0 / N)) {
    // The two blocks sum to sum_{n<N} ((n+1) - (n+1)^2/s) u^n; use it where
    // the closed form loses digits to cancellation.
    cplx acc(0.0);
    for (int n = N - 1; n >= 0; --n) {
      const double k = n + 1.0;
      acc = acc * u + (k - k * k * inv_s);
    }
    return prefactor * acc;
  }
  const double Nd = N;
  const cplx uN = std::pow(u, N);
  const cplx om2 = one_minus * one_minus;
  const cplx first = (1.0 - (Nd + 1.0) * inv_s) * (-(Nd + 1.0) * uN / one_minus + (1.0 - uN * u) / om2);
  const cplx second = inv_s * ((Nd + 2.0) * (1.0 + uN * u) / om2 - 2.0 * (1.0 - uN * u * u) / (om2 * one_minus));
  return prefactor * (first + second);
}

cplx kernel_asymptotic(const ExteriorMap& map, int N, double s, cplx z, cplx u) {
  const cplx x = boundary_image(map, z, "kernel_asymptotic");
  const cplx y = z == u ? x : boundary_image(map, u, "kernel_asymptotic");
  return kernel_asymptotic_w(N, s, x, y, big_phi_prime(map, x), big_phi_prime(map, y));
}

double kernel_asymptotic_diagonal(const ExteriorMap& map, int N, double s, cplx z) {
  if (N < 1) throw InvalidArgument("kernel_asymptotic_diagonal: N must be positive");
  if (!is_infinite(s) && N > std::floor(s - 1.0)) {
    throw InvalidArgument("kernel_asymptotic_diagonal: need N <= floor(s - 1)");
  }
  const cplx x = boundary_image(map, z, "kernel_asymptotic_diagonal");
  const double d = std::norm(big_phi_prime(map, x));
  const double Nd = N;
  const double inv_s = is_infinite(s) ? 0.0 : 1.0 / s;
  return d / kPi *
         (Nd * (Nd + 1.0) / 2.0 * (1.0 - (Nd + 1.0) * inv_s) + Nd * (Nd + 1.0) * (Nd + 2.0) / 6.0 * inv_s);
}

BergmanEval bergman_kernel(const ExteriorMap& map, cplx z, cplx u, double tol, int max_terms) {
  if (big_phi_eval(map, z) || big_phi_eval(map, u)) {
    throw InvalidArgument("bergman_kernel: points must lie in the interior");
  }
  if (map.degree() == 0) {
    // disk of radius cap about c0
    const double cap = map.cap();
    const cplx c0 = map.laurent_coeffs().empty() ? cplx(0.0) : map.laurent_coeffs()[0];
    const cplx zz = (z - c0) / cap, uu = (u - c0) / cap;
    const cplx d = 1.0 - zz * std::conj(uu);
    return {1.0 / (kPi * cap * cap * d * d), 0, 0.0};
  }
  int M = 16;
  auto eval = [&](int terms) {
    const auto polys = build_orthopolys(map, terms - 1, infinite_s());
    return kernel_value(polys, terms, z, u);
  };
  cplx prev = eval(M);
  while (2 * M <= max_terms) {
    M *= 2;
    const cplx next = eval(M);
    const double change = std::abs(next - prev);
    if (change <= tol) return {next, M, change};
    prev = next;
  }
  throw NonConvergence("bergman_kernel: Carleman partial sums did not settle", std::abs(prev), tol);
}

// ---------------------------------------------------------------------------
// Scaling limits

cplx h0_direct(cplx tau) { return 2.0 * (std::exp(tau) * (tau - 1.0) + 1.0) / (tau * tau); }

cplx h1_direct(cplx tau) { return 6.0 * (std::exp(tau) * (tau - 2.0) + tau + 2.0) / (tau * tau * tau); }

namespace {

// sum_j tau^j / (j! * denom(j))
template <class Denom>
cplx exp_series(cplx tau, Denom denom) {
  cplx term(1.0), acc(0.0);
  for (int j = 0; j < 40; ++j) {
    if (j > 0) term *= tau / static_cast<double>(j);
    const cplx add = term / denom(j);
    acc += add;
    if (j > 4 && std::abs(add) < 1e-18 * std::abs(acc)) break;
  }
  return acc;
}

}  // namespace

cplx h0_series(cplx tau) {
  return 2.0 * exp_series(tau, [](int j) { return j + 2.0; });
}

cplx h1_series(cplx tau) {
  return 6.0 * exp_series(tau, [](int j) { return (j + 2.0) * (j + 3.0); });
}

cplx h_limit(double ell, cplx tau) {
  if (!(ell >= 0.0 && ell <= 1.0)) throw InvalidArgument("h_limit: ell must lie in [0, 1]");
  const bool near = std::abs(tau) < kHSeriesRadius;
  const cplx h0 = ell == 1.0 ? cplx(0.0) : (near ? h0_series(tau) : h0_direct(tau));
  const cplx h1 = ell == 0.0 ? cplx(0.0) : (near ? h1_series(tau) : h1_direct(tau));
  return ((3.0 - 3.0 * ell) * h0 + ell * h1) / (3.0 - 2.0 * ell);
}

cplx tau_of(const ExteriorMap& map, cplx a, double theta) {
  const cplx w = std::polar(1.0, theta);
  return a * std::conj(w) / map.eval_prime(w);
}

double omega_from_tau(cplx tau, double ell) {
  if (!(ell >= 0.0 && ell <= 1.0)) throw InvalidArgument("omega: ell must lie in [0, 1]");
  if (tau.real() <= 0.0) return 1.0;
  return ell == 0.0 ? 0.0 : std::exp(-tau.real() / ell);
}

double omega_of(const ExteriorMap& map, cplx a, double theta, double ell) {
  return omega_from_tau(tau_of(map, a, theta), ell);
}

ScaledRatio scaled_ratio(const OrthoPolySet& polys, int N, double theta, cplx a, cplx b) {
  check_N(polys, N);
  const cplx z = polys.map().boundary_point(theta);
  const cplx za = z + a / static_cast<double>(N);
  const cplx zb = z + b / static_cast<double>(N);
  const cplx diag = kernel_value(polys, N, z, z);
  const cplx off = kernel_value(polys, N, za, zb);
  const double s = polys.s();
  const double wa = kernel_weight(polys.map(), za, s);
  const double wb = za == zb ? wa : kernel_weight(polys.map(), zb, s);
  const double w0 = kernel_weight(polys.map(), z, s);
  ScaledRatio out;
  out.ratio = off / diag;
  out.weighted_ratio = wa * wb == 0.0 ? cplx(0.0) : wa * wb * off / (w0 * w0 * diag);
  return out;
}

cplx scaling_predictor(const ExteriorMap& map, double ell, double theta, cplx a, cplx b) {
  return h_limit(ell, tau_of(map, a, theta) + std::conj(tau_of(map, b, theta)));
}

std::optional<cplx> weighted_scaling_predictor(const ExteriorMap& map, double ell, double theta, cplx a,
                                               cplx b) {
  const cplx ta = tau_of(map, a, theta), tb = tau_of(map, b, theta);
  if (ell > 0.0) return omega_from_tau(ta, ell) * omega_from_tau(tb, ell) * h_limit(ell, ta + std::conj(tb));
  if (ta.real() > 0.0 || tb.real() > 0.0) return cplx(0.0);
  if (ta.real() < 0.0 && tb.real() < 0.0) return h_limit(0.0, ta + std::conj(tb));
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Extremal and reproducing properties

ChristoffelReport christoffel_check(const OrthoPolySet& polys, const MomentTable& moments, int N, cplx z,
                                    const std::vector<Eigen::VectorXcd>& trials, double tol) {
  check_N(polys, N);
  ChristoffelReport report;
  report.kernel_diagonal = kernel_value(polys, N, z, z).real();
  const auto f = polys.basis().values(z, N);
  for (const auto& v : trials) {
    const int len = static_cast<int>(v.size());
    if (len < 1 || len > N || len > moments.n_max + 1) {
      throw InvalidArgument("christoffel_check: trial degree must be below N");
    }
    cplx pz(0.0);
    for (int j = 0; j < len; ++j) pz += v(j) * f[j];
    const double norm2 = (v.adjoint() * moments.entries.topLeftCorner(len, len) * v)(0, 0).real();
    if (!(norm2 > 0.0)) throw InvalidArgument("christoffel_check: trial polynomial has zero norm");
    const double ratio = std::norm(pz) / norm2;
    report.trial_ratios.push_back(ratio);
    if (ratio > report.kernel_diagonal + tol * std::max(1.0, report.kernel_diagonal)) report.holds = false;
  }
  return report;
}

double reproducing_check(const OrthoPolySet& polys, int N, const Eigen::VectorXcd& faber_coeffs, cplx z,
                         int angular_nodes, int radial_nodes) {
  check_N(polys, N);
  const int len = static_cast<int>(faber_coeffs.size());
  if (len < 1 || len > N) throw InvalidArgument("reproducing_check: p must have degree below N");
  const auto& map = polys.map();
  const auto& basis = polys.basis();
  const int deg = map.degree();
  const double s = polys.s();
  if (angular_nodes <= 0) angular_nodes = 2 * next_pow2((N + 1) * (deg + 2) + 8);
  if (radial_nodes <= 0) {
    radial_nodes = (is_infinite(s) ? 0 : static_cast<int>(std::ceil(s))) + (N + 1) * (deg + 1) + 8;
  }

  auto p_at = [&](cplx x) {
    const auto f = basis.values(x, len);
    cplx acc(0.0);
    for (int j = 0; j < len; ++j) acc += faber_coeffs(j) * f[j];
    return acc;
  };

  // inner[n] = <p, pi_n>_w
  std::vector<cplx> inner(N, cplx(0.0));
  const double dt = 2.0 * kPi / angular_nodes;
  for (int i = 0; i < angular_nodes; ++i) {
    const cplx tau = std::polar(1.0, dt * i);
    const cplx x = map.eval(tau);
    const cplx c = 0.5 * dt * map.eval_prime(tau) * tau * p_at(x);
    const auto anti = polys.antiderivative_values(x, N);
    for (int n = 0; n < N; ++n) inner[n] += c * std::conj(anti[n]);
  }
  if (!is_infinite(s)) {
    const auto rule = exterior_rule(map, angular_nodes, radial_nodes);
    for (std::size_t i = 0; i < rule.w.size(); ++i) {
      const double weight = rule.weight[i] * std::pow(std::abs(rule.w[i]), -2.0 * s);
      if (weight == 0.0) continue;
      const cplx pv = p_at(rule.z[i]) * weight;
      const auto pi = polys.values(rule.z[i], N);
      for (int n = 0; n < N; ++n) inner[n] += pv * std::conj(pi[n]);
    }
  }
  const auto pz = polys.values(z, N);
  cplx reproduced(0.0);
  for (int n = 0; n < N; ++n) reproduced += pz[n] * inner[n];
  return std::abs(p_at(z) - reproduced);
}

}  // namespace ptens
