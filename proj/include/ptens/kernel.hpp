#pragma once

// Reproducing kernels K_{N,s}, their weighted versions, the Bergman kernel,
// the explicit near-boundary formulas and the universal scaling limits H_l.

#include <optional>
#include <vector>

#include "ptens/ortho_poly.hpp"

namespace ptens {

struct KernelEval {
  cplx value;
  int N = 0;
  double s = 0.0;
  bool weighted = false;
};

/// sum_{n<N} pi_n(z) conj(pi_n(u)).  Requires N <= floor(s - 1) and N <= n_max + 1.
KernelEval kernel_sum(const OrthoPolySet& polys, int N, cplx z, cplx u);

/// P_K^{-s}(z) P_K^{-s}(u) K_{N,s}(z, u); indicator weight when s is infinite.
KernelEval weighted_kernel(const OrthoPolySet& polys, int N, cplx z, cplx u);

/// Square root of the weight, P_K^{-s}(z) or the indicator of K.
double kernel_weight(const ExteriorMap& map, cplx z, double s);

/// Explicit main term of K_{N,s}(z, u) for z, u in the closure of O near the boundary.
cplx kernel_asymptotic(const ExteriorMap& map, int N, double s, cplx z, cplx u);

/// Diagonal main term (|Phi'(z)|^2 / pi)[N(N+1)/2 (1 - (N+1)/s) + N(N+1)(N+2)/(6s)].
double kernel_asymptotic_diagonal(const ExteriorMap& map, int N, double s, cplx z);

/// Same as kernel_asymptotic but taking the images x = Phi(z), y = Phi(u)
/// and the derivatives Phi'(z), Phi'(u) directly.
cplx kernel_asymptotic_w(int N, double s, cplx x, cplx y, cplx dz, cplx du);

struct BergmanEval {
  cplx value;
  int terms = 0;         // polynomial count used (0 for closed forms)
  double last_change = 0.0;
};

/// Bergman kernel of the interior D: closed form on the disk, otherwise the
/// Carleman partial sums K_{M,inf} with M doubling until they settle to `tol`.
BergmanEval bergman_kernel(const ExteriorMap& map, cplx z, cplx u, double tol = 1e-8,
                           int max_terms = 512);

/// H_0 and H_1 from their closed forms (singular at tau = 0).
cplx h0_direct(cplx tau);
cplx h1_direct(cplx tau);
/// Taylor series of H_0 and H_1 about tau = 0.
cplx h0_series(cplx tau);
cplx h1_series(cplx tau);

/// |tau| below which h_limit uses the series.
inline constexpr double kHSeriesRadius = 1.0;

/// H_l(tau) = ((3-3l) H_0 + l H_1) / (3 - 2l).
cplx h_limit(double ell, cplx tau);

/// tau(a, z) = a Phi'(z) conj(Phi(z)) at the boundary point z = phi(e^{i theta}).
cplx tau_of(const ExteriorMap& map, cplx a, double theta);

/// exp(-Re tau / l) for Re tau > 0, else 1.  For l = 0 this is the indicator of Re tau <= 0.
double omega_of(const ExteriorMap& map, cplx a, double theta, double ell);
double omega_from_tau(cplx tau, double ell);

struct ScaledRatio {
  cplx ratio;
  cplx weighted_ratio;
};

/// K(z + a/N, z + b/N) / K(z, z) and its weighted counterpart, z = phi(e^{i theta}).
ScaledRatio scaled_ratio(const OrthoPolySet& polys, int N, double theta, cplx a, cplx b);

/// H_l(tau(a) + conj(tau(b))).
cplx scaling_predictor(const ExteriorMap& map, double ell, double theta, cplx a, cplx b);

/// omega(a) omega(b) H_l(...) for l > 0.  For l = 0: H_0 when both Re tau < 0,
/// 0 when either Re tau > 0, and nullopt (undefined) otherwise.
std::optional<cplx> weighted_scaling_predictor(const ExteriorMap& map, double ell, double theta,
                                               cplx a, cplx b);

struct ChristoffelReport {
  double kernel_diagonal = 0.0;
  std::vector<double> trial_ratios;  // |p(z)|^2 / ||p||^2
  bool holds = true;
};

/// Checks K_{N,s}(z,z) >= |p(z)|^2 / ||p||^2 for trial polynomials given by
/// their Faber coefficients (degree < N); norms come from the moment table.
ChristoffelReport christoffel_check(const OrthoPolySet& polys, const MomentTable& moments, int N, cplx z,
                                    const std::vector<Eigen::VectorXcd>& trials, double tol = 1e-10);

/// |p(z) - int p(u) K_{N,s}(z,u) w(u) dA(u)| for p given by Faber
/// coefficients, integrated with Cauchy-Green on D and the w-plane rule on O.
double reproducing_check(const OrthoPolySet& polys, int N, const Eigen::VectorXcd& faber_coeffs, cplx z,
                         int angular_nodes = 0, int radial_nodes = 0);

}  // namespace ptens
