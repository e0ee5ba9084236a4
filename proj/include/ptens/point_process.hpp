#pragma once

// Determinantal statistics of the eigenvalue ensemble with weight P_K^{-2s}:
// correlation functions, gap probabilities, the boundary scaling limits and
// an exact radial sampler for the disk.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ptens/kernel.hpp"

namespace ptens {

struct CorrValue {
  double value = 0.0;
  /// More points than N: the kernel matrix has rank at most N and the value is zero up to rounding.
  bool exceeds_rank = false;
};

/// det[Ktilde_{N,s}(lambda_j, lambda_k)].
CorrValue corr_fn(const OrthoPolySet& polys, int N, const std::vector<cplx>& points);

/// Htilde_l(a, b) = omega(a) omega(b) H_l(tau(a) + conj(tau(b))) at z = phi(e^{i theta}).
cplx h_tilde(const ExteriorMap& map, double ell, double theta, cplx a, cplx b);

/// det[Htilde_l(a_j, a_k)]; n = 1 gives R_1^l, n = 2 gives R_2^l.
double scaled_corr(const ExteriorMap& map, double ell, double theta, const std::vector<cplx>& a);

/// 1 - |S(a - b)|^2 with S(d) = 2 sin(d/2) / d.
double sine_corr(cplx a, cplx b);

struct DiskRegion {
  cplx center;
  double radius = 0.0;
};

struct GapOptions {
  int angular_nodes = 128;
  int radial_nodes = 64;
  double tol = 1e-8;   // allowed change under node doubling
};

struct GapResult {
  double probability = 1.0;           // from the finer node set
  double coarse_probability = 1.0;    // same formula at the base node counts
  double det_estimate = 1.0;          // det(I - B) on the finer node set
  std::vector<double> terms;          // |n-th Fredholm term|, n = 0..N
  std::optional<std::string> warning; // set when the two levels disagree beyond tol
};

/// P(no eigenvalue in the region) = sum_{n<=N} (-1)^n/n! int R_n, evaluated
/// through the N x N projected Gram matrix on a polar product rule.
GapResult gap_probability(const OrthoPolySet& polys, int N, const DiskRegion& region,
                          const GapOptions& opts = {});

/// det(I - G) with G_ij = sqrt(w_i) Ktilde(x_i, x_j) sqrt(w_j) on the same rule.
double gap_probability_nystrom(const OrthoPolySet& polys, int N, const DiskRegion& region,
                               int angular_nodes, int radial_nodes);

/// prod_{n<N} (1 - rho^{2n+2}(s-n-1)/s) for the disk ensemble, region disk(0, rho), rho <= 1.
double disk_gap_oracle(int N, double s, double rho);

/// Counter-based uniform variate in (0, 1) keyed by (seed, stream, counter).
double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

struct EigenConfiguration {
  std::vector<cplx> points;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  int N = 0;
  double s = 0.0;
};

/// Inverse of the radial distribution function of |lambda| for the n-th radius.
double disk_radius_quantile(int n, double s, double u);
double disk_radius_cdf(int n, double s, double r);

/// Disk ensemble: independent radii with density ~ r^{2n+1} max(1,r)^{-2s}
/// and independent uniform angles.  Radial statistics are exact; joint
/// angular structure is not reproduced.
EigenConfiguration sample_disk(int N, double s, std::uint64_t seed, std::uint64_t stream = 0);

/// `count` configurations on streams 0..count-1.
std::vector<EigenConfiguration> sample_many(int N, double s, std::uint64_t seed, int count);

struct HistogramBin {
  double lo = 0.0, hi = 0.0;
  double density = 0.0;
  double stderr_ = 0.0;
};

struct RadialHistogram {
  std::vector<HistogramBin> bins;
  double overflow_mean = 0.0;   // mean count beyond the last edge
  double total_mean = 0.0;      // mean count overall (= N)
};

/// Radial estimate of R_1 over equal-width annuli on [0, r_max).
RadialHistogram empirical_r1(const std::vector<EigenConfiguration>& samples, int bins, double r_max);

struct CountEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
};

/// Mean number of points with |lambda| > radius.
CountEstimate count_outside(const std::vector<EigenConfiguration>& samples, double radius);

void write_samples_csv(const std::vector<EigenConfiguration>& samples, std::ostream& out);
void write_histogram_csv(const RadialHistogram& hist, std::ostream& out);

}  // namespace ptens
