#include "ptens/point_process.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "ptens/errors.hpp"
#include "ptens/quadrature.hpp"

namespace ptens {

namespace {

constexpr double kPi = std::numbers::pi;

double hermitian_det(const Eigen::MatrixXcd& m) {
  if (m.rows() == 0) return 1.0;
  return m.determinant().real();
}

// Rows: weighted orthonormal polynomials psi_n(x_i) sqrt(w_i) on the region rule.
Eigen::MatrixXcd region_samples(const OrthoPolySet& polys, int N, const AreaRule& rule) {
  Eigen::MatrixXcd psi(N, static_cast<int>(rule.points.size()));
  for (std::size_t i = 0; i < rule.points.size(); ++i) {
    const cplx x = rule.points[i];
    const double w = kernel_weight(polys.map(), x, polys.s()) * std::sqrt(rule.weights[i]);
    const auto v = w == 0.0 ? std::vector<cplx>(N, cplx(0.0)) : polys.values(x, N);
    for (int n = 0; n < N; ++n) psi(n, static_cast<int>(i)) = w * v[n];
  }
  return psi;
}

struct GapLevel {
  double probability = 1.0;
  double det = 1.0;
  std::vector<double> terms;
};

GapLevel gap_level(const OrthoPolySet& polys, int N, const DiskRegion& region, int n_ang, int n_rad) {
  const auto rule = disk_region_rule(region.center, region.radius, n_ang, n_rad);
  const Eigen::MatrixXcd psi = region_samples(polys, N, rule);
  // B(n, m) = int_E psi_m conj(psi_n)
  Eigen::MatrixXcd B = psi.conjugate() * psi.transpose();
  B = 0.5 * (B + B.adjoint()).eval();
  const Eigen::VectorXd mu = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(B).eigenvalues();
  // Elementary symmetric polynomials e_0..e_N of the eigenvalues are the Fredholm terms.
  std::vector<double> e(N + 1, 0.0);
  e[0] = 1.0;
  for (int i = 0; i < N; ++i) {
    for (int k = i + 1; k >= 1; --k) e[k] += mu(i) * e[k - 1];
  }
  GapLevel out;
  out.probability = 0.0;
  for (int k = 0; k <= N; ++k) out.probability += (k % 2 == 0 ? 1.0 : -1.0) * e[k];
  out.terms.resize(N + 1);
  for (int k = 0; k <= N; ++k) out.terms[k] = std::abs(e[k]);
  out.det = hermitian_det(Eigen::MatrixXcd::Identity(N, N) - B);
  return out;
}

void check_N(const OrthoPolySet& polys, int N) {
  if (N < 1 || N > polys.n_max() + 1) throw InvalidArgument("point process: N out of range");
  if (!is_infinite(polys.s()) && N > std::floor(polys.s() - 1.0)) {
    throw InvalidArgument("point process: need N <= floor(s - 1)");
  }
}

}  // namespace

CorrValue corr_fn(const OrthoPolySet& polys, int N, const std::vector<cplx>& points) {
  check_N(polys, N);
  const int n = static_cast<int>(points.size());
  if (n == 0) return {1.0, false};
  Eigen::MatrixXcd psi(n, N);
  for (int i = 0; i < n; ++i) {
    const double w = kernel_weight(polys.map(), points[i], polys.s());
    const auto v = polys.values(points[i], N);
    for (int k = 0; k < N; ++k) psi(i, k) = w * v[k];
  }
  // K(i, j) = sum_k psi_k(x_i) conj(psi_k(x_j))
  const Eigen::MatrixXcd K = psi * psi.adjoint();
  return {n == 1 ? K(0, 0).real() : hermitian_det(K), n > N};
}

cplx h_tilde(const ExteriorMap& map, double ell, double theta, cplx a, cplx b) {
  const cplx ta = tau_of(map, a, theta), tb = tau_of(map, b, theta);
  const double wa = omega_from_tau(ta, ell), wb = omega_from_tau(tb, ell);
  if (wa * wb == 0.0) return 0.0;
  return wa * wb * h_limit(ell, ta + std::conj(tb));
}

double scaled_corr(const ExteriorMap& map, double ell, double theta, const std::vector<cplx>& a) {
  const int n = static_cast<int>(a.size());
  Eigen::MatrixXcd H(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) H(j, k) = h_tilde(map, ell, theta, a[j], a[k]);
  }
  if (n == 1) return H(0, 0).real();
  if (n == 2) return (H(0, 0) * H(1, 1) - H(0, 1) * H(1, 0)).real();
  return hermitian_det(H);
}

double sine_corr(cplx a, cplx b) {
  const cplx d = a - b;
  const cplx S = std::abs(d) < 1e-8 ? cplx(1.0) - d * d / 24.0 : 2.0 * std::sin(d / 2.0) / d;
  return 1.0 - std::norm(S);
}

GapResult gap_probability(const OrthoPolySet& polys, int N, const DiskRegion& region, const GapOptions& opts) {
  check_N(polys, N);
  if (region.radius < 0.0) throw InvalidArgument("gap_probability: negative radius");
  if (opts.angular_nodes < 1 || opts.radial_nodes < 1) {
    throw InvalidArgument("gap_probability: node counts must be positive");
  }
  GapResult out;
  if (region.radius == 0.0) {
    out.terms.assign(N + 1, 0.0);
    out.terms[0] = 1.0;
    return out;
  }
  const auto coarse = gap_level(polys, N, region, opts.angular_nodes, opts.radial_nodes);
  const auto fine = gap_level(polys, N, region, 2 * opts.angular_nodes, 2 * opts.radial_nodes);
  out.probability = fine.probability;
  out.coarse_probability = coarse.probability;
  out.det_estimate = fine.det;
  out.terms = fine.terms;
  if (std::abs(fine.probability - coarse.probability) > opts.tol) {
    out.warning = "quadrature refinement moved the gap probability from " + format_double(coarse.probability) +
                  " to " + format_double(fine.probability);
  }
  return out;
}

double gap_probability_nystrom(const OrthoPolySet& polys, int N, const DiskRegion& region, int angular_nodes,
                               int radial_nodes) {
  check_N(polys, N);
  const auto rule = disk_region_rule(region.center, region.radius, angular_nodes, radial_nodes);
  const Eigen::MatrixXcd psi = region_samples(polys, N, rule);
  const Eigen::MatrixXcd G = psi.transpose() * psi.conjugate();
  return hermitian_det(Eigen::MatrixXcd::Identity(G.rows(), G.cols()) - G);
}

double disk_gap_oracle(int N, double s, double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidArgument("disk_gap_oracle: need 0 <= rho <= 1");
  double prod = 1.0;
  for (int n = 0; n < N; ++n) prod *= 1.0 - disk_radius_cdf(n, s, rho);
  return prod;
}

// ---------------------------------------------------------------------------
// Sampling

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

void check_sampler(int N, double s) {
  if (N < 1) throw InvalidArgument("sample_disk: N must be positive");
  if (!(s > N) || is_infinite(s)) throw InvalidArgument("sample_disk: need finite s > N");
}

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ stream);
  h = splitmix64(h ^ counter);
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

double disk_radius_cdf(int n, double s, double r) {
  if (r <= 0.0) return 0.0;
  const double inner_mass = (s - n - 1.0) / s;
  if (r <= 1.0) return std::pow(r, 2 * n + 2) * inner_mass;
  return 1.0 - (n + 1.0) / s * std::pow(r, -2.0 * (s - n - 1.0));
}

double disk_radius_quantile(int n, double s, double u) {
  if (!(u > 0.0 && u < 1.0)) throw InvalidArgument("disk_radius_quantile: u must lie in (0, 1)");
  const double inner_mass = (s - n - 1.0) / s;
  if (u <= inner_mass) return std::pow(u / inner_mass, 1.0 / (2.0 * n + 2.0));
  return std::pow((1.0 - u) * s / (n + 1.0), -1.0 / (2.0 * (s - n - 1.0)));
}

EigenConfiguration sample_disk(int N, double s, std::uint64_t seed, std::uint64_t stream) {
  check_sampler(N, s);
  EigenConfiguration cfg;
  cfg.seed = seed;
  cfg.stream = stream;
  cfg.N = N;
  cfg.s = s;
  cfg.points.resize(N);
  for (int n = 0; n < N; ++n) {
    const double r = disk_radius_quantile(n, s, counter_uniform(seed, stream, 2 * static_cast<std::uint64_t>(n)));
    const double t = 2.0 * kPi * counter_uniform(seed, stream, 2 * static_cast<std::uint64_t>(n) + 1);
    cfg.points[n] = std::polar(r, t);
  }
  return cfg;
}

std::vector<EigenConfiguration> sample_many(int N, double s, std::uint64_t seed, int count) {
  check_sampler(N, s);
  if (count < 0) throw InvalidArgument("sample_many: count must be nonnegative");
  std::vector<EigenConfiguration> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(sample_disk(N, s, seed, static_cast<std::uint64_t>(i)));
  return out;
}

RadialHistogram empirical_r1(const std::vector<EigenConfiguration>& samples, int bins, double r_max) {
  if (bins < 1 || !(r_max > 0.0)) throw InvalidArgument("empirical_r1: need bins >= 1 and r_max > 0");
  if (samples.empty()) throw InvalidArgument("empirical_r1: no samples");
  const double width = r_max / bins;
  const double M = static_cast<double>(samples.size());
  std::vector<double> sum(bins, 0.0), sum_sq(bins, 0.0);
  double overflow = 0.0, total = 0.0;
  std::vector<int> counts(bins);
  for (const auto& cfg : samples) {
    std::fill(counts.begin(), counts.end(), 0);
    for (const auto& p : cfg.points) {
      const double r = std::abs(p);
      const int b = static_cast<int>(r / width);
      if (b >= bins) {
        overflow += 1.0;
      } else {
        ++counts[b];
      }
    }
    total += static_cast<double>(cfg.points.size());
    for (int b = 0; b < bins; ++b) {
      sum[b] += counts[b];
      sum_sq[b] += static_cast<double>(counts[b]) * counts[b];
    }
  }
  RadialHistogram hist;
  hist.overflow_mean = overflow / M;
  hist.total_mean = total / M;
  for (int b = 0; b < bins; ++b) {
    HistogramBin bin;
    bin.lo = b * width;
    bin.hi = (b + 1) * width;
    const double area = kPi * (bin.hi * bin.hi - bin.lo * bin.lo);
    const double mean = sum[b] / M;
    const double var = M > 1.0 ? std::max(0.0, (sum_sq[b] - M * mean * mean) / (M - 1.0)) : 0.0;
    bin.density = mean / area;
    bin.stderr_ = std::sqrt(var / M) / area;
    hist.bins.push_back(bin);
  }
  return hist;
}

CountEstimate count_outside(const std::vector<EigenConfiguration>& samples, double radius) {
  if (samples.empty()) throw InvalidArgument("count_outside: no samples");
  const double M = static_cast<double>(samples.size());
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& cfg : samples) {
    double c = 0.0;
    for (const auto& p : cfg.points) c += std::abs(p) > radius ? 1.0 : 0.0;
    sum += c;
    sum_sq += c * c;
  }
  CountEstimate out;
  out.mean = sum / M;
  const double var = M > 1.0 ? std::max(0.0, (sum_sq - M * out.mean * out.mean) / (M - 1.0)) : 0.0;
  out.stderr_ = std::sqrt(var / M);
  return out;
}

void write_samples_csv(const std::vector<EigenConfiguration>& samples, std::ostream& out) {
  out << "index,re,im\n";
  std::size_t index = 0;
  for (const auto& cfg : samples) {
    for (const auto& p : cfg.points) {
      out << index++ << ',' << format_double(p.real()) << ',' << format_double(p.imag()) << '\n';
    }
  }
}

void write_histogram_csv(const RadialHistogram& hist, std::ostream& out) {
  out << "bin_lo,bin_hi,density,stderr\n";
  for (const auto& b : hist.bins) {
    out << format_double(b.lo) << ',' << format_double(b.hi) << ',' << format_double(b.density) << ','
        << format_double(b.stderr_) << '\n';
  }
}

}  // namespace ptens
