#include "ptens/ortho_poly.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ptens/errors.hpp"

namespace ptens {

namespace {

constexpr double kPi = std::numbers::pi;

double norm_factor(int n, double s) {
  const double np1 = n + 1.0;
  return is_infinite(s) ? np1 / kPi : np1 / kPi * (1.0 - np1 / s);
}

void check_degree(int n, double s, const char* who) {
  if (n < 0) throw InvalidArgument(std::string(who) + ": degree must be nonnegative");
  if (!is_infinite(s) && !(s >= n + 2.0)) {
    throw InvalidArgument(std::string(who) + ": need s >= n + 2");
  }
}

}  // namespace

OrthoPolySet::OrthoPolySet(FaberBasis basis, double s, Eigen::MatrixXcd faber_coeffs)
    : basis_(std::move(basis)), s_(s), faber_coeffs_(std::move(faber_coeffs)) {
  const int n = static_cast<int>(faber_coeffs_.rows());
  if (faber_coeffs_.cols() != n || n - 1 > basis_.n_max()) {
    throw InvalidArgument("OrthoPolySet: coefficient table does not match the basis");
  }
  const auto& faber = basis_.polynomials();
  const double cap = basis_.map().cap();
  mono_coeffs_.resize(n);
  kappas_.resize(n);
  for (int k = 0; k < n; ++k) {
    mono_coeffs_[k].assign(k + 1, cplx(0.0));
    for (int j = 0; j <= k; ++j) {
      const cplx c = faber_coeffs_(k, j);
      for (int i = 0; i <= j; ++i) mono_coeffs_[k][i] += c * faber[j].mono_coeffs[i];
    }
    kappas_[k] = faber_coeffs_(k, k).real() / std::pow(cap, k + 1);
  }
}

std::vector<cplx> OrthoPolySet::values(cplx z, int count) const {
  if (count < 0 || count > n_max() + 1) throw InvalidArgument("OrthoPolySet::values: count out of range");
  const auto f = basis_.values(z, count);
  std::vector<cplx> out(count, cplx(0.0));
  for (int k = 0; k < count; ++k) {
    for (int j = 0; j <= k; ++j) out[k] += faber_coeffs_(k, j) * f[j];
  }
  return out;
}

std::vector<cplx> OrthoPolySet::antiderivative_values(cplx z, int count) const {
  if (count < 0 || count > n_max() + 1) {
    throw InvalidArgument("OrthoPolySet::antiderivative_values: count out of range");
  }
  const auto g = basis_.antiderivative_values(z, count);
  std::vector<cplx> out(count, cplx(0.0));
  for (int k = 0; k < count; ++k) {
    for (int j = 0; j <= k; ++j) out[k] += faber_coeffs_(k, j) * g[j];
  }
  return out;
}

OrthoPolySet orthonormalize(const FaberBasis& basis, const MomentTable& moments) {
  const int n = moments.n_max + 1;
  // gram(j, k) = <F_j, F_k>
  const Eigen::MatrixXcd gram = moments.entries.transpose();
  Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    cplx diag = gram(j, j);
    for (int k = 0; k < j; ++k) diag -= L(j, k) * std::conj(L(j, k));
    if (!(diag.real() > 0.0)) {
      throw NonConvergence("orthonormalize: nonpositive pivot at index " + std::to_string(j),
                           diag.real(), 0.0);
    }
    L(j, j) = std::sqrt(diag.real());
    for (int i = j + 1; i < n; ++i) {
      cplx v = gram(i, j);
      for (int k = 0; k < j; ++k) v -= L(i, k) * std::conj(L(j, k));
      L(i, j) = v / L(j, j).real();
    }
  }
  Eigen::MatrixXcd C = L.triangularView<Eigen::Lower>().solve(Eigen::MatrixXcd::Identity(n, n));
  for (int k = 0; k < n; ++k) {
    for (int j = k + 1; j < n; ++j) C(k, j) = 0.0;
    C(k, k) = C(k, k).real();
  }
  return OrthoPolySet(basis, moments.s, std::move(C));
}

OrthoPolySet build_orthopolys(const ExteriorMap& map, int n_max, double s, const MomentOptions& opts) {
  FaberBasis basis(map, n_max);
  const auto table = moments(basis, n_max, s, opts);
  return orthonormalize(basis, table);
}

Eigen::VectorXcd orthopoly_det(const MomentTable& moments, int n) {
  if (n < 0 || n > moments.n_max) throw InvalidArgument("orthopoly_det: degree out of range");
  const Eigen::MatrixXcd& m = moments.entries;
  const double d_prev = n == 0 ? 1.0 : m.topLeftCorner(n, n).determinant().real();
  const double d_curr = m.topLeftCorner(n + 1, n + 1).determinant().real();
  if (!(d_prev > 0.0) || !(d_curr > 0.0)) {
    throw NonConvergence("orthopoly_det: Gram determinant is not positive", d_curr, d_prev);
  }
  // Expand the bordered determinant along its last row F_0(z) .. F_n(z).
  Eigen::VectorXcd coeffs(n + 1);
  for (int j = 0; j <= n; ++j) {
    Eigen::MatrixXcd minor(n, n);
    for (int r = 0; r < n; ++r) {
      int c_out = 0;
      for (int c = 0; c <= n; ++c) {
        if (c != j) minor(r, c_out++) = m(r, c);
      }
    }
    const cplx cofactor = (n == 0 ? cplx(1.0) : minor.determinant()) * ((n + j) % 2 == 0 ? 1.0 : -1.0);
    coeffs(j) = cofactor / std::sqrt(d_prev * d_curr);
  }
  return coeffs;
}

double kappa_asymptotic(int n, double s, const ExteriorMap& map) {
  check_degree(n, s, "kappa_asymptotic");
  return std::sqrt(norm_factor(n, s)) / std::pow(map.cap(), n + 1);
}

cplx exterior_asymptotic(int n, double s, const ExteriorMap& map, cplx z) {
  check_degree(n, s, "exterior_asymptotic");
  const auto w = big_phi_eval(map, z);
  if (!w) throw InvalidArgument("exterior_asymptotic: z lies inside K");
  return std::sqrt(norm_factor(n, s)) * std::pow(*w, n) * big_phi_prime(map, *w);
}

AsymptoticPrediction asymptotic_prediction(int n, double s, const ExteriorMap& map, cplx z,
                                           double sigma) {
  return {kappa_asymptotic(n, s, map), exterior_asymptotic(n, s, map, z), sigma};
}

double sigma_model(int n, int p, double alpha, SigmaRegime regime, std::optional<double> analytic_rho) {
  if (n < 1) throw InvalidArgument("sigma_model: n must be positive");
  if (analytic_rho) {
    if (!(*analytic_rho >= 0.0 && *analytic_rho < 1.0)) {
      throw InvalidArgument("sigma_model: rho must lie in [0, 1)");
    }
    return std::pow(*analytic_rho, n);
  }
  if (p < 0 || !(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidArgument("sigma_model: need p >= 0 and 0 < alpha < 1");
  }
  if (p + alpha <= 0.5) throw InvalidArgument("sigma_model: need p + alpha > 1/2");
  const double nn = n;
  if (p >= 2) return std::log(nn) / std::pow(nn, p + alpha);
  if (regime == SigmaRegime::ratio_below_one) {
    return p == 1 ? std::log(nn) / std::pow(nn, 1.0 + alpha) : std::pow(nn, 1.0 - 2.0 * alpha);
  }
  if (p == 1) return std::pow(nn, -2.0 * alpha);
  throw NotCovered("sigma_model: smoothness p = 0 with N/s -> 1 has no known error estimate");
}

cplx ClosedFormPoly::operator()(cplx z) const {
  if (domain.kind != ModelDomain::Kind::interval) return horner(mono_coeffs, z);
  // (Phi^{n+1} - Phi^{-(n+1)}) / sqrt(z^2 - 4), sqrt branch ~ z at infinity
  const cplx root = std::sqrt(z - 2.0) * std::sqrt(z + 2.0);
  if (std::abs(root) < 1e-6) return horner(mono_coeffs, z);
  const cplx big_phi = 0.5 * (z + root);
  const cplx num = std::pow(big_phi, n + 1) - std::pow(big_phi, -(n + 1));
  return kappa * num / root;
}

ClosedFormPoly closed_form(const ModelDomain& domain, int n, double s) {
  if (n < 0) throw InvalidArgument("closed_form: degree must be nonnegative");
  ClosedFormPoly out;
  out.n = n;
  out.s = s;
  out.domain = domain;
  double q = 0.0;
  switch (domain.kind) {
    case ModelDomain::Kind::disk:
      check_degree(n, s, "closed_form");
      out.kappa = std::sqrt(norm_factor(n, s));
      break;
    case ModelDomain::Kind::ellipse: {
      check_degree(n, s, "closed_form");
      q = domain.q;
      if (!(q >= 0.0 && q < 1.0)) throw InvalidArgument("closed_form: ellipse needs 0 <= q < 1");
      const double q2 = std::pow(q, 2 * n + 2);
      const double ratio = is_infinite(s) ? 1.0 : (s - n - 1.0) / (s + n + 1.0);
      out.kappa = std::sqrt(norm_factor(n, s) / (1.0 - q2 * ratio));
      break;
    }
    case ModelDomain::Kind::interval:
      if (is_infinite(s)) {
        throw InvalidArgument("closed_form: the segment has zero area, s must be finite");
      }
      check_degree(n, s, "closed_form");
      q = 1.0;
      out.kappa = std::sqrt((s * s - (n + 1.0) * (n + 1.0)) / (2.0 * kPi * s));
      out.outside_theorem_scope = true;
      break;
  }
  // U_0 = 1, U_1 = z, U_{k+1} = z U_k - q U_{k-1}
  std::vector<cplx> prev{cplx(1.0)}, curr{cplx(0.0), cplx(1.0)};
  if (n == 0) {
    curr = prev;
  } else {
    for (int k = 1; k < n; ++k) {
      std::vector<cplx> next(k + 2, cplx(0.0));
      for (int i = 0; i <= k; ++i) next[i + 1] += curr[i];
      for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= q * prev[i];
      prev = std::move(curr);
      curr = std::move(next);
    }
  }
  for (auto& c : curr) c *= out.kappa;
  out.mono_coeffs = std::move(curr);
  return out;
}

double delta_det(const EpsilonTable& eps, int n) {
  if (n < -1 || n >= eps.entries.rows()) throw InvalidArgument("delta_det: degree out of range");
  if (n == -1) return 1.0;
  const Eigen::MatrixXcd m =
      Eigen::MatrixXcd::Identity(n + 1, n + 1) + eps.entries.topLeftCorner(n + 1, n + 1);
  return m.determinant().real();
}

}  // namespace ptens
