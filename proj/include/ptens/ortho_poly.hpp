#pragma once

// Orthonormal polynomials pi_{n,s} for the weight P_K^{-2s}, built in the
// Faber basis from a moment table, together with their closed forms on the
// disk, the ellipses and the segment [-2, 2], and the asymptotic predictors.

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "ptens/moments.hpp"

namespace ptens {

class OrthoPolySet {
 public:
  OrthoPolySet(FaberBasis basis, double s, Eigen::MatrixXcd faber_coeffs);

  double s() const noexcept { return s_; }
  int n_max() const noexcept { return static_cast<int>(faber_coeffs_.rows()) - 1; }
  const ExteriorMap& map() const noexcept { return basis_.map(); }
  const FaberBasis& basis() const noexcept { return basis_; }

  /// Row n holds the Faber coefficients of pi_n (lower triangular).
  const Eigen::MatrixXcd& faber_coeffs() const noexcept { return faber_coeffs_; }
  /// Ascending monomial coefficients of pi_n.
  const std::vector<std::vector<cplx>>& mono_coeffs() const noexcept { return mono_coeffs_; }
  /// Positive leading coefficients kappa_{n,s}.
  const std::vector<double>& kappas() const noexcept { return kappas_; }

  /// pi_0(z), ..., pi_{count-1}(z), evaluated through the Faber recurrence.
  std::vector<cplx> values(cplx z, int count) const;
  /// Antiderivatives of pi_0..pi_{count-1} (fixed but unspecified constants).
  std::vector<cplx> antiderivative_values(cplx z, int count) const;

 private:
  FaberBasis basis_;
  double s_;
  Eigen::MatrixXcd faber_coeffs_;
  std::vector<std::vector<cplx>> mono_coeffs_;
  std::vector<double> kappas_;
};

/// Cholesky of the Gram matrix; pi_n = sum_j C(n, j) F_j with C = L^{-1}.
/// A nonpositive pivot throws NonConvergence naming the failing index.
OrthoPolySet orthonormalize(const FaberBasis& basis, const MomentTable& moments);

/// Convenience: Faber basis, moment table and orthonormalization in one call.
OrthoPolySet build_orthopolys(const ExteriorMap& map, int n_max, double s,
                              const MomentOptions& opts = {});

/// Faber coefficients of pi_n from the bordered-determinant formula
/// det[<F_j,F_k>; F_j(z)] / sqrt(D_{n-1} D_n).
Eigen::VectorXcd orthopoly_det(const MomentTable& moments, int n);

/// gamma^{-(n+1)} sqrt((n+1)/pi (1 - (n+1)/s)).
double kappa_asymptotic(int n, double s, const ExteriorMap& map);

/// sqrt((n+1)/pi (1 - (n+1)/s)) Phi^n(z) Phi'(z) for z outside K.
cplx exterior_asymptotic(int n, double s, const ExteriorMap& map, cplx z);

struct AsymptoticPrediction {
  double kappa_pred = 0.0;
  cplx exterior_value_pred;
  double sigma = 0.0;
};

AsymptoticPrediction asymptotic_prediction(int n, double s, const ExteriorMap& map, cplx z,
                                           double sigma);

enum class SigmaRegime { ratio_below_one, ratio_one };

/// Error scale Sigma_n for a boundary of smoothness class (p, alpha), or rho^n
/// for an analytic boundary when `analytic_rho` is given.
double sigma_model(int n, int p, double alpha, SigmaRegime regime,
                   std::optional<double> analytic_rho = std::nullopt);

struct ModelDomain {
  enum class Kind { disk, ellipse, interval };
  Kind kind = Kind::disk;
  double q = 0.0;

  static ModelDomain disk() { return {}; }
  static ModelDomain ellipse(double q) { return {Kind::ellipse, q}; }
  static ModelDomain interval() { return {Kind::interval, 1.0}; }
};

struct ClosedFormPoly {
  int n = 0;
  double s = 0.0;
  ModelDomain domain;
  double kappa = 0.0;
  /// Ascending monomial coefficients.
  std::vector<cplx> mono_coeffs;
  /// The segment [-2, 2] is a degenerate domain the general theory does not cover.
  bool outside_theorem_scope = false;

  cplx operator()(cplx z) const;
};

ClosedFormPoly closed_form(const ModelDomain& domain, int n, double s);

/// Delta_{n,s} = det[delta + eps]_{k,j <= n}; Delta_{-1,s} = 1.
double delta_det(const EpsilonTable& eps, int n);

}  // namespace ptens
