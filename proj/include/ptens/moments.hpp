#pragma once

// Gram matrices of the Faber basis under the weight P_K^{-2s}:
//
//   m^s_{k,j} = int_D F_j conj(F_k) dA + int_O F_j conj(F_k) |Phi|^{-2s} dA
//
// The interior part is reduced to a boundary integral by the Cauchy-Green
// identity and summed with the trapezoidal rule in the boundary parameter.
// The exterior part is computed in the w-plane: F_j(phi(w)) phi'(w) equals
// w^j plus a Laurent tail in w^{-2}, w^{-3}, ...  whose coefficients come from
// an FFT on |w| = 1, and each Fourier mode is integrated radially in closed
// form.  Both pieces are exact for finite Laurent maps once the node count
// exceeds the trigonometric degree, so doubling the nodes is a sharp check.

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>

#include "ptens/faber.hpp"

namespace ptens {

/// s = +infinity selects the area (Carleman) case.
inline bool is_infinite(double s) { return std::isinf(s) && s > 0; }
inline double infinite_s() { return std::numeric_limits<double>::infinity(); }

struct MomentOptions {
  int angular_nodes = 256;     // raised automatically to resolve the integrands
  double refine_tol = 1e-11;   // max entry change allowed under node doubling
  bool check_refinement = true;
};

struct MomentTable {
  int n_max = 0;
  double s = 0.0;
  int angular_nodes = 0;
  double refinement_change = 0.0;
  /// entries(k, j) = m^s_{k,j} = <F_j, F_k>; Hermitian positive definite.
  Eigen::MatrixXcd entries;
  Eigen::MatrixXcd interior_part;
  Eigen::MatrixXcd exterior_part;
};

struct EpsilonTable {
  double s = 0.0;
  /// entries(k, j) = eps^s_{k,j}.
  Eigen::MatrixXcd entries;
  /// Normalized deviations of the two summands (diagnostics only).
  Eigen::MatrixXcd interior_dev;
  Eigen::MatrixXcd exterior_dev;
};

/// Laurent tail coefficients of F_j(phi(w)) phi'(w) - w^j.
struct RemainderModes {
  /// tail(j, m - 2) = coefficient of w^{-m}, m = 2..max_order.
  Eigen::MatrixXcd tail;
  /// Largest coefficient seen at powers w^{-1}, w^0, w^1, ...; zero in exact arithmetic.
  double leakage = 0.0;
};

/// Angular node count needed to resolve degree-n_max integrands exactly.
int required_angular_nodes(const ExteriorMap& map, int n_max);

RemainderModes remainder_modes(const FaberBasis& basis, int n_max, int nodes);

/// (k, j) -> int_D F_j conj(F_k) dA via the Cauchy-Green boundary integral.
Eigen::MatrixXcd interior_gram(const FaberBasis& basis, int n_max, int nodes);

/// Same quantity through pi/(k+1) (delta - (k+1)/pi int_O E_j conj(E_k) dA).
Eigen::MatrixXcd interior_gram_via_remainders(const FaberBasis& basis, int n_max, int nodes);

/// (k, j) -> int_O F_j conj(F_k) |Phi|^{-2s} dA; requires s >= n_max + 2.
Eigen::MatrixXcd exterior_gram(const FaberBasis& basis, int n_max, double s, int nodes);

/// Full table with node-doubling refinement check.
MomentTable moments(const FaberBasis& basis, int n_max, double s, const MomentOptions& opts = {});

/// Exact tables for the disk and the ellipses phi(w) = w + q/w.
MomentTable closed_form_moments(const DomainSpec& domain, int n_max, double s);

EpsilonTable epsilon_table(const MomentTable& moments);

/// CSV rows `row,col,re,im` (row = k, col = j).
void write_csv(const MomentTable& table, std::ostream& out);

/// Stable text key for a map, used to address cached tables.
std::string map_key(const ExteriorMap& map);

/// Binary cache of moment tables keyed by (map, n_max, s, node count).
class MomentCache {
 public:
  explicit MomentCache(std::filesystem::path dir);

  std::optional<MomentTable> load(const ExteriorMap& map, int n_max, double s, int nodes) const;
  void store(const ExteriorMap& map, const MomentTable& table) const;
  std::filesystem::path path_for(const ExteriorMap& map, int n_max, double s, int nodes) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace ptens
