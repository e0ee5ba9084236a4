#pragma once

// Compact sets K with analytic Jordan boundary, described through the
// exterior conformal map phi: {|w| > 1} -> C \ K and its inverse Phi.

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace ptens {

using cplx = std::complex<double>;

/// |w| - 1 below this counts as inside; also the snap tolerance for P_K = 1.
inline constexpr double kInsideTol = 1e-10;

/// Finite Laurent map  phi(w) = cap*w + c_0 + sum_{k>=1} c_k w^{-k}.
///
/// Construction validates the map: cap > 0, phi' has no zeros on
/// 1 <= |w| <= R_check, and the boundary curve phi(e^{it}) is simple and
/// positively oriented.  Instances are immutable.
class ExteriorMap {
 public:
  ExteriorMap(double cap, std::vector<cplx> coeffs);

  static ExteriorMap disk() { return ExteriorMap(1.0, {}); }
  static ExteriorMap ellipse(double q);

  double cap() const noexcept { return cap_; }
  /// c_0, c_1, ..., c_m (trailing zeros stripped).
  const std::vector<cplx>& laurent_coeffs() const noexcept { return coeffs_; }
  /// Highest negative power m carried by the map.
  int degree() const noexcept { return coeffs_.empty() ? 0 : static_cast<int>(coeffs_.size()) - 1; }
  /// Estimate of rho(T): phi extends univalently to |w| > univalence_radius.
  double univalence_radius() const noexcept { return univalence_radius_; }

  /// Unchecked Laurent evaluation; valid wherever the series is (w != 0).
  cplx eval(cplx w) const noexcept;
  cplx eval_prime(cplx w) const noexcept;

  /// Boundary point phi(e^{i theta}).
  cplx boundary_point(double theta) const noexcept { return eval(std::polar(1.0, theta)); }

 private:
  double cap_;
  std::vector<cplx> coeffs_;
  double univalence_radius_ = 0.0;
};

/// phi(w); throws InvalidArgument for |w| < 1 - 1e-12.
cplx phi_eval(const ExteriorMap& map, cplx w);
/// phi'(w) = cap - sum k c_k w^{-k-1}; same domain check.
cplx phi_prime_eval(const ExteriorMap& map, cplx w);

struct InverseOptions {
  int max_iter = 64;
};

/// Phi(z) with |Phi(z)| >= 1 - kInsideTol, or nullopt when z lies in the
/// interior of K.  Throws NonConvergence when Newton fails for an exterior point.
std::optional<cplx> big_phi_eval(const ExteriorMap& map, cplx z, InverseOptions opts = {});

/// Phi'(z) = 1 / phi'(Phi(z)) for z in the closure of the exterior.
cplx big_phi_prime(const ExteriorMap& map, cplx w_of_z);

/// P_K(z) = max(1, |Phi(z)|); exactly 1 on K and within kInsideTol of T.
double equilibrium_potential(const ExteriorMap& map, cplx z);

/// P_K^{-s}(z); s = +inf gives the indicator of K.
double potential_weight_sqrt(const ExteriorMap& map, cplx z, double s);

inline double capacity(const ExteriorMap& map) { return map.cap(); }

/// Winding number of the boundary curve around z (0 outside, 1 inside).
int winding_number(const ExteriorMap& map, cplx z, int samples = 4096);

/// Parsed form of `kind=disk`, `kind=ellipse q=...`, `kind=custom cap=... coeffs=[...]`.
struct DomainSpec {
  enum class Kind { disk, ellipse, custom };

  Kind kind = Kind::disk;
  double q = 0.0;
  double cap = 1.0;
  std::vector<cplx> coeffs;

  static DomainSpec disk() { return {}; }
  static DomainSpec ellipse(double q);
  static DomainSpec custom(double cap, std::vector<cplx> coeffs);

  ExteriorMap to_map() const;
  std::string to_text() const;
  bool operator==(const DomainSpec&) const = default;
};

DomainSpec parse_domain(const std::string& text);

/// Complex literal such as `1`, `-0.5i`, `2-3.25i`, `1e-3+i`.
cplx parse_complex(const std::string& text);
/// Shortest round-trip text for a complex number, `a+bi` form.
std::string format_complex(cplx z);
/// Shortest round-trip text for a double.
std::string format_double(double x);

}  // namespace ptens
