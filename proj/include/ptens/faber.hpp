#pragma once

// Faber polynomials F_n associated with Phi': F_n is the polynomial part of
// Phi^n Phi', and E_n = F_n - Phi^n Phi' on the exterior.

#include <vector>

#include "ptens/geometry.hpp"

namespace ptens {

struct FaberPolynomial {
  int degree = 0;
  std::vector<cplx> mono_coeffs;  // ascending, size degree + 1
};

/// F_0..F_{n_max} for a fixed map, evaluated through the classical Faber
/// recurrence rather than through monomial coefficients.
class FaberBasis {
 public:
  FaberBasis(ExteriorMap map, int n_max);

  const ExteriorMap& map() const noexcept { return map_; }
  int n_max() const noexcept { return n_max_; }

  /// F_0(z), ..., F_{count-1}(z); count <= n_max + 1.
  std::vector<cplx> values(cplx z, int count) const;
  /// G_0(z), ..., G_{count-1}(z) with G_k' = F_k (G_k = Ftilde_{k+1}/(k+1)).
  std::vector<cplx> antiderivative_values(cplx z, int count) const;

  /// Monomial coefficients; numerically meaningful only for moderate degrees.
  const std::vector<FaberPolynomial>& polynomials() const noexcept { return polys_; }

 private:
  void recurrence(cplx z, int count, std::vector<cplx>* ft, std::vector<cplx>* dft) const;

  ExteriorMap map_;
  int n_max_;
  std::vector<FaberPolynomial> polys_;
};

/// F_0..F_{n_max} via Ftilde recurrence and (n+1) F_n = Ftilde_{n+1}'.
std::vector<FaberPolynomial> faber_all(const ExteriorMap& map, int n_max);

/// Independent coefficients of F_n: Laurent coefficients of w^n / phi'(w)
/// from trapezoidal Fourier inversion on |w| = radius, matched against
/// powers of phi by back substitution.  Test oracle.
std::vector<cplx> faber_oracle_coeffs(const ExteriorMap& map, int n, double radius = 2.0,
                                      int nodes = 512);

struct RemainderEval {
  cplx value;          // E_n(z)
  cplx faber;          // F_n(z)
  cplx principal;      // Phi^n(z) Phi'(z)
};

/// E_n(z) for z in the closure of the exterior; interior points are rejected.
RemainderEval remainder_eval(const FaberBasis& basis, int n, cplx z);

/// E_n(phi(w)) for |w| >= 1 without inverting the map.
cplx remainder_at_w(const FaberBasis& basis, int n, cplx w);

/// Evaluate a polynomial from ascending coefficients (Horner).
cplx horner(const std::vector<cplx>& coeffs, cplx z);

}  // namespace ptens
