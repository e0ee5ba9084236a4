#pragma once

#include <vector>

#include "ptens/geometry.hpp"

namespace ptens {

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [a, b].
Rule1D gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Smallest power of two >= n.
int next_pow2(int n);

/// Weighted planar nodes: sum_i weight_i f(point_i) approximates an area integral.
struct AreaRule {
  std::vector<cplx> points;
  std::vector<double> weights;
};

/// Exterior of K in the w-plane: w = r e^{it}, r in [1, inf) through r = 1/x,
/// trapezoid in t times Gauss-Legendre in x.  The returned points are z =
/// phi(w); weights include |phi'(w)|^2 and the Jacobian but not the
/// |w|^{-2s} factor, which callers form from `w`.
struct ExteriorRule {
  std::vector<cplx> w;        // preimages
  std::vector<cplx> z;        // phi(w)
  std::vector<double> weight; // dA(z) weight
};
ExteriorRule exterior_rule(const ExteriorMap& map, int n_angular, int n_radial);

/// Disk region {|z - center| < radius}: trapezoid in angle, Gauss in radius.
AreaRule disk_region_rule(cplx center, double radius, int n_angular, int n_radial);

}  // namespace ptens
