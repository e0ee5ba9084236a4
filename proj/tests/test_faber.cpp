#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "ptens/errors.hpp"
#include "ptens/faber.hpp"

using namespace ptens;

namespace {

std::vector<ExteriorMap> oracle_maps() {
  return {ExteriorMap::disk(), ExteriorMap::ellipse(0.25), ExteriorMap::ellipse(0.5),
          ExteriorMap(1.0, {0.0, 0.2, cplx(0.0, 0.1)})};
}

}  // namespace

TEST_CASE("recurrence coefficients agree with the contour-integral construction") {
  for (const auto& map : oracle_maps()) {
    const auto polys = faber_all(map, 12);
    for (int n = 0; n <= 12; ++n) {
      const auto ref = faber_oracle_coeffs(map, n);
      REQUIRE(ref.size() == polys[n].mono_coeffs.size());
      for (int k = 0; k <= n; ++k) {
        CHECK(std::abs(ref[k] - polys[n].mono_coeffs[k]) < 1e-10 * (1.0 + std::abs(ref[k])));
      }
    }
  }
}

TEST_CASE("ellipse Faber polynomials are Chebyshev polynomials of the second kind") {
  for (double q : {0.25, 0.5, 0.9}) {
    const auto polys = faber_all(ExteriorMap::ellipse(q), 15);
    for (int n = 0; n <= 15; ++n) {
      const auto u = oracle::chebyshev_u_coeffs(n, q);
      for (int k = 0; k <= n; ++k) CHECK(std::abs(polys[n].mono_coeffs[k] - u[k]) < 1e-12);
    }
  }
}

TEST_CASE("disk Faber polynomials are monomials") {
  const auto polys = faber_all(ExteriorMap::disk(), 6);
  for (int n = 0; n <= 6; ++n) {
    for (int k = 0; k <= n; ++k) CHECK(polys[n].mono_coeffs[k] == cplx(k == n ? 1.0 : 0.0));
  }
}

TEST_CASE("leading coefficient is cap^{-(n+1)}") {
  const ExteriorMap map(2.0, {cplx(0.5, -0.3), 0.4, cplx(0.0, 0.1)});
  const auto polys = faber_all(map, 10);
  for (int n = 0; n <= 10; ++n) {
    CHECK(std::abs(polys[n].mono_coeffs[n] - std::pow(2.0, -(n + 1))) < 1e-15);
  }
}

TEST_CASE("pointwise values match the monomial form and antiderivatives differentiate back") {
  const ExteriorMap map(1.0, {0.0, 0.2, cplx(0.0, 0.1)});
  const FaberBasis basis(map, 10);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int t = 0; t < 20; ++t) {
    const cplx z(u(rng), u(rng));
    const auto v = basis.values(z, 11);
    for (int n = 0; n <= 10; ++n) CHECK(std::abs(v[n] - horner(basis.polynomials()[n].mono_coeffs, z)) < 1e-11);
    const double h = 1e-5;
    const auto gp = basis.antiderivative_values(z + h, 11);
    const auto gm = basis.antiderivative_values(z - h, 11);
    for (int n = 0; n <= 10; ++n) CHECK(std::abs((gp[n] - gm[n]) / (2.0 * h) - v[n]) < 1e-6);
  }
  CHECK_THROWS_AS(basis.values(0.0, 12), InvalidArgument);
}

TEST_CASE("ellipse remainder has the closed form -q^{n+1} Phi^{-(n+2)} Phi'") {
  const double q = 0.5;
  const FaberBasis basis(ExteriorMap::ellipse(q), 12);
  for (const cplx w : {cplx(1.0, 0.0), std::polar(1.2, 0.4), std::polar(2.0, 2.5)}) {
    const cplx z = w + q / w;
    const cplx dphi = 1.0 / (1.0 - q / (w * w));
    for (int n = 0; n <= 12; ++n) {
      const auto r = remainder_eval(basis, n, z);
      const cplx expect = -std::pow(q, n + 1) * std::pow(w, -(n + 2)) * dphi;
      CHECK(std::abs(r.value - expect) < 1e-11);
      CHECK(std::abs(remainder_at_w(basis, n, w) - expect) < 1e-11);
    }
  }
}

TEST_CASE("remainders vanish to second order at infinity") {
  const FaberBasis basis(ExteriorMap(1.0, {0.0, 0.2, cplx(0.0, 0.1)}), 6);
  for (int n = 0; n <= 3; ++n) {
    const cplx e1 = remainder_eval(basis, n, cplx(10.0, 5.0)).value;
    const cplx e2 = remainder_eval(basis, n, cplx(40.0, 20.0)).value;
    // z^2 E_n(z) stays bounded, so the ratio is at most about 1/16
    CHECK(std::abs(e2) < 0.09 * std::abs(e1));
  }
  CHECK_THROWS_AS(remainder_eval(basis, 2, 0.1), InvalidArgument);
}
