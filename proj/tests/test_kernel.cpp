#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "ptens/errors.hpp"
#include "ptens/kernel.hpp"

using namespace ptens;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

ExteriorMap custom_map() { return ExteriorMap(1.0, {0.0, 0.2, cplx(0.0, 0.1)}); }

}  // namespace

TEST_CASE("finite kernels on the disk") {
  const auto p = build_orthopolys(ExteriorMap::disk(), 0, 2.0);
  CHECK(kernel_sum(p, 1, 0.0, 0.0).value.real() == doctest::Approx(1.0 / (2.0 * oracle::pi)));
  const auto c = build_orthopolys(ExteriorMap::disk(), 2, kInf);
  CHECK(std::abs(kernel_sum(c, 3, 0.5, 0.2).value - 1.23 / oracle::pi) < 1e-14);
  const auto p3 = build_orthopolys(ExteriorMap::disk(), 0, 3.0);
  CHECK(std::abs(weighted_kernel(p3, 1, 2.0, 0.0).value - 1.0 / (12.0 * oracle::pi)) < 1e-14);
  CHECK(weighted_kernel(c, 3, 2.0, 0.1).value == cplx(0.0));
  const auto e = kernel_sum(c, 3, 0.5, 0.2);
  CHECK(e.N == 3);
  CHECK_FALSE(e.weighted);
}

TEST_CASE("kernel range checks") {
  const auto p = build_orthopolys(ExteriorMap::disk(), 9, 11.0);
  CHECK_NOTHROW(kernel_sum(p, 10, 0.1, 0.2));
  CHECK_THROWS_AS(build_orthopolys(ExteriorMap::disk(), 9, 10.5), InvalidArgument);
  const auto q = build_orthopolys(ExteriorMap::disk(), 9, 12.5);
  CHECK_NOTHROW(kernel_sum(q, 10, 0.1, 0.2));
  CHECK_THROWS_AS(kernel_sum(p, 11, 0.1, 0.2), InvalidArgument);
  CHECK_THROWS_AS(kernel_sum(p, 0, 0.1, 0.2), InvalidArgument);
}

TEST_CASE("weighted and plain kernels agree inside K") {
  const auto polys = build_orthopolys(custom_map(), 8, 15.0);
  for (const cplx z : {cplx(0.0), cplx(0.3, 0.2), cplx(-0.5, 0.1)}) {
    const cplx u(0.1, -0.4);
    CHECK(std::abs(weighted_kernel(polys, 9, z, u).value - kernel_sum(polys, 9, z, u).value) < 1e-14);
    CHECK(kernel_sum(polys, 9, z, z).value.real() >= std::norm(polys.values(z, 1)[0]));
  }
}

TEST_CASE("kernel matrices are Hermitian and positive semidefinite") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const auto& map : {ExteriorMap::disk(), ExteriorMap::ellipse(0.4), custom_map()}) {
    for (double s : {12.0, kInf}) {
      const auto polys = build_orthopolys(map, 9, s);
      std::vector<cplx> pts(14);
      for (auto& p : pts) p = cplx(u(rng), u(rng));
      Eigen::MatrixXcd K(14, 14);
      for (int i = 0; i < 14; ++i) {
        for (int j = 0; j < 14; ++j) K(i, j) = weighted_kernel(polys, 10, pts[i], pts[j]).value;
      }
      CHECK((K - K.adjoint()).cwiseAbs().maxCoeff() < 1e-12 * (1.0 + K.cwiseAbs().maxCoeff()));
      const Eigen::MatrixXcd H = 0.5 * (K + K.adjoint());
      const double trace = H.trace().real();
      CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(H).eigenvalues().minCoeff() >= -1e-10 * trace);
    }
  }
}

TEST_CASE("diagonal grows with N") {
  const auto polys = build_orthopolys(ExteriorMap::ellipse(0.3), 19, 25.0);
  for (const cplx z : {cplx(0.2, 0.1), cplx(1.3, 0.0), cplx(0.0, 1.5)}) {
    double prev = 0.0;
    for (int N = 1; N <= 20; ++N) {
      const double k = kernel_sum(polys, N, z, z).value.real();
      CHECK(k >= prev);
      prev = k;
    }
  }
}

TEST_CASE("boundary formulas") {
  const auto disk = ExteriorMap::disk();
  CHECK(kernel_asymptotic_diagonal(disk, 10, 20.0, std::polar(1.0, 0.3)) ==
        doctest::Approx(35.75 / oracle::pi).epsilon(1e-13));
  // exact on the disk, both off-diagonal branches
  for (double s : {21.0, 30.0, kInf}) {
    const auto polys = build_orthopolys(disk, 19, s);
    const cplx z = std::polar(1.0, 0.4);
    for (const cplx u : {std::polar(1.01, 0.41), std::polar(1.2, -1.0), std::polar(1.0, 2.0), z}) {
      const cplx exact = kernel_sum(polys, 20, z, u).value;
      CHECK(std::abs(kernel_asymptotic(disk, 20, s, z, u) - exact) < 1e-11 * std::abs(exact));
    }
    CHECK(kernel_asymptotic_diagonal(disk, 20, s, z) ==
          doctest::Approx(kernel_sum(polys, 20, z, z).value.real()).epsilon(1e-12));
  }
  // closed form versus direct sum away from the removable point
  const cplx x = std::polar(1.0, 0.0), y = std::polar(1.0, 0.8);
  cplx direct = 0.0;
  for (int n = 0; n < 30; ++n) direct += ((n + 1.0) - (n + 1.0) * (n + 1.0) / 45.0) * std::pow(x * std::conj(y), n);
  CHECK(std::abs(kernel_asymptotic_w(30, 45.0, x, y, 1.0, 1.0) - direct / oracle::pi) < 1e-11 * std::abs(direct));
  CHECK_THROWS_AS(kernel_asymptotic(disk, 5, 20.0, 0.1, 1.0), InvalidArgument);
}

TEST_CASE("leading diagonal behaviour on the boundary") {
  const int N = 400;
  for (double ell : {0.5, 1.0}) {
    const double s = ell == 1.0 ? N + 1.0 : N / ell;
    const double k = kernel_asymptotic_diagonal(ExteriorMap::disk(), N, s, 1.0);
    CHECK(k / (double(N) * N) == doctest::Approx((3.0 - 2.0 * ell) / (6.0 * oracle::pi)).epsilon(0.01));
  }
  // ellipse boundary point: |Phi'|^2 scales the diagonal
  const auto ell = ExteriorMap::ellipse(0.4);
  const double d = std::norm(1.0 / ell.eval_prime(std::polar(1.0, 0.9)));
  CHECK(kernel_asymptotic_diagonal(ell, 100, kInf, ell.boundary_point(0.9)) ==
        doctest::Approx(d / oracle::pi * 5050.0).epsilon(1e-9));
}

TEST_CASE("Bergman kernel") {
  CHECK(bergman_kernel(ExteriorMap::disk(), 0.0, 0.0).value.real() == doctest::Approx(1.0 / oracle::pi));
  CHECK(bergman_kernel(ExteriorMap::disk(), 0.5, 0.5).value.real() == doctest::Approx(16.0 / (9.0 * oracle::pi)));
  // ellipse: sum over even n of (n+1)/(pi(1-q^{2n+2})) q^n at the origin
  const double q = 0.3;
  double ref = 0.0;
  for (int k = 0; k < 200; ++k) ref += (2.0 * k + 1.0) / (oracle::pi * (1.0 - std::pow(q, 4 * k + 2))) * std::pow(q, 2 * k);
  const auto b = bergman_kernel(ExteriorMap::ellipse(q), 0.0, 0.0);
  CHECK(std::abs(b.value - ref) < 1e-8);
  CHECK(b.terms >= 32);
  CHECK_THROWS_AS(bergman_kernel(ExteriorMap::disk(), 2.0, 0.0), InvalidArgument);
}

TEST_CASE("Christoffel chain on the disk") {
  const int N = 8;
  const auto finite = build_orthopolys(ExteriorMap::disk(), N - 1, 12.0);
  const auto carleman = build_orthopolys(ExteriorMap::disk(), N - 1, kInf);
  for (const cplx z : {cplx(0.0), cplx(0.5, 0.0), cplx(-0.3, 0.6), cplx(0.1, -0.9)}) {
    const double a = kernel_sum(finite, N, z, z).value.real();
    const double b = kernel_sum(carleman, N, z, z).value.real();
    const double c = bergman_kernel(ExteriorMap::disk(), z, z).value.real();
    // equality holds at the centre, so allow for rounding there
    CHECK(a <= b * (1.0 + 1e-14));
    CHECK(b <= c * (1.0 + 1e-14));
  }
}

TEST_CASE("Christoffel variational bound") {
  const FaberBasis basis(custom_map(), 7);
  const auto table = moments(basis, 7, 14.0);
  const auto polys = orthonormalize(basis, table);
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g;
  std::vector<Eigen::VectorXcd> trials;
  trials.push_back(polys.faber_coeffs().row(0).head(1).transpose());
  for (int t = 0; t < 25; ++t) {
    Eigen::VectorXcd v(1 + t % 8);
    for (int j = 0; j < v.size(); ++j) v(j) = cplx(g(rng), g(rng));
    trials.push_back(v);
  }
  for (const cplx z : {cplx(0.2, 0.1), cplx(1.2, 0.4), cplx(-1.5, -1.0)}) {
    const auto report = christoffel_check(polys, table, 8, z, trials);
    CHECK(report.holds);
    CHECK(report.trial_ratios[0] == doctest::Approx(std::norm(polys.values(z, 1)[0])).epsilon(1e-12));
    // the kernel itself attains the bound
    Eigen::VectorXcd kz = Eigen::VectorXcd::Zero(8);
    const auto pv = polys.values(z, 8);
    for (int n = 0; n < 8; ++n) kz += std::conj(pv[n]) * polys.faber_coeffs().row(n).transpose();
    const auto attained = christoffel_check(polys, table, 8, z, {kz});
    CHECK(attained.trial_ratios[0] == doctest::Approx(attained.kernel_diagonal).epsilon(1e-10));
  }
}

TEST_CASE("reproducing property") {
  Eigen::VectorXcd p(6);
  p << cplx(0.3, -0.1), 1.0, cplx(0.0, 0.5), -0.2, cplx(0.1, 0.1), 0.7;
  const auto ell = build_orthopolys(ExteriorMap::ellipse(0.3), 9, 20.0);
  for (const cplx z : {cplx(0.2, 0.3), cplx(1.5, -0.2), cplx(-2.0, 1.0)}) {
    CHECK(reproducing_check(ell, 10, p, z) <= 1e-8);
  }
  const auto disk = build_orthopolys(ExteriorMap::disk(), 9, 20.0);
  CHECK(reproducing_check(disk, 10, p, cplx(0.4, 0.4)) <= 1e-12);
  const auto cust = build_orthopolys(custom_map(), 9, kInf);
  CHECK(reproducing_check(cust, 10, p, cplx(0.1, -0.2)) <= 1e-8);
}

TEST_CASE("finite kernels approach the Bergman kernel on the disk") {
  const double kd = 16.0 / (9.0 * oracle::pi);
  double prev = 1.0;
  for (int N : {10, 20, 40, 80}) {
    const auto polys = build_orthopolys(ExteriorMap::disk(), N - 1, 2.0 * N);
    const double gap = std::abs(kd - kernel_sum(polys, N, 0.5, 0.5).value.real());
    CHECK(gap < prev);
    prev = gap;
  }
}

TEST_CASE("limit functions H_l") {
  for (double ell : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    CHECK(h_limit(ell, 0.0) == cplx(1.0));
    CHECK((3.0 - 3.0 * ell) / (3.0 - 2.0 * ell) + ell / (3.0 - 2.0 * ell) == 1.0);
  }
  CHECK(std::abs(h_limit(0.0, 1.0) - 2.0) < 1e-15);
  CHECK(std::abs(h_limit(1.0, 1.0) - 6.0 * (3.0 - std::exp(1.0))) < 1e-14);
  CHECK(std::abs(h_limit(1.0, 1.0) - 1.69031) < 1e-5);
  CHECK_THROWS_AS(h_limit(1.5, 0.0), InvalidArgument);
}

TEST_CASE("series and closed forms agree at the crossover radius") {
  for (int k = 0; k < 16; ++k) {
    const cplx tau = std::polar(kHSeriesRadius, 2.0 * oracle::pi * k / 16);
    CHECK(std::abs(h0_series(tau) - h0_direct(tau)) < 1e-12);
    CHECK(std::abs(h1_series(tau) - h1_direct(tau)) < 1e-12);
  }
}

TEST_CASE("H_l matches its integral representation") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int t = 0; t < 60; ++t) {
    const cplx tau = t < 10 ? cplx(1e-4 * u(rng), 1e-4 * u(rng)) : cplx(u(rng), u(rng));
    const cplx h0 = oracle::h0_integral(tau), h1 = oracle::h1_integral(tau);
    for (double ell : {0.0, 0.3, 0.5, 1.0}) {
      const cplx expect = ((3.0 - 3.0 * ell) * h0 + ell * h1) / (3.0 - 2.0 * ell);
      CHECK(std::abs(h_limit(ell, tau) - expect) < 1e-12 * std::max(1.0, std::abs(expect)));
    }
  }
}

TEST_CASE("tau and omega") {
  const auto disk = ExteriorMap::disk();
  CHECK(std::abs(tau_of(disk, cplx(0.3, 0.7), 0.0) - cplx(0.3, 0.7)) < 1e-15);
  CHECK(omega_of(disk, 1.0, 0.0, 1.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(omega_of(disk, cplx(-0.5, 2.0), 0.0, 0.5) == 1.0);
  CHECK(omega_of(disk, cplx(0.0, 2.0), 0.0, 0.5) == 1.0);
  CHECK(omega_of(disk, 0.1, 0.0, 0.0) == 0.0);
  // the argument of tau is the angle between a and the outward normal
  const auto ell = ExteriorMap::ellipse(0.5);
  const double theta = 0.7;
  const cplx w = std::polar(1.0, theta);
  const cplx normal = w * ell.eval_prime(w);
  const cplx t = tau_of(ell, normal / std::abs(normal), theta);
  CHECK(std::abs(t.imag()) < 1e-14);
  CHECK(t.real() > 0.0);
}

TEST_CASE("scaled ratios on the disk") {
  const int N = 200;
  const auto polys = build_orthopolys(ExteriorMap::disk(), N - 1, 400.0);
  const auto one = scaled_ratio(polys, N, 0.0, 0.0, 0.0);
  CHECK(std::abs(one.ratio - 1.0) < 1e-14);
  CHECK(std::abs(one.weighted_ratio - 1.0) < 1e-14);
  const auto r = scaled_ratio(polys, N, 0.0, 0.3, -0.1);
  CHECK(std::abs(r.ratio - h_limit(0.5, 0.2)) <= 0.02);
  CHECK(std::abs(scaling_predictor(ExteriorMap::disk(), 0.5, 0.0, 0.3, -0.1) - h_limit(0.5, 0.2)) < 1e-15);
}

TEST_CASE("weighted predictor with l = 0") {
  const auto disk = ExteriorMap::disk();
  CHECK(*weighted_scaling_predictor(disk, 0.0, 0.0, 0.5, -0.3) == cplx(0.0));
  CHECK(std::abs(*weighted_scaling_predictor(disk, 0.0, 0.0, -0.5, -0.3) - h_limit(0.0, -0.8)) < 1e-15);
  CHECK_FALSE(weighted_scaling_predictor(disk, 0.0, 0.0, cplx(0.0, 1.0), -0.3).has_value());
  const cplx p = *weighted_scaling_predictor(disk, 0.5, 0.0, 0.5, 0.0);
  CHECK(std::abs(p - std::exp(-1.0) * h_limit(0.5, 0.5)) < 1e-15);
}
