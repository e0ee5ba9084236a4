#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "oracles.hpp"
#include "ptens/errors.hpp"
#include "ptens/moments.hpp"

using namespace ptens;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

ExteriorMap custom_map() { return ExteriorMap(1.0, {0.0, 0.2, cplx(0.0, 0.1)}); }

// eps_{k,j} from a direct w-plane quadrature of
// -((k+1)/pi)(1-(k+1)/s) int_O E_j conj(E_k) (1 - |Phi|^{-2s}) dA.
// E_j(phi(w)) = F_j(phi(w)) - w^j / phi'(w) only has negative powers of w; its
// Laurent coefficients come from a DFT on |w| = 1, which keeps the evaluation
// at large |w| free of cancellation.
Eigen::MatrixXcd epsilon_by_quadrature(const FaberBasis& basis, int n, double s) {
  const auto& map = basis.map();
  const int nt = 256, modes = 96;
  std::vector<std::vector<cplx>> laurent(n + 1, std::vector<cplx>(modes + 1));
  for (int t = 0; t < nt; ++t) {
    const cplx w = std::polar(1.0, 2.0 * oracle::pi * t / nt);
    const auto f = basis.values(map.eval(w), n + 1);
    const cplx dphi = map.eval_prime(w);
    for (int j = 0; j <= n; ++j) {
      const cplx e = f[j] - std::pow(w, j) / dphi;
      for (int m = 1; m <= modes; ++m) laurent[j][m] += e * std::pow(w, m) / double(nt);
    }
  }
  const auto radial = oracle::gauss(80, 0.0, 1.0);
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  for (std::size_t i = 0; i < radial.x.size(); ++i) {
    const double x = radial.x[i], r = 1.0 / x;
    const double jac = radial.w[i] * r / (x * x) * (2.0 * oracle::pi / nt);
    const double damp = 1.0 - std::pow(r, -2.0 * s);
    for (int t = 0; t < nt; ++t) {
      const cplx w = std::polar(r, 2.0 * oracle::pi * t / nt);
      const cplx dphi = map.eval_prime(w);
      std::vector<cplx> e(n + 1);
      for (int j = 0; j <= n; ++j) {
        for (int m = modes; m >= 1; --m) e[j] = (e[j] + laurent[j][m]) / w;
      }
      const double weight = jac * std::norm(dphi) * damp;
      for (int k = 0; k <= n; ++k) {
        for (int j = 0; j <= n; ++j) acc(k, j) += weight * e[j] * std::conj(e[k]);
      }
    }
  }
  for (int k = 0; k <= n; ++k) acc.row(k) *= -(k + 1.0) / oracle::pi * (1.0 - (k + 1.0) / s);
  return acc;
}

}  // namespace

TEST_CASE("disk moments are diagonal with the closed-form values") {
  const FaberBasis basis(ExteriorMap::disk(), 8);
  for (double s : {10.0, 12.5, kInf}) {
    const auto t = moments(basis, 8, s);
    for (int k = 0; k <= 8; ++k) {
      for (int j = 0; j <= 8; ++j) {
        const double expect =
            j != k ? 0.0 : oracle::pi / (k + 1.0) + (std::isinf(s) ? 0.0 : oracle::pi / (s - k - 1.0));
        CHECK(std::abs(t.entries(k, j) - expect) < 1e-13);
      }
    }
  }
}

TEST_CASE("ellipse moments match the exact table") {
  for (double q : {0.25, 0.5, 0.8}) {
    const FaberBasis basis(ExteriorMap::ellipse(q), 15);
    for (double s : {17.0, 30.0, kInf}) {
      const auto t = moments(basis, 15, s);
      const auto ref = closed_form_moments(DomainSpec::ellipse(q), 15, s);
      CHECK((t.entries - ref.entries).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((t.interior_part - ref.interior_part).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  CHECK_THROWS_AS(closed_form_moments(DomainSpec::custom(1.0, {0.0, 0.2}), 3, 10.0), NotCovered);
}

TEST_CASE("moment tables are Hermitian positive definite") {
  const FaberBasis basis(custom_map(), 12);
  for (double s : {14.0, 25.5, kInf}) {
    const auto t = moments(basis, 12, s);
    CHECK((t.entries - t.entries.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(t.entries).eigenvalues();
    CHECK(ev.minCoeff() > 0.0);
  }
}

TEST_CASE("node doubling leaves the table unchanged") {
  const FaberBasis basis(custom_map(), 10);
  MomentOptions opts;
  opts.check_refinement = false;
  const auto coarse = moments(basis, 10, 20.0, opts);
  opts.angular_nodes = 2 * coarse.angular_nodes;
  const auto fine = moments(basis, 10, 20.0, opts);
  CHECK(fine.angular_nodes == 2 * coarse.angular_nodes);
  CHECK((fine.entries - coarse.entries).cwiseAbs().maxCoeff() <= 1e-11);
  const auto checked = moments(basis, 10, 20.0);
  CHECK(checked.refinement_change <= 1e-11);
}

TEST_CASE("interior Gram matrix agrees between the two boundary routes") {
  const FaberBasis basis(custom_map(), 10);
  const int nodes = 2 * required_angular_nodes(basis.map(), 10);
  const auto a = interior_gram(basis, 10, nodes);
  const auto b = interior_gram_via_remainders(basis, 10, nodes);
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(remainder_modes(basis, 10, nodes).leakage < 1e-13);
}

TEST_CASE("epsilon examples for the ellipse") {
  const double q = 0.5;
  const FaberBasis basis(ExteriorMap::ellipse(q), 6);
  const auto eps3 = epsilon_table(moments(basis, 1, 3.0));
  CHECK(eps3.entries(0, 0).real() == doctest::Approx(-0.125).epsilon(1e-12));
  const double s = 11.0;
  const auto eps = epsilon_table(moments(basis, 6, s));
  for (int n = 0; n <= 6; ++n) {
    const double expect = -std::pow(q, 2 * n + 2) * (s - n - 1.0) / (s + n + 1.0);
    CHECK(std::abs(eps.entries(n, n) - expect) < 1e-13);
    for (int j = 0; j <= 6; ++j) {
      if (j != n) CHECK(std::abs(eps.entries(n, j)) < 1e-13);
    }
  }
}

TEST_CASE("epsilon equals minus the weighted remainder energy") {
  const FaberBasis basis(ExteriorMap::ellipse(0.5), 6);
  const double s = 10.0;
  const auto eps = epsilon_table(moments(basis, 6, s));
  const auto direct = epsilon_by_quadrature(basis, 6, s);
  CHECK((eps.entries - direct).cwiseAbs().maxCoeff() < 1e-8);

  const FaberBasis cb(custom_map(), 5);
  const auto eps_c = epsilon_table(moments(cb, 5, 12.0));
  CHECK((eps_c.entries - epsilon_by_quadrature(cb, 5, 12.0)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("diagonal epsilons decay geometrically") {
  const double q = 0.5;
  const FaberBasis basis(ExteriorMap::ellipse(q), 16);
  const auto eps = epsilon_table(moments(basis, 16, kInf));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (int n = 1; n <= 16; ++n) {
    const double y = std::log(std::abs(eps.entries(n, n)));
    sx += n;
    sy += y;
    sxx += double(n) * n;
    sxy += n * y;
    ++m;
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  CHECK(slope <= 2.0 * std::log(q) + 0.1);
}

TEST_CASE("s must leave room for the exterior integrals") {
  const FaberBasis basis(ExteriorMap::disk(), 8);
  CHECK_THROWS_AS(moments(basis, 8, 9.5), InvalidArgument);
  CHECK_NOTHROW(moments(basis, 8, 10.0));
  CHECK_THROWS_AS(moments(basis, 9, 20.0), InvalidArgument);
}

TEST_CASE("CSV export is deterministic") {
  const FaberBasis basis(custom_map(), 3);
  const auto t = moments(basis, 3, 9.0);
  std::ostringstream a, b;
  write_csv(t, a);
  write_csv(moments(basis, 3, 9.0), b);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("row,col,re,im\n", 0) == 0);
  CHECK(std::ranges::count(a.str(), '\n') == 17);
}

TEST_CASE("binary cache stores and reloads tables") {
  const auto dir = std::filesystem::temp_directory_path() / "ptens_cache_test";
  std::filesystem::remove_all(dir);
  const MomentCache cache(dir);
  const auto map = custom_map();
  const FaberBasis basis(map, 6);
  const auto t = moments(basis, 6, 15.0);
  CHECK_FALSE(cache.load(map, 6, 15.0, t.angular_nodes).has_value());
  cache.store(map, t);
  const auto back = cache.load(map, 6, 15.0, t.angular_nodes);
  REQUIRE(back.has_value());
  CHECK(back->entries == t.entries);
  CHECK(back->exterior_part == t.exterior_part);
  CHECK(back->refinement_change == t.refinement_change);
  CHECK_FALSE(cache.load(map, 6, 16.0, t.angular_nodes).has_value());
  CHECK_FALSE(cache.load(ExteriorMap::ellipse(0.2), 6, 15.0, t.angular_nodes).has_value());
  std::filesystem::remove_all(dir);
}
