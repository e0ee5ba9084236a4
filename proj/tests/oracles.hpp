#pragma once

// Independent reference computations used by the tests.  Nothing here calls
// into the library's quadrature or recurrence code.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

struct Rule {
  std::vector<double> x, w;
};

/// Gauss-Legendre on [a, b] from the Jacobi matrix eigenproblem (Golub-Welsch).
inline Rule gauss(int n, double a, double b) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double beta = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = J(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Rule r;
  for (int i = 0; i < n; ++i) {
    const double v = es.eigenvectors()(0, i);
    r.x.push_back(0.5 * (a + b) + 0.5 * (b - a) * es.eigenvalues()(i));
    r.w.push_back((b - a) * v * v);
  }
  return r;
}

/// U_0 = 1, U_1 = z, U_{k+1} = z U_k - q U_{k-1}.
inline cplx chebyshev_u(int n, double q, cplx z) {
  if (n == 0) return 1.0;
  cplx prev = 1.0, cur = z;
  for (int k = 1; k < n; ++k) {
    const cplx next = z * cur - q * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Leading factor of pi_n for the ellipse w + q/w (q = 0: disk).
inline double ellipse_kappa(int n, double q, double s) {
  const double np1 = n + 1.0;
  const double ratio = std::isinf(s) ? 1.0 : (s - np1) / (s + np1);
  const double base = std::isinf(s) ? np1 / pi : np1 / pi * (1.0 - np1 / s);
  return std::sqrt(base / (1.0 - std::pow(q, 2 * n + 2) * ratio));
}

/// Monomial coefficients of U_n.
inline std::vector<double> chebyshev_u_coeffs(int n, double q) {
  std::vector<double> prev{1.0}, cur{0.0, 1.0};
  if (n == 0) return prev;
  for (int k = 1; k < n; ++k) {
    std::vector<double> next(k + 2, 0.0);
    for (int i = 0; i <= k; ++i) next[i + 1] += cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= q * prev[i];
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Disk ensemble kernel K_{N,s}(z, u) from the closed form sum.
inline cplx disk_kernel(int N, double s, cplx z, cplx u) {
  cplx acc = 0.0;
  for (int n = 0; n < N; ++n) {
    const double c2 = std::isinf(s) ? (n + 1.0) / pi : (n + 1.0) / pi * (1.0 - (n + 1.0) / s);
    acc += c2 * std::pow(z * std::conj(u), n);
  }
  return acc;
}

/// 2 int_0^1 x e^{tau x} dx and 6 int_0^1 (x - x^2) e^{tau x} dx by Gauss quadrature.
inline cplx h0_integral(cplx tau) {
  const auto r = gauss(40, 0.0, 1.0);
  cplx acc = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) acc += r.w[i] * r.x[i] * std::exp(tau * r.x[i]);
  return 2.0 * acc;
}

inline cplx h1_integral(cplx tau) {
  const auto r = gauss(40, 0.0, 1.0);
  cplx acc = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    acc += r.w[i] * (r.x[i] - r.x[i] * r.x[i]) * std::exp(tau * r.x[i]);
  }
  return 6.0 * acc;
}

}  // namespace oracle
