#include "ptens/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ptens/errors.hpp"

namespace ptens {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<cplx> strip_trailing_zeros(std::vector<cplx> c) {
  while (!c.empty() && c.back() == cplx(0.0, 0.0)) c.pop_back();
  return c;
}

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool segments_cross(cplx p1, cplx p2, cplx q1, cplx q2) {
  const double d1 = cross(p2 - p1, q1 - p1);
  const double d2 = cross(p2 - p1, q2 - p1);
  const double d3 = cross(q2 - q1, p1 - q1);
  const double d4 = cross(q2 - q1, p2 - q1);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 &&
         d4 != 0;
}

std::vector<cplx> curve_at_radius(const ExteriorMap& map, double r, int n) {
  std::vector<cplx> pts(n);
  for (int i = 0; i < n; ++i) pts[i] = map.eval(std::polar(r, kTwoPi * i / n));
  return pts;
}

bool polygon_is_simple(const std::vector<cplx>& pts) {
  const int n = static_cast<int>(pts.size());
  for (int i = 0; i < n; ++i) {
    const cplx a = pts[i], b = pts[(i + 1) % n];
    for (int j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent through the wrap
      if (segments_cross(a, b, pts[j], pts[(j + 1) % n])) return false;
    }
  }
  return true;
}

double signed_area(const std::vector<cplx>& pts) {
  double a = 0.0;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) a += cross(pts[i], pts[(i + 1) % n]);
  return 0.5 * a;
}

// Largest modulus among the zeros of phi'(w), i.e. of
// cap*w^{m+1} - sum_k k c_k w^{m-k}.
double critical_radius(double cap, const std::vector<cplx>& c) {
  const int m = static_cast<int>(c.size()) - 1;
  if (m < 1) return 0.0;
  const int deg = m + 1;
  // Monic coefficients a_0..a_{deg-1} of w^deg + sum a_i w^i.
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(deg);
  for (int k = 1; k <= m; ++k) a(m - k) = -static_cast<double>(k) * c[k] / cap;
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -a(i);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, false);
  double rmax = 0.0;
  for (int i = 0; i < deg; ++i) rmax = std::max(rmax, std::abs(es.eigenvalues()(i)));
  return rmax;
}

struct NewtonOutcome {
  bool converged = false;
  cplx w;
  double residual = 0.0;
};

NewtonOutcome newton_inverse(const ExteriorMap& map, cplx z, cplx w, int max_iter, bool project) {
  const double scale = 1.0 + std::abs(z);
  double res = std::abs(map.eval(w) - z);
  for (int it = 0; it < max_iter; ++it) {
    if (res <= 1e-14 * scale) return {true, w, res};
    const cplx fp = map.eval_prime(w);
    if (fp == cplx(0.0, 0.0) || !std::isfinite(std::abs(fp))) break;
    const cplx step = (map.eval(w) - z) / fp;
    double lambda = 1.0;
    cplx trial;
    double trial_res = 0.0;
    for (int h = 0; h < 12; ++h) {
      trial = w - lambda * step;
      if (project && std::abs(trial) < 1.0) trial /= std::abs(trial);
      trial_res = std::abs(map.eval(trial) - z);
      if (trial_res < res || !std::isfinite(res)) break;
      lambda *= 0.5;
    }
    w = trial;
    const bool stalled = std::abs(lambda * step) <= 4e-16 * (1.0 + std::abs(w));
    res = trial_res;
    if (stalled) break;
  }
  return {res <= 1e-12 * scale, w, res};
}

}  // namespace

ExteriorMap::ExteriorMap(double cap, std::vector<cplx> coeffs)
    : cap_(cap), coeffs_(strip_trailing_zeros(std::move(coeffs))) {
  if (!(cap_ > 0.0) || !std::isfinite(cap_)) {
    throw InvalidArgument("exterior map: capacity must be positive and finite");
  }
  for (const cplx& c : coeffs_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw InvalidArgument("exterior map: non-finite Laurent coefficient");
    }
  }
  const int m = degree();
  if (m <= 1) {
    // cap*w + c0 + c1/w is univalent on |w| > sqrt(|c1|/cap).
    const double c1 = m == 1 ? std::abs(coeffs_[1]) : 0.0;
    if (c1 >= cap_) throw InvalidArgument("exterior map: |c1| >= cap, boundary degenerates");
    univalence_radius_ = std::sqrt(c1 / cap_);
    return;
  }

  double sum_kc = 0.0;
  for (int k = 1; k <= m; ++k) sum_kc += k * std::abs(coeffs_[k]);
  // Beyond r_check, |sum k c_k w^{-k-1}| < cap, so phi' cannot vanish there.
  const double r_check = std::max(2.0, sum_kc / cap_ + 1.0);
  for (int ir = 0; ir < 8; ++ir) {
    const double r = 1.0 + (r_check - 1.0) * ir / 7.0;
    for (int it = 0; it < 64; ++it) {
      const cplx w = std::polar(r, kTwoPi * it / 64);
      if (std::abs(eval_prime(w)) < 1e-12 * cap_) {
        throw InvalidArgument("exterior map: phi' vanishes on |w| >= 1");
      }
    }
  }
  const double rc = critical_radius(cap_, coeffs_);
  if (rc >= 1.0) throw InvalidArgument("exterior map: phi' has a zero in |w| >= 1");

  constexpr int kCurvePts = 512;
  const auto boundary = curve_at_radius(*this, 1.0, kCurvePts);
  if (!polygon_is_simple(boundary)) {
    throw InvalidArgument("exterior map: boundary curve self-intersects");
  }
  if (signed_area(boundary) <= 0.0) {
    throw InvalidArgument("exterior map: boundary curve is not positively oriented");
  }

  // Scan downwards from |w| = 1 for the first radius where level curves stop
  // being simple; critical points bound the scan from below.
  double rho = rc;
  constexpr int kSteps = 32;
  for (int i = 1; i <= kSteps; ++i) {
    const double r = 1.0 - (1.0 - rc) * i / kSteps;
    if (r <= rc) break;
    if (!polygon_is_simple(curve_at_radius(*this, r, kCurvePts))) {
      rho = 1.0 - (1.0 - rc) * (i - 1) / kSteps;
      break;
    }
  }
  univalence_radius_ = rho;
}

ExteriorMap ExteriorMap::ellipse(double q) {
  if (!(q >= 0.0 && q < 1.0)) throw InvalidArgument("ellipse: q must lie in [0, 1)");
  return ExteriorMap(1.0, {cplx(0.0), cplx(q)});
}

cplx ExteriorMap::eval(cplx w) const noexcept {
  cplx acc = cap_ * w;
  if (coeffs_.empty()) return acc;
  const cplx inv = 1.0 / w;
  // Horner in 1/w for c_0 + c_1/w + ... + c_m/w^m.
  cplx tail(0.0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) tail = tail * inv + *it;
  return acc + tail;
}

cplx ExteriorMap::eval_prime(cplx w) const noexcept {
  cplx acc = cap_;
  const int m = degree();
  if (m < 1) return acc;
  const cplx inv = 1.0 / w;
  // sum_{k=1}^m k c_k w^{-k-1}
  cplx tail(0.0);
  for (int k = m; k >= 1; --k) tail = tail * inv + static_cast<double>(k) * coeffs_[k];
  return acc - tail * inv * inv;
}

cplx phi_eval(const ExteriorMap& map, cplx w) {
  if (std::abs(w) < 1.0 - 1e-12) throw InvalidArgument("phi_eval: |w| < 1");
  return map.eval(w);
}

cplx phi_prime_eval(const ExteriorMap& map, cplx w) {
  if (std::abs(w) < 1.0 - 1e-12) throw InvalidArgument("phi_prime_eval: |w| < 1");
  return map.eval_prime(w);
}

int winding_number(const ExteriorMap& map, cplx z, int samples) {
  double total = 0.0;
  cplx prev = map.boundary_point(0.0) - z;
  for (int i = 1; i <= samples; ++i) {
    const cplx cur = map.boundary_point(kTwoPi * i / samples) - z;
    total += std::arg(cur / prev);
    prev = cur;
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

std::optional<cplx> big_phi_eval(const ExteriorMap& map, cplx z, InverseOptions opts) {
  const cplx c0 = map.laurent_coeffs().empty() ? cplx(0.0) : map.laurent_coeffs()[0];
  cplx w0 = (z - c0) / map.cap();
  if (std::abs(w0) < 1e-3) w0 = cplx(1e-3, 1e-3);

  const double rho = map.univalence_radius();
  const NewtonOutcome first = newton_inverse(map, z, w0, opts.max_iter, false);
  if (first.converged && std::abs(first.w) > rho + 1e-6) {
    if (std::abs(first.w) >= 1.0 - kInsideTol) return first.w;
    return std::nullopt;  // preimage in the univalent annulus below T: z is in D
  }
  if (winding_number(map, z) != 0) return std::nullopt;

  // Exterior point whose plain Newton run went astray: restart on the
  // closed exterior of the unit circle.
  const double base = std::max(1.0, std::abs(w0));
  NewtonOutcome last = first;
  for (double scale : {1.0, 1.5, 3.0}) {
    for (int k = 0; k < 16; ++k) {
      const cplx start = std::polar(base * scale, kTwoPi * k / 16);
      last = newton_inverse(map, z, start, opts.max_iter, true);
      if (last.converged && std::abs(last.w) >= 1.0 - kInsideTol) return last.w;
    }
  }
  throw NonConvergence("big_phi_eval: Newton inversion failed for exterior point",
                       std::abs(last.w), last.residual);
}

cplx big_phi_prime(const ExteriorMap& map, cplx w_of_z) { return 1.0 / map.eval_prime(w_of_z); }

double equilibrium_potential(const ExteriorMap& map, cplx z) {
  const auto w = big_phi_eval(map, z);
  if (!w) return 1.0;
  const double r = std::abs(*w);
  return r > 1.0 + kInsideTol ? r : 1.0;
}

double potential_weight_sqrt(const ExteriorMap& map, cplx z, double s) {
  const double p = equilibrium_potential(map, z);
  if (std::isinf(s)) return p == 1.0 ? 1.0 : 0.0;
  return std::pow(p, -s);
}

// ---------------------------------------------------------------------------
// Text forms

DomainSpec DomainSpec::ellipse(double q) {
  if (!(q >= 0.0 && q < 1.0)) throw InvalidArgument("ellipse: q must lie in [0, 1)");
  DomainSpec d;
  d.kind = Kind::ellipse;
  d.q = q;
  return d;
}

DomainSpec DomainSpec::custom(double cap, std::vector<cplx> coeffs) {
  DomainSpec d;
  d.kind = Kind::custom;
  d.cap = cap;
  d.coeffs = std::move(coeffs);
  return d;
}

ExteriorMap DomainSpec::to_map() const {
  switch (kind) {
    case Kind::disk: return ExteriorMap::disk();
    case Kind::ellipse: return ExteriorMap::ellipse(q);
    case Kind::custom: return ExteriorMap(cap, coeffs);
  }
  throw InvalidArgument("domain: unknown kind");
}

std::string DomainSpec::to_text() const {
  switch (kind) {
    case Kind::disk: return "kind=disk";
    case Kind::ellipse: return "kind=ellipse q=" + format_double(q);
    case Kind::custom: {
      std::string out = "kind=custom cap=" + format_double(cap) + " coeffs=[";
      for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (i) out += ',';
        out += format_complex(coeffs[i]);
      }
      return out + "]";
    }
  }
  return {};
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& text, const char* what) {
  const std::string t = trim(text);
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &pos);
  } catch (const std::exception&) {
    throw InvalidArgument(std::string("cannot parse ") + what + ": '" + text + "'");
  }
  if (pos != t.size()) throw InvalidArgument(std::string("trailing characters in ") + what + ": '" + text + "'");
  return v;
}

}  // namespace

DomainSpec parse_domain(const std::string& text) {
  // Split on whitespace outside brackets.
  std::vector<std::string> tokens;
  std::string cur;
  int depth = 0;
  for (char ch : text) {
    if (ch == '[') ++depth;
    if (ch == ']') --depth;
    if ((ch == ' ' || ch == '\t') && depth == 0) {
      if (!cur.empty()) tokens.push_back(cur);
      cur.clear();
    } else if (ch != ' ' && ch != '\t') {
      cur += ch;
    }
  }
  if (!cur.empty()) tokens.push_back(cur);

  std::string kind;
  std::optional<double> q, cap;
  std::optional<std::vector<cplx>> coeffs;
  for (const auto& tok : tokens) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw InvalidArgument("domain: expected key=value, got '" + tok + "'");
    const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "kind") {
      kind = val;
    } else if (key == "q") {
      q = parse_real(val, "q");
    } else if (key == "cap") {
      cap = parse_real(val, "cap");
    } else if (key == "coeffs") {
      if (val.size() < 2 || val.front() != '[' || val.back() != ']') {
        throw InvalidArgument("domain: coeffs must be a bracketed list");
      }
      std::vector<cplx> list;
      std::stringstream ss(val.substr(1, val.size() - 2));
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (!trim(item).empty()) list.push_back(parse_complex(item));
      }
      coeffs = std::move(list);
    } else {
      throw InvalidArgument("domain: unknown key '" + key + "'");
    }
  }

  if (kind == "disk") return DomainSpec::disk();
  if (kind == "ellipse") {
    if (!q) throw InvalidArgument("domain: ellipse needs q");
    return DomainSpec::ellipse(*q);
  }
  if (kind == "custom") {
    if (!cap) throw InvalidArgument("domain: custom needs cap");
    DomainSpec d = DomainSpec::custom(*cap, coeffs.value_or(std::vector<cplx>{}));
    (void)d.to_map();  // validate eagerly
    return d;
  }
  throw InvalidArgument("domain: unknown or missing kind '" + kind + "'");
}

cplx parse_complex(const std::string& text) {
  std::string s = trim(text);
  if (s.empty()) throw InvalidArgument("empty complex literal");
  if (s.back() != 'i' && s.back() != 'j') return {parse_real(s, "complex literal"), 0.0};
  s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t p = s.size(); p-- > 1;) {
    if ((s[p] == '+' || s[p] == '-') && s[p - 1] != 'e' && s[p - 1] != 'E') {
      split = p;
      break;
    }
  }
  std::string re = "0", im = s;
  if (split != std::string::npos) {
    re = s.substr(0, split);
    im = s.substr(split);
  }
  double imag = 0.0;
  if (im.empty() || im == "+") {
    imag = 1.0;
  } else if (im == "-") {
    imag = -1.0;
  } else {
    imag = parse_real(im, "complex literal");
  }
  return {parse_real(re, "complex literal"), imag};
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

std::string format_complex(cplx z) {
  std::string im = format_double(z.imag());
  if (im.front() != '-') im = "+" + im;
  return format_double(z.real()) + im + "i";
}

}  // namespace ptens
