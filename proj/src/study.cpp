#include "ptens/study.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "ptens/errors.hpp"

namespace ptens {

namespace {

std::string trim(const std::string& text) {
  const auto b = text.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = text.find_last_not_of(" \t\r\n");
  return text.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(trim(cur));
  return parts;
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  if (t == "inf" || t == "+inf" || t == "infinity") return std::numeric_limits<double>::infinity();
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw InvalidArgument("config: " + key + " expects a number, got '" + text + "'");
  }
  return v;
}

long long parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  long long v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw InvalidArgument("config: " + key + " expects an integer, got '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw InvalidArgument("config: " + key + " expects true or false, got '" + text + "'");
}

std::vector<cplx> parse_complex_list(const std::string& key, const std::string& text) {
  std::string t = trim(text);
  if (!t.empty() && t.front() == '[') {
    if (t.back() != ']') throw InvalidArgument("config: unbalanced brackets in " + key);
    t = t.substr(1, t.size() - 2);
  }
  std::vector<cplx> out;
  if (trim(t).empty()) return out;
  for (const auto& part : split(t, ',')) {
    try {
      out.push_back(parse_complex(part));
    } catch (const std::exception&) {
      throw InvalidArgument("config: " + key + " has a bad complex entry '" + part + "'");
    }
  }
  return out;
}

template <class T>
std::string join(const std::vector<T>& values, auto&& fmt) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += fmt(values[i]);
  }
  return out;
}

std::string domain_kind_name(DomainSpec::Kind k) {
  switch (k) {
    case DomainSpec::Kind::disk: return "disk";
    case DomainSpec::Kind::ellipse: return "ellipse";
    case DomainSpec::Kind::custom: return "custom";
  }
  return "disk";
}

}  // namespace

std::string srule_name(SRule rule) {
  switch (rule) {
    case SRule::fixed: return "fixed";
    case SRule::scaled: return "scaled";
    case SRule::shift: return "shift";
    case SRule::inf: return "inf";
  }
  return "fixed";
}

SRule parse_srule(const std::string& text) {
  const std::string t = trim(text);
  if (t == "fixed") return SRule::fixed;
  if (t == "scaled") return SRule::scaled;
  if (t == "shift") return SRule::shift;
  if (t == "inf") return SRule::inf;
  throw InvalidArgument("config: srule must be fixed, scaled, shift or inf, got '" + text + "'");
}

double StudyConfig::s_for(int n) const {
  switch (srule) {
    case SRule::fixed: return s;
    case SRule::scaled: return s * n;
    case SRule::shift: return n + s;
    case SRule::inf: return infinite_s();
  }
  return s;
}

double StudyConfig::ell_for(int n) const {
  switch (srule) {
    case SRule::inf: return 0.0;
    case SRule::scaled: return std::min(1.0, 1.0 / s);
    case SRule::shift: return 1.0;
    case SRule::fixed: return std::min(1.0, n / s);
  }
  return 0.0;
}

void apply_config_value(StudyConfig& cfg, const std::string& raw_key, const std::string& value) {
  std::string key = trim(raw_key);
  while (!key.empty() && key.front() == '-') key.erase(key.begin());
  for (auto& c : key) {
    if (c == '_') c = '-';
  }
  if (key == "domain") {
    const std::string v = trim(value);
    if (v == "disk") {
      cfg.domain.kind = DomainSpec::Kind::disk;
    } else if (v == "ellipse") {
      cfg.domain.kind = DomainSpec::Kind::ellipse;
    } else if (v == "custom") {
      cfg.domain.kind = DomainSpec::Kind::custom;
    } else if (v.find('=') != std::string::npos) {
      cfg.domain = parse_domain(v);
    } else {
      throw InvalidArgument("config: domain must be disk, ellipse or custom, got '" + value + "'");
    }
  } else if (key == "q") {
    cfg.domain.q = parse_double(key, value);
  } else if (key == "cap") {
    cfg.domain.cap = parse_double(key, value);
  } else if (key == "coeffs") {
    cfg.domain.coeffs = parse_complex_list(key, value);
  } else if (key == "nmax") {
    cfg.nmax = static_cast<int>(parse_int(key, value));
  } else if (key == "N") {
    cfg.N.clear();
    for (const auto& part : split(value, ',')) cfg.N.push_back(static_cast<int>(parse_int(key, part)));
  } else if (key == "srule") {
    cfg.srule = parse_srule(value);
  } else if (key == "s") {
    const double v = parse_double(key, value);
    if (std::isinf(v) && v > 0) {
      cfg.srule = SRule::inf;
    } else {
      cfg.s = v;
    }
  } else if (key == "ell") {
    cfg.ell.clear();
    if (!trim(value).empty()) {
      for (const auto& part : split(value, ',')) cfg.ell.push_back(parse_double(key, part));
    }
  } else if (key == "theta") {
    cfg.theta = parse_double(key, value);
  } else if (key == "a") {
    cfg.a = parse_complex_list(key, value);
  } else if (key == "b") {
    cfg.b = parse_complex_list(key, value);
  } else if (key == "seed") {
    const long long v = parse_int(key, value);
    if (v < 0) throw InvalidArgument("config: seed must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(v);
  } else if (key == "out") {
    cfg.out = trim(value);
  } else if (key == "nodes-angular") {
    cfg.nodes_angular = static_cast<int>(parse_int(key, value));
  } else if (key == "nodes-radial") {
    cfg.nodes_radial = static_cast<int>(parse_int(key, value));
  } else if (key == "tol") {
    cfg.tol = parse_double(key, value);
  } else if (key == "weighted") {
    cfg.weighted = parse_bool(key, value);
  } else if (key == "coefficients") {
    cfg.coefficients = parse_bool(key, value);
  } else if (key == "samples") {
    cfg.samples = static_cast<int>(parse_int(key, value));
  } else if (key == "bins") {
    cfg.bins = static_cast<int>(parse_int(key, value));
  } else if (key == "rmax") {
    cfg.rmax = parse_double(key, value);
  } else if (key == "center") {
    cfg.center = parse_complex(trim(value));
  } else if (key == "radius") {
    cfg.radius = parse_double(key, value);
  } else if (key == "levels") {
    cfg.levels.clear();
    for (const auto& part : split(value, ',')) cfg.levels.push_back(parse_double(key, part));
  } else if (key == "tmax") {
    cfg.tmax = parse_double(key, value);
  } else if (key == "steps") {
    cfg.steps = static_cast<int>(parse_int(key, value));
  } else {
    throw InvalidArgument("config: unknown key '" + raw_key + "'");
  }
}

StudyConfig parse_config(const std::string& text) {
  StudyConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument("config line " + std::to_string(lineno) + ": expected key=value");
    }
    apply_config_value(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

std::string serialize_config(const StudyConfig& cfg) {
  std::ostringstream out;
  out << "domain=" << domain_kind_name(cfg.domain.kind) << '\n';
  out << "q=" << format_double(cfg.domain.q) << '\n';
  out << "cap=" << format_double(cfg.domain.cap) << '\n';
  out << "coeffs=[" << join(cfg.domain.coeffs, format_complex) << "]\n";
  out << "nmax=" << cfg.nmax << '\n';
  out << "N=" << join(cfg.N, [](int n) { return std::to_string(n); }) << '\n';
  out << "s=" << format_double(cfg.s) << '\n';
  out << "srule=" << srule_name(cfg.srule) << '\n';
  out << "ell=" << join(cfg.ell, format_double) << '\n';
  out << "theta=" << format_double(cfg.theta) << '\n';
  out << "a=" << join(cfg.a, format_complex) << '\n';
  out << "b=" << join(cfg.b, format_complex) << '\n';
  out << "seed=" << cfg.seed << '\n';
  out << "out=" << cfg.out << '\n';
  out << "nodes-angular=" << cfg.nodes_angular << '\n';
  out << "nodes-radial=" << cfg.nodes_radial << '\n';
  out << "tol=" << format_double(cfg.tol) << '\n';
  out << "weighted=" << (cfg.weighted ? "true" : "false") << '\n';
  out << "coefficients=" << (cfg.coefficients ? "true" : "false") << '\n';
  out << "samples=" << cfg.samples << '\n';
  out << "bins=" << cfg.bins << '\n';
  out << "rmax=" << format_double(cfg.rmax) << '\n';
  out << "center=" << format_complex(cfg.center) << '\n';
  out << "radius=" << format_double(cfg.radius) << '\n';
  out << "levels=" << join(cfg.levels, format_double) << '\n';
  out << "tmax=" << format_double(cfg.tmax) << '\n';
  out << "steps=" << cfg.steps << '\n';
  return out.str();
}

void validate_config(const StudyConfig& cfg, const std::string& command) {
  auto fail = [](const std::string& msg) { throw InvalidArgument("config: " + msg); };
  (void)cfg.domain.to_map();
  if (cfg.nodes_angular < 1 || cfg.nodes_radial < 1) fail("node counts must be positive");
  if (!(cfg.tol > 0.0)) fail("tol must be positive");
  if (cfg.srule != SRule::inf && !(cfg.s > 0.0 && std::isfinite(cfg.s))) fail("s must be positive");
  for (double l : cfg.ell) {
    if (!(l >= 0.0 && l <= 1.0)) fail("ell values must lie in [0, 1]");
  }
  auto check_pair = [&](int N) {
    if (N < 1) fail("N must be positive");
    const double s = cfg.s_for(N);
    if (!is_infinite(s) && N > std::floor(s - 1.0)) {
      fail("N = " + std::to_string(N) + " violates N <= floor(s - 1) with s = " + format_double(s));
    }
  };
  if (command == "poly") {
    if (cfg.nmax < 0) fail("nmax must be nonnegative");
    if (cfg.srule == SRule::fixed || cfg.srule == SRule::inf) {
      check_pair(cfg.nmax + 1);
    } else {
      const double s = cfg.s_for(cfg.nmax);
      if (cfg.nmax < 1 || !(s >= cfg.nmax + 2.0)) {
        fail("degree " + std::to_string(cfg.nmax) + " needs s >= n + 2, got " + format_double(s));
      }
    }
  } else if (command == "scaling" || command == "gap") {
    if (cfg.N.empty()) fail("N list is empty");
    for (int N : cfg.N) check_pair(N);
    if (command == "scaling" && (cfg.a.empty() || cfg.b.empty())) fail("a and b lists must be nonempty");
    if (command == "gap" && !(cfg.radius >= 0.0)) fail("radius must be nonnegative");
  } else if (command == "sample") {
    if (cfg.N.size() != 1) fail("sample takes a single N");
    const double s = cfg.s_for(cfg.N[0]);
    if (is_infinite(s) || !(s > cfg.N[0])) fail("sample needs finite s > N");
    if (cfg.samples < 1 || cfg.bins < 1 || !(cfg.rmax > 0.0)) fail("samples, bins and rmax must be positive");
  } else if (command == "corr") {
    if (cfg.steps < 2 || !(cfg.tmax > 0.0)) fail("corr needs steps >= 2 and tmax > 0");
  } else if (command == "levelsets") {
    for (double c : cfg.levels) {
      if (!(c >= 1.0)) fail("level values must be >= 1");
    }
    if (cfg.nodes_angular < 3) fail("levelsets needs at least 3 angular nodes");
  } else {
    fail("unknown command '" + command + "'");
  }
}

void write_table(const Table& table, std::ostream& out) {
  out << join(table.header, [](const std::string& s) { return s; }) << '\n';
  for (const auto& row : table.rows) out << join(row, [](const std::string& s) { return s; }) << '\n';
}

// ---------------------------------------------------------------------------
// Commands

namespace {

MomentOptions moment_options(const StudyConfig& cfg) {
  MomentOptions o;
  o.angular_nodes = cfg.nodes_angular;
  o.refine_tol = cfg.tol;
  return o;
}

// Least-squares slope of log|err| against n over a window of five degrees.
std::vector<std::string> fitted_rates(const std::vector<int>& degrees, const std::vector<double>& errors) {
  std::vector<std::string> out(degrees.size(), "nan");
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (std::size_t j = (i >= 2 ? i - 2 : 0); j < std::min(degrees.size(), i + 3); ++j) {
      if (!(errors[j] > 0.0) || !std::isfinite(errors[j])) continue;
      const double x = degrees[j], y = std::log(errors[j]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++count;
    }
    const double den = count * sxx - sx * sx;
    if (count >= 2 && den != 0.0) out[i] = format_double((count * sxy - sx * sy) / den);
  }
  return out;
}

std::string fmt(double v) { return format_double(v); }

}  // namespace

std::vector<Table> cmd_poly(const StudyConfig& cfg) {
  validate_config(cfg, "poly");
  const auto map = cfg.domain.to_map();
  Table kappa{"poly", {"n", "kappa_exact", "kappa_pred", "rel_err", "fitted_rate"}, {}};
  Table coeffs{"poly_coefficients", {"n", "k", "re", "im"}, {}};
  std::vector<int> degrees;
  std::vector<double> errors, exact, pred;

  auto record = [&](int n, const OrthoPolySet& polys) {
    const double ke = polys.kappas()[n];
    const double kp = kappa_asymptotic(n, polys.s(), map);
    degrees.push_back(n);
    exact.push_back(ke);
    pred.push_back(kp);
    errors.push_back(std::abs(ke / kp - 1.0));
    if (cfg.coefficients) {
      const auto& mono = polys.mono_coeffs()[n];
      for (std::size_t k = 0; k < mono.size(); ++k) {
        coeffs.rows.push_back({std::to_string(n), std::to_string(k), fmt(mono[k].real()), fmt(mono[k].imag())});
      }
    }
  };

  if (cfg.srule == SRule::fixed || cfg.srule == SRule::inf) {
    const auto polys = build_orthopolys(map, cfg.nmax, cfg.s_for(cfg.nmax + 1), moment_options(cfg));
    for (int n = 0; n <= cfg.nmax; ++n) record(n, polys);
  } else {
    // degrees whose s value leaves no room for the exterior integrals are skipped
    for (int n = 1; n <= cfg.nmax; ++n) {
      if (cfg.s_for(n) >= n + 2.0) record(n, build_orthopolys(map, n, cfg.s_for(n), moment_options(cfg)));
    }
  }
  const auto rates = fitted_rates(degrees, errors);
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    kappa.rows.push_back({std::to_string(degrees[i]), fmt(exact[i]), fmt(pred[i]), fmt(errors[i]), rates[i]});
  }
  std::vector<Table> out{kappa};
  if (cfg.coefficients) out.push_back(coeffs);
  return out;
}

std::vector<Table> cmd_scaling(const StudyConfig& cfg) {
  validate_config(cfg, "scaling");
  const auto map = cfg.domain.to_map();
  Table t{cfg.weighted ? "scaling_weighted" : "scaling",
          {"N", "a", "b", "ratio_re", "ratio_im", "predictor_re", "predictor_im", "abs_err"},
          {}};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int N : cfg.N) {
    const double s = cfg.s_for(N);
    const auto polys = build_orthopolys(map, N - 1, s, moment_options(cfg));
    const std::vector<double> ells = cfg.ell.empty() ? std::vector<double>{cfg.ell_for(N)} : cfg.ell;
    for (double ell : ells) {
      for (const auto& a : cfg.a) {
        for (const auto& b : cfg.b) {
          const auto r = scaled_ratio(polys, N, cfg.theta, a, b);
          const cplx ratio = cfg.weighted ? r.weighted_ratio : r.ratio;
          std::optional<cplx> pred = cfg.weighted ? weighted_scaling_predictor(map, ell, cfg.theta, a, b)
                                                  : std::optional<cplx>(scaling_predictor(map, ell, cfg.theta, a, b));
          const cplx p = pred.value_or(cplx(nan, nan));
          const double err = pred ? std::abs(ratio - p) : nan;
          t.rows.push_back({std::to_string(N), format_complex(a), format_complex(b), fmt(ratio.real()),
                            fmt(ratio.imag()), fmt(p.real()), fmt(p.imag()), fmt(err)});
        }
      }
    }
  }
  return {t};
}

std::vector<Table> cmd_corr(const StudyConfig& cfg) {
  validate_config(cfg, "corr");
  const auto map = cfg.domain.to_map();
  const std::vector<double> ells = cfg.ell.empty() ? std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0} : cfg.ell;
  Table t{"corr", {"series", "ell", "x", "y", "value"}, {}};
  const cplx I(0.0, 1.0);
  const double h = 2.0 * cfg.tmax / (cfg.steps - 1);
  auto grid = [&](int k) { return -cfg.tmax + h * k; };
  for (double ell : ells) {
    for (int k = 0; k < cfg.steps; ++k) {
      const double t_ = grid(k);
      t.rows.push_back({"tangent_r1", fmt(ell), fmt(t_), "0", fmt(scaled_corr(map, ell, cfg.theta, {I * t_}))});
    }
    for (int k = 0; k < cfg.steps; ++k) {
      const double t_ = grid(k);
      t.rows.push_back(
          {"tangent_r2", fmt(ell), fmt(t_), "0", fmt(scaled_corr(map, ell, cfg.theta, {I * t_, cplx(0.0)}))});
    }
    for (int k = 0; k < cfg.steps; ++k) {
      const double t_ = grid(k);
      t.rows.push_back({"normal_r1", fmt(ell), fmt(t_), "0", fmt(scaled_corr(map, ell, cfg.theta, {cplx(-t_)}))});
    }
  }
  // surfaces over real a, b on a coarser grid
  const int ss = std::max(2, std::min(cfg.steps, 41));
  const double range = std::min(cfg.tmax, 3.0);
  const double hs = 2.0 * range / (ss - 1);
  for (double ell : ells) {
    for (int i = 0; i < ss; ++i) {
      for (int j = 0; j < ss; ++j) {
        const double x = -range + hs * i, y = -range + hs * j;
        t.rows.push_back(
            {"normal_r2", fmt(ell), fmt(x), fmt(y), fmt(scaled_corr(map, ell, cfg.theta, {cplx(x), cplx(y)}))});
      }
    }
  }
  for (int k = 0; k < cfg.steps; ++k) {
    const double t_ = grid(k);
    t.rows.push_back({"sine_r2", "nan", fmt(t_), "0", fmt(sine_corr(t_, 0.0))});
  }
  return {t};
}

std::vector<Table> cmd_levelsets(const StudyConfig& cfg) {
  validate_config(cfg, "levelsets");
  const auto map = cfg.domain.to_map();
  Table t{"levelsets", {"level", "idx", "re", "im"}, {}};
  const int m = cfg.nodes_angular;
  for (double c : cfg.levels) {
    for (int k = 0; k <= m; ++k) {
      const cplx z = map.eval(std::polar(c, 2.0 * std::numbers::pi * (k % m) / m));
      t.rows.push_back({fmt(c), std::to_string(k), fmt(z.real()), fmt(z.imag())});
    }
  }
  return {t};
}

std::vector<Table> cmd_gap(const StudyConfig& cfg) {
  validate_config(cfg, "gap");
  const auto map = cfg.domain.to_map();
  Table t{"gap",
          {"N", "s", "center", "radius", "probability", "coarse_probability", "det_estimate", "oracle", "abs_diff",
           "warning"},
          {}};
  Table terms{"gap_terms", {"N", "n", "term"}, {}};
  GapOptions opts;
  opts.angular_nodes = cfg.nodes_angular;
  opts.radial_nodes = cfg.nodes_radial;
  opts.tol = cfg.tol;
  const bool disk_oracle = cfg.domain.kind == DomainSpec::Kind::disk && cfg.center == cplx(0.0) && cfg.radius <= 1.0;
  for (int N : cfg.N) {
    const double s = cfg.s_for(N);
    const auto polys = build_orthopolys(map, N - 1, s);
    const auto g = gap_probability(polys, N, {cfg.center, cfg.radius}, opts);
    std::string oracle = "nan", diff = "nan";
    if (disk_oracle) {
      const double o = disk_gap_oracle(N, s, cfg.radius);
      oracle = fmt(o);
      diff = fmt(std::abs(o - g.probability));
    }
    t.rows.push_back({std::to_string(N), fmt(s), format_complex(cfg.center), fmt(cfg.radius), fmt(g.probability),
                      fmt(g.coarse_probability), fmt(g.det_estimate), oracle, diff,
                      g.warning ? "refinement" : ""});
    for (std::size_t n = 0; n < g.terms.size(); ++n) {
      terms.rows.push_back({std::to_string(N), std::to_string(n), fmt(g.terms[n])});
    }
  }
  return {t, terms};
}

std::vector<Table> cmd_sample(const StudyConfig& cfg) {
  validate_config(cfg, "sample");
  const int N = cfg.N[0];
  const auto samples = sample_many(N, cfg.s_for(N), cfg.seed, cfg.samples);
  Table pts{"samples", {"index", "re", "im"}, {}};
  std::size_t index = 0;
  for (const auto& c : samples) {
    for (const auto& p : c.points) pts.rows.push_back({std::to_string(index++), fmt(p.real()), fmt(p.imag())});
  }
  const auto hist = empirical_r1(samples, cfg.bins, cfg.rmax);
  Table h{"histogram", {"bin_lo", "bin_hi", "density", "stderr"}, {}};
  for (const auto& b : hist.bins) h.rows.push_back({fmt(b.lo), fmt(b.hi), fmt(b.density), fmt(b.stderr_)});
  return {pts, h};
}

std::vector<Table> run_command(const std::string& command, const StudyConfig& cfg) {
  if (command == "poly") return cmd_poly(cfg);
  if (command == "scaling") return cmd_scaling(cfg);
  if (command == "corr") return cmd_corr(cfg);
  if (command == "levelsets") return cmd_levelsets(cfg);
  if (command == "gap") return cmd_gap(cfg);
  if (command == "sample") return cmd_sample(cfg);
  throw InvalidArgument("unknown command '" + command + "'");
}

}  // namespace ptens
