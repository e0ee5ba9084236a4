#include "ptens/moments.hpp"

#include <unsupported/Eigen/FFT>

#include <cstdint>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "ptens/errors.hpp"
#include "ptens/quadrature.hpp"

namespace ptens {

namespace {

constexpr double kPi = std::numbers::pi;

void check_s(int n_max, double s) {
  if (n_max < 0) throw InvalidArgument("moments: n_max must be nonnegative");
  if (!is_infinite(s) && !(s >= n_max + 2.0)) {
    throw InvalidArgument("moments: need s >= n_max + 2 for the exterior integrals to converge");
  }
}

struct BoundarySamples {
  std::vector<cplx> tau;
  std::vector<cplx> dphi;
  Eigen::MatrixXcd faber;  // (node, j) -> F_j(phi(tau))
};

BoundarySamples sample_boundary(const FaberBasis& basis, int n_max, int nodes, bool antideriv,
                                Eigen::MatrixXcd* anti) {
  BoundarySamples b;
  b.tau.resize(nodes);
  b.dphi.resize(nodes);
  b.faber.resize(nodes, n_max + 1);
  if (antideriv) anti->resize(nodes, n_max + 1);
  const double dt = 2.0 * kPi / nodes;
  for (int i = 0; i < nodes; ++i) {
    const cplx tau = std::polar(1.0, dt * i);
    const cplx z = basis.map().eval(tau);
    b.tau[i] = tau;
    b.dphi[i] = basis.map().eval_prime(tau);
    const auto f = basis.values(z, n_max + 1);
    for (int j = 0; j <= n_max; ++j) b.faber(i, j) = f[j];
    if (antideriv) {
      const auto g = basis.antiderivative_values(z, n_max + 1);
      for (int j = 0; j <= n_max; ++j) (*anti)(i, j) = g[j];
    }
  }
  return b;
}

void check_nodes(const ExteriorMap& map, int n_max, int nodes) {
  if (nodes < required_angular_nodes(map, n_max) / 2) {
    throw InvalidArgument("moments: angular node count cannot resolve the integrands");
  }
}

}  // namespace

int required_angular_nodes(const ExteriorMap& map, int n_max) {
  const int deg = map.degree();
  return next_pow2((n_max + 1) * (deg + 2) + deg + 2);
}

RemainderModes remainder_modes(const FaberBasis& basis, int n_max, int nodes) {
  check_nodes(basis.map(), n_max, nodes);
  const auto b = sample_boundary(basis, n_max, nodes, false, nullptr);
  const int max_order = nodes / 2;
  RemainderModes out;
  out.tail = Eigen::MatrixXcd::Zero(n_max + 1, std::max(0, max_order - 1));
  Eigen::FFT<double> fft;
  std::vector<cplx> in(nodes), spec;
  for (int j = 0; j <= n_max; ++j) {
    for (int i = 0; i < nodes; ++i) in[i] = b.faber(i, j) * b.dphi[i] - std::pow(b.tau[i], j);
    fft.fwd(spec, in);
    // coefficient of tau^p is spec[p mod nodes] / nodes
    for (int m = 2; m <= max_order; ++m) out.tail(j, m - 2) = spec[nodes - m] / static_cast<double>(nodes);
    out.leakage = std::max(out.leakage, std::abs(spec[nodes - 1]) / nodes);
    for (int p = 0; p < max_order; ++p) out.leakage = std::max(out.leakage, std::abs(spec[p]) / nodes);
  }
  return out;
}

Eigen::MatrixXcd interior_gram(const FaberBasis& basis, int n_max, int nodes) {
  check_nodes(basis.map(), n_max, nodes);
  Eigen::MatrixXcd anti;
  const auto b = sample_boundary(basis, n_max, nodes, true, &anti);
  // (1/2i) oint F_j conj(G_k) dz,  dz = phi'(tau) i tau dt
  Eigen::VectorXcd c(nodes);
  const double dt = 2.0 * kPi / nodes;
  for (int i = 0; i < nodes; ++i) c(i) = 0.5 * dt * b.dphi[i] * b.tau[i];
  return anti.adjoint() * c.asDiagonal() * b.faber;
}

Eigen::MatrixXcd interior_gram_via_remainders(const FaberBasis& basis, int n_max, int nodes) {
  const auto modes = remainder_modes(basis, n_max, nodes);
  const int orders = static_cast<int>(modes.tail.cols());
  Eigen::VectorXd weight(orders);
  for (int c = 0; c < orders; ++c) weight(c) = kPi / (c + 1.0);  // m = c + 2: pi/(m-1)
  Eigen::MatrixXcd out = -(modes.tail.conjugate() * weight.asDiagonal() * modes.tail.transpose());
  for (int k = 0; k <= n_max; ++k) out(k, k) += kPi / (k + 1.0);
  return out;
}

Eigen::MatrixXcd exterior_gram(const FaberBasis& basis, int n_max, double s, int nodes) {
  check_s(n_max, s);
  if (is_infinite(s)) return Eigen::MatrixXcd::Zero(n_max + 1, n_max + 1);
  const auto modes = remainder_modes(basis, n_max, nodes);
  const int orders = static_cast<int>(modes.tail.cols());
  // int_{|w|>1} w^{-m} conj(w^{-m}) |w|^{-2s} dA = pi / (s + m - 1)
  Eigen::VectorXd weight(orders);
  for (int c = 0; c < orders; ++c) weight(c) = kPi / (s + c + 1.0);
  Eigen::MatrixXcd out = modes.tail.conjugate() * weight.asDiagonal() * modes.tail.transpose();
  for (int k = 0; k <= n_max; ++k) out(k, k) += kPi / (s - k - 1.0);
  return out;
}

MomentTable moments(const FaberBasis& basis, int n_max, double s, const MomentOptions& opts) {
  check_s(n_max, s);
  if (n_max > basis.n_max()) throw InvalidArgument("moments: basis has too few polynomials");
  const int nodes = std::max(next_pow2(opts.angular_nodes), required_angular_nodes(basis.map(), n_max));

  auto assemble = [&](int m) {
    MomentTable t;
    t.n_max = n_max;
    t.s = s;
    t.angular_nodes = m;
    t.interior_part = interior_gram(basis, n_max, m);
    t.exterior_part = exterior_gram(basis, n_max, s, m);
    t.entries = t.interior_part + t.exterior_part;
    return t;
  };

  MomentTable table = assemble(nodes);
  if (opts.check_refinement) {
    MomentTable fine = assemble(2 * nodes);
    const double change = (fine.entries - table.entries).cwiseAbs().maxCoeff();
    fine.refinement_change = change;
    if (change > opts.refine_tol) {
      throw NonConvergence("moments: entries moved under angular node doubling", change,
                           opts.refine_tol);
    }
    return fine;
  }
  return table;
}

MomentTable closed_form_moments(const DomainSpec& domain, int n_max, double s) {
  check_s(n_max, s);
  double q = 0.0;
  if (domain.kind == DomainSpec::Kind::ellipse) {
    q = domain.q;
  } else if (domain.kind != DomainSpec::Kind::disk) {
    throw NotCovered("closed_form_moments: only the disk and ellipses have closed forms");
  }
  MomentTable t;
  t.n_max = n_max;
  t.s = s;
  t.interior_part = Eigen::MatrixXcd::Zero(n_max + 1, n_max + 1);
  t.exterior_part = Eigen::MatrixXcd::Zero(n_max + 1, n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    const double q2 = std::pow(q, 2 * n + 2);
    t.interior_part(n, n) = kPi / (n + 1.0) * (1.0 - q2);
    if (!is_infinite(s)) t.exterior_part(n, n) = kPi * (1.0 / (s - n - 1.0) + q2 / (s + n + 1.0));
  }
  t.entries = t.interior_part + t.exterior_part;
  return t;
}

EpsilonTable epsilon_table(const MomentTable& m) {
  const int n = m.n_max + 1;
  EpsilonTable e;
  e.s = m.s;
  e.entries.resize(n, n);
  e.interior_dev.resize(n, n);
  e.exterior_dev = Eigen::MatrixXcd::Zero(n, n);
  const bool inf = is_infinite(m.s);
  for (int k = 0; k < n; ++k) {
    const double kp1 = k + 1.0;
    const double scale = inf ? kp1 / kPi : kp1 * (m.s - kp1) / (m.s * kPi);
    for (int j = 0; j < n; ++j) {
      const double delta = j == k ? 1.0 : 0.0;
      e.entries(k, j) = m.entries(k, j) * scale - delta;
      e.interior_dev(k, j) = m.interior_part(k, j) * kp1 / kPi - delta;
      if (!inf) e.exterior_dev(k, j) = m.exterior_part(k, j) * (m.s - kp1) / kPi - delta;
    }
  }
  return e;
}

void write_csv(const MomentTable& table, std::ostream& out) {
  out << "row,col,re,im\n";
  for (int k = 0; k < table.entries.rows(); ++k) {
    for (int j = 0; j < table.entries.cols(); ++j) {
      const cplx v = table.entries(k, j);
      out << k << ',' << j << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
    }
  }
}

std::string map_key(const ExteriorMap& map) {
  std::string key = "cap=" + format_double(map.cap()) + ";coeffs=";
  for (const auto& c : map.laurent_coeffs()) key += format_complex(c) + ",";
  return key;
}

// ---------------------------------------------------------------------------
// Binary cache

namespace {

constexpr char kMagic[4] = {'P', 'T', 'M', 'T'};
constexpr std::uint32_t kVersion = 1;

std::string cache_key(const ExteriorMap& map, int n_max, double s, int nodes) {
  return map_key(map) + ";n_max=" + std::to_string(n_max) + ";s=" + format_double(s) +
         ";nodes=" + std::to_string(nodes);
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

template <class T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
bool get(std::istream& in, T& v) {
  return static_cast<bool>(in.read(reinterpret_cast<char*>(&v), sizeof(T)));
}

void put_matrix(std::ostream& out, const Eigen::MatrixXcd& m) {
  out.write(reinterpret_cast<const char*>(m.data()),
            static_cast<std::streamsize>(m.size() * sizeof(cplx)));
}

bool get_matrix(std::istream& in, Eigen::MatrixXcd& m, int n) {
  m.resize(n, n);
  return static_cast<bool>(
      in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(cplx))));
}

}  // namespace

MomentCache::MomentCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path MomentCache::path_for(const ExteriorMap& map, int n_max, double s,
                                            int nodes) const {
  std::ostringstream name;
  name << std::hex << fnv1a(cache_key(map, n_max, s, nodes)) << ".ptmt";
  return dir_ / name.str();
}

std::optional<MomentTable> MomentCache::load(const ExteriorMap& map, int n_max, double s,
                                             int nodes) const {
  std::ifstream in(path_for(map, n_max, s, nodes), std::ios::binary);
  if (!in) return std::nullopt;
  char magic[4];
  std::uint32_t version = 0, key_len = 0;
  if (!in.read(magic, 4) || std::string(magic, 4) != std::string(kMagic, 4)) return std::nullopt;
  if (!get(in, version) || version != kVersion || !get(in, key_len)) return std::nullopt;
  std::string key(key_len, '\0');
  if (!in.read(key.data(), key_len) || key != cache_key(map, n_max, s, nodes)) return std::nullopt;
  MomentTable t;
  std::int32_t nm = 0, nd = 0;
  if (!get(in, nm) || !get(in, t.s) || !get(in, nd) || !get(in, t.refinement_change)) return std::nullopt;
  t.n_max = nm;
  t.angular_nodes = nd;
  const int n = nm + 1;
  if (!get_matrix(in, t.entries, n) || !get_matrix(in, t.interior_part, n) ||
      !get_matrix(in, t.exterior_part, n)) {
    return std::nullopt;
  }
  return t;
}

void MomentCache::store(const ExteriorMap& map, const MomentTable& t) const {
  std::filesystem::create_directories(dir_);
  const std::string key = cache_key(map, t.n_max, t.s, t.angular_nodes);
  std::ofstream out(path_for(map, t.n_max, t.s, t.angular_nodes), std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("moment cache: cannot write to " + dir_.string());
  out.write(kMagic, 4);
  put(out, kVersion);
  put(out, static_cast<std::uint32_t>(key.size()));
  out.write(key.data(), static_cast<std::streamsize>(key.size()));
  put(out, static_cast<std::int32_t>(t.n_max));
  put(out, t.s);
  put(out, static_cast<std::int32_t>(t.angular_nodes));
  put(out, t.refinement_change);
  put_matrix(out, t.entries);
  put_matrix(out, t.interior_part);
  put_matrix(out, t.exterior_part);
}

}  // namespace ptens
