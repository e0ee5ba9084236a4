#pragma once

// Study orchestration behind the command-line tool.  A StudyConfig is a flat
// key=value record mirroring the CLI flags; every command turns one into CSV
// tables with deterministic, shortest round-trip number formatting.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ptens/point_process.hpp"

namespace ptens {

enum class SRule { fixed, scaled, shift, inf };

struct StudyConfig {
  DomainSpec domain;
  int nmax = 10;
  std::vector<int> N{10};
  SRule srule = SRule::fixed;
  /// fixed: s itself; scaled: s = value * N; shift: s = N + value.
  double s = 40.0;
  std::vector<double> ell;        // empty: derived from the s rule
  double theta = 0.0;
  std::vector<cplx> a{cplx(0.0)};
  std::vector<cplx> b{cplx(0.0)};
  std::uint64_t seed = 1;
  std::string out;                // output directory; empty writes to stdout
  int nodes_angular = 256;
  int nodes_radial = 64;
  double tol = 1e-11;
  bool weighted = false;
  bool coefficients = false;
  int samples = 1000;
  int bins = 20;
  double rmax = 2.0;
  cplx center;
  double radius = 0.5;
  std::vector<double> levels{1.0, 1.25, 1.5, 2.0};
  double tmax = 10.0;
  int steps = 201;

  /// s for a given matrix size N (or polynomial count n + 1).
  double s_for(int N) const;
  /// Default scaling ratio l for a given N when `ell` is empty.
  double ell_for(int N) const;

  bool operator==(const StudyConfig&) const = default;
};

/// Parses `key=value` lines (blank lines and `#` comments ignored).
StudyConfig parse_config(const std::string& text);
/// Applies one key=value assignment; unknown keys and bad values throw InvalidArgument.
void apply_config_value(StudyConfig& cfg, const std::string& key, const std::string& value);
/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const StudyConfig& cfg);
/// Rejects (N, s) pairs with N > floor(s - 1) and other inconsistent settings.
void validate_config(const StudyConfig& cfg, const std::string& command);

std::string srule_name(SRule rule);
SRule parse_srule(const std::string& text);

struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void write_table(const Table& table, std::ostream& out);

/// n, kappa_exact, kappa_pred, rel_err, fitted_rate (+ optional coefficient table).
std::vector<Table> cmd_poly(const StudyConfig& cfg);
/// N, a, b, ratio_re, ratio_im, predictor_re, predictor_im, abs_err.
std::vector<Table> cmd_scaling(const StudyConfig& cfg);
/// series, ell, x, y, value for the boundary scaling-limit correlation functions.
std::vector<Table> cmd_corr(const StudyConfig& cfg);
/// level, idx, re, im along the level lines of P_K.
std::vector<Table> cmd_levelsets(const StudyConfig& cfg);
/// Gap probability of a disk region with term magnitudes and the disk oracle.
std::vector<Table> cmd_gap(const StudyConfig& cfg);
/// Disk-ensemble samples and the radial R_1 histogram.
std::vector<Table> cmd_sample(const StudyConfig& cfg);

std::vector<Table> run_command(const std::string& command, const StudyConfig& cfg);

}  // namespace ptens
