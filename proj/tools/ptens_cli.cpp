// ptens: command-line front end for the orthogonal-polynomial and kernel studies.
//
//   ptens poly      --domain ellipse --q 0.5 --nmax 20 --srule scaled --s 2
//   ptens scaling   --domain disk --N 50,100,200 --srule scaled --s 2 --a 0.3+0.2i --b -0.1
//   ptens corr      --ell 0,0.5,1 --tmax 10 --steps 201
//   ptens gap       --domain disk --N 4 --s 6 --radius 0.5
//   ptens levelsets --domain ellipse --q 0.3 --levels 1,1.5,2
//   ptens sample    --N 8 --s 12 --samples 20000 --seed 7 --out results
//
// Exit status: 0 success, 2 invalid configuration, 3 numerical non-convergence.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <utility>
#include <vector>

#include "ptens/errors.hpp"
#include "ptens/study.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

const std::vector<std::pair<std::string, std::string>> kFlags = {
    {"domain", "disk, ellipse, custom, or a full spec such as 'kind=ellipse q=0.5'"},
    {"q", "ellipse parameter, 0 <= q < 1"},
    {"cap", "capacity of a custom map"},
    {"coeffs", "Laurent coefficients c0,c1,... of a custom map"},
    {"nmax", "largest polynomial degree (poly)"},
    {"N", "comma-separated matrix sizes"},
    {"s", "s value (fixed), factor c in s = cN (scaled), offset (shift), or inf"},
    {"srule", "fixed, scaled, shift or inf"},
    {"ell", "comma-separated scaling ratios in [0, 1]"},
    {"theta", "boundary angle of z = phi(e^{i theta})"},
    {"a", "comma-separated complex offsets a"},
    {"b", "comma-separated complex offsets b"},
    {"seed", "random seed (sample)"},
    {"out", "output directory; CSV goes to stdout when omitted"},
    {"nodes-angular", "angular quadrature nodes"},
    {"nodes-radial", "radial quadrature nodes"},
    {"tol", "refinement tolerance"},
    {"weighted", "use the weighted kernel (scaling)"},
    {"coefficients", "also emit monomial coefficients (poly)"},
    {"samples", "number of sampled configurations"},
    {"bins", "histogram bins"},
    {"rmax", "histogram radius"},
    {"center", "gap region center"},
    {"radius", "gap region radius"},
    {"levels", "comma-separated level values c >= 1"},
    {"tmax", "half-width of the correlation grids"},
    {"steps", "points per correlation curve"},
};

void emit(const std::vector<ptens::Table>& tables, const std::string& out_dir) {
  if (out_dir.empty()) {
    for (std::size_t i = 0; i < tables.size(); ++i) {
      if (tables.size() > 1) std::cout << (i ? "\n" : "") << "# " << tables[i].name << '\n';
      ptens::write_table(tables[i], std::cout);
    }
    return;
  }
  std::filesystem::create_directories(out_dir);
  for (const auto& t : tables) {
    const auto path = std::filesystem::path(out_dir) / (t.name + ".csv");
    std::ofstream f(path);
    if (!f) throw ptens::InvalidArgument("cannot write " + path.string());
    ptens::write_table(t, f);
    std::cerr << "wrote " << path.string() << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orthogonal polynomials, kernels and eigenvalue statistics for planar domains"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::pair<std::string, std::string>> assignments;
  std::vector<std::string> values(kFlags.size());

  std::vector<CLI::App*> subs;
  for (const char* name : {"poly", "scaling", "corr", "gap", "levelsets", "sample"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "key=value configuration file");
    for (std::size_t i = 0; i < kFlags.size(); ++i) {
      sub->add_option("--" + kFlags[i].first, values[i], kFlags[i].second);
    }
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  CLI::App* chosen = nullptr;
  for (auto* sub : subs) {
    if (sub->parsed()) chosen = sub;
  }

  try {
    ptens::StudyConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ptens::InvalidArgument("cannot read config file " + config_path);
      std::stringstream buf;
      buf << in.rdbuf();
      cfg = ptens::parse_config(buf.str());
    }
    for (std::size_t i = 0; i < kFlags.size(); ++i) {
      if (chosen->count("--" + kFlags[i].first) > 0) ptens::apply_config_value(cfg, kFlags[i].first, values[i]);
    }
    emit(ptens::run_command(chosen->get_name(), cfg), cfg.out);
  } catch (const ptens::NonConvergence& e) {
    std::cerr << "error: " << e.what() << " (last change " << e.last() << ", tolerance " << e.previous() << ")\n";
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
