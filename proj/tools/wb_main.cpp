// wb: command-line driver for the well-balanced solvers.
//
//   wb run    --case swe.test1 --scheme IWBM2 --fluctuation PWLR --cells 200 --cfl 2 --out dir/
//   wb sweep  --case transport.test2 --scheme IEWBM1 --cells 25,50,100,200
//   wb steady --case swe.test4 --scheme IWBM1 --cfl 10 --eps 1e-12
//
// Exit codes: 0 success, 2 configuration error, 3 solver non-convergence, 4 I/O error.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "wbfv/errors.hpp"
#include "wbfv/harness.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitIo = 4;

struct CommonArgs {
  std::string config_path;
  std::map<std::string, std::string> kv;
  std::vector<std::string> sets;
};

void add_common(CLI::App* app, CommonArgs& a) {
  app->add_option("--config", a.config_path, "key = value configuration file");
  auto opt = [&](const char* flag, const char* key, const char* help) {
    app->add_option_function<std::string>(flag, [&a, key](const std::string& v) { a.kv[key] = v; }, help);
  };
  opt("--case", "case", "built-in case name");
  opt("--model", "model", "transport | burgers | swe (must match the case)");
  opt("--scheme", "scheme", "EXWBM1/2, IEWBM1/2, IWBM1/2, SIEWBM1/2, SIWBM1/2");
  opt("--fluctuation", "fluctuation", "PWCR | PWLR");
  opt("--limiter", "limiter", "minmod | avg");
  opt("--cfl", "cfl", "CFL number");
  opt("--tend", "tend", "final time");
  opt("--out", "out", "output directory");
  opt("--solver", "solver", "auto | picard | newton");
  app->add_option("--set", a.sets, "extra key=value settings");
}

wbfv::RunConfig build_config(const CommonArgs& a, bool cells_in_kv = true) {
  std::map<std::string, std::string> kv;
  if (!a.config_path.empty()) {
    std::ifstream f(a.config_path);
    if (!f) throw wbfv::IoError("cannot read config '" + a.config_path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    kv = wbfv::parse_key_values(ss.str());
  }
  for (const auto& s : a.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw wbfv::ConfigError("--set expects key=value, got '" + s + "'");
    auto parsed = wbfv::parse_key_values(s);
    kv.insert_or_assign(parsed.begin()->first, parsed.begin()->second);
  }
  for (const auto& [k, v] : a.kv) kv[k] = v;
  if (!cells_in_kv) kv.erase("cells");
  return wbfv::config_from_settings(kv);
}

std::string join(const std::vector<wbfv::Real>& v) {
  std::string s;
  char buf[32];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.6e", i ? " " : "", v[i]);
    s += buf;
  }
  return s;
}

int cmd_run(const CommonArgs& a) {
  const auto cfg = build_config(a);
  const auto res = wbfv::run_case(cfg);
  wbfv::write_outputs(res, cfg);
  std::cout << cfg.case_name << ' ' << wbfv::to_string(cfg.scheme) << ' ' << wbfv::to_string(cfg.fluctuation)
            << " cells=" << cfg.n_cells << " t=" << res.time << " steps=" << res.steps
            << " stage_iterations=" << res.stage_iterations << " wall=" << res.wall_seconds << "s\n";
  if (res.stationary) std::cout << "l1 vs stationary: " << join(wbfv::l1_error(res.final, *res.stationary, res.grid)) << '\n';
  return 0;
}

int cmd_sweep(const CommonArgs& a, const std::vector<int>& cells, int ref_cells, const std::string& ref_scheme,
              const std::string& ref_fluct) {
  if (cells.size() < 2) throw wbfv::ConfigError("sweep needs at least two meshes");
  const auto cfg = build_config(a, false);
  auto ref = cfg;
  ref.scheme = ref_scheme.empty() ? wbfv::second_order_of(cfg.scheme) : wbfv::parse_scheme(ref_scheme);
  ref.fluctuation = wbfv::parse_fluctuation(ref_fluct);
  int finest = 0;
  for (int n : cells) finest = std::max(finest, n);
  if (ref_cells <= 0) ref_cells = 8 * finest;
  const auto table = wbfv::convergence_sweep(cfg, cells, ref, ref_cells);
  const std::size_t comps = cfg.model.components();
  std::cout << "reference: " << table.reference_scheme << " on " << table.reference_cells << " cells\n";
  for (std::size_t j = 0; j < table.cells.size(); ++j) {
    std::printf("%6d", table.cells[j]);
    for (std::size_t c = 0; c < comps; ++c) {
      std::printf("  %.3e", table.errors[j][c]);
      if (j > 0 && table.orders[j - 1][c])
        std::printf(" (%5.2f)", *table.orders[j - 1][c]);
      else
        std::printf("        ");
    }
    std::printf("\n");
  }
  if (!cfg.out_dir.empty()) wbfv::write_convergence_csv(table, cfg.out_dir + "/convergence.csv", comps);
  return 0;
}

int cmd_steady(const CommonArgs& a, double eps, long max_steps) {
  const auto cfg = build_config(a);
  const auto res = wbfv::run_to_steady_state(cfg, eps, max_steps);
  std::cout << cfg.case_name << ' ' << wbfv::to_string(cfg.scheme) << " cfl=" << cfg.cfl
            << (res.converged ? " converged" : " NOT converged") << " t=" << res.time << " steps=" << res.steps
            << " stage_iterations=" << res.stage_iterations << " residual=" << res.residual
            << " wall=" << res.wall_seconds << "s\n";
  if (cfg.case_name == "swe.test4")
    std::cout << "l1 vs steady solution: "
              << join(wbfv::l1_error(res.final, wbfv::steady_race_reference(cfg), res.grid)) << '\n';
  if (!cfg.out_dir.empty()) {
    wbfv::RunResult rr;
    rr.grid = res.grid;
    rr.initial = res.final;
    rr.final = res.final;
    rr.time = res.time;
    rr.steps = res.steps;
    rr.stage_iterations = res.stage_iterations;
    rr.wall_seconds = res.wall_seconds;
    wbfv::write_outputs(rr, cfg);
  }
  return res.converged ? 0 : kExitSolver;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Well-balanced implicit and semi-implicit finite volume solvers"};
  app.require_subcommand(1);

  CommonArgs run_args, sweep_args, steady_args;
  auto* run = app.add_subcommand("run", "run a case to its final time");
  add_common(run, run_args);
  run->add_option_function<std::string>(
      "--cells", [&](const std::string& v) { run_args.kv["cells"] = v; }, "number of cells");

  auto* sweep = app.add_subcommand("sweep", "refinement sweep against a fine-mesh reference");
  add_common(sweep, sweep_args);
  std::vector<int> sweep_cells;
  int ref_cells = 0;
  std::string ref_scheme, ref_fluct = "PWLR";
  sweep->add_option("--cells", sweep_cells, "comma separated mesh sizes")->delimiter(',')->required();
  sweep->add_option("--reference-cells", ref_cells, "reference mesh (default 8x finest)");
  sweep->add_option("--reference-scheme", ref_scheme, "reference scheme (default: order-2 member of the family)");
  sweep->add_option("--reference-fluctuation", ref_fluct, "reference fluctuation reconstruction");

  auto* steady = app.add_subcommand("steady", "run until max|U^{n+1}-U^n|/dt < eps");
  add_common(steady, steady_args);
  steady->add_option_function<std::string>(
      "--cells", [&](const std::string& v) { steady_args.kv["cells"] = v; }, "number of cells");
  double eps = 1e-12;
  long max_steps = 2'000'000;
  steady->add_option("--eps", eps, "stopping threshold");
  steady->add_option("--max-steps", max_steps, "step budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(run_args);
    if (*sweep) return cmd_sweep(sweep_args, sweep_cells, ref_cells, ref_scheme, ref_fluct);
    if (*steady) return cmd_steady(steady_args, eps, max_steps);
  } catch (const wbfv::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const wbfv::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const wbfv::ConvergenceError& e) {
    std::cerr << "solver did not converge: " << e.what() << " (iterations " << e.iterations() << ", residual "
              << e.residual() << ")\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  }
  return 0;
}
