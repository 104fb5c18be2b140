#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wbfv/grid.hpp"
#include "wbfv/models.hpp"
#include "wbfv/numflux.hpp"
#include "wbfv/reconstruction.hpp"
#include "wbfv/stationary.hpp"
#include "wbfv/steppers.hpp"

namespace wbfv {

/// Method family and order:
///  EX   explicit, collocated profiles
///  IE   implicit, closed-form profiles (exactly well-balanced)
///  I    implicit, collocated profiles
///  SIE  semi-implicit, closed-form profiles
///  SI   semi-implicit, collocated profiles
enum class Scheme { EXWBM1, EXWBM2, IEWBM1, IEWBM2, IWBM1, IWBM2, SIEWBM1, SIEWBM2, SIWBM1, SIWBM2 };

std::string to_string(Scheme s);
Scheme parse_scheme(const std::string& s);
int scheme_order(Scheme s);
TimeMode scheme_mode(Scheme s);
ProfileSource scheme_profile(Scheme s);
/// Same family at order 2; used for fine-mesh references.
Scheme second_order_of(Scheme s);

struct RunConfig {
  std::string case_name;
  Model model = TransportModel{};
  Real x_left = 0.0;
  Real x_right = 1.0;
  int n_cells = 100;
  Real cfl = 1.0;
  Real t_end = 1.0;
  Scheme scheme = Scheme::IWBM1;
  FluctuationKind fluctuation = FluctuationKind::PWCR;
  Limiter limiter = Limiter::Minmod;
  Limiter weights = Limiter::Avg;
  std::optional<ViscosityRule> viscosity;
  SolverConfig solver;
  CollocationSettings collocation;
  /// Prescribed sides with no ghost states are filled from the case's
  /// stationary solution.
  BoundaryPolicy boundary = BoundaryPolicy::transmissive();
  std::vector<Real> snapshot_times;
  std::string out_dir;
  long max_steps = 5'000'000;
};

/// Names accepted by builtin_case.
std::vector<std::string> builtin_case_names();

/// Built-in test setups. The CFL default depends on the scheme: 2 for implicit
/// schemes, 0.9 for explicit and friction-split semi-implicit ones.
RunConfig builtin_case(const std::string& name, Scheme scheme = Scheme::IWBM1);

struct Snapshot {
  Real time = 0.0;
  CellField u;
};

struct RunResult {
  Grid grid{0.0, 1.0, Grid::kMinCells};
  CellField initial;
  CellField final;
  /// Underlying steady state on the same grid, when the case has one.
  std::optional<CellField> stationary;
  Real time = 0.0;
  long steps = 0;
  long stage_iterations = 0;
  int max_fallback_cells = 0;
  double wall_seconds = 0.0;
  std::vector<StepStats> stats;
  std::vector<Snapshot> snapshots;
};

/// Grid, initial data, boundary and discretization for a config.
struct PreparedRun {
  Discretization disc;
  CellField initial;
  std::optional<CellField> stationary;
};

PreparedRun prepare_run(const RunConfig& config);

/// Advances one step of the configured scheme.
StepResult advance(const RunConfig& config, const Discretization& disc, const CellField& u, Real dt);

RunResult run_case(const RunConfig& config);

struct SteadyResult {
  bool converged = false;
  Real time = 0.0;
  long steps = 0;
  long stage_iterations = 0;
  Real residual = 0.0;  ///< last max_i |U^{n+1} - U^n| / dt
  double wall_seconds = 0.0;
  Grid grid{0.0, 1.0, Grid::kMinCells};
  CellField final;
};

/// Steps until max_i |U^{n+1} - U^n| / dt < epsilon or max_steps is hit.
SteadyResult run_to_steady_state(const RunConfig& config, Real epsilon, long max_steps = 2'000'000);

/// Collocated steady state of the steady-race case: q = 1, h = 2 at the right
/// end, marched backwards across the grid.
CellField steady_race_reference(const RunConfig& config);

/// dx * sum_i |a_i - b_i| per component.
std::vector<Real> l1_error(const CellField& a, const CellField& b, const Grid& grid);

/// log2(e_j / e_{j+1}); nullopt where an entry is zero or non-finite.
std::vector<std::optional<Real>> observed_order(const std::vector<Real>& errors);

/// Averages blocks of `factor` fine cells.
CellField restrict_average(const CellField& fine, int factor);

struct ConvergenceTable {
  std::vector<int> cells;
  std::vector<std::vector<Real>> errors;                 ///< [mesh][component]
  std::vector<std::vector<std::optional<Real>>> orders;  ///< [mesh - 1][component]
  int reference_cells = 0;
  std::string reference_scheme;
};

/// Errors of `config` on each mesh against a fine-mesh run of `reference`
/// restricted to that mesh. Every mesh must divide reference_cells.
ConvergenceTable convergence_sweep(const RunConfig& config, const std::vector<int>& cells,
                                   const RunConfig& reference, int reference_cells);

/// Writes solution.csv, one snapshot_<k>.csv per snapshot and summary.txt.
void write_outputs(const RunResult& result, const RunConfig& config);
void write_convergence_csv(const ConvergenceTable& table, const std::string& path, std::size_t components);
std::string format_csv(const Grid& grid, const Model& model, const CellField& u,
                       const std::optional<CellField>& reference);

/// Flat `key = value` lines; '#' starts a comment.
std::map<std::string, std::string> parse_key_values(const std::string& text);
/// Applies recognised keys to a config; unknown keys throw ConfigError.
void apply_settings(RunConfig& config, const std::map<std::string, std::string>& kv);
/// Starts from builtin_case(kv["case"], kv["scheme"]) and applies the rest.
RunConfig config_from_settings(const std::map<std::string, std::string>& kv);
RunConfig load_config(const std::string& path);

}  // namespace wbfv
