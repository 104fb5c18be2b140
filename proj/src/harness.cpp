#include "wbfv/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <limits>
#include <sstream>

#include "wbfv/errors.hpp"

namespace wbfv {

namespace {

std::string upper(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return s;
}

std::string lower(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

Real parse_real(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const Real r = std::stod(v, &pos);
    if (pos != v.size()) throw ConfigError("");
    return r;
  } catch (const std::exception&) {
    throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
  }
}

long parse_long(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long r = std::stol(v, &pos);
    if (pos != v.size()) throw ConfigError("");
    return r;
  } catch (const std::exception&) {
    throw ConfigError("config: '" + key + "' expects an integer, got '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  const auto s = lower(v);
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw ConfigError("config: '" + key + "' expects a boolean, got '" + v + "'");
}

std::vector<Real> parse_real_list(const std::string& key, const std::string& v) {
  std::vector<Real> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_real(key, item));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Built-in cases

/// Steady solution through `start` at interface `start_interface`, sampled at
/// cells lo..hi, for the profile family the scheme uses.
using SteadyFn = std::function<std::vector<StateVector>(const Model&, const Grid&, ProfileSource,
                                                        const CollocationSettings&, int lo, int hi)>;
using InitialFn = std::function<CellField(const Model&, const Grid&, const std::vector<StateVector>* steady)>;

struct CaseDef {
  ModelKind kind;
  Real x_left;
  Real x_right;
  int cells;
  Real t_end;
  SteadyFn steady;  // empty when the case has no underlying steady state
  InitialFn initial;
  std::function<BoundaryPolicy(const Model&)> boundary;
};

/// C exp(kappa x): sampled directly or marched from the left end.
SteadyFn exponential_steady(Real amplitude) {
  return [amplitude](const Model& model, const Grid& grid, ProfileSource source, const CollocationSettings& cs,
                     int lo, int hi) {
    const Real kappa = exact_rate(model);
    if (source == ProfileSource::Exact) {
      std::vector<StateVector> out;
      for (int j = lo; j <= hi; ++j) out.emplace_back(amplitude * std::exp(kappa * grid.cell_center(j)));
      return out;
    }
    return collocated_trajectory(model, grid, 0, StateVector(amplitude * std::exp(kappa * grid.x_left())), lo, hi,
                                 cs);
  };
}

SteadyFn swe_steady(int which_end, StateVector start) {
  return [which_end, start](const Model& model, const Grid& grid, ProfileSource, const CollocationSettings& cs,
                            int lo, int hi) {
    const int iface = which_end == 0 ? 0 : grid.n_cells();
    return collocated_trajectory(model, grid, iface, start, lo, hi, cs);
  };
}

/// Steady values on cells 0..n-1 plus a pointwise perturbation.
InitialFn steady_plus(std::function<StateVector(Real)> bump) {
  return [bump](const Model&, const Grid& grid, const std::vector<StateVector>* steady) {
    const int n = grid.n_cells();
    CellField u(n, (*steady)[0].size());
    for (int i = 0; i < n; ++i) {
      u[i] = (*steady)[static_cast<std::size_t>(i + 2)];
      if (bump) u[i] += bump(grid.cell_center(i));
    }
    return u;
  };
}

BoundaryPolicy inflow_prescribed(const Model&) {
  return {BoundarySide::prescribed({}), BoundarySide::stationary_extension()};
}

const std::map<std::string, CaseDef>& case_table() {
  static const std::map<std::string, CaseDef> table = [] {
    std::map<std::string, CaseDef> t;
    const auto scalar = [](Real v) { return StateVector(v); };

    t["transport.test1"] = {ModelKind::Transport, 0.0, 2.0, 200, 1.0, exponential_steady(1.0), steady_plus({}),
                            inflow_prescribed};
    t["transport.test2"] = {ModelKind::Transport, 0.0, 2.0, 200, 1.0, exponential_steady(1.0),
                            steady_plus([=](Real x) { return scalar(0.5 * std::exp(-100.0 * (x - 0.3) * (x - 0.3))); }),
                            inflow_prescribed};
    t["burgers.test1"] = {ModelKind::Burgers, 0.0, 2.0, 200, 1.0, exponential_steady(1.0), steady_plus({}),
                          inflow_prescribed};
    t["burgers.test2"] = {ModelKind::Burgers, 0.0, 2.0, 400, 10.0, exponential_steady(1.0),
                          steady_plus([=](Real x) { return scalar(0.4 * std::exp(-25.0 * (x - 0.4) * (x - 0.4))); }),
                          inflow_prescribed};
    t["burgers.test3"] = {ModelKind::Burgers, 0.0, 2.0, 200, 0.5, exponential_steady(0.1),
                          steady_plus([=](Real x) { return scalar(0.5 * std::exp(-25.0 * (x - 1.0) * (x - 1.0))); }),
                          inflow_prescribed};

    t["swe.test1"] = {ModelKind::ShallowWater, 0.0, 3.0, 200, 1.0,
                      swe_steady(0, StateVector(2.0 + DepthFunction::cos_bump().value(0.0), 3.5)), steady_plus({}),
                      [](const Model&) { return BoundaryPolicy::stationary_extension(); }};

    const auto gaussian_lake = [](std::function<Real(Real)> hump) {
      return [hump](const Model& model, const Grid& grid, const std::vector<StateVector>*) {
        CellField u(grid.n_cells(), 2);
        for (int i = 0; i < grid.n_cells(); ++i) {
          const Real x = grid.cell_center(i);
          u[i] = StateVector(model.depth(x) + hump(x), 0.0);
        }
        return u;
      };
    };
    t["swe.test2"] = {ModelKind::ShallowWater, -5.0, 5.0, 200, 0.5, {},
                      gaussian_lake([](Real x) { return 0.1 * std::exp(-5.0 * x * x); }),
                      [](const Model&) { return BoundaryPolicy::transmissive(); }};
    t["swe.test3"] = {ModelKind::ShallowWater, -5.0, 5.0, 200, 0.5, {},
                      gaussian_lake([](Real x) { return std::abs(x) < 1.0 ? 0.1 : 0.0; }),
                      [](const Model&) { return BoundaryPolicy::transmissive(); }};

    t["swe.test4"] = {ModelKind::ShallowWater, 0.0, 3.0, 100, 100.0, swe_steady(1, StateVector(2.0, 1.0)),
                      [](const Model&, const Grid& grid, const std::vector<StateVector>*) {
                        CellField u(grid.n_cells(), 2);
                        for (int i = 0; i < grid.n_cells(); ++i) u[i] = StateVector(2.0, 0.0);
                        return u;
                      },
                      [](const Model&) {
                        return BoundaryPolicy{BoundarySide::dirichlet(1, 1.0, 2), BoundarySide::dirichlet(0, 2.0, 2)};
                      }};

    const auto in_patches = [](Real x) {
      return (x >= 2.0 / 7.0 && x <= 3.0 / 7.0) || (x >= 4.0 / 7.0 && x <= 5.0 / 7.0);
    };
    t["swe.test5"] = {ModelKind::ShallowWater, 0.0, 1.0, 100, 1.0, swe_steady(0, StateVector(0.3, 3.0)),
                      steady_plus({}), inflow_prescribed};
    t["swe.test6"] = {ModelKind::ShallowWater, 0.0, 1.0, 100, 2.0, swe_steady(0, StateVector(0.3, 3.0)),
                      steady_plus([=](Real x) { return in_patches(x) ? StateVector(0.05, 0.5) : StateVector(0.0, 0.0); }),
                      inflow_prescribed};
    return t;
  }();
  return table;
}

const CaseDef& case_def(const std::string& name) {
  const auto& t = case_table();
  const auto it = t.find(name);
  if (it == t.end()) throw ConfigError("unknown case '" + name + "'");
  return it->second;
}

Model default_model(ModelKind kind, const std::string& case_name) {
  switch (kind) {
    case ModelKind::Transport: return TransportModel{};
    case ModelKind::Burgers: return BurgersModel{};
    case ModelKind::ShallowWater: {
      ShallowWaterModel m;
      if (case_name == "swe.test1" || case_name == "swe.test4") m.depth = DepthFunction::cos_bump();
      if (case_name == "swe.test2" || case_name == "swe.test3") m.depth = DepthFunction::gaussian();
      if (case_name == "swe.test5" || case_name == "swe.test6") {
        m.depth = DepthFunction::exp_cos();
        m.manning_k = 0.01;
      }
      return m;
    }
  }
  throw ConfigError("unknown model kind");
}

SplitRegime regime_for(const Model& model) {
  const auto* sw = model.shallow_water();
  return sw && sw->manning_k > 0.0 ? SplitRegime::SemiImplicitFriction : SplitRegime::SemiImplicitPressure;
}

bool is_explicit_cfl(Scheme s, const Model& model) {
  if (scheme_mode(s) == TimeMode::Explicit) return true;
  return scheme_mode(s) == TimeMode::SemiImplicit && regime_for(model) == SplitRegime::SemiImplicitFriction;
}

CellField field_from(const std::vector<StateVector>& v, int offset, int n) {
  std::vector<StateVector> out(v.begin() + offset, v.begin() + offset + n);
  return CellField(std::move(out));
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw IoError("write failed for '" + path + "'");
}

std::string fmt(Real v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17e", v);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Schemes

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::EXWBM1: return "EXWBM1";
    case Scheme::EXWBM2: return "EXWBM2";
    case Scheme::IEWBM1: return "IEWBM1";
    case Scheme::IEWBM2: return "IEWBM2";
    case Scheme::IWBM1: return "IWBM1";
    case Scheme::IWBM2: return "IWBM2";
    case Scheme::SIEWBM1: return "SIEWBM1";
    case Scheme::SIEWBM2: return "SIEWBM2";
    case Scheme::SIWBM1: return "SIWBM1";
    case Scheme::SIWBM2: return "SIWBM2";
  }
  return "?";
}

Scheme parse_scheme(const std::string& s) {
  const auto u = upper(trim(s));
  for (Scheme c : {Scheme::EXWBM1, Scheme::EXWBM2, Scheme::IEWBM1, Scheme::IEWBM2, Scheme::IWBM1, Scheme::IWBM2,
                   Scheme::SIEWBM1, Scheme::SIEWBM2, Scheme::SIWBM1, Scheme::SIWBM2})
    if (to_string(c) == u) return c;
  throw ConfigError("unknown scheme '" + s + "'");
}

int scheme_order(Scheme s) {
  switch (s) {
    case Scheme::EXWBM1:
    case Scheme::IEWBM1:
    case Scheme::IWBM1:
    case Scheme::SIEWBM1:
    case Scheme::SIWBM1: return 1;
    default: return 2;
  }
}

TimeMode scheme_mode(Scheme s) {
  switch (s) {
    case Scheme::EXWBM1:
    case Scheme::EXWBM2: return TimeMode::Explicit;
    case Scheme::SIEWBM1:
    case Scheme::SIEWBM2:
    case Scheme::SIWBM1:
    case Scheme::SIWBM2: return TimeMode::SemiImplicit;
    default: return TimeMode::Implicit;
  }
}

ProfileSource scheme_profile(Scheme s) {
  switch (s) {
    case Scheme::IEWBM1:
    case Scheme::IEWBM2:
    case Scheme::SIEWBM1:
    case Scheme::SIEWBM2: return ProfileSource::Exact;
    default: return ProfileSource::Collocated;
  }
}

Scheme second_order_of(Scheme s) {
  switch (s) {
    case Scheme::EXWBM1: return Scheme::EXWBM2;
    case Scheme::IEWBM1: return Scheme::IEWBM2;
    case Scheme::IWBM1: return Scheme::IWBM2;
    case Scheme::SIEWBM1: return Scheme::SIEWBM2;
    case Scheme::SIWBM1: return Scheme::SIWBM2;
    default: return s;
  }
}

// ---------------------------------------------------------------------------
// Cases

std::vector<std::string> builtin_case_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : case_table()) names.push_back(k);
  return names;
}

RunConfig builtin_case(const std::string& name, Scheme scheme) {
  const CaseDef& def = case_def(name);
  RunConfig c;
  c.case_name = name;
  c.model = default_model(def.kind, name);
  c.x_left = def.x_left;
  c.x_right = def.x_right;
  c.n_cells = def.cells;
  c.t_end = def.t_end;
  c.scheme = scheme;
  c.cfl = is_explicit_cfl(scheme, c.model) ? 0.9 : 2.0;
  c.boundary = def.boundary(c.model);
  // Discontinuous data keeps minmod; smooth cases use avg, which keeps the
  // order-2 rate at smooth extrema of the residual.
  c.limiter = (name == "swe.test3" || name == "swe.test6") ? Limiter::Minmod : Limiter::Avg;
  if (def.kind == ModelKind::Burgers) {
    c.solver.method = StageMethod::Newton;
    if (scheme_order(scheme) == 1) c.solver.newton_iters = 1;
  }
  return c;
}

PreparedRun prepare_run(const RunConfig& config) {
  const CaseDef& def = case_def(config.case_name);
  const Model& model = config.model;
  if (model.kind() != def.kind)
    throw ConfigError("case '" + config.case_name + "' needs a " + default_model(def.kind, "").name() + " model, got " +
                      model.name());
  const ProfileSource source = scheme_profile(config.scheme);
  const TimeMode mode = scheme_mode(config.scheme);
  if (source == ProfileSource::Exact && model.kind() == ModelKind::ShallowWater)
    throw ConfigError(to_string(config.scheme) + " needs closed-form steady states; none exist for shallow water");
  if (mode == TimeMode::SemiImplicit && model.kind() != ModelKind::ShallowWater)
    throw ConfigError(to_string(config.scheme) + " needs a split model; only shallow water provides one");
  if (scheme_order(config.scheme) == 1 && config.fluctuation == FluctuationKind::PWLR)
    throw ConfigError("first-order schemes use the PWCR fluctuation reconstruction");
  if (!(config.cfl > 0.0)) throw ConfigError("cfl must be positive");
  if (!(config.t_end >= 0.0)) throw ConfigError("t_end must be non-negative");
  if (!(config.x_right > config.x_left)) throw ConfigError("empty domain");
  config.solver.validate();

  const Grid grid(config.x_left, config.x_right, config.n_cells);
  const int n = grid.n_cells();

  std::optional<std::vector<StateVector>> steady;
  if (def.steady) steady = def.steady(model, grid, source, config.collocation, -2, n + 1);

  PreparedRun run{Discretization{model, grid, config.boundary, {}, config.fluctuation,
                                 config.viscosity.value_or(ViscosityRule::default_for(model)), config.solver},
                  def.initial(model, grid, steady ? &*steady : nullptr), std::nullopt};
  if (steady) run.stationary = field_from(*steady, 2, n);

  auto fill = [&](BoundarySide& side, bool left) {
    if (side.kind != BoundaryKind::Prescribed || !side.ghosts.empty()) return;
    if (!steady) throw ConfigError("prescribed boundary needs a case with a steady state");
    const auto& s = *steady;
    if (left)
      side.ghosts = {s[1], s[0]};
    else
      side.ghosts = {s[static_cast<std::size_t>(n + 2)], s[static_cast<std::size_t>(n + 3)]};
  };
  fill(run.disc.policy.left, true);
  fill(run.disc.policy.right, false);
  run.disc.policy.validate();

  run.disc.recon.order = scheme_order(config.scheme);
  run.disc.recon.limiter = config.limiter;
  run.disc.recon.weights = config.weights;
  run.disc.recon.source = source;
  run.disc.recon.collocation = config.collocation;
  return run;
}

StepResult advance(const RunConfig& config, const Discretization& disc, const CellField& u, Real dt) {
  switch (config.scheme) {
    case Scheme::EXWBM1: return step_explicit(disc, 1, u, dt);
    case Scheme::EXWBM2: return step_explicit(disc, 2, u, dt);
    case Scheme::IEWBM1:
    case Scheme::IWBM1: return step_backward_euler(disc, u, dt);
    case Scheme::IEWBM2:
    case Scheme::IWBM2: return step_sdirk2(disc, u, dt);
    case Scheme::SIEWBM1:
    case Scheme::SIWBM1: return step_imex1(disc, regime_for(disc.model), u, dt);
    case Scheme::SIEWBM2:
    case Scheme::SIWBM2: return step_imex2(disc, regime_for(disc.model), u, dt);
  }
  throw ConfigError("unknown scheme");
}

RunResult run_case(const RunConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  PreparedRun prep = prepare_run(config);
  RunResult res;
  res.grid = prep.disc.grid;
  res.initial = prep.initial;
  res.stationary = prep.stationary;

  std::vector<Real> snaps = config.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  std::size_t next_snap = 0;
  auto take_snapshots = [&](Real t, const CellField& u) {
    while (next_snap < snaps.size() && snaps[next_snap] <= t) res.snapshots.push_back({snaps[next_snap++], u});
  };

  CellField u = prep.initial;
  Real t = 0.0;
  take_snapshots(t, u);
  const Real t_tol = 1e-13 * std::max<Real>(1.0, config.t_end);
  while (config.t_end - t > t_tol) {
    if (res.steps >= config.max_steps) throw ConvergenceError("run_case: step budget exhausted", static_cast<int>(res.steps), t);
    Real target = config.t_end;
    if (next_snap < snaps.size()) target = std::min(target, snaps[next_snap]);
    const Real dt = compute_dt(config.cfl, prep.disc.grid, u, prep.disc.model, target - t);
    StepResult r = advance(config, prep.disc, u, dt);
    u = std::move(r.u);
    t = (dt == target - t) ? target : t + dt;
    ++res.steps;
    res.stage_iterations += r.stats.iterations();
    res.max_fallback_cells = std::max(res.max_fallback_cells, r.stats.fallback_cells);
    res.stats.push_back(std::move(r.stats));
    take_snapshots(t, u);
  }
  res.time = t;
  res.final = std::move(u);
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

SteadyResult run_to_steady_state(const RunConfig& config, Real epsilon, long max_steps) {
  if (!(epsilon > 0.0)) throw ConfigError("steady state threshold must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  PreparedRun prep = prepare_run(config);
  SteadyResult res;
  res.grid = prep.disc.grid;
  CellField u = prep.initial;
  while (res.steps < max_steps) {
    const Real dt = compute_dt(config.cfl, prep.disc.grid, u, prep.disc.model);
    StepResult r = advance(config, prep.disc, u, dt);
    res.residual = (r.u - u).max_abs() / dt;
    u = std::move(r.u);
    res.time += dt;
    ++res.steps;
    res.stage_iterations += r.stats.iterations();
    if (res.residual < epsilon) {
      res.converged = true;
      break;
    }
  }
  res.final = std::move(u);
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

CellField steady_race_reference(const RunConfig& config) {
  const Grid grid(config.x_left, config.x_right, config.n_cells);
  return CellField(
      collocated_trajectory(config.model, grid, grid.n_cells(), StateVector(2.0, 1.0), 0, grid.n_cells() - 1,
                            config.collocation));
}

// ---------------------------------------------------------------------------
// Norms and convergence

std::vector<Real> l1_error(const CellField& a, const CellField& b, const Grid& grid) {
  if (a.n_cells() != b.n_cells() || a.components() != b.components())
    throw ConfigError("l1_error: shape mismatch");
  if (a.n_cells() != grid.n_cells()) throw ConfigError("l1_error: grid mismatch");
  std::vector<Real> e(a.components(), 0.0);
  for (int i = 0; i < a.n_cells(); ++i)
    for (std::size_t c = 0; c < a.components(); ++c) e[c] += std::abs(a[i][c] - b[i][c]);
  for (auto& v : e) v *= grid.dx();
  return e;
}

std::vector<std::optional<Real>> observed_order(const std::vector<Real>& errors) {
  if (errors.size() < 2) throw ConfigError("observed_order: need at least two errors");
  std::vector<std::optional<Real>> out;
  for (std::size_t j = 0; j + 1 < errors.size(); ++j) {
    const Real a = errors[j];
    const Real b = errors[j + 1];
    if (a > 0.0 && b > 0.0 && std::isfinite(a) && std::isfinite(b))
      out.emplace_back(std::log2(a / b));
    else
      out.emplace_back(std::nullopt);
  }
  return out;
}

CellField restrict_average(const CellField& fine, int factor) {
  if (factor < 1 || fine.n_cells() % factor != 0) throw ConfigError("restrict_average: factor must divide the mesh");
  const int n = fine.n_cells() / factor;
  CellField coarse(n, fine.components());
  for (int i = 0; i < n; ++i) {
    StateVector acc = StateVector::zeros(fine.components());
    for (int k = 0; k < factor; ++k) acc += fine[i * factor + k];
    coarse[i] = acc * (1.0 / factor);
  }
  return coarse;
}

ConvergenceTable convergence_sweep(const RunConfig& config, const std::vector<int>& cells, const RunConfig& reference,
                                   int reference_cells) {
  if (cells.size() < 2) throw ConfigError("convergence sweep needs at least two meshes");
  for (int n : cells)
    if (n < Grid::kMinCells || reference_cells % n != 0)
      throw ConfigError("mesh " + std::to_string(n) + " does not divide the reference mesh");

  RunConfig ref_cfg = reference;
  ref_cfg.n_cells = reference_cells;
  ref_cfg.snapshot_times.clear();
  auto ref_future = std::async(std::launch::async, [ref_cfg] { return run_case(ref_cfg); });

  std::vector<std::future<RunResult>> runs;
  for (int n : cells) {
    RunConfig c = config;
    c.n_cells = n;
    c.snapshot_times.clear();
    runs.push_back(std::async(std::launch::async, [c] { return run_case(c); }));
  }

  const RunResult ref = ref_future.get();
  ConvergenceTable table;
  table.cells = cells;
  table.reference_cells = reference_cells;
  table.reference_scheme = to_string(reference.scheme) + " " + to_string(reference.fluctuation);
  for (std::size_t j = 0; j < cells.size(); ++j) {
    const RunResult r = runs[j].get();
    table.errors.push_back(l1_error(r.final, restrict_average(ref.final, reference_cells / cells[j]), r.grid));
  }
  const std::size_t comps = table.errors.front().size();
  table.orders.assign(cells.size() - 1, std::vector<std::optional<Real>>(comps));
  for (std::size_t c = 0; c < comps; ++c) {
    std::vector<Real> col;
    for (const auto& e : table.errors) col.push_back(e[c]);
    const auto o = observed_order(col);
    for (std::size_t j = 0; j < o.size(); ++j) table.orders[j][c] = o[j];
  }
  return table;
}

// ---------------------------------------------------------------------------
// Output

std::string format_csv(const Grid& grid, const Model& model, const CellField& u,
                       const std::optional<CellField>& reference) {
  std::ostringstream os;
  const bool swe = model.kind() == ModelKind::ShallowWater;
  os << (swe ? "x,h,q,eta,bottom" : "x,u");
  if (reference) os << (swe ? ",h_ref,q_ref" : ",u_ref");
  os << '\n';
  for (int i = 0; i < u.n_cells(); ++i) {
    const Real x = grid.cell_center(i);
    os << fmt(x);
    if (swe) {
      const Real H = model.depth(x);
      os << ',' << fmt(u[i][0]) << ',' << fmt(u[i][1]) << ',' << fmt(u[i][0] - H) << ',' << fmt(-H);
    } else {
      os << ',' << fmt(u[i][0]);
    }
    if (reference)
      for (std::size_t c = 0; c < u.components(); ++c) os << ',' << fmt((*reference)[i][c]);
    os << '\n';
  }
  return os.str();
}

void write_outputs(const RunResult& result, const RunConfig& config) {
  if (config.out_dir.empty()) return;
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) throw IoError("cannot create '" + config.out_dir + "': " + ec.message());
  const fs::path dir(config.out_dir);

  write_file((dir / "solution.csv").string(), format_csv(result.grid, config.model, result.final, result.stationary));
  for (std::size_t k = 0; k < result.snapshots.size(); ++k)
    write_file((dir / ("snapshot_" + std::to_string(k) + ".csv")).string(),
               format_csv(result.grid, config.model, result.snapshots[k].u, result.stationary));

  std::ostringstream s;
  s << "case = " << config.case_name << '\n'
    << "model = " << config.model.name() << '\n'
    << "scheme = " << to_string(config.scheme) << '\n'
    << "fluctuation = " << to_string(config.fluctuation) << '\n'
    << "limiter = " << to_string(config.limiter) << '\n'
    << "cells = " << config.n_cells << '\n'
    << "cfl = " << config.cfl << '\n'
    << "t_end = " << config.t_end << '\n'
    << "time = " << fmt(result.time) << '\n'
    << "steps = " << result.steps << '\n'
    << "stage_iterations = " << result.stage_iterations << '\n'
    << "max_fallback_cells = " << result.max_fallback_cells << '\n'
    << "wall_seconds = " << result.wall_seconds << '\n';
  const auto put = [&](const char* key, const std::vector<Real>& e) {
    s << key << " =";
    for (Real v : e) s << ' ' << fmt(v);
    s << '\n';
  };
  put("l1_vs_initial", l1_error(result.final, result.initial, result.grid));
  if (result.stationary) put("l1_vs_stationary", l1_error(result.final, *result.stationary, result.grid));
  for (std::size_t k = 0; k < result.snapshots.size(); ++k)
    s << "snapshot_" << k << " = " << fmt(result.snapshots[k].time) << '\n';
  write_file((dir / "summary.txt").string(), s.str());
}

void write_convergence_csv(const ConvergenceTable& table, const std::string& path, std::size_t components) {
  std::ostringstream os;
  os << "cells";
  for (std::size_t c = 0; c < components; ++c) os << ",error_" << c << ",order_" << c;
  os << '\n';
  for (std::size_t j = 0; j < table.cells.size(); ++j) {
    os << table.cells[j];
    for (std::size_t c = 0; c < components; ++c) {
      os << ',' << fmt(table.errors[j][c]) << ',';
      if (j > 0 && table.orders[j - 1][c]) os << fmt(*table.orders[j - 1][c]);
    }
    os << '\n';
  }
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
    if (ec) throw IoError("cannot create '" + parent.string() + "': " + ec.message());
  }
  write_file(path, os.str());
}

// ---------------------------------------------------------------------------
// Configuration

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = lower(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    kv[key] = value;
  }
  return kv;
}

void apply_settings(RunConfig& c, const std::map<std::string, std::string>& kv) {
  auto sw = [&](const std::string& key) -> ShallowWaterModel {
    const auto* m = c.model.shallow_water();
    if (!m) throw ConfigError("config: '" + key + "' applies to shallow water only");
    return *m;
  };
  for (const auto& [key, v] : kv) {
    if (key == "case" || key == "scheme") continue;  // consumed by config_from_settings
    if (key == "model") {
      const auto m = lower(v);
      if (m != c.model.name()) throw ConfigError("config: case '" + c.case_name + "' uses the " + c.model.name() + " model");
    } else if (key == "cells") {
      c.n_cells = static_cast<int>(parse_long(key, v));
    } else if (key == "cfl") {
      c.cfl = parse_real(key, v);
    } else if (key == "tend" || key == "t_end") {
      c.t_end = parse_real(key, v);
    } else if (key == "x_left") {
      c.x_left = parse_real(key, v);
    } else if (key == "x_right") {
      c.x_right = parse_real(key, v);
    } else if (key == "fluctuation") {
      c.fluctuation = parse_fluctuation(v);
    } else if (key == "limiter") {
      c.limiter = parse_limiter(v);
    } else if (key == "weights") {
      c.weights = parse_limiter(v);
    } else if (key == "out") {
      c.out_dir = v;
    } else if (key == "snapshots") {
      c.snapshot_times = parse_real_list(key, v);
    } else if (key == "max_steps") {
      c.max_steps = parse_long(key, v);
    } else if (key == "solver") {
      c.solver.method = parse_stage_method(v);
    } else if (key == "stage_tol") {
      c.solver.stage_tol = parse_real(key, v);
    } else if (key == "stage_maxiter") {
      c.solver.stage_maxiter = static_cast<int>(parse_long(key, v));
    } else if (key == "newton_iters") {
      c.solver.newton_iters = static_cast<int>(parse_long(key, v));
    } else if (key == "newton_maxiter") {
      c.solver.newton_maxiter = static_cast<int>(parse_long(key, v));
    } else if (key == "fast_path") {
      c.solver.linear_fast_path = parse_bool(key, v);
    } else if (key == "collocation_tol") {
      c.collocation.tol = parse_real(key, v);
    } else if (key == "viscosity") {
      const auto s = lower(v);
      if (s == "local" || s == "local_max")
        c.viscosity = ViscosityRule::local_max();
      else if (s.rfind("fixed:", 0) == 0)
        c.viscosity = ViscosityRule::fixed(parse_real(key, s.substr(6)));
      else
        throw ConfigError("config: viscosity is 'local' or 'fixed:<k>'");
    } else if (key == "alpha") {
      if (const auto* t = c.model.transport()) {
        TransportModel m = *t;
        m.alpha = parse_real(key, v);
        c.model = m;
      } else if (const auto* b = c.model.burgers()) {
        BurgersModel m = *b;
        m.alpha = parse_real(key, v);
        c.model = m;
      } else {
        throw ConfigError("config: 'alpha' applies to transport and Burgers");
      }
    } else if (key == "c") {
      const auto* t = c.model.transport();
      if (!t) throw ConfigError("config: 'c' applies to transport only");
      TransportModel m = *t;
      m.c = parse_real(key, v);
      c.model = m;
    } else if (key == "g") {
      auto m = sw(key);
      m.g = parse_real(key, v);
      c.model = m;
    } else if (key == "manning" || key == "k") {
      auto m = sw(key);
      m.manning_k = parse_real(key, v);
      c.model = m;
    } else if (key == "mu") {
      auto m = sw(key);
      m.mu = parse_real(key, v);
      c.model = m;
    } else if (key == "depth") {
      auto m = sw(key);
      m.depth.kind = parse_depth_kind(v);
      c.model = m;
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
}

RunConfig config_from_settings(const std::map<std::string, std::string>& kv) {
  const auto it = kv.find("case");
  if (it == kv.end()) throw ConfigError("config: 'case' is required");
  Scheme scheme = Scheme::IWBM1;
  if (const auto s = kv.find("scheme"); s != kv.end()) scheme = parse_scheme(s->second);
  RunConfig c = builtin_case(it->second, scheme);
  apply_settings(c, kv);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return config_from_settings(parse_key_values(ss.str()));
}

}  // namespace wbfv
