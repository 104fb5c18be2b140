#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "wbfv/grid.hpp"
#include "wbfv/models.hpp"
#include "wbfv/numflux.hpp"
#include "wbfv/reconstruction.hpp"

namespace wbfv {

/// Implicit DIRK tableau paired with an (optional) explicit one.
struct ButcherPair {
  std::string name;
  int stages = 1;
  std::vector<Real> a;   ///< implicit, stages x stages, row-major
  std::vector<Real> b;
  std::vector<Real> at;  ///< explicit, strictly lower triangular; empty if none
  std::vector<Real> bt;

  Real A(int k, int l) const { return a[static_cast<std::size_t>(k * stages + l)]; }
  Real At(int k, int l) const { return at.empty() ? 0.0 : at[static_cast<std::size_t>(k * stages + l)]; }
  Real B(int l) const { return b[static_cast<std::size_t>(l)]; }
  Real Bt(int l) const { return bt.empty() ? 0.0 : bt[static_cast<std::size_t>(l)]; }

  bool has_explicit() const { return !at.empty(); }
  /// Last row of the implicit matrix equals b.
  bool stiffly_accurate() const;

  static ButcherPair backward_euler();
  /// gamma = 1 - 1/sqrt(2), A = [[g, 0], [1 - g, g]], b = [1 - g, g].
  static ButcherPair sdirk2();
  /// SDIRK2 paired with explicit A~ = [[0, 0], [1/(2g), 0]], b~ = [1 - g, g].
  static ButcherPair imex2();
  /// Forward/backward Euler pair written with an empty first implicit stage.
  static ButcherPair imex1();
  static ButcherPair forward_euler();
  static ButcherPair heun();
};

inline const Real kSdirkGamma = 1.0 - 1.0 / std::sqrt(2.0);

enum class StageMethod { Auto, Picard, Newton };
enum class TimeMode { Explicit, Implicit, SemiImplicit };

std::string to_string(StageMethod m);
StageMethod parse_stage_method(const std::string& s);

struct SolverConfig {
  /// Auto: banded direct solve for linear transport, Picard for the local
  /// friction problems of the semi-implicit friction split, Newton otherwise.
  StageMethod method = StageMethod::Auto;
  Real stage_tol = 1e-12;
  int stage_maxiter = 1000;
  /// > 0: perform exactly this many Newton corrections per stage.
  /// 0: iterate Newton until the update is below stage_tol.
  int newton_iters = 0;
  int newton_maxiter = 60;
  bool linear_fast_path = true;

  void validate() const;
};

struct StepStats {
  Real dt = 0.0;
  std::vector<int> stage_iterations;
  std::vector<Real> stage_residuals;
  int fallback_cells = 0;
  bool fast_path = false;

  int iterations() const;
};

/// Everything a step needs besides the state and the time step.
struct Discretization {
  Model model;
  Grid grid;
  BoundaryPolicy policy;
  ReconstructionOptions recon;
  FluctuationKind fluctuation = FluctuationKind::PWCR;
  ViscosityRule viscosity;
  SolverConfig solver;
};

/// cfl dx / max_i speed(u_i), clamped to t_remaining.
Real compute_dt(Real cfl, const Grid& grid, const CellField& averages, const Model& model,
                Real t_remaining = std::numeric_limits<Real>::infinity());

/// Stage operator L(u^f) for one part of the split, with the time-n
/// reconstruction frozen.
class SpatialOperator {
 public:
  SpatialOperator(const Discretization& disc, const SplitSpec& spec, const WBReconstruction& wb,
                  FluctuationKind kind);

  CellField operator()(const CellField& uf, Part part) const;

  /// Cells on each side that L_i depends on.
  int coupling_radius() const noexcept { return kind_ == FluctuationKind::PWLR ? 2 : 1; }

 private:
  struct PartCache {
    std::vector<StateVector> flux_correction;
    std::vector<StateVector> geom_at_average;
    std::vector<StateVector> plain_at_average;
  };
  const PartCache& cache(Part part) const;

  const Discretization& disc_;
  SplitSpec spec_;
  const WBReconstruction& wb_;
  FluctuationKind kind_;
  std::vector<Real> hx_;
  mutable std::array<std::optional<PartCache>, 3> caches_;
};

CellField spatial_operator(const Discretization& disc, const SplitSpec& spec, const WBReconstruction& wb,
                           const CellField& uf, FluctuationKind kind, Part part);

using FieldMap = std::function<CellField(const CellField&)>;

struct StageSolve {
  CellField x;
  int iterations = 0;
  Real residual = 0.0;
};

/// Fixed point of x = G(x). Picard iterates x <- G(x); Newton works on
/// R(x) = x - G(x) with a finite-difference Jacobian: banded via coloring when
/// G couples cells within `coupling_radius`, dense for periodic problems.
StageSolve solve_stage(const FieldMap& G, CellField guess, const SolverConfig& cfg, StageMethod method,
                       int coupling_radius, bool dense_jacobian = false);

/// Direct solve of the linear transport stage x = rhs + a dt L(x) with the
/// tridiagonal (PWCR) or pentadiagonal (PWLR) matrix written out explicitly.
CellField solve_transport_stage(const Discretization& disc, const WBReconstruction& wb, FluctuationKind kind,
                                const CellField& rhs, const CellField& l_at_zero, Real a_dt);

struct StepResult {
  CellField u;
  StepStats stats;
};

/// One step of the time-fluctuation scheme u^{n+1} = u^n + u^f with the given
/// tableau. Explicit mode evaluates the full operator through the explicit
/// tableau; implicit mode the full operator through the implicit one;
/// semi-implicit mode splits per `regime`.
StepResult step(const Discretization& disc, const ButcherPair& tableau, TimeMode mode, SplitRegime regime,
                const CellField& u, Real dt);

/// Order-1 schemes force the first-order reconstruction and PWCR.
StepResult step_backward_euler(const Discretization& disc, const CellField& u, Real dt);
StepResult step_sdirk2(const Discretization& disc, const CellField& u, Real dt);
StepResult step_imex1(const Discretization& disc, SplitRegime regime, const CellField& u, Real dt);
StepResult step_imex2(const Discretization& disc, SplitRegime regime, const CellField& u, Real dt);
StepResult step_explicit(const Discretization& disc, int order, const CellField& u, Real dt);

}  // namespace wbfv
