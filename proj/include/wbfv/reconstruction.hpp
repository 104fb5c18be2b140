#pragma once

#include <vector>

#include "wbfv/grid.hpp"
#include "wbfv/models.hpp"
#include "wbfv/stationary.hpp"

namespace wbfv {

enum class Limiter { Minmod, Avg };
enum class FluctuationKind { PWCR, PWLR };

std::string to_string(Limiter l);
std::string to_string(FluctuationKind k);
Limiter parse_limiter(const std::string& s);
FluctuationKind parse_fluctuation(const std::string& s);

Real minmod(Real a, Real b);
Real avg(Real a, Real b);
Real apply_limiter(Limiter l, Real a, Real b);

/// Frozen weights (phi^L, phi^R) for the piecewise linear fluctuation slope,
/// from the raw differences d_L = u_i - u_{i-1}, d_R = u_{i+1} - u_i.
///
/// Avg:    phi^L = |d_R| / (|d_L| + |d_R|), phi^R = |d_L| / (|d_L| + |d_R|).
/// Minmod: the one-sided difference minmod would pick gets weight 1.
/// Both weights are 0 when the differences vanish (and for minmod when they
/// have opposite signs).
std::pair<Real, Real> frozen_weights(Limiter l, Real d_left, Real d_right);

struct ReconstructionOptions {
  int order = 1;
  Limiter limiter = Limiter::Minmod;
  Limiter weights = Limiter::Avg;
  ProfileSource source = ProfileSource::Collocated;
  CollocationSettings collocation{};
};

/// Time-n reconstruction data for one cell.
struct CellReconstruction {
  StationaryProfile profile;
  /// Profile unavailable: reconstruction of the plain averages (u^e == 0).
  bool fallback = false;
  StateVector average;      ///< u_i^n
  StateVector ue_left;      ///< u^e_{i;i-1/2} (zero on fallback)
  StateVector ue_right;     ///< u^e_{i;i+1/2}
  StateVector trace_left;   ///< u^{n,+}_{i-1/2}
  StateVector trace_right;  ///< u^{n,-}_{i+1/2}
  StateVector slope;        ///< limited slope of v, per unit length
  StateVector phi_left;
  StateVector phi_right;
};

/// Per-cell records for cells -1..n (one ghost record on each side, enough
/// for every interface flux and for piecewise linear fluctuation traces).
class WBReconstruction {
 public:
  WBReconstruction(int n_cells, int order, HaloField averages, std::vector<CellReconstruction> cells);

  int n_cells() const noexcept { return n_; }
  int order() const noexcept { return order_; }
  const HaloField& averages() const noexcept { return averages_; }
  const CellReconstruction& operator[](int i) const { return cells_[static_cast<std::size_t>(i + 1)]; }
  int fallback_count() const;

 private:
  int n_;
  int order_;
  HaloField averages_;
  std::vector<CellReconstruction> cells_;
};

/// Well-balanced reconstruction of the averages at time t^n.
WBReconstruction wb_reconstruct(const Model& model, const Grid& grid, const CellField& averages,
                                const BoundaryPolicy& policy, const ReconstructionOptions& options);

struct FluctuationTraces {
  StateVector left;    ///< Q~_i(x_{i-1/2})
  StateVector right;   ///< Q~_i(x_{i+1/2})
  StateVector center;  ///< Q~_i(x_i)
};

/// Fluctuation reconstruction of cell i from a width-2 fluctuation halo.
FluctuationTraces fluctuation_traces(FluctuationKind kind, const WBReconstruction& wb, const HaloField& uf, int i);

struct StageStates {
  StateVector left;    ///< u^{k,+}_{i-1/2}
  StateVector right;   ///< u^{k,-}_{i+1/2}
  StateVector center;  ///< P^k_i(x_i)
};

StageStates stage_interface_states(const WBReconstruction& wb, const FluctuationTraces& q, int i);

}  // namespace wbfv
