#pragma once

#include <array>
#include <optional>
#include <vector>

#include "wbfv/grid.hpp"
#include "wbfv/models.hpp"

namespace wbfv {

enum class ProfileSource { Exact, Collocated };

std::string to_string(ProfileSource s);

struct CollocationSettings {
  /// Fixed-point tolerance, relative to max(1, |u|).
  Real tol = 1e-14;
  int max_iter = 100;
};

/// Local steady solution u^e_i through the value of anchor cell i, sampled at
/// stencil centres j in [i - radius, i + radius] and at the anchor's interfaces.
class StationaryProfile {
 public:
  static constexpr int kMaxRadius = 2;

  StationaryProfile(int anchor, int radius, ProfileSource source, std::size_t components);

  int anchor() const noexcept { return anchor_; }
  int radius() const noexcept { return radius_; }
  ProfileSource source() const noexcept { return source_; }

  StateVector& at_center(int j) { return centers_[slot(j)]; }
  const StateVector& at_center(int j) const { return centers_[slot(j)]; }

  StateVector left;   ///< u^e_{i;i-1/2}
  StateVector right;  ///< u^e_{i;i+1/2}

 private:
  std::size_t slot(int j) const;

  int anchor_;
  int radius_;
  ProfileSource source_;
  std::array<StateVector, 2 * kMaxRadius + 1> centers_{};
};

/// Closed-form profile value * exp(kappa (x - x_i)); transport and Burgers only.
StationaryProfile exact_profile(const Model& model, const Grid& grid, int i, const StateVector& value, int radius);

/// Rate kappa of the closed-form family; throws ConfigError for shallow water.
Real exact_rate(const Model& model);

/// One implicit-midpoint step of the stationary ODE from (x, u) over delta.
/// Throws ConvergenceError or CriticalPointError.
StateVector collocation_step(const Model& model, Real x, const StateVector& u, Real delta,
                             const CollocationSettings& settings = {});

/// Marches x_i -> x_{i +- 1/2} -> x_{i +- 1} -> ... in half-cell steps.
/// Returns nullopt if any step fails (critical point, inadmissible state,
/// non-convergence).
std::optional<StationaryProfile> collocated_profile(const Model& model, const Grid& grid, int i,
                                                    const StateVector& value, int radius,
                                                    const CollocationSettings& settings = {});

/// Collocated steady solution through `start` at interface `start_interface`,
/// sampled at the centres of cells lo..hi (ghost indices allowed). Cells at or
/// right of the interface are reached by forward half steps, the others by
/// backward ones, following the same waypoints as collocated_profile.
std::vector<StateVector> collocated_trajectory(const Model& model, const Grid& grid, int start_interface,
                                               const StateVector& start, int lo, int hi,
                                               const CollocationSettings& settings = {});

}  // namespace wbfv
