#include "wbfv/stationary.hpp"

#include <cmath>

#include "wbfv/errors.hpp"

namespace wbfv {

std::string to_string(ProfileSource s) { return s == ProfileSource::Exact ? "exact" : "collocated"; }

StationaryProfile::StationaryProfile(int anchor, int radius, ProfileSource source, std::size_t components)
    : left(StateVector::zeros(components)),
      right(StateVector::zeros(components)),
      anchor_(anchor),
      radius_(radius),
      source_(source) {
  if (radius < 0 || radius > kMaxRadius) throw ConfigError("profile: stencil radius out of range");
  centers_.fill(StateVector::zeros(components));
}

std::size_t StationaryProfile::slot(int j) const {
  const int off = j - anchor_;
  assert(off >= -radius_ && off <= radius_);
  return static_cast<std::size_t>(off + kMaxRadius);
}

Real exact_rate(const Model& model) {
  if (const auto* t = model.transport()) return t->alpha / t->c;
  if (const auto* b = model.burgers()) return b->alpha;
  throw ConfigError("exact profile: no closed-form stationary solution for model '" + model.name() + "'");
}

StationaryProfile exact_profile(const Model& model, const Grid& grid, int i, const StateVector& value, int radius) {
  const Real kappa = exact_rate(model);
  const Real xi = grid.cell_center(i);
  StationaryProfile p(i, radius, ProfileSource::Exact, value.size());
  auto eval = [&](Real x) { return value * std::exp(kappa * (x - xi)); };
  p.at_center(i) = value;
  for (int j = i - radius; j <= i + radius; ++j)
    if (j != i) p.at_center(j) = eval(grid.cell_center(j));
  p.left = eval(grid.interface(i));
  p.right = eval(grid.interface(i + 1));
  return p;
}

StateVector collocation_step(const Model& model, Real x, const StateVector& u, Real delta,
                             const CollocationSettings& settings) {
  if (delta == 0.0) return u;
  const Real xm = x + 0.5 * delta;
  StateVector w = u;
  Real change = 0.0;
  for (int it = 0; it < settings.max_iter; ++it) {
    StateVector mid = 0.5 * (u + w);
    StateVector next = u + delta * model.stationary_slope(mid, xm);
    if (!next.all_finite()) throw ConvergenceError("collocation step: non-finite iterate", it + 1, change);
    change = (next - w).max_abs();
    w = next;
    if (change <= settings.tol * std::max<Real>(1.0, w.max_abs())) return w;
  }
  throw ConvergenceError("collocation step: fixed point did not converge", settings.max_iter, change);
}

namespace {

// Walk from cell centre `i` through `steps` half steps in direction `dir`,
// writing interface and centre waypoints into the profile.
void march(const Model& model, const Grid& grid, StationaryProfile& p, int i, int dir, int radius,
           const CollocationSettings& settings) {
  const Real half = 0.5 * grid.dx() * dir;
  StateVector u = p.at_center(i);
  int cell = i;
  // Interface adjacent to the anchor in direction dir.
  int face = dir > 0 ? i + 1 : i;
  u = collocation_step(model, grid.cell_center(cell), u, half, settings);
  (dir > 0 ? p.right : p.left) = u;
  for (int r = 1; r <= radius; ++r) {
    cell += dir;
    u = collocation_step(model, grid.interface(face), u, half, settings);
    p.at_center(cell) = u;
    if (r == radius) break;
    u = collocation_step(model, grid.cell_center(cell), u, half, settings);
    face += dir;
  }
}

}  // namespace

std::optional<StationaryProfile> collocated_profile(const Model& model, const Grid& grid, int i,
                                                    const StateVector& value, int radius,
                                                    const CollocationSettings& settings) {
  StationaryProfile p(i, radius, ProfileSource::Collocated, value.size());
  p.at_center(i) = value;
  try {
    model.validate(value);
    march(model, grid, p, i, +1, radius, settings);
    march(model, grid, p, i, -1, radius, settings);
  } catch (const StateError&) {
    return std::nullopt;
  } catch (const ConvergenceError&) {
    return std::nullopt;
  }
  return p;
}

std::vector<StateVector> collocated_trajectory(const Model& model, const Grid& grid, int start_interface,
                                               const StateVector& start, int lo, int hi,
                                               const CollocationSettings& settings) {
  if (hi < lo) return {};
  std::vector<StateVector> out(static_cast<std::size_t>(hi - lo + 1), start);
  const Real half = 0.5 * grid.dx();
  if (hi >= start_interface) {
    StateVector u = start;
    int face = start_interface;
    for (int cell = start_interface; cell <= hi; ++cell) {
      u = collocation_step(model, grid.interface(face), u, half, settings);
      if (cell >= lo) out[static_cast<std::size_t>(cell - lo)] = u;
      if (cell == hi) break;
      u = collocation_step(model, grid.cell_center(cell), u, half, settings);
      ++face;
    }
  }
  if (lo < start_interface) {
    StateVector u = start;
    int face = start_interface;
    for (int cell = start_interface - 1; cell >= lo; --cell) {
      u = collocation_step(model, grid.interface(face), u, -half, settings);
      if (cell <= hi) out[static_cast<std::size_t>(cell - lo)] = u;
      if (cell == lo) break;
      u = collocation_step(model, grid.cell_center(cell), u, -half, settings);
      --face;
    }
  }
  return out;
}

}  // namespace wbfv
