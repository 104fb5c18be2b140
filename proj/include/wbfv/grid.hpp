#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "wbfv/state.hpp"

namespace wbfv {

/// Uniform 1D mesh on [x_left, x_right].
///
/// Cell i spans [interface(i), interface(i+1)] with centre cell_center(i).
/// Negative indices and indices >= n_cells() address ghost cells.
class Grid {
 public:
  static constexpr int kMinCells = 3;

  Grid(Real x_left, Real x_right, int n_cells);

  Real x_left() const noexcept { return x_left_; }
  Real x_right() const noexcept { return x_right_; }
  int n_cells() const noexcept { return n_; }
  Real dx() const noexcept { return dx_; }

  Real cell_center(int i) const noexcept { return x_left_ + (i + 0.5) * dx_; }
  Real interface(int i) const noexcept { return x_left_ + i * dx_; }

 private:
  Real x_left_;
  Real x_right_;
  int n_;
  Real dx_;
};

Grid build_grid(Real x_left, Real x_right, int n_cells);

/// Quadrature rule on the reference cell [0, 1].
struct Quadrature {
  std::vector<Real> nodes;
  std::vector<Real> weights;

  static Quadrature midpoint() { return {{0.5}, {1.0}}; }

  Real weight_sum() const;

  /// Approximate cell average of f over cell i.
  template <class F>
  Real cell_average(const Grid& grid, int i, F&& f) const {
    Real acc = 0.0;
    for (std::size_t m = 0; m < nodes.size(); ++m)
      acc += weights[m] * f(grid.interface(i) + nodes[m] * grid.dx());
    return acc;
  }
};

/// Cell values of an N-component field on a grid (no halo).
class CellField {
 public:
  CellField() = default;
  CellField(int n_cells, std::size_t components)
      : components_(components), values_(static_cast<std::size_t>(n_cells), StateVector::zeros(components)) {}
  explicit CellField(std::vector<StateVector> values);

  int n_cells() const noexcept { return static_cast<int>(values_.size()); }
  std::size_t components() const noexcept { return components_; }

  StateVector& operator[](int i) { return values_[static_cast<std::size_t>(i)]; }
  const StateVector& operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }

  const std::vector<StateVector>& values() const noexcept { return values_; }

  /// Max over cells and components of |value|.
  Real max_abs() const;

  friend CellField operator+(const CellField& a, const CellField& b);
  friend CellField operator-(const CellField& a, const CellField& b);
  friend CellField operator*(Real s, const CellField& a);
  CellField& axpy(Real s, const CellField& x);

 private:
  std::size_t components_ = 1;
  std::vector<StateVector> values_;
};

/// Cell field with `width` ghost cells on each side; index range [-width, n + width).
class HaloField {
 public:
  HaloField(int n_cells, int width, std::size_t components)
      : n_(n_cells), width_(width),
        values_(static_cast<std::size_t>(n_cells + 2 * width), StateVector::zeros(components)) {}

  int n_cells() const noexcept { return n_; }
  int width() const noexcept { return width_; }

  StateVector& operator[](int i) { return values_[static_cast<std::size_t>(i + width_)]; }
  const StateVector& operator[](int i) const { return values_[static_cast<std::size_t>(i + width_)]; }

  friend bool operator==(const HaloField&, const HaloField&) = default;

 private:
  int n_;
  int width_;
  std::vector<StateVector> values_;
};

enum class BoundaryKind {
  Periodic,
  Transmissive,
  Dirichlet,
  StationaryExtension,
  /// Ghost cells hold fixed precomputed states, typically an unperturbed steady solution.
  Prescribed,
};

enum class Side { Left, Right };

struct BoundarySide {
  BoundaryKind kind = BoundaryKind::Transmissive;
  /// Dirichlet: components with mask[c] set take values[c]; the rest are copied.
  std::array<bool, kMaxComponents> mask{};
  StateVector values;
  /// Prescribed: ghost states ordered from the boundary outwards (nearest first).
  std::vector<StateVector> ghosts;

  static BoundarySide periodic() { return {BoundaryKind::Periodic, {}, {}, {}}; }
  static BoundarySide transmissive() { return {BoundaryKind::Transmissive, {}, {}, {}}; }
  static BoundarySide stationary_extension() { return {BoundaryKind::StationaryExtension, {}, {}, {}}; }
  static BoundarySide dirichlet(std::size_t component, Real value, std::size_t n_components);
  static BoundarySide prescribed(std::vector<StateVector> ghosts) {
    return {BoundaryKind::Prescribed, {}, {}, std::move(ghosts)};
  }
};

struct BoundaryPolicy {
  BoundarySide left;
  BoundarySide right;

  static BoundaryPolicy periodic() { return {BoundarySide::periodic(), BoundarySide::periodic()}; }
  static BoundaryPolicy transmissive() { return {BoundarySide::transmissive(), BoundarySide::transmissive()}; }
  static BoundaryPolicy stationary_extension() {
    return {BoundarySide::stationary_extension(), BoundarySide::stationary_extension()};
  }

  bool periodic_any() const noexcept {
    return left.kind == BoundaryKind::Periodic || right.kind == BoundaryKind::Periodic;
  }
  void validate() const;
};

/// Evaluates the boundary cell's stationary profile at a ghost centre.
/// Returns nullopt when no profile is available for that side.
using GhostProfile = std::function<std::optional<StateVector>(Side, Real x)>;

/// Fill `width` ghost layers around cell averages.
HaloField extend_with_ghosts(const CellField& field, const Grid& grid, const BoundaryPolicy& policy, int width,
                             const GhostProfile& profile = {});

/// Ghost rule for time fluctuations: zero next to Dirichlet, StationaryExtension
/// and Prescribed boundaries, copied for Transmissive, wrapped for Periodic.
HaloField extend_fluctuation(const CellField& uf, const BoundaryPolicy& policy, int width);

}  // namespace wbfv
