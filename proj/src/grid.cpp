#include "wbfv/grid.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "wbfv/errors.hpp"

namespace wbfv {

Grid::Grid(Real x_left, Real x_right, int n_cells)
    : x_left_(x_left), x_right_(x_right), n_(n_cells), dx_((x_right - x_left) / n_cells) {
  if (!(std::isfinite(x_left) && std::isfinite(x_right)) || !(x_right > x_left))
    throw ConfigError("grid: degenerate interval [" + std::to_string(x_left) + ", " + std::to_string(x_right) + "]");
  if (n_cells < kMinCells)
    throw ConfigError("grid: need at least " + std::to_string(kMinCells) + " cells, got " + std::to_string(n_cells));
}

Grid build_grid(Real x_left, Real x_right, int n_cells) { return Grid(x_left, x_right, n_cells); }

Real Quadrature::weight_sum() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

CellField::CellField(std::vector<StateVector> values)
    : components_(values.empty() ? 1 : values.front().size()), values_(std::move(values)) {}

Real CellField::max_abs() const {
  Real m = 0.0;
  for (const auto& v : values_) m = std::max(m, v.max_abs());
  return m;
}

CellField operator+(const CellField& a, const CellField& b) {
  CellField r = a;
  return r.axpy(1.0, b);
}

CellField operator-(const CellField& a, const CellField& b) {
  CellField r = a;
  return r.axpy(-1.0, b);
}

CellField operator*(Real s, const CellField& a) {
  CellField r = a;
  for (auto& v : r.values_) v *= s;
  return r;
}

CellField& CellField::axpy(Real s, const CellField& x) {
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += s * x.values_[i];
  return *this;
}

BoundarySide BoundarySide::dirichlet(std::size_t component, Real value, std::size_t n_components) {
  if (component >= n_components) throw ConfigError("dirichlet: component index out of range");
  BoundarySide s{BoundaryKind::Dirichlet, {}, StateVector::zeros(n_components), {}};
  s.mask[component] = true;
  s.values[component] = value;
  return s;
}

void BoundaryPolicy::validate() const {
  if ((left.kind == BoundaryKind::Periodic) != (right.kind == BoundaryKind::Periodic))
    throw ConfigError("boundary: periodic must be set on both sides");
}

namespace {

StateVector ghost_value(const BoundarySide& side, Side which, const CellField& field, const Grid& grid, int ghost,
                        int layer, const GhostProfile& profile) {
  const int n = field.n_cells();
  const int nearest = which == Side::Left ? 0 : n - 1;
  switch (side.kind) {
    case BoundaryKind::Periodic:
      return field[((ghost % n) + n) % n];
    case BoundaryKind::Transmissive:
      return field[nearest];
    case BoundaryKind::Dirichlet: {
      StateVector g = field[nearest];
      for (std::size_t c = 0; c < g.size(); ++c)
        if (side.mask[c]) g[c] = side.values[c];
      return g;
    }
    case BoundaryKind::StationaryExtension: {
      std::optional<StateVector> g;
      if (profile) g = profile(which, grid.cell_center(ghost));
      if (!g) throw ConfigError("boundary: stationary extension requested but no profile is available");
      return *g;
    }
    case BoundaryKind::Prescribed:
      if (static_cast<std::size_t>(layer) >= side.ghosts.size())
        throw ConfigError("boundary: prescribed ghost layer " + std::to_string(layer) + " missing");
      return side.ghosts[static_cast<std::size_t>(layer)];
  }
  return field[nearest];
}

}  // namespace

HaloField extend_with_ghosts(const CellField& field, const Grid& grid, const BoundaryPolicy& policy, int width,
                             const GhostProfile& profile) {
  if (width < 1 || width > 2) throw ConfigError("ghosts: halo width must be 1 or 2");
  policy.validate();
  const int n = field.n_cells();
  HaloField h(n, width, field.components());
  for (int i = 0; i < n; ++i) h[i] = field[i];
  for (int layer = 0; layer < width; ++layer) {
    const int gl = -1 - layer;
    const int gr = n + layer;
    h[gl] = ghost_value(policy.left, Side::Left, field, grid, gl, layer, profile);
    h[gr] = ghost_value(policy.right, Side::Right, field, grid, gr, layer, profile);
  }
  return h;
}

HaloField extend_fluctuation(const CellField& uf, const BoundaryPolicy& policy, int width) {
  const int n = uf.n_cells();
  HaloField h(n, width, uf.components());
  for (int i = 0; i < n; ++i) h[i] = uf[i];
  auto fill = [&](const BoundarySide& side, int ghost, int nearest) {
    switch (side.kind) {
      case BoundaryKind::Periodic:
        h[ghost] = uf[((ghost % n) + n) % n];
        break;
      case BoundaryKind::Transmissive:
        h[ghost] = uf[nearest];
        break;
      default:
        h[ghost] = StateVector::zeros(uf.components());
        break;
    }
  };
  for (int layer = 0; layer < width; ++layer) {
    fill(policy.left, -1 - layer, 0);
    fill(policy.right, n + layer, n - 1);
  }
  return h;
}

}  // namespace wbfv
