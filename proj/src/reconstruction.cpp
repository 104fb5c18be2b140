#include "wbfv/reconstruction.hpp"

#include <cmath>

#include "wbfv/errors.hpp"

namespace wbfv {

std::string to_string(Limiter l) { return l == Limiter::Minmod ? "minmod" : "avg"; }
std::string to_string(FluctuationKind k) { return k == FluctuationKind::PWCR ? "PWCR" : "PWLR"; }

Limiter parse_limiter(const std::string& s) {
  if (s == "minmod") return Limiter::Minmod;
  if (s == "avg") return Limiter::Avg;
  throw ConfigError("unknown limiter '" + s + "'");
}

FluctuationKind parse_fluctuation(const std::string& s) {
  if (s == "PWCR" || s == "pwcr") return FluctuationKind::PWCR;
  if (s == "PWLR" || s == "pwlr") return FluctuationKind::PWLR;
  throw ConfigError("unknown fluctuation reconstruction '" + s + "'");
}

Real minmod(Real a, Real b) {
  if (a > 0.0 && b > 0.0) return std::min(a, b);
  if (a < 0.0 && b < 0.0) return std::max(a, b);
  return 0.0;
}

Real avg(Real a, Real b) {
  const Real s = std::abs(a) + std::abs(b);
  if (!(s > 0.0)) return 0.0;
  return (std::abs(a) * b + std::abs(b) * a) / s;
}

Real apply_limiter(Limiter l, Real a, Real b) { return l == Limiter::Minmod ? minmod(a, b) : avg(a, b); }

std::pair<Real, Real> frozen_weights(Limiter l, Real d_left, Real d_right) {
  const Real al = std::abs(d_left), ar = std::abs(d_right);
  if (l == Limiter::Avg) {
    const Real s = al + ar;
    if (!(s > 0.0)) return {0.0, 0.0};
    return {ar / s, al / s};
  }
  if (!(d_left * d_right > 0.0)) return {0.0, 0.0};
  return al <= ar ? std::pair<Real, Real>{1.0, 0.0} : std::pair<Real, Real>{0.0, 1.0};
}

WBReconstruction::WBReconstruction(int n_cells, int order, HaloField averages, std::vector<CellReconstruction> cells)
    : n_(n_cells), order_(order), averages_(std::move(averages)), cells_(std::move(cells)) {}

int WBReconstruction::fallback_count() const {
  int c = 0;
  for (int i = 0; i < n_; ++i) c += (*this)[i].fallback ? 1 : 0;
  return c;
}

namespace {

std::optional<StationaryProfile> build_profile(const Model& model, const Grid& grid, int i, const StateVector& value,
                                               int radius, const ReconstructionOptions& opt) {
  if (opt.source == ProfileSource::Exact) return exact_profile(model, grid, i, value, radius);
  return collocated_profile(model, grid, i, value, radius, opt.collocation);
}

}  // namespace

WBReconstruction wb_reconstruct(const Model& model, const Grid& grid, const CellField& averages,
                                const BoundaryPolicy& policy, const ReconstructionOptions& opt) {
  if (opt.order != 1 && opt.order != 2) throw ConfigError("reconstruction: order must be 1 or 2");
  if (opt.source == ProfileSource::Exact) exact_rate(model);
  const int n = averages.n_cells();
  const std::size_t nc = averages.components();

  // Boundary cells' profiles extended two cells outwards feed StationaryExtension ghosts.
  std::optional<StationaryProfile> edge[2];
  if (policy.left.kind == BoundaryKind::StationaryExtension)
    edge[0] = build_profile(model, grid, 0, averages[0], 2, opt);
  if (policy.right.kind == BoundaryKind::StationaryExtension)
    edge[1] = build_profile(model, grid, n - 1, averages[n - 1], 2, opt);
  GhostProfile ghost_profile = [&](Side side, Real x) -> std::optional<StateVector> {
    const auto& p = edge[side == Side::Left ? 0 : 1];
    if (!p) return std::nullopt;
    const int j = static_cast<int>(std::lround((x - grid.x_left()) / grid.dx() - 0.5));
    return p->at_center(j);
  };
  HaloField u = extend_with_ghosts(averages, grid, policy, 2, ghost_profile);

  const int radius = opt.order == 2 ? 1 : 0;
  const Real dx = grid.dx();
  std::vector<CellReconstruction> cells;
  cells.reserve(static_cast<std::size_t>(n + 2));
  for (int i = -1; i <= n; ++i) {
    const StateVector& ui = u[i];
    std::optional<StationaryProfile> prof = build_profile(model, grid, i, ui, radius, opt);
    CellReconstruction rec{prof ? *prof : StationaryProfile(i, radius, opt.source, nc), false, ui, {}, {}, {}, {}, {}, {}, {}};
    rec.fallback = !prof;
    rec.average = ui;
    rec.ue_left = rec.fallback ? StateVector::zeros(nc) : rec.profile.left;
    rec.ue_right = rec.fallback ? StateVector::zeros(nc) : rec.profile.right;
    rec.slope = StateVector::zeros(nc);
    rec.phi_left = StateVector::zeros(nc);
    rec.phi_right = StateVector::zeros(nc);
    // v_i = u_i - u^e_{i;i} vanishes unless the profile is the zero fallback.
    const StateVector vi = rec.fallback ? ui : StateVector::zeros(nc);
    if (opt.order == 2) {
      const StateVector vl = rec.fallback ? u[i - 1] : u[i - 1] - rec.profile.at_center(i - 1);
      const StateVector vr = rec.fallback ? u[i + 1] : u[i + 1] - rec.profile.at_center(i + 1);
      for (std::size_t c = 0; c < nc; ++c) {
        rec.slope[c] = apply_limiter(opt.limiter, (vr[c] - vi[c]) / dx, (vi[c] - vl[c]) / dx);
        auto [pl, pr] = frozen_weights(opt.weights, ui[c] - u[i - 1][c], u[i + 1][c] - ui[c]);
        rec.phi_left[c] = pl;
        rec.phi_right[c] = pr;
      }
    }
    const StateVector half = (0.5 * dx) * rec.slope;
    rec.trace_left = rec.ue_left + vi - half;
    rec.trace_right = rec.ue_right + vi + half;
    cells.push_back(std::move(rec));
  }
  return WBReconstruction(n, opt.order, std::move(u), std::move(cells));
}

FluctuationTraces fluctuation_traces(FluctuationKind kind, const WBReconstruction& wb, const HaloField& uf, int i) {
  const StateVector& c = uf[i];
  if (kind == FluctuationKind::PWCR) return {c, c, c};
  const auto& rec = wb[i];
  StateVector s = hadamard(rec.phi_left, c - uf[i - 1]) + hadamard(rec.phi_right, uf[i + 1] - c);
  s *= 0.5;
  return {c - s, c + s, c};
}

StageStates stage_interface_states(const WBReconstruction& wb, const FluctuationTraces& q, int i) {
  const auto& rec = wb[i];
  return {rec.trace_left + q.left, rec.trace_right + q.right, rec.average + q.center};
}

}  // namespace wbfv
