#include <gtest/gtest.h>

#include <cmath>

#include "wbfv/errors.hpp"
#include "wbfv/grid.hpp"

using namespace wbfv;

TEST(Grid, CentersAndInterfaces) {
  const Grid g(0.0, 2.0, 4);
  EXPECT_DOUBLE_EQ(g.dx(), 0.5);
  EXPECT_DOUBLE_EQ(g.cell_center(0), 0.25);
  EXPECT_DOUBLE_EQ(g.cell_center(3), 1.75);
  EXPECT_DOUBLE_EQ(g.interface(0), 0.0);
  EXPECT_DOUBLE_EQ(g.interface(4), 2.0);
  // ghost cells extend the lattice
  EXPECT_DOUBLE_EQ(g.cell_center(-1), -0.25);
  EXPECT_DOUBLE_EQ(g.cell_center(5), 2.75);
}

TEST(Grid, RejectsDegenerateInput) {
  EXPECT_THROW(Grid(1.0, 1.0, 10), ConfigError);
  EXPECT_THROW(Grid(2.0, 1.0, 10), ConfigError);
  EXPECT_THROW(Grid(0.0, 1.0, 2), ConfigError);
  EXPECT_NO_THROW(Grid(0.0, 1.0, Grid::kMinCells));
}

TEST(Grid, CentersSumToIntervalMidpoint) {
  for (int n : {3, 7, 64, 1000}) {
    const Grid g(-5.0, 5.0, n);
    Real s = 0.0;
    for (int i = 0; i < n; ++i) s += g.cell_center(i);
    EXPECT_NEAR(s / n, 0.0, 1e-12) << n;
  }
}

TEST(Quadrature, MidpointExactForLinear) {
  const Grid g(0.0, 1.0, 10);
  const auto q = Quadrature::midpoint();
  EXPECT_DOUBLE_EQ(q.weight_sum(), 1.0);
  for (int i = 0; i < 10; ++i) {
    const Real avg = q.cell_average(g, i, [](Real x) { return 3.0 * x - 1.0; });
    EXPECT_NEAR(avg, 3.0 * g.cell_center(i) - 1.0, 1e-15);
  }
}

TEST(CellField, Arithmetic) {
  CellField a(3, 2), b(3, 2);
  for (int i = 0; i < 3; ++i) {
    a[i] = StateVector(i, 2.0 * i);
    b[i] = StateVector(1.0, -1.0);
  }
  const CellField s = a + b;
  const CellField d = a - b;
  const CellField m = 2.0 * a;
  EXPECT_EQ(s[2], StateVector(3.0, 3.0));
  EXPECT_EQ(d[0], StateVector(-1.0, 1.0));
  EXPECT_EQ(m[1], StateVector(2.0, 4.0));
  EXPECT_DOUBLE_EQ(a.max_abs(), 4.0);
  CellField c = a;
  c.axpy(-1.0, a);
  EXPECT_DOUBLE_EQ(c.max_abs(), 0.0);
}

namespace {

CellField ramp(int n) {
  CellField f(n, 1);
  for (int i = 0; i < n; ++i) f[i] = StateVector(10.0 + i);
  return f;
}

}  // namespace

TEST(Ghosts, PeriodicWraps) {
  const Grid g(0.0, 1.0, 5);
  const auto h = extend_with_ghosts(ramp(5), g, BoundaryPolicy::periodic(), 2);
  EXPECT_DOUBLE_EQ(h[-1][0], 14.0);
  EXPECT_DOUBLE_EQ(h[-2][0], 13.0);
  EXPECT_DOUBLE_EQ(h[5][0], 10.0);
  EXPECT_DOUBLE_EQ(h[6][0], 11.0);
}

TEST(Ghosts, TransmissiveCopiesBoundaryCell) {
  const Grid g(0.0, 1.0, 5);
  const auto h = extend_with_ghosts(ramp(5), g, BoundaryPolicy::transmissive(), 2);
  EXPECT_DOUBLE_EQ(h[-2][0], 10.0);
  EXPECT_DOUBLE_EQ(h[6][0], 14.0);
}

TEST(Ghosts, DirichletOverridesMaskedComponent) {
  const Grid g(0.0, 1.0, 4);
  CellField f(4, 2);
  for (int i = 0; i < 4; ++i) f[i] = StateVector(2.0 + i, 0.5 * i);
  const BoundaryPolicy p{BoundarySide::dirichlet(1, 1.0, 2), BoundarySide::dirichlet(0, 2.0, 2)};
  const auto h = extend_with_ghosts(f, g, p, 1);
  EXPECT_EQ(h[-1], StateVector(2.0, 1.0));  // h copied, q imposed
  EXPECT_EQ(h[4], StateVector(2.0, 1.5));   // h imposed, q copied
  EXPECT_THROW(BoundarySide::dirichlet(2, 0.0, 2), ConfigError);
}

TEST(Ghosts, PrescribedNearestFirst) {
  const Grid g(0.0, 1.0, 4);
  const BoundaryPolicy p{BoundarySide::prescribed({StateVector(-1.0), StateVector(-2.0)}),
                         BoundarySide::prescribed({StateVector(7.0)})};
  const auto h = extend_with_ghosts(ramp(4), g, p, 1);
  EXPECT_DOUBLE_EQ(h[-1][0], -1.0);
  EXPECT_DOUBLE_EQ(h[4][0], 7.0);
  EXPECT_THROW(extend_with_ghosts(ramp(4), g, p, 2), ConfigError);  // right side has one layer only
}

TEST(Ghosts, StationaryExtensionUsesProfile) {
  const Grid g(0.0, 1.0, 4);
  const GhostProfile prof = [](Side s, Real x) -> std::optional<StateVector> {
    return StateVector(s == Side::Left ? -x : 100.0 + x);
  };
  const auto h = extend_with_ghosts(ramp(4), g, BoundaryPolicy::stationary_extension(), 2, prof);
  EXPECT_DOUBLE_EQ(h[-1][0], 0.125);
  EXPECT_DOUBLE_EQ(h[-2][0], 0.375);
  EXPECT_DOUBLE_EQ(h[5][0], 100.0 + 1.375);
  EXPECT_THROW(extend_with_ghosts(ramp(4), g, BoundaryPolicy::stationary_extension(), 1), ConfigError);
}

TEST(Ghosts, RejectsBadWidthAndOneSidedPeriodic) {
  const Grid g(0.0, 1.0, 4);
  EXPECT_THROW(extend_with_ghosts(ramp(4), g, BoundaryPolicy::transmissive(), 3), ConfigError);
  const BoundaryPolicy bad{BoundarySide::periodic(), BoundarySide::transmissive()};
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Ghosts, FluctuationRules) {
  CellField uf(4, 1);
  for (int i = 0; i < 4; ++i) uf[i] = StateVector(1.0 + i);
  const auto per = extend_fluctuation(uf, BoundaryPolicy::periodic(), 2);
  EXPECT_DOUBLE_EQ(per[-1][0], 4.0);
  EXPECT_DOUBLE_EQ(per[5][0], 2.0);
  const auto tr = extend_fluctuation(uf, BoundaryPolicy::transmissive(), 2);
  EXPECT_DOUBLE_EQ(tr[-2][0], 1.0);
  EXPECT_DOUBLE_EQ(tr[4][0], 4.0);
  for (const auto& p : {BoundaryPolicy::stationary_extension(),
                        BoundaryPolicy{BoundarySide::dirichlet(0, 3.0, 1), BoundarySide::prescribed({})}}) {
    const auto z = extend_fluctuation(uf, p, 2);
    EXPECT_DOUBLE_EQ(z[-1][0], 0.0);
    EXPECT_DOUBLE_EQ(z[-2][0], 0.0);
    EXPECT_DOUBLE_EQ(z[4][0], 0.0);
    EXPECT_DOUBLE_EQ(z[5][0], 0.0);
  }
}
