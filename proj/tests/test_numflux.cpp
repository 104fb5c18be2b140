#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "wbfv/errors.hpp"
#include "wbfv/numflux.hpp"

using namespace wbfv;

TEST(Rusanov, HandExamples) {
  const Model t(TransportModel{});
  EXPECT_DOUBLE_EQ(rusanov(t, StateVector(1.0), StateVector(2.0), ViscosityRule::fixed(1.0))[0], 1.0);
  const Model b(BurgersModel{});
  EXPECT_DOUBLE_EQ(rusanov(b, StateVector(1.0), StateVector(-1.0), ViscosityRule::local_max())[0], 1.5);
}

TEST(Rusanov, ViscosityRules) {
  EXPECT_THROW(ViscosityRule::fixed(0.0), ConfigError);
  EXPECT_THROW(ViscosityRule::fixed(-1.0), ConfigError);
  const auto tr = ViscosityRule::default_for(Model(TransportModel{-3.0, 1.0}));
  EXPECT_EQ(tr.kind, ViscosityRule::Kind::FixedK);
  EXPECT_DOUBLE_EQ(tr.k, 3.0);
  EXPECT_EQ(ViscosityRule::default_for(Model(BurgersModel{})).kind, ViscosityRule::Kind::LocalMax);
  EXPECT_EQ(ViscosityRule::default_for(Model(ShallowWaterModel{})).kind, ViscosityRule::Kind::LocalMax);
}

TEST(Rusanov, ConsistencyOnRandomStates) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<Real> s(-3.0, 3.0), h(0.1, 4.0);
  const Model t(TransportModel{0.7, 1.0}), b(BurgersModel{}), w(ShallowWaterModel{});
  for (int k = 0; k < 100; ++k) {
    const StateVector us(s(rng)), uw(h(rng), s(rng));
    EXPECT_DOUBLE_EQ(rusanov(t, us, us, ViscosityRule::fixed(0.7))[0], t.flux(us)[0]);
    EXPECT_DOUBLE_EQ(rusanov(b, us, us, ViscosityRule::local_max())[0], b.flux(us)[0]);
    const auto f = rusanov(w, uw, uw, ViscosityRule::local_max());
    EXPECT_DOUBLE_EQ(f[0], w.flux(uw)[0]);
    EXPECT_DOUBLE_EQ(f[1], w.flux(uw)[1]);
  }
}

TEST(Rusanov, MonotoneForScalarModels) {
  // F(uL, uR) nondecreasing in uL and nonincreasing in uR when k bounds |f'|
  std::mt19937 rng(9);
  std::uniform_real_distribution<Real> s(-2.0, 2.0);
  const Model b(BurgersModel{});
  const auto rule = ViscosityRule::fixed(2.5);
  for (int k = 0; k < 200; ++k) {
    const StateVector l(s(rng)), r(s(rng));
    const Real e = 1e-6;
    const Real dl = rusanov(b, StateVector(l[0] + e), r, rule)[0] - rusanov(b, l, r, rule)[0];
    const Real dr = rusanov(b, l, StateVector(r[0] + e), rule)[0] - rusanov(b, l, r, rule)[0];
    EXPECT_GE(dl, -1e-15);
    EXPECT_LE(dr, 1e-15);
  }
}

TEST(SplitRusanov, PartConsistencyAndSum) {
  std::mt19937 rng(21);
  std::uniform_real_distribution<Real> h(0.2, 3.0), q(-4.0, 4.0);
  ShallowWaterModel sw;
  sw.manning_k = 0.01;
  const Model m(sw);
  const auto rule = ViscosityRule::local_max();
  for (auto regime :
       {SplitRegime::FullyImplicit, SplitRegime::SemiImplicitPressure, SplitRegime::SemiImplicitFriction}) {
    const SplitSpec spec = split(m, regime);
    for (int k = 0; k < 100; ++k) {
      const StateVector u(h(rng), q(rng));
      const auto fe = split_rusanov(m, Part::Explicit, spec, u, u, rule);
      const auto fi = split_rusanov(m, Part::Implicit, spec, u, u, rule);
      for (int c = 0; c < 2; ++c) {
        EXPECT_NEAR(fe[c], spec.flux(m, u, Part::Explicit)[c], 1e-13);
        EXPECT_NEAR(fi[c], spec.flux(m, u, Part::Implicit)[c], 1e-13);
        EXPECT_NEAR(fe[c] + fi[c], m.flux(u)[c], 1e-12 * std::max<Real>(1.0, std::abs(m.flux(u)[c])));
      }
    }
  }
}

TEST(SplitRusanov, PressureViscositiesAddUp) {
  // Explicit + implicit parts equal a Rusanov flux whose k is the sum of the part bounds.
  std::mt19937 rng(33);
  std::uniform_real_distribution<Real> h(0.2, 3.0), q(-4.0, 4.0);
  const Model m(ShallowWaterModel{});
  const SplitSpec spec = split(m, SplitRegime::SemiImplicitPressure);
  for (int k = 0; k < 100; ++k) {
    const StateVector l(h(rng), q(rng)), r(h(rng), q(rng));
    const Real ke = std::max(std::abs(l[1] / l[0]), std::abs(r[1] / r[0]));
    const Real ki = std::max(std::sqrt(9.81 * l[0]), std::sqrt(9.81 * r[0]));
    const auto sum = split_rusanov(m, Part::Explicit, spec, l, r, ViscosityRule::local_max()) +
                     split_rusanov(m, Part::Implicit, spec, l, r, ViscosityRule::local_max());
    const auto whole = rusanov(m, l, r, ViscosityRule::fixed(ke + ki));
    for (int c = 0; c < 2; ++c) EXPECT_NEAR(sum[c], whole[c], 1e-12 * std::max<Real>(1.0, std::abs(whole[c])));
  }
}

TEST(SplitRusanov, FullPartIsPlainRusanov) {
  const Model m(ShallowWaterModel{});
  const SplitSpec spec = split(m, SplitRegime::SemiImplicitPressure);
  const StateVector l(1.0, 0.5), r(1.2, -0.3);
  EXPECT_EQ(split_rusanov(m, Part::Full, spec, l, r, ViscosityRule::local_max()),
            rusanov(m, l, r, ViscosityRule::local_max()));
}
