#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "wbfv/errors.hpp"
#include "wbfv/models.hpp"

using namespace wbfv;

namespace {

ShallowWaterModel swe(Real k = 0.0, DepthFunction d = DepthFunction::flat()) {
  ShallowWaterModel m;
  m.manning_k = k;
  m.depth = d;
  return m;
}

/// Random subcritical or supercritical state well away from Fr = 1.
StateVector random_swe_state(std::mt19937& rng) {
  std::uniform_real_distribution<Real> h(0.2, 3.0), fr(0.05, 0.8), sign(-1.0, 1.0), sup(1.3, 4.0);
  const Real hh = h(rng);
  const Real c = std::sqrt(9.81 * hh);
  const Real f = sign(rng) > 0.0 ? fr(rng) : sup(rng);
  return {hh, (sign(rng) > 0.0 ? 1.0 : -1.0) * f * c * hh};
}

}  // namespace

TEST(Models, FluxExamples) {
  EXPECT_DOUBLE_EQ(Model(TransportModel{}).flux(StateVector(2.0))[0], 2.0);
  EXPECT_DOUBLE_EQ(Model(BurgersModel{}).flux(StateVector(2.0))[0], 2.0);
  const auto f = Model(swe()).flux({2.0, 3.0});
  EXPECT_DOUBLE_EQ(f[0], 3.0);
  EXPECT_NEAR(f[1], 24.12, 1e-12);
}

TEST(Models, SourceExamples) {
  EXPECT_DOUBLE_EQ(Model(TransportModel{}).source_geom(StateVector(3.0))[0], 3.0);
  EXPECT_DOUBLE_EQ(Model(BurgersModel{}).source_geom(StateVector(2.0))[0], 4.0);
  const auto s = Model(swe()).source_geom({2.0, 5.0});
  EXPECT_DOUBLE_EQ(s[0], 0.0);
  EXPECT_NEAR(s[1], 19.62, 1e-12);

  EXPECT_EQ(Model(swe()).source_plain({2.0, 3.0}), StateVector(0.0, 0.0));
  EXPECT_DOUBLE_EQ(Model(TransportModel{}).source_plain(StateVector(7.0))[0], 0.0);
  const auto fr = Model(swe(0.01)).source_plain({0.3, 3.0});
  EXPECT_DOUBLE_EQ(fr[0], 0.0);
  EXPECT_NEAR(fr[1], -0.01 * 9.0 / std::pow(0.3, 7.0 / 3.0), 1e-12);
  EXPECT_NEAR(fr[1], -1.4929, 1e-3);  // rounded hand value
}

TEST(Models, WaveSpeedExamples) {
  TransportModel t;
  t.c = -2.0;
  EXPECT_DOUBLE_EQ(Model(t).max_wave_speed(StateVector(1.0)), 2.0);
  EXPECT_DOUBLE_EQ(Model(BurgersModel{}).max_wave_speed(StateVector(-3.0)), 3.0);
  EXPECT_NEAR(Model(swe()).max_wave_speed({0.3, 3.0}), 10.0 + std::sqrt(2.943), 1e-12);
}

TEST(Models, StationarySlopeExamples) {
  EXPECT_DOUBLE_EQ(Model(TransportModel{}).stationary_slope(StateVector(5.0), 0.3)[0], 5.0);
  TransportModel t{2.0, 3.0};
  EXPECT_DOUBLE_EQ(Model(t).stationary_slope(StateVector(4.0), 0.0)[0], 6.0);
  const auto flat = Model(swe()).stationary_slope({2.0, 1.0}, 0.7);
  EXPECT_DOUBLE_EQ(flat[0], 0.0);
  EXPECT_DOUBLE_EQ(flat[1], 0.0);
  const auto fr = Model(swe(0.01)).stationary_slope({0.3, 3.0}, 0.5);
  const Real expected = (-0.01 * 9.0 / std::pow(0.3, 7.0 / 3.0)) / (9.81 * 0.3 - 100.0);
  EXPECT_NEAR(fr[0], expected, 1e-14);
  EXPECT_NEAR(fr[0], 0.015382, 2e-5);  // rounded hand value
  EXPECT_DOUBLE_EQ(fr[1], 0.0);
}

TEST(Models, CriticalStateRaises) {
  const Real h = 1.0;
  const Real q = std::sqrt(9.81 * h) * h;  // Fr = 1
  EXPECT_THROW(Model(swe()).stationary_slope({h, q}, 0.0), CriticalPointError);
  EXPECT_NEAR(froude(swe(), {h, q}), 1.0, 1e-14);
}

TEST(Models, FroudeExamples) {
  EXPECT_DOUBLE_EQ(froude(swe(), {1.0, 0.0}), 0.0);
  EXPECT_NEAR(froude(swe(), {0.3, 3.0}), 10.0 / std::sqrt(2.943), 1e-12);
  EXPECT_NEAR(froude(swe(), {0.3, 3.0}), 5.830, 1e-3);
}

TEST(Models, InvalidStatesAndParameters) {
  const Model m(swe());
  EXPECT_THROW(m.flux({0.0, 1.0}), StateError);
  EXPECT_THROW(m.flux({-1.0, 1.0}), StateError);
  EXPECT_THROW(m.flux({NAN, 1.0}), StateError);
  EXPECT_THROW(Model(TransportModel{0.0, 1.0}), ConfigError);
  ShallowWaterModel bad;
  bad.g = 0.0;
  EXPECT_THROW(Model{bad}, ConfigError);
  bad = swe(-0.1);
  EXPECT_THROW(Model{bad}, ConfigError);
}

TEST(Depth, DerivativeMatchesFiniteDifference) {
  for (auto d : {DepthFunction::cos_bump(), DepthFunction::gaussian(), DepthFunction::exp_cos(),
                 DepthFunction::flat(0.7)}) {
    for (Real x = -2.95; x < 3.0; x += 0.0731) {
      const Real eps = 1e-6;
      const Real fd = (d.value(x + eps) - d.value(x - eps)) / (2 * eps);
      const Real ex = d.derivative(x);
      EXPECT_LE(std::abs(fd - ex), 1e-6 * std::max<Real>(1.0, std::abs(ex))) << to_string(d.kind) << " x=" << x;
    }
  }
}

TEST(Depth, ClosedForms) {
  const auto cb = DepthFunction::cos_bump();
  EXPECT_DOUBLE_EQ(cb.value(0.0), 0.0);
  EXPECT_NEAR(cb.value(1.5), -0.5, 1e-15);  // bump crest
  EXPECT_DOUBLE_EQ(cb.value(2.0), 0.0);
  EXPECT_NEAR(DepthFunction::gaussian().value(0.0), 0.5, 1e-15);
  EXPECT_NEAR(DepthFunction::exp_cos().value(0.0), 0.5, 1e-15);   // cos = 1
  EXPECT_NEAR(DepthFunction::exp_cos().value(0.25), 1.0, 1e-15);  // cos = -1
  EXPECT_EQ(parse_depth_kind("gaussian"), DepthKind::Gaussian);
  EXPECT_THROW(parse_depth_kind("parabola"), ConfigError);
}

TEST(Models, WaveSpeedMatchesJacobianSpectralRadius) {
  std::mt19937 rng(7);
  const Model m(swe());
  for (int trial = 0; trial < 100; ++trial) {
    const StateVector u = random_swe_state(rng);
    const Real e = 1e-7;
    Real J[2][2];
    for (int c = 0; c < 2; ++c) {
      StateVector up = u, um = u;
      const Real step = e * std::max<Real>(1.0, std::abs(u[c]));
      up[c] += step;
      um[c] -= step;
      const auto df = (m.flux(up) - m.flux(um)) * (1.0 / (2 * step));
      J[0][c] = df[0];
      J[1][c] = df[1];
    }
    const Real tr = J[0][0] + J[1][1];
    const Real det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    const Real disc = std::sqrt(tr * tr / 4 - det);
    const Real rho = std::max(std::abs(tr / 2 + disc), std::abs(tr / 2 - disc));
    EXPECT_NEAR(m.max_wave_speed(u), rho, 1e-5 * rho);
  }
}

TEST(Models, StationarySlopeSatisfiesOde) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<Real> xs(0.0, 1.0);
  const Model m(swe(0.01, DepthFunction::exp_cos()));
  for (int trial = 0; trial < 100; ++trial) {
    const StateVector u = random_swe_state(rng);
    const Real x = xs(rng);
    const StateVector du = m.stationary_slope(u, x);
    // J(u) du = S_geom H_x + S_plain with J by central differences
    StateVector lhs = StateVector::zeros(2);
    for (int c = 0; c < 2; ++c) {
      StateVector up = u, um = u;
      const Real step = 1e-6 * std::max<Real>(1.0, std::abs(u[c]));
      up[c] += step;
      um[c] -= step;
      lhs += (m.flux(up) - m.flux(um)) * (du[c] / (2 * step));
    }
    const StateVector rhs = m.source_geom(u) * m.depth_slope(x) + m.source_plain(u);
    for (int c = 0; c < 2; ++c)
      EXPECT_NEAR(lhs[c], rhs[c], 1e-6 * std::max<Real>(1.0, std::abs(rhs[c])));
  }
}

TEST(Split, SumOfPartsEqualsWhole) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<Real> xs(-1.0, 1.0);
  for (Real k : {0.0, 0.01}) {
    const Model m(swe(k, DepthFunction::gaussian()));
    std::vector<SplitRegime> regimes{SplitRegime::FullyImplicit, SplitRegime::SemiImplicitPressure};
    if (k > 0) regimes.push_back(SplitRegime::SemiImplicitFriction);
    for (auto r : regimes) {
      const SplitSpec s = split(m, r);
      for (int trial = 0; trial < 100; ++trial) {
        const StateVector u = random_swe_state(rng);
        const Real x = xs(rng);
        const Real hx = m.depth_slope(x);
        const auto f = s.flux(m, u, Part::Explicit) + s.flux(m, u, Part::Implicit);
        const auto src = (s.source_geom(m, u, Part::Explicit) + s.source_geom(m, u, Part::Implicit)) * hx +
                         s.source_plain(m, u, Part::Explicit) + s.source_plain(m, u, Part::Implicit);
        const auto full_src = m.source_geom(u) * hx + m.source_plain(u);
        for (int c = 0; c < 2; ++c) {
          EXPECT_NEAR(f[c], m.flux(u)[c], 1e-12 * std::max<Real>(1.0, std::abs(m.flux(u)[c])));
          EXPECT_NEAR(src[c], full_src[c], 1e-12 * std::max<Real>(1.0, std::abs(full_src[c])));
        }
        EXPECT_EQ(s.flux(m, u, Part::Full), m.flux(u));
      }
    }
  }
}

TEST(Split, Examples) {
  const Model m(swe());
  const auto fi = split(m, SplitRegime::FullyImplicit);
  EXPECT_EQ(fi.flux(m, {2.0, 3.0}, Part::Explicit), StateVector(0.0, 0.0));
  EXPECT_EQ(fi.flux(m, {2.0, 3.0}, Part::Implicit), m.flux({2.0, 3.0}));

  const auto p = split(m, SplitRegime::SemiImplicitPressure);
  const auto f1 = p.flux(m, {2.0, 3.0}, Part::Explicit);
  const auto f2 = p.flux(m, {2.0, 3.0}, Part::Implicit);
  EXPECT_DOUBLE_EQ(f1[0], 0.0);
  EXPECT_DOUBLE_EQ(f1[1], 4.5);
  EXPECT_DOUBLE_EQ(f2[0], 3.0);
  EXPECT_NEAR(f2[1], 19.62, 1e-12);
  // geometric source sits in the implicit part
  EXPECT_EQ(p.source_geom(m, {2.0, 3.0}, Part::Explicit), StateVector(0.0, 0.0));
  EXPECT_NEAR(p.source_geom(m, {2.0, 3.0}, Part::Implicit)[1], 19.62, 1e-12);

  const Model mf(swe(0.01));
  const auto fr = split(mf, SplitRegime::SemiImplicitFriction);
  EXPECT_EQ(fr.flux(mf, {0.3, 3.0}, Part::Explicit), mf.flux({0.3, 3.0}));
  EXPECT_EQ(fr.source_geom(mf, {0.3, 3.0}, Part::Explicit), mf.source_geom({0.3, 3.0}));
  EXPECT_EQ(fr.flux(mf, {0.3, 3.0}, Part::Implicit), StateVector(0.0, 0.0));
  EXPECT_EQ(fr.source_plain(mf, {0.3, 3.0}, Part::Implicit), mf.source_plain({0.3, 3.0}));
}

TEST(Split, RejectsUnsupportedRegimes) {
  EXPECT_THROW(split(Model(TransportModel{}), SplitRegime::SemiImplicitPressure), ConfigError);
  EXPECT_THROW(split(Model(BurgersModel{}), SplitRegime::SemiImplicitFriction), ConfigError);
  EXPECT_THROW(split(Model(swe(0.0)), SplitRegime::SemiImplicitFriction), ConfigError);
  EXPECT_NO_THROW(split(Model(TransportModel{}), SplitRegime::FullyImplicit));
}
