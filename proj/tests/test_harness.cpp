#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "wbfv/errors.hpp"
#include "wbfv/harness.hpp"

using namespace wbfv;

TEST(Metrics, L1Error) {
  const Grid g(0.0, 1.5, 3);  // dx = 0.5
  CellField a(3, 1), b(3, 1);
  a[0] = StateVector(1.0);
  b[1] = StateVector(1.0);
  EXPECT_DOUBLE_EQ(l1_error(a, b, g)[0], 1.0);
  EXPECT_DOUBLE_EQ(l1_error(a, a, g)[0], 0.0);
  EXPECT_THROW(l1_error(a, CellField(4, 1), g), ConfigError);
}

TEST(Metrics, ObservedOrder) {
  const auto o = observed_order({0.4, 0.1});
  ASSERT_TRUE(o[0]);
  EXPECT_DOUBLE_EQ(*o[0], 2.0);
  EXPECT_NEAR(*observed_order({2.72e-1, 1.57e-1})[0], 0.79, 0.005);
  EXPECT_DOUBLE_EQ(*observed_order({std::exp(1.0), std::exp(1.0)})[0], 0.0);
  const auto z = observed_order({1e-3, 0.0, 1e-4});
  EXPECT_FALSE(z[0]);
  EXPECT_FALSE(z[1]);
}

TEST(Metrics, RestrictAverage) {
  CellField f(6, 1);
  for (int i = 0; i < 6; ++i) f[i] = StateVector(i);
  const auto r = restrict_average(f, 2);
  ASSERT_EQ(r.n_cells(), 3);
  EXPECT_DOUBLE_EQ(r[0][0], 0.5);
  EXPECT_DOUBLE_EQ(r[2][0], 4.5);
  EXPECT_THROW(restrict_average(f, 4), ConfigError);
}

TEST(Schemes, NamesRoundTrip) {
  for (auto s : {Scheme::EXWBM1, Scheme::EXWBM2, Scheme::IEWBM1, Scheme::IEWBM2, Scheme::IWBM1, Scheme::IWBM2,
                 Scheme::SIEWBM1, Scheme::SIEWBM2, Scheme::SIWBM1, Scheme::SIWBM2})
    EXPECT_EQ(parse_scheme(to_string(s)), s);
  EXPECT_THROW(parse_scheme("RK4"), ConfigError);
  EXPECT_EQ(scheme_order(Scheme::SIWBM2), 2);
  EXPECT_EQ(scheme_mode(Scheme::EXWBM1), TimeMode::Explicit);
  EXPECT_EQ(scheme_profile(Scheme::IEWBM1), ProfileSource::Exact);
  EXPECT_EQ(second_order_of(Scheme::IWBM1), Scheme::IWBM2);
}

TEST(BuiltinCases, StandardSetups) {
  EXPECT_EQ(builtin_case_names().size(), 11u);
  const auto t2 = builtin_case("transport.test2", Scheme::IEWBM1);
  EXPECT_DOUBLE_EQ(t2.x_left, 0.0);
  EXPECT_DOUBLE_EQ(t2.x_right, 2.0);
  EXPECT_DOUBLE_EQ(t2.cfl, 2.0);
  const auto* tr = t2.model.transport();
  ASSERT_NE(tr, nullptr);
  EXPECT_DOUBLE_EQ(tr->c, 1.0);
  EXPECT_DOUBLE_EQ(tr->alpha, 1.0);
  const auto p2 = prepare_run(t2);
  const Grid& g2 = p2.disc.grid;
  for (int i : {0, 30, 199}) {
    const Real x = g2.cell_center(i);
    EXPECT_NEAR(p2.initial[i][0], std::exp(x) + 0.5 * std::exp(-100 * (x - 0.3) * (x - 0.3)), 1e-3);
  }

  const auto s2 = builtin_case("swe.test2");
  EXPECT_DOUBLE_EQ(s2.x_left, -5.0);
  EXPECT_DOUBLE_EQ(s2.x_right, 5.0);
  const auto ps2 = prepare_run(s2);
  for (int i = 0; i < s2.n_cells; i += 17) {
    const Real x = ps2.disc.grid.cell_center(i);
    EXPECT_EQ(ps2.initial[i][1], 0.0);
    EXPECT_NEAR(ps2.initial[i][0] - s2.model.depth(x), 0.1 * std::exp(-5 * x * x), 1e-3);
    EXPECT_NEAR(s2.model.depth(x), 1.0 - 0.5 * std::exp(-x * x), 1e-15);
  }

  const auto s4 = builtin_case("swe.test4");
  EXPECT_EQ(s4.n_cells, 100);
  EXPECT_EQ(s4.boundary.left.kind, BoundaryKind::Dirichlet);
  EXPECT_EQ(s4.boundary.right.kind, BoundaryKind::Dirichlet);
  const auto ps4 = prepare_run(s4);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(ps4.initial[i], StateVector(2.0, 0.0));

  EXPECT_THROW(builtin_case("swe.test9"), ConfigError);
}

TEST(BuiltinCases, RejectsInapplicableSchemes) {
  EXPECT_THROW(prepare_run(builtin_case("swe.test1", Scheme::IEWBM1)), ConfigError);
  EXPECT_THROW(prepare_run(builtin_case("transport.test1", Scheme::SIWBM1)), ConfigError);
  auto c = builtin_case("transport.test1", Scheme::IEWBM1);
  c.fluctuation = FluctuationKind::PWLR;
  EXPECT_THROW(prepare_run(c), ConfigError);
  c = builtin_case("transport.test1", Scheme::IEWBM1);
  c.cfl = -1.0;
  EXPECT_THROW(prepare_run(c), ConfigError);
}

TEST(Config, ParseAndApply) {
  const auto kv = parse_key_values("# comment\ncase = swe.test1\nscheme=SIWBM2 \n cells = 64\nfluctuation = PWLR\n");
  EXPECT_EQ(kv.at("case"), "swe.test1");
  EXPECT_EQ(kv.at("scheme"), "SIWBM2");
  const auto c = config_from_settings(kv);
  EXPECT_EQ(c.case_name, "swe.test1");
  EXPECT_EQ(c.scheme, Scheme::SIWBM2);
  EXPECT_EQ(c.n_cells, 64);
  EXPECT_EQ(c.fluctuation, FluctuationKind::PWLR);

  RunConfig r = builtin_case("transport.test1");
  EXPECT_THROW(apply_settings(r, {{"colour", "red"}}), ConfigError);
  EXPECT_THROW(apply_settings(r, {{"cells", "many"}}), ConfigError);
  EXPECT_THROW(apply_settings(r, {{"model", "swe"}}), ConfigError);
  apply_settings(r, {{"viscosity", "fixed:2.5"}, {"cfl", "3"}});
  ASSERT_TRUE(r.viscosity);
  EXPECT_DOUBLE_EQ(r.viscosity->k, 2.5);
  EXPECT_DOUBLE_EQ(r.cfl, 3.0);
  EXPECT_THROW(config_from_settings({{"case", "nope"}}), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/dir/run.cfg"), IoError);
}

TEST(Csv, ScalarRowsAndEta) {
  const Grid g(0.0, 1.0, 4);
  CellField u(4, 1);
  const auto text = format_csv(g, Model(TransportModel{}), u, std::nullopt);
  std::istringstream in(text);
  std::string line;
  int rows = 0;
  std::getline(in, line);
  EXPECT_EQ(line, "x,u");
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4);

  ShallowWaterModel sw;
  sw.depth = DepthFunction::gaussian();
  const Model m(sw);
  CellField w(3, 2);
  for (int i = 0; i < 3; ++i) w[i] = StateVector(1.0 + 0.1 * i, 0.2);
  const Grid gw(-1.0, 1.0, 3);
  std::istringstream sin(format_csv(gw, m, w, w));
  std::getline(sin, line);
  EXPECT_EQ(line, "x,h,q,eta,bottom,h_ref,q_ref");
  for (int i = 0; i < 3; ++i) {
    std::getline(sin, line);
    std::vector<Real> v;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) v.push_back(std::stod(cell));
    ASSERT_EQ(v.size(), 7u);
    EXPECT_DOUBLE_EQ(v[3], v[1] - m.depth(v[0]));
    EXPECT_DOUBLE_EQ(v[4], -m.depth(v[0]));
  }
}

TEST(RunCase, StepAccountingAndDeterminism) {
  auto c = builtin_case("transport.test2", Scheme::IEWBM2);
  c.fluctuation = FluctuationKind::PWLR;
  c.n_cells = 50;
  c.t_end = 0.3;
  c.snapshot_times = {0.1};
  const auto a = run_case(c);
  const auto b = run_case(c);
  EXPECT_EQ((a.final - b.final).max_abs(), 0.0);
  EXPECT_DOUBLE_EQ(a.time, 0.3);
  ASSERT_EQ(a.snapshots.size(), 1u);
  EXPECT_DOUBLE_EQ(a.snapshots[0].time, 0.1);
  EXPECT_EQ(static_cast<long>(a.stats.size()), a.steps);
  long iters = 0;
  Real t = 0.0;
  for (const auto& s : a.stats) {
    iters += s.iterations();
    t += s.dt;
  }
  EXPECT_EQ(iters, a.stage_iterations);
  EXPECT_NEAR(t, 0.3, 1e-12);

  c.out_dir = (std::filesystem::temp_directory_path() / "wbfv_test_out").string();
  std::filesystem::remove_all(c.out_dir);
  write_outputs(a, c);
  std::ifstream s1(c.out_dir + "/solution.csv"), s2(c.out_dir + "/snapshot_0.csv"), s3(c.out_dir + "/summary.txt");
  EXPECT_TRUE(s1 && s2 && s3);
  std::stringstream first;
  first << s1.rdbuf();
  EXPECT_EQ(first.str(), format_csv(a.grid, c.model, a.final, a.stationary));
}

TEST(RunCase, StationaryCaseStaysPut) {
  const auto c = builtin_case("swe.test5", Scheme::SIWBM2);
  auto cfg = c;
  cfg.fluctuation = FluctuationKind::PWLR;
  cfg.t_end = 0.05;
  const auto r = run_case(cfg);
  ASSERT_TRUE(r.stationary);
  for (Real e : l1_error(r.final, *r.stationary, r.grid)) EXPECT_LT(e, 1e-12);
}

TEST(SteadyState, AlreadyStationaryConvergesInOneStep) {
  const auto r = run_to_steady_state(builtin_case("transport.test1", Scheme::IEWBM1), 1e-12);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.steps, 1);
  EXPECT_THROW(run_to_steady_state(builtin_case("transport.test1"), 0.0), ConfigError);
}

TEST(SteadyState, BudgetExhaustionIsReported) {
  auto c = builtin_case("swe.test4", Scheme::IWBM1);
  const auto r = run_to_steady_state(c, 1e-12, 5);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.steps, 5);
}

TEST(Sweep, SecondOrderOnSmoothTransport) {
  auto c = builtin_case("transport.test2", Scheme::IEWBM2);
  c.fluctuation = FluctuationKind::PWLR;
  c.t_end = 0.2;
  const auto table = convergence_sweep(c, {100, 200, 400}, c, 1600);
  ASSERT_EQ(table.orders.size(), 2u);
  for (const auto& o : table.orders) {
    ASSERT_TRUE(o[0]);
    EXPECT_GT(*o[0], 1.8);
  }
  EXPECT_THROW(convergence_sweep(c, {50, 120}, c, 1600), ConfigError);
}
