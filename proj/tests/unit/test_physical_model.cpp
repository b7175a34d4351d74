#include <gtest/gtest.h>

#include <random>

#include "../support/oracles.hpp"
#include "mgems/error.hpp"
#include "mgems/physical_model.hpp"

using namespace mgems;

namespace {

PhysicalParams euler_params() {
  PhysicalParams p;
  p.thermal_scheme = ThermalScheme::kExplicitEuler;
  return p;
}

}  // namespace

TEST(BatteryStep, ZeroFlowKeepsStock) {
  EXPECT_DOUBLE_EQ(battery_step(1.0, 0.0, PhysicalParams{}, TimeGrid{}), 1.0);
}

TEST(BatteryStep, ChargeAndDischargeArithmetic) {
  const PhysicalParams p;
  const TimeGrid g;
  EXPECT_NEAR(battery_step(1.0, 1.0, p, g), 1.2375, 1e-12);
  EXPECT_NEAR(battery_step(1.0, -1.0, p, g), 1.0 - 0.25 / 0.95, 1e-12);
}

TEST(BatteryStep, SlopesByFiniteDifferences) {
  const PhysicalParams p;
  const TimeGrid g;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> b(0.0, 3.0), f(0.05, 3.0);
  for (int k = 0; k < 100; ++k) {
    const double b0 = b(rng), fc = f(rng), fd = -f(rng);
    const double h = 1e-4;
    const double charge = (battery_step(b0, fc + h, p, g) - battery_step(b0, fc - h, p, g)) / (2 * h);
    const double discharge =
        (battery_step(b0, fd + h, p, g) - battery_step(b0, fd - h, p, g)) / (2 * h);
    const double state = (battery_step(b0 + h, fc, p, g) - battery_step(b0 - h, fc, p, g)) / (2 * h);
    EXPECT_NEAR(charge, g.delta_hours * p.rho_c, 1e-9);
    EXPECT_NEAR(discharge, g.delta_hours / p.rho_d, 1e-9);
    EXPECT_NEAR(state, 1.0, 1e-9);
  }
}

TEST(BatteryStep, RoundTripLosesEnergyUnlessLossless) {
  const TimeGrid g;
  PhysicalParams p;
  const double b0 = 1.0, q = 2.0;
  const double charged = battery_step(b0, q, p, g);
  // discharge power that removes exactly the stored gain
  const double back = -(charged - b0) * p.rho_d / g.delta_hours;
  EXPECT_NEAR(battery_step(charged, back, p, g), b0, 1e-12);
  // energy drawn from the grid exceeds energy returned
  EXPECT_GT(q, -back);
  p.rho_c = p.rho_d = 1.0;
  const double c2 = battery_step(b0, q, p, g);
  const double back2 = -(c2 - b0) / g.delta_hours;
  EXPECT_NEAR(q, -back2, 1e-12);
}

TEST(TankStep, Arithmetic) {
  const PhysicalParams p;
  const TimeGrid g;
  EXPECT_DOUBLE_EQ(tank_step(3.0, 0.0, 0.0, p, g), 3.0);
  EXPECT_NEAR(tank_step(3.0, 2.0, 0.0, p, g), 3.45, 1e-12);
  EXPECT_NEAR(tank_step(3.0, 0.0, 4.0, p, g), 2.0, 1e-12);
}

TEST(TankCapacity, DerivedFromVolumeAndSwing) {
  EXPECT_NEAR(tank_capacity_kwh(120.0, 50.0), 120 * 4.186 * 50 / 3600.0, 1e-12);
  EXPECT_NEAR(PhysicalParams{}.h_max, 6.9767, 1e-4);
}

TEST(ThermalStep, UniformTemperatureIsFixedPoint) {
  for (auto scheme : {ThermalScheme::kExact, ThermalScheme::kExplicitEuler}) {
    PhysicalParams p;
    p.thermal_scheme = scheme;
    const auto t = thermal_step(15.0, 15.0, 0.0, {15.0, 0.0, 0.0}, p, TimeGrid{});
    EXPECT_NEAR(t.wall, 15.0, 1e-12);
    EXPECT_NEAR(t.indoor, 15.0, 1e-12);
  }
}

TEST(ThermalStep, EulerSchemeMatchesHandFormula) {
  const auto p = euler_params();
  const TimeGrid g;
  const double dt = 900.0;
  const ExogenousInputs e{5.0, 300.0, 200.0};
  const double tw = 15.0, ti = 20.0, fh = 2.0;
  const double wall = tw + dt / p.c_m *
                               ((ti - tw) / (p.r_i + p.r_s) + (e.theta_e - tw) / (p.r_m + p.r_e) +
                                p.gamma * fh * 1e3 + p.r_i / (p.r_i + p.r_s) * e.phi_int +
                                p.r_e / (p.r_e + p.r_m) * e.phi_ext);
  const double indoor = ti + dt / p.c_i *
                                 ((tw - ti) / (p.r_i + p.r_s) + (e.theta_e - ti) / p.r_v +
                                  (e.theta_e - ti) / p.r_f + (1 - p.gamma) * fh * 1e3 +
                                  p.r_s / (p.r_i + p.r_s) * e.phi_int);
  const auto t = thermal_step(tw, ti, fh, e, p, g);
  EXPECT_NEAR(t.wall, wall, 1e-10);
  EXPECT_NEAR(t.indoor, indoor, 1e-10);
}

TEST(ThermalStep, EulerWithoutWallShareLeavesWallUnheated) {
  auto p = euler_params();
  p.gamma = 0.0;
  const ExogenousInputs e{5.0, 0.0, 0.0};
  const auto off = thermal_step(15.0, 20.0, 0.0, e, p, TimeGrid{});
  const auto on = thermal_step(15.0, 20.0, 3.0, e, p, TimeGrid{});
  EXPECT_DOUBLE_EQ(on.wall, off.wall);
  EXPECT_GT(on.indoor, off.indoor);
}

TEST(ThermalStep, ExactSchemeMatchesFineRk4) {
  const PhysicalParams p;
  const TimeGrid g;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> temp(-40.0, 40.0), fh(0.0, 5.0), rad(0.0, 1000.0);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const ExogenousInputs e{temp(rng), rad(rng), rad(rng)};
    const double tw = temp(rng), ti = temp(rng), f = fh(rng);
    const auto ref = oracle::rk4_envelope({tw, ti}, f, e, p, g.delta_seconds(), 900);
    const auto t = thermal_step(tw, ti, f, e, p, g);
    worst = std::max({worst, std::abs(t.wall - ref[0]), std::abs(t.indoor - ref[1])});
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(ThermalStep, CoolWallWarmRoomAgainstRk4) {
  const PhysicalParams p;
  const auto ref = oracle::rk4_envelope({15.0, 20.0}, 0.0, {5.0, 0.0, 0.0}, p, 900.0, 900);
  const auto t = thermal_step(15.0, 20.0, 0.0, {5.0, 0.0, 0.0}, p, TimeGrid{});
  EXPECT_NEAR(t.wall, ref[0], 0.05);
  EXPECT_NEAR(t.indoor, ref[1], 0.05);
}

TEST(ThermalStep, ContinuousRhsMatchesOracle) {
  const PhysicalParams p;
  const ExogenousInputs e{3.0, 120.0, 80.0};
  const auto a = thermal_rhs(12.0, 18.0, 1.5, e, p);
  const auto b = oracle::envelope_rhs({12.0, 18.0}, 1.5, e, p);
  EXPECT_NEAR(a[0], b[0], 1e-15);
  EXPECT_NEAR(a[1], b[1], 1e-15);
}

TEST(Dynamics, PassiveEquilibriumIsFixedPoint) {
  const State x{1.0, 2.0, 15.0, 15.0};
  const auto next = dynamics(x, {}, {}, {15.0, 0.0, 0.0}, PhysicalParams{}, TimeGrid{});
  EXPECT_NEAR(next.b, x.b, 1e-12);
  EXPECT_NEAR(next.h, x.h, 1e-12);
  EXPECT_NEAR(next.theta_w, x.theta_w, 1e-12);
  EXPECT_NEAR(next.theta_i, x.theta_i, 1e-12);
}

TEST(Dynamics, ComposesSubSteps) {
  const PhysicalParams p;
  const TimeGrid g;
  const State x{1.2, 2.5, 14.0, 18.0};
  const Control u{-0.7, 1.1, 2.2};
  const Uncertainty w{0.4, 0.9};
  const ExogenousInputs e{4.0, 200.0, 100.0};
  const auto next = dynamics(x, u, w, e, p, g);
  const auto t = thermal_step(x.theta_w, x.theta_i, u.f_h, e, p, g);
  EXPECT_EQ(next.b, battery_step(x.b, u.f_b, p, g));
  EXPECT_EQ(next.h, tank_step(x.h, u.f_w, w.d_th, p, g));
  EXPECT_EQ(next.theta_w, t.wall);
  EXPECT_EQ(next.theta_i, t.indoor);
}

TEST(Dynamics, JacobianMatchesClosedForm) {
  for (auto scheme : {ThermalScheme::kExact, ThermalScheme::kExplicitEuler}) {
    PhysicalParams p;
    p.thermal_scheme = scheme;
    const TimeGrid g;
    const ExogenousInputs e{6.0, 250.0, 150.0};
    const auto map = ThermalStepMap::make(p, g);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
      // z = (b, h, theta_w, theta_i, f_b >= 0, f_w, f_h)
      const std::vector<double> z{3 * u01(rng), 6 * u01(rng), 30 * u01(rng), 30 * u01(rng),
                                  0.1 + 2 * u01(rng), 3 * u01(rng), 3 * u01(rng)};
      auto f = [&](const std::vector<double>& v) {
        const auto n = dynamics({v[0], v[1], v[2], v[3]}, {v[4], v[5], v[6]}, {0.0, 0.5}, e, p, g);
        return std::vector<double>{n.b, n.h, n.theta_w, n.theta_i};
      };
      const auto jac = oracle::fd_jacobian(f, z, 1e-3);
      const double dt = g.delta_hours;
      const std::vector<std::vector<double>> expect{
          {1, 0, 0, 0, dt * p.rho_c, 0, 0},
          {0, 1, 0, 0, 0, dt * p.beta_h, 0},
          {0, 0, map.state[0][0], map.state[0][1], 0, 0, map.heater[0]},
          {0, 0, map.state[1][0], map.state[1][1], 0, 0, map.heater[1]}};
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 7; ++j) {
          EXPECT_NEAR(jac[i][j], expect[i][j], 1e-6 * std::max(1.0, std::abs(expect[i][j])))
              << "entry " << i << "," << j;
        }
      }
    }
  }
}

TEST(Dynamics, ThermalStateMapMatchesRk4Propagator) {
  // columns of exp(A dt) obtained by propagating unit perturbations with the oracle
  const PhysicalParams p;
  const TimeGrid g;
  const auto map = ThermalStepMap::make(p, g);
  const ExogenousInputs zero{0.0, 0.0, 0.0};
  const auto c0 = oracle::rk4_envelope({1.0, 0.0}, 0.0, zero, p, 900.0, 900);
  const auto c1 = oracle::rk4_envelope({0.0, 1.0}, 0.0, zero, p, 900.0, 900);
  EXPECT_NEAR(map.state[0][0], c0[0], 1e-12);
  EXPECT_NEAR(map.state[1][0], c0[1], 1e-12);
  EXPECT_NEAR(map.state[0][1], c1[0], 1e-12);
  EXPECT_NEAR(map.state[1][1], c1[1], 1e-12);
}

TEST(Dynamics, AffineInStateAndControlForChargingFlows) {
  const PhysicalParams p;
  const TimeGrid g;
  const ExogenousInputs e{2.0, 50.0, 10.0};
  const Uncertainty w{0.3, 0.7};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const State xa{3 * u01(rng), 6 * u01(rng), 25 * u01(rng), 25 * u01(rng)};
    const State xb{3 * u01(rng), 6 * u01(rng), 25 * u01(rng), 25 * u01(rng)};
    const Control ua{3 * u01(rng), 3 * u01(rng), 3 * u01(rng)};
    const Control ub{3 * u01(rng), 3 * u01(rng), 3 * u01(rng)};
    const double s = u01(rng);
    const State xm{s * xa.b + (1 - s) * xb.b, s * xa.h + (1 - s) * xb.h,
                   s * xa.theta_w + (1 - s) * xb.theta_w, s * xa.theta_i + (1 - s) * xb.theta_i};
    const Control um{s * ua.f_b + (1 - s) * ub.f_b, s * ua.f_w + (1 - s) * ub.f_w,
                     s * ua.f_h + (1 - s) * ub.f_h};
    const auto na = dynamics(xa, ua, w, e, p, g);
    const auto nb = dynamics(xb, ub, w, e, p, g);
    const auto nm = dynamics(xm, um, w, e, p, g);
    EXPECT_NEAR(nm.b, s * na.b + (1 - s) * nb.b, 1e-9);
    EXPECT_NEAR(nm.h, s * na.h + (1 - s) * nb.h, 1e-9);
    EXPECT_NEAR(nm.theta_w, s * na.theta_w + (1 - s) * nb.theta_w, 1e-9);
    EXPECT_NEAR(nm.theta_i, s * na.theta_i + (1 - s) * nb.theta_i, 1e-9);
  }
}

TEST(PhysicalParams, ValidationRejectsBadValues) {
  PhysicalParams p;
  EXPECT_NO_THROW(p.validate());
  p.rho_c = 1.2;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = PhysicalParams{};
  p.r_v = 0.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = PhysicalParams{};
  p.b_min = 3.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
  TimeGrid g;
  g.delta_hours = 0.0;
  EXPECT_THROW(g.validate(), InvalidArgument);
}

TEST(TimeGrid, HourOfDayWrapsAround) {
  TimeGrid g;
  g.start_step = 90;
  EXPECT_DOUBLE_EQ(g.hour_of_day(0), 22.5);
  EXPECT_DOUBLE_EQ(g.hour_of_day(6), 0.0);
}

TEST(WeatherTrace, CsvRoundTrip) {
  WeatherTrace w{{1.5, -2.25, 3.0}, {0.0, 100.125, 7.0}, {1.0, 2.0, 3.0}};
  const std::string path = testing::TempDir() + "/weather_roundtrip.csv";
  w.save_csv(path);
  const auto r = WeatherTrace::load_csv(path);
  EXPECT_EQ(r.theta_e, w.theta_e);
  EXPECT_EQ(r.phi_int, w.phi_int);
  EXPECT_EQ(r.phi_ext, w.phi_ext);
  EXPECT_THROW(r.validate(4), InvalidArgument);
}
