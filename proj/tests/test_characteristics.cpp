#include <doctest.h>

#include "mvp/characteristics/characteristics.hpp"

#include <Eigen/LU>

#include <cmath>
#include <sstream>

using namespace mvp;

namespace {

// smooth repulsive profile E(t, r) = a r exp(-r^2 / 4) / (1 + t)^2
RadialProfileField smooth_field(double a, double sigma) {
  return RadialProfileField(
      [a](double t, double r) {
        const double g = std::exp(-r * r / 4.0) / ((1 + t) * (1 + t));
        return FieldSample{a * r * g, a * g * (1.0 - r * r / 2.0)};
      },
      sigma);
}

RadialProfileField constant_force(double c) {
  return RadialProfileField([c](double, double) { return FieldSample{c, 0.0}; }, 1.0);
}

Eigen::Matrix<double, 6, 1> flow_end(const CharState& s0, const FieldSource& f, double dt, int n, StepOptions opt) {
  CharState s = s0;
  for (int k = 0; k < n; ++k) s = push(s, f, dt, opt);
  Eigen::Matrix<double, 6, 1> y;
  y << s.X, s.V;
  return y;
}

}  // namespace

TEST_CASE("zero field straight line") {
  ZeroField zero;
  CharState s{0.0, Vec3(1, 0, 0), Vec3(0, 2, 0)};
  for (int k = 0; k < 60; ++k) s = push(s, zero, 0.05);
  CHECK((s.X - Vec3(1, 3, 0)).norm() <= 1e-13);
  CHECK(s.V == Vec3(0, 2, 0));
  CHECK(min_speed({s}) == 2.0);
}

TEST_CASE("RK4 composition equals the closed form") {
  ZeroField zero;
  CharState s0 = CharState{0.0, Vec3(0.3, -1.0, 2.0), Vec3(1.5, 0.5, -2.0)}.with_tangent();
  CharState s = s0;
  const int n = 2000;
  for (int k = 0; k < n; ++k) s = push(s, zero, 0.05);
  const CharState exact = free_flow(s0, n * 0.05);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(s.X[i] - exact.X[i]) <= 1e-12 * std::max(1.0, std::abs(exact.X[i])));
    CHECK(s.V[i] == exact.V[i]);
  }
  CHECK((*s.tangent - *exact.tangent).cwiseAbs().maxCoeff() <= 1e-12 * exact.tangent->cwiseAbs().maxCoeff());
}

TEST_CASE("free flow closed form") {
  CharState s = CharState{0.0, Vec3(1, 0, 0), Vec3(0, 2, 0)}.with_tangent();
  const CharState same = free_flow(s, 0.0);
  CHECK(same.X == s.X);
  CHECK(*same.tangent == Mat6::Identity());
  const CharState moved = free_flow(s, 3.0);
  CHECK((moved.X - Vec3(1, 3, 0)).norm() <= 1e-15);
  Mat3 expected = Mat3::Zero();
  expected(0, 0) = 1.5;
  expected(2, 2) = 1.5;
  CHECK((moved.tangent->block<3, 3>(0, 3) - expected).norm() <= 1e-15);
  // numeric cross-check of the block
  const double h = 1e-6;
  for (int j = 0; j < 3; ++j) {
    CharState p = s, m = s;
    p.V[j] += h;
    m.V[j] -= h;
    const Vec3 col = (free_flow(p, 3.0).X - free_flow(m, 3.0).X) / (2 * h);
    CHECK((col - expected.col(j)).norm() <= 1e-8);
  }
}

TEST_CASE("weights are conserved along force-free RK4 characteristics") {
  ZeroField zero;
  const CharState s0{0.0, Vec3(2.0, -1.0, 0.5), Vec3(-1.0, 3.0, 0.7)};
  const Trajectory traj = integrate(s0, zero, 0.05, 2000, 20);
  CHECK(traj.back().t == doctest::Approx(100.0));
  for (WeightId w : kK0Weights) {
    const auto series = weight_series(traj, w);
    double drift = 0.0;
    for (double v : series) drift = std::max(drift, std::abs(v - series.front()));
    INFO(weight_name(w));
    CHECK(drift <= 1e-10);
  }
  const auto m = weight_series(traj, WeightId::morawetz);
  for (double v : m) CHECK(std::abs(v - m.front()) <= 1e-10 * std::max(1.0, std::abs(m.front())));
  const auto z12 = weight_series(integrate({0.0, Vec3(1, 0, 0), Vec3(0, 2, 0)}, zero, 0.05, 60), WeightId::z12);
  for (double v : z12) CHECK(v == doctest::Approx(1.0));
  const auto s = weight_series(integrate({0.0, Vec3(1, 0, 0), Vec3(3, 0, 0)}, zero, 0.05, 60), WeightId::s);
  for (double v : s) CHECK(v == doctest::Approx(-1.0));
}

TEST_CASE("tangent matches a finite-difference flow Jacobian") {
  const auto field = constant_force(0.3);
  const StepOptions opt{};
  const CharState s0 = CharState{0.0, Vec3(1.0, 0.5, -0.2), Vec3(1.5, -0.5, 1.0)}.with_tangent();
  const double dt = 0.01;
  const int n = 200;
  CharState s = s0;
  for (int k = 0; k < n; ++k) s = push(s, field, dt, opt);
  CHECK(min_speed({s0, s}) > 1.0);  // chi = 1 throughout
  Mat6 fd;
  const double h = 1e-4;
  for (int j = 0; j < 6; ++j) {
    auto shifted = [&](double d) {
      CharState p = s0;
      p.tangent.reset();
      if (j < 3) p.X[j] += d;
      else p.V[j - 3] += d;
      return flow_end(p, field, dt, n, opt);
    };
    fd.col(j) = (-shifted(2 * h) + 8 * shifted(h) - 8 * shifted(-h) + shifted(-2 * h)) / (12 * h);
  }
  const double err = (fd - *s.tangent).cwiseAbs().maxCoeff();
  MESSAGE("tangent vs finite differences: " << err);
  CHECK(err <= 1e-6);
  CHECK(std::abs(s.tangent->determinant() - 1.0) <= 1e-6);
}

TEST_CASE("tangent with the cutoff active and a time-dependent field") {
  const auto field = smooth_field(-0.8, 1.0);
  const CharState s0 = CharState{0.0, Vec3(0.5, 0.2, 0.1), Vec3(0.9, 0.1, 0.0)}.with_tangent();
  const double dt = 0.01;
  const int n = 150;
  CharState s = s0;
  double log_det = 0.0;
  for (int k = 0; k < n; ++k) {
    const CharState next = push(s, field, dt);
    auto div = [&](const CharState& c) {
      return chi_prime(c.V.norm()) * field.force(c.t, c.X).dot(c.V.normalized());
    };
    log_det += 0.5 * dt * (div(s) + div(next));
    s = next;
  }
  Mat6 fd;
  const double h = 1e-5;
  for (int j = 0; j < 6; ++j) {
    auto shifted = [&](double d) {
      CharState p = s0;
      p.tangent.reset();
      if (j < 3) p.X[j] += d;
      else p.V[j - 3] += d;
      return flow_end(p, field, dt, n, {});
    };
    fd.col(j) = (-shifted(2 * h) + 8 * shifted(h) - 8 * shifted(-h) + shifted(-2 * h)) / (12 * h);
  }
  CHECK((fd - *s.tangent).cwiseAbs().maxCoeff() <= 1e-6);
  MESSAGE("det = " << s.tangent->determinant() << ", exp(int div) = " << std::exp(log_det));
  CHECK(s.tangent->determinant() == doctest::Approx(std::exp(log_det)).epsilon(1e-4));
}

TEST_CASE("time reversibility") {
  const auto field = smooth_field(0.5, -1.0);
  const CharState s0{0.0, Vec3(0.7, -0.3, 1.1), Vec3(-2.0, 1.0, 0.5)};
  CharState s = s0;
  for (int k = 0; k < 400; ++k) s = push(s, field, 0.05);
  for (int k = 0; k < 400; ++k) s = pull(s, field, 0.05);
  CHECK((s.X - s0.X).norm() <= 1e-9);
  CHECK((s.V - s0.V).norm() <= 1e-9);
  CHECK(std::abs(s.t) <= 1e-12);
}

TEST_CASE("small-velocity barrier") {
  const double eps = 0.05;
  const auto weak = RadialProfileField(
      [eps](double t, double) { return FieldSample{eps / ((1 + t) * (1 + t)), 0.0}; }, -1.0);
  const Trajectory a = integrate({0.0, Vec3(0.5, 0, 0), Vec3(-2.0, 0, 0)}, weak, 0.05, 2000, 10);
  CHECK(min_speed(a) >= 1.0);

  const auto inward = constant_force(-0.1);
  const CharState start{0.0, Vec3(10, 0, 0), Vec3(2.0, 0.3, 0.0)};
  const Trajectory raw = integrate(start, inward, 0.05, 600, 1, {false});
  MESSAGE("min |V| without cutoff: " << min_speed(raw));
  CHECK(min_speed(raw) < 1.0);
  const Trajectory cut = integrate(start, inward, 0.05, 600, 1, {true});
  MESSAGE("min |V| with cutoff: " << min_speed(cut));
  CHECK(min_speed(cut) >= 0.5);
}

TEST_CASE("s drift along a forced trajectory is reported") {
  const auto field = smooth_field(0.2, 1.0);
  const Trajectory traj = integrate({0.0, Vec3(1, 0, 0), Vec3(3, 1, 0)}, field, 0.05, 200);
  const auto s = weight_series(traj, WeightId::s);
  double bound = 0.0;
  for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
    // |d/dt s| = |F . grad_v s| <= |F| |x| / |v| up to the t term
    const auto& c = traj[k];
    bound += 0.05 * field.force(c.t, c.X).norm() * (c.X.norm() + c.t) / c.V.norm();
  }
  MESSAGE("s drift " << std::abs(s.back() - s.front()) << " <= bound " << bound);
  CHECK(std::abs(s.back() - s.front()) <= bound);
  std::ostringstream os;
  write_trajectory_csv(traj, os);
  CHECK(os.str().rfind("t,X1,X2,X3,V1,V2,V3,speed,s,z", 0) == 0);
}

TEST_CASE("argument validation") {
  ZeroField zero;
  CharState s{0.0, Vec3(1, 0, 0), Vec3(1, 0, 0)};
  CHECK_THROWS_AS(push(s, zero, -0.1), std::invalid_argument);
  s.V = Vec3::Zero();
  CHECK_THROWS_AS(push(s, zero, 0.1), std::domain_error);
  CHECK_THROWS_AS(min_speed({}), std::invalid_argument);
}
