#include <doctest.h>

#include "mvp/common/jet.hpp"
#include "mvp/phasegeom/phasegeom.hpp"
#include "mvp/symkernel/catalog.hpp"

#include <cmath>
#include <random>

using namespace mvp;

namespace {

PhasePoint random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0), unit(-1.0, 1.0);
  auto direction = [&] {
    Vec3 d;
    do d = Vec3(unit(rng), unit(rng), unit(rng));
    while (d.squaredNorm() > 1.0 || d.squaredNorm() < 1e-6);
    return Vec3(d.normalized());
  };
  PhasePoint p;
  p.t = 100.0 * u01(rng);
  p.X = 100.0 * u01(rng) * direction();
  p.V = (0.1 + 9.9 * u01(rng)) * direction();
  return p;
}

std::array<Jet<1>, 7> seed_jets(const PhaseCoords& y) {
  std::array<Jet<1>, 7> j;
  for (int k = 0; k < 7; ++k) j[k] = Jet<1>::variable(k, y[k]);
  return j;
}

}  // namespace

TEST_CASE("weight examples") {
  PhasePoint p{2.0, Vec3(1, 0, 0), Vec3(3, 0, 0)};
  CHECK(eval_weight(WeightId::s, p) == doctest::Approx(1.0));
  PhasePoint q{0.0, Vec3::Zero(), Vec3(0.3, -1.2, 2.0)};
  CHECK(eval_weight(WeightId::z, q) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  PhasePoint r{0.0, Vec3(1, 0, 0), Vec3(0, 2, 0)};
  CHECK(eval_weight(WeightId::z12, r) == doctest::Approx(1.0));
  PhasePoint bad{0.0, Vec3(1, 0, 0), Vec3::Zero()};
  CHECK_THROWS_AS(eval_weight(WeightId::s, bad), std::domain_error);
}

TEST_CASE("cutoff profile") {
  CHECK(chi(0.4) == 0.0);
  CHECK(chi(0.5) == 0.0);
  CHECK(chi(1.2) == 1.0);
  CHECK(chi(1.0) == 1.0);
  CHECK(chi(0.75) == doctest::Approx(0.5).epsilon(1e-15));
  double prev = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double s = 0.4 + 0.7 * i / 1000.0;
    CHECK(chi(s) >= prev);
    prev = chi(s);
    const double h = 1e-6;
    CHECK(chi_prime(s) == doctest::Approx((chi(s + h) - chi(s - h)) / (2 * h)).epsilon(1e-5).scale(1.0));
    CHECK(chi_second(s) == doctest::Approx((chi_prime(s + h) - chi_prime(s - h)) / (2 * h)).epsilon(1e-4).scale(1.0));
  }
}

TEST_CASE("tau examples") {
  auto a = tau(PhasePoint{0.0, Vec3::Zero(), Vec3::UnitX()});
  CHECK(a.plus == 1.0);
  CHECK(a.minus == 1.0);
  auto b = tau(3.0, 3.0);
  CHECK(b.plus == doctest::Approx(std::sqrt(37.0)));
  CHECK(b.minus == 1.0);
  auto c = tau(PhasePoint{4.0, Vec3(0, 1, 0), Vec3::UnitX()});
  CHECK(c.plus == doctest::Approx(std::sqrt(26.0)));
  CHECK(c.minus == doctest::Approx(std::sqrt(10.0)));
}

TEST_CASE("angular velocity norm") {
  CHECK(angular_velocity_norm({0.0, Vec3::Zero(), Vec3(3, 4, 0)}) == doctest::Approx(5.0));
  CHECK(angular_velocity_norm({0.0, Vec3(2, 0, 0), Vec3(3, 4, 0)}) == doctest::Approx(4.0));
  CHECK(angular_velocity_norm({0.0, Vec3(2, 0, 0), Vec3(3, 0, 0)}) == 0.0);
}

TEST_CASE("weights agree with the symbolic catalog") {
  const auto& cat = sym::WeightCatalog::instance();
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> num(-60, 60), den(1, 8);
  for (int trial = 0; trial < 200; ++trial) {
    PhaseCoords y;
    for (auto& c : y) c = static_cast<double>(num(rng)) / den(rng);
    if (y[4] == 0 && y[5] == 0 && y[6] == 0) y[4] = 1;
    for (WeightId id : kK0Weights) {
      const double exact = cat.weight(weight_name(id)).evaluate(y);
      const double numeric = weight<double>(id, y);
      CHECK(std::abs(exact - numeric) <= 1e-12 * std::max(1.0, std::abs(exact)));
    }
    const double m = cat.morawetz().evaluate(y);
    CHECK(std::abs(m - weight<double>(WeightId::morawetz, y)) <= 1e-12 * std::max(1.0, std::abs(m)));
    const double z2 = cat.z_squared().evaluate(y);
    CHECK(std::abs(z2 - weight<double>(WeightId::z2, y)) <= 1e-12 * std::max(1.0, z2));
  }
}

TEST_CASE("tau_minus is bounded by z on random phase points") {
  std::mt19937_64 rng(5);
  double worst = -1e300;
  for (int i = 0; i < 100000; ++i) {
    const PhasePoint p = random_point(rng);
    worst = std::max(worst, tau(p).minus - eval_weight(WeightId::z, p));
  }
  MESSAGE("max(tau_- - z) = " << worst);
  CHECK(worst <= 1e-12);
}

TEST_CASE("fitted constants for the weight decay bounds") {
  std::mt19937_64 rng(9);
  double c_decay = 0.0, c_zprop = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const PhasePoint p = random_point(rng);
    const double lhs = tau(p).plus * angular_velocity_norm(p) / p.V.norm();
    const double rhs = 1.0 + std::abs(eval_weight(WeightId::s, p)) + std::abs(eval_weight(WeightId::z12, p)) +
                       std::abs(eval_weight(WeightId::z13, p)) + std::abs(eval_weight(WeightId::z23, p));
    c_decay = std::max(c_decay, lhs / rhs);

    const auto y = p.coords();
    const Jet<1> z2 = weight(WeightId::z2, seed_jets(y));
    std::array<double, 7> grad;
    for (int k = 0; k < 7; ++k) grad[k] = z2.partial(k);
    for (FieldId f : kCommutationFields) c_zprop = std::max(c_zprop, std::abs(apply_field(f, y, grad)) / z2.value());
  }
  MESSAGE("fitted C (tau_+ |v-slash|/v0 <= C(1+|s|+sum|z_ij|)) = " << c_decay);
  MESSAGE("fitted C (|Z(z^2)| <= C z^2) = " << c_zprop);
  CHECK(std::isfinite(c_decay));
  CHECK(c_decay < 10.0);
  CHECK(c_zprop < 10.0);
}

TEST_CASE("jets reproduce derivatives") {
  const PhaseCoords y{1.3, 0.4, -2.0, 0.7, 1.1, 0.5, -0.8};
  std::array<Jet<3>, 7> j;
  for (int k = 0; k < 7; ++k) j[k] = Jet<3>::variable(k, y[k]);
  const Jet<3> s = weight(WeightId::s, j);
  CHECK(s.value() == doctest::Approx(weight<double>(WeightId::s, y)));
  // d/dt s = 1, d/dx1 s = -v1/w
  const double w = std::sqrt(y[4] * y[4] + y[5] * y[5] + y[6] * y[6]);
  CHECK(s.partial(0) == doctest::Approx(1.0));
  CHECK(s.partial(1) == doctest::Approx(-y[4] / w));
  // second derivative by finite differences of the first
  const double h = 1e-5;
  for (int a = 0; a < 7; ++a) {
    for (int b = 0; b < 7; ++b) {
      PhaseCoords yp = y, ym = y;
      yp[b] += h;
      ym[b] -= h;
      std::array<Jet<1>, 7> jp, jm;
      for (int k = 0; k < 7; ++k) {
        jp[k] = Jet<1>::variable(k, yp[k]);
        jm[k] = Jet<1>::variable(k, ym[k]);
      }
      const double fd = (weight(WeightId::z2, jp).partial(a) - weight(WeightId::z2, jm).partial(a)) / (2 * h);
      const double exact = weight(WeightId::z2, j).derivative(a).partial(b);
      CHECK(exact == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
    }
  }
  const Jet<3> third = weight(WeightId::z01, j);
  // d^3/dv1^3 of x1 - t v1/w, by nested finite differences of the analytic second derivative
  auto d2 = [&](double v1) {
    PhaseCoords q = y;
    q[4] = v1;
    std::array<Jet<3>, 7> jj;
    for (int k = 0; k < 7; ++k) jj[k] = Jet<3>::variable(k, q[k]);
    return weight(WeightId::z01, jj).derivative(4).derivative(4).value();
  };
  const double fd3 = (d2(y[4] + h) - d2(y[4] - h)) / (2 * h);
  CHECK(third.derivative(4).derivative(4).derivative(4).value() == doctest::Approx(fd3).epsilon(1e-6));
}
