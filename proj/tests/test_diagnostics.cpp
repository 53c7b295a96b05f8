#include <doctest.h>

#include "mvp/diagnostics/diagnostics.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <sstream>

using namespace mvp;

namespace {

constexpr double kPi = 3.14159265358979323846;

InitialData aniso_data() {
  InitialData d;
  d.epsilon = 1e-4;
  d.anisotropy = 0.3;
  return d;
}

RadialProfileField wobbling_field() {
  return RadialProfileField(
      [](double t, double r) {
        const double a = 0.5 * (1.0 + 0.2 * std::sin(t));
        const double g = std::exp(-0.5 * r * r);
        return FieldSample{a * r * g, a * g * (1.0 - r * r)};
      },
      1.0);
}

double gl(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

// closed-form speed moment and free-streaming velocity average for isotropic data
double speed_moment_oracle(const InitialData& d) {
  return gl([&](double v) { return d.speed(v) * v * v; }, d.v_low, d.v_high);
}

double free_stream_oracle(const InitialData& d, double t, double r) {
  const double B = speed_moment_oracle(d);
  if (r == 0.0 || t == 0.0) return d.epsilon * 4.0 * kPi * B * d.radial(r + t);
  const double lo = std::abs(r - t), hi = std::min(r + t, d.radial_support());
  if (lo >= hi) return 0.0;
  return d.epsilon * B * (2.0 * kPi / (r * t)) * gl([&](double p) { return d.radial(p) * p; }, lo, hi);
}

ParticleEnsemble free_stream_to(ParticleEnsemble e, double t, double dt = 0.5) {
  RadialGrid g(100.0, 100);
  RadialField f = solve_field(g, deposit(e, g).rho);
  const int n = static_cast<int>(std::lround(t / dt));
  for (int k = 0; k < n; ++k) step(e, f, dt, 0.0);
  return e;
}

}  // namespace

TEST_CASE("commuted value at t = 0 applies the field to f0") {
  const InitialData d = aniso_data();
  const ZeroField zero;
  const PhasePoint p{0.0, Vec3(0.3, -0.2, 0.5), Vec3(1.0, 2.5, -1.5)};
  const auto g0 = d.gradient(p.X, p.V);
  const Vec3 vhat = p.V.normalized();
  std::array<double, 7> grad{};
  grad[0] = -(vhat[0] * g0[0] + vhat[1] * g0[1] + vhat[2] * g0[2]);
  for (int k = 0; k < 6; ++k) grad[1 + k] = g0[k];
  for (FieldId z : kCommutationFields) {
    const double expect = apply_field(z, p.coords(), grad);
    CHECK(commuted_value(z, p, zero, d, 1) == doctest::Approx(expect).epsilon(1e-14));
  }
}

TEST_CASE("free-flow translation derivative follows the chain rule") {
  const InitialData d = aniso_data();
  auto e = free_stream_to(sample(d, 200, 3, true), 10.0);
  const ZeroField zero;
  for (std::size_t p = 0; p < e.size(); ++p) {
    const Vec3 x0 = e.X[p] - 10.0 * e.V[p].normalized();
    const double expect = d.gradient(x0, e.V[p])[0];
    const double scale = std::abs(expect) + 1e-3 * d.epsilon;
    CHECK(std::abs(commuted_value(FieldId::d1, e, p, Vec3::Zero()) - expect) <= 1e-9 * scale);
    const PhasePoint pt{e.t, e.X[p], e.V[p]};
    CHECK(std::abs(commuted_value(FieldId::d1, pt, zero, d, 4) - expect) <= 1e-9 * scale);
  }
}

TEST_CASE("forced commuted values match finite differences of f") {
  const InitialData d = aniso_data();
  const auto field = wobbling_field();
  const int steps = 400;
  const CharState starts[] = {{0.0, Vec3(0.5, 0.3, -0.2), Vec3(-2.0, -1.2, 1.8), std::nullopt},
                               {0.0, Vec3(-0.4, 0.2, 0.3), Vec3(0.8, -1.3, -2.2), std::nullopt},
                               {0.0, Vec3(0.1, -0.6, 0.1), Vec3(0.2, 1.0, -2.8), std::nullopt}};
  const double times[] = {2.0, 1.5, 3.0};
  for (int i = 0; i < 3; ++i) {
    CharState s = starts[i];
    for (int k = 0; k < steps; ++k) s = push(s, field, times[i] / steps);
    const PhasePoint p{times[i], s.X, s.V};
    const double f = pull_back(p, field, d, steps).value;
    REQUIRE(f > 0.0);
    const PhaseCoords y = p.coords();
    double max_rel = 0.0;
    for (FieldId z : kCommutationFields) {
      const auto a = field_coefficients<double>(z, y);
      const double h = 1e-5;
      auto shifted = [&](double s) {
        PhaseCoords q = y;
        for (int k = 0; k < 7; ++k) q[k] += s * a[k];
        const PhasePoint pq = PhasePoint::from_coords(q);
        const int n = static_cast<int>(std::lround(steps * pq.t / p.t));
        return pull_back(pq, field, d, n).value;
      };
      const double fd = (shifted(h) - shifted(-h)) / (2.0 * h);
      const double exact = commuted_value(z, p, field, d, steps);
      const double scale = std::max(std::abs(fd), 1e-2 * std::abs(f));
      max_rel = std::max(max_rel, std::abs(exact - fd) / scale);
    }
    MESSAGE("max relative finite-difference error " << max_rel);
    CHECK(max_rel <= 1e-4);
  }
}

TEST_CASE("rotation lifts annihilate spherically symmetric solutions") {
  InitialData d = aniso_data();
  d.epsilon = 0.05;
  auto e = sample(d, 400, 9, true);
  RadialGrid g(40.0, 400);
  RadialField f = solve_field(g, deposit(e, g).rho);
  for (int k = 0; k < 40; ++k) step(e, f, 0.1, 1.0);
  for (std::size_t p = 0; p < e.size(); ++p) {
    const Vec3 force = radial_force(field_at(f, e.X[p].norm()).E, e.X[p], 1.0);
    const auto grad = particle_gradient(e, p, force);
    double scale = 0.0;
    for (int k = 0; k < 3; ++k) scale += std::abs(e.X[p][k] * grad[1 + k]) + std::abs(e.V[p][k] * grad[4 + k]);
    for (FieldId z : kRotationFields) CHECK(std::abs(commuted_value(z, e, p, force)) <= 1e-8 * (scale + 1e-30));
  }
}

TEST_CASE("zeroth-order energy norm matches quadrature at t = 0") {
  const InitialData d = aniso_data();
  const auto e = sample(d, 100000, 21);
  // z^2 = 2 + 2 r^2 at t = 0
  const double B = speed_moment_oracle(d);
  const double C = gl([&](double m) { return std::abs(d.angular(m)); }, -1.0, 1.0) * 2.0 * kPi;
  for (int n : {0, 1, 2}) {
    const double oracle = d.epsilon * B * C * 4.0 * kPi *
                          gl([&](double r) { return d.radial(r) * r * r * std::pow(2.0 + 2.0 * r * r, 0.5 * n); },
                             0.0, d.radial_support());
    const auto est = energy_norm(e, n, 0);
    MESSAGE("n=" << n << " estimate " << est.value << " oracle " << oracle << " se " << est.std_error);
    CHECK(std::abs(est.value - oracle) <= 3.0 * est.std_error + 1e-9 * oracle);
  }
  double abs_mass = 0.0;
  for (double w : e.weight) abs_mass += std::abs(w);
  CHECK(energy_norm(e, 0, 0).value == doctest::Approx(abs_mass).epsilon(1e-13));
}

TEST_CASE("energy norms are conserved by free streaming") {
  const InitialData d = aniso_data();
  const auto e0 = sample(d, 2000, 4, true);
  const auto e1 = free_stream_to(e0, 20.0);
  for (int n : {0, 1, 2}) {
    const double a = energy_norm(e0, n, 0).value, b = energy_norm(e1, n, 0).value;
    CHECK(b <= a * (1.0 + 1e-9));
    CHECK(b == doctest::Approx(a).epsilon(1e-9));
  }
  const auto m0 = energy_norm(e0, 1, 1), m1 = energy_norm(e1, 1, 1);
  CHECK(m0.source_part == 0.0);
  CHECK(m1.value == doctest::Approx(m0.value).epsilon(1e-8));
  CHECK(m0.value > energy_norm(e0, 1, 0).value);
  CHECK(m0.std_error > 0.0);
}

TEST_CASE("first-order energy norm includes the commuted source") {
  InitialData d = aniso_data();
  d.epsilon = 0.05;
  auto e = sample(d, 500, 13, true);
  RadialGrid g(40.0, 400);
  RadialField f = solve_field(g, deposit(e, g).rho);
  for (int k = 0; k < 10; ++k) step(e, f, 0.1, 1.0);
  const Deposit dep = deposit(e, g);
  const SourceContext ctx{&f, &dep.current, 1.0};
  const auto est = energy_norm(e, 1, 1, ctx);
  CHECK(est.source_part > 0.0);
  CHECK(std::isfinite(est.value));
  CHECK(est.value > energy_norm(e, 1, 1).value);
  const auto flipped = energy_norm(e, 1, 1, SourceContext{&f, &dep.current, -1.0});
  CHECK(flipped.source_part == doctest::Approx(est.source_part).epsilon(1e-14));
  CHECK_THROWS(energy_norm(e, 1, 2));
  auto bad = e;
  bad.f0[0] = 0.0;
  CHECK_THROWS_AS(energy_norm(bad, 0, 0), std::domain_error);
}

TEST_CASE("moment profile is the deposit and carries the charge") {
  const InitialData d = aniso_data();
  const auto e = sample(d, 5000, 8);
  RadialGrid g(10.0, 200);
  const auto mu = moment_profile(e, g);
  const Deposit dep = deposit(e, g);
  CHECK(mu == dep.rho);
  CHECK(charge(g, mu) == doctest::Approx(e.total_weight()).epsilon(1e-13));
}

TEST_CASE("free-streaming velocity average matches the radial reduction") {
  InitialData d;
  d.epsilon = 1e-3;
  for (double t : {0.0, 0.7, 5.0, 20.0})
    for (double r : {0.0, 0.3, 0.9 * t, t, t + 0.5, 2.0 + t}) {
      const double oracle = free_stream_oracle(d, t, r);
      CHECK(free_stream_moment(d, t, r) == doctest::Approx(oracle).epsilon(1e-9).scale(1e-12));
    }
  InitialData a = aniso_data();
  for (double r : {0.0, 0.4, 0.8}) CHECK(free_stream_moment(a, 0.0, r) == doctest::Approx(a.density(r)).epsilon(1e-9));
}

TEST_CASE("binned moment agrees with quadrature on the light cone") {
  const InitialData d = aniso_data();
  const auto e0 = sample(d, 100000, 31);
  RadialGrid g(30.0, 300);
  for (double t : {0.0, 10.0}) {
    auto e = e0;
    for (std::size_t p = 0; p < e.size(); ++p) e.X[p] += t * e.V[p].normalized();
    e.t = t;
    const auto mu = moment_profile(e, g);
    const std::size_t j = static_cast<std::size_t>(std::lround((t == 0.0 ? 0.5 : t) / g.h()));
    const double q = free_stream_moment(d, t, g.node(j));
    MESSAGE("t=" << t << " binned " << mu[j] << " quadrature " << q);
    CHECK(std::abs(mu[j] - q) <= 0.03 * q);
  }
}

TEST_CASE("free-streaming velocity averages decay like t^-2 on the light cone") {
  InitialData d;
  d.epsilon = 1e-3;
  std::vector<MomentSnapshot> series;
  for (double t : {5.0, 10.0, 20.0, 40.0}) {
    MomentSnapshot s;
    s.t = t;
    for (int k = 0; k <= 2000; ++k) s.r.push_back((t + 5.0) * k / 2000.0);
    s.r.push_back(t);
    for (double r : s.r) s.mu.push_back(free_stream_moment(d, t, r));
    series.push_back(std::move(s));
  }
  const DecayReport rep = decay_fit(series);
  MESSAGE("slope " << rep.slope << " spread " << rep.spread);
  CHECK(rep.slope == doctest::Approx(-2.0).epsilon(0.15));
  CHECK(rep.spread <= 3.0);
  std::ostringstream csv;
  write_moment_csv(series[0], csv);
  CHECK(csv.str().rfind("t,r,mu\n", 0) == 0);

  std::vector<MomentSnapshot> flat(3, MomentSnapshot{0.0, {0.0, 0.5}, {1.0, 0.5}});
  for (int k = 0; k < 3; ++k) flat[k].t = 0.0;
  CHECK(decay_fit(flat).max_ratio == 1.0);
  flat.pop_back();
  CHECK_THROWS(decay_fit(flat));
}

TEST_CASE("scaling derivative integrates to minus three times the charge") {
  const InitialData d = aniso_data();
  // quadrature: int int r d_r f0 = eps B 4pi 4pi int r^3 a'(r) dr
  const double B = speed_moment_oracle(d);
  const double R = d.radial_support();
  const double Q = d.epsilon * B * 16.0 * kPi * kPi * gl([&](double r) { return d.radial(r) * r * r; }, 0.0, R);
  const double Sint = d.epsilon * B * 16.0 * kPi * kPi * gl([&](double r) { return d.radial_prime(r) * r * r * r; }, 0.0, R);
  CHECK(std::abs(Sint + 3.0 * Q) / Q <= 1e-10);

  const auto e0 = sample(d, 100000, 17, true);
  const double r0 = charge_identity_check(e0);
  MESSAGE("t=0 residual " << r0);
  CHECK(r0 <= 0.01);
  const auto e1 = free_stream_to(e0, 10.0);
  const double r1 = charge_identity_check(e1);
  MESSAGE("free streaming t=10 residual " << r1);
  CHECK(r1 <= 0.02);
}

TEST_CASE("scaling identity holds along a self-consistent run") {
  InitialData d = aniso_data();
  d.epsilon = calibrate_epsilon(d, RadialGrid(40.0, 800), 1e-3);
  auto e = sample(d, 20000, 23, true);
  RadialGrid g(40.0, 800);
  RadialField f = solve_field(g, deposit(e, g).rho);
  for (int k = 0; k < 200; ++k) step(e, f, 0.05, 1.0);
  const double res = charge_identity_check(e, &f, 1.0);
  MESSAGE("self-consistent t=10 residual " << res);
  CHECK(res <= 0.05);
  const std::string js = energy_norm_json({energy_norm(e, 0, 0)}, res);
  CHECK(js.find("charge_identity_residual") != std::string::npos);
}
