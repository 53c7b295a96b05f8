#include <doctest.h>

#include "mvp/symkernel/catalog.hpp"
#include "mvp/symkernel/expr.hpp"
#include "mvp/symkernel/field_op.hpp"

#include <array>
#include <cmath>
#include <random>

using namespace mvp::sym;

namespace {

Denominator over_w(int k = 1) {
  Denominator d;
  d.w = static_cast<std::uint16_t>(k);
  return d;
}

std::array<double, 7> random_point(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-40, 40), den(1, 9);
  std::array<double, 7> p{};
  for (auto& c : p) {
    int n = num(rng);
    if (n == 0) n = 7;
    c = static_cast<double>(n) / den(rng);
  }
  return p;
}

double central_difference(const Expr& e, std::array<double, 7> p, int k) {
  const double h = 1e-5 * std::max(1.0, std::abs(p[k]));
  std::array<double, 7> a = p, b = p;
  a[k] += h;
  b[k] -= h;
  // fourth-order stencil
  std::array<double, 7> a2 = p, b2 = p;
  a2[k] += 2 * h;
  b2[k] -= 2 * h;
  return (-e.evaluate(a2) + 8 * e.evaluate(a) - 8 * e.evaluate(b) + e.evaluate(b2)) / (12 * h);
}

std::vector<Expr> sample_expressions() {
  const auto& cat = WeightCatalog::instance();
  std::vector<Expr> out;
  for (const auto& nw : cat.k0()) out.push_back(nw.value);
  out.push_back(cat.z_squared());
  out.push_back(cat.morawetz());
  out.push_back(Expr::radius() * Expr::speed() * Expr::x(1));
  out.push_back((Expr::t() * Expr::radius()).divided_by(over_w(3)));
  Denominator dx;
  dx.coords[2] = 2;
  dx.u = 1;
  out.push_back((Expr::v(3) * Expr::t() + Expr(3)).divided_by(dx));
  return out;
}

}  // namespace

TEST_CASE("defining relation of the radicals") {
  Expr vv;
  for (int i = 1; i <= 3; ++i) vv += Expr::v(i) * Expr::v(i);
  CHECK(equals(Expr::speed() * Expr::speed(), vv));
  Expr xx;
  for (int i = 1; i <= 3; ++i) xx += Expr::x(i) * Expr::x(i);
  CHECK(equals(Expr::radius() * Expr::radius(), xx));
  CHECK((Expr::speed() * Expr::speed()).is_polynomial());
}

TEST_CASE("s as a weight") {
  Expr xv;
  for (int i = 1; i <= 3; ++i) xv += Expr::x(i) * Expr::v(i);
  const Expr s = WeightCatalog::instance().weight("s");
  CHECK(equals(s, Expr::t() - xv.divided_by(over_w())));
  CHECK_FALSE(equals(s, Expr::t()));
}

TEST_CASE("expr_diff closed forms") {
  const Expr w = Expr::speed();
  CHECK(equals(w.diff(Var::v1), Expr::v(1).divided_by(over_w())));
  CHECK(equals(WeightCatalog::instance().weight("s").diff(Var::t), Expr(1)));
  const Expr v1_over_w = Expr::v(1).divided_by(over_w());
  const Expr expected = (w * w - Expr::v(1) * Expr::v(1)).divided_by(over_w(3));
  CHECK(equals(v1_over_w.diff(Var::v1), expected));
  CHECK(equals(Expr::radius().diff(Var::x2), Expr::x(2).divided_by(Denominator{{}, 0, 1})));
}

TEST_CASE("expr_diff against finite differences") {
  std::mt19937_64 rng(7);
  for (const Expr& e : sample_expressions()) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto p = random_point(rng);
      for (int k = 0; k < 7; ++k) {
        const double exact = e.diff(static_cast<Var>(k)).evaluate(p);
        const double fd = central_difference(e, p, k);
        const double scale = std::max({1.0, std::abs(exact), std::abs(e.evaluate(p))});
        CHECK(std::abs(exact - fd) <= 1e-6 * scale);
      }
    }
  }
}

TEST_CASE("op_apply examples") {
  const auto& cat = WeightCatalog::instance();
  const FieldOp T = fields::transport();
  CHECK(T.apply(cat.weight("s")).is_zero());
  CHECK(fields::velocity_scaling().apply(cat.weight("s")).is_zero());
  CHECK(T.apply(cat.morawetz()).is_zero());
  CHECK(equals(fields::scaling().apply(Expr::t()), Expr::t()));
  CHECK_FALSE(T.apply(Expr::t()).is_zero());
}

TEST_CASE("commutator examples") {
  const FieldOp T = fields::transport();
  CHECK(commutator(T, fields::lifted_rotation(1, 2)).is_zero());
  CHECK(equals(commutator(T, fields::scaling()), T));
  CHECK(equals(commutator(T, fields::velocity_scaling()), -T));
  CHECK(equals(commutator(fields::rotation(1, 2), FieldOp::partial(Var::x1)), -FieldOp::partial(Var::x2)));
  CHECK(FieldOp().is_zero());
}

TEST_CASE("Jacobi identity on the commutation set") {
  const auto& set = fields::commutation_set();
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> pick(0, set.size() - 1);
  for (int trial = 0; trial < 12; ++trial) {
    const FieldOp& a = set[pick(rng)].second;
    const FieldOp& b = set[pick(rng)].second;
    const FieldOp& c = set[pick(rng)].second;
    const FieldOp j = commutator(a, commutator(b, c)) + commutator(b, commutator(c, a)) + commutator(c, commutator(a, b));
    CHECK(j.is_zero());
  }
  const FieldOp T = fields::transport();
  const FieldOp j = commutator(T, commutator(set[4].second, set[6].second)) +
                    commutator(set[4].second, commutator(set[6].second, T)) +
                    commutator(set[6].second, commutator(T, set[4].second));
  CHECK(j.is_zero());
}

TEST_CASE("Leibniz rule") {
  const auto exprs = sample_expressions();
  const FieldOp ops[] = {fields::transport(), fields::scaling(), fields::lifted_rotation(1, 3), fields::radial()};
  for (const FieldOp& A : ops) {
    for (std::size_t i = 0; i + 1 < exprs.size(); i += 3) {
      const Expr& e1 = exprs[i];
      const Expr& e2 = exprs[i + 1];
      CHECK(equals(A.apply(e1 * e2), A.apply(e1) * e2 + e1 * A.apply(e2)));
    }
  }
}

TEST_CASE("z squared is the sum of squares of k0") {
  const auto& cat = WeightCatalog::instance();
  CHECK(cat.k0().size() == 11);
  CHECK(cat.k().size() == 8);
  Expr sum;
  for (const auto& nw : cat.k0()) sum += nw.value * nw.value;
  CHECK(equals(sum, cat.z_squared()));
  const std::array<double, 7> p{0, 0, 0, 0, 1.5, -2, 0.25};
  CHECK(std::sqrt(cat.z_squared().evaluate(p)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("identity certificate") {
  const CertificateReport rep = verify_identity_catalog();
  CHECK(rep.entries.size() == 12 + 99 + 9 + 3 + 2);
  for (const auto& e : rep.entries) {
    INFO(e.id << " " << e.statement);
    CHECK(e.status == IdentityStatus::proved);
  }
  CHECK(rep.to_json().find("\"FAILED\"") == std::string::npos);
}

TEST_CASE("a wrong identity is reported as failed") {
  const FieldOp T = fields::transport();
  const FieldOp bogus = commutator(T, fields::scaling()) + T;
  CHECK_FALSE(bogus.is_zero());
}
