#include "mvp/symkernel/expr.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mvp::sym {

namespace {

using Numerator = Expr::Numerator;

bool all_zero(const Numerator& n) {
  return std::all_of(n.begin(), n.end(), [](const Polynomial& p) { return p.is_zero(); });
}

// (P0 + wP1 + uP2 + wuP3) * w with w^2 = v.v
Numerator times_w(const Numerator& n) {
  const auto& vv = velocity_norm_squared();
  return {n[1].is_zero() ? Polynomial{} : vv * n[1], n[0], n[3].is_zero() ? Polynomial{} : vv * n[3], n[2]};
}

// (P0 + wP1 + uP2 + wuP3) * u with u^2 = x.x
Numerator times_u(const Numerator& n) {
  const auto& xx = position_norm_squared();
  return {n[2].is_zero() ? Polynomial{} : xx * n[2], n[3].is_zero() ? Polynomial{} : xx * n[3], n[0], n[1]};
}

Numerator times_monomial(Numerator n, const Denominator& m) {
  for (auto& p : n) p = p.times_monomial(m.coords);
  for (int k = 0; k < m.w; ++k) n = times_w(n);
  for (int k = 0; k < m.u; ++k) n = times_u(n);
  return n;
}

Denominator lcm(const Denominator& a, const Denominator& b) {
  Denominator r;
  for (int k = 0; k < kNumVars; ++k) r.coords[k] = std::max(a.coords[k], b.coords[k]);
  r.w = std::max(a.w, b.w);
  r.u = std::max(a.u, b.u);
  return r;
}

Denominator quotient(const Denominator& a, const Denominator& b) {
  Denominator r;
  for (int k = 0; k < kNumVars; ++k) r.coords[k] = static_cast<std::uint16_t>(a.coords[k] - b.coords[k]);
  r.w = static_cast<std::uint16_t>(a.w - b.w);
  r.u = static_cast<std::uint16_t>(a.u - b.u);
  return r;
}

Denominator sum(const Denominator& a, const Denominator& b) {
  Denominator r;
  for (int k = 0; k < kNumVars; ++k) r.coords[k] = static_cast<std::uint16_t>(a.coords[k] + b.coords[k]);
  r.w = static_cast<std::uint16_t>(a.w + b.w);
  r.u = static_cast<std::uint16_t>(a.u + b.u);
  return r;
}

}  // namespace

bool Denominator::is_one() const {
  return w == 0 && u == 0 && std::all_of(coords.begin(), coords.end(), [](auto e) { return e == 0; });
}

Expr::Expr(const Rational& c) { num_[0] = Polynomial(c); }

Expr::Expr(Polynomial p) { num_[0] = std::move(p); }

Expr::Expr(Numerator num, Denominator den) : num_(std::move(num)), den_(den) { reduce(); }

Expr Expr::var(Var v) { return Expr(Polynomial::variable(v)); }

Expr Expr::speed() {
  Numerator n{};
  n[1] = Polynomial(1);
  return Expr(std::move(n), {});
}

Expr Expr::radius() {
  Numerator n{};
  n[2] = Polynomial(1);
  return Expr(std::move(n), {});
}

bool Expr::is_zero() const { return all_zero(num_); }

void Expr::reduce() {
  if (all_zero(num_)) {
    den_ = {};
    return;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    if (den_.w > 0 && num_[0].is_zero() && num_[2].is_zero()) {
      num_ = {num_[1], Polynomial{}, num_[3], Polynomial{}};
      --den_.w;
      changed = true;
    }
    if (den_.u > 0 && num_[0].is_zero() && num_[1].is_zero()) {
      num_ = {num_[2], num_[3], Polynomial{}, Polynomial{}};
      --den_.u;
      changed = true;
    }
  }
  Exponents common = den_.coords;
  for (const auto& p : num_) {
    if (p.is_zero()) continue;
    Exponents m = p.min_exponents();
    for (int k = 0; k < kNumVars; ++k) common[k] = std::min(common[k], m[k]);
  }
  if (std::any_of(common.begin(), common.end(), [](auto e) { return e > 0; })) {
    for (auto& p : num_) p = p.divided_by_monomial(common);
    for (int k = 0; k < kNumVars; ++k) den_.coords[k] = static_cast<std::uint16_t>(den_.coords[k] - common[k]);
  }
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const Denominator l = lcm(a.den_, b.den_);
  Numerator na = times_monomial(a.num_, quotient(l, a.den_));
  const Numerator nb = times_monomial(b.num_, quotient(l, b.den_));
  for (int k = 0; k < 4; ++k) na[k] += nb[k];
  return Expr(std::move(na), l);
}

Expr Expr::operator-() const {
  Expr r = *this;
  for (auto& p : r.num_) p = -p;
  return r;
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr{};
  const auto& A = a.num_;
  const auto& B = b.num_;
  const auto& vv = velocity_norm_squared();
  const auto& xx = position_norm_squared();
  Numerator c{};
  // w^2 -> v.v, u^2 -> x.x
  c[0] = A[0] * B[0] + vv * (A[1] * B[1]) + xx * (A[2] * B[2]) + vv * (xx * (A[3] * B[3]));
  c[1] = A[0] * B[1] + A[1] * B[0] + xx * (A[2] * B[3] + A[3] * B[2]);
  c[2] = A[0] * B[2] + A[2] * B[0] + vv * (A[1] * B[3] + A[3] * B[1]);
  c[3] = A[0] * B[3] + A[3] * B[0] + A[1] * B[2] + A[2] * B[1];
  return Expr(std::move(c), sum(a.den_, b.den_));
}

Expr Expr::divided_by(const Denominator& m) const { return Expr(num_, sum(den_, m)); }

Expr Expr::diff(Var v) const {
  if (is_zero()) return Expr{};
  const int vi = index(v);
  const bool is_velocity = vi >= 4;
  const bool is_position = vi >= 1 && vi <= 3;

  Numerator dn{};
  for (int k = 0; k < 4; ++k) dn[k] = num_[k].derivative(v);
  Expr dnum(std::move(dn), {});
  const Polynomial coord = Polynomial::variable(v);
  if (is_velocity && !(num_[1].is_zero() && num_[3].is_zero())) {
    // d(w P1 + wu P3) picks up (v_i / w)(P1 + u P3)
    Denominator over_w;
    over_w.w = 1;
    dnum += Expr(Numerator{coord * num_[1], Polynomial{}, coord * num_[3], Polynomial{}}, over_w);
  }
  if (is_position && !(num_[2].is_zero() && num_[3].is_zero())) {
    Denominator over_u;
    over_u.u = 1;
    dnum += Expr(Numerator{coord * num_[2], coord * num_[3], Polynomial{}, Polynomial{}}, over_u);
  }

  const Expr inv_den(Numerator{Polynomial(1), {}, {}, {}}, den_);
  if (den_.is_one()) return dnum;

  // d(1/D) = -(1/D) * sum_k e_k dy_k / y_k
  Expr log_derivative;
  if (den_.coords[vi] > 0) {
    Denominator m;
    m.coords[vi] = 1;
    log_derivative += Expr(Rational(den_.coords[vi])).divided_by(m);
  }
  if (is_velocity && den_.w > 0) {
    Denominator m;
    m.w = 2;
    log_derivative += (Expr(Rational(den_.w)) * Expr(coord)).divided_by(m);
  }
  if (is_position && den_.u > 0) {
    Denominator m;
    m.u = 2;
    log_derivative += (Expr(Rational(den_.u)) * Expr(coord)).divided_by(m);
  }
  const Expr numerator_only(num_, {});
  return dnum * inv_den - numerator_only * inv_den * log_derivative;
}

double Expr::evaluate(std::span<const double, kNumVars> p) const {
  const double w = std::sqrt(p[4] * p[4] + p[5] * p[5] + p[6] * p[6]);
  const double u = std::sqrt(p[1] * p[1] + p[2] * p[2] + p[3] * p[3]);
  const double n = num_[0].evaluate(p) + w * num_[1].evaluate(p) + u * num_[2].evaluate(p) +
                   w * u * num_[3].evaluate(p);
  double d = std::pow(w, den_.w) * std::pow(u, den_.u);
  for (int k = 0; k < kNumVars; ++k)
    if (den_.coords[k] != 0) d *= std::pow(p[k], den_.coords[k]);
  return n / d;
}

std::string Expr::to_string() const {
  static constexpr const char* kBasis[4] = {"", "w", "u", "w*u"};
  std::ostringstream os;
  bool any = false;
  for (int k = 0; k < 4; ++k) {
    if (num_[k].is_zero()) continue;
    if (any) os << " + ";
    if (k == 0) {
      os << "(" << num_[k].to_string() << ")";
    } else {
      os << kBasis[k] << "*(" << num_[k].to_string() << ")";
    }
    any = true;
  }
  if (!any) return "0";
  if (!den_.is_one()) {
    os << " / (";
    bool first = true;
    auto factor = [&](const std::string& name, int e) {
      if (e == 0) return;
      if (!first) os << "*";
      os << name;
      if (e > 1) os << "^" << e;
      first = false;
    };
    for (int k = 0; k < kNumVars; ++k) factor(var_name(static_cast<Var>(k)), den_.coords[k]);
    factor("w", den_.w);
    factor("u", den_.u);
    os << ")";
  }
  return os.str();
}

bool equals(const Expr& a, const Expr& b) { return (a - b).is_zero(); }

}  // namespace mvp::sym
