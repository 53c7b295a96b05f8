#include "mvp/symkernel/field_op.hpp"

#include <sstream>

namespace mvp::sym {

FieldOp FieldOp::partial(Var v) {
  FieldOp op;
  op.coeffs_[index(v)] = Expr(1);
  return op;
}

bool FieldOp::is_zero() const {
  for (const auto& c : coeffs_)
    if (!c.is_zero()) return false;
  return true;
}

Expr FieldOp::apply(const Expr& e) const {
  Expr r;
  for (int k = 0; k < kNumVars; ++k) {
    if (coeffs_[k].is_zero()) continue;
    r += coeffs_[k] * e.diff(static_cast<Var>(k));
  }
  return r;
}

FieldOp operator+(const FieldOp& a, const FieldOp& b) {
  FieldOp r;
  for (int k = 0; k < kNumVars; ++k) r.coeffs_[k] = a.coeffs_[k] + b.coeffs_[k];
  return r;
}

FieldOp operator-(const FieldOp& a, const FieldOp& b) { return a + (-b); }

FieldOp operator*(const Expr& c, const FieldOp& a) {
  FieldOp r;
  for (int k = 0; k < kNumVars; ++k) r.coeffs_[k] = c * a.coeffs_[k];
  return r;
}

FieldOp FieldOp::operator-() const {
  FieldOp r;
  for (int k = 0; k < kNumVars; ++k) r.coeffs_[k] = -coeffs_[k];
  return r;
}

std::string FieldOp::to_string() const {
  std::ostringstream os;
  bool any = false;
  for (int k = 0; k < kNumVars; ++k) {
    if (coeffs_[k].is_zero()) continue;
    if (any) os << " + ";
    os << "[" << coeffs_[k].to_string() << "] d_" << var_name(static_cast<Var>(k));
    any = true;
  }
  return any ? os.str() : "0";
}

FieldOp commutator(const FieldOp& a, const FieldOp& b) {
  FieldOp::Coefficients c;
  for (int k = 0; k < kNumVars; ++k) {
    const Var v = static_cast<Var>(k);
    c[k] = a.apply(b.coefficient(v)) - b.apply(a.coefficient(v));
  }
  return FieldOp(std::move(c));
}

bool equals(const FieldOp& a, const FieldOp& b) { return (a - b).is_zero(); }

namespace fields {

FieldOp transport() {
  FieldOp op;
  op.coefficient(Var::t) = Expr::speed();
  for (int i = 1; i <= 3; ++i) op.coefficient(position_var(i)) = Expr::v(i);
  return op;
}

FieldOp scaling() {
  FieldOp op;
  op.coefficient(Var::t) = Expr::t();
  for (int i = 1; i <= 3; ++i) op.coefficient(position_var(i)) = Expr::x(i);
  return op;
}

FieldOp velocity_scaling() {
  FieldOp op;
  for (int i = 1; i <= 3; ++i) op.coefficient(velocity_var(i)) = Expr::v(i);
  return op;
}

FieldOp rotation(int i, int j) {
  FieldOp op;
  op.coefficient(position_var(j)) = Expr::x(i);
  op.coefficient(position_var(i)) = -Expr::x(j);
  return op;
}

FieldOp lifted_rotation(int i, int j) {
  FieldOp op = rotation(i, j);
  op.coefficient(velocity_var(j)) = Expr::v(i);
  op.coefficient(velocity_var(i)) = -Expr::v(j);
  return op;
}

FieldOp radial() {
  FieldOp op;
  Denominator over_u;
  over_u.u = 1;
  for (int i = 1; i <= 3; ++i) op.coefficient(position_var(i)) = Expr::x(i).divided_by(over_u);
  return op;
}

const std::vector<std::pair<std::string, FieldOp>>& commutation_set() {
  static const std::vector<std::pair<std::string, FieldOp>> set = {
      {"d_t", FieldOp::partial(Var::t)},
      {"d_1", FieldOp::partial(Var::x1)},
      {"d_2", FieldOp::partial(Var::x2)},
      {"d_3", FieldOp::partial(Var::x3)},
      {"S", scaling()},
      {"S_v", velocity_scaling()},
      {"Omega_12", lifted_rotation(1, 2)},
      {"Omega_13", lifted_rotation(1, 3)},
      {"Omega_23", lifted_rotation(2, 3)},
  };
  return set;
}

}  // namespace fields

}  // namespace mvp::sym
