#ifndef MVP_SYMKERNEL_FIELD_OP_HPP
#define MVP_SYMKERNEL_FIELD_OP_HPP

#include "mvp/symkernel/expr.hpp"

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace mvp::sym {

/// First-order operator sum_a c_a d/dy_a over y = (t, x1..x3, v1..v3).
class FieldOp {
 public:
  using Coefficients = std::array<Expr, kNumVars>;

  FieldOp() = default;
  explicit FieldOp(Coefficients c) : coeffs_(std::move(c)) {}

  static FieldOp partial(Var v);

  const Expr& coefficient(Var v) const { return coeffs_[index(v)]; }
  Expr& coefficient(Var v) { return coeffs_[index(v)]; }
  const Coefficients& coefficients() const { return coeffs_; }

  bool is_zero() const;

  Expr apply(const Expr& e) const;

  friend FieldOp operator+(const FieldOp& a, const FieldOp& b);
  friend FieldOp operator-(const FieldOp& a, const FieldOp& b);
  friend FieldOp operator*(const Expr& c, const FieldOp& a);
  FieldOp operator-() const;

  std::string to_string() const;

 private:
  Coefficients coeffs_{};
};

/// [A, B] with coefficient_b = A(b_b) - B(a_b).
FieldOp commutator(const FieldOp& a, const FieldOp& b);

bool equals(const FieldOp& a, const FieldOp& b);

namespace fields {

/// T = |v| d_t + v^i d_i
FieldOp transport();
/// S = t d_t + x^i d_i
FieldOp scaling();
/// S_v = v^i d_{v^i}
FieldOp velocity_scaling();
/// Omega_ij = x^i d_j - x^j d_i
FieldOp rotation(int i, int j);
/// Omega_ij + v^i d_{v^j} - v^j d_{v^i}
FieldOp lifted_rotation(int i, int j);
/// d_r = (x^i / |x|) d_i
FieldOp radial();

/// The commutation set {d_t, d_1, d_2, d_3, S, S_v, ^Omega_12, ^Omega_13, ^Omega_23}.
const std::vector<std::pair<std::string, FieldOp>>& commutation_set();

}  // namespace fields

}  // namespace mvp::sym

#endif
