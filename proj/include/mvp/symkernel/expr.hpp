#ifndef MVP_SYMKERNEL_EXPR_HPP
#define MVP_SYMKERNEL_EXPR_HPP

#include "mvp/symkernel/polynomial.hpp"

#include <array>
#include <string>

namespace mvp::sym {

/// Monomial denominator t^a x^b v^c w^d u^e; the last two slots hold the
/// exponents of w = |v| and u = |x|.
struct Denominator {
  Exponents coords{};
  std::uint16_t w = 0;
  std::uint16_t u = 0;

  bool is_one() const;
  friend bool operator==(const Denominator&, const Denominator&) = default;
};

/// Exact phase-space expression
///
///     (P0 + w P1 + u P2 + w u P3) / (t^a x^b v^c w^d u^e)
///
/// with w = |v|, u = |x| and P_k rational polynomials in (t, x, v). Values
/// are immutable in practice: every operation returns a new, reduced
/// expression. Even powers of w and u never survive in the numerator since
/// w^2 and u^2 are rewritten as v.v and x.x.
class Expr {
 public:
  using Numerator = std::array<Polynomial, 4>;  // basis {1, w, u, wu}

  Expr() = default;
  Expr(const Rational& c);  // NOLINT: implicit scalar promotion is convenient
  Expr(int c) : Expr(Rational(c)) {}  // NOLINT
  explicit Expr(Polynomial p);
  Expr(Numerator num, Denominator den);

  static Expr var(Var v);
  static Expr t() { return var(Var::t); }
  static Expr x(int i) { return var(position_var(i)); }
  static Expr v(int i) { return var(velocity_var(i)); }
  /// w = |v| (v^0 for massless particles).
  static Expr speed();
  /// u = |x| = r.
  static Expr radius();

  const Numerator& numerator() const { return num_; }
  const Denominator& denominator() const { return den_; }

  bool is_zero() const;
  bool is_polynomial() const { return den_.is_one() && num_[1].is_zero() && num_[2].is_zero() && num_[3].is_zero(); }

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  Expr operator-() const;
  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }

  /// Division by a monomial in the coordinates and radicals.
  Expr divided_by(const Denominator& m) const;

  Expr diff(Var v) const;

  double evaluate(std::span<const double, kNumVars> point) const;

  std::string to_string() const;

 private:
  void reduce();

  Numerator num_{};
  Denominator den_{};
};

/// Exact structural equality: the cross-multiplied difference is the zero
/// quadruple.
bool equals(const Expr& a, const Expr& b);

inline Expr diff(const Expr& e, Var v) { return e.diff(v); }

}  // namespace mvp::sym

#endif
