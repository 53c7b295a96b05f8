#ifndef MVP_SYMKERNEL_POLYNOMIAL_HPP
#define MVP_SYMKERNEL_POLYNOMIAL_HPP

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>

namespace mvp::sym {

/// Phase-space coordinates in the fixed order used throughout the kernel.
enum class Var : int { t = 0, x1, x2, x3, v1, v2, v3 };

inline constexpr int kNumVars = 7;

using Rational = mpq_class;
using Exponents = std::array<std::uint16_t, kNumVars>;

inline constexpr int index(Var v) { return static_cast<int>(v); }
inline constexpr Var position_var(int i) { return static_cast<Var>(i); }      // i = 1..3
inline constexpr Var velocity_var(int i) { return static_cast<Var>(3 + i); }  // i = 1..3

const char* var_name(Var v);

/// Sparse multivariate polynomial in (t, x1..x3, v1..v3) with exact
/// rational coefficients. Zero coefficients are never stored.
class Polynomial {
 public:
  using TermMap = std::map<Exponents, Rational>;

  Polynomial() = default;
  explicit Polynomial(const Rational& c);
  static Polynomial variable(Var v);
  static Polynomial monomial(const Exponents& e, const Rational& c = 1);

  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const TermMap& terms() const { return terms_; }

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Rational& c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  Polynomial operator-() const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }

  Polynomial times_monomial(const Exponents& e) const;
  /// Divides every term by x^e; the caller guarantees divisibility.
  Polynomial divided_by_monomial(const Exponents& e) const;
  /// Componentwise minimum exponent over all terms (zero for the zero polynomial).
  Exponents min_exponents() const;

  Polynomial derivative(Var v) const;

  double evaluate(std::span<const double, kNumVars> point) const;
  Rational evaluate(std::span<const Rational, kNumVars> point) const;

  std::string to_string() const;

 private:
  void add_term(const Exponents& e, const Rational& c);
  TermMap terms_;
};

/// v.v and x.x, the squares of the adjoined radicals w = |v| and u = |x|.
const Polynomial& velocity_norm_squared();
const Polynomial& position_norm_squared();

}  // namespace mvp::sym

#endif
