#include "mvp/symkernel/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mvp::sym {

const char* var_name(Var v) {
  static constexpr const char* kNames[kNumVars] = {"t", "x1", "x2", "x3", "v1", "v2", "v3"};
  return kNames[index(v)];
}

Polynomial::Polynomial(const Rational& c) {
  if (c != 0) terms_.emplace(Exponents{}, c);
}

Polynomial Polynomial::variable(Var v) {
  Exponents e{};
  e[index(v)] = 1;
  return monomial(e);
}

Polynomial Polynomial::monomial(const Exponents& e, const Rational& c) {
  Polynomial p;
  if (c != 0) p.terms_.emplace(e, c);
  return p;
}

void Polynomial::add_term(const Exponents& e, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, coeff] : terms_) coeff *= c;
  return *this;
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      Exponents e;
      for (int k = 0; k < kNumVars; ++k) e[k] = static_cast<std::uint16_t>(ea[k] + eb[k]);
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

Polynomial Polynomial::times_monomial(const Exponents& m) const {
  Polynomial r;
  for (const auto& [e, c] : terms_) {
    Exponents s;
    for (int k = 0; k < kNumVars; ++k) s[k] = static_cast<std::uint16_t>(e[k] + m[k]);
    r.terms_.emplace_hint(r.terms_.end(), s, c);
  }
  return r;
}

Polynomial Polynomial::divided_by_monomial(const Exponents& m) const {
  Polynomial r;
  for (const auto& [e, c] : terms_) {
    Exponents s;
    for (int k = 0; k < kNumVars; ++k) s[k] = static_cast<std::uint16_t>(e[k] - m[k]);
    r.terms_.emplace_hint(r.terms_.end(), s, c);
  }
  return r;
}

Exponents Polynomial::min_exponents() const {
  if (terms_.empty()) return Exponents{};
  Exponents m = terms_.begin()->first;
  for (const auto& [e, c] : terms_)
    for (int k = 0; k < kNumVars; ++k) m[k] = std::min(m[k], e[k]);
  return m;
}

Polynomial Polynomial::derivative(Var v) const {
  const int i = index(v);
  Polynomial r;
  for (const auto& [e, c] : terms_) {
    if (e[i] == 0) continue;
    Exponents d = e;
    --d[i];
    r.add_term(d, c * e[i]);
  }
  return r;
}

double Polynomial::evaluate(std::span<const double, kNumVars> point) const {
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double term = c.get_d();
    for (int k = 0; k < kNumVars; ++k)
      if (e[k] != 0) term *= std::pow(point[k], e[k]);
    sum += term;
  }
  return sum;
}

Rational Polynomial::evaluate(std::span<const Rational, kNumVars> point) const {
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Rational term = c;
    for (int k = 0; k < kNumVars; ++k)
      for (int p = 0; p < e[k]; ++p) term *= point[k];
    sum += term;
  }
  return sum;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    Rational a = c;
    if (!first) {
      os << (a < 0 ? " - " : " + ");
      a = abs(a);
    } else if (a < 0) {
      os << "-";
      a = abs(a);
    }
    first = false;
    bool constant = std::all_of(e.begin(), e.end(), [](auto k) { return k == 0; });
    if (a != 1 || constant) os << a.get_str();
    bool need_star = (a != 1);
    for (int k = 0; k < kNumVars; ++k) {
      if (e[k] == 0) continue;
      if (need_star) os << "*";
      os << var_name(static_cast<Var>(k));
      if (e[k] > 1) os << "^" << e[k];
      need_star = true;
    }
  }
  return os.str();
}

const Polynomial& velocity_norm_squared() {
  static const Polynomial p = [] {
    Polynomial s;
    for (int i = 1; i <= 3; ++i) s += Polynomial::variable(velocity_var(i)) * Polynomial::variable(velocity_var(i));
    return s;
  }();
  return p;
}

const Polynomial& position_norm_squared() {
  static const Polynomial p = [] {
    Polynomial s;
    for (int i = 1; i <= 3; ++i) s += Polynomial::variable(position_var(i)) * Polynomial::variable(position_var(i));
    return s;
  }();
  return p;
}

}  // namespace mvp::sym
