#ifndef MVP_COMMON_JET_HPP
#define MVP_COMMON_JET_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace mvp {

inline constexpr int kJetVars = 7;

constexpr int jet_size(int order) {
  // C(7 + order, order)
  int n = 1;
  for (int k = 1; k <= order; ++k) n = n * (kJetVars + k) / k;
  return n;
}

namespace detail {

struct JetTable {
  std::vector<std::array<std::uint8_t, kJetVars>> exps;
  struct Pair {
    std::uint16_t a, b, c;
  };
  std::vector<Pair> products;
  struct Shift {
    std::uint16_t src, dst;
    double factor;
  };
  std::array<std::vector<Shift>, kJetVars> derivative;  // order -> order - 1

  int find(const std::array<std::uint8_t, kJetVars>& e) const {
    for (std::size_t i = 0; i < exps.size(); ++i)
      if (exps[i] == e) return static_cast<int>(i);
    return -1;
  }

  explicit JetTable(int order) {
    // graded order: lower orders form a prefix
    for (int deg = 0; deg <= order; ++deg) {
      std::array<std::uint8_t, kJetVars> e{};
      gen(e, 0, deg);
    }
    for (std::size_t i = 0; i < exps.size(); ++i)
      for (std::size_t j = 0; j < exps.size(); ++j) {
        std::array<std::uint8_t, kJetVars> e{};
        int deg = 0;
        for (int k = 0; k < kJetVars; ++k) {
          e[k] = static_cast<std::uint8_t>(exps[i][k] + exps[j][k]);
          deg += e[k];
        }
        if (deg > order) continue;
        products.push_back({static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(j),
                            static_cast<std::uint16_t>(find(e))});
      }
    const int lower = jet_size(order - 1 < 0 ? 0 : order - 1);
    for (int k = 0; k < kJetVars && order > 0; ++k)
      for (int dst = 0; dst < lower; ++dst) {
        auto e = exps[dst];
        ++e[k];
        derivative[k].push_back({static_cast<std::uint16_t>(find(e)), static_cast<std::uint16_t>(dst),
                                 static_cast<double>(e[k])});
      }
  }

 private:
  // enumerate exponent vectors of total degree deg, lexicographically descending
  void gen(std::array<std::uint8_t, kJetVars>& e, int var, int remaining) {
    if (var == kJetVars - 1) {
      e[var] = static_cast<std::uint8_t>(remaining);
      exps.push_back(e);
      return;
    }
    for (int d = remaining; d >= 0; --d) {
      e[var] = static_cast<std::uint8_t>(d);
      gen(e, var + 1, remaining - d);
    }
    e[var] = 0;
  }
};

template <int N>
const JetTable& jet_table() {
  static const JetTable table(N);
  return table;
}

}  // namespace detail

/// Truncated Taylor expansion of order N in the seven phase-space variables
/// (t, x1, x2, x3, v1, v2, v3). Coefficients are Taylor coefficients, i.e.
/// derivatives divided by the multi-index factorial.
template <int N>
class Jet {
 public:
  static constexpr int kSize = jet_size(N);

  Jet() { c_.fill(0.0); }
  Jet(double value) {  // NOLINT: scalar promotion
    c_.fill(0.0);
    c_[0] = value;
  }

  static Jet variable(int k, double value) {
    Jet j(value);
    if constexpr (N > 0) j.c_[1 + k] = 1.0;
    return j;
  }

  double value() const { return c_[0]; }
  double operator[](int i) const { return c_[i]; }
  double& operator[](int i) { return c_[i]; }
  /// First partial derivative in variable k.
  double partial(int k) const {
    if constexpr (N > 0) return c_[1 + k];
    return 0.0;
  }

  Jet& operator+=(const Jet& o) {
    for (int i = 0; i < kSize; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int i = 0; i < kSize; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Jet& operator*=(double s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  Jet& operator+=(double s) {
    c_[0] += s;
    return *this;
  }
  Jet operator-() const {
    Jet r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a += -s; }
  friend Jet operator-(double s, const Jet& a) { return (-a) + s; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a *= 1.0 / s; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    if constexpr (N == 0) {
      r.c_[0] = a.c_[0] * b.c_[0];
    } else {
      for (const auto& p : detail::jet_table<N>().products) r.c_[p.c] += a.c_[p.a] * b.c_[p.b];
    }
    return r;
  }

  /// f(a) given f and its first three derivatives at a.value().
  Jet compose(double f0, double f1, double f2, double f3) const {
    Jet r(f0);
    if constexpr (N > 0) {
      Jet d = *this;
      d.c_[0] = 0.0;
      r += f1 * d;
      if constexpr (N > 1) {
        Jet d2 = d * d;
        r += (f2 / 2.0) * d2;
        if constexpr (N > 2) r += (f3 / 6.0) * (d2 * d);
      }
    }
    (void)f1;
    (void)f2;
    (void)f3;
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
  friend Jet operator/(double s, const Jet& b) { return s * reciprocal(b); }

  friend Jet reciprocal(const Jet& a) {
    const double x = a.c_[0];
    const double i = 1.0 / x;
    return a.compose(i, -i * i, 2 * i * i * i, -6 * i * i * i * i);
  }
  friend Jet sqrt(const Jet& a) {
    const double x = a.c_[0];
    const double s = std::sqrt(x);
    if constexpr (N == 0) return Jet(s);
    return a.compose(s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x));
  }
  friend Jet exp(const Jet& a) {
    const double e = std::exp(a.c_[0]);
    return a.compose(e, e, e, e);
  }
  friend Jet abs(const Jet& a) { return a.c_[0] < 0 ? -a : a; }

  /// d/dy_k, dropping one order.
  Jet<(N > 0 ? N - 1 : 0)> derivative(int k) const {
    Jet<(N > 0 ? N - 1 : 0)> r;
    if constexpr (N > 0)
      for (const auto& s : detail::jet_table<N>().derivative[k]) r[s.dst] = s.factor * c_[s.src];
    return r;
  }

  template <int M>
  Jet<M> truncate() const {
    static_assert(M <= N);
    Jet<M> r;
    for (int i = 0; i < Jet<M>::kSize; ++i) r[i] = c_[i];
    return r;
  }

 private:
  std::array<double, kSize> c_;
};

inline double value_of(double x) { return x; }
template <int N>
double value_of(const Jet<N>& j) {
  return j.value();
}

}  // namespace mvp

#endif
