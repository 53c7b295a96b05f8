#include "mvp/ineq_harness/ineq_harness.hpp"

#include "mvp/common/parallel.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

namespace mvp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <int N>
using Coeffs = std::array<Jet<N>, 7>;

template <int N>
Coeffs<N> coordinate_jets(const PhaseCoords& y) {
  Coeffs<N> j;
  for (int k = 0; k < 7; ++k) j[k] = Jet<N>::variable(k, y[k]);
  return j;
}

std::array<bool, 7> coefficient_mask(FieldId z) {
  PhaseCoords probe;
  for (int k = 0; k < 7; ++k) probe[k] = 1.0 + 0.1 * k;
  const auto a = field_coefficients<double>(z, probe);
  std::array<bool, 7> m;
  for (int k = 0; k < 7; ++k) m[k] = a[k] != 0.0;
  return m;
}

const std::array<std::array<bool, 7>, 9>& commutation_masks() {
  static const auto masks = [] {
    std::array<std::array<bool, 7>, 9> m;
    for (int i = 0; i < 9; ++i) m[i] = coefficient_mask(kCommutationFields[i]);
    return m;
  }();
  return masks;
}

int field_index(FieldId z) {
  for (int i = 0; i < 9; ++i)
    if (kCommutationFields[i] == z) return i;
  throw std::invalid_argument("field is not in the commutation set");
}

template <int N>
Jet<N - 1> apply_jet(const Coeffs<N - 1>& a, const std::array<bool, 7>& mask, const Jet<N>& g) {
  Jet<N - 1> r;
  for (int k = 0; k < 7; ++k)
    if (mask[k]) r += a[k] * g.derivative(k);
  return r;
}

double apply_value(const std::array<double, 7>& a, const std::array<bool, 7>& mask, const Jet<1>& g) {
  double r = 0.0;
  for (int k = 0; k < 7; ++k)
    if (mask[k]) r += a[k] * g.partial(k);
  return r;
}

template <int N>
Jet<N - 1> apply_field_jet(FieldId z, const Jet<N>& g, const PhaseCoords& y) {
  const auto a = field_coefficients(z, coordinate_jets<N - 1>(y));
  return apply_jet<N>(a, coefficient_mask(z), g);
}

struct Rule {
  std::vector<double> x, w;
};

template <std::size_t N>
Rule legendre_fixed() {
  using boost::math::quadrature::gauss;
  Rule r;
  const auto& abs = gauss<double, N>::abscissa();
  const auto& wts = gauss<double, N>::weights();
  for (std::size_t i = 0; i < abs.size(); ++i) {
    r.x.push_back(abs[i]);
    r.w.push_back(wts[i]);
    if (abs[i] != 0.0) {
      r.x.push_back(-abs[i]);
      r.w.push_back(wts[i]);
    }
  }
  return r;
}

// Gauss-Legendre rule on [a, b]
Rule legendre(int n, double a, double b) {
  Rule base;
  switch (n) {
    case 2: base = legendre_fixed<2>(); break;
    case 3: base = legendre_fixed<3>(); break;
    case 4: base = legendre_fixed<4>(); break;
    case 5: base = legendre_fixed<5>(); break;
    case 6: base = legendre_fixed<6>(); break;
    case 7: base = legendre_fixed<7>(); break;
    case 8: base = legendre_fixed<8>(); break;
    case 9: base = legendre_fixed<9>(); break;
    case 10: base = legendre_fixed<10>(); break;
    case 11: base = legendre_fixed<11>(); break;
    case 12: base = legendre_fixed<12>(); break;
    case 14: base = legendre_fixed<14>(); break;
    case 16: base = legendre_fixed<16>(); break;
    default: throw std::invalid_argument("unsupported Gauss rule size " + std::to_string(n));
  }
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  for (std::size_t i = 0; i < base.x.size(); ++i) {
    base.x[i] = c + h * base.x[i];
    base.w[i] *= h;
  }
  return base;
}

struct BallNode {
  Vec3 p;
  double weight;
};

// product rule on the ball (or shell) lo <= |p| <= hi in the given frame
std::vector<BallNode> spherical_rule(int n, double lo, double hi, const Mat3d& frame) {
  const Rule rad = legendre(n, lo, hi);
  const Rule pol = legendre(n, -1.0, 1.0);
  std::vector<BallNode> out;
  out.reserve(static_cast<std::size_t>(n) * n * n);
  for (std::size_t i = 0; i < rad.x.size(); ++i)
    for (std::size_t j = 0; j < pol.x.size(); ++j)
      for (int k = 0; k < n; ++k) {
        const double phi = kTwoPi * (k + 0.5) / n;
        const double st = std::sqrt(std::max(0.0, 1.0 - pol.x[j] * pol.x[j]));
        const Vec3 local(st * std::cos(phi), st * std::sin(phi), pol.x[j]);
        out.push_back({frame * (rad.x[i] * local), rad.w[i] * rad.x[i] * rad.x[i] * pol.w[j] * kTwoPi / n});
      }
  return out;
}

PhaseCoords coords(double t, const Vec3& x, const Vec3& v) { return {t, x[0], x[1], x[2], v[0], v[1], v[2]}; }

// orthonormal frame with third axis e, first axis taken from the member frame
Mat3d aligned_frame(const Vec3& e, const Mat3d& frame) {
  Vec3 a = frame.col(0);
  if (std::abs(a.dot(e)) > 0.9) a = frame.col(1);
  const Vec3 e1 = (a - a.dot(e) * e).normalized();
  Mat3d f;
  f.col(0) = e1;
  f.col(1) = e.cross(e1);
  f.col(2) = e;
  return f;
}

// int over the unit sphere of h(vhat), with the support cap of the member about the axis x - center
template <class F>
QuadratureResult sphere_integral(const TestMember& g, double t, const Vec3& x, double tolerance, F&& h) {
  using boost::math::quadrature::gauss_kronrod;
  const Vec3 rel = x - g.center;
  const double d = rel.norm();
  const Mat3d frame = d > 1e-14 ? aligned_frame(rel / d, g.frame) : g.frame;
  const double D = g.drift * t;
  double lo = -1.0, hi = 1.0;
  if (d * D != 0.0) {
    const double cstar = (d * d + D * D - g.radius * g.radius) / (2.0 * d * D);
    if (D > 0.0) {
      lo = std::max(lo, cstar);
    } else {
      hi = std::min(hi, cstar);
    }
  } else if (d + std::abs(D) >= g.radius) {
    return {};
  }
  if (lo >= hi) return {};
  auto ring = [&](double c) {
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    auto along = [&](double phi) { return h(Vec3(frame * Vec3(s * std::cos(phi), s * std::sin(phi), c))); };
    return gauss_kronrod<double, 15>::integrate(along, 0.0, kTwoPi, 8, 0.1 * tolerance);
  };
  QuadratureResult r;
  r.value = gauss_kronrod<double, 31>::integrate(ring, lo, hi, 12, tolerance, &r.error);
  r.converged = r.error <= tolerance * std::abs(r.value) || r.value == 0.0;
  return r;
}

QuadratureResult speed_integral(const TestMember& g, double tolerance) {
  using boost::math::quadrature::gauss_kronrod;
  QuadratureResult r;
  r.value = gauss_kronrod<double, 61>::integrate([&](double w) { return g.speed_part(w) * w * w; }, g.v_low,
                                                 g.v_high, 10, tolerance, &r.error);
  r.converged = r.error <= tolerance * std::abs(r.value);
  return r;
}

QuadratureResult factorized(const TestMember& g, double tolerance, const QuadratureResult& sphere) {
  const QuadratureResult sp = speed_integral(g, tolerance);
  QuadratureResult r;
  r.value = sp.value * sphere.value;
  r.error = sp.error * std::abs(sphere.value) + std::abs(sp.value) * sphere.error;
  r.converged = sp.converged && sphere.converged;
  return r;
}

double reference_speed(const TestMember& g) { return 0.5 * (g.v_low + g.v_high); }

// rounding-level values are treated as zero so that vanishing integrands terminate
double clamp_noise(double v, const TestMember& g) { return std::abs(v) <= 1e-13 * std::abs(g.amplitude) ? 0.0 : std::abs(v); }

}  // namespace

double TestMember::transport(const PhaseCoords& y) const {
  const Jet<1> j = jet<1>(y);
  double r = 0.0;
  for (int k = 0; k < 3; ++k) r += y[4 + k] * j.partial(1 + k);
  return (1.0 - drift) * r;
}

double TestMember::speed_part(double w) const {
  const double half = 0.5 * (v_high - v_low);
  const double b = (w - v_low) * (v_high - w) / (half * half);
  if (b <= 0.0) return 0.0;
  const double b2 = b * b;
  return b2 * b2 * b;
}

TestMember TestMember::rotated(const Mat3d& rot) const {
  TestMember m = *this;
  m.center = rot * center;
  m.frame = rot * frame;
  return m;
}

std::vector<std::string> family_names() { return {"standard", "sym_free", "offcenter_free", "slow_shell", "zero"}; }

TestFamily family_from_name(const std::string& name) {
  TestMember sym;
  sym.name = "sym_free";
  TestMember off;
  off.name = "offcenter_free";
  off.center = Vec3(0.0, 0.0, 1.5);
  off.tilt = 0.4;
  TestMember slow;
  slow.name = "slow_shell";
  slow.drift = 0.5;
  slow.tilt = 0.2;
  TestMember zero;
  zero.name = "zero";
  zero.amplitude = 0.0;
  if (name == "standard") return {sym, off, slow};
  if (name == "sym_free") return {sym};
  if (name == "offcenter_free") return {off};
  if (name == "slow_shell") return {slow};
  if (name == "zero") return {zero};
  throw std::invalid_argument("unknown test family '" + name + "'");
}

double commuted(const TestMember& g, const PhaseCoords& y, const std::vector<FieldId>& seq) {
  switch (seq.size()) {
    case 0: return g.value(y);
    case 1: return apply_field_jet<1>(seq[0], g.jet<1>(y), y).value();
    case 2: return apply_field_jet<1>(seq[0], apply_field_jet<2>(seq[1], g.jet<2>(y), y), y).value();
    case 3:
      return apply_field_jet<1>(seq[0], apply_field_jet<2>(seq[1], apply_field_jet<3>(seq[2], g.jet<3>(y), y), y), y)
          .value();
    default: throw std::invalid_argument("commuted: order above 3");
  }
}

GateReport validate_member(const TestMember& g, int points, std::uint64_t seed, double tolerance) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::normal_distribution<double> N(0.0, 1.0);
  GateReport rep;
  rep.points = points;
  const double h = 1e-3;
  auto central = [h](auto&& f) { return (8.0 * (f(h) - f(-h)) - (f(2.0 * h) - f(-2.0 * h))) / (12.0 * h); };
  auto shifted = [&](const PhaseCoords& y, const std::array<double, 7>& a, double s) {
    PhaseCoords q = y;
    for (int k = 0; k < 7; ++k) q[k] += s * a[k];
    return q;
  };
  for (int i = 0; i < points; ++i) {
    const double t = 4.0 * U(rng);
    Vec3 yl;
    do {
      yl = Vec3(2.0 * U(rng) - 1.0, 2.0 * U(rng) - 1.0, 2.0 * U(rng) - 1.0);
    } while (yl.norm() > 0.9);
    const Vec3 dir = Vec3(N(rng), N(rng), N(rng)).normalized();
    const double w = g.v_low + (0.1 + 0.8 * U(rng)) * (g.v_high - g.v_low);
    const Vec3 x = g.radius * yl + g.center + g.drift * t * dir;
    const PhaseCoords y = coords(t, x, w * dir);

    std::vector<std::vector<FieldId>> seqs;
    for (FieldId z : kCommutationFields) seqs.push_back({z});
    for (int k = 0; k < 9; ++k) {
      seqs.push_back({kCommutationFields[rng() % 9], kCommutationFields[rng() % 9]});
      seqs.push_back({kCommutationFields[rng() % 9], kCommutationFields[rng() % 9], kCommutationFields[rng() % 9]});
    }
    std::vector<double> exact, fd;
    for (const auto& seq : seqs) {
      const auto a = field_coefficients<double>(seq.front(), y);
      const std::vector<FieldId> tail(seq.begin() + 1, seq.end());
      exact.push_back(commuted(g, y, seq));
      auto f = [&](double s) { return commuted(g, shifted(y, a, s), tail); };
      fd.push_back(central(f));
    }
    const auto aT = field_coefficients<double>(FieldId::T, y);
    exact.push_back(g.transport(y));
    fd.push_back(central([&](double s) { return g.value(shifted(y, aT, s)); }));

    double scale = 0.0;
    for (double e : exact) scale = std::max(scale, std::abs(e));
    for (std::size_t k = 0; k < exact.size(); ++k) {
      const double floor = 1e-3 * scale + 1e-300;
      rep.max_rel_error = std::max(rep.max_rel_error, std::abs(exact[k] - fd[k]) / (std::abs(fd[k]) + floor));
      ++rep.checks;
    }
  }
  rep.passed = rep.max_rel_error <= tolerance;
  return rep;
}

QuadratureResult lhs(const TestMember& g, double t, const Vec3& x, double tolerance) {
  if (g.is_zero()) return {};
  const double w = reference_speed(g);
  const double hw = g.speed_part(w);
  const QuadratureResult sphere =
      sphere_integral(g, t, x, tolerance, [&](const Vec3& e) { return clamp_noise(g.value(coords(t, x, w * e)), g) / hw; });
  return factorized(g, tolerance, sphere);
}

QuadratureResult averaged_commuted(const TestMember& g, FieldId z, double t, const Vec3& x, double tolerance) {
  if (z == FieldId::Sv || z == FieldId::T) throw std::invalid_argument("averaged_commuted: field acts on |v|");
  if (g.is_zero()) return {};
  const double w = reference_speed(g);
  const double hw = g.speed_part(w);
  const QuadratureResult sphere = sphere_integral(
      g, t, x, tolerance, [&](const Vec3& e) { return clamp_noise(commuted(g, coords(t, x, w * e), {z}), g) / hw; });
  return factorized(g, tolerance, sphere);
}

namespace {

// per p: first, second, order 0..3 of the second sum
std::vector<double> rhs_level(const TestMember& g, double t, const std::vector<int>& ps, int n) {
  const auto ynodes = spherical_rule(n, 0.0, g.radius, g.frame);
  const auto vnodes = spherical_rule(n, g.v_low, g.v_high, g.frame);
  const std::size_t width = 6 * ps.size();
  const auto& masks = commutation_masks();
  const std::array<int, 3> rot = {field_index(FieldId::O12), field_index(FieldId::O13), field_index(FieldId::O23)};
  const double tfactor = 1.0 - g.drift;

  return chunked_tree_sum(ynodes.size(), 1, width, [&](std::size_t begin, std::size_t end, std::vector<double>& acc) {
    for (std::size_t iy = begin; iy < end; ++iy) {
      for (const auto& vn : vnodes) {
        const Vec3& v = vn.p;
        const double speed = v.norm();
        const Vec3 x = ynodes[iy].p + g.center + g.drift * t * (v / speed);
        const PhaseCoords y = coords(t, x, v);
        const Jet<3> g3 = g.jet<3>(y);
        if (g3.value() == 0.0) continue;
        const double W = ynodes[iy].weight * vn.weight;

        const auto yj2 = coordinate_jets<2>(y);
        const auto yj1 = coordinate_jets<1>(y);
        std::array<Coeffs<2>, 9> a2;
        std::array<Coeffs<1>, 9> a1;
        std::array<std::array<double, 7>, 9> a0;
        for (int i = 0; i < 9; ++i) {
          a2[i] = field_coefficients(kCommutationFields[i], yj2);
          a1[i] = field_coefficients(kCommutationFields[i], yj1);
          a0[i] = field_coefficients<double>(kCommutationFields[i], y);
        }

        std::array<double, 4> ord{};
        ord[0] = std::abs(g3.value());
        for (int i = 0; i < 9; ++i) {
          const Jet<2> j2 = apply_jet<3>(a2[i], masks[i], g3);
          ord[1] += std::abs(j2.value());
          for (int j = 0; j < 9; ++j) {
            const Jet<1> j1 = apply_jet<2>(a1[j], masks[j], j2);
            ord[2] += std::abs(j1.value());
            for (int l = 0; l < 9; ++l) ord[3] += std::abs(apply_value(a0[l], masks[l], j1));
          }
        }
        const double B = ord[0] + ord[1] + ord[2] + ord[3];

        double A = 0.0;
        if (tfactor != 0.0) {
          Jet<2> Tg;
          for (int k = 0; k < 3; ++k) Tg += v[k] * g3.derivative(1 + k);
          Tg *= tfactor;
          A += std::abs(Tg.value());
          for (int i : rot) {
            const Jet<1> o1 = apply_jet<2>(a1[i], masks[i], Tg);
            A += std::abs(o1.value());
            for (int j : rot) A += std::abs(apply_value(a0[j], masks[j], o1));
          }
        }

        const double r = x.norm();
        const double z = weight<double>(WeightId::z, y);
        const double s = weight<double>(WeightId::s, y);
        for (std::size_t q = 0; q < ps.size(); ++q) {
          const int p = ps[q];
          const double wfirst = p == 0 ? 1.0 : std::pow(z, p);
          const double wsecond = p == 0 ? 1.0 + std::abs(s) : std::pow(z, p + 1);
          acc[6 * q] += W * r * wfirst * A / speed;
          acc[6 * q + 1] += W * wsecond * B;
          for (int k = 0; k < 4; ++k) acc[6 * q + 2 + k] += W * wsecond * ord[k];
        }
      }
    }
  });
}

}  // namespace

std::vector<RhsResult> rhs(const TestMember& g, double t, const std::vector<int>& ps, const RhsOptions& opt) {
  for (int p : ps)
    if (p < 0) throw std::invalid_argument("rhs: negative weight power");
  std::vector<RhsResult> out(ps.size());
  for (std::size_t q = 0; q < ps.size(); ++q) out[q].p = ps[q];
  if (g.is_zero()) {
    for (auto& r : out) r.converged = true;
    return out;
  }
  const auto fine = rhs_level(g, t, ps, opt.nodes);
  const auto coarse = rhs_level(g, t, ps, opt.nodes - 2);
  for (std::size_t q = 0; q < ps.size(); ++q) {
    RhsResult& r = out[q];
    r.first_sum = fine[6 * q];
    r.second_sum = fine[6 * q + 1];
    r.total = r.first_sum + r.second_sum;
    for (int k = 0; k < 4; ++k) r.by_order[k] = fine[6 * q + 2 + k];
    const double c = coarse[6 * q] + coarse[6 * q + 1];
    r.error = r.total != 0.0 ? std::abs(r.total - c) / std::abs(r.total) : 0.0;
    r.converged = r.error <= opt.tolerance;
  }
  return out;
}

std::vector<double> scan_radii(double t, int count) {
  if (count < 2) throw std::invalid_argument("scan_radii: need at least two radii");
  std::vector<double> r;
  const double top = t + 51.0;
  for (int k = 0; k < count; ++k) r.push_back(std::pow(top, static_cast<double>(k) / (count - 1)) - 1.0);
  r.front() = 0.0;
  r.back() = t + 50.0;
  r.push_back(t);
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

InequalityReport constant_scan(const TestFamily& family, const std::vector<double>& times, const std::vector<int>& ps,
                               const ScanOptions& opt) {
  if (family.empty()) throw std::invalid_argument("constant_scan: empty family");
  InequalityReport rep;
  for (const auto& g : family) {
    for (double t : times) {
      const auto R = rhs(g, t, ps, opt.rhs);
      std::vector<InequalityRow> rows(ps.size());
      for (std::size_t q = 0; q < ps.size(); ++q) {
        rows[q].member = g.name;
        rows[q].t = t;
        rows[q].p = ps[q];
        rows[q].rhs = R[q].total;
        rows[q].rhs_error = R[q].error;
        rows[q].converged = R[q].converged;
        rows[q].skipped = R[q].total == 0.0;
      }
      const double support = g.spatial_support(t);
      for (const Vec3& dir : {Vec3(g.frame.col(2)), Vec3(-g.frame.col(2))}) {
        for (double r : scan_radii(t, opt.radii)) {
          if (r > support) break;
          const double L = lhs(g, t, r * dir, opt.lhs_tolerance).value;
          if (L == 0.0) continue;
          const double tm = tau(t, r).minus;
          for (std::size_t q = 0; q < ps.size(); ++q) {
            if (rows[q].skipped) continue;
            const double ratio = L * (1.0 + r) * (1.0 + r) * std::pow(tm, 1 + ps[q]) / rows[q].rhs;
            if (ratio > rows[q].ratio) {
              rows[q].ratio = ratio;
              rows[q].lhs = L;
              rows[q].r_sup = r;
            }
          }
        }
      }
      for (auto& row : rows) {
        if (!row.skipped) {
          if (!std::isfinite(row.ratio) || row.ratio <= 0.0) rep.all_finite = false;
          if (!row.converged) rep.all_converged = false;
        }
        rep.rows.push_back(row);
      }
    }
  }
  for (int p : ps) {
    FamilyMax fm;
    fm.p = p;
    for (double t : times) {
      double m = 0.0;
      bool any = false;
      for (const auto& row : rep.rows)
        if (row.p == p && row.t == t && !row.skipped) {
          m = std::max(m, row.ratio);
          any = true;
        }
      if (!any) continue;
      fm.t.push_back(t);
      fm.max_ratio.push_back(m);
    }
    if (!fm.max_ratio.empty()) {
      const auto [lo, hi] = std::minmax_element(fm.max_ratio.begin(), fm.max_ratio.end());
      fm.variation = *lo > 0.0 ? *hi / *lo : 0.0;
    }
    rep.family.push_back(fm);
  }
  return rep;
}

CommuteCheck average_commute_check(const TestMember& g, FieldId z, double t, const std::vector<Vec3>& xs, double h) {
  if (z == FieldId::Sv || z == FieldId::T) throw std::invalid_argument("average_commute_check: Z must be a spacetime field");
  CommuteCheck out;
  const double tol = 1e-10;
  for (const Vec3& x : xs) {
    const auto a = field_coefficients<double>(z, coords(t, x, Vec3::UnitX()));
    const Vec3 ax(a[1], a[2], a[3]);
    const double plus = lhs(g, t + h * a[0], x + h * ax, tol).value;
    const double minus = lhs(g, t - h * a[0], x - h * ax, tol).value;
    const double D = std::abs(plus - minus) / (2.0 * h);
    const double avg = averaged_commuted(g, z, t, x, 1e-6).value;
    const double base = lhs(g, t, x, tol).value;
    const double residual = std::max(0.0, D - avg);
    out.max_residual = std::max(out.max_residual, residual);
    const double scale = std::max(avg, base);
    if (scale > 0.0) out.max_relative = std::max(out.max_relative, residual / scale);
    out.max_average_derivative = std::max(out.max_average_derivative, D);
  }
  return out;
}

AngularFit angupart_fit(const TestMember& g, double t, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::normal_distribution<double> N(0.0, 1.0);
  AngularFit fit;
  for (int i = 0; i < samples; ++i) {
    Vec3 yl;
    do {
      yl = Vec3(2.0 * U(rng) - 1.0, 2.0 * U(rng) - 1.0, 2.0 * U(rng) - 1.0);
    } while (yl.norm() > 1.0);
    const Vec3 dir = Vec3(N(rng), N(rng), N(rng)).normalized();
    const double w = g.v_low + U(rng) * (g.v_high - g.v_low);
    const Vec3 x = g.radius * yl + g.center + g.drift * t * dir;
    const double r = x.norm();
    if (r == 0.0) continue;
    const PhaseCoords y = coords(t, x, w * dir);
    const Jet<1> j = g.jet<1>(y);
    const Vec3 grad(j.partial(1), j.partial(2), j.partial(3));
    const Vec3 xhat = x / r;
    const double left = std::abs(dir.dot(grad) - dir.dot(xhat) * xhat.dot(grad));
    double zsum = 0.0;
    for (WeightId id : {WeightId::z12, WeightId::z13, WeightId::z23}) zsum += std::abs(weight<double>(id, y));
    const double right = zsum * grad.norm() / r;
    if (right <= 0.0) continue;
    fit.fitted_constant = std::max(fit.fitted_constant, left / right);
    ++fit.samples;
  }
  return fit;
}

void write_inequality_csv(const InequalityReport& rep, std::ostream& out) {
  out << "member,t,p,r_sup,lhs,rhs,ratio,rhs_error,converged,skipped\n";
  out.precision(17);
  for (const auto& r : rep.rows) {
    out << r.member << ',' << r.t << ',' << r.p << ',' << r.r_sup << ',' << r.lhs << ',' << r.rhs << ',' << r.ratio
        << ',' << r.rhs_error << ',' << (r.converged ? 1 : 0) << ',' << (r.skipped ? 1 : 0) << '\n';
  }
}

std::string inequality_json(const InequalityReport& rep) {
  nlohmann::json j;
  j["all_finite"] = rep.all_finite;
  j["all_converged"] = rep.all_converged;
  j["family"] = nlohmann::json::array();
  for (const auto& f : rep.family)
    j["family"].push_back({{"p", f.p}, {"t", f.t}, {"max_ratio", f.max_ratio}, {"variation", f.variation}});
  return j.dump(2);
}

}  // namespace mvp
