#include "mvp/vp_sim/initial_data.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <stdexcept>

namespace mvp {

namespace {

constexpr double kPi = 3.14159265358979323846;

template <class F>
double integrate(F f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, 1e-13);
}

}  // namespace

void InitialData::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(radial_scale > 0.0)) throw std::invalid_argument("radial_scale must be positive");
  if (!(v_low >= 2.0)) throw std::invalid_argument("v_support_low must be >= 2 so that f0 vanishes for |v| <= 2");
  if (!(v_high > v_low)) throw std::invalid_argument("v_support_high must exceed v_support_low");
}

double InitialData::radial(double r) const {
  const double q = (r / radial_scale) * (r / radial_scale);
  if (profile == RadialProfile::gaussian) return std::exp(-q);
  if (q >= 1.0) return 0.0;
  const double u = 1.0 - q;
  return u * u * u;
}

double InitialData::radial_prime(double r) const {
  const double R2 = radial_scale * radial_scale;
  const double q = r * r / R2;
  if (profile == RadialProfile::gaussian) return -2.0 * r / R2 * std::exp(-q);
  if (q >= 1.0) return 0.0;
  const double u = 1.0 - q;
  return -6.0 * r / R2 * u * u;
}

double InitialData::speed(double v) const {
  if (v <= v_low || v >= v_high) return 0.0;
  const double half = 0.5 * (v_high - v_low);
  const double p = (v - v_low) * (v_high - v) / (half * half);
  return p * p * p;
}

double InitialData::speed_prime(double v) const {
  if (v <= v_low || v >= v_high) return 0.0;
  const double half = 0.5 * (v_high - v_low);
  const double p = (v - v_low) * (v_high - v) / (half * half);
  const double dp = (v_high + v_low - 2.0 * v) / (half * half);
  return 3.0 * p * p * dp;
}

double InitialData::value(const Vec3& x, const Vec3& v) const {
  const double r = x.norm();
  const double s = v.norm();
  const double a = radial(r);
  const double b = speed(s);
  if (a == 0.0 || b == 0.0) return 0.0;
  const double mu = r > 0.0 ? x.dot(v) / (r * s) : 0.0;
  return epsilon * a * b * angular(mu);
}

std::array<double, 6> InitialData::gradient(const Vec3& x, const Vec3& v) const {
  std::array<double, 6> g{};
  const double r = x.norm();
  const double s = v.norm();
  const double a = radial(r), ap = radial_prime(r);
  const double b = speed(s), bp = speed_prime(s);
  if ((a == 0.0 && ap == 0.0) || (b == 0.0 && bp == 0.0)) return g;
  const Vec3 vh = v / s;
  const Vec3 xh = r > 0.0 ? Vec3(x / r) : Vec3::Zero();
  const double mu = r > 0.0 ? xh.dot(vh) : 0.0;
  const double c = angular(mu), cp = angular_prime(mu);
  Vec3 gx = ap * b * c * xh;
  Vec3 gv = a * bp * c * vh;
  if (r > 0.0 && cp != 0.0) {
    gx += a * b * cp * (vh - mu * xh) / r;
    gv += a * b * cp * (xh - mu * vh) / s;
  }
  for (int i = 0; i < 3; ++i) {
    g[i] = epsilon * gx[i];
    g[3 + i] = epsilon * gv[i];
  }
  return g;
}

double InitialData::radial_support() const {
  if (profile == RadialProfile::bump) return radial_scale;
  return radial_scale * std::sqrt(690.0);
}

double InitialData::radial_moment() const {
  return integrate([this](double r) { return radial(r) * r * r; }, 0.0, radial_support());
}

double InitialData::speed_moment() const {
  return integrate([this](double v) { return speed(v) * v * v; }, v_low, v_high);
}

double InitialData::angular_abs_moment() const {
  const double k = anisotropy;
  if (std::abs(k) <= 1.0) return 2.0;
  // 1 + k mu changes sign at mu = -1/k
  const double m0 = -1.0 / k;
  auto piece = [k](double lo, double hi) { return std::abs((hi - lo) + 0.5 * k * (hi * hi - lo * lo)); };
  return piece(-1.0, m0) + piece(m0, 1.0);
}

double InitialData::total_charge() const { return epsilon * 4.0 * kPi * radial_moment() * 2.0 * kPi * speed_moment() * angular_moment(); }

double InitialData::total_abs_mass() const {
  return epsilon * 4.0 * kPi * radial_moment() * 2.0 * kPi * speed_moment() * angular_abs_moment();
}

double InitialData::density(double r) const { return epsilon * radial(r) * speed_moment() * 2.0 * kPi * angular_moment(); }

double InitialData::enclosed_charge(double r) const {
  const double upper = std::min(r, radial_support());
  if (upper <= 0.0) return 0.0;
  const double m = integrate([this](double s) { return radial(s) * s * s; }, 0.0, upper);
  return epsilon * 4.0 * kPi * m * 2.0 * kPi * speed_moment() * angular_moment();
}

RadialProfile radial_profile_from_name(const std::string& name) {
  if (name == "bump") return RadialProfile::bump;
  if (name == "gaussian") return RadialProfile::gaussian;
  throw std::invalid_argument("unknown radial_profile '" + name + "' (expected bump or gaussian)");
}

const char* radial_profile_name(RadialProfile p) { return p == RadialProfile::bump ? "bump" : "gaussian"; }

}  // namespace mvp
