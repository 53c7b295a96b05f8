#ifndef MVP_PHASEGEOM_PHASEGEOM_HPP
#define MVP_PHASEGEOM_PHASEGEOM_HPP

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>

namespace mvp {

using Vec3 = Eigen::Vector3d;
using PhaseCoords = std::array<double, 7>;  // (t, x1, x2, x3, v1, v2, v3)

struct PhasePoint {
  double t = 0.0;
  Vec3 X = Vec3::Zero();
  Vec3 V = Vec3::UnitX();

  PhaseCoords coords() const { return {t, X[0], X[1], X[2], V[0], V[1], V[2]}; }
  static PhasePoint from_coords(const PhaseCoords& y) {
    return {y[0], Vec3(y[1], y[2], y[3]), Vec3(y[4], y[5], y[6])};
  }
};

enum class WeightId { v0, v1, v2, v3, s, z12, z13, z23, z01, z02, z03, z2, z, morawetz };

inline constexpr std::array<WeightId, 11> kK0Weights = {WeightId::v0,  WeightId::v1,  WeightId::v2,  WeightId::v3,
                                                        WeightId::s,   WeightId::z12, WeightId::z13, WeightId::z23,
                                                        WeightId::z01, WeightId::z02, WeightId::z03};

/// Names as used by the symbolic catalog ("v0/v0", "s", "z12", ..., "z2", "z", "m").
const char* weight_name(WeightId id);
std::optional<WeightId> weight_from_name(const std::string& name);

/// Weight value for any scalar type supporting + - * / and sqrt.
template <class S>
S weight(WeightId id, const std::array<S, 7>& y) {
  using std::sqrt;
  const S& t = y[0];
  const S w = sqrt(y[4] * y[4] + y[5] * y[5] + y[6] * y[6]);
  auto xv = [&] { return y[1] * y[4] + y[2] * y[5] + y[3] * y[6]; };
  auto zij = [&](int i, int j) { return (y[i] * y[3 + j] - y[j] * y[3 + i]) / w; };
  auto z0k = [&](int k) { return y[k] - t * y[3 + k] / w; };
  switch (id) {
    case WeightId::v0: return S(1.0);
    case WeightId::v1: return y[4] / w;
    case WeightId::v2: return y[5] / w;
    case WeightId::v3: return y[6] / w;
    case WeightId::s: return t - xv() / w;
    case WeightId::z12: return zij(1, 2);
    case WeightId::z13: return zij(1, 3);
    case WeightId::z23: return zij(2, 3);
    case WeightId::z01: return z0k(1);
    case WeightId::z02: return z0k(2);
    case WeightId::z03: return z0k(3);
    case WeightId::z2:
    case WeightId::z: {
      S sum(0.0);
      for (WeightId k : kK0Weights) {
        const S wk = weight(k, y);
        sum = sum + wk * wk;
      }
      if (id == WeightId::z2) return sum;
      return sqrt(sum);
    }
    case WeightId::morawetz: {
      const S r2 = y[1] * y[1] + y[2] * y[2] + y[3] * y[3];
      return -(t * t + r2) + 2.0 * t * xv() / w;
    }
  }
  return S(0.0);
}

/// Rejects |V| = 0.
double eval_weight(WeightId id, const PhasePoint& p);

/// Cutoff: 0 on (-inf, 1/2], 1 on [1, inf), quintic smoothstep in between.
double chi(double s);
double chi_prime(double s);
double chi_second(double s);

struct Tau {
  double plus;
  double minus;
};
Tau tau(const PhasePoint& p);
Tau tau(double t, double r);

/// |v-slash| = sqrt(|V|^2 - (X.V / |X|)^2), equal to |V| at X = 0.
double angular_velocity_norm(const PhasePoint& p);

enum class FieldId { dt, d1, d2, d3, S, Sv, O12, O13, O23, T };

inline constexpr std::array<FieldId, 9> kCommutationFields = {FieldId::dt, FieldId::d1,  FieldId::d2,
                                                              FieldId::d3, FieldId::S,   FieldId::Sv,
                                                              FieldId::O12, FieldId::O13, FieldId::O23};
inline constexpr std::array<FieldId, 3> kRotationFields = {FieldId::O12, FieldId::O13, FieldId::O23};

const char* field_name(FieldId id);
std::optional<FieldId> field_from_name(const std::string& name);

/// Coefficients of the vector field in the basis (d_t, d_x1..3, d_v1..3).
template <class S>
std::array<S, 7> field_coefficients(FieldId id, const std::array<S, 7>& y) {
  using std::sqrt;
  std::array<S, 7> a;
  a.fill(S(0.0));
  auto rot = [&](int i, int j) {
    a[j] = y[i];
    a[i] = -y[j];
    a[3 + j] = y[3 + i];
    a[3 + i] = -y[3 + j];
  };
  switch (id) {
    case FieldId::dt: a[0] = S(1.0); break;
    case FieldId::d1: a[1] = S(1.0); break;
    case FieldId::d2: a[2] = S(1.0); break;
    case FieldId::d3: a[3] = S(1.0); break;
    case FieldId::S:
      for (int k = 0; k < 4; ++k) a[k] = y[k];
      break;
    case FieldId::Sv:
      for (int k = 4; k < 7; ++k) a[k] = y[k];
      break;
    case FieldId::O12: rot(1, 2); break;
    case FieldId::O13: rot(1, 3); break;
    case FieldId::O23: rot(2, 3); break;
    case FieldId::T:
      a[0] = sqrt(y[4] * y[4] + y[5] * y[5] + y[6] * y[6]);
      for (int k = 1; k <= 3; ++k) a[k] = y[3 + k];
      break;
  }
  return a;
}

/// Z applied to a function with gradient grad (in the same 7-variable basis).
double apply_field(FieldId id, const PhaseCoords& y, const std::array<double, 7>& grad);

}  // namespace mvp

#endif
