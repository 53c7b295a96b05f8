#include "mvp/phasegeom/phasegeom.hpp"

#include <algorithm>
#include <stdexcept>

namespace mvp {

namespace {

constexpr const char* kWeightNames[] = {"v0/v0", "v1/v0", "v2/v0", "v3/v0", "s", "z12", "z13",
                                        "z23",   "z01",   "z02",   "z03",   "z2", "z", "m"};
constexpr const char* kFieldNames[] = {"d_t", "d_1", "d_2", "d_3", "S", "S_v", "Omega_12", "Omega_13", "Omega_23", "T"};

double smooth_arg(double s) { return std::clamp((s - 0.5) / 0.5, 0.0, 1.0); }

}  // namespace

const char* weight_name(WeightId id) { return kWeightNames[static_cast<int>(id)]; }

std::optional<WeightId> weight_from_name(const std::string& name) {
  for (int i = 0; i < 14; ++i)
    if (name == kWeightNames[i]) return static_cast<WeightId>(i);
  return std::nullopt;
}

const char* field_name(FieldId id) { return kFieldNames[static_cast<int>(id)]; }

std::optional<FieldId> field_from_name(const std::string& name) {
  for (int i = 0; i < 10; ++i)
    if (name == kFieldNames[i]) return static_cast<FieldId>(i);
  return std::nullopt;
}

double eval_weight(WeightId id, const PhasePoint& p) {
  if (p.V.squaredNorm() == 0.0) throw std::domain_error("phase point with zero velocity");
  return weight<double>(id, p.coords());
}

double chi(double s) {
  const double u = smooth_arg(s);
  return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

double chi_prime(double s) {
  if (s <= 0.5 || s >= 1.0) return 0.0;
  const double u = smooth_arg(s);
  return 2.0 * 30.0 * u * u * (1.0 - u) * (1.0 - u);
}

double chi_second(double s) {
  if (s <= 0.5 || s >= 1.0) return 0.0;
  const double u = smooth_arg(s);
  return 4.0 * 60.0 * u * (1.0 - u) * (1.0 - 2.0 * u);
}

Tau tau(double t, double r) { return {std::sqrt(1.0 + (t + r) * (t + r)), std::sqrt(1.0 + (t - r) * (t - r))}; }

Tau tau(const PhasePoint& p) { return tau(p.t, p.X.norm()); }

double angular_velocity_norm(const PhasePoint& p) {
  const double r = p.X.norm();
  const double v2 = p.V.squaredNorm();
  if (r == 0.0) return std::sqrt(v2);
  const double vr = p.X.dot(p.V) / r;
  return std::sqrt(std::max(0.0, v2 - vr * vr));
}

double apply_field(FieldId id, const PhaseCoords& y, const std::array<double, 7>& grad) {
  const auto a = field_coefficients<double>(id, y);
  double sum = 0.0;
  for (int k = 0; k < 7; ++k) sum += a[k] * grad[k];
  return sum;
}

}  // namespace mvp
