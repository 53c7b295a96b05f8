#ifndef MVP_CHARACTERISTICS_CHARACTERISTICS_HPP
#define MVP_CHARACTERISTICS_CHARACTERISTICS_HPP

#include "mvp/phasegeom/phasegeom.hpp"
#include "mvp/poisson/radial.hpp"

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace mvp {

using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

struct CharState {
  double t = 0.0;
  Vec3 X = Vec3::Zero();
  Vec3 V = Vec3::UnitX();
  /// D(X, V) / D(X0, V0)
  std::optional<Mat6> tangent;

  PhasePoint point() const { return {t, X, V}; }
  CharState with_tangent() const {
    CharState s = *this;
    s.tangent = Mat6::Identity();
    return s;
  }
};

/// Provides sigma * grad(phi) and its spatial Jacobian.
class FieldSource {
 public:
  virtual ~FieldSource() = default;
  virtual Vec3 force(double t, const Vec3& x) const = 0;
  virtual Mat3 jacobian(double t, const Vec3& x) const = 0;
};

class ZeroField final : public FieldSource {
 public:
  Vec3 force(double, const Vec3&) const override { return Vec3::Zero(); }
  Mat3 jacobian(double, const Vec3&) const override { return Mat3::Zero(); }
};

/// sigma * E(t, |x|) x / |x| for a radial profile returning E and dE/dr.
class RadialProfileField final : public FieldSource {
 public:
  using Profile = std::function<FieldSample(double t, double r)>;
  RadialProfileField(Profile profile, double sigma) : profile_(std::move(profile)), sigma_(sigma) {}
  Vec3 force(double t, const Vec3& x) const override;
  Mat3 jacobian(double t, const Vec3& x) const override;

 private:
  Profile profile_;
  double sigma_;
};

/// A solved RadialField, frozen in time.
class FrozenRadialField final : public FieldSource {
 public:
  FrozenRadialField(const RadialField& field, double sigma) : field_(&field), sigma_(sigma) {}
  Vec3 force(double t, const Vec3& x) const override;
  Mat3 jacobian(double t, const Vec3& x) const override;

 private:
  const RadialField* field_;
  double sigma_;
};

/// Force and Jacobian of sigma * E(r) x-hat; Hessian of phi uses the r -> 0 limit (dE/dr)(0) I.
Vec3 radial_force(double E, const Vec3& x, double sigma);
Mat3 radial_jacobian(double E, double dEdr, const Vec3& x, double sigma);

struct StepOptions {
  /// false replaces chi by 1 (the unregularized system).
  bool use_cutoff = true;
};

/// Jacobian of V -> V / |V|.
Mat3 unit_jacobian(const Vec3& V);

/// One RK4 step forward (dt > 0) of dX/dt = V/|V|, dV/dt = chi(|V|) F(t, X).
CharState push(const CharState& state, const FieldSource& field, double dt, StepOptions opt = {});
/// One RK4 step backward in time (dt > 0).
CharState pull(const CharState& state, const FieldSource& field, double dt, StepOptions opt = {});

/// Closed-form force-free flow over dt (any sign).
CharState free_flow(const CharState& state, double dt);

using Trajectory = std::vector<CharState>;

/// n_steps RK4 steps, sampling every sample_every steps (the start and end are always sampled).
Trajectory integrate(const CharState& start, const FieldSource& field, double dt, int n_steps, int sample_every = 1,
                     StepOptions opt = {});

double min_speed(const Trajectory& traj);
std::vector<double> weight_series(const Trajectory& traj, WeightId w);

void write_trajectory_csv(const Trajectory& traj, std::ostream& out);

}  // namespace mvp

#endif
