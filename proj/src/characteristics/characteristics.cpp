#include "mvp/characteristics/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace mvp {

namespace {

using Vec6 = Eigen::Matrix<double, 6, 1>;

struct Derivative {
  Vec6 dy;
  Mat6 dM;
};

Derivative rhs(double t, const Vec6& y, const Mat6* M, const FieldSource& field, const StepOptions& opt) {
  const Vec3 X = y.head<3>();
  const Vec3 V = y.tail<3>();
  const double speed = V.norm();
  if (!(speed > 0.0)) throw std::domain_error("characteristic reached zero velocity");
  const Vec3 F = field.force(t, X);
  const double c = opt.use_cutoff ? chi(speed) : 1.0;
  Derivative d;
  d.dy.head<3>() = V / speed;
  d.dy.tail<3>() = c * F;
  if (M) {
    const double cp = opt.use_cutoff ? chi_prime(speed) : 0.0;
    Mat6 A = Mat6::Zero();
    A.block<3, 3>(0, 3) = unit_jacobian(V);
    A.block<3, 3>(3, 0) = c * field.jacobian(t, X);
    A.block<3, 3>(3, 3) = cp * F * (V / speed).transpose();
    d.dM = A * (*M);
  }
  return d;
}

CharState rk4(const CharState& s, const FieldSource& field, double dt, const StepOptions& opt) {
  Vec6 y;
  y << s.X, s.V;
  const bool tan = s.tangent.has_value();
  const Mat6 M0 = tan ? *s.tangent : Mat6::Identity();
  const Mat6* pm = tan ? &M0 : nullptr;

  const Derivative k1 = rhs(s.t, y, pm, field, opt);
  const Vec6 y2 = y + 0.5 * dt * k1.dy;
  const Mat6 M2 = tan ? Mat6(M0 + 0.5 * dt * k1.dM) : Mat6();
  const Derivative k2 = rhs(s.t + 0.5 * dt, y2, tan ? &M2 : nullptr, field, opt);
  const Vec6 y3 = y + 0.5 * dt * k2.dy;
  const Mat6 M3 = tan ? Mat6(M0 + 0.5 * dt * k2.dM) : Mat6();
  const Derivative k3 = rhs(s.t + 0.5 * dt, y3, tan ? &M3 : nullptr, field, opt);
  const Vec6 y4 = y + dt * k3.dy;
  const Mat6 M4 = tan ? Mat6(M0 + dt * k3.dM) : Mat6();
  const Derivative k4 = rhs(s.t + dt, y4, tan ? &M4 : nullptr, field, opt);

  const Vec6 yn = y + (dt / 6.0) * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy);
  CharState out;
  out.t = s.t + dt;
  out.X = yn.head<3>();
  out.V = yn.tail<3>();
  if (!(out.V.norm() > 0.0)) throw std::domain_error("step produced zero velocity");
  if (tan) out.tangent = Mat6(M0 + (dt / 6.0) * (k1.dM + 2.0 * k2.dM + 2.0 * k3.dM + k4.dM));
  return out;
}

}  // namespace

Vec3 radial_force(double E, const Vec3& x, double sigma) {
  const double r = x.norm();
  if (r == 0.0) return Vec3::Zero();
  return sigma * E * x / r;
}

Mat3 radial_jacobian(double E, double dEdr, const Vec3& x, double sigma) {
  const double r = x.norm();
  if (r == 0.0) return sigma * dEdr * Mat3::Identity();
  const Vec3 n = x / r;
  const Mat3 nn = n * n.transpose();
  return sigma * ((E / r) * (Mat3::Identity() - nn) + dEdr * nn);
}

Vec3 RadialProfileField::force(double t, const Vec3& x) const {
  return radial_force(profile_(t, x.norm()).E, x, sigma_);
}

Mat3 RadialProfileField::jacobian(double t, const Vec3& x) const {
  const FieldSample s = profile_(t, x.norm());
  return radial_jacobian(s.E, s.dEdr, x, sigma_);
}

Vec3 FrozenRadialField::force(double, const Vec3& x) const { return radial_force(field_at(*field_, x.norm()).E, x, sigma_); }

Mat3 FrozenRadialField::jacobian(double, const Vec3& x) const {
  const FieldSample s = field_at(*field_, x.norm());
  return radial_jacobian(s.E, s.dEdr, x, sigma_);
}

Mat3 unit_jacobian(const Vec3& V) {
  const double speed = V.norm();
  const Vec3 n = V / speed;
  return (Mat3::Identity() - n * n.transpose()) / speed;
}

CharState push(const CharState& state, const FieldSource& field, double dt, StepOptions opt) {
  if (!(dt > 0.0)) throw std::invalid_argument("push requires dt > 0");
  return rk4(state, field, dt, opt);
}

CharState pull(const CharState& state, const FieldSource& field, double dt, StepOptions opt) {
  if (!(dt > 0.0)) throw std::invalid_argument("pull requires dt > 0");
  return rk4(state, field, -dt, opt);
}

CharState free_flow(const CharState& state, double dt) {
  const double speed = state.V.norm();
  if (!(speed > 0.0)) throw std::domain_error("free flow with zero velocity");
  CharState out = state;
  out.t = state.t + dt;
  out.X = state.X + dt * state.V / speed;
  if (state.tangent) {
    Mat6 step = Mat6::Identity();
    step.block<3, 3>(0, 3) = dt * unit_jacobian(state.V);
    out.tangent = Mat6(step * (*state.tangent));
  }
  return out;
}

Trajectory integrate(const CharState& start, const FieldSource& field, double dt, int n_steps, int sample_every,
                     StepOptions opt) {
  Trajectory traj{start};
  CharState s = start;
  for (int k = 1; k <= n_steps; ++k) {
    s = push(s, field, dt, opt);
    if (k % sample_every == 0 || k == n_steps) traj.push_back(s);
  }
  return traj;
}

double min_speed(const Trajectory& traj) {
  if (traj.empty()) throw std::invalid_argument("empty trajectory");
  double m = std::numeric_limits<double>::infinity();
  for (const auto& s : traj) m = std::min(m, s.V.norm());
  return m;
}

std::vector<double> weight_series(const Trajectory& traj, WeightId w) {
  std::vector<double> out;
  out.reserve(traj.size());
  for (const auto& s : traj) out.push_back(eval_weight(w, s.point()));
  return out;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  out << "t,X1,X2,X3,V1,V2,V3,speed,s,z\n" << std::setprecision(17);
  for (const auto& s : traj) {
    out << s.t << ',' << s.X[0] << ',' << s.X[1] << ',' << s.X[2] << ',' << s.V[0] << ',' << s.V[1] << ',' << s.V[2]
        << ',' << s.V.norm() << ',' << eval_weight(WeightId::s, s.point()) << ','
        << eval_weight(WeightId::z, s.point()) << '\n';
  }
}

}  // namespace mvp
