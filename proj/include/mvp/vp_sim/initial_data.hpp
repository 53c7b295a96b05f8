#ifndef MVP_VP_SIM_INITIAL_DATA_HPP
#define MVP_VP_SIM_INITIAL_DATA_HPP

#include "mvp/phasegeom/phasegeom.hpp"

#include <array>
#include <string>

namespace mvp {

enum class RadialProfile { bump, gaussian };

/// f0(x, v) = epsilon * a(|x|) * b(|v|) * c(x.v / (|x||v|)) with
///   a = (1 - (r/R)^2)^3 on r < R (bump) or exp(-(r/R)^2) (gaussian),
///   b = ((|v| - lo)(hi - |v|) / ((hi - lo)/2)^2)^3 on [lo, hi],
///   c = 1 + kappa mu.
struct InitialData {
  double epsilon = 1e-3;
  RadialProfile profile = RadialProfile::bump;
  double radial_scale = 1.0;
  double v_low = 2.0;
  double v_high = 5.0;
  double anisotropy = 0.0;

  /// Throws if the data does not vanish for |v| <= 2 or is otherwise invalid.
  void validate() const;

  double radial(double r) const;
  double radial_prime(double r) const;
  double speed(double v) const;
  double speed_prime(double v) const;
  double angular(double mu) const { return 1.0 + anisotropy * mu; }
  double angular_prime(double) const { return anisotropy; }

  double value(const Vec3& x, const Vec3& v) const;
  /// (d_x f0, d_v f0)
  std::array<double, 6> gradient(const Vec3& x, const Vec3& v) const;

  /// Largest radius where a > 0 (a cutoff at 1e-300 for the gaussian).
  double radial_support() const;

  /// int a r^2 dr, int b v^2 dv, int |c| dmu over [-1, 1], int c dmu.
  double radial_moment() const;
  double speed_moment() const;
  double angular_abs_moment() const;
  double angular_moment() const { return 2.0; }

  /// int int f0 dx dv
  double total_charge() const;
  /// int int |f0| dx dv
  double total_abs_mass() const;
  /// rho(r) = int f0 dv
  double density(double r) const;
  /// 4 pi int_0^r rho s^2 ds
  double enclosed_charge(double r) const;
};

RadialProfile radial_profile_from_name(const std::string& name);
const char* radial_profile_name(RadialProfile p);

}  // namespace mvp

#endif
