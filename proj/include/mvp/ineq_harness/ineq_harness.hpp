#ifndef MVP_INEQ_HARNESS_INEQ_HARNESS_HPP
#define MVP_INEQ_HARNESS_INEQ_HARNESS_HPP

#include "mvp/common/jet.hpp"
#include "mvp/phasegeom/phasegeom.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mvp {

using Mat3d = Eigen::Matrix3d;

/// g(t, x, v) = A h1(|y|) h2(|v|) (1 + k y.v/(|v| R)) with y = x - c - d t v/|v|,
/// h1 = (1 - |y|^2/R^2)^5 on |y| < R and h2 a degree-10 bump on [v_low, v_high].
/// T(g) = (1 - d) v.grad_x g, which vanishes identically for d = 1.
struct TestMember {
  std::string name;
  double amplitude = 1.0;
  Vec3 center = Vec3::Zero();
  double drift = 1.0;
  double radius = 1.0;
  double v_low = 1.0;
  double v_high = 3.0;
  double tilt = 0.0;
  /// Orientation of the quadrature frame (columns are the local axes).
  Mat3d frame = Mat3d::Identity();

  template <class S>
  S eval(const std::array<S, 7>& y) const {
    using std::sqrt;
    const S w = sqrt(y[4] * y[4] + y[5] * y[5] + y[6] * y[6]);
    const double half = 0.5 * (v_high - v_low);
    const S b = (w - v_low) * (v_high - w) * (1.0 / (half * half));
    if (value_of(b) <= 0.0) return S(0.0);
    S q(0.0), yv(0.0);
    for (int k = 0; k < 3; ++k) {
      const S vh = y[4 + k] / w;
      const S Y = y[1 + k] - center[k] - drift * y[0] * vh;
      q += Y * Y;
      yv += Y * vh;
    }
    const S a = 1.0 - q * (1.0 / (radius * radius));
    if (value_of(a) <= 0.0) return S(0.0);
    const S a2 = a * a, b2 = b * b;
    return amplitude * (a2 * a2 * a) * (b2 * b2 * b) * (1.0 + (tilt / radius) * yv);
  }

  double value(const PhaseCoords& y) const { return eval(y); }
  /// Jet of g to order N at y.
  template <int N>
  Jet<N> jet(const PhaseCoords& y) const {
    std::array<Jet<N>, 7> j;
    for (int k = 0; k < 7; ++k) j[k] = Jet<N>::variable(k, y[k]);
    return eval(j);
  }
  /// Closed form T(g).
  double transport(const PhaseCoords& y) const;
  /// h2(|v|) so that g = h2(|v|) G(t, x, v/|v|).
  double speed_part(double w) const;
  /// |x| beyond which g(t, x, .) vanishes.
  double spatial_support(double t) const { return center.norm() + std::abs(drift) * t + radius; }
  bool is_zero() const { return amplitude == 0.0; }
  /// The member composed with a rotation of space (and velocity).
  TestMember rotated(const Mat3d& rot) const;
};

using TestFamily = std::vector<TestMember>;

std::vector<std::string> family_names();
/// Throws std::invalid_argument for unknown names.
TestFamily family_from_name(const std::string& name);

/// Z^seq g at y, with seq.front() applied last; order at most 3.
double commuted(const TestMember& g, const PhaseCoords& y, const std::vector<FieldId>& seq);

struct GateReport {
  int points = 0;
  int checks = 0;
  double max_rel_error = 0.0;
  bool passed = false;
};

/// Compares jet derivatives of every order up to 3, and T(g), with central differences.
GateReport validate_member(const TestMember& g, int points = 100, std::uint64_t seed = 7, double tolerance = 1e-5);

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

/// int |g|(t, x, v) dv.
QuadratureResult lhs(const TestMember& g, double t, const Vec3& x, double tolerance = 1e-6);
/// int |Z g|(t, x, v) dv for Z not acting on |v|.
QuadratureResult averaged_commuted(const TestMember& g, FieldId z, double t, const Vec3& x, double tolerance = 1e-6);

struct RhsOptions {
  int nodes = 8;            // Gauss nodes per dimension on the fine level
  double tolerance = 1e-4;  // relative agreement required between levels
};

struct RhsResult {
  int p = 0;
  double first_sum = 0.0;   // transport term
  double second_sum = 0.0;  // commuted term
  double total = 0.0;
  double error = 0.0;       // relative difference between quadrature levels
  bool converged = false;
  std::array<double, 4> by_order{};  // second sum split by |xi|
};

/// Right-hand sides for each p; p = 0 uses the (1 + |s|) form, p > 0 the z^{p+1} form.
std::vector<RhsResult> rhs(const TestMember& g, double t, const std::vector<int>& ps, const RhsOptions& opt = {});

struct InequalityRow {
  std::string member;
  double t = 0.0;
  int p = 0;
  double r_sup = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double rhs_error = 0.0;
  bool converged = false;
  bool skipped = false;
};

struct FamilyMax {
  int p = 0;
  std::vector<double> t;
  std::vector<double> max_ratio;
  double variation = 0.0;  // max over t / min over t
};

struct InequalityReport {
  std::vector<InequalityRow> rows;
  std::vector<FamilyMax> family;
  bool all_finite = true;
  bool all_converged = true;
};

struct ScanOptions {
  RhsOptions rhs;
  int radii = 200;
  double lhs_tolerance = 1e-6;
};

/// x-grid: radii log-spaced in [0, t + 50] plus r = t, along +/- the member's third frame axis.
std::vector<double> scan_radii(double t, int count);
InequalityReport constant_scan(const TestFamily& family, const std::vector<double>& times, const std::vector<int>& ps,
                               const ScanOptions& opt = {});

struct CommuteCheck {
  double max_residual = 0.0;      // max (|Z int|g|| - int|Z g|)_+
  double max_relative = 0.0;      // the same over max(int|Z g|, int|g|)
  double max_average_derivative = 0.0;
};

/// Z in {d_t, d_i, S, Omega_ij}; Z int |g| dv by central differences of lhs.
CommuteCheck average_commute_check(const TestMember& g, FieldId z, double t, const std::vector<Vec3>& xs,
                                   double h = 1e-3);

struct AngularFit {
  int samples = 0;
  double fitted_constant = 0.0;  // max of |v_A e_A g| / v0 over (1/r) sum|z_ij| |grad_x g|
};

AngularFit angupart_fit(const TestMember& g, double t, int samples, std::uint64_t seed = 11);

void write_inequality_csv(const InequalityReport& rep, std::ostream& out);
std::string inequality_json(const InequalityReport& rep);

}  // namespace mvp

#endif
