#ifndef MVP_DIAGNOSTICS_DIAGNOSTICS_HPP
#define MVP_DIAGNOSTICS_DIAGNOSTICS_HPP

#include "mvp/characteristics/characteristics.hpp"
#include "mvp/vp_sim/simulation.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace mvp {

/// Gradient (d_t, d_x, d_v) of f at a phase point.
using PhaseGradient = std::array<double, 7>;

/// f(t, .) and its gradient by pulling the point back to t = 0 along the
/// characteristics of field with n_steps RK4 steps.
struct PulledBack {
  double value = 0.0;
  PhaseGradient gradient{};
  CharState origin;
};
PulledBack pull_back(const PhasePoint& p, const FieldSource& field, const InitialData& init, int n_steps,
                     StepOptions opt = {});

/// Z f at p via the backward flow and its tangent.
double commuted_value(FieldId z, const PhasePoint& p, const FieldSource& field, const InitialData& init, int n_steps,
                      StepOptions opt = {});

/// Gradient of f at particle p from its forward tangent: grad f = M^{-T} grad f0.
/// force is sigma grad(phi) at the particle (zero for free streaming).
PhaseGradient particle_gradient(const ParticleEnsemble& ens, std::size_t p, const Vec3& force, bool use_cutoff = true);

/// Z f at particle p.
double commuted_value(FieldId z, const ParticleEnsemble& ens, std::size_t p, const Vec3& force);

struct EnergyNormEstimate {
  int order = 0;      // M
  int power = 0;      // n
  double value = 0.0;
  double std_error = 0.0;
  double source_part = 0.0;  // weighted commuted source integrals (M = 1)
};

/// Field data needed for the commuted source terms.
struct SourceContext {
  const RadialField* field = nullptr;
  const std::vector<double>* current = nullptr;  // shell-normalized radial current
  double sigma = 0.0;
};

/// Monte-Carlo estimate of the truncated energy norm E^n_M, M in {0, 1}.
EnergyNormEstimate energy_norm(const ParticleEnsemble& ens, int n, int M, const SourceContext& ctx = {});

/// Shell-binned int f dv (identical to the deposit density).
std::vector<double> moment_profile(const ParticleEnsemble& ens, const RadialGrid& grid);

/// int f dv at |x| = r for data transported by free streaming, by quadrature in v.
double free_stream_moment(const InitialData& init, double t, double r);

struct MomentSnapshot {
  double t = 0.0;
  std::vector<double> r;
  std::vector<double> mu;
};

struct DecayReport {
  std::vector<double> t;
  std::vector<double> weighted_sup;  // sup_r (1 + r)^2 tau_-^2 mu
  std::vector<double> sup_moment;    // sup_r mu
  double max_ratio = 0.0;            // max_t D(t) / D(t_0)
  double spread = 0.0;               // max_t D(t) / min_t D(t)
  double slope = 0.0;                // least-squares slope of log sup_r mu against log t
};

/// Needs at least three snapshots.
DecayReport decay_fit(const std::vector<MomentSnapshot>& series);

/// |sum_p w_p (S f / f0)(p) + 3 Q| / |Q| with S f from the particle tangents.
double charge_identity_check(const ParticleEnsemble& ens, const RadialField* field = nullptr, double sigma = 0.0);

std::string energy_norm_json(const std::vector<EnergyNormEstimate>& norms, double charge_residual);
void write_moment_csv(const MomentSnapshot& snap, std::ostream& out);

}  // namespace mvp

#endif
