#ifndef MVP_VP_SIM_SIMULATION_HPP
#define MVP_VP_SIM_SIMULATION_HPP

#include "mvp/characteristics/characteristics.hpp"
#include "mvp/poisson/radial.hpp"
#include "mvp/vp_sim/initial_data.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace mvp {

/// Weighted particles representing f. Index p refers to the same particle in every array.
struct ParticleEnsemble {
  std::vector<Vec3> X, V;
  std::vector<double> weight;
  std::vector<Vec3> X0, V0;
  std::vector<double> f0;
  std::vector<std::array<double, 6>> grad_f0;
  std::vector<Mat6> tangent;  // empty when tangents are off
  double t = 0.0;
  std::uint64_t seed = 0;

  std::size_t size() const { return X.size(); }
  bool has_tangents() const { return !tangent.empty(); }
  void enable_tangents();
  double total_weight() const;
};

/// Deterministic stratified sample of |f0| dx dv; weights carry the sign of f0.
ParticleEnsemble sample(const InitialData& init, std::size_t n, std::uint64_t seed, bool tangents = false);

struct Deposit {
  std::vector<double> rho;        // shell-normalized charge density
  std::vector<double> current;    // shell-normalized radial current sum w (V/|V|).x-hat
  double overflow_weight = 0.0;   // weight of particles with r >= r_max
  std::size_t overflow_count = 0;
};

/// Cloud-in-cell deposit in r; sum_j rho_j V_j equals the in-grid weight.
Deposit deposit(const ParticleEnsemble& ens, const RadialGrid& grid);

/// Sum of w |V| plus (sigma/2) 4 pi int E^2 r^2 dr.
double energy(const ParticleEnsemble& ens, const RadialField& field, double sigma);

/// Kick-drift-kick step. field must be solved from the current positions;
/// it is replaced by the field at the new positions.
void step(ParticleEnsemble& ens, RadialField& field, double dt, double sigma, bool use_cutoff = true);

/// Exact force-free flow of every particle (and its tangent) over dt.
void free_stream(ParticleEnsemble& ens, double dt);

struct SimConfig {
  InitialData init;
  /// If positive, epsilon is rescaled so that max_r |E(0, r)| equals this.
  double peak_field = 1e-3;
  std::size_t particles = 100000;
  std::uint64_t seed = 20240601;
  RadialGrid grid{100.0, 2000};
  double dt = 0.05;
  double t_end = 50.0;
  double sigma = 1.0;
  bool tangents = false;
  int snapshot_every = 20;
  double barrier_speed = 0.5;
};

/// Epsilon giving max_r |E(0, r)| = peak for the analytic density on grid.
double calibrate_epsilon(const InitialData& init, const RadialGrid& grid, double peak);

struct Snapshot {
  double t = 0.0;
  double charge = 0.0;
  double energy = 0.0;
  double min_speed = 0.0;
  double sup_field_decay = 0.0;   // sup_r (1 + t + r)^2 |E|
  double sup_density_decay = 0.0; // sup_r (1 + r)^2 tau_-^2 |rho|
  double energy_norm_0 = 0.0;     // sum |w|
  double energy_norm_1 = 0.0;     // sum |w| z
  double angular_momentum_drift = 0.0;
  std::size_t overflow = 0;
};

struct SimResult {
  SimConfig config;
  std::vector<Snapshot> snapshots;
  ParticleEnsemble final_ensemble;
  RadialField final_field;
};

class BarrierViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Full run; throws BarrierViolation if some |V_p| drops below barrier_speed.
SimResult run(const SimConfig& config);

/// Snapshot of the current state (field solved from the current positions).
Snapshot take_snapshot(const ParticleEnsemble& ens, const RadialField& field, double sigma,
                       const std::vector<double>& initial_angular_momentum, std::size_t overflow);

void write_snapshots_csv(const std::vector<Snapshot>& snaps, std::ostream& out);
std::string run_summary_json(const SimResult& result);

}  // namespace mvp

#endif
