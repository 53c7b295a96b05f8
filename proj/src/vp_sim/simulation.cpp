#include "mvp/vp_sim/simulation.hpp"

#include "mvp/common/parallel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

namespace mvp {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::size_t kChunk = 4096;

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Piecewise-linear inverse CDF of a nonnegative density on [lo, hi].
class InverseCdf {
 public:
  template <class Pdf>
  InverseCdf(Pdf pdf, double lo, double hi, int cells = 4096) : lo_(lo), hi_(hi), cdf_(cells + 1, 0.0) {
    const double h = (hi - lo) / cells;
    for (int k = 0; k < cells; ++k) {
      const double a = lo + k * h;
      cdf_[k + 1] = cdf_[k] + boost::math::quadrature::gauss_kronrod<double, 15>::integrate(pdf, a, a + h, 0, 0);
    }
    if (!(cdf_.back() > 0.0)) throw std::invalid_argument("sampling density has zero mass");
    for (auto& c : cdf_) c /= cdf_.back();
  }

  double operator()(double u) const {
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const std::size_t k = std::clamp<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), 1, cdf_.size() - 1) - 1;
    const double span = cdf_[k + 1] - cdf_[k];
    const double theta = span > 0.0 ? std::clamp((u - cdf_[k]) / span, 0.0, 1.0) : 0.5;
    const double h = (hi_ - lo_) / static_cast<double>(cdf_.size() - 1);
    return lo_ + (static_cast<double>(k) + theta) * h;
  }

 private:
  double lo_, hi_;
  std::vector<double> cdf_;
};

Vec3 sphere_direction(double u1, double u2) {
  const double z = 2.0 * u1 - 1.0;
  const double phi = 2.0 * kPi * u2;
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {s * std::cos(phi), s * std::sin(phi), z};
}

void orthonormal_frame(const Vec3& n, Vec3& e1, Vec3& e2) {
  const Vec3 helper = std::abs(n[0]) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  e1 = (helper - helper.dot(n) * n).normalized();
  e2 = n.cross(e1);
}

void kick(ParticleEnsemble& ens, const RadialField& field, double h, double sigma, bool use_cutoff) {
  const bool tangents = ens.has_tangents();
  parallel_for(ens.size(), [&](std::size_t p) {
    const Vec3& X = ens.X[p];
    Vec3& V = ens.V[p];
    const double speed = V.norm();
    const FieldSample fs = field_at(field, X.norm());
    const Vec3 F = radial_force(fs.E, X, sigma);
    const double c = use_cutoff ? chi(speed) : 1.0;
    if (tangents) {
      const double cp = use_cutoff ? chi_prime(speed) : 0.0;
      Mat6& M = ens.tangent[p];
      const Mat3 dVdX = h * c * radial_jacobian(fs.E, fs.dEdr, X, sigma);
      const Mat3 dVdV = Mat3::Identity() + h * cp * F * (V / speed).transpose();
      const Eigen::Matrix<double, 3, 6> bottom = dVdX * M.topRows<3>() + dVdV * M.bottomRows<3>();
      M.bottomRows<3>() = bottom;
    }
    V += h * c * F;
  });
}

void drift(ParticleEnsemble& ens, double dt) {
  const bool tangents = ens.has_tangents();
  parallel_for(ens.size(), [&](std::size_t p) {
    const Vec3& V = ens.V[p];
    const double speed = V.norm();
    if (tangents) {
      Mat6& M = ens.tangent[p];
      M.topRows<3>() += dt * unit_jacobian(V) * M.bottomRows<3>();
    }
    ens.X[p] += dt * V / speed;
  });
}

double min_particle_speed(const ParticleEnsemble& ens) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& v : ens.V) m = std::min(m, v.norm());
  return m;
}

}  // namespace

void ParticleEnsemble::enable_tangents() { tangent.assign(size(), Mat6::Identity()); }

double ParticleEnsemble::total_weight() const {
  double s = 0.0;
  for (double w : weight) s += w;
  return s;
}

ParticleEnsemble sample(const InitialData& init, std::size_t n, std::uint64_t seed, bool tangents) {
  init.validate();
  if (n == 0) throw std::invalid_argument("need at least one particle");
  const InverseCdf r_inv([&](double r) { return init.radial(r) * r * r; }, 0.0, init.radial_support());
  const InverseCdf v_inv([&](double v) { return init.speed(v) * v * v; }, init.v_low, init.v_high);
  const InverseCdf mu_inv([&](double mu) { return std::abs(init.angular(mu)); }, -1.0, 1.0, 1024);
  const double w_abs = init.total_abs_mass() / static_cast<double>(n);

  ParticleEnsemble ens;
  ens.seed = seed;
  ens.X.resize(n);
  ens.V.resize(n);
  ens.weight.resize(n);
  ens.f0.resize(n);
  ens.grad_f0.resize(n);
  std::mt19937_64 rng(seed);
  for (std::size_t p = 0; p < n; ++p) {
    const double ur = (static_cast<double>(p) + uniform01(rng)) / static_cast<double>(n);
    const double uv = uniform01(rng), umu = uniform01(rng);
    const double ux1 = uniform01(rng), ux2 = uniform01(rng), upsi = uniform01(rng);
    const double r = r_inv(ur);
    // keep the speed strictly inside the support so that f0 > 0 at every sample
    const double speed = std::clamp(v_inv(uv), std::nextafter(init.v_low, init.v_high), std::nextafter(init.v_high, init.v_low));
    const double mu = mu_inv(umu);
    const Vec3 xh = sphere_direction(ux1, ux2);
    Vec3 e1, e2;
    orthonormal_frame(xh, e1, e2);
    const double psi = 2.0 * kPi * upsi;
    const double st = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    const Vec3 vh = mu * xh + st * (std::cos(psi) * e1 + std::sin(psi) * e2);
    ens.X[p] = r * xh;
    ens.V[p] = speed * vh;
    ens.weight[p] = init.angular(mu) < 0.0 ? -w_abs : w_abs;
    ens.f0[p] = init.value(ens.X[p], ens.V[p]);
    ens.grad_f0[p] = init.gradient(ens.X[p], ens.V[p]);
  }
  ens.X0 = ens.X;
  ens.V0 = ens.V;
  if (tangents) ens.enable_tangents();
  return ens;
}

Deposit deposit(const ParticleEnsemble& ens, const RadialGrid& grid) {
  const int nodes = grid.num_nodes();
  const double h = grid.h();
  const std::size_t width = 2 * static_cast<std::size_t>(nodes) + 2;
  const auto acc = chunked_tree_sum(ens.size(), kChunk, width, [&](std::size_t begin, std::size_t end, std::vector<double>& out) {
    for (std::size_t p = begin; p < end; ++p) {
      const Vec3& X = ens.X[p];
      const double r = X.norm();
      const double w = ens.weight[p];
      if (!(r < grid.r_max)) {
        out[width - 2] += w;
        out[width - 1] += 1.0;
        continue;
      }
      const double s = r / h;
      const int j = std::min(static_cast<int>(s), nodes - 2);
      const double theta = s - j;
      const double vr = r > 0.0 ? X.dot(ens.V[p]) / (r * ens.V[p].norm()) : 0.0;
      out[j] += w * (1.0 - theta);
      out[j + 1] += w * theta;
      out[nodes + j] += w * vr * (1.0 - theta);
      out[nodes + j + 1] += w * vr * theta;
    }
  });
  Deposit d;
  d.rho.resize(nodes);
  d.current.resize(nodes);
  for (int j = 0; j < nodes; ++j) {
    const double vol = grid.shell_volume(j);
    d.rho[j] = acc[j] / vol;
    d.current[j] = acc[nodes + j] / vol;
  }
  d.overflow_weight = acc[width - 2];
  d.overflow_count = static_cast<std::size_t>(acc[width - 1]);
  return d;
}

double energy(const ParticleEnsemble& ens, const RadialField& field, double sigma) {
  const auto acc = chunked_tree_sum(ens.size(), kChunk, 1, [&](std::size_t begin, std::size_t end, std::vector<double>& out) {
    for (std::size_t p = begin; p < end; ++p) out[0] += ens.weight[p] * ens.V[p].norm();
  });
  return acc[0] + 0.5 * sigma * field_energy(field);
}

void step(ParticleEnsemble& ens, RadialField& field, double dt, double sigma, bool use_cutoff) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  kick(ens, field, 0.5 * dt, sigma, use_cutoff);
  drift(ens, dt);
  field = solve_field(field.grid, deposit(ens, field.grid).rho);
  kick(ens, field, 0.5 * dt, sigma, use_cutoff);
  ens.t += dt;
}

double calibrate_epsilon(const InitialData& init, const RadialGrid& grid, double peak) {
  InitialData unit = init;
  unit.epsilon = 1.0;
  const RadialField f = solve_field(grid, project_density(grid, [&](double r) { return unit.enclosed_charge(r); }));
  double emax = 0.0;
  for (double e : f.E) emax = std::max(emax, std::abs(e));
  if (!(emax > 0.0)) throw std::invalid_argument("initial data produces no field");
  return peak / emax;
}

Snapshot take_snapshot(const ParticleEnsemble& ens, const RadialField& field, double sigma,
                       const std::vector<double>& initial_angular_momentum, std::size_t overflow) {
  Snapshot s;
  s.t = ens.t;
  s.charge = field.Q;
  s.energy = energy(ens, field, sigma);
  s.min_speed = min_particle_speed(ens);
  s.sup_field_decay = potential_decay_report(field, ens.t);
  for (int j = 0; j < field.grid.num_nodes(); ++j) {
    const double r = field.grid.node(j);
    const double tm = tau(ens.t, r).minus;
    s.sup_density_decay = std::max(s.sup_density_decay, (1 + r) * (1 + r) * tm * tm * std::abs(field.rho[j]));
  }
  const auto acc = chunked_tree_sum(ens.size(), kChunk, 2, [&](std::size_t begin, std::size_t end, std::vector<double>& out) {
    for (std::size_t p = begin; p < end; ++p) {
      const double w = std::abs(ens.weight[p]);
      out[0] += w;
      out[1] += w * eval_weight(WeightId::z, {ens.t, ens.X[p], ens.V[p]});
    }
  });
  s.energy_norm_0 = acc[0];
  s.energy_norm_1 = acc[1];
  for (std::size_t p = 0; p < initial_angular_momentum.size(); ++p) {
    const double L = ens.X[p].cross(ens.V[p]).norm();
    const double L0 = initial_angular_momentum[p];
    s.angular_momentum_drift = std::max(s.angular_momentum_drift, std::abs(L - L0) / (1.0 + L0));
  }
  s.overflow = overflow;
  return s;
}

SimResult run(const SimConfig& config) {
  SimResult result;
  result.config = config;
  SimConfig& cfg = result.config;
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(cfg.t_end >= 0.0)) throw std::invalid_argument("t_end must be nonnegative");
  if (cfg.snapshot_every < 1) throw std::invalid_argument("snapshot_every must be >= 1");
  if (cfg.peak_field > 0.0) cfg.init.epsilon = calibrate_epsilon(cfg.init, cfg.grid, cfg.peak_field);
  cfg.init.validate();

  ParticleEnsemble ens = sample(cfg.init, cfg.particles, cfg.seed, cfg.tangents);
  Deposit dep = deposit(ens, cfg.grid);
  RadialField field = solve_field(cfg.grid, dep.rho);
  std::vector<double> L0(ens.size());
  for (std::size_t p = 0; p < ens.size(); ++p) L0[p] = ens.X[p].cross(ens.V[p]).norm();

  result.snapshots.push_back(take_snapshot(ens, field, cfg.sigma, L0, dep.overflow_count));
  const long n_steps = std::lround(cfg.t_end / cfg.dt);
  for (long k = 1; k <= n_steps; ++k) {
    step(ens, field, cfg.dt, cfg.sigma);
    ens.t = k * cfg.dt;
    const double vmin = min_particle_speed(ens);
    if (vmin < cfg.barrier_speed) {
      std::ostringstream msg;
      msg << "particle speed " << vmin << " fell below " << cfg.barrier_speed << " at t = " << ens.t;
      throw BarrierViolation(msg.str());
    }
    if (k % cfg.snapshot_every == 0 || k == n_steps) {
      std::size_t overflow = 0;
      for (const auto& x : ens.X) overflow += !(x.norm() < cfg.grid.r_max);
      result.snapshots.push_back(take_snapshot(ens, field, cfg.sigma, L0, overflow));
    }
  }
  result.final_ensemble = std::move(ens);
  result.final_field = std::move(field);
  return result;
}

void write_snapshots_csv(const std::vector<Snapshot>& snaps, std::ostream& out) {
  out << "t,charge,energy,min_speed,sup_field_decay,sup_density_decay,energy_norm_0,energy_norm_1,"
         "angular_momentum_drift,overflow\n"
      << std::setprecision(17);
  for (const auto& s : snaps) {
    out << s.t << ',' << s.charge << ',' << s.energy << ',' << s.min_speed << ',' << s.sup_field_decay << ','
        << s.sup_density_decay << ',' << s.energy_norm_0 << ',' << s.energy_norm_1 << ',' << s.angular_momentum_drift
        << ',' << s.overflow << '\n';
  }
}

void free_stream(ParticleEnsemble& ens, double dt) {
  const bool tan = ens.has_tangents();
  parallel_for(ens.size(), [&](std::size_t p) {
    CharState s{ens.t, ens.X[p], ens.V[p], std::nullopt};
    if (tan) s.tangent = ens.tangent[p];
    const CharState out = free_flow(s, dt);
    ens.X[p] = out.X;
    if (tan) ens.tangent[p] = *out.tangent;
  });
  ens.t += dt;
}

std::string run_summary_json(const SimResult& result) {
  const auto& snaps = result.snapshots;
  const Snapshot& first = snaps.front();
  double charge_drift = 0.0, energy_drift = 0.0, vmin = std::numeric_limits<double>::infinity(), decay_ratio = 0.0;
  double density_ratio = 0.0, lmax = 0.0;
  for (const auto& s : snaps) {
    charge_drift = std::max(charge_drift, std::abs(s.charge - first.charge) / std::abs(first.charge));
    energy_drift = std::max(energy_drift, std::abs(s.energy - first.energy) / std::abs(first.energy));
    vmin = std::min(vmin, s.min_speed);
    decay_ratio = std::max(decay_ratio, s.sup_field_decay / first.sup_field_decay);
    density_ratio = std::max(density_ratio, s.sup_density_decay / first.sup_density_decay);
    lmax = std::max(lmax, s.angular_momentum_drift);
  }
  const auto& c = result.config;
  nlohmann::json j;
  j["version"] = 1;
  j["config"] = {{"epsilon", c.init.epsilon},
                 {"radial_profile", radial_profile_name(c.init.profile)},
                 {"radial_scale", c.init.radial_scale},
                 {"v_support_low", c.init.v_low},
                 {"v_support_high", c.init.v_high},
                 {"anisotropy", c.init.anisotropy},
                 {"particles", c.particles},
                 {"seed", c.seed},
                 {"r_max", c.grid.r_max},
                 {"cells", c.grid.n_cells},
                 {"dt", c.dt},
                 {"t_end", c.t_end},
                 {"sigma", c.sigma}};
  j["charge_initial"] = first.charge;
  j["charge_drift_rel"] = charge_drift;
  j["energy_initial"] = first.energy;
  j["energy_drift_rel"] = energy_drift;
  j["min_speed"] = vmin;
  j["field_decay_ratio_max"] = decay_ratio;
  j["density_decay_ratio_max"] = density_ratio;
  j["angular_momentum_drift_max"] = lmax;
  j["snapshots"] = snaps.size();
  return j.dump(2);
}

}  // namespace mvp
