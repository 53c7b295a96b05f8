#include "mvp/diagnostics/diagnostics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace mvp {

namespace {

using Vec6 = Eigen::Matrix<double, 6, 1>;

PhaseGradient assemble(const Vec6& g, const Vec3& V, const Vec3& force, bool use_cutoff) {
  PhaseGradient out{};
  const double speed = V.norm();
  const Vec3 vhat = V / speed;
  const double c = use_cutoff ? chi(speed) : 1.0;
  double dt = 0.0;
  for (int k = 0; k < 3; ++k) dt -= vhat[k] * g[k] + c * force[k] * g[3 + k];
  out[0] = dt;
  for (int k = 0; k < 6; ++k) out[1 + k] = g[k];
  return out;
}

Vec6 to_vec(const std::array<double, 6>& a) {
  Vec6 v;
  for (int k = 0; k < 6; ++k) v[k] = a[k];
  return v;
}

double interpolate_nodes(const RadialGrid& grid, const std::vector<double>& values, double r) {
  const double h = grid.h();
  const double s = r / h;
  const auto j = static_cast<std::size_t>(std::floor(s));
  if (j + 1 >= values.size()) return j + 1 == values.size() ? values.back() : 0.0;
  const double frac = s - static_cast<double>(j);
  return (1.0 - frac) * values[j] + frac * values[j + 1];
}

// grad(Z phi) for a radial potential with d_r phi = E, or -grad(phi) for S_v
Vec3 source_direction(FieldId z, double t, const Vec3& x, double E, double dEdr, double dEdt) {
  const double r = x.norm();
  const Vec3 xhat = r > 0.0 ? Vec3(x / r) : Vec3::UnitX();
  switch (z) {
    case FieldId::dt: return dEdt * xhat;
    case FieldId::d1:
    case FieldId::d2:
    case FieldId::d3: {
      const int i = static_cast<int>(z) - static_cast<int>(FieldId::d1);
      Mat3 H;
      if (r > 0.0) {
        H = (E / r) * (Mat3::Identity() - xhat * xhat.transpose()) + dEdr * xhat * xhat.transpose();
      } else {
        H = dEdr * Mat3::Identity();
      }
      return H.col(i);
    }
    case FieldId::S: return (t * dEdt + E + r * dEdr) * xhat;
    case FieldId::Sv: return -E * xhat;
    default: return Vec3::Zero();
  }
}

}  // namespace

PulledBack pull_back(const PhasePoint& p, const FieldSource& field, const InitialData& init, int n_steps,
                     StepOptions opt) {
  if (n_steps < 1) throw std::invalid_argument("pull_back: n_steps must be positive");
  if (p.t < 0.0) throw std::invalid_argument("pull_back: negative time");
  CharState s = CharState{p.t, p.X, p.V, std::nullopt}.with_tangent();
  if (p.t > 0.0) {
    const double dt = p.t / n_steps;
    for (int k = 0; k < n_steps; ++k) s = pull(s, field, dt, opt);
  }
  s.t = 0.0;
  PulledBack out;
  out.value = init.value(s.X, s.V);
  const Vec6 g0 = to_vec(init.gradient(s.X, s.V));
  const Vec6 g = s.tangent->transpose() * g0;
  out.gradient = assemble(g, p.V, field.force(p.t, p.X), opt.use_cutoff);
  out.origin = s;
  return out;
}

double commuted_value(FieldId z, const PhasePoint& p, const FieldSource& field, const InitialData& init, int n_steps,
                      StepOptions opt) {
  const PulledBack pb = pull_back(p, field, init, n_steps, opt);
  return apply_field(z, p.coords(), pb.gradient);
}

PhaseGradient particle_gradient(const ParticleEnsemble& ens, std::size_t p, const Vec3& force, bool use_cutoff) {
  if (!ens.has_tangents()) throw std::logic_error("particle_gradient: ensemble has no tangents");
  const Vec6 g0 = to_vec(ens.grad_f0[p]);
  const Vec6 g = ens.tangent[p].transpose().partialPivLu().solve(g0);
  return assemble(g, ens.V[p], force, use_cutoff);
}

double commuted_value(FieldId z, const ParticleEnsemble& ens, std::size_t p, const Vec3& force) {
  const PhasePoint pt{ens.t, ens.X[p], ens.V[p]};
  return apply_field(z, pt.coords(), particle_gradient(ens, p, force));
}

EnergyNormEstimate energy_norm(const ParticleEnsemble& ens, int n, int M, const SourceContext& ctx) {
  if (M != 0 && M != 1) throw std::invalid_argument("energy_norm: M must be 0 or 1");
  if (n < 0) throw std::invalid_argument("energy_norm: n must be non-negative");
  if (M == 1 && !ens.has_tangents()) throw std::logic_error("energy_norm: M = 1 needs tangents");
  const std::size_t np = ens.size();
  EnergyNormEstimate est;
  est.order = M;
  est.power = n;
  if (np == 0) return est;

  std::vector<double> terms(np, 0.0);
  double source_total = 0.0;
  for (std::size_t p = 0; p < np; ++p) {
    if (ens.f0[p] == 0.0) throw std::domain_error("energy_norm: sample with f0 = 0");
    const PhasePoint pt{ens.t, ens.X[p], ens.V[p]};
    const double z = eval_weight(WeightId::z, pt);
    const double scale = std::abs(ens.weight[p]) / std::abs(ens.f0[p]);
    double g = std::pow(z, n) * std::abs(ens.f0[p]);
    if (M == 1) {
      double E = 0.0, dEdr = 0.0, dEdt = 0.0;
      const double r = ens.X[p].norm();
      if (ctx.field) {
        const FieldSample fs = field_at(*ctx.field, r);
        E = fs.E;
        dEdr = fs.dEdr;
        if (ctx.current) dEdt = -interpolate_nodes(ctx.field->grid, *ctx.current, r);
      }
      const Vec3 force = radial_force(E, ens.X[p], ctx.sigma);
      const PhaseGradient grad = particle_gradient(ens, p, force);
      const PhaseCoords y = pt.coords();
      double commuted = 0.0;
      double source = 0.0;
      for (FieldId zf : kCommutationFields) {
        commuted += std::abs(apply_field(zf, y, grad));
        if (ctx.field && ctx.sigma != 0.0) {
          const Vec3 d = source_direction(zf, ens.t, ens.X[p], E, dEdr, dEdt);
          double dot = 0.0;
          for (int k = 0; k < 3; ++k) dot += d[k] * grad[4 + k];
          source += std::abs(ctx.sigma * dot);
        }
      }
      g += std::pow(z, n) * commuted;
      const double src = (n >= 1 ? r * std::pow(z, n - 1) : r / z) * source;
      g += src;
      source_total += scale * src;
    }
    terms[p] = scale * g;
  }
  double sum = 0.0;
  for (double v : terms) sum += v;
  const double mean = sum / static_cast<double>(np);
  double var = 0.0;
  for (double v : terms) var += (v - mean) * (v - mean);
  est.value = sum;
  est.std_error = np > 1 ? std::sqrt(var * static_cast<double>(np) / static_cast<double>(np - 1)) : 0.0;
  est.source_part = source_total;
  return est;
}

std::vector<double> moment_profile(const ParticleEnsemble& ens, const RadialGrid& grid) {
  return deposit(ens, grid).rho;
}

double free_stream_moment(const InitialData& init, double t, double r) {
  using boost::math::quadrature::gauss_kronrod;
  if (t < 0.0 || r < 0.0) throw std::invalid_argument("free_stream_moment: negative argument");
  auto integrand = [&](double c) {
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    const Vec3 y(-t * s, 0.0, r - t * c);
    const double rho = y.norm();
    const double mu = rho > 0.0 ? (r * c - t) / rho : 0.0;
    return init.radial(rho) * init.angular(mu);
  };
  std::vector<double> cuts{-1.0, 1.0};
  const double R = init.radial_support();
  if (r > 0.0 && t > 0.0) {
    const double cstar = (r * r + t * t - R * R) / (2.0 * r * t);
    if (cstar > -1.0 && cstar < 1.0) cuts.insert(cuts.begin() + 1, cstar);
  }
  double angular = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
    angular += gauss_kronrod<double, 61>::integrate(integrand, cuts[k], cuts[k + 1], 15, 1e-13);
  return init.epsilon * 2.0 * std::numbers::pi * init.speed_moment() * angular;
}

DecayReport decay_fit(const std::vector<MomentSnapshot>& series) {
  if (series.size() < 3) throw std::invalid_argument("decay_fit: needs at least three snapshots");
  DecayReport rep;
  for (const auto& s : series) {
    if (s.r.size() != s.mu.size()) throw std::invalid_argument("decay_fit: size mismatch");
    double D = 0.0, sup = 0.0;
    for (std::size_t j = 0; j < s.r.size(); ++j) {
      const double tm = tau(s.t, s.r[j]).minus;
      D = std::max(D, (1.0 + s.r[j]) * (1.0 + s.r[j]) * tm * tm * std::abs(s.mu[j]));
      sup = std::max(sup, std::abs(s.mu[j]));
    }
    rep.t.push_back(s.t);
    rep.weighted_sup.push_back(D);
    rep.sup_moment.push_back(sup);
  }
  const double D0 = rep.weighted_sup.front();
  for (double D : rep.weighted_sup) rep.max_ratio = std::max(rep.max_ratio, D0 > 0.0 ? D / D0 : 0.0);
  const auto [lo, hi] = std::minmax_element(rep.weighted_sup.begin(), rep.weighted_sup.end());
  rep.spread = *lo > 0.0 ? *hi / *lo : 0.0;

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int m = 0;
  for (std::size_t k = 0; k < rep.t.size(); ++k) {
    if (rep.t[k] <= 0.0 || rep.sup_moment[k] <= 0.0) continue;
    const double x = std::log(rep.t[k]);
    const double y = std::log(rep.sup_moment[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m >= 2) {
    const double den = m * sxx - sx * sx;
    rep.slope = den != 0.0 ? (m * sxy - sx * sy) / den : 0.0;
  }
  return rep;
}

double charge_identity_check(const ParticleEnsemble& ens, const RadialField* field, double sigma) {
  double Q = 0.0;
  double sum = 0.0;
  for (std::size_t p = 0; p < ens.size(); ++p) {
    Q += ens.weight[p];
    if (ens.f0[p] == 0.0) throw std::domain_error("charge_identity_check: sample with f0 = 0");
    Vec3 force = Vec3::Zero();
    if (field) force = radial_force(field_at(*field, ens.X[p].norm()).E, ens.X[p], sigma);
    sum += ens.weight[p] * commuted_value(FieldId::S, ens, p, force) / ens.f0[p];
  }
  if (Q == 0.0) throw std::domain_error("charge_identity_check: zero total charge");
  return std::abs(sum + 3.0 * Q) / std::abs(Q);
}

std::string energy_norm_json(const std::vector<EnergyNormEstimate>& norms, double charge_residual) {
  nlohmann::json j;
  j["energy_norms"] = nlohmann::json::array();
  for (const auto& e : norms) {
    j["energy_norms"].push_back({{"M", e.order},
                                 {"n", e.power},
                                 {"value", e.value},
                                 {"std_error", e.std_error},
                                 {"source_part", e.source_part}});
  }
  j["charge_identity_residual"] = charge_residual;
  return j.dump(2);
}

void write_moment_csv(const MomentSnapshot& snap, std::ostream& out) {
  out << "t,r,mu\n";
  out.precision(17);
  for (std::size_t j = 0; j < snap.r.size(); ++j) out << snap.t << ',' << snap.r[j] << ',' << snap.mu[j] << '\n';
}

}  // namespace mvp
