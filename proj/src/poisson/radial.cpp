#include "mvp/poisson/radial.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace mvp {

namespace {

constexpr double kPi = 3.14159265358979323846;

double cube(double x) { return x * x * x; }

}  // namespace

RadialGrid::RadialGrid(double r_max_, int n_cells_) : r_max(r_max_), n_cells(n_cells_) {
  if (!(r_max > 0.0)) throw std::invalid_argument("r_max must be positive");
  if (n_cells < 2) throw std::invalid_argument("need at least two cells");
}

double RadialGrid::upper_edge(int j) const { return j >= n_cells ? r_max : (j + 0.5) * h(); }

double RadialGrid::lower_edge(int j) const { return j <= 0 ? 0.0 : (j - 0.5) * h(); }

double RadialGrid::shell_volume(int j) const { return 4.0 * kPi * (cube(upper_edge(j)) - cube(lower_edge(j))) / 3.0; }

RadialField solve_field(const RadialGrid& grid, std::vector<double> rho) {
  const int n = grid.num_nodes();
  if (static_cast<int>(rho.size()) != n) throw std::invalid_argument("density size does not match the grid");
  RadialField f;
  f.grid = grid;
  f.E.assign(n, 0.0);
  f.enclosed.assign(n, 0.0);
  double below = 0.0;
  for (int j = 0; j < n; ++j) {
    const double a = grid.lower_edge(j);
    const double r = grid.node(j);
    if (j > 0) f.E[j] = (below + rho[j] * (cube(r) - cube(a)) / 3.0) / (r * r);
    below += rho[j] * (cube(grid.upper_edge(j)) - cube(a)) / 3.0;
    f.enclosed[j] = below;
  }
  f.Q = 4.0 * kPi * below;
  f.rho = std::move(rho);
  return f;
}

double charge(const RadialGrid& grid, const std::vector<double>& rho) {
  double q = 0.0;
  for (int j = 0; j < grid.num_nodes(); ++j) q += rho[j] * grid.shell_volume(j);
  return q;
}

FieldSample field_at(const RadialField& f, double r) {
  const auto& g = f.grid;
  if (r < 0.0) throw std::invalid_argument("negative radius");
  if (r >= g.r_max) {
    const double q = f.Q / (4.0 * kPi);
    return {q / (r * r), -2.0 * q / (r * r * r)};
  }
  const int j = std::min(static_cast<int>(std::floor(r / g.h() + 0.5)), g.n_cells);
  const double rho = f.rho[j];
  if (r == 0.0) return {0.0, rho / 3.0};
  const double a = g.lower_edge(j);
  const double below = j > 0 ? f.enclosed[j - 1] : 0.0;
  const double E = (below + rho * (cube(r) - cube(a)) / 3.0) / (r * r);
  return {E, rho - 2.0 * E / r};
}

double potential_decay_report(const RadialField& f, double t) {
  double sup = 0.0;
  for (int j = 0; j < f.grid.num_nodes(); ++j) {
    const double w = 1.0 + t + f.grid.node(j);
    sup = std::max(sup, w * w * std::abs(f.E[j]));
  }
  return sup;
}

double field_energy(const RadialField& f) {
  // E r = A / r + B r^2 on each shell, integrated exactly
  const auto& g = f.grid;
  double sum = 0.0;
  for (int j = 0; j < g.num_nodes(); ++j) {
    const double a = g.lower_edge(j);
    const double b = g.upper_edge(j);
    const double below = j > 0 ? f.enclosed[j - 1] : 0.0;
    const double B = f.rho[j] / 3.0;
    const double A = below - B * cube(a);
    double cell = 2.0 * A * B * (b * b - a * a) / 2.0 + B * B * (std::pow(b, 5) - std::pow(a, 5)) / 5.0;
    if (A != 0.0) cell += A * A * (1.0 / a - 1.0 / b);
    sum += cell;
  }
  const double q = f.Q / (4.0 * kPi);
  sum += q * q / g.r_max;
  return 4.0 * kPi * sum;
}

std::vector<double> project_density(const RadialGrid& grid, const std::function<double(double)>& enclosed_charge) {
  std::vector<double> rho(grid.num_nodes());
  for (int j = 0; j < grid.num_nodes(); ++j)
    rho[j] = (enclosed_charge(grid.upper_edge(j)) - enclosed_charge(grid.lower_edge(j))) / grid.shell_volume(j);
  return rho;
}

std::vector<double> sample_density(const RadialGrid& grid, const std::function<double(double)>& rho) {
  std::vector<double> out(grid.num_nodes());
  for (int j = 0; j < grid.num_nodes(); ++j) out[j] = rho(grid.node(j));
  return out;
}

void write_field_csv(const RadialField& f, std::ostream& out) {
  out << "r,rho,E\n" << std::setprecision(17);
  for (int j = 0; j < f.grid.num_nodes(); ++j) out << f.grid.node(j) << ',' << f.rho[j] << ',' << f.E[j] << '\n';
}

std::string field_summary_json(const RadialField& f, double t) {
  nlohmann::json j;
  j["version"] = 1;
  j["t"] = t;
  j["Q"] = f.Q;
  j["sup_decay_weighted"] = potential_decay_report(f, t);
  return j.dump(2);
}

}  // namespace mvp
