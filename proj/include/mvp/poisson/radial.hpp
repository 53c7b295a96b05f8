#ifndef MVP_POISSON_RADIAL_HPP
#define MVP_POISSON_RADIAL_HPP

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace mvp {

/// Uniform radial nodes r_j = j h, j = 0..n_cells. Node j owns the dual
/// shell [r_{j-1/2}, r_{j+1/2}] clipped to [0, r_max].
struct RadialGrid {
  double r_max = 100.0;
  int n_cells = 2000;

  RadialGrid() = default;
  RadialGrid(double r_max_, int n_cells_);

  double h() const { return r_max / n_cells; }
  int num_nodes() const { return n_cells + 1; }
  double node(int j) const { return j * h(); }
  /// Outer edge of the dual shell of node j.
  double upper_edge(int j) const;
  /// Inner edge of the dual shell of node j.
  double lower_edge(int j) const;
  /// 4 pi (upper^3 - lower^3) / 3
  double shell_volume(int j) const;
};

/// Radial density and field E = d_r phi for Laplace(phi) = rho.
struct RadialField {
  RadialGrid grid;
  std::vector<double> rho;       // shell averages at the nodes
  std::vector<double> E;         // field at the nodes
  std::vector<double> enclosed;  // int_0^{upper_edge(j)} rho r^2 dr
  double Q = 0.0;                // 4 pi int rho r^2 dr
};

struct FieldSample {
  double E = 0.0;
  double dEdr = 0.0;
};

/// Solves r^-2 d_r(r^2 E) = rho with E(0) = 0, treating rho as constant on
/// each dual shell.
RadialField solve_field(const RadialGrid& grid, std::vector<double> rho);

double charge(const RadialGrid& grid, const std::vector<double>& rho);

/// E and dE/dr at radius r; the monopole Q / (4 pi r^2) beyond r_max.
FieldSample field_at(const RadialField& f, double r);

/// sup_j (1 + t + r_j)^2 |E(r_j)|
double potential_decay_report(const RadialField& f, double t);

/// 4 pi int_0^inf E^2 r^2 dr including the exterior monopole tail.
double field_energy(const RadialField& f);

/// Shell averages of a density given its enclosed charge C(r) = 4 pi int_0^r rho r^2.
std::vector<double> project_density(const RadialGrid& grid, const std::function<double(double)>& enclosed_charge);

/// Point samples rho(r_j).
std::vector<double> sample_density(const RadialGrid& grid, const std::function<double(double)>& rho);

void write_field_csv(const RadialField& f, std::ostream& out);
std::string field_summary_json(const RadialField& f, double t);

}  // namespace mvp

#endif
