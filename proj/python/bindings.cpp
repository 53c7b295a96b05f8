#include "mvp/diagnostics/diagnostics.hpp"
#include "mvp/ineq_harness/ineq_harness.hpp"
#include "mvp/poisson/radial.hpp"
#include "mvp/symkernel/catalog.hpp"
#include "mvp/vp_sim/simulation.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace mvp;

namespace {

py::object json_loads(const std::string& s) { return py::module_::import("json").attr("loads")(s); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Massless Vlasov-Poisson numerics";

  m.def("verify_algebra", [] { return json_loads(sym::verify_identity_catalog().to_json()); },
        "Run the exact identity catalog and return the certificate.");

  py::class_<InitialData>(m, "InitialData")
      .def(py::init<>())
      .def_readwrite("epsilon", &InitialData::epsilon)
      .def_property(
          "profile", [](const InitialData& d) { return std::string(radial_profile_name(d.profile)); },
          [](InitialData& d, const std::string& name) { d.profile = radial_profile_from_name(name); })
      .def_readwrite("radial_scale", &InitialData::radial_scale)
      .def_readwrite("v_low", &InitialData::v_low)
      .def_readwrite("v_high", &InitialData::v_high)
      .def_readwrite("anisotropy", &InitialData::anisotropy)
      .def("validate", &InitialData::validate)
      .def("value",
           [](const InitialData& d, const std::array<double, 3>& x, const std::array<double, 3>& v) {
             return d.value(Vec3(x[0], x[1], x[2]), Vec3(v[0], v[1], v[2]));
           })
      .def("total_charge", &InitialData::total_charge)
      .def("enclosed_charge", &InitialData::enclosed_charge);

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("init", &SimConfig::init)
      .def_readwrite("peak_field", &SimConfig::peak_field)
      .def_readwrite("particles", &SimConfig::particles)
      .def_readwrite("seed", &SimConfig::seed)
      .def_readwrite("dt", &SimConfig::dt)
      .def_readwrite("t_end", &SimConfig::t_end)
      .def_readwrite("sigma", &SimConfig::sigma)
      .def_readwrite("tangents", &SimConfig::tangents)
      .def_readwrite("snapshot_every", &SimConfig::snapshot_every)
      .def_readwrite("barrier_speed", &SimConfig::barrier_speed)
      .def("set_grid", [](SimConfig& c, double r_max, int cells) { c.grid = RadialGrid(r_max, cells); });

  py::register_exception<BarrierViolation>(m, "BarrierViolation");

  m.def(
      "simulate",
      [](const SimConfig& cfg) {
        SimResult res;
        {
          py::gil_scoped_release release;
          res = run(cfg);
        }
        std::ostringstream csv;
        write_snapshots_csv(res.snapshots, csv);
        py::dict out;
        out["summary"] = json_loads(run_summary_json(res));
        out["snapshots_csv"] = csv.str();
        out["r"] = [&] {
          std::vector<double> r;
          for (int j = 0; j < res.final_field.grid.num_nodes(); ++j) r.push_back(res.final_field.grid.node(j));
          return r;
        }();
        out["E"] = res.final_field.E;
        return out;
      },
      py::arg("config"), "Run the self-consistent particle simulation.");

  m.def(
      "solve_field",
      [](double r_max, int cells, const std::vector<double>& rho) {
        const RadialGrid g(r_max, cells);
        return solve_field(g, rho).E;
      },
      py::arg("r_max"), py::arg("cells"), py::arg("rho"), "Radial field at the grid nodes for shell densities rho.");

  m.def("free_stream_moment", &free_stream_moment, py::arg("init"), py::arg("t"), py::arg("r"),
        "Velocity average of the free-streaming solution at time t and radius r.");

  m.def(
      "charge_identity",
      [](const InitialData& init, std::size_t particles, std::uint64_t seed, double t) {
        ParticleEnsemble ens = sample(init, particles, seed, true);
        free_stream(ens, t);
        return charge_identity_check(ens);
      },
      py::arg("init"), py::arg("particles"), py::arg("seed"), py::arg("t"),
      "Relative residual of the scaling charge identity on a free-streaming ensemble.");

  m.def("family_names", &family_names);
  m.def(
      "inequality_scan",
      [](const std::string& family, const std::vector<double>& times, const std::vector<int>& ps, int nodes,
         int radii) {
        ScanOptions opt;
        opt.rhs.nodes = nodes;
        opt.radii = radii;
        InequalityReport rep;
        {
          py::gil_scoped_release release;
          rep = constant_scan(family_from_name(family), times, ps, opt);
        }
        return json_loads(inequality_json(rep));
      },
      py::arg("family"), py::arg("times"), py::arg("p"), py::arg("nodes") = 8, py::arg("radii") = 200,
      "Scan the functional inequality ratio over a test family.");
}
