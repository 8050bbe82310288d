#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "twrelay/asymptotics.hpp"
#include "twrelay/bc_solver.hpp"
#include "twrelay/channel.hpp"
#include "twrelay/io.hpp"
#include "twrelay/ma_solver.hpp"
#include "twrelay/oracle.hpp"
#include "twrelay/rate_model.hpp"
#include "twrelay/region_solver.hpp"

namespace py = pybind11;
using namespace twr;

namespace {

Strategy strategy_arg(const std::string& s) { return strategy_from_string(s); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-way OFDM relay rate regions";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<DegenerateDualError>(m, "DegenerateDualError", base.ptr());
  py::register_exception<SolverError>(m, "SolverError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  py::class_<ChannelState>(m, "ChannelState")
      .def(py::init<>())
      .def(py::init([](std::vector<double> g1, std::vector<double> g2, std::vector<double> gt1,
                       std::vector<double> gt2) {
             ChannelState c{std::move(g1), std::move(g2), std::move(gt1), std::move(gt2)};
             c.validate();
             return c;
           }),
           py::arg("g1"), py::arg("g2"), py::arg("gt1"), py::arg("gt2"))
      .def_readwrite("g1", &ChannelState::g1)
      .def_readwrite("g2", &ChannelState::g2)
      .def_readwrite("gt1", &ChannelState::gt1)
      .def_readwrite("gt2", &ChannelState::gt2)
      .def("__len__", &ChannelState::size)
      .def("digest", [](const ChannelState& c) { return csi_digest(c); });

  py::class_<PowerBudget>(m, "PowerBudget")
      .def(py::init([](double p1, double p2, double pr) { return PowerBudget{p1, p2, pr}; }),
           py::arg("p1"), py::arg("p2"), py::arg("pr"))
      .def_readwrite("p1", &PowerBudget::p1)
      .def_readwrite("p2", &PowerBudget::p2)
      .def_readwrite("pr", &PowerBudget::pr)
      .def("__repr__", [](const PowerBudget& b) {
        return "PowerBudget(" + format_number(b.p1) + ", " + format_number(b.p2) + ", " +
               format_number(b.pr) + ")";
      });

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("eps_dual", &SolverConfig::eps_dual)
      .def_readwrite("eps_bisect", &SolverConfig::eps_bisect)
      .def_readwrite("max_iters", &SolverConfig::max_iters)
      .def_readwrite("eps_feas", &SolverConfig::eps_feas)
      .def_readwrite("degeneracy_tol", &SolverConfig::degeneracy_tol)
      .def_readwrite("alpha3_rel_tol", &SolverConfig::alpha3_rel_tol)
      .def_readwrite("t_margin", &SolverConfig::t_margin)
      .def_readwrite("t_tol", &SolverConfig::t_tol);

  py::class_<ResourceAllocation>(m, "ResourceAllocation")
      .def(py::init([](std::vector<double> p1, std::vector<double> p2, std::vector<double> pr,
                       double t) {
             return ResourceAllocation{std::move(p1), std::move(p2), std::move(pr), t};
           }),
           py::arg("p1"), py::arg("p2"), py::arg("pr"), py::arg("t"))
      .def_readwrite("p1", &ResourceAllocation::p1)
      .def_readwrite("p2", &ResourceAllocation::p2)
      .def_readwrite("pr", &ResourceAllocation::pr)
      .def_readwrite("t", &ResourceAllocation::t);

  py::class_<RegionConstraints>(m, "RegionConstraints")
      .def_readonly("cap12", &RegionConstraints::cap12)
      .def_readonly("cap21", &RegionConstraints::cap21)
      .def_readonly("cap_sum", &RegionConstraints::cap_sum);

  py::class_<BoundaryPoint>(m, "BoundaryPoint")
      .def_readonly("rho", &BoundaryPoint::rho)
      .def_property_readonly("r12", [](const BoundaryPoint& p) { return p.rate.r12; })
      .def_property_readonly("r21", [](const BoundaryPoint& p) { return p.rate.r21; })
      .def_readonly("t_star", &BoundaryPoint::t_star)
      .def_readonly("alloc", &BoundaryPoint::alloc)
      .def_property_readonly("strategy",
                             [](const BoundaryPoint& p) { return std::string(to_string(p.strategy)); });

  py::class_<RegionBoundary>(m, "RegionBoundary")
      .def_readonly("points", &RegionBoundary::points)
      .def_readonly("csi_digest", &RegionBoundary::csi_digest)
      .def_property_readonly("failures", [](const RegionBoundary& r) {
        std::vector<std::pair<double, std::string>> out;
        for (const auto& f : r.failures) out.emplace_back(f.rho, f.message);
        return out;
      });

  py::class_<OracleResult>(m, "OracleResult")
      .def_readonly("bound", &OracleResult::bound)
      .def_readonly("upper_bound", &OracleResult::upper_bound)
      .def_readonly("error_bound", &OracleResult::error_bound)
      .def_readonly("alloc", &OracleResult::alloc);

  m.def("generate_rayleigh_csi", &generate_rayleigh_csi, py::arg("n_subcarriers"),
        py::arg("n_taps"), py::arg("reciprocal"), py::arg("seed"));
  m.def("budget_from_snr_db", &budget_from_snr_db, py::arg("n_subcarriers"), py::arg("snr_db"));
  m.def("read_csi_file", &read_csi_file);
  m.def("write_csi_file", &write_csi_file);

  m.def("constraints", [](const std::string& s, const ResourceAllocation& a,
                          const ChannelState& c) { return constraints_for(strategy_arg(s), a, c); },
        py::arg("strategy"), py::arg("alloc"), py::arg("csi"));
  m.def("max_r12_on_ray", &max_r12_on_ray, py::arg("caps"), py::arg("rho"));

  m.def(
      "solve_ma",
      [](double t, double rho, const ChannelState& c, const PowerBudget& b,
         const SolverConfig& cfg) {
        const MaSolution s = solve_ma(t, rho, c, b, cfg);
        py::dict d;
        d["rate"] = s.rate;
        d["p1"] = s.p1;
        d["p2"] = s.p2;
        d["lambda"] = s.dual.lambda;
        d["alpha"] = s.dual.alpha;
        d["dual_value"] = s.dual_value;
        d["gap"] = s.gap;
        d["branch"] = std::string(to_string(s.branch));
        return d;
      },
      py::arg("t"), py::arg("rho"), py::arg("csi"), py::arg("budget"),
      py::arg("config") = SolverConfig{});
  m.def(
      "solve_bc",
      [](double t, double rho, const ChannelState& c, const PowerBudget& b,
         const SolverConfig& cfg) {
        const BcSolution s = solve_bc(t, rho, c, b, cfg);
        py::dict d;
        d["rate"] = s.rate;
        d["pr"] = s.pr;
        d["lambda5"] = s.dual.lambda5;
        d["alpha3"] = s.dual.alpha3;
        d["dual_value"] = s.dual_value;
        d["gap"] = s.gap;
        return d;
      },
      py::arg("t"), py::arg("rho"), py::arg("csi"), py::arg("budget"),
      py::arg("config") = SolverConfig{});

  m.def(
      "solve_boundary_point",
      [](const std::string& s, double rho, const ChannelState& c, const PowerBudget& b,
         const SolverConfig& cfg, bool af_refine) {
        return solve_boundary_point(strategy_arg(s), rho, c, b, cfg, {af_refine});
      },
      py::arg("strategy"), py::arg("rho"), py::arg("csi"), py::arg("budget"),
      py::arg("config") = SolverConfig{}, py::arg("af_refine") = false);
  m.def(
      "sweep_region",
      [](const std::string& s, const std::vector<double>& grid, const ChannelState& c,
         const PowerBudget& b, const SolverConfig& cfg, int jobs) {
        py::gil_scoped_release release;
        return sweep_region(strategy_arg(s), grid, c, b, cfg, jobs);
      },
      py::arg("strategy"), py::arg("rho_grid"), py::arg("csi"), py::arg("budget"),
      py::arg("config") = SolverConfig{}, py::arg("jobs") = 1);
  m.def("default_rho_grid", &default_rho_grid);
  m.def("waterfill", &waterfill, py::arg("gains"), py::arg("budget"), py::arg("t_scale"));

  m.def(
      "grid_bruteforce_df",
      [](const ChannelState& c, const PowerBudget& b, double rho, int points,
         const std::string& s) { return grid_bruteforce_df(c, b, rho, {points}, strategy_arg(s)); },
      py::arg("csi"), py::arg("budget"), py::arg("rho"), py::arg("points_per_axis") = 200,
      py::arg("strategy") = "msc-df");

  m.def(
      "multiplexing_vertices",
      [](const std::string& s, int n) {
        return region_vertices(multiplexing_region(strategy_arg(s), n));
      },
      py::arg("strategy"), py::arg("n_subcarriers"));
  m.def(
      "empirical_slope",
      [](const std::string& s, double rho, const ChannelState& c, const PowerBudget& base,
         const std::vector<double>& xs, const SolverConfig& cfg) {
        std::vector<std::pair<double, double>> out;
        for (const auto& p : empirical_slope(strategy_arg(s), rho, c, base, xs, cfg)) {
          out.emplace_back(p.x, p.slope);
        }
        return out;
      },
      py::arg("strategy"), py::arg("rho"), py::arg("csi"), py::arg("base"), py::arg("x_grid"),
      py::arg("config") = SolverConfig{});
  m.def(
      "low_snr_ratio",
      [](double rho, const ChannelState& c, const PowerBudget& base,
         const std::vector<double>& xs, const SolverConfig& cfg) {
        std::vector<std::pair<double, double>> out;
        for (const auto& p : low_snr_gap(rho, c, base, xs, cfg)) out.emplace_back(p.x, p.ratio);
        return out;
      },
      py::arg("rho"), py::arg("csi"), py::arg("base"), py::arg("x_grid"),
      py::arg("config") = SolverConfig{});
}
