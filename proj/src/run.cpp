#include "lsfem/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace lsfem {

namespace {

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

std::string fmt_err(double v) { return fmt("%.6e", v); }

std::string fmt_ord(double v) {
  if (std::isnan(v)) return "-";
  return fmt("%.3f", v);
}

}  // namespace

MeshSource parse_mesh_source(const std::string& source) {
  MeshSource ms;
  if (source.rfind("structured:", 0) == 0) {
    ms.structured = true;
    try {
      ms.n = std::stoi(source.substr(11));
    } catch (...) {
      throw Error("bad mesh source '" + source + "': expected structured:<n>");
    }
    require(ms.n >= 1, "mesh source: n must be >= 1");
    return ms;
  }
  if (source.rfind("file:", 0) == 0) {
    ms.path = source.substr(5);
    require(!ms.path.empty(), "mesh source: empty file path");
    return ms;
  }
  throw Error("bad mesh source '" + source + "': expected structured:<n> or file:<path>");
}

Mesh make_mesh(const MeshSource& source, Domain domain, int level) {
  if (source.structured) return build_structured_triangle_mesh(source.n << level, domain);
  require(level == 0, "file meshes do not support refinement levels");
  return read_mesh_file(source.path);
}

void ConvergenceReport::compute_orders() {
  std::vector<double> hs;
  for (const auto& level : levels) hs.push_back(level.h);
  auto column = [this](double ConvergenceLevel::* field) {
    std::vector<double> v;
    for (const auto& level : levels) v.push_back(level.*field);
    return v;
  };
  if (levels.size() < 2) return;
  ord_p_l2 = convergence_order(column(&ConvergenceLevel::err_p_l2), hs);
  ord_p_energy = convergence_order(column(&ConvergenceLevel::err_p_energy), hs);
  if (with_pressure) {
    ord_u_l2 = convergence_order(column(&ConvergenceLevel::err_u_l2), hs);
    ord_u_energy = convergence_order(column(&ConvergenceLevel::err_u_energy), hs);
  }
}

SolveSummary solve_problem(const ManufacturedProblem& problem, const Mesh& mesh,
                           const RunConfig& config, std::ostream* log) {
  SolveSummary summary;
  summary.h = mesh.h_max;
  summary.dofs_flux = 2 * mesh.num_elements();

  const ReconstructionOperator op = build_reconstruction(mesh, config.m, config.patch_size);
  FluxProblem flux_problem = FluxProblem::from_manufactured(mesh, op, problem);
  flux_problem.penalty = config.penalty;
  SolverOptions options;
  options.tol = config.tol;
  const FluxSolution flux = solve_flux(flux_problem, options);
  summary.functional = flux.functional_value;
  summary.flux_iterations = flux.iterations;
  summary.flux_residual = flux.residual;

  const ErrorNorms flux_err = flux_errors(mesh, problem, flux, config.m, config.penalty);
  summary.err_p_l2 = flux_err.l2;
  summary.err_p_energy = flux_err.energy;

  const int mu = config.effective_pressure_degree();
  if (!mesh.all_triangles()) {
    if (log) *log << "note: non-simplicial mesh, solving the flux only\n";
    return summary;
  }
  if (mu < 1) return summary;

  const LagrangeSpace space = LagrangeSpace::build(mesh, mu);
  summary.dofs_pressure = space.size();
  PressureOptions popt;
  popt.tol = config.tol;
  popt.penalty = config.penalty;
  const PressureSolution pressure = solve_pressure(
      space, [&flux](int k, const Vec2& x) { return flux.value(k, x); }, config.m, problem.u,
      popt);
  const ErrorNorms u_err = pressure_errors(mesh, problem, pressure, mu, config.penalty);
  summary.err_u_l2 = u_err.l2;
  summary.err_u_energy = u_err.energy;
  return summary;
}

ConvergenceReport convergence_study(const RunConfig& config, std::ostream* log) {
  require(config.levels >= 2, "convergence study needs at least 2 levels");
  const ManufacturedProblem problem = problem_by_name(config.problem);
  const MeshSource source = parse_mesh_source(config.mesh_source);
  require(source.structured, "convergence study requires a structured mesh source");

  const int mu = config.effective_pressure_degree();
  if (log && mu != config.m && mu != config.m - 1)
    *log << "warning: pressure degree " << mu << " is outside the tested pairings {m, m-1}\n";

  ConvergenceReport report;
  for (int level = 0; level < config.levels; ++level) {
    const Mesh mesh = make_mesh(source, problem.domain, level);
    const SolveSummary s = solve_problem(problem, mesh, config, log);
    if (log)
      *log << "level " << level << ": h = " << fmt_err(s.h) << ", flux dofs = " << s.dofs_flux
           << ", J = " << fmt_err(s.functional) << "\n";
    report.with_pressure = s.dofs_pressure > 0;
    report.levels.push_back({s.h, s.dofs_flux, s.dofs_pressure, s.err_p_l2, s.err_p_energy,
                             s.err_u_l2, s.err_u_energy});
  }
  report.compute_orders();
  return report;
}

CompareSeries compare_dls_study(const RunConfig& config, std::ostream* log) {
  require(config.levels >= 2, "comparison needs at least 2 levels");
  const ManufacturedProblem problem = problem_by_name(config.problem);
  const MeshSource source = parse_mesh_source(config.mesh_source);
  require(source.structured, "comparison requires a structured mesh source");

  CompareSeries series;
  for (int level = 0; level < config.levels; ++level) {
    const Mesh mesh = make_mesh(source, problem.domain, level);
    require(mesh.all_triangles(), "comparison requires triangle meshes");

    const ReconstructionOperator op = build_reconstruction(mesh, config.m, config.patch_size);
    FluxProblem flux_problem = FluxProblem::from_manufactured(mesh, op, problem);
    flux_problem.penalty = config.penalty;
    SolverOptions options;
    options.tol = config.tol;
    const FluxSolution flux = solve_flux(flux_problem, options);

    const DiscontinuousSpace space = DiscontinuousSpace::build(mesh, config.m);
    DlsOptions dls_options;
    dls_options.tol = config.tol;
    const DlsSolution dls = solve_dls(space, problem.f, problem.u, dls_options);

    series.h.push_back(mesh.h_max);
    series.dofs_sequential.push_back(2 * mesh.num_elements());
    series.dofs_dls.push_back(space.size());
    series.err_sequential.push_back(dls_flux_error_norm(mesh, problem, flux, config.m));
    series.err_dls.push_back(dls_flux_error_norm(mesh, problem, DlsVectorView{&dls}, config.m));
    if (log)
      *log << "level " << level << ": sequential " << series.dofs_sequential.back() << " dofs, "
           << fmt_err(series.err_sequential.back()) << "; dls " << series.dofs_dls.back()
           << " dofs, " << fmt_err(series.err_dls.back()) << "\n";
  }
  return series;
}

double dofs_at_error(const std::vector<int>& dofs, const std::vector<double>& errors,
                     double target_error) {
  require(dofs.size() == errors.size() && dofs.size() >= 2, "dofs_at_error: bad series");
  // errors decrease with the level; find the bracketing pair
  for (std::size_t i = 1; i < errors.size(); ++i) {
    const double e0 = errors[i - 1], e1 = errors[i];
    if ((target_error <= e0 && target_error >= e1) || (target_error >= e0 && target_error <= e1)) {
      const double t = (std::log(target_error) - std::log(e0)) / (std::log(e1) - std::log(e0));
      return std::exp(std::log(static_cast<double>(dofs[i - 1])) +
                      t * (std::log(static_cast<double>(dofs[i])) -
                           std::log(static_cast<double>(dofs[i - 1]))));
    }
  }
  throw Error("dofs_at_error: target error outside the measured range");
}

int run_solve(const RunConfig& config, std::ostream& out, std::ostream& log) {
  const ManufacturedProblem problem = problem_by_name(config.problem);
  const MeshSource source = parse_mesh_source(config.mesh_source);
  const Mesh mesh = make_mesh(source, problem.domain);
  const SolveSummary s = solve_problem(problem, mesh, config, &log);

  log << "problem " << config.problem << ", m = " << config.m << ", h = " << fmt_err(s.h) << "\n";
  log << "flux dofs " << s.dofs_flux << ", functional J = " << fmt_err(s.functional)
      << ", cg iterations " << s.flux_iterations << ", residual " << fmt_err(s.flux_residual)
      << "\n";
  if (s.dofs_pressure > 0) log << "pressure dofs " << s.dofs_pressure << "\n";

  out << "problem,m,pressure_degree,h,dofs_flux,dofs_pressure,err_p_l2,err_p_energy,err_u_l2,"
         "err_u_energy,functional\n";
  out << config.problem << ',' << config.m << ','
      << (s.dofs_pressure > 0 ? std::to_string(config.effective_pressure_degree()) : "") << ','
      << fmt_err(s.h) << ',' << s.dofs_flux << ','
      << (s.dofs_pressure > 0 ? std::to_string(s.dofs_pressure) : "") << ','
      << fmt_err(s.err_p_l2) << ',' << fmt_err(s.err_p_energy) << ','
      << (s.dofs_pressure > 0 ? fmt_err(s.err_u_l2) : "") << ','
      << (s.dofs_pressure > 0 ? fmt_err(s.err_u_energy) : "") << ',' << fmt_err(s.functional)
      << "\n";
  return 0;
}

void write_convergence_csv(const ConvergenceReport& report, std::ostream& out) {
  out << "level,h,dofs_flux,dofs_pressure,err_p_l2,ord_p_l2,err_p_energy,ord_p_energy,"
         "err_u_l2,ord_u_l2,err_u_energy,ord_u_energy\n";
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    const ConvergenceLevel& lvl = report.levels[i];
    auto ord = [&](const std::vector<double>& orders) {
      return i == 0 || orders.empty() ? std::string("-") : fmt_ord(orders[i - 1]);
    };
    out << i << ',' << fmt_err(lvl.h) << ',' << lvl.dofs_flux << ','
        << (lvl.dofs_pressure > 0 ? std::to_string(lvl.dofs_pressure) : "") << ','
        << fmt_err(lvl.err_p_l2) << ',' << ord(report.ord_p_l2) << ','
        << fmt_err(lvl.err_p_energy) << ',' << ord(report.ord_p_energy) << ',';
    if (report.with_pressure)
      out << fmt_err(lvl.err_u_l2) << ',' << ord(report.ord_u_l2) << ','
          << fmt_err(lvl.err_u_energy) << ',' << ord(report.ord_u_energy) << "\n";
    else
      out << ",,,\n";
  }
}

int run_convergence(const RunConfig& config, std::ostream& out, std::ostream& log) {
  const ConvergenceReport report = convergence_study(config, &log);
  write_convergence_csv(report, out);
  return 0;
}

void write_compare_csv(const CompareSeries& series, int m, std::ostream& out) {
  out << "method,m,level,h,dofs,err_p_dls_norm\n";
  for (std::size_t i = 0; i < series.h.size(); ++i)
    out << "sequential," << m << ',' << i << ',' << fmt_err(series.h[i]) << ','
        << series.dofs_sequential[i] << ',' << fmt_err(series.err_sequential[i]) << "\n";
  for (std::size_t i = 0; i < series.h.size(); ++i)
    out << "dls," << m << ',' << i << ',' << fmt_err(series.h[i]) << ',' << series.dofs_dls[i]
        << ',' << fmt_err(series.err_dls[i]) << "\n";
}

int run_compare_dls(const RunConfig& config, std::ostream& out, std::ostream& log) {
  const CompareSeries series = compare_dls_study(config, &log);
  write_compare_csv(series, config.m, out);
  return 0;
}

int run_patch_stats(const RunConfig& config, std::ostream& out, std::ostream& log) {
  const ManufacturedProblem problem = problem_by_name(config.problem);
  const MeshSource source = parse_mesh_source(config.mesh_source);
  const Mesh mesh = make_mesh(source, problem.domain);
  const ReconstructionOperator op = build_reconstruction(mesh, config.m, config.patch_size);
  const ShapeRegularityReport reg = shape_regularity_report(mesh);
  log << "mesh: " << mesh.num_elements() << " elements, h = " << fmt_err(mesh.h_max)
      << ", min h_e/h_K = " << fmt_err(reg.min_face_to_diameter) << "\n";
  out << "element,patch_size,depth,lambda_hat\n";
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const ElementPatch& patch = op.patches[static_cast<std::size_t>(k)];
    out << k << ',' << patch.size() << ',' << patch.depth << ','
        << fmt("%.4f", estimate_lambda(mesh, patch, config.m)) << "\n";
  }
  return 0;
}

int run_mesh_gen(const std::string& domain, int n, std::ostream& out, std::ostream& log) {
  Domain d;
  if (domain == "unit-square")
    d = Domain::UnitSquare;
  else if (domain == "l-shape")
    d = Domain::LShape;
  else
    throw Error("unknown domain '" + domain + "' (known: unit-square, l-shape)");
  const Mesh mesh = build_structured_triangle_mesh(n, d);
  log << "generated " << mesh.num_elements() << " elements, " << mesh.num_nodes() << " nodes\n";
  write_mesh(mesh, out);
  return 0;
}

}  // namespace lsfem
