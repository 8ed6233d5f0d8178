#pragma once

#include "lsfem/dls.hpp"
#include "lsfem/flux_solver.hpp"
#include "lsfem/pressure_solver.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lsfem {

/// Front-end configuration shared by all subcommands.
struct RunConfig {
  std::string problem = "ex1";
  int m = 1;
  int pressure_degree = -1;  // -1 selects the equal-order pairing
  std::string mesh_source = "structured:10";  // structured:<n> | file:<path>
  int levels = 4;
  int patch_size = 0;  // 0 selects the reference table value
  PenaltyMode penalty = PenaltyMode::GlobalH;
  double tol = 1e-10;
  std::string out_path;  // empty writes to stdout

  int effective_pressure_degree() const { return pressure_degree < 0 ? m : pressure_degree; }
};

struct MeshSource {
  bool structured = false;
  int n = 0;
  std::string path;
};
MeshSource parse_mesh_source(const std::string& source);
Mesh make_mesh(const MeshSource& source, Domain domain, int level = 0);

/// Per-refinement-level errors of a convergence study with pairwise orders.
struct ConvergenceLevel {
  double h = 0.0;
  int dofs_flux = 0;
  int dofs_pressure = -1;  // -1 when the pressure step is skipped
  double err_p_l2 = 0.0, err_p_energy = 0.0;
  double err_u_l2 = 0.0, err_u_energy = 0.0;
};
struct ConvergenceReport {
  bool with_pressure = true;
  std::vector<ConvergenceLevel> levels;
  std::vector<double> ord_p_l2, ord_p_energy, ord_u_l2, ord_u_energy;
  void compute_orders();
};

struct SolveSummary {
  double h = 0.0;
  int dofs_flux = 0;
  int dofs_pressure = -1;
  double err_p_l2 = 0.0, err_p_energy = 0.0;
  double err_u_l2 = 0.0, err_u_energy = 0.0;
  double functional = 0.0;
  int flux_iterations = 0;
  double flux_residual = 0.0;
};

/// One flux + pressure solve on a given mesh; the pressure step is skipped
/// on non-simplicial meshes or when pressure_degree_override is 0.
SolveSummary solve_problem(const ManufacturedProblem& problem, const Mesh& mesh,
                           const RunConfig& config, std::ostream* log = nullptr);

ConvergenceReport convergence_study(const RunConfig& config, std::ostream* log = nullptr);

struct CompareSeries {
  std::vector<double> h;
  std::vector<int> dofs_sequential, dofs_dls;
  std::vector<double> err_sequential, err_dls;  // ||p - p_h||_p, the DLS norm
};
CompareSeries compare_dls_study(const RunConfig& config, std::ostream* log = nullptr);

/// Log-log interpolation of DOFs at a matched error level; the efficiency
/// measure of the method comparison.
double dofs_at_error(const std::vector<int>& dofs, const std::vector<double>& errors,
                     double target_error);

// subcommand entry points (return process exit codes)
int run_solve(const RunConfig& config, std::ostream& out, std::ostream& log);
int run_convergence(const RunConfig& config, std::ostream& out, std::ostream& log);
int run_compare_dls(const RunConfig& config, std::ostream& out, std::ostream& log);
int run_patch_stats(const RunConfig& config, std::ostream& out, std::ostream& log);
int run_mesh_gen(const std::string& domain, int n, std::ostream& out, std::ostream& log);

void write_convergence_csv(const ConvergenceReport& report, std::ostream& out);
void write_compare_csv(const CompareSeries& series, int m, std::ostream& out);

}  // namespace lsfem
