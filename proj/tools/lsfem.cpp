// Command-line front end: mesh generation, single solves, convergence
// studies and the DOF-efficiency comparison against the one-shot
// discontinuous least-squares method.

#include "lsfem/run.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>

namespace {

struct OutputTarget {
  std::unique_ptr<std::ofstream> file;
  std::ostream* stream = &std::cout;

  explicit OutputTarget(const std::string& path) {
    if (path.empty()) return;
    file = std::make_unique<std::ofstream>(path);
    if (!file->good()) throw lsfem::Error("cannot open output file '" + path + "'");
    stream = file.get();
  }
};

void add_common_flags(CLI::App* cmd, lsfem::RunConfig& config, std::string& penalty) {
  cmd->add_option("--problem", config.problem, "problem name (ex1, ex3, ex4)");
  cmd->add_option("--m", config.m, "flux polynomial degree")->check(CLI::Range(1, 3));
  cmd->add_option("--pressure-degree", config.pressure_degree,
                  "pressure space degree (default: equal order)");
  cmd->add_option("--mesh", config.mesh_source, "structured:<n> or file:<path>");
  cmd->add_option("--levels", config.levels, "refinement levels");
  cmd->add_option("--patch-size", config.patch_size, "patch cardinality override");
  cmd->add_option("--penalty", penalty, "penalty weight: global-h | face-h")
      ->check(CLI::IsMember({"global-h", "face-h"}));
  cmd->add_option("--tol", config.tol, "linear solver relative tolerance");
  cmd->add_option("--out", config.out_path, "output path (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sequential least-squares finite element solver for the Poisson equation"};
  app.require_subcommand(1);

  lsfem::RunConfig config;
  std::string penalty = "global-h";
  std::string domain = "unit-square";
  int mesh_n = 10;

  CLI::App* solve = app.add_subcommand("solve", "single flux + pressure solve");
  add_common_flags(solve, config, penalty);
  CLI::App* conv = app.add_subcommand("convergence", "multi-level convergence study");
  add_common_flags(conv, config, penalty);
  CLI::App* compare = app.add_subcommand("compare-dls", "DOF efficiency vs the DLS method");
  add_common_flags(compare, config, penalty);
  CLI::App* stats = app.add_subcommand("patch-stats", "patch sizes and stability estimates");
  add_common_flags(stats, config, penalty);
  CLI::App* gen = app.add_subcommand("mesh-gen", "write a structured mesh file");
  gen->add_option("--domain", domain, "unit-square | l-shape");
  gen->add_option("--n", mesh_n, "subdivisions per side")->check(CLI::PositiveNumber);
  gen->add_option("--out", config.out_path, "output path (default: stdout)");

  CLI11_PARSE(app, argc, argv);
  config.penalty =
      penalty == "face-h" ? lsfem::PenaltyMode::FaceH : lsfem::PenaltyMode::GlobalH;

  try {
    lsfem::problem_by_name(config.problem);  // validate early for exit code 2
  } catch (const lsfem::Error& e) {
    if (!gen->parsed()) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }

  try {
    OutputTarget out(config.out_path);
    if (solve->parsed()) return lsfem::run_solve(config, *out.stream, std::cerr);
    if (conv->parsed()) return lsfem::run_convergence(config, *out.stream, std::cerr);
    if (compare->parsed()) return lsfem::run_compare_dls(config, *out.stream, std::cerr);
    if (stats->parsed()) return lsfem::run_patch_stats(config, *out.stream, std::cerr);
    if (gen->parsed()) return lsfem::run_mesh_gen(domain, mesh_n, *out.stream, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
