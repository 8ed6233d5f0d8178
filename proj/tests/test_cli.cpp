#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lsfem/run.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#ifndef LSFEM_BIN
#define LSFEM_BIN "lsfem"
#endif

using namespace lsfem;

namespace {

std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(LSFEM_BIN) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("solve: CSV row with 400 flux dofs on structured:10") {
  RunConfig config;
  config.problem = "ex1";
  config.m = 1;
  config.mesh_source = "structured:10";
  std::ostringstream out, log;
  CHECK(run_solve(config, out, log) == 0);
  std::istringstream csv(out.str());
  std::string header, row;
  REQUIRE(std::getline(csv, header));
  REQUIRE(std::getline(csv, row));
  const auto head = split(header);
  const auto cells = split(row);
  REQUIRE(head.size() == cells.size());
  REQUIRE(head.size() == 11);
  CHECK(cells[0] == "ex1");
  CHECK(cells[4] == "400");  // dofs_flux
  for (const char* col : {"err_p_l2", "err_p_energy", "err_u_l2", "err_u_energy"}) {
    const auto it = std::find(head.begin(), head.end(), col);
    REQUIRE(it != head.end());
    CHECK(!cells[static_cast<std::size_t>(it - head.begin())].empty());
  }
}

TEST_CASE("solve on a polygonal file mesh: flux errors only") {
  // 2 x 2 quad mesh written to a temp file
  const std::string path = "cli_quad_mesh.txt";
  {
    std::ofstream f(path);
    f << "nodes 9\n";
    for (int j = 0; j <= 2; ++j)
      for (int i = 0; i <= 2; ++i) f << 0.5 * i << ' ' << 0.5 * j << "\n";
    f << "elements 4\n";
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i)
        f << "4 " << (j * 3 + i) << ' ' << (j * 3 + i + 1) << ' ' << ((j + 1) * 3 + i + 1) << ' '
          << ((j + 1) * 3 + i) << "\n";
  }
  RunConfig config;
  config.problem = "ex1";
  config.m = 1;
  config.mesh_source = "file:" + path;
  std::ostringstream out, log;
  CHECK(run_solve(config, out, log) == 0);
  CHECK(log.str().find("flux only") != std::string::npos);
  std::istringstream csv(out.str());
  std::string header, row;
  std::getline(csv, header);
  std::getline(csv, row);
  const auto cells = split(row);
  const auto head = split(header);
  auto cell = [&](const char* name) {
    const auto it = std::find(head.begin(), head.end(), name);
    REQUIRE(it != head.end());
    return cells[static_cast<std::size_t>(it - head.begin())];
  };
  CHECK(!cell("err_p_l2").empty());
  CHECK(cell("err_u_l2").empty());
  CHECK(cell("dofs_pressure").empty());
  std::remove(path.c_str());
}

TEST_CASE("unknown problem: exit code 2 from the binary, names listed") {
  CHECK(run_binary("solve --problem nope --m 1") == 2);
  try {
    problem_by_name("nope");
    FAIL("expected error");
  } catch (const Error& e) {
    const std::string msg = e.what();
    for (const char* name : {"ex1", "ex3", "ex4"})
      CHECK(msg.find(name) != std::string::npos);
  }
}

TEST_CASE("binary smoke: mesh-gen then solve from the file") {
  CHECK(run_binary("mesh-gen --domain unit-square --n 4 --out cli_gen_mesh.txt") == 0);
  CHECK(run_binary("solve --problem ex1 --m 1 --mesh file:cli_gen_mesh.txt") == 0);
  CHECK(run_binary("patch-stats --problem ex1 --m 1 --mesh structured:3") == 0);
  std::remove("cli_gen_mesh.txt");
}

TEST_CASE("convergence: ex1 m=1, 4 levels, final energy-flux order near 1") {
  RunConfig config;
  config.problem = "ex1";
  config.m = 1;
  config.mesh_source = "structured:10";
  config.levels = 4;
  const ConvergenceReport report = convergence_study(config);
  REQUIRE(report.levels.size() == 4);
  const double order = report.ord_p_energy.back();
  CHECK(order > 0.85);
  CHECK(order < 1.15);
}

TEST_CASE("convergence: ex4 m=1, 4 levels, energy-flux order near 2/3") {
  RunConfig config;
  config.problem = "ex4";
  config.m = 1;
  config.mesh_source = "structured:10";
  config.levels = 4;
  const ConvergenceReport report = convergence_study(config);
  const double order = report.ord_p_energy.back();
  CHECK(order > 0.57);
  CHECK(order < 0.77);
}

TEST_CASE("convergence CSV is deterministic and well formed") {
  RunConfig config;
  config.problem = "ex1";
  config.m = 1;
  config.mesh_source = "structured:4";
  config.levels = 2;
  std::ostringstream out1, out2, log;
  REQUIRE(run_convergence(config, out1, log) == 0);
  REQUIRE(run_convergence(config, out2, log) == 0);
  CHECK(out1.str() == out2.str());
  std::istringstream csv(out1.str());
  std::string header;
  std::getline(csv, header);
  CHECK(split(header).size() == 12);
  std::string row;
  std::getline(csv, row);
  CHECK(split(row)[5] == "-");  // no order at the first level
  std::getline(csv, row);
  CHECK(split(row)[5] != "-");
}

TEST_CASE("pressure-degree pairing warning") {
  RunConfig config;
  config.problem = "ex1";
  config.m = 2;
  config.pressure_degree = 3;  // outside {m, m-1}
  config.mesh_source = "structured:4";
  config.levels = 2;
  std::ostringstream log;
  convergence_study(config, &log);
  CHECK(log.str().find("warning") != std::string::npos);
}

TEST_CASE("compare-dls: exact dof ratio and CSV series") {
  RunConfig config;
  config.problem = "ex1";
  config.m = 1;
  config.mesh_source = "structured:8";
  config.levels = 2;
  const CompareSeries series = compare_dls_study(config);
  REQUIRE(series.h.size() == 2);
  for (std::size_t i = 0; i < series.h.size(); ++i) {
    // sequential / dls = 2 / ((d+1) dim P_m) = 2/9 for m = 1
    CHECK(series.dofs_sequential[i] * 9 == series.dofs_dls[i] * 2);
    CHECK(series.err_sequential[i] > 0.0);
    CHECK(series.err_dls[i] > 0.0);
  }
  std::ostringstream out;
  write_compare_csv(series, config.m, out);
  std::istringstream csv(out.str());
  std::string line;
  std::getline(csv, line);
  CHECK(split(line).size() == 6);
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 4);  // two methods x two levels
}

TEST_CASE("mesh source parsing errors") {
  CHECK_THROWS_AS(parse_mesh_source("bogus"), Error);
  CHECK_THROWS_AS(parse_mesh_source("structured:x"), Error);
  CHECK_THROWS_AS(parse_mesh_source("structured:0"), Error);
  CHECK(parse_mesh_source("structured:12").n == 12);
  CHECK(parse_mesh_source("file:abc.txt").path == "abc.txt");
}
