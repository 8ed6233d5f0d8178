#pragma once

#include "lsfem/mesh.hpp"

#include <functional>
#include <string>
#include <vector>

namespace lsfem {

/// Analytic Poisson problem: exact solution u with derived data f = -lap(u)
/// and boundary values g = u.
struct ManufacturedProblem {
  std::string name;
  Domain domain = Domain::UnitSquare;
  std::function<double(const Vec2&)> u;
  std::function<Vec2(const Vec2&)> grad_u;
  std::function<double(const Vec2&)> f;
  std::string regularity;

  /// True where grad_u is singular (measure-zero set); grad_u returns 0
  /// there instead of diverging.
  std::function<bool(const Vec2&)> gradient_singular = [](const Vec2&) { return false; };
};

/// u = sin(2 pi x) sin(4 pi y) on the unit square; f = 20 pi^2 u.
ManufacturedProblem example1();

/// Mild wave front u = arctan(alpha (r - r0)) with center (-0.05, -0.05),
/// r0 = 0.7, alpha = 10 on the unit square.
ManufacturedProblem example3();

/// Corner singularity u = r^(5/3) sin(5 theta / 3) on the L-shaped domain;
/// harmonic, so f = 0. theta in [0, 3 pi / 2], re-entrant corner at the
/// origin.
ManufacturedProblem example4();

const std::vector<std::string>& problem_names();
ManufacturedProblem problem_by_name(const std::string& name);

}  // namespace lsfem
