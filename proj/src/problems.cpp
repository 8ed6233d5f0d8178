#include "lsfem/problems.hpp"

#include <cmath>
#include <numbers>

namespace lsfem {

using std::numbers::pi;

ManufacturedProblem example1() {
  ManufacturedProblem p;
  p.name = "ex1";
  p.domain = Domain::UnitSquare;
  p.regularity = "smooth";
  p.u = [](const Vec2& x) { return std::sin(2 * pi * x.x()) * std::sin(4 * pi * x.y()); };
  p.grad_u = [](const Vec2& x) {
    return Vec2(2 * pi * std::cos(2 * pi * x.x()) * std::sin(4 * pi * x.y()),
                4 * pi * std::sin(2 * pi * x.x()) * std::cos(4 * pi * x.y()));
  };
  p.f = [](const Vec2& x) {
    return 20 * pi * pi * std::sin(2 * pi * x.x()) * std::sin(4 * pi * x.y());
  };
  return p;
}

ManufacturedProblem example3() {
  constexpr double alpha = 10.0;
  constexpr double r0 = 0.7;
  const Vec2 center(-0.05, -0.05);
  ManufacturedProblem p;
  p.name = "ex3";
  p.domain = Domain::UnitSquare;
  p.regularity = "smooth (near singularity outside the domain)";
  p.u = [center](const Vec2& x) {
    const double r = (x - center).norm();
    return std::atan(alpha * (r - r0));
  };
  p.grad_u = [center](const Vec2& x) {
    const Vec2 d = x - center;
    const double r = d.norm();
    const double s = alpha * (r - r0);
    return Vec2((alpha / (1.0 + s * s)) * d / r);
  };
  p.f = [center](const Vec2& x) {
    // -lap(u) for radial u: -(u'' + u'/r)
    const double r = (x - center).norm();
    const double s = alpha * (r - r0);
    const double den = 1.0 + s * s;
    const double du = alpha / den;
    const double ddu = -2.0 * alpha * alpha * s / (den * den);
    return -(ddu + du / r);
  };
  return p;
}

ManufacturedProblem example4() {
  ManufacturedProblem p;
  p.name = "ex4";
  p.domain = Domain::LShape;
  p.regularity = "H^(2+s), s < 2/3 (re-entrant corner)";
  auto theta_of = [](const Vec2& x) {
    double t = std::atan2(x.y(), x.x());
    if (t < 0.0) t += 2.0 * pi;
    return t;
  };
  p.u = [theta_of](const Vec2& x) {
    const double r = x.norm();
    if (r == 0.0) return 0.0;
    return std::pow(r, 5.0 / 3.0) * std::sin(5.0 * theta_of(x) / 3.0);
  };
  p.grad_u = [theta_of](const Vec2& x) {
    const double r = x.norm();
    if (r == 0.0) return Vec2(Vec2::Zero());
    const double t = theta_of(x);
    const double c = (5.0 / 3.0) * std::pow(r, 2.0 / 3.0);
    const Vec2 er = x / r;
    const Vec2 et(-er.y(), er.x());
    return Vec2(c * (std::sin(5.0 * t / 3.0) * er + std::cos(5.0 * t / 3.0) * et));
  };
  p.f = [](const Vec2&) { return 0.0; };
  p.gradient_singular = [](const Vec2& x) { return x.x() == 0.0 && x.y() == 0.0; };
  return p;
}

const std::vector<std::string>& problem_names() {
  static const std::vector<std::string> names{"ex1", "ex3", "ex4"};
  return names;
}

ManufacturedProblem problem_by_name(const std::string& name) {
  if (name == "ex1") return example1();
  if (name == "ex3") return example3();
  if (name == "ex4") return example4();
  std::string known;
  for (const auto& n : problem_names()) known += (known.empty() ? "" : ", ") + n;
  throw Error("unknown problem '" + name + "' (known: " + known + ")");
}

}  // namespace lsfem
