#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lsfem/norms.hpp"
#include "lsfem/problems.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace lsfem;
using std::numbers::pi;

namespace {

Vec2 fd_gradient(const std::function<double(const Vec2&)>& f, const Vec2& x, double h = 1e-6) {
  return {(f({x.x() + h, x.y()}) - f({x.x() - h, x.y()})) / (2 * h),
          (f({x.x(), x.y() + h}) - f({x.x(), x.y() - h})) / (2 * h)};
}

double fd_laplacian(const std::function<double(const Vec2&)>& f, const Vec2& x, double h = 1e-4) {
  return (f({x.x() + h, x.y()}) + f({x.x() - h, x.y()}) + f({x.x(), x.y() + h}) +
          f({x.x(), x.y() - h}) - 4.0 * f(x)) /
         (h * h);
}

/// interior points of the problem's domain, away from boundaries
std::vector<Vec2> interior_points(const ManufacturedProblem& p, int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(0.05, 0.95);
  std::vector<Vec2> pts;
  while (static_cast<int>(pts.size()) < count) {
    Vec2 x(dist(rng), dist(rng));
    if (p.domain == Domain::LShape) {
      x = 2.0 * x - Vec2(1.0, 1.0);
      if (x.x() > -0.05 && x.y() < 0.05) continue;  // keep away from the corner arms
    }
    pts.push_back(x);
  }
  return pts;
}

/// constant-per-element vector field over a mesh
struct PiecewiseConstField {
  std::vector<Vec2> values;
  Vec2 value(int k, const Vec2&) const { return values[static_cast<std::size_t>(k)]; }
  double divergence(int, const Vec2&) const { return 0.0; }
};

struct ZeroScalarField {
  double value(int, const Vec2&) const { return 0.0; }
  Vec2 gradient(int, const Vec2&) const { return Vec2::Zero(); }
};

ManufacturedProblem zero_problem() {
  ManufacturedProblem p;
  p.name = "zero";
  p.u = [](const Vec2&) { return 0.0; };
  p.grad_u = [](const Vec2&) { return Vec2(Vec2::Zero()); };
  p.f = [](const Vec2&) { return 0.0; };
  return p;
}

}  // namespace

TEST_CASE("example 1: symmetry values and derived data") {
  const ManufacturedProblem p = example1();
  CHECK(p.u({0.25, 0.125}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p.f({0.25, 0.125}) == doctest::Approx(20.0 * pi * pi).epsilon(1e-13));
  for (double y : {0.0, 0.3, 0.77, 1.0}) CHECK(std::abs(p.u({0.0, y})) < 1e-14);
}

TEST_CASE("example 3: wave front values") {
  const ManufacturedProblem p = example3();
  // u = 0 on the circle r = r0 around (-0.05, -0.05)
  const Vec2 on_circle = Vec2(-0.05, -0.05) + 0.7 * Vec2(std::cos(0.3), std::sin(0.3));
  CHECK(std::abs(p.u(on_circle)) < 1e-14);
}

TEST_CASE("example 4: polar values, harmonic, singular gradient flag") {
  const ManufacturedProblem p = example4();
  CHECK(p.u({0.0, 1.0}) == doctest::Approx(0.5).epsilon(1e-13));  // r=1, theta=pi/2
  for (const Vec2& x : interior_points(p, 50, 11)) CHECK(p.f(x) == 0.0);
  CHECK(p.gradient_singular({0.0, 0.0}));
  CHECK_FALSE(p.gradient_singular({0.2, 0.1}));
  CHECK(p.grad_u({0.0, 0.0}).norm() == 0.0);
  // |grad u| ~ (5/3) r^(2/3) near the corner
  const double r = 1e-3;
  const Vec2 x(r * std::cos(2.0), r * std::sin(2.0));
  CHECK(p.grad_u(x).norm() ==
        doctest::Approx(5.0 / 3.0 * std::pow(r, 2.0 / 3.0)).epsilon(1e-10));
  CHECK((p.grad_u(x) - fd_gradient(p.u, x, 1e-9)).norm() < 1e-4);
}

TEST_CASE("every problem passes finite-difference consistency") {
  for (const std::string& name : problem_names()) {
    const ManufacturedProblem p = problem_by_name(name);
    for (const Vec2& x : interior_points(p, 100, 21)) {
      CHECK((p.grad_u(x) - fd_gradient(p.u, x)).norm() < 1e-5);
      CHECK(std::abs(-fd_laplacian(p.u, x) - p.f(x)) < 1e-3);
    }
  }
}

TEST_CASE("unknown problem name lists the alternatives") {
  CHECK_THROWS_WITH_AS(problem_by_name("nope"), doctest::Contains("ex1"), Error);
}

TEST_CASE("convergence_order: halved h, exact order 2") {
  const auto orders = convergence_order({0.1, 0.025}, {1.0, 0.5});
  REQUIRE(orders.size() == 1);
  CHECK(orders[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("convergence_order: the reference pair from published data") {
  const auto orders = convergence_order({1.1553, 0.33347}, {0.1, 0.05});
  CHECK(orders[0] == doctest::Approx(1.79).epsilon(0.005));
}

TEST_CASE("convergence_order: constant errors give order 0, zero gives NaN") {
  const auto flat = convergence_order({0.5, 0.5, 0.5}, {1.0, 0.5, 0.25});
  CHECK(flat[0] == 0.0);
  CHECK(flat[1] == 0.0);
  const auto with_zero = convergence_order({0.5, 0.0}, {1.0, 0.5});
  CHECK(std::isnan(with_zero[0]));
}

TEST_CASE("error norms of the zero error field vanish") {
  const Mesh mesh = build_structured_triangle_mesh(3);
  const ManufacturedProblem p = zero_problem();
  const PiecewiseConstField zero{std::vector<Vec2>(static_cast<std::size_t>(mesh.num_elements()),
                                                   Vec2::Zero())};
  const ErrorNorms flux = flux_errors(mesh, p, zero, 1, PenaltyMode::GlobalH, 0);
  CHECK(flux.l2 == 0.0);
  CHECK(flux.energy == 0.0);
  const ErrorNorms pres = pressure_errors(mesh, p, ZeroScalarField{}, 1, PenaltyMode::GlobalH, 0);
  CHECK(pres.l2 == 0.0);
  CHECK(pres.energy == 0.0);
}

TEST_CASE("flux energy norm of a one-element jump field matches hand quadrature") {
  const Mesh mesh = build_structured_triangle_mesh(1);
  // value (1, 0) on element 0 = triangle (0,0),(1,0),(1,1); zero on element 1
  PiecewiseConstField field{{Vec2(1.0, 0.0), Vec2(0.0, 0.0)}};
  const ErrorNorms norms = flux_errors(mesh, zero_problem(), field, 1, PenaltyMode::GlobalH, 0);
  const double h = std::sqrt(2.0);
  // interior diagonal: jump (1,0), length sqrt(2); boundary of element 0:
  // bottom edge n=(0,-1): (e x n)^2 = 1, length 1; right edge n=(1,0): 0
  const double expected = (1.0 / h) * (std::sqrt(2.0) * 1.0 + 1.0);
  CHECK(norms.energy * norms.energy == doctest::Approx(expected).epsilon(1e-12));
  // L2 norm: |(1,0)|^2 over element 0 of area 1/2
  CHECK(norms.l2 * norms.l2 == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("norms are absolutely homogeneous") {
  const Mesh mesh = build_structured_triangle_mesh(2);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  PiecewiseConstField field{{}};
  for (int k = 0; k < mesh.num_elements(); ++k) field.values.push_back({dist(rng), dist(rng)});
  PiecewiseConstField scaled = field;
  const double s = -3.7;
  for (Vec2& v : scaled.values) v *= s;
  const ManufacturedProblem p = zero_problem();
  const ErrorNorms n1 = flux_errors(mesh, p, field, 1, PenaltyMode::GlobalH, 0);
  const ErrorNorms n2 = flux_errors(mesh, p, scaled, 1, PenaltyMode::GlobalH, 0);
  CHECK(n2.l2 == doctest::Approx(std::abs(s) * n1.l2).epsilon(1e-12));
  CHECK(n2.energy == doctest::Approx(std::abs(s) * n1.energy).epsilon(1e-12));
  const double d1 = dls_flux_error_norm(mesh, p, field, 1, 0);
  const double d2 = dls_flux_error_norm(mesh, p, scaled, 1, 0);
  CHECK(d2 == doctest::Approx(std::abs(s) * d1).epsilon(1e-12));
}

TEST_CASE("smooth compatible field has no jump or boundary energy contributions") {
  // q = grad u sampled exactly: the energy norm of the error of q == grad u
  // itself is zero up to quadrature error
  const Mesh mesh = build_structured_triangle_mesh(2);
  const ManufacturedProblem p = example1();
  struct ExactField {
    const ManufacturedProblem* p;
    Vec2 value(int, const Vec2& x) const { return p->grad_u(x); }
    double divergence(int, const Vec2& x) const { return -p->f(x); }
  };
  const ErrorNorms norms = flux_errors(mesh, p, ExactField{&p}, 3);
  CHECK(norms.l2 < 1e-12);
  CHECK(norms.energy < 1e-12);
}
