#include "lsfem/reconstruction.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <random>

namespace lsfem {

Eigen::MatrixXd collocation_matrix(const IrrotationalBasis& basis,
                                   const std::vector<Vec2>& local_points) {
  require(!local_points.empty(), "collocation_matrix: empty point set");
  Eigen::MatrixXd a(2 * static_cast<int>(local_points.size()), basis.size());
  for (int i = 0; i < static_cast<int>(local_points.size()); ++i)
    a.middleRows<2>(2 * i) = basis.values_at(local_points[static_cast<std::size_t>(i)]);
  return a;
}

Unisolvence check_unisolvence(const Eigen::MatrixXd& a) {
  if (a.rows() < a.cols()) return Unisolvence::RankDeficient;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return Unisolvence::RankDeficient;
  return sv(sv.size() - 1) / sv(0) > 1e-10 ? Unisolvence::Ok : Unisolvence::RankDeficient;
}

namespace {

std::vector<Vec2> to_local(const std::vector<Vec2>& points, const LocalFrame& frame) {
  std::vector<Vec2> local;
  local.reserve(points.size());
  for (const Vec2& p : points) local.push_back(frame.to_local(p));
  return local;
}

}  // namespace

Eigen::VectorXd ReconstructionOperator::gather_patch_samples(int element,
                                                             const Eigen::VectorXd& samples) const {
  const ElementPatch& patch = patches[static_cast<std::size_t>(element)];
  Eigen::VectorXd g(2 * patch.size());
  for (int i = 0; i < patch.size(); ++i) {
    const int k = patch.members[static_cast<std::size_t>(i)];
    g[2 * i] = samples[2 * k];
    g[2 * i + 1] = samples[2 * k + 1];
  }
  return g;
}

ReconstructionOperator build_reconstruction(const Mesh& mesh, int m, int target_size) {
  if (target_size <= 0) target_size = default_patch_size(m);
  ReconstructionOperator op;
  op.degree = m;
  op.basis = IrrotationalBasis::build(m);
  op.mesh = &mesh;
  const int n_el = mesh.num_elements();
  op.patches.resize(static_cast<std::size_t>(n_el));
  op.frames.resize(static_cast<std::size_t>(n_el));
  op.coefficient_maps.resize(static_cast<std::size_t>(n_el));

  std::vector<std::string> failures(static_cast<std::size_t>(n_el));
  parallel_for(n_el, [&](int k) {
    const LocalFrame frame{barycenter(mesh, k), mesh.element_diameters[static_cast<std::size_t>(k)]};
    int size = target_size;
    for (int attempt = 0;; ++attempt) {
      ElementPatch patch = build_patch(mesh, k, size);
      const Eigen::MatrixXd a = collocation_matrix(op.basis, to_local(patch.sampling_nodes, frame));
      if (check_unisolvence(a) == Unisolvence::Ok) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
        op.coefficient_maps[static_cast<std::size_t>(k)] =
            svd.matrixV() * svd.singularValues().cwiseInverse().asDiagonal() *
            svd.matrixU().transpose();
        op.patches[static_cast<std::size_t>(k)] = std::move(patch);
        op.frames[static_cast<std::size_t>(k)] = frame;
        return;
      }
      if (attempt >= 5) {
        failures[static_cast<std::size_t>(k)] =
            "build_reconstruction: element " + std::to_string(k) +
            " has no unisolvent patch after retries (last size " + std::to_string(size) + ")";
        return;
      }
      size += 2;
    }
  });
  for (const auto& msg : failures)
    if (!msg.empty()) throw Error(msg);
  return op;
}

Vec2 ReconstructedField::value(int element, const Vec2& x) const {
  const Vec2 local = op->frames[static_cast<std::size_t>(element)].to_local(x);
  return op->basis.values_at(local) * coefficients.col(element);
}

double ReconstructedField::divergence(int element, const Vec2& x) const {
  const LocalFrame& frame = op->frames[static_cast<std::size_t>(element)];
  return op->basis.divergences_at(frame.to_local(x)).dot(coefficients.col(element)) / frame.scale;
}

ReconstructedField reconstruct_field(const ReconstructionOperator& op,
                                     const Eigen::VectorXd& samples) {
  require(samples.size() == 2 * op.num_elements(),
          "reconstruct_field: expected one 2-vector per element");
  ReconstructedField field;
  field.op = &op;
  field.coefficients.resize(op.basis.size(), op.num_elements());
  for (int k = 0; k < op.num_elements(); ++k)
    field.coefficients.col(k) =
        op.coefficient_maps[static_cast<std::size_t>(k)] * op.gather_patch_samples(k, samples);
  return field;
}

double estimate_lambda(const Mesh& mesh, const ElementPatch& patch, int m, int n_random,
                       unsigned seed) {
  require(m >= 0, "estimate_lambda: m must be >= 0");
  const LocalFrame frame{barycenter(mesh, patch.owner),
                         mesh.element_diameters[static_cast<std::size_t>(patch.owner)]};

  // lattice covering the patch: barycentric grid on each fan sub-triangle
  std::vector<Vec2> lattice;
  constexpr int kGrid = 4;
  for (int member : patch.members) {
    const auto verts = mesh.element_vertices(member);
    const Vec2 c = barycenter(mesh, member);
    for (std::size_t i = 0; i < verts.size(); ++i) {
      const Vec2& a = verts[i];
      const Vec2& b = verts[(i + 1) % verts.size()];
      for (int p = 0; p <= kGrid; ++p)
        for (int q = 0; q <= kGrid - p; ++q) {
          const double l1 = static_cast<double>(p) / kGrid;
          const double l2 = static_cast<double>(q) / kGrid;
          lattice.push_back(frame.to_local(c + l1 * (a - c) + l2 * (b - c)));
        }
    }
  }
  std::vector<Vec2> nodes = patch.sampling_nodes;
  for (Vec2& p : nodes) p = frame.to_local(p);

  const int dim = Poly2::dim(m);
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double lambda = 0.0;
  for (int trial = 0; trial < n_random; ++trial) {
    Eigen::VectorXd coeff(dim);
    for (int i = 0; i < dim; ++i) coeff[i] = gauss(rng);
    coeff.normalize();
    Poly2 v(m);
    int idx = 0;
    for (int k = 0; k <= m; ++k)
      for (int b = 0; b <= k; ++b) v.at(k - b, b) = coeff[idx++];
    double max_patch = 0.0, max_nodes = 0.0;
    for (const Vec2& p : lattice) max_patch = std::max(max_patch, std::abs(v.eval(p)));
    for (const Vec2& p : nodes) max_nodes = std::max(max_nodes, std::abs(v.eval(p)));
    if (max_nodes > 0.0) lambda = std::max(lambda, max_patch / max_nodes);
  }
  return lambda;
}

}  // namespace lsfem
