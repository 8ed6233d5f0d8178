#pragma once

#include "lsfem/irrotational.hpp"
#include "lsfem/patch.hpp"

#include <Eigen/Dense>

namespace lsfem {

/// Collocation matrix of the local least-squares fit: one (x, y) row pair
/// per sampling point, one column per basis field. Points are given in the
/// basis' local coordinates.
Eigen::MatrixXd collocation_matrix(const IrrotationalBasis& basis,
                                   const std::vector<Vec2>& local_points);

enum class Unisolvence { Ok, RankDeficient };

/// Sampling nodes determine the fit uniquely iff the collocation matrix is
/// far from rank deficiency: sigma_min / sigma_max > 1e-10.
Unisolvence check_unisolvence(const Eigen::MatrixXd& a);

/// Per-element pseudo-inverse maps from patch sampling values to the
/// coefficients of the local curl-free polynomial.
struct ReconstructionOperator {
  int degree = 0;
  IrrotationalBasis basis;
  std::vector<ElementPatch> patches;           // per element
  std::vector<LocalFrame> frames;              // per element
  std::vector<Eigen::MatrixXd> coefficient_maps;  // per element, n_b x (2 #S)

  const Mesh* mesh = nullptr;

  int num_elements() const { return static_cast<int>(patches.size()); }
  /// Gathers the (x, y) sample pairs of the element's patch members from a
  /// global sample vector (layout: 2K, 2K + 1).
  Eigen::VectorXd gather_patch_samples(int element, const Eigen::VectorXd& samples) const;
};

/// Builds patches and factorizes the least-squares systems. Rank-deficient
/// patches are regrown with target size + 2, up to 5 retries; failure after
/// that names the element. target_size <= 0 selects default_patch_size(m).
ReconstructionOperator build_reconstruction(const Mesh& mesh, int m, int target_size = 0);

/// Piecewise polynomial produced by applying the reconstruction operator to
/// per-element sampling values; restriction to K is the patch fit of K.
struct ReconstructedField {
  const ReconstructionOperator* op = nullptr;
  Eigen::MatrixXd coefficients;  // n_b x n_elements

  Vec2 value(int element, const Vec2& x) const;
  double divergence(int element, const Vec2& x) const;
};

ReconstructedField reconstruct_field(const ReconstructionOperator& op,
                                     const Eigen::VectorXd& samples);

/// Samples a continuous vector field at every sampling node (barycenter).
template <class F>
Eigen::VectorXd sample_vector_field(const Mesh& mesh, F&& field) {
  Eigen::VectorXd samples(2 * mesh.num_elements());
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const Vec2 v = field(barycenter(mesh, k));
    samples[2 * k] = v.x();
    samples[2 * k + 1] = v.y();
  }
  return samples;
}

/// Sampled lower bound of the patch stability constant: the ratio of a
/// polynomial's max over a lattice covering the patch to its max over the
/// sampling nodes, maximized over random unit-coefficient scalar
/// polynomials of degree m. Diagnostic only.
double estimate_lambda(const Mesh& mesh, const ElementPatch& patch, int m, int n_random = 200,
                       unsigned seed = 0x5eed);

}  // namespace lsfem
