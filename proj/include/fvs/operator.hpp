#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fvs/projection.hpp"
#include "fvs/stencil.hpp"
#include "fvs/system.hpp"

namespace fvs {

/// Numerical flux through one face, stored once per pair of neighbors:
/// F_jk = plus·left[u] + minus·right[u], both stencils in the chart of j.
/// Row j gains F_jk/|K_j| and row k loses it (F_kj = −F_jk).
template <class T> struct FluxFace {
  int j = 0, face = 0;
  int k = 0, reverse = 0;
  Shift shift{0, 0};
  Vec2<T> normal{};
  Stencil<T> left, right;
  Block<T> plus, minus;
};

/// Semidiscrete scheme M du/dt + A u = 0 over one period.
template <class T> struct OperatorPair {
  std::string scheme;
  int design_order = 0;
  ProjectionKind projection = ProjectionKind::pointwise;
  int n = 1;
  std::shared_ptr<const ControlVolumeLayout<T>> layout;

  std::vector<FluxFace<T>> faces;
  std::vector<std::vector<int>> faces_of;  ///< flux faces touching each DOF

  /// M acts componentwise; mass[j] is row j in the chart of j (empty when M = I).
  bool identity_mass = true;
  std::vector<Stencil<T>> mass;

  int fallback_count = 0;    ///< BBR3 faces that fell back to R_jk = u_j
  double mass_defect = 0.0;  ///< max_j |Σ_k m_jk − 1|
  std::vector<std::string> notes;

  int dofs() const { return layout->size(); }
  int size() const { return dofs() * n; }
};

/// Value of u at a site of the infinite mesh (all n components).
template <class T> using SiteValues = std::function<std::vector<T>(const SiteRef&)>;

template <class T> std::vector<T> face_flux(const FluxFace<T>& f, const SiteValues<T>& u);

/// (A u)_j for every DOF of one period; u need not be periodic (polynomials).
template <class T> MeshField<T> apply_A(const OperatorPair<T>& pair, const SiteValues<T>& u);
template <class T> MeshField<T> apply_M(const OperatorPair<T>& pair, const SiteValues<T>& u);
/// Periodic fields.
template <class T> MeshField<T> apply_A(const OperatorPair<T>& pair, const MeshField<T>& u);
template <class T> MeshField<T> apply_M(const OperatorPair<T>& pair, const MeshField<T>& u);

/// a_jk blocks of row j, keyed by site in the chart of j.
template <class T> std::vector<std::pair<SiteRef, Block<T>>> row_blocks(const OperatorPair<T>& pair, int j);

/// A on periodic fields as an (N·n)×(N·n) sparse matrix.
template <class T> Eigen::SparseMatrix<double> sparse_A(const OperatorPair<T>& pair);
/// Scalar N×N mass matrix (M = this ⊗ I_n).
template <class T> Eigen::SparseMatrix<double> sparse_mass(const OperatorPair<T>& pair);

/// Ă: A restricted to fields with the period of the pattern (L·n square), in the
/// coordinates of the pattern DOFs.
template <class T> Eigen::MatrixXd restricted_A(const OperatorPair<T>& pair);
/// Exact Ă (as rationals or doubles) for the zero tests of the exact path.
template <class T> std::vector<std::vector<T>> restricted_A_exact(const OperatorPair<T>& pair);

/// max over faces and random periodic fields of |F_jk + F_kj|, where F_kj is
/// recomputed from the split of A·n_kj.
double flux_antisymmetry_defect(const OperatorPair<double>& pair, const HyperbolicSystem& sys, int samples,
                                std::uint64_t seed);

/// Σ_j |K_j| (A u)_j per component.
template <class T> std::vector<T> conservation_sum(const OperatorPair<T>& pair, const MeshField<T>& u);

/// Coordinate-format dump of A and M ("A row col value" lines, 0-based).
template <class T> std::string export_coordinate(const OperatorPair<T>& pair);

/// Completes faces_of from faces.
template <class T> void index_faces(OperatorPair<T>& pair);

}  // namespace fvs
