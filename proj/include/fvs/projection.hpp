#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fvs/layout.hpp"
#include "fvs/polynomial.hpp"

namespace fvs {

enum class ProjectionKind { pointwise, cell_average };

std::string projection_name(ProjectionKind k);
ProjectionKind parse_projection(const std::string& s);

/// n-component values on the DOFs of one period, stored DOF-major (j·n + α).
template <class T> using MeshField = std::vector<T>;

/// Π f on the sites of the infinite mesh. Polynomials are not periodic, so the
/// value at (dof, shift) is that of the translated polynomial.
template <class T> class PolynomialProjector {
 public:
  PolynomialProjector(const ControlVolumeLayout<T>& layout, ProjectionKind kind, const MultiPolynomial<T>& f);

  /// Values of all components at a site.
  const std::vector<T>& at(const SiteRef& site);
  /// Π f on one period (sites with zero shift).
  MeshField<T> field();

 private:
  const ControlVolumeLayout<T>& layout_;
  ProjectionKind kind_;
  MultiPolynomial<T> f_;
  std::map<SiteRef, std::vector<T>> cache_;
};

template <class T>
MeshField<T> project(const ControlVolumeLayout<T>& layout, ProjectionKind kind, const MultiPolynomial<T>& f);

/// Average of a polynomial over K_j translated by `shift` periods (exact).
template <class T> T cell_average(const ControlVolumeLayout<T>& layout, int j, const Shift& shift, const Polynomial<T>& f);

/// Π of a general (periodic) function; cell averages use a tensor Gauss rule
/// with `points` nodes per direction on each simplex piece.
using VectorFunction = std::function<std::vector<double>(const Vec2<double>&)>;
MeshField<double> project_function(const ControlVolumeLayout<double>& layout, ProjectionKind kind, const VectorFunction& f,
                                   int n, int points = 6);

/// ‖g‖² = Σ_j |K_j| ‖g_j‖².
double weighted_norm(const ControlVolumeLayout<double>& layout, const MeshField<double>& g, int n);
/// Σ_j |K_j| g_j per component.
template <class T> std::vector<T> weighted_sum(const ControlVolumeLayout<T>& layout, const MeshField<T>& g, int n);

}  // namespace fvs
