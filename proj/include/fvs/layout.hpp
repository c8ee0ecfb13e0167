#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fvs/mesh.hpp"

namespace fvs {

enum class LayoutKind { cell, median_dual };

std::string layout_name(LayoutKind k);

/// Face of K_j shared with K_k, where k is taken translated by `shift` periods.
template <class T> struct LayoutFace {
  int k = 0;
  Shift shift{0, 0};
  Vec2<T> normal{};   ///< integral of the unit normal pointing into K_k
  Vec2<T> p0{}, p1{}; ///< face segment end points in the chart of j (cell layout; p0 == p1 in 1D)
  Vec2<double> centroid{};
  double measure = 0.0;
};

/// Stencil member identified on the infinite mesh: DOF index plus lattice shift.
struct SiteRef {
  int dof = 0;
  Shift shift{0, 0};
  bool operator<(const SiteRef& o) const {
    if (dof != o.dof) return dof < o.dof;
    return shift < o.shift;
  }
  bool operator==(const SiteRef& o) const { return dof == o.dof && shift == o.shift; }
};

template <class T> struct ControlVolumeLayout {
  LayoutKind kind = LayoutKind::cell;
  int dim = 1;
  Vec2<T> period{};
  std::vector<T> volume;
  std::vector<Vec2<T>> point;
  std::vector<std::vector<LayoutFace<T>>> faces;
  std::vector<int> dof_class;
  int copies = 1;
  double h_max = 0.0, h_min = 0.0;
  std::shared_ptr<const PeriodicMesh> mesh;
  /// Median dual only: (element, local vertex) pairs incident to each node.
  std::vector<std::vector<std::pair<int, int>>> incident;

  int size() const { return static_cast<int>(volume.size()); }
  int pattern_size() const;
  Vec2<T> position(int dof, const Shift& s) const {
    return {point[dof][0] + s[0] * period[0], point[dof][1] + s[1] * period[1]};
  }
  Vec2<T> offset(int j, const SiteRef& site) const { return position(site.dof, site.shift) - point[j]; }
  /// Index in faces[k] of the face pointing back to (j, -shift); throws if absent.
  int reverse_face(int j, const LayoutFace<T>& f) const;
  /// Sites reachable from j within `rings` face-adjacency steps (j itself first).
  std::vector<SiteRef> ring_sites(int j, int rings) const;
  /// Control volume K_j as counterclockwise polygons in the chart of j (2D), or
  /// as one interval stored in two points (1D).
  std::vector<std::vector<Vec2<T>>> cell_pieces(int j) const;
};

template <class T> ControlVolumeLayout<T> cell_layout(const PeriodicMesh& mesh);
template <class T> ControlVolumeLayout<T> median_dual_layout(const PeriodicMesh& mesh);

/// Face normals of the median-dual layout obtained by integrating the unit normal
/// along the explicit median polylines; same ordering as layout.faces.
std::vector<std::vector<Vec2<double>>> median_dual_normals_geometric(const ControlVolumeLayout<double>& layout);

/// Element-wise contribution n_{jk,e} from the barycentric formula, for vertices a, b of element e.
template <class T> Vec2<T> element_face_normal(const PeriodicMesh& mesh, int element, int a, int b);

/// The same contribution by integrating along the median segments inside e.
Vec2<double> element_face_normal_geometric(const PeriodicMesh& mesh, int element, int a, int b);

}  // namespace fvs
