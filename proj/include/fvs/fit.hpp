#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fvs/stencil.hpp"

namespace fvs {

enum class WeightPolicy { inverse_distance, uniform };

std::string weight_policy_name(WeightPolicy w);
WeightPolicy parse_weight_policy(const std::string& s);

/// Weighted least squares: returns G (unknowns × rows) with c = G·b minimizing
/// Σ w_i (B_i·c − b_i)², or nothing when B has deficient column rank.
template <class T>
std::optional<std::vector<std::vector<T>>> weighted_least_squares(const std::vector<std::vector<T>>& rows,
                                                                  const std::vector<T>& weights);

/// Derivative operators at a DOF from a point-value fit of degree 2 (or 1 for
/// the gradient-only fit) with exact interpolation at the center.
template <class T> struct DerivativeStencils {
  int rings = 0;
  Stencil<T> dx, dy, dxx, dxy, dyy;
};

/// 2-exact operators from a quadratic fit on the `rings`-ring (grown on rank
/// deficiency). Throws naming the DOF when no ring up to 6 works.
template <class T>
DerivativeStencils<T> quadratic_fit(const ControlVolumeLayout<T>& layout, int j, int rings, WeightPolicy weights);

/// 1-exact gradient from a linear fit on the 1-ring (only dx, dy filled).
template <class T> DerivativeStencils<T> linear_gradient_fit(const ControlVolumeLayout<T>& layout, int j, WeightPolicy weights);

/// Cell-average reconstruction p_j = u_j + Σ_m c_m[u] φ_m with zero-mean basis
/// φ_m(r) = ξ^m − avg_{K_j} ξ^m, ξ = (r − r_j)/scale.
template <class T> struct CellReconstruction {
  int rings = 0;
  T scale{1};
  std::vector<std::pair<int, int>> monomials;
  std::vector<T> mean_on_cell;       ///< avg_{K_j} ξ^m
  std::vector<Stencil<T>> coefficient;  ///< c_m as functionals of u
  std::size_t stencil_size = 0;
};

template <class T>
CellReconstruction<T> cell_average_reconstruction(const ControlVolumeLayout<T>& layout, int j, int degree,
                                                  WeightPolicy weights);

/// Face average of p_j over the face `face` of K_j, as a functional of u.
template <class T>
Stencil<T> reconstruction_face_value(const ControlVolumeLayout<T>& layout, int j, const CellReconstruction<T>& rec, int face);

}  // namespace fvs
