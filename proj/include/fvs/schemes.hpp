#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fvs/fit.hpp"
#include "fvs/operator.hpp"

namespace fvs {

struct SchemeOptions {
  WeightPolicy weights = WeightPolicy::inverse_distance;
  /// Rings of the quadratic fit for flux correction; 0 picks 2 in 2D and 1 in 1D.
  int fc_rings = 0;
};

struct SchemeInfo {
  std::string name;
  LayoutKind layout;
  ProjectionKind projection;
  int design_order;
  std::string description;
};

const std::vector<SchemeInfo>& scheme_registry();
/// Throws std::invalid_argument listing the known names.
const SchemeInfo& scheme_info(const std::string& name);

template <class T> std::shared_ptr<const ControlVolumeLayout<T>> make_layout(LayoutKind kind, const PeriodicMesh& mesh);

/// Assembles any registered scheme on a layout of the matching kind.
template <class T>
OperatorPair<T> assemble(const std::string& scheme, std::shared_ptr<const ControlVolumeLayout<T>> layout,
                         const HyperbolicSystem& sys, const SchemeOptions& opt = {});
/// Builds the layout the scheme needs, then assembles.
template <class T>
OperatorPair<T> assemble_on_mesh(const std::string& scheme, const PeriodicMesh& mesh, const HyperbolicSystem& sys,
                                 const SchemeOptions& opt = {});

template <class T>
OperatorPair<T> assemble_basic_fv(std::shared_ptr<const ControlVolumeLayout<T>> layout, const HyperbolicSystem& sys);

template <class T>
OperatorPair<T> assemble_poly_recon(std::shared_ptr<const ControlVolumeLayout<T>> layout, const HyperbolicSystem& sys,
                                    int degree, WeightPolicy weights);

template <class T>
OperatorPair<T> assemble_bbr3(std::shared_ptr<const ControlVolumeLayout<T>> layout, const HyperbolicSystem& sys);

enum class EdgeVariant { galerkin_central, gradient_upwind };
template <class T>
OperatorPair<T> assemble_edge_based(std::shared_ptr<const ControlVolumeLayout<T>> layout, const HyperbolicSystem& sys,
                                    EdgeVariant variant, WeightPolicy weights = WeightPolicy::inverse_distance);

enum class FcVariant { steady, divergence, extended_galerkin };
template <class T>
OperatorPair<T> assemble_fc(std::shared_ptr<const ControlVolumeLayout<T>> layout, const HyperbolicSystem& sys,
                            FcVariant variant, const SchemeOptions& opt = {});

/// 1D flux correction with the mass term ħ_j(h²_{j+1/2} + h²_{j−1/2})/24 (L du/dt).
template <class T>
OperatorPair<T> assemble_fc_1d_modified(std::shared_ptr<const ControlVolumeLayout<T>> layout, const HyperbolicSystem& sys);

/// BBR3 face value R_jk for face `face` of cell j, or the fallback u_j.
template <class T> struct Bbr3Face {
  Stencil<T> value;
  bool fallback = false;
  T t_plus{0}, t_minus{0};  ///< ray parameters of r⁺, r⁻ (r_jk at 0, r_j at 1)
};
template <class T> Bbr3Face<T> bbr3_face_value(const ControlVolumeLayout<T>& layout, int j, int face);

/// Elements sharing a vertex with element j, placed in the chart of j (j included).
std::vector<SiteRef> vertex_neighbors(const PeriodicMesh& mesh, int j);

/// s_jk[u] = u_j − (d/(4(d+2))) H_jk[u] from the quadratic-fit derivatives of j.
template <class T>
Stencil<T> fc_s_operator(const ControlVolumeLayout<T>& layout, int j, const Vec2<T>& edge, const DerivativeStencils<T>& der);

}  // namespace fvs
