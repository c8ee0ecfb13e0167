#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fvs/polynomial.hpp"

namespace fvs {

/// Small dense n×n block, row-major.
template <class T> struct Block {
  int n = 0;
  std::vector<T> a;

  Block() = default;
  explicit Block(int size) : n(size), a(static_cast<std::size_t>(size) * size, T(0)) {}
  static Block identity(int size);

  T& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  const T& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
  bool is_zero() const;
  Block scaled(const T& s) const;
  Block operator+(const Block& o) const;
  Block operator-(const Block& o) const;
  std::vector<T> apply(const std::vector<T>& v) const;
};

Eigen::MatrixXd to_eigen(const Block<double>& b);
Block<double> from_eigen(const Eigen::MatrixXd& m);

enum class SystemKind { transport, linearized_euler, generic };

/// ∂w/∂t + Σ_a A_a ∂w/∂x_a = 0 with constant n×n matrices.
class HyperbolicSystem {
 public:
  HyperbolicSystem(int dim, std::vector<Eigen::MatrixXd> matrices, SystemKind kind = SystemKind::generic,
                   std::string name = "generic");

  int n() const { return n_; }
  int dim() const { return dim_; }
  SystemKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const Eigen::MatrixXd& matrix(int axis) const { return A_[axis]; }
  /// Advection velocity for transport, mean flow for linearized Euler.
  Vec2<double> velocity() const { return velocity_; }

  Eigen::MatrixXd directional(const Vec2<double>& dir) const;
  /// Matrices with entries recovered as short rationals (for the exact path).
  const std::vector<Block<Rational>>& exact_matrices() const { return exact_; }
  /// True when every A_a is diagonal so |A·n| stays rational.
  bool exact_upwind_available() const;

  /// sup over unit e of ‖A·e‖₂ (estimate: direction sampling plus golden-section refinement).
  double norm_estimate() const;
  /// sup over unit e of the spectral radius of A·e.
  double max_wave_speed() const;

  /// g = A·∇f.
  template <class T> MultiPolynomial<T> apply_to_gradient(const MultiPolynomial<T>& f) const;

  /// Upwind splitting P± = (A·n ± |A·n|)/2.
  template <class T> std::pair<Block<T>, Block<T>> upwind_split(const Vec2<T>& normal) const;
  template <class T> Block<T> directional_block(const Vec2<T>& normal) const;

 private:
  friend HyperbolicSystem transport(const std::vector<double>& velocity);
  friend HyperbolicSystem linearized_euler(const Vec2<double>& mean_velocity, double gamma);

  int dim_, n_;
  std::vector<Eigen::MatrixXd> A_;
  std::vector<Block<Rational>> exact_;
  SystemKind kind_;
  std::string name_;
  Vec2<double> velocity_{0.0, 0.0};
};

/// Scalar transport ∂w/∂t + ω·∇w = 0; the dimension is velocity.size().
HyperbolicSystem transport(const std::vector<double>& velocity);
/// Acoustics linearized on a uniform state ρ̄ = 1, p̄ = 1/γ (sound speed 1), w = (ρ', u', v', p').
HyperbolicSystem linearized_euler(const Vec2<double>& mean_velocity, double gamma = 1.4);

struct Eigendecomposition {
  Eigen::MatrixXd S, S_inv;
  Eigen::VectorXd lambda;
  Eigen::MatrixXd abs_matrix() const;  ///< S |Λ| S⁻¹
};

/// Real diagonalization of A·n; throws std::runtime_error on complex or defective spectra.
Eigendecomposition flux_jacobian_decomposition(const HyperbolicSystem& sys, const Vec2<double>& normal);
/// Closed-form eigenvectors for transport and linearized Euler (cross-check of the numeric path).
Eigendecomposition analytic_decomposition(const HyperbolicSystem& sys, const Vec2<double>& normal);

Eigen::VectorXd upwind_face_flux(const HyperbolicSystem& sys, const Vec2<double>& normal, const Eigen::VectorXd& left,
                                 const Eigen::VectorXd& right);

}  // namespace fvs
