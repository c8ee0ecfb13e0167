#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fvs/schemes.hpp"

namespace fvs {

/// du/dt = −M⁻¹ A u with M factorized once.
class SemidiscreteSystem {
 public:
  explicit SemidiscreteSystem(const OperatorPair<double>& pair);

  int size() const { return static_cast<int>(A_.rows()); }
  Eigen::VectorXd rhs(const Eigen::VectorXd& u) const;
  Eigen::VectorXd rk4_step(const Eigen::VectorXd& u, double dt) const;

 private:
  Eigen::SparseMatrix<double, Eigen::RowMajor> A_;
  std::shared_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> lu_;
  int n_ = 1, dofs_ = 0;
};

/// cfl · h_min / (max wave speed).
double stable_time_step(const OperatorPair<double>& pair, const HyperbolicSystem& sys, double cfl);

struct IntegrationResult {
  MeshField<double> u;
  int steps = 0;
};
/// Classical RK4 up to T; the last step is shortened to land on T. Throws when
/// ‖u‖ exceeds 1e6 ‖u0‖.
IntegrationResult integrate(const OperatorPair<double>& pair, const MeshField<double>& u0, double T, double dt);

struct CaseSpec {
  std::string system = "transport";  ///< "transport" or "lee"
  Vec2<double> velocity{1.0, 0.0};   ///< transport velocity, or the mean flow ū for "lee"
  std::string initial = "sine";      ///< "sine", "vortex" or "constant"
  double final_time = 1.0;
  double cfl = 0.3;
  double sigma = 0.07;               ///< vortex width
  double dt = 0.0;                   ///< fixed step; 0 selects it from the CFL number
};

HyperbolicSystem make_system(const CaseSpec& c, int dim);
/// w(t, ·) of the case; periodic with unit period.
VectorFunction exact_solution(const CaseSpec& c, int dim, double t);

struct CaseResult {
  double error = 0.0;  ///< ‖u(T) − Π w(T)‖
  double dt = 0.0;
  int steps = 0;
  double conservation_drift = 0.0;  ///< relative change of Σ_j |K_j| (M u)_j
};
CaseResult run_case(const CaseSpec& c, const OperatorPair<double>& pair, const HyperbolicSystem& sys, double dt);

/// Refinement family: regular triangular meshes by step, or replicas of a pattern.
struct MeshFamily {
  std::string kind;  ///< "ti-triangular" or "replicate"
  std::vector<int> steps_per_unit;  ///< ti-triangular: h = 1/m, m a multiple of 5
  PeriodicMesh pattern;
  std::vector<int> copies;

  std::size_t levels() const;
  PeriodicMesh level(std::size_t i) const;
  double nominal_h(std::size_t i) const;
};
/// e1 = (h, 0), e2 = (h/2, 5h/6) with h = 1/m on the unit square.
MeshFamily ti_family(std::vector<int> steps_per_unit);
MeshFamily replicate_family(const PeriodicMesh& pattern, std::vector<int> copies);

struct ConvergenceLevel {
  double h = 0.0;
  int dofs = 0;
  double error = 0.0;
  double order = 0.0;  ///< against the previous level (0 on the first)
  double dt = 0.0;
  int steps = 0;
  double seconds = 0.0;
};
struct ConvergenceStudy {
  std::string scheme;
  std::vector<ConvergenceLevel> levels;
  std::string failure;  ///< set when a level aborted; earlier levels are kept
};
/// dt = min(CFL step, h^{(p+1)/4}) with p the design order of the scheme.
/// `on_level` sees the study after every finished or aborted level.
ConvergenceStudy convergence_study(const CaseSpec& c, const std::string& scheme, const MeshFamily& family,
                                   const SchemeOptions& opt = {},
                                   const std::function<void(const ConvergenceStudy&)>& on_level = {});
std::string study_csv(const ConvergenceStudy& s);
std::string study_markdown(const ConvergenceStudy& s, const std::string& title);

struct FullyDiscreteResult {
  double h_max = 0.0, tau = 0.0;
  int steps = 0;
  double max_error = 0.0;
  double worst_bound_ratio = 0.0;  ///< max_n error_n / bound_n
  bool bound_holds = true;
  std::vector<double> times, errors, bounds;
};
/// Explicit Euler upwind on dual cells, u_j ← u_j − τ/ħ_j (u_j − u_{j−1}), for
/// w_t + w_x = 0 with w0 = sin 2πx.
FullyDiscreteResult fully_discrete_upwind(const PeriodicMesh& mesh, double T, double tau);

}  // namespace fvs
