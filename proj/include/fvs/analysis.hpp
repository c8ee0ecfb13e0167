#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fvs/operator.hpp"

namespace fvs {

/// ε = −M Π(A·∇f) + A Π f on one period.
template <class T> struct TruncationReport {
  MeshField<T> eps;
  std::vector<T> mean;  ///< Σ_j |K_j| ε_j per component, over the period volume
  double norm = 0.0;    ///< ‖ε‖ in the volume-weighted norm
  double max_abs = 0.0;
  double scale = 1.0;   ///< ‖A‖ · max |D f| over the DOF points (at least ‖A‖)
  std::string polynomial;
};

template <class T>
TruncationReport<T> truncation_error(const OperatorPair<T>& pair, const HyperbolicSystem& sys, const MultiPolynomial<T>& f);

/// Monomial i_α x^a y^b of exact total degree, one entry per component.
struct BasisMonomial {
  int component = 0;
  int px = 0, py = 0;
  std::string name() const;
};
std::vector<BasisMonomial> monomial_basis(int dim, int n, int degree);
/// i_α r^m (or r^m/m! when `factorial` is set).
template <class T> MultiPolynomial<T> basis_polynomial(const BasisMonomial& b, int n, bool factorial = false);

/// Zero test: exact on the rational path, |x| ≤ 1e-11·scale in floating point.
template <class T> bool negligible(const T& x, double scale);

struct ExactnessResult {
  int order = -1;                   ///< largest p with ε = 0 on all of P_p
  std::vector<double> worst;        ///< max |ε|/scale per degree tested
  std::string first_failure;
};
template <class T> ExactnessResult exactness_order(const OperatorPair<T>& pair, const HyperbolicSystem& sys, int p_max);

struct ZeroMeanResult {
  bool zero_mean = true;
  double worst = 0.0;  ///< max |ε̄|/scale over the degree-(p+1) basis
  std::string worst_monomial;
  std::vector<std::pair<std::string, double>> means;  ///< (monomial, ε̄) per basis element and component
};
template <class T> ZeroMeanResult zero_mean_check(const OperatorPair<T>& pair, const HyperbolicSystem& sys, int p);

/// Singular value decomposition of W^{1/2} (hĂ) W^{-1/2}, Ă = A restricted to V_per^L.
struct RestrictedSpectrum {
  double h = 0.0;
  double reference = 0.0;  ///< h · max absolute row sum of A (sets the zero threshold when Ă ≈ 0)
  double threshold = 0.0;
  Eigen::VectorXd sigma;
  Eigen::MatrixXd U, V;
  Eigen::VectorXd sqrt_volume;  ///< W^{1/2} diagonal, DOF-major on the pattern
  int rank = 0;
};
template <class T> RestrictedSpectrum restricted_spectrum(const OperatorPair<T>& pair);

struct CaResult {
  bool degenerate = false;
  double value = 0.0;
  double sigma_min_positive = 0.0, sigma_max = 0.0;
};
CaResult compute_CA(const RestrictedSpectrum& s);
template <class T> CaResult compute_CA(const OperatorPair<T>& pair) { return compute_CA(restricted_spectrum(pair)); }

struct KernelResult {
  int dimension = 0;
  bool constant = true;
  bool holds = false;  ///< dimension = n and every kernel vector is componentwise constant
  double worst_variation = 0.0;
};
KernelResult kernel_check(const RestrictedSpectrum& s, int n);
template <class T> KernelResult kernel_check(const OperatorPair<T>& pair) { return kernel_check(restricted_spectrum(pair), pair.n); }

struct MembershipResult {
  double residual = 0.0;  ///< min ‖Ăx − ε‖/‖ε‖ in the weighted norm
  bool member = true;
};
/// ε must be periodic with the pattern (true for degree-(p+1) data of a p-exact scheme).
template <class T>
MembershipResult image_membership(const OperatorPair<T>& pair, const RestrictedSpectrum& s, const MeshField<T>& eps);

struct SchemeConstants {
  int p = 0;
  double h = 0.0;
  double C_W = 0, C_m = 0, C_a = 0, C_v = 0, C_a_tilde = 0, C_eps = 0;
  double C_A = 0;
  bool C_A_degenerate = false;
  double norm_A = 0, c_p = 0, C_Pi = 0, norm_M_inv = 0, C_E = 0;
  int max_stencil = 0, max_column = 0;
};
/// Constants with respect to the measured exactness p.
template <class T> SchemeConstants scheme_constants(const OperatorPair<T>& pair, const HyperbolicSystem& sys, int p);

/// (p+d)!/((p+1)!(d−1)!), the number of monomials of degree p+1 in d variables.
double monomial_count(int p, int d);

/// ‖M⁻¹‖ in the weighted norm by power iteration on the factorized M.
double mass_inverse_norm(const OperatorPair<double>& pair, int iterations = 300);

struct StabilityReport {
  std::string method;  ///< "dense-expm" or "sampled-rk4"
  std::vector<double> times, K;
};
/// Running sup of ‖exp(−t M⁻¹A)‖ at the requested times (sorted ascending).
StabilityReport stability_estimate(const OperatorPair<double>& pair, const HyperbolicSystem& sys, std::vector<double> times,
                                   std::uint64_t seed = 1, int dense_limit = 4000);

}  // namespace fvs
