#include "fvs/timeloop.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace fvs {

SemidiscreteSystem::SemidiscreteSystem(const OperatorPair<double>& pair)
    : A_(sparse_A(pair)), n_(pair.n), dofs_(pair.dofs()) {
  if (!pair.identity_mass) {
    lu_ = std::make_shared<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
    lu_->compute(sparse_mass(pair));
    if (lu_->info() != Eigen::Success)
      throw std::runtime_error("mass matrix of " + pair.scheme + " is singular (sparse LU failed)");
  }
}

Eigen::VectorXd SemidiscreteSystem::rhs(const Eigen::VectorXd& u) const {
  Eigen::VectorXd y = A_ * u;
  if (!lu_) return -y;
  // Component α of DOF j sits at j·n + α: solve M on each component column.
  const Eigen::Map<const Eigen::MatrixXd> Y(y.data(), n_, dofs_);
  const Eigen::MatrixXd X = lu_->solve(Eigen::MatrixXd(Y.transpose()));
  Eigen::MatrixXd Xt = -X.transpose();
  return Eigen::Map<Eigen::VectorXd>(Xt.data(), Xt.size());
}

Eigen::VectorXd SemidiscreteSystem::rk4_step(const Eigen::VectorXd& u, double dt) const {
  const Eigen::VectorXd k1 = rhs(u);
  const Eigen::VectorXd k2 = rhs(u + 0.5 * dt * k1);
  const Eigen::VectorXd k3 = rhs(u + 0.5 * dt * k2);
  const Eigen::VectorXd k4 = rhs(u + dt * k3);
  return u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

double stable_time_step(const OperatorPair<double>& pair, const HyperbolicSystem& sys, double cfl) {
  const double speed = sys.max_wave_speed();
  const double h = pair.layout->h_min;
  return speed > 0.0 ? cfl * h / speed : cfl * h;
}

IntegrationResult integrate(const OperatorPair<double>& pair, const MeshField<double>& u0, double T, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
  const SemidiscreteSystem semi(pair);
  Eigen::VectorXd u = Eigen::Map<const Eigen::VectorXd>(u0.data(), static_cast<Eigen::Index>(u0.size()));
  const double norm0 = std::max(u.norm(), 1e-300);
  IntegrationResult r;
  double t = 0.0;
  while (t < T) {
    double step = dt;
    if (t + step >= T * (1.0 - 1e-14)) step = T - t;
    u = semi.rk4_step(u, step);
    t = (step == T - t) ? T : t + step;
    ++r.steps;
    if (!(u.norm() <= 1e6 * norm0)) {
      std::ostringstream msg;
      msg << "integrate: solution of " << pair.scheme << " grew beyond 1e6 times its initial norm at t = " << t
          << " (step " << r.steps << ", dt = " << dt << "); the scheme is unstable at this step size";
      throw std::runtime_error(msg.str());
    }
  }
  r.u.assign(u.data(), u.data() + u.size());
  return r;
}

HyperbolicSystem make_system(const CaseSpec& c, int dim) {
  if (c.system == "transport") {
    std::vector<double> v{c.velocity[0]};
    if (dim == 2) v.push_back(c.velocity[1]);
    return transport(v);
  }
  if (c.system == "lee") {
    if (dim != 2) throw std::invalid_argument("the linearized Euler system is two-dimensional");
    return linearized_euler(c.velocity);
  }
  throw std::invalid_argument("unknown system '" + c.system + "' (expected transport or lee)");
}

VectorFunction exact_solution(const CaseSpec& c, int dim, double t) {
  const Vec2<double> shift{c.velocity[0] * t, dim == 2 ? c.velocity[1] * t : 0.0};
  const int n = c.system == "lee" ? 4 : 1;
  if (c.initial == "constant") return [n](const Vec2<double>&) { return std::vector<double>(n, 1.0); };
  if (c.initial == "sine") {
    if (c.system == "lee") throw std::invalid_argument("sine data is only an exact solution for transport");
    return [shift, dim](const Vec2<double>& r) {
      double v = std::sin(2.0 * M_PI * (r[0] - shift[0]));
      if (dim == 2) v *= std::sin(2.0 * M_PI * (r[1] - shift[1]));
      return std::vector<double>{v};
    };
  }
  if (c.initial == "vortex") {
    if (c.system != "lee") throw std::invalid_argument("vortex data needs the linearized Euler system");
    const double s2 = c.sigma * c.sigma;
    return [shift, s2](const Vec2<double>& r) {
      const double x = r[0] - shift[0], y = r[1] - shift[1];
      const double xw = x - std::floor(x), yw = y - std::floor(y);
      // ψ = Σ over the nearest periodic images of exp(−|r − c|²/(2σ²)); u' = (−∂ψ/∂y, ∂ψ/∂x).
      double up = 0.0, vp = 0.0;
      for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j) {
          const double dx = xw - 0.5 + i, dy = yw - 0.5 + j;
          const double e = std::exp(-(dx * dx + dy * dy) / (2.0 * s2));
          up += dy / s2 * e;
          vp -= dx / s2 * e;
        }
      return std::vector<double>{0.0, up, vp, 0.0};
    };
  }
  throw std::invalid_argument("unknown initial data '" + c.initial + "' (expected sine, vortex or constant)");
}

CaseResult run_case(const CaseSpec& c, const OperatorPair<double>& pair, const HyperbolicSystem& sys, double dt) {
  const auto& L = *pair.layout;
  (void)sys;
  const MeshField<double> u0 = project_function(L, pair.projection, exact_solution(c, L.dim, 0.0), pair.n);
  const IntegrationResult run = integrate(pair, u0, c.final_time, dt);
  const MeshField<double> w = project_function(L, pair.projection, exact_solution(c, L.dim, c.final_time), pair.n);
  MeshField<double> diff(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) diff[i] = run.u[i] - w[i];
  CaseResult r;
  r.error = weighted_norm(L, diff, pair.n);
  r.dt = dt;
  r.steps = run.steps;
  const std::vector<double> before = weighted_sum(L, apply_M(pair, u0), pair.n);
  const std::vector<double> after = weighted_sum(L, apply_M(pair, run.u), pair.n);
  double ref = 0.0;
  for (int j = 0; j < L.size(); ++j)
    for (int a = 0; a < pair.n; ++a) ref += L.volume[j] * std::fabs(u0[static_cast<std::size_t>(j) * pair.n + a]);
  for (int a = 0; a < pair.n; ++a)
    r.conservation_drift = std::max(r.conservation_drift, std::fabs(after[a] - before[a]) / std::max(ref, 1e-300));
  return r;
}

std::size_t MeshFamily::levels() const { return kind == "ti-triangular" ? steps_per_unit.size() : copies.size(); }

PeriodicMesh MeshFamily::level(std::size_t i) const {
  if (kind == "ti-triangular") {
    const int m = steps_per_unit.at(i);
    if (m % 5 != 0) throw std::invalid_argument("ti-triangular family: 1/h must be a multiple of 5");
    const Rational h(1, m);
    return build_ti_triangular_exact({h, Rational(0)}, {Rational(h / 2), Rational(5 * h / 6)}, {m, 6 * m / 5});
  }
  if (kind == "replicate") return replicate_scale(pattern, copies.at(i));
  throw std::invalid_argument("unknown mesh family '" + kind + "'");
}

double MeshFamily::nominal_h(std::size_t i) const {
  if (kind == "ti-triangular") return 1.0 / steps_per_unit.at(i);
  return pattern.longest_edge() / copies.at(i);
}

MeshFamily ti_family(std::vector<int> steps_per_unit) {
  MeshFamily f;
  f.kind = "ti-triangular";
  f.steps_per_unit = std::move(steps_per_unit);
  return f;
}

MeshFamily replicate_family(const PeriodicMesh& pattern, std::vector<int> copies) {
  MeshFamily f;
  f.kind = "replicate";
  f.pattern = pattern;
  f.copies = std::move(copies);
  return f;
}

ConvergenceStudy convergence_study(const CaseSpec& c, const std::string& scheme, const MeshFamily& family,
                                   const SchemeOptions& opt,
                                   const std::function<void(const ConvergenceStudy&)>& on_level) {
  if (family.levels() < 3) throw std::invalid_argument("convergence_study: at least 3 levels are required");
  ConvergenceStudy study;
  study.scheme = scheme;
  const int p = scheme_info(scheme).design_order;
  for (std::size_t i = 0; i < family.levels(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    try {
      const PeriodicMesh mesh = family.level(i);
      const HyperbolicSystem sys = make_system(c, mesh.dim);
      const OperatorPair<double> pair = assemble_on_mesh<double>(scheme, mesh, sys, opt);
      ConvergenceLevel lv;
      lv.h = family.nominal_h(i);
      lv.dofs = pair.dofs();
      lv.dt = c.dt > 0.0 ? c.dt : std::min(stable_time_step(pair, sys, c.cfl), std::pow(lv.h, (p + 1) / 4.0));
      const CaseResult r = run_case(c, pair, sys, lv.dt);
      lv.error = r.error;
      lv.steps = r.steps;
      if (!study.levels.empty()) {
        const ConvergenceLevel& prev = study.levels.back();
        lv.order = std::log(prev.error / lv.error) / std::log(prev.h / lv.h);
      }
      lv.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      study.levels.push_back(lv);
    } catch (const std::exception& e) {
      study.failure = "level " + std::to_string(i) + ": " + e.what();
    }
    if (on_level) on_level(study);
    if (!study.failure.empty()) break;
  }
  return study;
}

std::string study_csv(const ConvergenceStudy& s) {
  std::ostringstream os;
  os << "h,dofs,error,order\n";
  char buf[160];
  for (std::size_t i = 0; i < s.levels.size(); ++i) {
    const auto& l = s.levels[i];
    if (i == 0) std::snprintf(buf, sizeof buf, "%.10g,%d,%.6e,\n", l.h, l.dofs, l.error);
    else std::snprintf(buf, sizeof buf, "%.10g,%d,%.6e,%.4f\n", l.h, l.dofs, l.error, l.order);
    os << buf;
  }
  return os.str();
}

std::string study_markdown(const ConvergenceStudy& s, const std::string& title) {
  std::ostringstream os;
  os << "### " << title << "\n\n| h | error | order |\n|---|---|---|\n";
  char buf[160];
  for (std::size_t i = 0; i < s.levels.size(); ++i) {
    const auto& l = s.levels[i];
    if (i == 0) std::snprintf(buf, sizeof buf, "| %.6g | %.3e | |\n", l.h, l.error);
    else std::snprintf(buf, sizeof buf, "| %.6g | %.3e | %.2f |\n", l.h, l.error, l.order);
    os << buf;
  }
  if (!s.failure.empty()) os << "\nAborted: " << s.failure << "\n";
  return os.str();
}

FullyDiscreteResult fully_discrete_upwind(const PeriodicMesh& mesh, double T, double tau) {
  if (mesh.dim != 1) throw std::invalid_argument("fully_discrete_upwind: needs a 1D mesh");
  const ControlVolumeLayout<double> L = median_dual_layout<double>(mesh);
  const int N = L.size();
  double hbar_min = 1e300;
  std::vector<int> left(N, -1);
  for (int j = 0; j < N; ++j) {
    hbar_min = std::min(hbar_min, L.volume[j]);
    for (const auto& f : L.faces[j])
      if (f.normal[0] < 0.0) left[j] = f.k;
  }
  if (!(tau > 0.0) || tau > hbar_min * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "fully_discrete_upwind: tau = " << tau << " violates 0 < tau <= min hbar = " << hbar_min;
    throw std::invalid_argument(msg.str());
  }
  FullyDiscreteResult r;
  r.h_max = mesh.longest_edge();
  r.tau = tau;
  r.steps = static_cast<int>(std::floor(T / tau + 1e-9));
  const double d1 = 2.0 * M_PI, d2 = 4.0 * M_PI * M_PI;  // sup |w0'|, sup |w0''| for w0 = sin 2πx
  std::vector<double> u(N), next(N);
  for (int j = 0; j < N; ++j) u[j] = std::sin(2.0 * M_PI * L.point[j][0]);
  for (int step = 0; step <= r.steps; ++step) {
    const double t = step * tau;
    double err = 0.0;
    for (int j = 0; j < N; ++j) err = std::max(err, std::fabs(u[j] - std::sin(2.0 * M_PI * (L.point[j][0] - t))));
    const double bound = t * r.h_max * d2 + r.h_max * d1;
    r.times.push_back(t);
    r.errors.push_back(err);
    r.bounds.push_back(bound);
    r.max_error = std::max(r.max_error, err);
    r.worst_bound_ratio = std::max(r.worst_bound_ratio, err / bound);
    if (err > bound) r.bound_holds = false;
    if (step == r.steps) break;
    for (int j = 0; j < N; ++j) next[j] = u[j] - tau / L.volume[j] * (u[j] - u[left[j]]);
    u.swap(next);
  }
  return r;
}

}  // namespace fvs
