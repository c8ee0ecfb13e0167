#pragma once

#include <cstdint>
#include <vector>

#include "fvs/mesh.hpp"

namespace fvs::testing {

inline std::vector<Rational> random_steps(std::uint64_t seed, int count) { return random_1d_steps(seed, count); }

inline PeriodicMesh random_1d_mesh(std::uint64_t seed, int count = 6) {
  return build_1d_pattern_exact(random_steps(seed, count));
}

inline std::vector<double> to_doubles(const std::vector<Rational>& v) {
  std::vector<double> out;
  for (const auto& x : v) out.push_back(x.get_d());
  return out;
}

/// Regular triangular pattern with e1 = (1/m, 0), e2 = (1/(2m), 1/m).
inline PeriodicMesh ti_pattern(int m) {
  const Rational h(1, m);
  return build_ti_triangular_exact({h, Rational(0)}, {Rational(h / 2), h}, {m, m});
}

/// Perturbed regular triangular pattern (m×m lattice cells).
inline PeriodicMesh perturbed_pattern(std::uint64_t seed, int m = 4, double amplitude = 0.15) {
  return perturb_nodes(ti_pattern(m), amplitude, seed);
}

}  // namespace fvs::testing
