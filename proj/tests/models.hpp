#pragma once

#include <vector>

#include "effheis/fermion.hpp"

namespace effheis::testing {

// ω = (1, 2) with g(c₁†c₂ + h.c.): the hopping connects distinct frequencies.
inline SplitHamiltonian off_resonant_model(double lambda, double g = 1.0) {
  const std::vector<double> w{1.0, 2.0};
  return {diagonal_modes(w), hopping(2, 1, 2, g), lambda};
}

// ω₁ = ω₂: the hopping commutes with the free part.
inline SplitHamiltonian resonant_model(double lambda, double g = 1.0) {
  const std::vector<double> w{1.0, 1.0};
  return {diagonal_modes(w), hopping(2, 1, 2, g), lambda};
}

}  // namespace effheis::testing
