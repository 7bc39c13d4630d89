#pragma once

#include <vector>

#include "hmrfcs/random.hpp"

namespace hmrfcs {

/// Scale of the numerator normal in Mantegna's algorithm:
/// [G(1+b) sin(pi b / 2) / (G((1+b)/2) b 2^((b-1)/2))]^(1/b).
double mantegna_sigma(double beta);

/// Heavy-tailed step lengths u / |v|^(1/beta), u ~ N(0, sigma_u^2), v ~ N(0, 1).
/// Requires 1 < beta <= 2.
std::vector<double> levy_steps(int count, double beta, Rng& rng);

}  // namespace hmrfcs
