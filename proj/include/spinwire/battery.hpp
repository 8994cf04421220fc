#pragma once

#include <string>
#include <vector>

#include "spinwire/integrator.hpp"

namespace spinwire {

VectorField random_field(const WireGrid& grid, NoiseStream& rng);
VectorField random_unit_field(const WireGrid& grid, NoiseStream& rng);

struct IdentityResult {
  std::string name;
  double residual = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

/// Structural-identity battery on randomized inputs: sphere orthogonality of
/// the coefficient fields, discrete calculus identities, and interpolation
/// identities. Runs on a periodic grid of the config's size (the summation
/// identities are only exact there) with the config's noise and parameters.
std::vector<IdentityResult> identity_battery(const SimConfig& config, int field_count);

}  // namespace spinwire
