#pragma once

#include <vector>

#include "gkdv/lab/config.hpp"

namespace gkdv::lab {

Field initial_field(const ExperimentConfig& c);

// Starting guesses for modulation: taken from soliton data when present, otherwise from the
// soliton_count highest peaks of u0 with speeds read off the peak heights.
std::vector<SolitonParams> soliton_guesses(const ExperimentConfig& c, const Field& u0);

// Speed whose profile peak equals |height|: c = (|height| / Q(0))^{p-1}.
double speed_from_height(Exponent p, double height);

}  // namespace gkdv::lab
