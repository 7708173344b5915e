#pragma once

#include "genfric/output.hpp"

#include <string>

namespace genfric {

/// Deterministic SVG: one phase portrait (x_i, y_i) per oscillator on the top
/// row, rho(t) and E(t) below. Fixed canvas size, fixed number formatting.
/// Throws ValidationError on an empty table.
std::string render_plot(const TrajectoryTable& table);

}  // namespace genfric
