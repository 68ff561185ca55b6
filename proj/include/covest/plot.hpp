#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "covest/harness.hpp"

namespace covest {

/// Static SVG line chart of mean loss (with +/- one standard error bars), one
/// series per (estimator, mu). The x axis is L, or mu when the sweep holds a
/// single L and several mu values.
void write_loss_plot_svg(std::ostream& os, const std::vector<SweepRow>& rows,
                         const std::string& title);

}  // namespace covest
