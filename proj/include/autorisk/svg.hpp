#ifndef AUTORISK_SVG_HPP
#define AUTORISK_SVG_HPP

#include <string>

#include "autorisk/diagnostics.hpp"

namespace autorisk {

// Static plots built by direct markup on a fixed 800x500 canvas with
// deterministic element ordering and number formatting, so equal inputs
// give byte-identical files.

// 20-bin histogram of predicted probabilities on [0,1].
std::string histogram_svg(const RiskDistribution& dist,
                          const std::string& title);

// Horizontal bars, one per ISCO group, ordered by mean probability.
std::string isco_bar_svg(const IscoAggregate& agg, const std::string& title);

}  // namespace autorisk

#endif
