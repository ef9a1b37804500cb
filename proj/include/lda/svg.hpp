#pragma once

#include "lda/polygon.hpp"
#include "lda/search.hpp"

#include <string>
#include <vector>

namespace lda {

// Feasible-region figure: hull outline, deterministic-classifier grid
// scatter, with the perfect classifier and the zero-disparity optimum
// marked.  Pass an empty grid to draw the hull alone.
std::string polygon_svg(const FeasiblePolygon& hull, const std::vector<PolygonPoint>& grid,
                        const FrontierSummary& frontier);

// Three panels over the n sweep: disparity delta band, utility delta
// band, and perfect-guess frequency.
std::string search_svg(const std::vector<TrialStatistics>& stats);

} // namespace lda
