#pragma once

#include "lda/population.hpp"

#include <cstdint>
#include <vector>

namespace lda {

struct PolygonPoint {
    double delta = 0.0;
    double utility = 0.0;
};

// Convex set of (disparity, utility) pairs achievable by randomized cell
// classifiers on a fixed population.  The map from cell fractions to
// (delta, utility) is affine, so the set is the hull of the 16 images of
// the classifier cube's vertices.
struct FeasiblePolygon {
    std::vector<PolygonPoint> vertices; // counterclockwise, no collinear triples
    double lambda = 1.0;

    // True when the point lies inside or on the boundary within `tol`
    // (signed distance to every edge at least -tol).  Handles degenerate
    // hulls (segments, single points) that arise from tiny populations.
    bool contains(const PolygonPoint& p, double tol = 1e-9) const;
};

struct FrontierSummary {
    double delta_star = 0.0; // disparity of the perfect classifier
    double u_star = 0.0;     // utility threshold below which zero disparity is free
    double u_f = 0.0;        // utility of the best zero-disparity classifier
    double min_ratio = 0.0;  // min(n_1/n_+, lambda*n_2/n_-)
    CellClassifier repair;   // classifier achieving (0, u_f)
};

FeasiblePolygon feasible_polygon(const GroupTally& tally, double lambda);

// One (delta, utility) point per deterministic classifier, i.e. per
// integer selection vector k_{g,y} in {0..n_{g,y}}.  Refuses to enumerate
// more than `cap` points.
std::vector<PolygonPoint> deterministic_grid(const GroupTally& tally, double lambda,
                                             std::int64_t cap);

// Requires BR_1 >= BR_2 (relabel groups first otherwise).
FrontierSummary utility_threshold(const GroupTally& tally, double lambda);

// Perturbs the perfect classifier along the cheaper swap direction until
// both selection rates are equal.  Requires BR_1 >= BR_2.
CellClassifier zero_disparity_repair(const GroupTally& tally, double lambda);

// Smallest achievable |delta| among classifiers with utility >= u0:
// zero up to the threshold, then the frontier segment between the
// zero-disparity optimum and the perfect classifier.
double min_disparity_at_utility(const GroupTally& tally, double lambda, double u0);

} // namespace lda
