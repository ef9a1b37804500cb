#include "lda/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lda {

namespace {

double cross(const PolygonPoint& o, const PolygonPoint& a, const PolygonPoint& b) {
    return (a.delta - o.delta) * (b.utility - o.utility) -
           (a.utility - o.utility) * (b.delta - o.delta);
}

double dist2(const PolygonPoint& a, const PolygonPoint& b) {
    double dx = a.delta - b.delta, dy = a.utility - b.utility;
    return dx * dx + dy * dy;
}

double point_segment_distance(const PolygonPoint& p, const PolygonPoint& a,
                              const PolygonPoint& b) {
    double vx = b.delta - a.delta, vy = b.utility - a.utility;
    double wx = p.delta - a.delta, wy = p.utility - a.utility;
    double len2 = vx * vx + vy * vy;
    double t = len2 > 0.0 ? std::clamp((wx * vx + wy * vy) / len2, 0.0, 1.0) : 0.0;
    double dx = wx - t * vx, dy = wy - t * vy;
    return std::sqrt(dx * dx + dy * dy);
}

// Andrew monotone chain; returns a counterclockwise hull with collinear
// points dropped.  Collapses to 2 points for collinear input and to 1 for
// coincident input.
std::vector<PolygonPoint> convex_hull(std::vector<PolygonPoint> pts, double eps) {
    std::sort(pts.begin(), pts.end(), [](const PolygonPoint& a, const PolygonPoint& b) {
        if (a.delta != b.delta) return a.delta < b.delta;
        return a.utility < b.utility;
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [eps](const PolygonPoint& a, const PolygonPoint& b) {
                              return std::abs(a.delta - b.delta) <= eps &&
                                     std::abs(a.utility - b.utility) <= eps;
                          }),
              pts.end());
    if (pts.size() < 3) return pts;

    std::vector<PolygonPoint> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= eps) --k;
        hull[k++] = p;
    }
    std::size_t lower = k + 1;
    for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], *it) <= eps) --k;
        hull[k++] = *it;
    }
    hull.resize(k - 1); // last point repeats the first
    return hull;
}

Metrics image(const GroupTally& t, double p1p, double p1n, double p2p, double p2n,
              double lambda) {
    return metrics(t, CellClassifier{p1p, p1n, p2p, p2n}, lambda);
}

void require_orientation(const GroupTally& t) {
    if (t.n_1() == 0 || t.n_2() == 0) throw std::invalid_argument("empty group");
    if (t.n_pos() == 0 || t.n_neg() == 0) throw std::invalid_argument("degenerate labels");
    if (t.br_1() < t.br_2()) {
        throw std::invalid_argument(
            "group 1 must have the higher base rate; relabel groups 1<->2 and retry");
    }
}

} // namespace

bool FeasiblePolygon::contains(const PolygonPoint& p, double tol) const {
    if (vertices.empty()) return false;
    if (vertices.size() == 1) return dist2(p, vertices[0]) <= tol * tol;
    if (vertices.size() == 2) {
        return point_segment_distance(p, vertices[0], vertices[1]) <= tol;
    }
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const PolygonPoint& a = vertices[i];
        const PolygonPoint& b = vertices[(i + 1) % vertices.size()];
        double len = std::sqrt(dist2(a, b));
        if (len == 0.0) continue;
        // signed distance of p to edge a->b; negative means outside a CCW hull
        if (cross(a, b, p) / len < -tol) return false;
    }
    return true;
}

FeasiblePolygon feasible_polygon(const GroupTally& t, double lambda) {
    if (t.n_pos() == 0 || t.n_neg() == 0) throw std::invalid_argument("degenerate labels");
    if (t.n_1() == 0 || t.n_2() == 0) throw std::invalid_argument("empty group");

    std::vector<PolygonPoint> images;
    images.reserve(16);
    for (int mask = 0; mask < 16; ++mask) {
        Metrics m = image(t, (mask & 1) ? 1.0 : 0.0, (mask & 2) ? 1.0 : 0.0,
                          (mask & 4) ? 1.0 : 0.0, (mask & 8) ? 1.0 : 0.0, lambda);
        images.push_back({m.delta, m.utility});
    }
    // Coordinates are bounded by max(1, lambda); scale the collinearity
    // tolerance accordingly.
    double eps = 1e-12 * std::max(1.0, lambda);
    FeasiblePolygon poly;
    poly.vertices = convex_hull(std::move(images), eps);
    poly.lambda = lambda;
    return poly;
}

std::vector<PolygonPoint> deterministic_grid(const GroupTally& t, double lambda,
                                             std::int64_t cap) {
    if (t.n_pos() == 0 || t.n_neg() == 0) throw std::invalid_argument("degenerate labels");
    if (t.n_1() == 0 || t.n_2() == 0) throw std::invalid_argument("empty group");

    std::int64_t count = (t.n_1_pos + 1) * (t.n_1_neg + 1) * (t.n_2_pos + 1) * (t.n_2_neg + 1);
    if (count > cap) {
        throw std::invalid_argument("grid too large: " + std::to_string(count) +
                                    " points; requires cap >= " + std::to_string(count));
    }

    std::vector<PolygonPoint> grid;
    grid.reserve(static_cast<std::size_t>(count));
    for (std::int64_t k1p = 0; k1p <= t.n_1_pos; ++k1p) {
        for (std::int64_t k1n = 0; k1n <= t.n_1_neg; ++k1n) {
            for (std::int64_t k2p = 0; k2p <= t.n_2_pos; ++k2p) {
                for (std::int64_t k2n = 0; k2n <= t.n_2_neg; ++k2n) {
                    auto frac = [](std::int64_t k, std::int64_t n) {
                        return n == 0 ? 0.0
                                      : static_cast<double>(k) / static_cast<double>(n);
                    };
                    Metrics m = image(t, frac(k1p, t.n_1_pos), frac(k1n, t.n_1_neg),
                                      frac(k2p, t.n_2_pos), frac(k2n, t.n_2_neg), lambda);
                    grid.push_back({m.delta, m.utility});
                }
            }
        }
    }
    return grid;
}

CellClassifier zero_disparity_repair(const GroupTally& t, double lambda) {
    require_orientation(t);
    if (lambda <= 0.0) throw std::invalid_argument("lambda must be positive");

    double br1 = t.br_1(), br2 = t.br_2();
    if (br1 == br2) return CellClassifier::perfect();

    double ratio_a = static_cast<double>(t.n_1()) / static_cast<double>(t.n_pos());
    double ratio_d = lambda * static_cast<double>(t.n_2()) / static_cast<double>(t.n_neg());

    CellClassifier repair = CellClassifier::perfect();
    if (ratio_d <= ratio_a) {
        // Swap type (d): select group-2 negatives until sr_2 matches BR_1.
        repair.p_2_neg = (br1 * static_cast<double>(t.n_2()) -
                          static_cast<double>(t.n_2_pos)) /
                         static_cast<double>(t.n_2_neg);
    } else {
        // Swap type (a): deselect group-1 positives until sr_1 matches BR_2.
        repair.p_1_pos = br2 * static_cast<double>(t.n_1()) /
                         static_cast<double>(t.n_1_pos);
    }
    return repair;
}

FrontierSummary utility_threshold(const GroupTally& t, double lambda) {
    require_orientation(t);
    if (lambda <= 0.0) throw std::invalid_argument("lambda must be positive");

    FrontierSummary s;
    s.delta_star = t.br_1() - t.br_2();
    s.min_ratio = std::min(static_cast<double>(t.n_1()) / static_cast<double>(t.n_pos()),
                           lambda * static_cast<double>(t.n_2()) /
                               static_cast<double>(t.n_neg()));
    s.u_star = 1.0 - s.min_ratio * s.delta_star;
    s.u_f = s.u_star;
    s.repair = zero_disparity_repair(t, lambda);
    return s;
}

double min_disparity_at_utility(const GroupTally& t, double lambda, double u0) {
    if (u0 > 1.0) throw std::invalid_argument("utility unachievable: maximum is 1");
    FrontierSummary s = utility_threshold(t, lambda);
    if (u0 <= s.u_star) return 0.0;
    return (u0 - s.u_f) / s.min_ratio;
}

} // namespace lda
