#include "lda/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace lda {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

// Affine mapping from a data window to a pixel box (y axis flipped).
struct Frame {
    double x0, x1, y0, y1; // data window
    double px, py, pw, ph; // pixel box

    double x(double v) const { return px + (v - x0) / (x1 - x0) * pw; }
    double y(double v) const { return py + ph - (v - y0) / (y1 - y0) * ph; }
};

void pad_window(double& lo, double& hi) {
    if (hi - lo < 1e-12) {
        lo -= 0.5;
        hi += 0.5;
        return;
    }
    const double pad = 0.06 * (hi - lo);
    lo -= pad;
    hi += pad;
}

void axes(std::string& out, const Frame& f, const std::string& x_label,
          const std::string& y_label) {
    out += "<rect x='" + num(f.px) + "' y='" + num(f.py) + "' width='" + num(f.pw) +
           "' height='" + num(f.ph) + "' fill='white' stroke='#444'/>\n";
    if (f.x0 < 0.0 && f.x1 > 0.0) {
        out += "<line x1='" + num(f.x(0)) + "' y1='" + num(f.py) + "' x2='" + num(f.x(0)) +
               "' y2='" + num(f.py + f.ph) + "' stroke='#bbb' stroke-dasharray='4 3'/>\n";
    }
    if (f.y0 < 0.0 && f.y1 > 0.0) {
        out += "<line x1='" + num(f.px) + "' y1='" + num(f.y(0)) + "' x2='" +
               num(f.px + f.pw) + "' y2='" + num(f.y(0)) +
               "' stroke='#bbb' stroke-dasharray='4 3'/>\n";
    }
    out += "<text x='" + num(f.px + f.pw / 2) + "' y='" + num(f.py + f.ph + 28) +
           "' text-anchor='middle' font-size='12'>" + x_label + "</text>\n";
    out += "<text x='" + num(f.px - 34) + "' y='" + num(f.py + f.ph / 2) +
           "' text-anchor='middle' font-size='12' transform='rotate(-90 " + num(f.px - 34) +
           " " + num(f.py + f.ph / 2) + ")'>" + y_label + "</text>\n";
    // corner tick labels give the data window
    out += "<text x='" + num(f.px) + "' y='" + num(f.py + f.ph + 14) +
           "' font-size='10' fill='#555'>" + num(f.x0) + "</text>\n";
    out += "<text x='" + num(f.px + f.pw) + "' y='" + num(f.py + f.ph + 14) +
           "' text-anchor='end' font-size='10' fill='#555'>" + num(f.x1) + "</text>\n";
    out += "<text x='" + num(f.px - 4) + "' y='" + num(f.py + f.ph) +
           "' text-anchor='end' font-size='10' fill='#555'>" + num(f.y0) + "</text>\n";
    out += "<text x='" + num(f.px - 4) + "' y='" + num(f.py + 10) +
           "' text-anchor='end' font-size='10' fill='#555'>" + num(f.y1) + "</text>\n";
}

std::string polyline(const Frame& f, const std::vector<std::pair<double, double>>& pts,
                     const std::string& style, bool close) {
    std::string out = close ? "<polygon points='" : "<polyline points='";
    for (const auto& [x, y] : pts) out += num(f.x(x)) + "," + num(f.y(y)) + " ";
    out += "' " + style + "/>\n";
    return out;
}

} // namespace

std::string polygon_svg(const FeasiblePolygon& hull, const std::vector<PolygonPoint>& grid,
                        const FrontierSummary& frontier) {
    if (hull.vertices.empty()) throw std::invalid_argument("empty polygon");
    double x0 = hull.vertices[0].delta, x1 = x0;
    double y0 = hull.vertices[0].utility, y1 = y0;
    auto widen = [&](const PolygonPoint& p) {
        x0 = std::min(x0, p.delta);
        x1 = std::max(x1, p.delta);
        y0 = std::min(y0, p.utility);
        y1 = std::max(y1, p.utility);
    };
    for (const auto& p : hull.vertices) widen(p);
    for (const auto& p : grid) widen(p);
    widen({0.0, frontier.u_f});
    pad_window(x0, x1);
    pad_window(y0, y1);

    Frame f{x0, x1, y0, y1, 60, 20, 540, 400};
    std::string out =
        "<svg xmlns='http://www.w3.org/2000/svg' width='660' height='480' "
        "font-family='sans-serif'>\n";
    axes(out, f, "disparity", "utility");

    std::vector<std::pair<double, double>> outline;
    for (const auto& p : hull.vertices) outline.emplace_back(p.delta, p.utility);
    out += polyline(f, outline, "fill='#9ecae1' fill-opacity='0.35' stroke='#3182bd' "
                                "stroke-width='1.5'",
                    true);

    for (const auto& p : grid) {
        out += "<circle cx='" + num(f.x(p.delta)) + "' cy='" + num(f.y(p.utility)) +
               "' r='1.2' fill='#636363' fill-opacity='0.45'/>\n";
    }

    out += "<circle cx='" + num(f.x(frontier.delta_star)) + "' cy='" + num(f.y(1.0)) +
           "' r='5' fill='#d62728'/>\n";
    out += "<text x='" + num(f.x(frontier.delta_star) + 8) + "' y='" + num(f.y(1.0) + 4) +
           "' font-size='11'>perfect classifier</text>\n";
    out += "<circle cx='" + num(f.x(0.0)) + "' cy='" + num(f.y(frontier.u_f)) +
           "' r='5' fill='#2ca02c'/>\n";
    out += "<text x='" + num(f.x(0.0) + 8) + "' y='" + num(f.y(frontier.u_f) + 4) +
           "' font-size='11'>zero-disparity optimum</text>\n";
    out += "</svg>\n";
    return out;
}

std::string search_svg(const std::vector<TrialStatistics>& stats) {
    if (stats.empty()) throw std::invalid_argument("empty statistics");
    std::vector<TrialStatistics> rows = stats;
    std::sort(rows.begin(), rows.end(),
              [](const TrialStatistics& a, const TrialStatistics& b) { return a.n < b.n; });

    const double n_lo = rows.front().n, n_hi = rows.back().n;
    std::string out =
        "<svg xmlns='http://www.w3.org/2000/svg' width='1020' height='360' "
        "font-family='sans-serif'>\n";

    auto band_panel = [&](double px, const std::string& title, auto take) {
        double lo = 0.0, hi = 0.0;
        for (const auto& s : rows) {
            const DeltaSummary& d = take(s);
            lo = std::min({lo, d.p2_5, d.mean});
            hi = std::max({hi, d.p97_5, d.mean});
        }
        pad_window(lo, hi);
        double nx0 = n_lo, nx1 = n_hi;
        if (nx1 - nx0 < 1e-12) nx1 = nx0 + 1.0;
        Frame f{nx0, nx1, lo, hi, px, 40, 250, 240};
        axes(out, f, "n", title);
        std::vector<std::pair<double, double>> band, mean;
        for (const auto& s : rows) band.emplace_back(s.n, take(s).p2_5);
        for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
            band.emplace_back(it->n, take(*it).p97_5);
        }
        out += polyline(f, band, "fill='#fdae6b' fill-opacity='0.4' stroke='none'", true);
        for (const auto& s : rows) mean.emplace_back(s.n, take(s).mean);
        out += polyline(f, mean, "fill='none' stroke='#e6550d' stroke-width='2'", false);
    };

    band_panel(60, "delta test disparity",
               [](const TrialStatistics& s) -> const DeltaSummary& { return s.disparity; });
    band_panel(400, "delta test utility",
               [](const TrialStatistics& s) -> const DeltaSummary& { return s.utility; });

    {
        double nx0 = n_lo, nx1 = n_hi;
        if (nx1 - nx0 < 1e-12) nx1 = nx0 + 1.0;
        Frame f{nx0, nx1, 0.0, 1.0, 740, 40, 250, 240};
        axes(out, f, "n", "perfect-guess frequency");
        std::vector<std::pair<double, double>> curve;
        for (const auto& s : rows) curve.emplace_back(s.n, s.perfect_guess_freq);
        out += polyline(f, curve, "fill='none' stroke='#3182bd' stroke-width='2'", false);
    }
    out += "</svg>\n";
    return out;
}

} // namespace lda
