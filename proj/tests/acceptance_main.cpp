// End-to-end acceptance checks.  Each criterion prints exactly one
// PASS/FAIL/SKIP line with the measured quantities; the exit code is the
// number of failed criteria.

#include "lda/bench.hpp"
#include "lda/data.hpp"
#include "lda/fullinfo.hpp"
#include "lda/models.hpp"
#include "lda/polygon.hpp"
#include "lda/population.hpp"
#include "lda/rational.hpp"
#include "lda/rng.hpp"
#include "lda/search.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <limits>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

using namespace lda;

namespace {

constexpr std::uint64_t kSeed = 1;

struct Outcome {
    bool pass = false;
    bool skipped = false;
    std::string detail;
};

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

std::string fmt(const char* pattern, ...) {
    va_list args;
    va_start(args, pattern);
    char buf[512];
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return buf;
}

// --- criterion 1: utility threshold vs brute-force grid ---------------------
//
// The whole 201^4 classifier grid is searched in factored form: each group
// side contributes 201^2 (selection rate, utility share) points, and a
// sliding-window maximum over the second side finds the best utility with
// |disparity| <= 0.005.  The window scan touches exactly the same classifier
// set as the four-way nested loop.

struct SidePoint {
    double sr = 0.0;
    double u = 0.0;
};

std::vector<SidePoint> side_points(std::int64_t np, std::int64_t nn, std::int64_t n_pos,
                                   std::int64_t n_neg, double lambda) {
    std::vector<SidePoint> pts;
    pts.reserve(201 * 201);
    const double n_g = static_cast<double>(np + nn);
    for (int i = 0; i <= 200; ++i) {
        const double pos_sel = i * static_cast<double>(np) / 200.0;
        for (int j = 0; j <= 200; ++j) {
            const double neg_sel = j * static_cast<double>(nn) / 200.0;
            SidePoint p;
            p.sr = (pos_sel + neg_sel) / n_g;
            p.u = pos_sel / static_cast<double>(n_pos) -
                  lambda * neg_sel / static_cast<double>(n_neg);
            pts.push_back(p);
        }
    }
    std::sort(pts.begin(), pts.end(),
              [](const SidePoint& a, const SidePoint& b) { return a.sr < b.sr; });
    return pts;
}

double best_grid_utility_near_zero(const GroupTally& t, double lambda) {
    const auto a = side_points(t.n_1_pos, t.n_1_neg, t.n_pos(), t.n_neg(), lambda);
    const auto b = side_points(t.n_2_pos, t.n_2_neg, t.n_pos(), t.n_neg(), lambda);
    const double tol = 0.005 + 1e-12;
    double best = -std::numeric_limits<double>::infinity();
    std::deque<std::size_t> window; // indices into b with decreasing u
    std::size_t lo = 0, hi = 0;
    for (const auto& pa : a) {
        while (hi < b.size() && b[hi].sr <= pa.sr + tol) {
            while (!window.empty() && b[window.back()].u <= b[hi].u) window.pop_back();
            window.push_back(hi);
            ++hi;
        }
        while (lo < hi && b[lo].sr < pa.sr - tol) {
            if (!window.empty() && window.front() == lo) window.pop_front();
            ++lo;
        }
        if (!window.empty()) best = std::max(best, pa.u + b[window.front()].u);
    }
    return best;
}

Outcome criterion_1() {
    RandomStream rng(derive_seed(kSeed, "acc1"));
    const double lambdas[] = {0.5, 1.0, 2.0};
    int checked = 0;
    double worst_gap = 0.0;
    for (int i = 0; i < 100; ++i) {
        GroupTally t;
        t.n_1_pos = static_cast<std::int64_t>(rng.next_below(50)) + 1;
        t.n_1_neg = static_cast<std::int64_t>(rng.next_below(50)) + 1;
        t.n_2_pos = static_cast<std::int64_t>(rng.next_below(50)) + 1;
        t.n_2_neg = static_cast<std::int64_t>(rng.next_below(50)) + 1;
        if (t.br_1() < t.br_2()) {
            std::swap(t.n_1_pos, t.n_2_pos);
            std::swap(t.n_1_neg, t.n_2_neg);
        }
        for (double lambda : lambdas) {
            const double u_star = utility_threshold(t, lambda).u_star;
            const double grid_best = best_grid_utility_near_zero(t, lambda);
            // "a grid classifier with |delta| <= 0.005 and utility >= u0
            //  exists iff u0 <= u_star" holds for every u0, up to +-0.01,
            // exactly when the grid optimum is within 0.01 of u_star.
            worst_gap = std::max(worst_gap, std::abs(grid_best - u_star));
            ++checked;
        }
    }
    Outcome out;
    out.pass = worst_gap <= 0.01;
    out.detail = fmt("%d population/lambda pairs, max |grid optimum - threshold| = %.5f "
                     "(allowed 0.01)",
                     checked, worst_gap);
    return out;
}

// --- criterion 2: worked 50-person population --------------------------------

Outcome criterion_2() {
    const GroupTally t{15, 20, 5, 10};
    const double lambda = 1.0;
    auto hull = feasible_polygon(t, lambda);
    bool has_vertex = false;
    for (const auto& v : hull.vertices) {
        if (std::abs(v.delta - 2.0 / 21.0) <= 1e-12 && std::abs(v.utility - 1.0) <= 1e-12) {
            has_vertex = true;
        }
    }
    auto grid = deterministic_grid(t, lambda, 30000);
    std::size_t inside = 0;
    for (const auto& p : grid) {
        if (hull.contains(p, 1e-9)) ++inside;
    }
    const double u_star = utility_threshold(t, lambda).u_star;
    const double gap = std::abs(u_star - 20.0 / 21.0);

    Outcome out;
    out.pass = has_vertex && grid.size() == 22176 && inside == grid.size() && gap <= 1e-12;
    out.detail = fmt("vertex (2/21, 1) %s, %zu/%zu grid points inside, "
                     "|u_star - 20/21| = %.2e",
                     has_vertex ? "present" : "missing", inside, grid.size(), gap);
    return out;
}

// --- criterion 3: subset-sum reduction vs 2^n enumeration --------------------

bool has_zero_sum_subset(const std::vector<std::int64_t>& w) {
    const std::size_t n = w.size();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        std::int64_t sum = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::uint64_t{1} << i)) sum += w[i];
        }
        if (sum == 0) return true;
    }
    return false;
}

Outcome criterion_3() {
    RandomStream rng(derive_seed(kSeed, "acc3"));
    const Rat lambdas[] = {Rat(1, 2), Rat(1), Rat(2)};
    int agreements = 0, total = 0;
    std::string first_mismatch;
    for (int i = 0; i < 200; ++i) {
        SubsetSumInstance w;
        const int size = static_cast<int>(rng.next_below(12)) + 1;
        for (int k = 0; k < size; ++k) {
            std::int64_t magnitude = static_cast<std::int64_t>(rng.next_below(9)) + 1;
            w.weights.push_back(rng.next_unit() < 0.5 ? -magnitude : magnitude);
        }
        const bool expected = has_zero_sum_subset(w.weights);
        for (const Rat& lambda : lambdas) {
            ++total;
            bool ok = false;
            try {
                auto inst = reduce_subset_sum(w, lambda);
                auto sol = solve_exact(inst);
                if ((sol.status == SolveStatus::found) == expected) {
                    if (sol.status == SolveStatus::found) {
                        auto subset = extract_subset_sum_solution(w, sol);
                        std::int64_t sum = 0;
                        for (std::int64_t x : subset) sum += x;
                        ok = !subset.empty() && sum == 0;
                    } else {
                        ok = true;
                    }
                }
            } catch (const std::exception& e) {
                if (first_mismatch.empty()) first_mismatch = e.what();
            }
            if (ok) {
                ++agreements;
            } else if (first_mismatch.empty()) {
                first_mismatch = fmt("instance %d, lambda %s", i,
                                     lambda.to_string().c_str());
            }
        }
    }
    Outcome out;
    out.pass = agreements == total;
    out.detail = fmt("%d/%d solver verdicts match enumeration, extractions sum to zero",
                     agreements, total);
    if (!out.pass) out.detail += "; first mismatch: " + first_mismatch;
    return out;
}

// --- criterion 4: approximation guarantee and strict validity ----------------

Outcome criterion_4() {
    RandomStream rng(derive_seed(kSeed, "acc4"));
    const Rat one_plus_eps[] = {Rat(3, 2), Rat(11, 10), Rat(101, 100)};
    const double epsilons[] = {0.5, 0.1, 0.01};
    int guarantee_checks = 0, guarantee_hits = 0;
    int found_count = 0, strict_valid = 0;
    int zero_baseline = 0;
    std::string first_failure;

    for (int i = 0; i < 500; ++i) {
        const int n = 2 + static_cast<int>(rng.next_below(9));
        const int digits = 1 + static_cast<int>(rng.next_below(3));
        auto inst = generate_instance(n, digits, derive_seed(kSeed, "acc4-inst", i));
        const auto scores = value_scores(inst);
        const auto [d0, u0] = baseline_scores(inst);
        if (d0 == Rat(0)) ++zero_baseline;

        const std::uint32_t masks = std::uint32_t{1} << n;
        std::vector<Rat> dsum(masks), usum(masks);
        for (std::uint32_t mask = 1; mask < masks; ++mask) {
            const std::uint32_t low = mask & (mask - 1);
            const int bit = std::countr_zero(mask);
            dsum[mask] = dsum[low] + scores[bit].d;
            usum[mask] = usum[low] + scores[bit].u;
        }

        std::unordered_map<std::string, std::size_t> index;
        for (std::size_t k = 0; k < scores.size(); ++k) index[scores[k].id] = k;

        for (int e = 0; e < 3; ++e) {
            // a certifying subset is itself a strict improvement with margin
            bool certified = false;
            for (std::uint32_t mask = 0; !certified && mask < masks; ++mask) {
                certified = dsum[mask].abs() * one_plus_eps[e] <= d0.abs() &&
                            dsum[mask].abs() < d0.abs() && usum[mask] >= u0;
            }
            ++guarantee_checks;
            auto sol = solve_approx(inst, epsilons[e]);
            if (!certified || sol.status == SolveStatus::found) ++guarantee_hits;
            else if (first_failure.empty())
                first_failure = fmt("certified instance %d missed at eps %.2f", i,
                                    epsilons[e]);

            if (sol.status == SolveStatus::found) {
                ++found_count;
                Rat d(0), u(0);
                for (const auto& id : sol.selection) {
                    d = d + scores[index.at(id)].d;
                    u = u + scores[index.at(id)].u;
                }
                if (d == sol.delta && u == sol.utility && d.abs() < d0.abs() && u >= u0) {
                    ++strict_valid;
                } else if (first_failure.empty()) {
                    first_failure = fmt("invalid solution on instance %d at eps %.2f", i,
                                        epsilons[e]);
                }
            }
        }
    }
    Outcome out;
    out.pass = guarantee_hits == guarantee_checks && strict_valid == found_count;
    out.detail = fmt("%d/%d certified cases found, %d/%d found solutions strictly valid "
                     "(%d zero-disparity baselines)",
                     guarantee_hits, guarantee_checks, strict_valid, found_count,
                     zero_baseline);
    if (!out.pass) out.detail += "; first failure: " + first_failure;
    return out;
}

// --- criterion 5: benchmark shape -------------------------------------------

Outcome criterion_5() {
    BenchConfig config;
    config.master_seed = derive_seed(kSeed, "acc5");
    config.jobs = 1;
    auto report = run_benchmark(config);

    std::map<std::string, std::map<int, std::vector<double>>> walls;
    for (const auto& row : report.rows) {
        if (row.status != "timed_out") walls[algorithm_key(row)][row.max_digits].push_back(row.wall_ms);
    }
    std::map<std::string, std::map<int, double>> medians;
    for (const auto& [key, buckets] : walls) {
        for (const auto& [digit, values] : buckets) {
            medians[key][digit] = percentile(values, 0.5);
        }
    }

    bool exact_increasing = true;
    for (int d = 1; d < 4; ++d) {
        if (!(medians["exact"][d] < medians["exact"][d + 1])) exact_increasing = false;
    }
    bool approx_flat = true;
    for (double eps : config.epsilons) {
        auto& m = medians[fmt("approx@%g", eps)];
        if (!(m[4] < 10.0 * m[1])) approx_flat = false;
    }
    auto rates = hit_rate(report);
    const double r50 = rates.at("approx@0.5");
    const double r10 = rates.at("approx@0.1");
    const double r01 = rates.at("approx@0.01");
    const bool rates_ok = r50 >= 0.9 && r01 >= r10 && r10 >= r50;

    Outcome out;
    out.pass = exact_increasing && approx_flat && rates_ok;
    out.detail = fmt("exact medians ms %.4f/%.4f/%.4f/%.4f %s; approx growth 1->4 "
                     "%.1fx/%.1fx/%.1fx; hit rates 0.5:%.3f 0.1:%.3f 0.01:%.3f",
                     medians["exact"][1], medians["exact"][2], medians["exact"][3],
                     medians["exact"][4], exact_increasing ? "increasing" : "NOT increasing",
                     medians["approx@0.5"][4] / medians["approx@0.5"][1],
                     medians["approx@0.1"][4] / medians["approx@0.1"][1],
                     medians["approx@0.01"][4] / medians["approx@0.01"][1], r50, r10, r01);
    return out;
}

// --- criterion 6: selection-protocol structure -------------------------------

CandidatePool independence_null_pool(int size, std::uint64_t seed) {
    CandidatePool pool;
    pool.search_type = SearchType::sample;
    pool.lambda = 1.0;
    RandomStream rng(seed);
    for (int i = 0; i < size; ++i) {
        PoolRecord rec;
        rec.model_id = i;
        rec.seed = seed + static_cast<std::uint64_t>(i);
        rec.eval.disparity = 2.0 * rng.next_unit() - 1.0;
        rec.test.disparity = 2.0 * rng.next_unit() - 1.0;
        rec.eval.utility = rng.next_unit();
        rec.test.utility = rng.next_unit();
        pool.records.push_back(rec);
    }
    return pool;
}

Outcome criterion_6() {
    auto data = synthetic_dataset(1200, 0.5, {0.45, 0.3}, 0.8, derive_seed(kSeed, "acc6"));
    SplitSpec spec;
    spec.seed = derive_seed(kSeed, "acc6-split");
    auto splits = split(data, spec);
    PoolConfig config;
    config.trainer.kind = TrainerKind::decision_tree;
    config.trainer.max_depth = 3;
    config.search_type = SearchType::sample;
    config.count = 40;
    config.master_seed = derive_seed(kSeed, "acc6-pool");
    auto pool = build_pool(config, splits);

    auto single = trial_statistics(pool, 1, 400, derive_seed(kSeed, "acc6-single"));
    const bool n1_ok = single.disparity.mean == 0.0 && single.disparity.p2_5 == 0.0 &&
                       single.disparity.p97_5 == 0.0 && single.utility.mean == 0.0 &&
                       single.perfect_guess_freq == 1.0;

    int argmin_ok = 0, argmin_total = 0;
    for (int n : {2, 3, 5, 8, 20, 40}) {
        for (int rep = 0; rep < 100; ++rep) {
            auto trial = subsample_select(
                pool, n, derive_seed(kSeed, "acc6-argmin", argmin_total));
            double mean = 0.0;
            for (int id : trial.drawn_model_ids) {
                mean += std::abs(pool.records[id].eval.disparity);
            }
            mean /= static_cast<double>(trial.drawn_model_ids.size());
            const double selected =
                std::abs(pool.records[trial.selected_model_id].eval.disparity);
            ++argmin_total;
            if (selected <= mean + 1e-12) ++argmin_ok;
        }
    }

    auto null_pool = independence_null_pool(600, derive_seed(kSeed, "acc6-null"));
    double worst_null_gap = 0.0;
    for (int n : {2, 5, 10}) {
        auto stats = trial_statistics(null_pool, n, 5000, derive_seed(kSeed, "acc6-reps"));
        worst_null_gap =
            std::max(worst_null_gap, std::abs(stats.perfect_guess_freq - 1.0 / n));
    }

    Outcome out;
    out.pass = n1_ok && argmin_ok == argmin_total && worst_null_gap <= 0.05;
    out.detail = fmt("n=1 deltas %s, argmin<=mean in %d/%d trials, "
                     "max |freq - 1/n| = %.4f under independence (allowed 0.05)",
                     n1_ok ? "exactly zero with freq 1" : "NOT zero", argmin_ok,
                     argmin_total, worst_null_gap);
    return out;
}

// --- criterion 7: census-income qualitative reproduction (optional) ----------

Outcome criterion_7() {
    const char* path = std::getenv("LDA_ADULT_CSV");
    Outcome out;
    if (path == nullptr || *path == '\0') {
        out.skipped = true;
        out.detail = "set LDA_ADULT_CSV to an adult census CSV to run this check";
        return out;
    }
    auto data = load_csv(path, adult_schema());
    SplitSpec spec;
    spec.seed = derive_seed(kSeed, "acc7-split");
    auto splits = split(data, spec);
    PoolConfig config;
    config.trainer.kind = TrainerKind::random_forest;
    config.search_type = SearchType::sample;
    config.count = 10000;
    config.master_seed = derive_seed(kSeed, "acc7-pool");
    config.jobs = 0;
    auto pool = build_pool(config, splits);

    auto stats = trial_statistics(pool, 100, 2000, derive_seed(kSeed, "acc7-trials"));
    auto freq = perfect_guess_frequency(pool, {2, 5, 10, 20, 50, 100}, 2000,
                                        derive_seed(kSeed, "acc7-trials"));
    const bool disparity_ok = stats.disparity.mean < 0.0 && stats.disparity.p97_5 < 0.0;
    const bool freq_ok = freq.at(100) < 0.6 && freq.at(100) < freq.at(2);
    out.pass = disparity_ok && freq_ok;
    out.detail = fmt("disparity mean %.4f [%.4f, %.4f], freq n=2 %.3f n=100 %.3f",
                     stats.disparity.mean, stats.disparity.p2_5, stats.disparity.p97_5,
                     freq.at(2), freq.at(100));
    return out;
}

// --- criterion 8: memorize-then-select-all rule ------------------------------

Outcome criterion_8() {
    auto pre = synthetic_dataset(300, 0.5, {0.45, 0.3}, 1.0, derive_seed(kSeed, "acc8-pre"));
    auto post =
        synthetic_dataset(300, 0.5, {0.45, 0.3}, 1.0, derive_seed(kSeed, "acc8-post"));
    auto transcript = pathological_rule(pre, post);
    Outcome out;
    out.pass = transcript.pre_accuracy == 1.0 && transcript.post_disparity == 0.0;
    out.detail = fmt("pre-deploy accuracy %.17g, post-deploy disparity %.17g",
                     transcript.pre_accuracy, transcript.post_disparity);
    return out;
}

} // namespace

int main() {
    struct Entry {
        int number;
        const char* title;
        Outcome (*run)();
    };
    const Entry entries[] = {
        {1, "utility threshold matches brute-force grid search", criterion_1},
        {2, "worked population: hull vertex, grid containment, threshold", criterion_2},
        {3, "subset-sum reduction agrees with exhaustive enumeration", criterion_3},
        {4, "approximation guarantee and strict solution validity", criterion_4},
        {5, "benchmark shape: exact growth, approx flatness, hit rates", criterion_5},
        {6, "selection protocol: n=1, argmin property, independence null", criterion_6},
        {7, "census income qualitative reproduction (optional)", criterion_7},
        {8, "memorize-then-select-all rule", criterion_8},
    };

    int failed = 0;
    for (const auto& entry : entries) {
        Timer timer;
        Outcome out;
        try {
            out = entry.run();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        const char* verdict = out.skipped ? "SKIP" : out.pass ? "PASS" : "FAIL";
        if (!out.skipped && !out.pass) ++failed;
        std::printf("%s criterion %d (%s): %s [%.1f s]\n", verdict, entry.number,
                    entry.title, out.detail.c_str(), timer.seconds());
        std::fflush(stdout);
    }
    if (failed > 0) std::printf("%d criteria failed\n", failed);
    return failed;
}
