#include "lda/fullinfo.hpp"

#include "lda/csv.hpp"
#include "lda/rng.hpp"

#include "json.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

namespace lda {

namespace {

using i128 = __int128;
using json = nlohmann::json;

void check_deadline(const SolveOptions& opts) {
    if (opts.deadline.time_since_epoch().count() != 0 &&
        std::chrono::steady_clock::now() > opts.deadline) {
        throw SolveTimeout();
    }
}

std::int64_t lcm_or_throw(std::int64_t a, std::int64_t b) {
    std::int64_t g = std::gcd(a, b);
    i128 l = i128(a / g) * b;
    if (l > (i128(INT64_MAX) >> 2)) {
        // The shift keeps room for sums of scaled terms below.
        throw std::runtime_error(
            "instance too large for exact solve: density denominators overflow");
    }
    return static_cast<std::int64_t>(l);
}

// All per-value scores and the baseline, rescaled to integers: disparity
// in 1/d_den units, utility in 1/u_den units.
struct IntScores {
    std::vector<std::int64_t> d;
    std::vector<std::int64_t> u;
    std::int64_t d0 = 0;
    std::int64_t u0 = 0;
    std::int64_t d_den = 1;
    std::int64_t u_den = 1;
    std::int64_t abs_d_sum = 0;
};

IntScores integerize(const std::vector<ValueScores>& scores, const Rat& delta0,
                     const Rat& u0) {
    IntScores out;
    for (const auto& s : scores) {
        out.d_den = lcm_or_throw(out.d_den, s.d.den());
        out.u_den = lcm_or_throw(out.u_den, s.u.den());
    }
    out.d_den = lcm_or_throw(out.d_den, delta0.den());
    out.u_den = lcm_or_throw(out.u_den, u0.den());
    auto scaled = [](const Rat& r, std::int64_t den) {
        i128 v = i128(r.num()) * (den / r.den());
        if (v > INT64_MAX || v < INT64_MIN) {
            throw std::runtime_error(
                "instance too large for exact solve: score range overflow");
        }
        return static_cast<std::int64_t>(v);
    };
    i128 abs_sum = 0, abs_u_sum = 0;
    for (const auto& s : scores) {
        out.d.push_back(scaled(s.d, out.d_den));
        out.u.push_back(scaled(s.u, out.u_den));
        abs_sum += std::abs(out.d.back());
        abs_u_sum += std::abs(out.u.back());
    }
    if (abs_sum > INT64_MAX || abs_u_sum > INT64_MAX) {
        throw std::runtime_error("instance too large for exact solve: score range overflow");
    }
    out.abs_d_sum = static_cast<std::int64_t>(abs_sum);
    out.d0 = scaled(delta0, out.d_den);
    out.u0 = scaled(u0, out.u_den);
    return out;
}

// Lexicographic order on subsets viewed as ascending rank sequences:
// {0,2} < {0,3} < {1} < {1,2}.
bool subset_lex_less(std::uint64_t a, std::uint64_t b) {
    while (a != 0 || b != 0) {
        if (a == 0) return true; // proper prefix
        if (b == 0) return false;
        int ra = std::countr_zero(a);
        int rb = std::countr_zero(b);
        if (ra != rb) return ra < rb;
        a &= a - 1;
        b &= b - 1;
    }
    return false;
}

bool subset_lex_less(const std::vector<std::uint64_t>& a,
                     const std::vector<std::uint64_t>& b) {
    auto bits = [](const std::vector<std::uint64_t>& mask) {
        std::vector<int> out;
        for (std::size_t w = 0; w < mask.size(); ++w) {
            std::uint64_t word = mask[w];
            while (word) {
                out.push_back(static_cast<int>(w * 64) + std::countr_zero(word));
                word &= word - 1;
            }
        }
        return out;
    };
    auto ba = bits(a), bb = bits(b);
    return std::lexicographical_compare(ba.begin(), ba.end(), bb.begin(), bb.end());
}

std::vector<std::size_t> id_ranks(const FullInfoInstance& inst) {
    std::vector<std::size_t> ranks(inst.values.size());
    std::iota(ranks.begin(), ranks.end(), std::size_t{0});
    std::sort(ranks.begin(), ranks.end(), [&](std::size_t a, std::size_t b) {
        return inst.values[a].id < inst.values[b].id;
    });
    return ranks;
}

// Converts a set of value indices into the final solution, recomputing
// the exact rational sums and enforcing Def. 4.1 as a last defence.
LdaSolution finish_solution(const FullInfoInstance& inst,
                            const std::vector<ValueScores>& scores,
                            const std::vector<std::size_t>& selected_indices,
                            const Rat& delta0, const Rat& u0, SolveStatus status) {
    LdaSolution sol;
    sol.status = status;
    sol.baseline_delta = delta0;
    sol.baseline_utility = u0;
    if (status != SolveStatus::found) {
        sol.delta = delta0;
        sol.utility = u0;
        return sol;
    }
    std::vector<std::size_t> ordered = selected_indices;
    std::sort(ordered.begin(), ordered.end());
    Rat d(0), u(0);
    for (auto idx : ordered) {
        sol.selection.push_back(inst.values[idx].id);
        d += scores[idx].d;
        u += scores[idx].u;
    }
    sol.delta = d;
    sol.utility = u;
    if (!(u >= u0) || !(d.abs() < delta0.abs())) {
        throw std::logic_error("solver returned a selection violating the LDA conditions");
    }
    return sol;
}

// ---- exact solver, mask path (n <= 64) --------------------------------

struct MaskDpResult {
    bool found = false;
    std::uint64_t mask = 0;
};

MaskDpResult mask_dp(const IntScores& z, const std::vector<std::size_t>& ranks,
                     const SolveOptions& opts) {
    const std::int64_t lo = [&] {
        std::int64_t s = 0;
        for (auto d : z.d) s += std::min<std::int64_t>(d, 0);
        return s;
    }();
    const std::int64_t hi = [&] {
        std::int64_t s = 0;
        for (auto d : z.d) s += std::max<std::int64_t>(d, 0);
        return s;
    }();
    const std::int64_t S = hi - lo + 1;
    const std::size_t bytes = static_cast<std::size_t>(S) * (8 + 8 + 1);
    if (bytes > opts.memory_cap_bytes) {
        throw std::runtime_error(
            "instance too large for exact solve: needs " + std::to_string(bytes >> 20) +
            " MiB of DP state (cap " + std::to_string(opts.memory_cap_bytes >> 20) + " MiB)");
    }

    std::vector<std::int64_t> best_u(static_cast<std::size_t>(S), 0);
    std::vector<std::uint64_t> mask(static_cast<std::size_t>(S), 0);
    std::vector<std::uint8_t> reached(static_cast<std::size_t>(S), 0);
    const std::int64_t offset = -lo;
    reached[static_cast<std::size_t>(offset)] = 1;

    for (std::size_t r = 0; r < ranks.size(); ++r) {
        check_deadline(opts);
        const std::int64_t d = z.d[ranks[r]];
        const std::int64_t u = z.u[ranks[r]];
        const std::uint64_t bit = std::uint64_t{1} << r;
        auto relax = [&](std::int64_t s) {
            const auto src = static_cast<std::size_t>(s - d);
            if (!reached[src]) return;
            const std::int64_t cu = best_u[src] + u;
            const std::uint64_t cm = mask[src] | bit;
            const auto dst = static_cast<std::size_t>(s);
            if (!reached[dst] || cu > best_u[dst] ||
                (cu == best_u[dst] && subset_lex_less(cm, mask[dst]))) {
                reached[dst] = 1;
                best_u[dst] = cu;
                mask[dst] = cm;
            }
        };
        // In-place update is safe when targets are visited so their
        // sources have not been relaxed for this item yet.
        if (d >= 0) {
            for (std::int64_t s = S - 1; s >= d; --s) relax(s);
        } else {
            for (std::int64_t s = 0; s < S + d; ++s) relax(s);
        }
    }

    const std::int64_t want = std::abs(z.d0);
    MaskDpResult out;
    std::int64_t out_u = 0;
    for (std::int64_t v = 0; v < want && !out.found; ++v) {
        for (std::int64_t signed_v : {v, -v}) {
            if (signed_v == 0 && v != 0) continue;
            const std::int64_t s = signed_v + offset;
            if (s < 0 || s >= S) continue;
            const auto idx = static_cast<std::size_t>(s);
            if (!reached[idx] || best_u[idx] < z.u0) continue;
            if (!out.found || best_u[idx] > out_u ||
                (best_u[idx] == out_u && subset_lex_less(mask[idx], out.mask))) {
                out.found = true;
                out_u = best_u[idx];
                out.mask = mask[idx];
            }
        }
    }
    return out;
}

// ---- exact solver, layered path (n > 64) ------------------------------

struct LayeredDpResult {
    bool found = false;
    std::vector<std::size_t> ranks_taken;
};

LayeredDpResult layered_dp(const IntScores& z, const std::vector<std::size_t>& ranks,
                           const SolveOptions& opts) {
    const std::size_t n = ranks.size();
    std::int64_t lo = 0, hi = 0;
    for (auto d : z.d) {
        lo += std::min<std::int64_t>(d, 0);
        hi += std::max<std::int64_t>(d, 0);
    }
    const std::int64_t S = hi - lo + 1;
    const std::size_t bytes = (n + 1) * static_cast<std::size_t>(S) * (8 + 1);
    if (bytes > opts.memory_cap_bytes) {
        throw std::runtime_error(
            "instance too large for exact solve: needs " + std::to_string(bytes >> 20) +
            " MiB of DP state (cap " + std::to_string(opts.memory_cap_bytes >> 20) + " MiB)");
    }
    const std::int64_t offset = -lo;

    std::vector<std::vector<std::int64_t>> best_u(
        n + 1, std::vector<std::int64_t>(static_cast<std::size_t>(S), 0));
    std::vector<std::vector<std::uint8_t>> reached(
        n + 1, std::vector<std::uint8_t>(static_cast<std::size_t>(S), 0));
    reached[0][static_cast<std::size_t>(offset)] = 1;

    for (std::size_t i = 0; i < n; ++i) {
        check_deadline(opts);
        const std::int64_t d = z.d[ranks[i]];
        const std::int64_t u = z.u[ranks[i]];
        for (std::int64_t s = 0; s < S; ++s) {
            const auto si = static_cast<std::size_t>(s);
            if (reached[i][si]) { // skip the item
                if (!reached[i + 1][si] || best_u[i][si] > best_u[i + 1][si]) {
                    reached[i + 1][si] = 1;
                    best_u[i + 1][si] = best_u[i][si];
                }
            }
            const std::int64_t src = s - d;
            if (src >= 0 && src < S && reached[i][static_cast<std::size_t>(src)]) {
                const std::int64_t cu = best_u[i][static_cast<std::size_t>(src)] + u;
                if (!reached[i + 1][si] || cu > best_u[i + 1][si]) {
                    reached[i + 1][si] = 1;
                    best_u[i + 1][si] = cu;
                }
            }
        }
    }

    const std::int64_t want = std::abs(z.d0);
    bool found = false;
    std::int64_t best_s = 0, best_val = 0;
    for (std::int64_t v = 0; v < want && !found; ++v) {
        for (std::int64_t signed_v : {v, -v}) {
            if (signed_v == 0 && v != 0) continue;
            const std::int64_t s = signed_v + offset;
            if (s < 0 || s >= S) continue;
            const auto idx = static_cast<std::size_t>(s);
            if (!reached[n][idx] || best_u[n][idx] < z.u0) continue;
            if (!found || best_u[n][idx] > best_val) {
                found = true;
                best_s = s;
                best_val = best_u[n][idx];
            }
        }
    }
    LayeredDpResult out;
    if (!found) return out;
    out.found = true;

    // Walk backwards, preferring "item not taken" on ties: deterministic.
    std::int64_t s = best_s, u_left = best_val;
    for (std::size_t i = n; i-- > 0;) {
        const auto si = static_cast<std::size_t>(s);
        if (reached[i][si] && best_u[i][si] == u_left) continue; // not taken
        const std::int64_t d = z.d[ranks[i]];
        const std::int64_t u = z.u[ranks[i]];
        const std::int64_t src = s - d;
        if (src < 0 || src >= S || !reached[i][static_cast<std::size_t>(src)] ||
            best_u[i][static_cast<std::size_t>(src)] != u_left - u) {
            throw std::logic_error("layered DP reconstruction lost its trail");
        }
        s = src;
        u_left -= u;
        out.ranks_taken.push_back(i);
    }
    return out;
}

// ---- shared validation --------------------------------------------------

Rat rat_in_unit_interval(const Rat& r, const std::string& what) {
    if (r < Rat(0) || r > Rat(1)) {
        throw std::invalid_argument("instance invariant violated: " + what +
                                    " outside [0,1]");
    }
    return r;
}

} // namespace

std::string to_string(SolveStatus status) {
    switch (status) {
    case SolveStatus::found: return "found";
    case SolveStatus::none_exists: return "none_exists";
    case SolveStatus::not_found_at_epsilon: return "not_found_at_epsilon";
    }
    return "unknown";
}

SolveStatus solve_status_from_string(const std::string& text) {
    if (text == "found") return SolveStatus::found;
    if (text == "none_exists") return SolveStatus::none_exists;
    if (text == "not_found_at_epsilon") return SolveStatus::not_found_at_epsilon;
    throw std::invalid_argument("unknown solve status: " + text);
}

void FullInfoInstance::validate() const {
    if (values.empty()) throw std::invalid_argument("instance invariant violated: no values");
    if (!(lambda > Rat(0))) {
        throw std::invalid_argument("instance invariant violated: lambda must be positive");
    }
    if (digits < 0) throw std::invalid_argument("instance invariant violated: digits < 0");

    std::set<std::string> ids;
    Rat sum1(0), sum2(0);
    bool fixed_point = true; // digit bounds only apply to all-decimal instances
    for (const auto& v : values) {
        if (v.id.empty()) throw std::invalid_argument("instance invariant violated: empty id");
        if (!ids.insert(v.id).second) {
            throw std::invalid_argument("instance invariant violated: duplicate id " + v.id);
        }
        sum1 += rat_in_unit_interval(v.rho1, "rho1 of " + v.id);
        sum2 += rat_in_unit_interval(v.rho2, "rho2 of " + v.id);
        rat_in_unit_interval(v.sigma, "sigma of " + v.id);
        fixed_point = fixed_point && v.rho1.terminating_decimal() &&
                      v.rho2.terminating_decimal() && v.sigma.terminating_decimal();
    }
    if (fixed_point) {
        for (const auto& v : values) {
            if (v.rho1.decimal_digits() > digits || v.rho2.decimal_digits() > digits) {
                throw std::invalid_argument("instance invariant violated: density of " +
                                            v.id + " exceeds " + std::to_string(digits) +
                                            " decimals");
            }
            if (v.sigma.decimal_digits() > 2) {
                throw std::invalid_argument("instance invariant violated: sigma of " +
                                            v.id + " exceeds 2 decimals");
            }
        }
    }
    if (sum1 != Rat(1) || sum2 != Rat(1)) {
        throw std::invalid_argument("instance invariant violated: densities must sum to 1");
    }
    std::set<std::string> base(baseline.begin(), baseline.end());
    if (base.size() != baseline.size()) {
        throw std::invalid_argument("instance invariant violated: duplicate baseline id");
    }
    for (const auto& b : baseline) {
        if (!ids.count(b)) {
            throw std::invalid_argument("unknown baseline id: " + b);
        }
    }
}

std::vector<ValueScores> value_scores(const FullInfoInstance& inst) {
    inst.validate();
    std::vector<ValueScores> out;
    out.reserve(inst.values.size());
    for (const auto& v : inst.values) {
        ValueScores s;
        s.id = v.id;
        s.d = v.rho1 - v.rho2;
        Rat mean = (v.rho1 + v.rho2) / Rat(2);
        s.u = mean * (v.sigma - inst.lambda * (Rat(1) - v.sigma));
        out.push_back(std::move(s));
    }
    return out;
}

std::pair<Rat, Rat> baseline_scores(const FullInfoInstance& inst) {
    auto scores = value_scores(inst);
    std::set<std::string> base(inst.baseline.begin(), inst.baseline.end());
    Rat d(0), u(0);
    for (std::size_t i = 0; i < inst.values.size(); ++i) {
        if (base.count(inst.values[i].id)) {
            d += scores[i].d;
            u += scores[i].u;
        }
    }
    return {d, u};
}

LdaSolution solve_exact(const FullInfoInstance& inst, const SolveOptions& opts) {
    auto scores = value_scores(inst);
    auto [delta0, u0] = baseline_scores(inst);
    auto z = integerize(scores, delta0, u0);
    auto ranks = id_ranks(inst);

    if (z.d0 == 0) {
        // No selection can push |delta| strictly below zero.
        return finish_solution(inst, scores, {}, delta0, u0, SolveStatus::none_exists);
    }

    std::vector<std::size_t> selected;
    bool found = false;
    if (inst.values.size() <= 64 && !opts.force_layered) {
        auto res = mask_dp(z, ranks, opts);
        found = res.found;
        if (found) {
            for (std::size_t r = 0; r < ranks.size(); ++r) {
                if (res.mask & (std::uint64_t{1} << r)) selected.push_back(ranks[r]);
            }
        }
    } else {
        auto res = layered_dp(z, ranks, opts);
        found = res.found;
        if (found) {
            for (auto r : res.ranks_taken) selected.push_back(ranks[r]);
        }
    }
    return finish_solution(inst, scores, selected, delta0, u0,
                           found ? SolveStatus::found : SolveStatus::none_exists);
}

LdaSolution solve_approx(const FullInfoInstance& inst, double epsilon,
                         const SolveOptions& opts) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    auto scores = value_scores(inst);
    auto [delta0, u0] = baseline_scores(inst);

    if (delta0 == Rat(0)) {
        auto sol = finish_solution(inst, scores, {}, delta0, u0,
                                   SolveStatus::not_found_at_epsilon);
        sol.note = "baseline disparity is zero; no epsilon-approximate alternative can exist";
        return sol;
    }

    auto z = integerize(scores, delta0, u0);
    auto ranks = id_ranks(inst);
    const std::size_t n = ranks.size();
    const std::size_t words = (n + 63) / 64;

    struct AState {
        std::int64_t d;
        std::int64_t u;
        std::vector<std::uint64_t> mask;
    };

    const std::int64_t want = std::abs(z.d0);
    const long double trim_width = static_cast<long double>(epsilon) * want /
                                   (2.0L * static_cast<long double>(n) * (1.0L + epsilon));
    const std::int64_t slack =
        static_cast<std::int64_t>(std::ceil(static_cast<long double>(n) * trim_width));

    std::vector<std::int64_t> suffix_abs(n + 1, 0);
    for (std::size_t i = n; i-- > 0;) {
        suffix_abs[i] = suffix_abs[i + 1] + std::abs(z.d[ranks[i]]);
    }

    std::vector<AState> list;
    list.push_back({0, 0, std::vector<std::uint64_t>(words, 0)});

    auto state_better = [](const AState& a, const AState& b) {
        if (a.u != b.u) return a.u > b.u;
        return subset_lex_less(a.mask, b.mask);
    };

    for (std::size_t i = 0; i < n; ++i) {
        check_deadline(opts);
        const std::int64_t d = z.d[ranks[i]];
        const std::int64_t u = z.u[ranks[i]];
        const std::int64_t bound = want + suffix_abs[i + 1] + slack;

        std::vector<AState> merged;
        merged.reserve(list.size() * 2);
        for (const auto& st : list) {
            merged.push_back(st);
            AState taken = st;
            taken.d += d;
            taken.u += u;
            taken.mask[i / 64] |= std::uint64_t{1} << (i % 64);
            if (std::abs(taken.d) <= bound) merged.push_back(std::move(taken));
        }
        std::sort(merged.begin(), merged.end(), [&](const AState& a, const AState& b) {
            if (a.d != b.d) return a.d < b.d;
            return state_better(a, b);
        });

        // Trim: one representative (max utility) per sign-and-width bucket.
        list.clear();
        auto bucket = [&](std::int64_t dv) -> std::pair<int, std::int64_t> {
            int sign = dv < 0 ? -1 : dv > 0 ? 1 : 0;
            if (trim_width <= 1.0L) return {sign, dv}; // finer than integers: keep exact
            auto idx = static_cast<std::int64_t>(
                std::floor(static_cast<long double>(std::abs(dv)) / trim_width));
            return {sign, idx};
        };
        for (auto& st : merged) {
            if (!list.empty() && bucket(list.back().d) == bucket(st.d)) {
                if (state_better(st, list.back())) list.back() = std::move(st);
            } else {
                list.push_back(std::move(st));
            }
        }
    }

    const AState* best = nullptr;
    for (const auto& st : list) {
        if (st.u < z.u0 || std::abs(st.d) >= want) continue;
        if (best == nullptr || std::abs(st.d) < std::abs(best->d) ||
            (std::abs(st.d) == std::abs(best->d) && state_better(st, *best))) {
            best = &st;
        }
    }
    if (best == nullptr) {
        auto sol = finish_solution(inst, scores, {}, delta0, u0,
                                   SolveStatus::not_found_at_epsilon);
        sol.note = "no selection found within the (1+epsilon) disparity band";
        return sol;
    }
    std::vector<std::size_t> selected;
    for (std::size_t i = 0; i < n; ++i) {
        if (best->mask[i / 64] & (std::uint64_t{1} << (i % 64))) {
            selected.push_back(ranks[i]);
        }
    }
    return finish_solution(inst, scores, selected, delta0, u0, SolveStatus::found);
}

FullInfoInstance reduce_subset_sum(const SubsetSumInstance& w, const Rat& lambda) {
    if (w.weights.empty()) throw std::invalid_argument("weights must be nonempty");
    if (!(lambda > Rat(0))) throw std::invalid_argument("lambda must be positive");
    for (auto wi : w.weights) {
        if (wi == 0) throw std::invalid_argument("weights must be nonzero");
    }

    std::int64_t pos = 0, neg = 0;
    for (auto wi : w.weights) (wi > 0 ? pos += wi : neg -= wi);
    const std::int64_t abs_sum = pos + neg;            // sum of |w_i|
    const std::int64_t imbalance = 2 * (pos - neg) + 1; // group-1 head start, always odd

    // Smallest integer strictly above (sum|w| + 1/2) / lambda.
    const std::int64_t alpha =
        (2 * abs_sum + 1) * lambda.den() / (2 * lambda.num()) + 1;

    const std::int64_t balancer = std::abs(imbalance); // x** persons on the light side
    const std::int64_t group_size = std::max(2 * pos + 1, 2 * neg) + alpha;

    FullInfoInstance inst;
    inst.lambda = lambda;
    const Rat m(group_size);

    for (std::size_t i = 0; i < w.weights.size(); ++i) {
        ValueRecord v;
        v.id = "x" + std::to_string(i + 1);
        const std::int64_t wi = w.weights[i];
        if (wi > 0) {
            v.rho1 = Rat(2 * wi) / m;
            v.rho2 = Rat(0);
        } else {
            v.rho1 = Rat(0);
            v.rho2 = Rat(-2 * wi) / m;
        }
        v.sigma = Rat(1);
        inst.values.push_back(std::move(v));
    }

    ValueRecord star;
    star.id = "x*";
    star.rho1 = Rat(1) / m;
    star.rho2 = Rat(0);
    star.sigma = Rat(1);
    inst.values.push_back(std::move(star));

    ValueRecord slack;
    slack.id = "x**";
    slack.rho1 = Rat(alpha + (imbalance < 0 ? balancer : 0)) / m;
    slack.rho2 = Rat(alpha + (imbalance > 0 ? balancer : 0)) / m;
    slack.sigma = Rat(0);
    inst.values.push_back(std::move(slack));

    inst.baseline = {"x*"};
    // Densities share the denominator `group_size`; when that happens to
    // have a finite decimal expansion, record the resulting precision.
    inst.digits = 0;
    for (const auto& v : inst.values) {
        if (!v.rho1.terminating_decimal() || !v.rho2.terminating_decimal()) {
            inst.digits = 0;
            break;
        }
        inst.digits = std::max({inst.digits, v.rho1.decimal_digits(),
                                v.rho2.decimal_digits()});
    }
    inst.validate();
    return inst;
}

std::vector<std::int64_t> extract_subset_sum_solution(const SubsetSumInstance& w,
                                                      const LdaSolution& solution) {
    if (solution.status != SolveStatus::found) {
        throw std::invalid_argument("no solution to extract: status is " +
                                    to_string(solution.status));
    }
    std::vector<std::int64_t> subset;
    std::int64_t sum = 0;
    for (const auto& id : solution.selection) {
        if (id == "x*" || id == "x**") {
            throw std::logic_error("reduction solution selected slack value " + id);
        }
        if (id.size() < 2 || id[0] != 'x') {
            throw std::invalid_argument("unexpected value id in selection: " + id);
        }
        const std::size_t index = std::stoull(id.substr(1));
        if (index == 0 || index > w.weights.size()) {
            throw std::invalid_argument("value id out of range: " + id);
        }
        subset.push_back(w.weights[index - 1]);
        sum += subset.back();
    }
    if (sum != 0) {
        throw std::logic_error("extracted subset does not sum to zero");
    }
    return subset;
}

namespace {

// One density vector at `digits` decimals summing to exactly 1: uniform
// draws, normalized, rounded, residual pushed onto the largest entry.
std::vector<Rat> random_density(RandomStream& rng, int n, int digits) {
    std::int64_t scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<double> raw(static_cast<std::size_t>(n));
        double total = 0.0;
        for (auto& v : raw) {
            v = rng.next_unit() + 1e-9;
            total += v;
        }
        std::vector<Rat> out;
        out.reserve(raw.size());
        Rat sum(0);
        std::size_t largest = 0;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            auto units = static_cast<std::int64_t>(std::llround(raw[i] / total * scale));
            out.emplace_back(units, scale);
            sum += out.back();
            if (out[i] > out[largest]) largest = i;
        }
        out[largest] += Rat(1) - sum;
        bool ok = true;
        for (const auto& r : out) {
            if (r < Rat(0) || r > Rat(1)) ok = false;
        }
        if (ok) return out;
    }
    throw std::runtime_error("density generation failed to normalize after 64 attempts");
}

} // namespace

FullInfoInstance generate_instance(int n_options, int max_digits, std::uint64_t seed) {
    if (n_options < 2) throw std::invalid_argument("n_options must be at least 2");
    if (max_digits < 1) throw std::invalid_argument("max_digits must be at least 1");

    RandomStream rng(seed);
    FullInfoInstance inst;
    inst.lambda = Rat(1);
    inst.digits = max_digits;

    auto rho1 = random_density(rng, n_options, max_digits);
    auto rho2 = random_density(rng, n_options, max_digits);
    auto sigma = random_density(rng, n_options, 2);

    for (int i = 0; i < n_options; ++i) {
        ValueRecord v;
        v.id = "v" + std::to_string(i + 1);
        v.rho1 = rho1[static_cast<std::size_t>(i)];
        v.rho2 = rho2[static_cast<std::size_t>(i)];
        v.sigma = sigma[static_cast<std::size_t>(i)];
        inst.values.push_back(std::move(v));
    }

    // Random nonempty proper subset as the baseline.
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<std::string> base;
        for (const auto& v : inst.values) {
            if (rng.next_u64() & 1) base.push_back(v.id);
        }
        if (!base.empty() && base.size() < inst.values.size()) {
            inst.baseline = std::move(base);
            break;
        }
    }
    if (inst.baseline.empty()) inst.baseline = {inst.values.front().id};

    inst.validate();
    return inst;
}

int input_size_digits(const FullInfoInstance& inst) {
    int total = 0;
    for (const auto& v : inst.values) {
        total += v.sigma.decimal_digits();
        total += v.rho1.decimal_digits();
        total += v.rho2.decimal_digits();
    }
    return total;
}

void write_instance(const FullInfoInstance& inst, const std::string& csv_path,
                    const std::string& json_path) {
    csv::Table table;
    table.header = {"id", "rho1", "rho2", "sigma"};
    for (const auto& v : inst.values) {
        table.rows.push_back(
            {v.id, v.rho1.to_string(), v.rho2.to_string(), v.sigma.to_string()});
    }
    csv::write_file(csv_path, table);

    json meta;
    meta["lambda"] = inst.lambda.to_string();
    meta["baseline"] = inst.baseline;
    meta["digits"] = inst.digits;
    std::ofstream out(json_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open file for writing: " + json_path);
    out << meta.dump(2) << "\n";
}

FullInfoInstance read_instance(const std::string& csv_path, const std::string& json_path) {
    auto table = csv::read_file(csv_path);
    const int col_id = table.find_column("id");
    const int col_r1 = table.find_column("rho1");
    const int col_r2 = table.find_column("rho2");
    const int col_sg = table.find_column("sigma");
    if (col_id < 0 || col_r1 < 0 || col_r2 < 0 || col_sg < 0) {
        throw std::runtime_error("parse error in " + csv_path +
                                 ": header must contain id,rho1,rho2,sigma");
    }

    FullInfoInstance inst;
    for (std::size_t row = 0; row < table.rows.size(); ++row) {
        const auto& r = table.rows[row];
        auto cell = [&](int col) -> const std::string& {
            if (col >= static_cast<int>(r.size())) {
                throw std::runtime_error("parse error at line " + std::to_string(row + 2) +
                                         " of " + csv_path + ": missing field");
            }
            return r[static_cast<std::size_t>(col)];
        };
        try {
            ValueRecord v;
            v.id = csv::trim(cell(col_id));
            v.rho1 = Rat::parse(cell(col_r1));
            v.rho2 = Rat::parse(cell(col_r2));
            v.sigma = Rat::parse(cell(col_sg));
            inst.values.push_back(std::move(v));
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error("parse error at line " + std::to_string(row + 2) +
                                     " of " + csv_path + ": " + e.what());
        }
    }

    std::ifstream in(json_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + json_path);
    json meta;
    try {
        in >> meta;
    } catch (const json::exception& e) {
        throw std::runtime_error("parse error in " + json_path + ": " + e.what());
    }
    if (meta.contains("lambda")) {
        const auto& l = meta["lambda"];
        inst.lambda = l.is_string() ? Rat::parse(l.get<std::string>()) : Rat::parse(l.dump());
    }
    if (meta.contains("baseline")) {
        inst.baseline = meta["baseline"].get<std::vector<std::string>>();
    }
    if (meta.contains("digits")) inst.digits = meta["digits"].get<int>();

    inst.validate();
    return inst;
}

} // namespace lda
