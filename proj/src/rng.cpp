#include "lda/rng.hpp"

#include <cmath>
#include <numbers>

namespace lda {

double RandomStream::next_gaussian() {
    // Box-Muller on two fresh uniforms; discard the sibling value.
    double u1 = next_unit();
    double u2 = next_unit();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<std::size_t> RandomStream::sample_without_replacement(std::size_t n,
                                                                  std::size_t k) {
    // Partial Fisher-Yates over an index vector; O(n) setup, O(k) swaps.
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    if (k > n) k = n;
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + static_cast<std::size_t>(next_below(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
}

} // namespace lda
