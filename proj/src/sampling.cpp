#include "georom/sampling.hpp"

#include "georom/geometry.hpp"

#include <numeric>
#include <random>

namespace georom {

namespace {

// [0,1) from the top 53 bits; std::uniform_real_distribution is
// implementation-defined and would break cross-platform reproducibility.
double unit_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    // rejection sampling, no modulo bias
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = rng();
    while (v >= limit) v = rng();
    return v % n;
}

} // namespace

Eigen::MatrixXd latin_hypercube(int n_samples, const std::vector<std::pair<double, double>>& ranges,
                                std::uint64_t seed) {
    if (n_samples < 1) throw invalid_argument("latin_hypercube: n_samples must be >= 1");
    if (ranges.empty()) throw invalid_argument("latin_hypercube: empty ranges");
    for (const auto& [lo, hi] : ranges)
        if (!(lo < hi)) throw invalid_argument("latin_hypercube: range must satisfy lo < hi");

    const int n_dims = static_cast<int>(ranges.size());
    Eigen::MatrixXd out(n_samples, n_dims);
    std::mt19937_64 rng(seed);

    std::vector<int> strata(static_cast<size_t>(n_samples));
    for (int d = 0; d < n_dims; ++d) {
        std::iota(strata.begin(), strata.end(), 0);
        for (int i = n_samples - 1; i > 0; --i)
            std::swap(strata[static_cast<size_t>(i)],
                      strata[bounded(rng, static_cast<std::uint64_t>(i) + 1)]);
        const auto [lo, hi] = ranges[static_cast<size_t>(d)];
        const double width = (hi - lo) / n_samples;
        for (int i = 0; i < n_samples; ++i)
            out(i, d) = lo + (strata[static_cast<size_t>(i)] + unit_double(rng)) * width;
    }
    return out;
}

} // namespace georom
