#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <utility>
#include <vector>

namespace georom {

/// Latin hypercube sample: n_samples rows, one column per range. Every column
/// places exactly one sample in each of the n equal-width strata of [lo, hi].
/// Reproducible across platforms for a given seed (no std distributions).
Eigen::MatrixXd latin_hypercube(int n_samples, const std::vector<std::pair<double, double>>& ranges,
                                std::uint64_t seed);

} // namespace georom
