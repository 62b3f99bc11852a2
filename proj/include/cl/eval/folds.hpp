#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace cl::eval {

using Fold = std::vector<std::size_t>;  // ascending instance indices

// k stratified folds. Each class is shuffled and dealt round-robin, the
// deal continuing where the previous class stopped so fold sizes stay
// within one of each other. TooFewPerClass when a class has fewer than k rows.
std::vector<Fold> stratified_folds(std::span<const int> y, std::size_t k, std::uint64_t seed);

// Everything in [0, n) outside fold `held_out`.
Fold complement(const std::vector<Fold>& folds, std::size_t held_out);

}  // namespace cl::eval
