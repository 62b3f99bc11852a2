#include "cl/eval/folds.hpp"

#include "cl/common/error.hpp"
#include "cl/common/rng.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace cl::eval {

std::vector<Fold> stratified_folds(std::span<const int> y, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw InvalidArgument("need at least two folds");
    std::map<int, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < y.size(); ++i) members[y[i]].push_back(i);
    for (const auto& [label, rows] : members)
        if (rows.size() < k)
            throw TooFewPerClass("class " + std::to_string(label) + " has " + std::to_string(rows.size()) +
                                 " instances, fewer than the " + std::to_string(k) + " folds");
    Rng rng(seed);
    std::vector<Fold> folds(k);
    std::size_t next = 0;
    for (auto& [label, rows] : members) {
        rng.shuffle(rows);
        for (auto r : rows) {
            folds[next].push_back(r);
            next = (next + 1) % k;
        }
    }
    for (auto& f : folds) std::sort(f.begin(), f.end());
    return folds;
}

Fold complement(const std::vector<Fold>& folds, std::size_t held_out) {
    Fold out;
    for (std::size_t f = 0; f < folds.size(); ++f)
        if (f != held_out) out.insert(out.end(), folds[f].begin(), folds[f].end());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace cl::eval
