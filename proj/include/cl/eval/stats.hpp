#pragma once

#include <span>
#include <string_view>

namespace cl::eval {

// BGreater tests H1 "B tends to be larger than A" (small U_A is evidence).
enum class Alternative { BGreater, AGreater, TwoSided };

struct MannWhitney {
    double u_a = 0;  // R_A - nA(nA+1)/2, midranks for ties
    double u_b = 0;
    double p = 1;
    bool exact = false;
    double z = 0;  // normal approximation only
};

// Exact permutation distribution (over the midranks actually observed)
// when nA + nB <= 12, otherwise the normal approximation with tie and
// continuity correction. EmptySample when either side is empty.
MannWhitney mann_whitney_u(std::span<const double> a, std::span<const double> b,
                           Alternative alt = Alternative::BGreater);

inline constexpr std::size_t kExactLimit = 12;

std::string_view alternative_name(Alternative alt);

}  // namespace cl::eval
