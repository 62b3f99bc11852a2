#include "cl/eval/stats.hpp"

#include "cl/common/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace cl::eval {

namespace {

std::vector<double> midranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j < idx.size() && v[idx[j]] == v[idx[i]]) ++j;
        const double mid = (static_cast<double>(i + j) + 1.0) / 2.0;  // 1-based average
        for (std::size_t k = i; k < j; ++k) r[idx[k]] = mid;
        i = j;
    }
    return r;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

std::string_view alternative_name(Alternative alt) {
    switch (alt) {
        case Alternative::BGreater: return "b_greater";
        case Alternative::AGreater: return "a_greater";
        case Alternative::TwoSided: return "two_sided";
    }
    return "?";
}

MannWhitney mann_whitney_u(std::span<const double> a, std::span<const double> b, Alternative alt) {
    if (a.empty() || b.empty()) throw EmptySample("Mann-Whitney U needs two non-empty samples");
    for (double v : a)
        if (!std::isfinite(v)) throw InvalidArgument("Mann-Whitney U: non-finite value");
    for (double v : b)
        if (!std::isfinite(v)) throw InvalidArgument("Mann-Whitney U: non-finite value");
    const std::size_t na = a.size(), nb = b.size(), n = na + nb;
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    const auto ranks = midranks(pooled);
    const double base = static_cast<double>(na) * static_cast<double>(na + 1) / 2.0;
    double ra = 0;
    for (std::size_t i = 0; i < na; ++i) ra += ranks[i];

    MannWhitney out;
    out.u_a = ra - base;
    out.u_b = static_cast<double>(na) * static_cast<double>(nb) - out.u_a;
    const double mean = static_cast<double>(na) * static_cast<double>(nb) / 2.0;

    if (n <= kExactLimit) {
        // every way of choosing which ranks belong to A
        out.exact = true;
        std::size_t total = 0, le = 0, ge = 0, far = 0;
        const double eps = 1e-9;
        std::vector<int> pick(n, 0);
        std::fill(pick.begin(), pick.begin() + static_cast<long>(na), 1);
        std::sort(pick.begin(), pick.end());
        do {
            double r = 0;
            for (std::size_t i = 0; i < n; ++i)
                if (pick[i]) r += ranks[i];
            const double u = r - base;
            ++total;
            if (u <= out.u_a + eps) ++le;
            if (u >= out.u_a - eps) ++ge;
            if (std::fabs(u - mean) >= std::fabs(out.u_a - mean) - eps) ++far;
        } while (std::next_permutation(pick.begin(), pick.end()));
        const double t = static_cast<double>(total);
        out.p = alt == Alternative::BGreater  ? static_cast<double>(le) / t
                : alt == Alternative::AGreater ? static_cast<double>(ge) / t
                                               : static_cast<double>(far) / t;
        return out;
    }

    std::vector<double> sorted = pooled;
    std::sort(sorted.begin(), sorted.end());
    double ties = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && sorted[j] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i);
        ties += t * t * t - t;
        i = j;
    }
    const double dn = static_cast<double>(n);
    const double var =
        static_cast<double>(na) * static_cast<double>(nb) / 12.0 * ((dn + 1.0) - ties / (dn * (dn - 1.0)));
    if (var <= 0) {
        out.p = 1.0;
        return out;
    }
    const double sd = std::sqrt(var);
    switch (alt) {
        case Alternative::BGreater:
            out.z = (out.u_a - mean + 0.5) / sd;
            out.p = normal_cdf(out.z);
            break;
        case Alternative::AGreater:
            out.z = (out.u_a - mean - 0.5) / sd;
            out.p = 1.0 - normal_cdf(out.z);
            break;
        case Alternative::TwoSided: {
            const double d = std::max(std::fabs(out.u_a - mean) - 0.5, 0.0);
            out.z = d / sd;
            out.p = std::min(1.0, 2.0 * (1.0 - normal_cdf(out.z)));
            break;
        }
    }
    return out;
}

}  // namespace cl::eval
