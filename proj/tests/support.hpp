#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <vector>

namespace cmm::testing {

// Largest bucket deviation in units of the binomial standard deviation.
inline double max_sigma(const std::vector<double>& p, const std::vector<std::size_t>& counts, std::size_t total) {
    double worst = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double expect = p[i] * static_cast<double>(total);
        const double sd = std::sqrt(static_cast<double>(total) * p[i] * (1 - p[i]));
        const double got = i < counts.size() ? static_cast<double>(counts[i]) : 0.0;
        if (sd == 0.0) {
            if (got != expect) return INFINITY;
            continue;
        }
        worst = std::max(worst, std::abs(got - expect) / sd);
    }
    return worst;
}

template <class K>
double total_variation(const std::map<K, double>& a, const std::map<K, double>& b) {
    std::map<K, double> diff = a;
    for (const auto& [k, p] : b) diff[k] -= p;
    double s = 0.0;
    for (const auto& [k, d] : diff) s += std::abs(d);
    return s / 2;
}

}  // namespace cmm::testing
