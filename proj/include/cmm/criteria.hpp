#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cmm/measure.hpp"
#include "cmm/rng.hpp"

namespace cmm {

enum class CriterionKind { Greedy, UniMin, UniMax, MinMin, MaxMax };

inline constexpr CriterionKind kAllCriteria[] = {CriterionKind::Greedy, CriterionKind::UniMin, CriterionKind::UniMax,
                                                 CriterionKind::MinMin, CriterionKind::MaxMax};

// greedy | uni-min | uni-max | min-min | max-max
std::string_view criterion_name(CriterionKind k);
CriterionKind parse_criterion(std::string_view name);  // throws InvalidArgument

// Whether the criterion has a derived fluid kernel.
bool has_kernel(CriterionKind k);

// Index of the explored node among candidates with the given availabilities.
std::size_t choose_first(CriterionKind kind, std::span<const Degree> availabilities, Rng& rng);
// Index of the match among the explored node's neighbors.
std::size_t choose_match(CriterionKind kind, std::span<const Degree> availabilities, Rng& rng);

// Uniform index over the whole array, its argmin or its argmax.
enum class Pick { Uniform, Min, Max };
Pick first_rule(CriterionKind kind);
Pick match_rule(CriterionKind kind);
std::size_t pick_index(Pick rule, std::span<const Degree> values, Rng& rng);

// Law of the explored node's availability (K) and of its match's availability
// given K = k (K'), for a measure on {0..N}. Arrays are indexed by degree;
// entry 0 is always 0.
class KernelPair {
public:
    std::size_t bound() const { return N_; }
    const std::vector<double>& K() const { return K_; }
    std::span<const double> kprime(Degree k) const;
    bool k_independent() const { return indep_; }

private:
    friend KernelPair kernel_pair(CriterionKind kind, const RealMeasure& mu);

    std::size_t N_ = 0;
    bool indep_ = false;
    std::vector<double> K_;
    std::vector<double> table_;  // one row (k-independent) or N rows for k = 1..N
};

// Throws ZeroMass without mass on the positive integers and UnsupportedKernel
// for criteria without a derived kernel.
KernelPair kernel_pair(CriterionKind kind, const RealMeasure& mu);

}  // namespace cmm
