#include "cmm/criteria.hpp"

#include <algorithm>

#include "cmm/error.hpp"

namespace cmm {

std::string_view criterion_name(CriterionKind k) {
    switch (k) {
        case CriterionKind::Greedy: return "greedy";
        case CriterionKind::UniMin: return "uni-min";
        case CriterionKind::UniMax: return "uni-max";
        case CriterionKind::MinMin: return "min-min";
        case CriterionKind::MaxMax: return "max-max";
    }
    return "?";
}

CriterionKind parse_criterion(std::string_view name) {
    std::string s(name);
    std::replace(s.begin(), s.end(), '_', '-');
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (CriterionKind k : kAllCriteria)
        if (criterion_name(k) == s) return k;
    throw Error(Errc::InvalidArgument, "unknown criterion '" + std::string(name) + "'");
}

bool has_kernel(CriterionKind k) {
    return k == CriterionKind::Greedy || k == CriterionKind::UniMin || k == CriterionKind::UniMax;
}

Pick first_rule(CriterionKind kind) {
    switch (kind) {
        case CriterionKind::MinMin: return Pick::Min;
        case CriterionKind::MaxMax: return Pick::Max;
        default: return Pick::Uniform;
    }
}

Pick match_rule(CriterionKind kind) {
    switch (kind) {
        case CriterionKind::Greedy: return Pick::Uniform;
        case CriterionKind::UniMin:
        case CriterionKind::MinMin: return Pick::Min;
        default: return Pick::Max;
    }
}

std::size_t pick_index(Pick rule, std::span<const Degree> values, Rng& rng) {
    if (values.empty()) throw Error(Errc::EmptyChoiceSet, "nothing to choose from");
    if (rule == Pick::Uniform) return rng.uniform_index(values.size());
    Degree best = values[0];
    std::size_t ties = 0;
    for (Degree v : values) {
        if (v == best) {
            ++ties;
        } else if (rule == Pick::Min ? v < best : v > best) {
            best = v;
            ties = 1;
        }
    }
    std::uint64_t r = ties == 1 ? 0 : rng.uniform_index(ties);
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] == best && r-- == 0) return i;
    return values.size() - 1;  // unreachable
}

std::size_t choose_first(CriterionKind kind, std::span<const Degree> availabilities, Rng& rng) {
    return pick_index(first_rule(kind), availabilities, rng);
}

std::size_t choose_match(CriterionKind kind, std::span<const Degree> availabilities, Rng& rng) {
    return pick_index(match_rule(kind), availabilities, rng);
}

std::span<const double> KernelPair::kprime(Degree k) const {
    if (k == 0 || k > N_) throw Error(Errc::InvalidArgument, "kprime index out of range");
    const std::size_t row = indep_ ? 0 : k - 1;
    return {table_.data() + row * (N_ + 1), N_ + 1};
}

KernelPair kernel_pair(CriterionKind kind, const RealMeasure& mu) {
    if (!has_kernel(kind))
        throw Error(Errc::UnsupportedKernel, std::string(criterion_name(kind)) + " has no fluid kernel");
    const double pos = mu.positive_mass();
    if (!(pos > 0.0)) throw Error(Errc::ZeroMass, "no mass on positive degrees");

    KernelPair kp;
    const std::size_t N = mu.bound();
    const std::size_t W = N + 1;
    kp.N_ = N;
    kp.K_.assign(W, 0.0);
    for (std::size_t k = 1; k <= N; ++k) kp.K_[k] = mu[k] / pos;

    if (kind == CriterionKind::Greedy) {
        kp.indep_ = true;
        kp.table_.assign(W, 0.0);
        const double m1 = moment(mu, 1);
        for (std::size_t y = 1; y <= N; ++y) kp.table_[y] = static_cast<double>(y) * mu[y] / m1;
        return kp;
    }

    // Minimum of k size-biased draws: P(min = y) = Fbar(y-1)^k - Fbar(y)^k.
    // Maximum: P(max = y) = F(y)^k - F(y-1)^k. Powers built up row by row.
    const SizeBiasedDist sb = size_biased(mu);
    const bool is_min = kind == CriterionKind::UniMin;
    const std::vector<double>& base = is_min ? sb.tail : sb.cdf;
    std::vector<double> pw(W, 1.0);
    kp.table_.assign(N * W, 0.0);
    for (std::size_t k = 1; k <= N; ++k) {
        for (std::size_t y = 0; y <= N; ++y) pw[y] *= base[y];
        double* row = kp.table_.data() + (k - 1) * W;
        for (std::size_t y = 1; y <= N; ++y) row[y] = is_min ? pw[y - 1] - pw[y] : pw[y] - pw[y - 1];
    }
    return kp;
}

}  // namespace cmm
