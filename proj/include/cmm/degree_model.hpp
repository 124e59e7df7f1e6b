#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cmm/measure.hpp"
#include "cmm/rng.hpp"

namespace cmm {

struct Regular {
    Degree d;
};
struct UniformRange {
    Degree a, b;
};
struct Poisson {
    double rho;
};
struct Explicit {
    std::vector<double> pmf;  // pmf[k] = P(degree = k)
};

// Degrees at or above this value are never sampled from the Poisson model.
inline constexpr Degree kPoissonCap = 10000;

class DegreeModel {
public:
    using Variant = std::variant<Regular, UniformRange, Poisson, Explicit>;

    static DegreeModel regular(Degree d);
    static DegreeModel uniform(Degree a, Degree b);
    static DegreeModel poisson(double rho);
    static DegreeModel explicit_pmf(std::vector<double> pmf);

    // "regular:d=3", "uniform:a=1,b=5", "poisson:rho=2.0", "explicit:file=pmf.csv".
    // Throws InvalidModel on malformed specs and Io when the pmf file can't be read.
    static DegreeModel parse(const std::string& spec);

    const Variant& variant() const { return v_; }
    const std::string& name() const { return name_; }

    double pmf(Degree k) const;
    // Largest degree with positive probability; empty for unbounded support.
    std::optional<Degree> support_max() const;
    bool bounded() const { return support_max().has_value(); }

    Degree sample(Rng& rng) const;

private:
    DegreeModel(Variant v, std::string name);

    Variant v_;
    std::string name_;
    std::vector<double> cdf_;  // inversion table for Poisson and Explicit
};

struct DegreeVector {
    std::vector<Degree> degrees;
    bool evenized = false;

    std::uint64_t sum() const;
    std::size_t size() const { return degrees.size(); }
};

// n i.i.d. draws; an odd total is fixed by decrementing the last positive entry.
DegreeVector sample_degree_vector(const DegreeModel& model, std::size_t n, Rng& rng);

// pmf on {0..N'} with N' >= N the smallest bound whose tail is below eps; the
// tail is folded into the last bucket. Finite-support models are exact and
// require support_max() <= N.
RealMeasure pmf_truncated(const DegreeModel& model, Degree N, double eps = 1e-12);

// CSV rows "degree,prob"; blank lines, '#' comments and a header are skipped.
std::vector<double> read_pmf_csv(const std::string& path);

}  // namespace cmm
