#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

namespace cmm {

using Degree = std::uint32_t;

// Finite integer-valued measure on the nonnegative integers, stored sparsely.
class CountingMeasure {
public:
    using Atoms = std::map<Degree, std::uint64_t>;

    CountingMeasure() = default;
    CountingMeasure(std::initializer_list<Atoms::value_type> atoms);

    // One atom per entry of `degrees`.
    static CountingMeasure from_degrees(std::span<const Degree> degrees);

    std::uint64_t count(Degree y) const;
    std::uint64_t mass() const { return mass_; }
    bool empty() const { return mass_ == 0; }
    // Largest degree carrying mass, 0 for the null measure.
    Degree max_degree() const { return atoms_.empty() ? 0 : atoms_.rbegin()->first; }
    const Atoms& atoms() const { return atoms_; }

    void add(Degree y, std::uint64_t c = 1);
    // Throws AtomMissing if there is no atom at y.
    void remove(Degree y);
    // Moves one unit from y to y - by. Throws AtomMissing / NegativeDegree.
    void shift_down(Degree y, Degree by);

    bool operator==(const CountingMeasure& o) const { return atoms_ == o.atoms_; }

private:
    Atoms atoms_;
    std::uint64_t mass_ = 0;
};

// Nonnegative weights on {0, ..., N}.
class RealMeasure {
public:
    RealMeasure() : w_(1, 0.0) {}
    explicit RealMeasure(std::vector<double> weights);

    std::size_t bound() const { return w_.size() - 1; }
    double operator[](std::size_t i) const { return i < w_.size() ? w_[i] : 0.0; }
    double mass() const { return mass_; }
    // Mass on the positive integers.
    double positive_mass() const { return mass_ - w_[0]; }
    const std::vector<double>& weights() const { return w_; }

private:
    std::vector<double> w_;
    double mass_ = 0.0;
};

struct SizeBiasedDist {
    std::vector<double> cdf;   // F(0..N)
    std::vector<double> tail;  // 1 - F(0..N)
};

CountingMeasure remove_atom(CountingMeasure m, Degree y);
CountingMeasure shift_atom_down(CountingMeasure m, Degree y, Degree by);

double moment(const CountingMeasure& m, unsigned p);
double moment(const RealMeasure& m, unsigned p);

// Throws SupportExceeded if m has an atom above N.
RealMeasure normalize(const CountingMeasure& m, std::uint64_t n, Degree N);
RealMeasure normalize(const CountingMeasure& m, std::uint64_t n);

// Throws ZeroFirstMoment when the first moment vanishes.
SizeBiasedDist size_biased(const CountingMeasure& m);
SizeBiasedDist size_biased(const RealMeasure& m);

void write_csv(std::ostream& os, const CountingMeasure& m);
void write_csv(std::ostream& os, const RealMeasure& m);

}  // namespace cmm
