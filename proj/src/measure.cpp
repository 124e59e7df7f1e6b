#include "cmm/measure.hpp"

#include <iomanip>
#include <ostream>

#include "cmm/error.hpp"

namespace cmm {

CountingMeasure::CountingMeasure(std::initializer_list<Atoms::value_type> atoms) {
    for (const auto& [y, c] : atoms) add(y, c);
}

CountingMeasure CountingMeasure::from_degrees(std::span<const Degree> degrees) {
    CountingMeasure m;
    for (Degree d : degrees) m.add(d);
    return m;
}

std::uint64_t CountingMeasure::count(Degree y) const {
    auto it = atoms_.find(y);
    return it == atoms_.end() ? 0 : it->second;
}

void CountingMeasure::add(Degree y, std::uint64_t c) {
    if (c == 0) return;
    atoms_[y] += c;
    mass_ += c;
}

void CountingMeasure::remove(Degree y) {
    auto it = atoms_.find(y);
    if (it == atoms_.end()) throw Error(Errc::AtomMissing, "no atom at " + std::to_string(y));
    if (--it->second == 0) atoms_.erase(it);
    --mass_;
}

void CountingMeasure::shift_down(Degree y, Degree by) {
    if (by > y) throw Error(Errc::NegativeDegree, std::to_string(y) + " - " + std::to_string(by));
    if (by == 0) {
        if (count(y) == 0) throw Error(Errc::AtomMissing, "no atom at " + std::to_string(y));
        return;
    }
    remove(y);
    add(y - by);
}

CountingMeasure remove_atom(CountingMeasure m, Degree y) {
    m.remove(y);
    return m;
}

CountingMeasure shift_atom_down(CountingMeasure m, Degree y, Degree by) {
    m.shift_down(y, by);
    return m;
}

namespace {

double ipow(double x, unsigned p) {
    double r = 1.0;
    for (unsigned i = 0; i < p; ++i) r *= x;
    return r;
}

}  // namespace

double moment(const CountingMeasure& m, unsigned p) {
    if (p == 0) return static_cast<double>(m.mass());
    double s = 0.0;
    for (const auto& [y, c] : m.atoms()) s += ipow(y, p) * static_cast<double>(c);
    return s;
}

double moment(const RealMeasure& m, unsigned p) {
    if (p == 0) return m.mass();
    const auto& w = m.weights();
    double s = 0.0;
    for (std::size_t i = 1; i < w.size(); ++i) s += ipow(static_cast<double>(i), p) * w[i];
    return s;
}

RealMeasure::RealMeasure(std::vector<double> weights) : w_(std::move(weights)) {
    if (w_.empty()) w_.push_back(0.0);
    for (double x : w_) {
        if (!(x >= 0.0)) throw Error(Errc::InvalidArgument, "negative or NaN weight");
        mass_ += x;
    }
}

RealMeasure normalize(const CountingMeasure& m, std::uint64_t n, Degree N) {
    if (n == 0) throw Error(Errc::InvalidArgument, "normalize by zero");
    if (m.max_degree() > N)
        throw Error(Errc::SupportExceeded,
                    "atom at " + std::to_string(m.max_degree()) + " above bound " + std::to_string(N));
    std::vector<double> w(static_cast<std::size_t>(N) + 1, 0.0);
    const double inv = 1.0 / static_cast<double>(n);
    for (const auto& [y, c] : m.atoms()) w[y] = static_cast<double>(c) * inv;
    return RealMeasure(std::move(w));
}

RealMeasure normalize(const CountingMeasure& m, std::uint64_t n) {
    return normalize(m, n, m.max_degree());
}

namespace {

// w[y] holds y * m(y) before the call.
SizeBiasedDist finish_size_biased(std::vector<double> biased) {
    double total = 0.0;
    for (double x : biased) total += x;
    if (!(total > 0.0)) throw Error(Errc::ZeroFirstMoment, "size-biased law of a measure with zero first moment");
    const std::size_t n = biased.size();
    SizeBiasedDist d{std::vector<double>(n), std::vector<double>(n)};
    double acc = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
        acc += biased[y];
        d.cdf[y] = std::min(acc / total, 1.0);
    }
    // Tail summed from the top so small tails keep their relative precision.
    acc = 0.0;
    for (std::size_t y = n; y-- > 0;) {
        d.tail[y] = std::min(acc / total, 1.0);
        acc += biased[y];
    }
    // Pin both ends: y = 0 carries no size-biased mass.
    d.cdf[n - 1] = 1.0;
    d.tail[n - 1] = 0.0;
    d.cdf[0] = 0.0;
    d.tail[0] = 1.0;
    return d;
}

}  // namespace

SizeBiasedDist size_biased(const CountingMeasure& m) {
    std::vector<double> b(static_cast<std::size_t>(m.max_degree()) + 1, 0.0);
    for (const auto& [y, c] : m.atoms()) b[y] = static_cast<double>(y) * static_cast<double>(c);
    return finish_size_biased(std::move(b));
}

SizeBiasedDist size_biased(const RealMeasure& m) {
    const auto& w = m.weights();
    std::vector<double> b(w.size(), 0.0);
    for (std::size_t y = 1; y < w.size(); ++y) b[y] = static_cast<double>(y) * w[y];
    return finish_size_biased(std::move(b));
}

void write_csv(std::ostream& os, const CountingMeasure& m) {
    os << "degree,count\n";
    for (const auto& [y, c] : m.atoms()) os << y << ',' << c << '\n';
}

void write_csv(std::ostream& os, const RealMeasure& m) {
    const auto old = os.precision(17);
    os << "degree,weight\n";
    const auto& w = m.weights();
    for (std::size_t y = 0; y < w.size(); ++y) os << y << ',' << w[y] << '\n';
    os.precision(old);
}

}  // namespace cmm
