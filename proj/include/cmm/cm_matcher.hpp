#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "cmm/criteria.hpp"
#include "cmm/degree_model.hpp"
#include "cmm/measure.hpp"
#include "cmm/node_selector.hpp"
#include "cmm/offline.hpp"
#include "cmm/rng.hpp"

namespace cmm {

// Unpaired half-edges. Each pool slot stores its owner; each node's slots are
// listed contiguously in a segment so any stub of a node is found in O(1).
class StubPool {
public:
    StubPool() = default;
    explicit StubPool(std::span<const Degree> degrees);

    std::size_t size() const { return stubs_.size(); }
    Degree availability(std::uint32_t v) const { return avail_[v]; }
    const std::vector<std::uint32_t>& stubs() const { return stubs_; }

    // Removes one stub of v, which must have one.
    void take_of(std::uint32_t v);
    // Removes a uniformly chosen stub and returns its owner.
    std::uint32_t take_random(Rng& rng);

private:
    void remove_at(std::size_t p);

    std::vector<std::uint32_t> stubs_;
    std::vector<std::uint32_t> slot_;  // stubs_[p] is listed at seg_[slot_[p]]
    std::vector<std::uint32_t> seg_;
    std::vector<std::size_t> off_;
    std::vector<Degree> avail_;
};

enum class NodeClass : std::uint8_t { Unexplored, Matched, Isolated, Blocked };

struct SimOptions {
    bool record_edges = false;  // keep the multigraph edge list
    bool verify = false;        // recompute the measure and check invariants after every step
};

struct SimState {
    explicit SimState(const DegreeVector& dv, SimOptions opt = {});

    std::size_t n() const { return cls.size(); }
    std::size_t unexplored() const { return active.size(); }

    SimOptions options;
    StubPool pool;
    std::vector<NodeClass> cls;
    NodeSelector active;  // unexplored nodes keyed by availability
    std::vector<Edge> matching;
    CountingMeasure measure;  // availabilities of unexplored and isolated nodes
    std::size_t step = 0;
    std::size_t blocked = 0;
    std::uint64_t selfloops = 0;
    std::uint64_t multiedges = 0;
    std::vector<Edge> edges;  // only with record_edges

    // Scratch multiplicities for the step in progress.
    std::vector<Degree> b, b2;
    std::vector<std::uint32_t> touched;
};

void step(SimState& s, CriterionKind kind, Rng& rng);

// A step with every draw fixed in advance: the explored node, the partner of
// each of its stubs in pairing order (itself for a self-loop), the match and
// the partners completing the match's stubs.
struct ForcedStep {
    std::uint32_t first;
    std::vector<std::uint32_t> first_partners;
    std::uint32_t match = 0;
    std::vector<std::uint32_t> match_partners;
};
void apply_step(SimState& s, const ForcedStep& f);

// Throws std::logic_error if the state is internally inconsistent.
void check_invariants(const SimState& s);

struct Trajectory {
    std::vector<double> grid;
    std::vector<RealMeasure> measures;
    std::size_t n = 0;
    std::size_t matched = 0;
    std::size_t isolated = 0;
    std::size_t blocked = 0;
    double coverage = 0.0;
    double blocked_frac = 0.0;
    std::uint64_t selfloops = 0;
    std::uint64_t multiedges = 0;
    std::vector<Edge> edges;  // only with record_edges
};

// Runs the n steps; grid times must lie in [0, 1].
Trajectory run(const DegreeVector& dv, CriterionKind kind, Rng& rng, std::span<const double> grid = {},
               SimOptions opt = {});

// Plain uniform pairing of all stubs; returns the multigraph edges.
std::vector<Edge> pair_uniformly(std::span<const Degree> degrees, Rng& rng);

using SignedMeasure = std::map<Degree, std::int64_t>;

template <class F>
double integrate(const SignedMeasure& m, F f) {
    double s = 0.0;
    for (const auto& [y, c] : m) s += static_cast<double>(c) * f(y);
    return s;
}

// One draw of the with-replacement auxiliary transition from state mu.
// Throws ZeroFirstMoment when mu has no stubs.
SignedMeasure hat_step_sample(const CountingMeasure& mu, CriterionKind kind, Rng& rng);

}  // namespace cmm
