#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cmm/criteria.hpp"
#include "cmm/measure.hpp"
#include "cmm/rng.hpp"

namespace cmm {

using Edge = std::pair<std::uint32_t, std::uint32_t>;

class SimpleGraph {
public:
    SimpleGraph() = default;
    // Throws InvalidGraph on self-loops, repeated edges or out-of-range ids.
    SimpleGraph(std::size_t n, const std::vector<Edge>& edges);

    std::size_t n() const { return adj_.size(); }
    const std::vector<std::uint32_t>& neighbors(std::uint32_t v) const { return adj_[v]; }
    Degree degree(std::uint32_t v) const { return static_cast<Degree>(adj_[v].size()); }
    std::size_t edge_count() const;
    // Each edge once as (u, v) with u < v, sorted.
    std::vector<Edge> edges() const;

private:
    std::vector<std::vector<std::uint32_t>> adj_;
};

// "u v" per line, 0-based. A "# nodes N" line fixes the node count, otherwise
// it is one more than the largest id.
SimpleGraph read_edge_list(const std::string& path);
void write_edge_list(std::ostream& os, const SimpleGraph& g);

struct OfflineRun {
    std::vector<Edge> matching;
    std::vector<std::uint32_t> isolated;
    std::vector<CountingMeasure> trajectory;  // degrees of unexplored and isolated nodes after j steps, j = 0..n
    double coverage = 0.0;
};

OfflineRun run_offline(const SimpleGraph& g, CriterionKind kind, Rng& rng, bool record_trajectory = true);

struct CoverageDistribution {
    std::size_t n = 0;
    std::map<std::size_t, double> by_matched;  // number of matched nodes -> probability

    double mean() const;
    std::map<double, double> by_coverage() const;
};

inline constexpr std::size_t kEnumerateMaxNodes = 12;

// Exact law of the final coverage; throws TooLarge above kEnumerateMaxNodes nodes.
CoverageDistribution enumerate_offline(const SimpleGraph& g, CriterionKind kind);

// Law of a pick among `values` under `rule`, one probability per entry.
std::vector<double> pick_probabilities(Pick rule, const std::vector<Degree>& values);

}  // namespace cmm
