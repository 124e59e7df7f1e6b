#include "cmm/offline.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <fstream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "cmm/error.hpp"
#include "cmm/node_selector.hpp"

namespace cmm {

SimpleGraph::SimpleGraph(std::size_t n, const std::vector<Edge>& edges) : adj_(n) {
    for (auto [u, v] : edges) {
        if (u >= n || v >= n) throw Error(Errc::InvalidGraph, "node id out of range");
        if (u == v) throw Error(Errc::InvalidGraph, "self-loop at " + std::to_string(u));
        adj_[u].push_back(v);
        adj_[v].push_back(u);
    }
    for (auto& a : adj_) {
        std::sort(a.begin(), a.end());
        if (std::adjacent_find(a.begin(), a.end()) != a.end()) throw Error(Errc::InvalidGraph, "repeated edge");
    }
}

std::size_t SimpleGraph::edge_count() const {
    std::size_t s = 0;
    for (const auto& a : adj_) s += a.size();
    return s / 2;
}

std::vector<Edge> SimpleGraph::edges() const {
    std::vector<Edge> out;
    for (std::uint32_t u = 0; u < adj_.size(); ++u)
        for (std::uint32_t v : adj_[u])
            if (u < v) out.emplace_back(u, v);
    return out;
}

SimpleGraph read_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot open edge list '" + path + "'");
    std::vector<Edge> edges;
    std::size_t n = 0;
    bool explicit_n = false;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (first[0] == '#') {
            std::string word;
            std::size_t count;
            if (ls >> word >> count && word == "nodes") {
                n = count;
                explicit_n = true;
            }
            continue;
        }
        std::uint64_t u, v;
        std::istringstream es(line);
        if (!(es >> u >> v)) throw Error(Errc::InvalidGraph, "bad edge line '" + line + "'");
        edges.emplace_back(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v));
        if (!explicit_n) n = std::max<std::size_t>(n, std::max(u, v) + 1);
    }
    return SimpleGraph(n, edges);
}

void write_edge_list(std::ostream& os, const SimpleGraph& g) {
    os << "# nodes " << g.n() << '\n';
    for (auto [u, v] : g.edges()) os << u << ' ' << v << '\n';
}

OfflineRun run_offline(const SimpleGraph& g, CriterionKind kind, Rng& rng, bool record_trajectory) {
    enum : std::uint8_t { kU, kM, kI };
    const std::size_t n = g.n();
    std::vector<Degree> deg(n);
    std::vector<std::uint8_t> cls(n, kU);
    NodeSelector active(n);
    CountingMeasure mu;
    OfflineRun run;

    for (std::uint32_t v = 0; v < n; ++v) {
        deg[v] = g.degree(v);
        mu.add(deg[v]);
        if (deg[v] == 0) {
            cls[v] = kI;
        } else {
            active.insert(v, deg[v]);
        }
    }
    if (record_trajectory) run.trajectory.push_back(mu);

    std::vector<std::uint32_t> nb;
    std::vector<Degree> nb_deg;
    auto drop_edge = [&](std::uint32_t w) {
        mu.shift_down(deg[w], 1);
        if (--deg[w] == 0) {
            cls[w] = kI;
            active.erase(w);
        } else {
            active.update(w, deg[w]);
        }
    };

    for (std::size_t j = 0; j < n; ++j) {
        if (!active.empty()) {
            std::uint32_t v = active.choose(first_rule(kind), rng);
            nb.clear();
            nb_deg.clear();
            for (std::uint32_t w : g.neighbors(v))
                if (cls[w] == kU) {
                    nb.push_back(w);
                    nb_deg.push_back(deg[w]);
                }
            std::uint32_t v2 = nb[pick_index(match_rule(kind), nb_deg, rng)];
            run.matching.emplace_back(v, v2);
            for (std::uint32_t x : {v, v2}) {
                cls[x] = kM;
                active.erase(x);
                mu.remove(deg[x]);
                deg[x] = 0;
            }
            for (std::uint32_t x : {v, v2})
                for (std::uint32_t w : g.neighbors(x))
                    if (cls[w] == kU) drop_edge(w);
        }
        if (record_trajectory) run.trajectory.push_back(mu);
    }

    for (std::uint32_t v = 0; v < n; ++v)
        if (cls[v] == kI) run.isolated.push_back(v);
    run.coverage = n == 0 ? 0.0 : 2.0 * static_cast<double>(run.matching.size()) / static_cast<double>(n);
    return run;
}

double CoverageDistribution::mean() const {
    double s = 0.0;
    for (auto [m, p] : by_matched) s += p * static_cast<double>(m);
    return n == 0 ? 0.0 : s / static_cast<double>(n);
}

std::map<double, double> CoverageDistribution::by_coverage() const {
    std::map<double, double> out;
    for (auto [m, p] : by_matched) out[n == 0 ? 0.0 : static_cast<double>(m) / static_cast<double>(n)] += p;
    return out;
}

std::vector<double> pick_probabilities(Pick rule, const std::vector<Degree>& values) {
    std::vector<double> p(values.size(), 0.0);
    if (values.empty()) return p;
    if (rule == Pick::Uniform) {
        std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(values.size()));
        return p;
    }
    Degree best = rule == Pick::Min ? *std::min_element(values.begin(), values.end())
                                    : *std::max_element(values.begin(), values.end());
    double ties = static_cast<double>(std::count(values.begin(), values.end(), best));
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] == best) p[i] = 1.0 / ties;
    return p;
}

namespace {

using Dist = std::array<double, kEnumerateMaxNodes + 1>;  // matched-node count -> probability

struct Enumerator {
    CriterionKind kind;
    std::vector<std::uint32_t> adj;  // neighbor bitmasks
    std::unordered_map<std::uint32_t, Dist> memo;

    Degree deg(std::uint32_t v, std::uint32_t set) const { return static_cast<Degree>(std::popcount(adj[v] & set)); }

    // Drops nodes with no neighbor left in the set.
    std::uint32_t prune(std::uint32_t set) const {
        std::uint32_t out = set;
        for (std::uint32_t s = set; s; s &= s - 1) {
            auto v = static_cast<std::uint32_t>(std::countr_zero(s));
            if (deg(v, set) == 0) out &= ~(1u << v);
        }
        return out;
    }

    const Dist& solve(std::uint32_t set) {
        if (auto it = memo.find(set); it != memo.end()) return it->second;
        Dist d{};
        if (set == 0) {
            d[0] = 1.0;
            return memo.emplace(set, d).first->second;
        }
        std::vector<std::uint32_t> nodes;
        std::vector<Degree> degs;
        for (std::uint32_t s = set; s; s &= s - 1) {
            auto v = static_cast<std::uint32_t>(std::countr_zero(s));
            nodes.push_back(v);
            degs.push_back(deg(v, set));
        }
        auto pv = pick_probabilities(first_rule(kind), degs);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (pv[i] == 0.0) continue;
            std::uint32_t v = nodes[i];
            std::vector<std::uint32_t> nb;
            std::vector<Degree> nb_deg;
            for (std::uint32_t s = adj[v] & set; s; s &= s - 1) {
                auto w = static_cast<std::uint32_t>(std::countr_zero(s));
                nb.push_back(w);
                nb_deg.push_back(deg(w, set));
            }
            auto pw = pick_probabilities(match_rule(kind), nb_deg);
            for (std::size_t k = 0; k < nb.size(); ++k) {
                if (pw[k] == 0.0) continue;
                std::uint32_t rest = prune(set & ~(1u << v) & ~(1u << nb[k]));
                const Dist sub = solve(rest);
                for (std::size_t m = 0; m + 2 < d.size(); ++m) d[m + 2] += pv[i] * pw[k] * sub[m];
            }
        }
        return memo.emplace(set, d).first->second;
    }
};

}  // namespace

CoverageDistribution enumerate_offline(const SimpleGraph& g, CriterionKind kind) {
    if (g.n() > kEnumerateMaxNodes)
        throw Error(Errc::TooLarge, std::to_string(g.n()) + " nodes, at most " + std::to_string(kEnumerateMaxNodes));
    Enumerator e{kind, std::vector<std::uint32_t>(g.n(), 0), {}};
    std::uint32_t all = 0;
    for (std::uint32_t v = 0; v < g.n(); ++v) {
        for (std::uint32_t w : g.neighbors(v)) e.adj[v] |= 1u << w;
        all |= 1u << v;
    }
    const Dist& d = e.solve(e.prune(all));
    CoverageDistribution out;
    out.n = g.n();
    for (std::size_t m = 0; m < d.size(); ++m)
        if (d[m] > 0.0) out.by_matched[m] = d[m];
    return out;
}

}  // namespace cmm
