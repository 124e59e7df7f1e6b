#include "cmm/cm_matcher.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cmm/error.hpp"

namespace cmm {

StubPool::StubPool(std::span<const Degree> degrees) : off_(degrees.size()), avail_(degrees.begin(), degrees.end()) {
    std::size_t total = 0;
    for (std::size_t v = 0; v < degrees.size(); ++v) {
        off_[v] = total;
        total += degrees[v];
    }
    stubs_.resize(total);
    slot_.resize(total);
    seg_.resize(total);
    for (std::size_t v = 0, p = 0; v < degrees.size(); ++v)
        for (Degree i = 0; i < degrees[v]; ++i, ++p) {
            stubs_[p] = static_cast<std::uint32_t>(v);
            slot_[p] = static_cast<std::uint32_t>(p);
            seg_[p] = static_cast<std::uint32_t>(p);
        }
}

void StubPool::remove_at(std::size_t p) {
    const std::uint32_t v = stubs_[p];
    // Drop p from v's segment by moving v's last listed stub into its place.
    const std::uint32_t s = slot_[p];
    const std::size_t e = off_[v] + avail_[v] - 1;
    const std::uint32_t q = seg_[e];
    seg_[s] = q;
    slot_[q] = s;
    --avail_[v];
    // Fill the hole in the pool with the last slot.
    const std::size_t last = stubs_.size() - 1;
    if (p != last) {
        stubs_[p] = stubs_[last];
        slot_[p] = slot_[last];
        seg_[slot_[p]] = static_cast<std::uint32_t>(p);
    }
    stubs_.pop_back();
    slot_.pop_back();
}

void StubPool::take_of(std::uint32_t v) {
    if (avail_[v] == 0) throw Error(Errc::InvalidArgument, "node " + std::to_string(v) + " has no stub left");
    remove_at(seg_[off_[v] + avail_[v] - 1]);
}

std::uint32_t StubPool::take_random(Rng& rng) {
    const std::size_t p = rng.uniform_index(stubs_.size());
    const std::uint32_t v = stubs_[p];
    remove_at(p);
    return v;
}

SimState::SimState(const DegreeVector& dv, SimOptions opt)
    : options(opt),
      pool(dv.degrees),
      cls(dv.size(), NodeClass::Unexplored),
      active(dv.size()),
      b(dv.size(), 0),
      b2(dv.size(), 0) {
    if (dv.sum() % 2 != 0) throw Error(Errc::OddSum, "degree sum is odd");
    for (std::uint32_t v = 0; v < dv.size(); ++v) {
        measure.add(dv.degrees[v]);
        if (dv.degrees[v] == 0) {
            cls[v] = NodeClass::Isolated;
        } else {
            active.insert(v, dv.degrees[v]);
        }
    }
}

namespace {

// Pairs every remaining stub of v, one at a time; draw() removes and returns
// the partner's owner.
template <class Draw>
void pair_all(SimState& s, std::uint32_t v, std::vector<Degree>& mult, Draw&& draw) {
    while (s.pool.availability(v) > 0) {
        s.pool.take_of(v);
        const std::uint32_t w = draw();
        if (s.options.record_edges) s.edges.emplace_back(std::min(v, w), std::max(v, w));
        if (w == v) {
            ++s.selfloops;
            continue;
        }
        if (s.b[w] == 0 && s.b2[w] == 0) s.touched.push_back(w);
        if (mult[w] > 0) ++s.multiedges;
        ++mult[w];
    }
}

template <class DrawFirst, class Choose, class DrawMatch>
void run_step(SimState& s, std::uint32_t I, DrawFirst&& draw_first, Choose&& choose, DrawMatch&& draw_match) {
    const Degree K = s.pool.availability(I);
    pair_all(s, I, s.b, draw_first);

    if (s.touched.empty()) {
        s.cls[I] = NodeClass::Blocked;
        s.active.erase(I);
        s.measure.remove(K);
        ++s.blocked;
        ++s.step;
        return;
    }

    std::vector<Degree> pre(s.touched.size());
    for (std::size_t i = 0; i < s.touched.size(); ++i) {
        const std::uint32_t w = s.touched[i];
        pre[i] = s.pool.availability(w) + s.b[w];
    }
    const std::size_t pick = choose(pre);
    const std::uint32_t I2 = s.touched[pick];
    const Degree K2 = pre[pick];
    s.matching.emplace_back(I, I2);
    pair_all(s, I2, s.b2, draw_match);

    for (std::uint32_t x : {I, I2}) {
        s.cls[x] = NodeClass::Matched;
        s.active.erase(x);
    }
    s.measure.remove(K);
    s.measure.remove(K2);
    for (std::uint32_t w : s.touched) {
        const Degree used = s.b[w] + s.b2[w];
        s.b[w] = s.b2[w] = 0;
        if (w == I2) continue;
        const Degree now = s.pool.availability(w);
        s.measure.shift_down(now + used, used);
        if (now == 0) {
            s.cls[w] = NodeClass::Isolated;
            s.active.erase(w);
        } else {
            s.active.update(w, now);
        }
    }
    s.touched.clear();
    ++s.step;
}

}  // namespace

void step(SimState& s, CriterionKind kind, Rng& rng) {
    if (s.step >= s.n()) throw Error(Errc::InvalidArgument, "all steps done");
    if (s.active.empty()) {
        ++s.step;
        return;
    }
    const std::uint32_t I = s.active.choose(first_rule(kind), rng);
    auto draw = [&] { return s.pool.take_random(rng); };
    auto choose = [&](const std::vector<Degree>& a) { return pick_index(match_rule(kind), a, rng); };
    run_step(s, I, draw, choose, draw);
    if (s.options.verify) check_invariants(s);
}

void apply_step(SimState& s, const ForcedStep& f) {
    if (s.step >= s.n()) throw Error(Errc::InvalidArgument, "all steps done");
    if (!s.active.contains(f.first)) throw Error(Errc::InvalidArgument, "forced first node is not unexplored");
    std::size_t i = 0, k = 0;
    auto forced = [&s](const std::vector<std::uint32_t>& list, std::size_t& at) {
        if (at >= list.size()) throw Error(Errc::InvalidArgument, "forced step ran out of partners");
        const std::uint32_t w = list[at++];
        s.pool.take_of(w);
        return w;
    };
    auto draw_first = [&] { return forced(f.first_partners, i); };
    auto draw_match = [&] { return forced(f.match_partners, k); };
    auto choose = [&](const std::vector<Degree>&) -> std::size_t {
        auto it = std::find(s.touched.begin(), s.touched.end(), f.match);
        if (it == s.touched.end()) throw Error(Errc::InvalidArgument, "forced match is not a neighbor");
        return static_cast<std::size_t>(it - s.touched.begin());
    };
    run_step(s, f.first, draw_first, choose, draw_match);
    if (s.options.verify) check_invariants(s);
}

void check_invariants(const SimState& s) {
    auto fail = [](const std::string& what) { throw std::logic_error("state invariant violated: " + what); };
    if (s.pool.size() % 2 != 0) fail("odd stub pool");
    CountingMeasure mu;
    std::size_t unexplored = 0, matched = 0, blocked = 0;
    std::uint64_t stubs = 0;
    for (std::uint32_t v = 0; v < s.n(); ++v) {
        const Degree a = s.pool.availability(v);
        stubs += a;
        switch (s.cls[v]) {
            case NodeClass::Unexplored:
                if (a == 0) fail("unexplored node without stubs");
                if (!s.active.contains(v) || s.active.key(v) != a) fail("selector out of sync");
                mu.add(a);
                ++unexplored;
                break;
            case NodeClass::Isolated:
                if (a != 0) fail("isolated node with stubs");
                mu.add(0);
                break;
            case NodeClass::Matched:
                if (a != 0) fail("matched node with stubs");
                ++matched;
                break;
            case NodeClass::Blocked:
                if (a != 0) fail("blocked node with stubs");
                ++blocked;
                break;
        }
    }
    if (stubs != s.pool.size()) fail("pool size differs from total availability");
    if (!(mu == s.measure)) fail("measure differs from availabilities");
    if (unexplored != s.active.size()) fail("selector size");
    if (matched != 2 * s.matching.size()) fail("matched count");
    if (blocked != s.blocked) fail("blocked count");
    if (s.measure.mass() - s.measure.count(0) != unexplored) fail("positive mass differs from unexplored count");
}

Trajectory run(const DegreeVector& dv, CriterionKind kind, Rng& rng, std::span<const double> grid, SimOptions opt) {
    SimState s(dv, opt);
    const std::size_t n = s.n();
    Degree N = 0;
    for (Degree d : dv.degrees) N = std::max(N, d);

    std::vector<std::pair<std::size_t, std::size_t>> at;  // (step index, grid position)
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const double t = grid[g];
        if (!(t >= 0.0 && t <= 1.0)) throw Error(Errc::InvalidArgument, "grid time outside [0,1]");
        auto j = static_cast<std::size_t>(std::floor(static_cast<double>(n) * t));
        at.emplace_back(std::min(j, n), g);
    }
    std::sort(at.begin(), at.end());

    Trajectory tr;
    tr.grid.assign(grid.begin(), grid.end());
    tr.measures.resize(grid.size());
    tr.n = n;
    std::size_t next = 0;
    auto record = [&](std::size_t j) {
        while (next < at.size() && at[next].first == j) tr.measures[at[next++].second] = normalize(s.measure, n, N);
    };
    record(0);
    for (std::size_t j = 0; j < n; ++j) {
        step(s, kind, rng);
        record(j + 1);
    }

    tr.matched = 2 * s.matching.size();
    tr.isolated = s.measure.count(0);
    tr.blocked = s.blocked;
    if (tr.matched + tr.isolated + tr.blocked != n) throw std::logic_error("final accounting does not close");
    tr.coverage = static_cast<double>(tr.matched) / static_cast<double>(n);
    tr.blocked_frac = static_cast<double>(tr.blocked) / static_cast<double>(n);
    tr.selfloops = s.selfloops;
    tr.multiedges = s.multiedges;
    tr.edges = std::move(s.edges);
    return tr;
}

std::vector<Edge> pair_uniformly(std::span<const Degree> degrees, Rng& rng) {
    std::vector<std::uint32_t> stubs;
    for (std::uint32_t v = 0; v < degrees.size(); ++v) stubs.insert(stubs.end(), degrees[v], v);
    if (stubs.size() % 2 != 0) throw Error(Errc::OddSum, "degree sum is odd");
    for (std::size_t i = stubs.size(); i > 1; --i) std::swap(stubs[i - 1], stubs[rng.uniform_index(i)]);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < stubs.size(); i += 2)
        edges.emplace_back(std::min(stubs[i], stubs[i + 1]), std::max(stubs[i], stubs[i + 1]));
    return edges;
}

SignedMeasure hat_step_sample(const CountingMeasure& mu, CriterionKind kind, Rng& rng) {
    std::vector<Degree> size;
    std::vector<std::uint64_t> end;  // cumulative item counts
    std::uint64_t M = 0;
    for (const auto& [y, c] : mu.atoms()) {
        if (y == 0) continue;
        for (std::uint64_t i = 0; i < c; ++i) {
            size.push_back(y);
            end.push_back(M += y);
        }
    }
    if (M == 0) throw Error(Errc::ZeroFirstMoment, "no items to draw");
    auto draw_bucket = [&] {
        const std::uint64_t item = rng.uniform_index(M);
        return static_cast<std::size_t>(std::upper_bound(end.begin(), end.end(), item) - end.begin());
    };

    SignedMeasure theta;
    auto add = [&theta](Degree y, std::int64_t c) {
        if ((theta[y] += c) == 0) theta.erase(y);
    };

    const std::size_t J = pick_index(first_rule(kind), size, rng);
    const Degree K = size[J];
    std::vector<std::size_t> drawn(K);
    for (auto& j : drawn) j = draw_bucket();
    add(K, -1);

    std::vector<std::size_t> others;
    for (std::size_t j : drawn)
        if (j != J && std::find(others.begin(), others.end(), j) == others.end()) others.push_back(j);
    if (others.empty()) return theta;

    std::vector<Degree> other_size(others.size());
    for (std::size_t i = 0; i < others.size(); ++i) other_size[i] = size[others[i]];
    const std::size_t J2 = others[pick_index(match_rule(kind), other_size, rng)];
    const Degree K2 = size[J2];
    add(K2, -1);

    const auto s = static_cast<std::size_t>(std::find(drawn.begin(), drawn.end(), J2) - drawn.begin());
    auto shift = [&](std::size_t bucket) {
        add(size[bucket], -1);
        add(size[bucket] - 1, +1);
    };
    for (std::size_t l = 0; l < drawn.size(); ++l)
        if (l != s) shift(drawn[l]);
    for (Degree l = 1; l < K2; ++l) shift(draw_bucket());
    return theta;
}

}  // namespace cmm
