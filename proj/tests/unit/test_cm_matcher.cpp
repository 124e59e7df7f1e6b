#include <algorithm>
#include <cmath>

#include "cmm/cm_matcher.hpp"
#include "cmm/error.hpp"
#include "cmm/fluid.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cmm;

namespace {

DegreeVector dv_of(std::vector<Degree> d) { return DegreeVector{std::move(d), false}; }

const DegreeVector kRunning = dv_of({3, 2, 1, 4, 2, 2});

std::vector<Degree> availabilities(const SimState& s) {
    std::vector<Degree> a;
    for (std::uint32_t v = 0; v < s.n(); ++v) a.push_back(s.pool.availability(v));
    return a;
}

std::vector<std::uint32_t> nodes_of(const SimState& s, NodeClass c) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t v = 0; v < s.n(); ++v)
        if (s.cls[v] == c) out.push_back(v);
    return out;
}

}  // namespace

TEST_CASE("initial states") {
    SimState s(kRunning);
    CHECK(s.unexplored() == 6);
    CHECK(s.pool.size() == 14);
    CHECK(s.measure == CountingMeasure{{1, 1}, {2, 3}, {3, 1}, {4, 1}});

    SimState z(dv_of({0, 0}));
    CHECK(z.unexplored() == 0);
    CHECK(nodes_of(z, NodeClass::Isolated) == std::vector<std::uint32_t>{0, 1});
    CHECK(z.measure == CountingMeasure{{0, 2}});

    SimState one(dv_of({1, 1}));
    CHECK(one.pool.stubs() == std::vector<std::uint32_t>{0, 1});

    try {
        SimState bad(dv_of({1, 2}));
        FAIL("expected OddSum");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::OddSum);
    }
}

TEST_CASE("forced steps on degrees (3,2,1,4,2,2), GREEDY") {
    SimState s(kRunning, {.record_edges = true, .verify = true});
    apply_step(s, ForcedStep{0, {1, 2, 5}, 1, {4}});
    CHECK(nodes_of(s, NodeClass::Unexplored) == std::vector<std::uint32_t>{3, 4, 5});
    CHECK(availabilities(s) == std::vector<Degree>{0, 0, 0, 4, 1, 1});
    CHECK(nodes_of(s, NodeClass::Matched) == std::vector<std::uint32_t>{0, 1});
    CHECK(nodes_of(s, NodeClass::Isolated) == std::vector<std::uint32_t>{2});
    CHECK(s.measure == CountingMeasure{{0, 1}, {1, 2}, {4, 1}});
    CHECK(s.pool.size() == 6);
    CHECK(s.edges == std::vector<Edge>{{0, 1}, {0, 2}, {0, 5}, {1, 4}});
}

TEST_CASE("forced steps on degrees (3,2,1,4,2,2), UNI-MIN") {
    Rng rng(0);
    // Pre-step availabilities of the neighbors v2, v3, v6.
    const std::size_t pick = choose_match(CriterionKind::UniMin, std::vector<Degree>{2, 1, 2}, rng);
    CHECK(pick == 1);
    SimState s(kRunning, {.verify = true});
    apply_step(s, ForcedStep{0, {1, 2, 5}, 2, {}});
    CHECK(nodes_of(s, NodeClass::Unexplored) == std::vector<std::uint32_t>{1, 3, 4, 5});
    CHECK(availabilities(s) == std::vector<Degree>{0, 1, 0, 4, 2, 1});
    CHECK(nodes_of(s, NodeClass::Isolated).empty());
    CHECK(s.measure == CountingMeasure{{1, 2}, {2, 1}, {4, 1}});
}

TEST_CASE("blocked node") {
    SimState s(dv_of({2, 1, 1}), {.verify = true});
    apply_step(s, ForcedStep{0, {0}, 0, {}});
    CHECK(s.cls[0] == NodeClass::Blocked);
    CHECK(s.selfloops == 1);
    CHECK(s.measure == CountingMeasure{{1, 2}});

    Rng rng(1);
    auto tr = run(dv_of({2}), CriterionKind::Greedy, rng);
    CHECK(tr.blocked == 1);
    CHECK(tr.coverage == 0.0);
    CHECK(tr.blocked_frac == 1.0);
}

TEST_CASE("small deterministic runs") {
    Rng rng(3);
    for (CriterionKind k : kAllCriteria) {
        auto tr = run(dv_of({1, 1}), k, rng);
        CHECK(tr.coverage == 1.0);
        auto zero = run(dv_of({0, 0, 0}), k, rng);
        CHECK(zero.coverage == 0.0);
        CHECK(zero.isolated == 3);
    }
}

TEST_CASE("1-regular graphs are perfectly matched") {
    Rng rng(10);
    DegreeVector dv = sample_degree_vector(DegreeModel::regular(1), 10000, rng);
    for (CriterionKind k : kAllCriteria) {
        auto tr = run(dv, k, rng);
        CHECK(tr.coverage == 1.0);
        CHECK(tr.selfloops == 0);
    }
}

TEST_CASE("stub pool keeps multiplicities") {
    Rng rng(12);
    std::vector<Degree> deg{3, 0, 5, 1, 2, 7};
    StubPool pool(deg);
    while (pool.size() > 0) {
        if (rng.uniform01() < 0.5) {
            --deg[pool.take_random(rng)];
        } else {
            std::uint32_t v;
            do v = static_cast<std::uint32_t>(rng.uniform_index(deg.size()));
            while (deg[v] == 0);
            pool.take_of(v);
            --deg[v];
        }
        std::vector<Degree> mult(deg.size(), 0);
        for (std::uint32_t v : pool.stubs()) ++mult[v];
        for (std::uint32_t v = 0; v < deg.size(); ++v) {
            CHECK(mult[v] == deg[v]);
            CHECK(pool.availability(v) == deg[v]);
        }
    }
}

TEST_CASE("invariants hold on random runs") {
    Rng rng(31);
    const DegreeModel models[] = {DegreeModel::regular(3), DegreeModel::uniform(0, 6), DegreeModel::poisson(2.5),
                                  DegreeModel::explicit_pmf({0.2, 0.3, 0.0, 0.0, 0.5})};
    for (int trial = 0; trial < 200; ++trial) {
        const auto& m = models[rng.uniform_index(4)];
        const CriterionKind k = kAllCriteria[rng.uniform_index(5)];
        DegreeVector dv = sample_degree_vector(m, 1 + rng.uniform_index(150), rng);
        const double grid[] = {0.0, 0.5, 1.0};
        auto tr = run(dv, k, rng, grid, {.verify = true});
        CHECK(tr.matched + tr.isolated + tr.blocked == tr.n);
        CHECK(tr.coverage == doctest::Approx(1.0 - tr.measures[2][0] - tr.blocked_frac));
        CHECK(tr.measures[0].mass() == doctest::Approx(1.0));
        CHECK(tr.measures[2].positive_mass() == 0.0);
    }
}

TEST_CASE("self-loops and multi-edges stay bounded") {
    for (std::size_t n : {1000u, 10000u}) {
        Rng rng(n);
        const int runs = 400;
        double loops = 0, multi = 0;
        for (int r = 0; r < runs; ++r) {
            auto dv = sample_degree_vector(DegreeModel::regular(3), n, rng);
            auto tr = run(dv, CriterionKind::Greedy, rng);
            loops += static_cast<double>(tr.selfloops);
            multi += static_cast<double>(tr.multiedges);
        }
        // Both counts are asymptotically Poisson with mean 1 for 3-regular stubs.
        CAPTURE(n);
        CHECK(std::abs(loops / runs - 1.0) < 0.25);
        CHECK(std::abs(multi / runs - 1.0) < 0.25);
    }
}

TEST_CASE("recorded multigraph is a complete pairing") {
    Rng rng(41);
    auto dv = sample_degree_vector(DegreeModel::uniform(1, 5), 300, rng);
    auto tr = run(dv, CriterionKind::UniMax, rng, {}, {.record_edges = true});
    std::vector<Degree> deg(dv.size(), 0);
    for (auto [u, v] : tr.edges) {
        ++deg[u];
        ++deg[v];
    }
    CHECK(deg == dv.degrees);
}

TEST_CASE("Regular(3) GREEDY tracks the fluid limit") {
    Rng rng(5);
    auto dv = sample_degree_vector(DegreeModel::regular(3), 100000, rng);
    auto tr = run(dv, CriterionKind::Greedy, rng);
    auto fl = solve(make_system(CriterionKind::Greedy, pmf_truncated(DegreeModel::regular(3), 3)), 1e-4);
    CHECK(std::abs(tr.coverage - fl.coverage) < 0.01);
}

TEST_CASE("with-replacement sampler") {
    Rng rng(8);
    const std::size_t draws = 1000000;

    // Two singleton buckets: the single item lands in the explored bucket half the time.
    std::size_t single = 0;
    for (std::size_t i = 0; i < draws; ++i) {
        auto th = hat_step_sample({{1, 2}}, CriterionKind::Greedy, rng);
        if (th == SignedMeasure{{1, -1}}) {
            ++single;
        } else {
            REQUIRE(th == SignedMeasure{{1, -2}});
        }
    }
    CHECK(testing::max_sigma({0.5, 0.5}, {single, draws - single}, draws) < 4.0);

    for (int i = 0; i < 1000; ++i) CHECK(hat_step_sample({{2, 1}}, CriterionKind::Greedy, rng) == SignedMeasure{{2, -1}});

    try {
        hat_step_sample({{0, 3}}, CriterionKind::Greedy, rng);
        FAIL("expected ZeroFirstMoment");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ZeroFirstMoment);
    }

    // Exact expectations by hand for buckets of sizes 1, 1, 2.
    double s1 = 0, s1sq = 0, sx = 0, sxsq = 0;
    for (std::size_t i = 0; i < draws; ++i) {
        auto th = hat_step_sample({{1, 2}, {2, 1}}, CriterionKind::Greedy, rng);
        const double a = integrate(th, [](Degree) { return 1.0; });
        const double b = integrate(th, [](Degree y) { return static_cast<double>(y); });
        CHECK((a == -1.0 || a == -2.0));
        s1 += a;
        s1sq += a * a;
        sx += b;
        sxsq += b * b;
    }
    const double n = static_cast<double>(draws);
    const double se1 = std::sqrt((s1sq / n - std::pow(s1 / n, 2)) / n);
    const double sex = std::sqrt((sxsq / n - std::pow(sx / n, 2)) / n);
    CHECK(std::abs(s1 / n + 1.75) < 4 * se1);
    CHECK(std::abs(sx / n + 3.0) < 4 * sex);
}

TEST_CASE("uniform pairing uses every stub once") {
    Rng rng(6);
    const std::vector<Degree> deg{3, 2, 1, 4, 2, 2};
    auto edges = pair_uniformly(deg, rng);
    CHECK(edges.size() == 7);
    std::vector<Degree> got(deg.size(), 0);
    for (auto [u, v] : edges) {
        ++got[u];
        ++got[v];
    }
    CHECK(got == deg);
}
