// Acceptance checks. `acceptance` runs all of them, `acceptance 3 6` a subset.
// One [PASS]/[FAIL] line per criterion; exit status 1 if any selected check fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cmm/cm_matcher.hpp"
#include "cmm/criteria.hpp"
#include "cmm/error.hpp"
#include "cmm/degree_model.hpp"
#include "cmm/fluid.hpp"
#include "cmm/offline.hpp"
#include "cmm/replicates.hpp"
#include "support.hpp"

using namespace cmm;

namespace {

bool report(int id, bool ok, const std::string& what) {
    std::printf("[%s] C%d %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
    std::fflush(stdout);
    return ok;
}

std::string fmt(const char* f, auto... xs) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, xs...);
    return buf;
}

double fluid_coverage(const DegreeModel& m, CriterionKind k, double h, ShiftLaw shift = ShiftLaw::SizeBiased) {
    auto init = pmf_truncated(m, m.support_max().value_or(1));
    return solve(make_system(k, init, kHaltEps, shift), h, {.record_stride = 1u << 30}).coverage;
}

std::vector<double> sim_coverages(const DegreeModel& m, CriterionKind k, std::size_t n, std::size_t reps,
                                  std::uint64_t seed) {
    ReplicateSpec spec{m, k, n, reps, seed, {}, {}};
    std::vector<double> out;
    for (const auto& r : run_replicates(spec)) out.push_back(r.trajectory.coverage);
    return out;
}

bool c1() {
    double worst = 0;
    std::string detail;
    for (double rho : {0.5, 1.0, 2.0, 5.0}) {
        const double err = std::abs(solve_poisson_greedy(rho, 1e-5).coverage - poisson_greedy_closed_form(rho));
        worst = std::max(worst, err);
        detail += fmt(" rho=%g:%.2e", rho, err);
    }
    return report(1, worst <= 1e-3, fmt("poisson greedy closed form, max err %.3e (tol 1e-3);", worst) + detail);
}

bool c2() {
    const RealMeasure delta1({0.0, 1.0});
    double worst_cov = 0, worst_path = 0;
    for (auto k : {CriterionKind::Greedy, CriterionKind::UniMin}) {
        auto sol = solve(make_system(k, delta1), 1e-5);
        worst_cov = std::max(worst_cov, std::abs(sol.coverage - 1.0));
        for (std::size_t i = 0; i < sol.grid.size(); ++i)
            worst_path = std::max(worst_path, std::abs(sol.states[i][1] - std::max(0.0, 1 - 2 * sol.grid[i])));
    }
    return report(2, worst_cov <= 1e-6 && worst_path <= 1e-6,
                  fmt("1-regular: |coverage-1| %.2e, sup_t |eta_t(1)-(1-2t)+| %.2e (tol 1e-6)", worst_cov, worst_path));
}

bool convergence(int id, CriterionKind k, bool direction) {
    const auto model = DegreeModel::regular(3);
    const double fl = fluid_coverage(model, k, 1e-5);
    const auto s = summarize(sim_coverages(model, k, 100000, 20, 3000 + id));
    const double gap = std::abs(s.mean - fl);
    bool ok = gap <= 0.01;
    std::string msg = fmt("regular:d=3 %s: fluid %.6f, mean of 20 at n=1e5 %.6f, gap %.2e (tol 0.01)",
                          std::string(criterion_name(k)).c_str(), fl, s.mean, gap);
    if (direction) {
        auto mean_abs_gap = [&](std::size_t n) {
            double g = 0;
            for (double c : sim_coverages(model, k, n, 10, 4000 + n)) g += std::abs(c - fl);
            return g / 10;
        };
        const double g4 = mean_abs_gap(10000), g6 = mean_abs_gap(1000000);
        ok = ok && g4 > g6;
        msg += fmt("; mean |gap| n=1e4 %.2e > n=1e6 %.2e", g4, g6);
    }
    if (k != CriterionKind::Greedy) {
        const double cond = fluid_coverage(model, k, 1e-5, ShiftLaw::Conditional);
        std::printf("  C%d conditional shift law: fluid %.6f, gap to simulation %.2e\n", id, cond, std::abs(s.mean - cond));
    }
    return report(id, ok, msg);
}

bool c5() {
    std::size_t bad = 0, total = 0;
    double min_margin = INFINITY;
    std::string worst;
    auto check = [&](const DegreeModel& m) {
        const double g = fluid_coverage(m, CriterionKind::Greedy, 1e-5);
        const double u = fluid_coverage(m, CriterionKind::UniMin, 1e-5);
        ++total;
        if (!(u > g)) ++bad;
        if (u - g < min_margin) {
            min_margin = u - g;
            worst = m.name();
        }
    };
    for (Degree d = 2; d <= 15; ++d) check(DegreeModel::regular(d));
    for (Degree n = 2; n <= 20; ++n) check(DegreeModel::uniform(1, n));
    return report(5, bad == 0,
                  fmt("uni-min > greedy on %zu/%zu models, smallest margin %.3e at ", total - bad, total, min_margin) +
                      worst);
}

bool c6() {
    const std::vector<Degree> deg{3, 2, 1, 4, 2, 2};
    SimpleGraph g;
    for (std::uint64_t attempt = 0;; ++attempt) {
        Rng rng(6006, attempt);
        try {
            g = SimpleGraph(deg.size(), pair_uniformly(deg, rng));
            break;
        } catch (const Error&) {
        }
    }
    const auto target = g.edges();
    bool ok = true;
    std::string msg = "simple graph on degrees (3,2,1,4,2,2)";
    for (auto k : {CriterionKind::Greedy, CriterionKind::UniMin}) {
        const auto exact = enumerate_offline(g, k).by_matched;

        Rng rng(6106, static_cast<std::uint64_t>(k));
        std::map<std::size_t, double> off;
        const std::size_t reps = 100000;
        for (std::size_t i = 0; i < reps; ++i) off[run_offline(g, k, rng, false).matching.size() * 2] += 1.0 / reps;

        Rng jr(6206, static_cast<std::uint64_t>(k));
        std::map<std::size_t, double> joint;
        std::size_t accepted = 0;
        const DegreeVector dv{deg, false};
        for (std::size_t i = 0; i < 1000000; ++i) {
            auto t = run(dv, k, jr, {}, {.record_edges = true});
            auto e = t.edges;
            for (auto& [u, v] : e)
                if (u > v) std::swap(u, v);
            std::sort(e.begin(), e.end());
            if (e != target) continue;
            ++accepted;
            joint[t.matched]++;
        }
        for (auto& [m, p] : joint) p /= static_cast<double>(accepted);
        const double tv_off = testing::total_variation(off, exact);
        const double tv_joint = accepted ? testing::total_variation(joint, exact) : 1.0;
        ok = ok && tv_off <= 0.01 && tv_joint <= 0.05;
        msg += fmt("; %s: TV offline %.4f (tol 0.01), TV joint|G %.4f over %zu accepted (tol 0.05)",
                   std::string(criterion_name(k)).c_str(), tv_off, tv_joint, accepted);
    }
    return report(6, ok, msg);
}

DegreeModel random_model(Rng& rng) {
    switch (rng.uniform_index(4)) {
        case 0: return DegreeModel::regular(static_cast<Degree>(1 + rng.uniform_index(8)));
        case 1: {
            const auto a = static_cast<Degree>(rng.uniform_index(3));
            return DegreeModel::uniform(a, a + 1 + static_cast<Degree>(rng.uniform_index(8)));
        }
        case 2: return DegreeModel::poisson(0.5 + 6 * rng.uniform01());
        default: {
            std::vector<double> p(2 + rng.uniform_index(7));
            for (auto& x : p) x = rng.uniform01() < 0.25 ? 0.0 : rng.uniform01();
            p.back() += 0.1;
            double total = 0;
            for (double x : p) total += x;
            for (auto& x : p) x /= total;
            return DegreeModel::explicit_pmf(p);
        }
    }
}

bool c7() {
    std::size_t violations = 0, steps = 0;
    Rng meta(7007);
    for (std::size_t sc = 0; sc < 200; ++sc) {
        const auto model = random_model(meta);
        const auto kind = kAllCriteria[meta.uniform_index(5)];
        const std::size_t n = 1 + meta.uniform_index(2000);
        Rng rng(7107, sc);
        SimState s(sample_degree_vector(model, n, rng));
        auto integrals = [&] {
            std::array<double, 4> v{};
            for (auto [y, c] : s.measure.atoms()) {
                const double w = static_cast<double>(c), d = y;
                v[0] += w;
                v[1] += w * d;
                v[2] += w * d * d;
                v[3] += y >= 2 ? w : 0.0;
            }
            return v;
        };
        auto prev = integrals();
        while (s.step < n) {
            step(s, kind, rng);
            ++steps;
            const auto cur = integrals();
            for (int f = 0; f < 4; ++f)
                if (cur[f] > prev[f]) ++violations;
            prev = cur;
        }
    }
    return report(7, violations == 0,
                  fmt("monotone <mu_j,f> for f in {1, chi, chi^2, 1_{>=2}}: %zu violations over 200 scenarios, %zu steps",
                      violations, steps));
}

bool c8() {
    std::size_t parity = 0, accounting = 0, runs = 0;
    Rng meta(8008);
    for (std::size_t sc = 0; sc < 200; ++sc) {
        const auto model = random_model(meta);
        const auto kind = kAllCriteria[meta.uniform_index(5)];
        const std::size_t n = 1 + meta.uniform_index(2000);
        Rng rng(8108, sc);
        const auto dv = sample_degree_vector(model, n, rng);
        if (dv.sum() % 2) ++parity;
        SimState s(dv, {.verify = sc % 10 == 0});
        while (s.step < n) {
            step(s, kind, rng);
            if (s.pool.size() % 2) ++parity;
        }
        ++runs;
        if (2 * s.matching.size() + s.measure.count(0) + s.blocked != n || s.measure.mass() != s.measure.count(0))
            ++accounting;
        // run() closes its own books and throws if they do not balance.
        Rng rng2(8208, sc);
        auto t = run(dv, kind, rng2);
        ++runs;
        if (t.matched + t.isolated + t.blocked != n || t.matched % 2) ++accounting;
    }
    return report(8, parity == 0 && accounting == 0,
                  fmt("parity failures %zu, accounting failures %zu over %zu runs", parity, accounting, runs));
}

bool c9() {
    Rng rng(9009);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        std::vector<double> w(2 + rng.uniform_index(40));
        for (auto& x : w) x = rng.uniform01() < 0.3 ? 0.0 : rng.uniform01() * std::pow(10.0, 3 * rng.uniform01() - 2);
        w[1 + rng.uniform_index(w.size() - 1)] += 1e-3;
        const RealMeasure mu(w);
        for (auto kind : {CriterionKind::Greedy, CriterionKind::UniMin, CriterionKind::UniMax}) {
            const auto kp = kernel_pair(kind, mu);
            double s = 0;
            for (double x : kp.K()) s += x;
            worst = std::max(worst, std::abs(s - 1));
            for (Degree k = 1; k <= kp.bound(); ++k) {
                double t = 0;
                for (double x : kp.kprime(k)) t += x;
                worst = std::max(worst, std::abs(t - 1));
            }
        }
    }
    return report(9, worst <= 1e-9, fmt("kernel masses, max |mass-1| %.2e over 100 measures x 3 criteria (tol 1e-9)", worst));
}

// Exact law of the with-replacement auxiliary sampler for GREEDY by enumerating
// every draw sequence.
struct HatExact {
    std::map<Degree, double> K;                         // law of K^
    std::map<Degree, std::map<Degree, double>> Kprime;  // law of K^' given K^ = k (k' = 0 on the bad event)
    std::map<Degree, double> good;                      // P(bad event does not occur | K^ = k)
    double mean_1 = 0, mean_chi = 0;                    // E<theta^, f>
};

HatExact hat_exact(const std::vector<Degree>& a) {
    std::vector<std::uint32_t> owner;
    for (std::uint32_t v = 0; v < a.size(); ++v) owner.insert(owner.end(), a[v], v);
    const double S = static_cast<double>(owner.size());
    const double sb_grad_chi = 1.0;  // size-biased mean of grad chi
    std::size_t positive = 0;
    for (Degree d : a) positive += d > 0;

    HatExact h;
    for (std::uint32_t I = 0; I < a.size(); ++I) {
        if (a[I] == 0) continue;
        const Degree k = a[I];
        const double pI = 1.0 / static_cast<double>(positive);
        h.K[k] += pI;
        std::vector<std::uint32_t> seq(k, 0);
        std::function<void(std::size_t, double)> rec = [&](std::size_t l, double p) {
            if (l < k) {
                for (std::uint32_t x = 0; x < owner.size(); ++x) {
                    seq[l] = x;
                    rec(l + 1, p / S);
                }
                return;
            }
            std::vector<std::uint32_t> others;
            for (auto x : seq)
                if (owner[x] != I && std::find(others.begin(), others.end(), owner[x]) == others.end())
                    others.push_back(owner[x]);
            if (others.empty()) {
                h.Kprime[k][0] += p;
                h.mean_1 += p * -1.0;
                h.mean_chi += p * -static_cast<double>(k);
                return;
            }
            h.good[k] += p;
            for (auto J : others) {
                const double q = p / static_cast<double>(others.size());
                const Degree kp = a[J];
                h.Kprime[k][kp] += q;
                // Every draw except the first one landing in J shifts a unit down;
                // so do the K^'-1 extra draws.
                const double shifts = (k - 1) + (kp - 1) * sb_grad_chi;
                h.mean_1 += q * -2.0;
                h.mean_chi += q * -(static_cast<double>(k) + kp + shifts);
            }
        };
        rec(0, pI);
    }
    for (auto& [k, row] : h.Kprime)
        for (auto& [kp, p] : row) p /= h.K[k];
    for (auto& [k, p] : h.good) p /= h.K[k];
    return h;
}

bool c10() {
    const CountingMeasure mu{{1, 2}, {2, 1}};
    const std::vector<Degree> a{1, 1, 2};
    const auto ex = hat_exact(a);

    // Closed form: -<K, f + <K^'(.), f>> - <mu, chi grad f>/<mu, chi> <K, chi - 1 + <K^'(.), chi - 1>>,
    // with <K^'(k), g> summed over the positive integers.
    const double ratio_1 = 0.0, ratio_chi = 1.0;  // grad 1 = 0, grad chi = 1
    auto kp_int = [&](Degree k, auto g) {
        double s = 0;
        for (auto [kp, p] : ex.Kprime.at(k))
            if (kp > 0) s += p * g(kp);
        return s;
    };
    auto closed = [&](auto f, double ratio, bool weighted) {
        double first = 0, second = 0;
        for (auto [k, pk] : ex.K) {
            first += pk * (f(k) + kp_int(k, f));
            const double w = weighted ? ex.good.count(k) ? ex.good.at(k) : 0.0 : 1.0;
            second += pk * (w * (k - 1.0) + kp_int(k, [](double y) { return y - 1; }));
        }
        return -first - ratio * second;
    };
    auto one = [](double) { return 1.0; };
    auto chi = [](double y) { return y; };

    Rng rng(10010);
    const std::size_t draws = 1000000;
    double s1 = 0, q1 = 0, sc = 0, qc = 0;
    for (std::size_t i = 0; i < draws; ++i) {
        const auto th = hat_step_sample(mu, CriterionKind::Greedy, rng);
        const double v1 = integrate(th, one), vc = integrate(th, chi);
        s1 += v1, q1 += v1 * v1, sc += vc, qc += vc * vc;
    }
    const double N = draws;
    const double m1 = s1 / N, mc = sc / N;
    const double se1 = std::sqrt((q1 / N - m1 * m1) / (N - 1)), sec = std::sqrt((qc / N - mc * mc) / (N - 1));
    const double lit1 = closed(one, ratio_1, false), litc = closed(chi, ratio_chi, false);
    const double cor1 = closed(one, ratio_1, true), corc = closed(chi, ratio_chi, true);
    const bool ok1 = std::abs(m1 - lit1) <= 3 * se1, okc = std::abs(mc - litc) <= 3 * sec;
    std::printf("  C10 f=1:   MC %.5f (se %.1e), closed form %.5f, exact %.5f, with P(good|k) weight %.5f\n", m1, se1,
                lit1, ex.mean_1, cor1);
    std::printf("  C10 f=chi: MC %.5f (se %.1e), closed form %.5f, exact %.5f, with P(good|k) weight %.5f\n", mc, sec,
                litc, ex.mean_chi, corc);
    return report(10, ok1 && okc,
                  fmt("hat sampler vs closed form, mu={1:2,2:1}, greedy: f=1 %.1f se, f=chi %.1f se (tol 3 se)",
                      std::abs(m1 - lit1) / se1, std::abs(mc - litc) / sec));
}

bool c11() {
    const double rho = 2.0;
    const auto ref = solve_poisson_greedy(rho, 1e-6);
    auto err = [&](double h) {
        const auto s = solve_poisson_greedy(rho, h);
        const auto stride = static_cast<std::size_t>(std::lround(h / 1e-6));
        double e = 0;
        for (std::size_t i = 0; i < s.v.size() && i * stride < ref.v.size(); ++i)
            if (ref.v[i * stride] >= 0.05) e = std::max(e, std::abs(s.v[i] - ref.v[i * stride]));
        return e;
    };
    const double e2 = err(2e-4), e1 = err(1e-4);
    const double r = e2 / e1;
    return report(11, r >= 12 && r <= 20,
                  fmt("RK4 order, rho=2, sup error where v>=0.05: h=2e-4 %.3e, h=1e-4 %.3e, ratio %.2f (want [12,20])", e2,
                      e1, r));
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<bool()>> checks{
        c1, c2, [] { return convergence(3, CriterionKind::Greedy, true); },
        [] { return convergence(4, CriterionKind::UniMin, false); }, c5, c6, c7, c8, c9, c10, c11};
    std::set<int> pick;
    for (int i = 1; i < argc; ++i) pick.insert(std::atoi(argv[i]));
    bool ok = true;
    for (int i = 1; i <= static_cast<int>(checks.size()); ++i)
        if (pick.empty() || pick.count(i)) {
            try {
                ok = checks[i - 1]() && ok;
            } catch (const std::exception& e) {
                ok = report(i, false, std::string("threw: ") + e.what()) && ok;
            }
        }
    return ok ? 0 : 1;
}
