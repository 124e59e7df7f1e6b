#include "cmm/fluid.hpp"

#include <algorithm>
#include <cmath>

#include "cmm/error.hpp"

namespace cmm {

std::string_view shift_law_name(ShiftLaw s) {
    return s == ShiftLaw::SizeBiased ? "size-biased" : "conditional";
}

ShiftLaw parse_shift_law(std::string_view name) {
    if (name == "size-biased") return ShiftLaw::SizeBiased;
    if (name == "conditional") return ShiftLaw::Conditional;
    throw Error(Errc::InvalidArgument, "unknown shift law '" + std::string(name) + "'");
}

FluidSystem make_system(CriterionKind kind, RealMeasure initial, double halt_eps, ShiftLaw shift) {
    if (!has_kernel(kind))
        throw Error(Errc::UnsupportedKernel, std::string(criterion_name(kind)) + " has no fluid limit");
    if (std::abs(initial.mass() - 1.0) > 1e-9) throw Error(Errc::InvalidArgument, "initial mass must be 1");
    if (!(halt_eps > 0.0)) throw Error(Errc::InvalidArgument, "halt_eps must be positive");
    return FluidSystem{kind, std::move(initial), halt_eps, shift};
}

std::vector<double> rhs(CriterionKind kind, const std::vector<double>& x_in, double halt_eps, ShiftLaw shift) {
    const std::size_t W = x_in.size();
    std::vector<double> d(W, 0.0);
    std::vector<double> x(W);
    for (std::size_t i = 0; i < W; ++i) x[i] = std::max(x_in[i], 0.0);
    double m1 = 0.0, mchi = 0.0;
    for (std::size_t i = 1; i < W; ++i) {
        m1 += x[i];
        mchi += static_cast<double>(i) * x[i];
    }
    if (m1 <= halt_eps) return d;

    const RealMeasure mu(x);
    const KernelPair kp = kernel_pair(kind, mu);
    const auto& K = kp.K();
    std::vector<double> mixed(W, 0.0);  // law of the match's degree
    if (kp.k_independent()) {
        auto row = kp.kprime(1);
        std::copy(row.begin(), row.end(), mixed.begin());
    } else {
        for (std::size_t k = 1; k < W; ++k) {
            if (K[k] == 0.0) continue;
            auto row = kp.kprime(static_cast<Degree>(k));
            for (std::size_t y = 1; y < W; ++y) mixed[y] += K[k] * row[y];
        }
    }
    // rate[y]: flow from y to y - 1 through stubs lost by nodes other than the
    // explored node and its match.
    std::vector<double> rate(W + 1, 0.0);
    if (shift == ShiftLaw::SizeBiased) {
        double c = 0.0;
        for (std::size_t k = 1; k < W; ++k) c += static_cast<double>(k - 1) * (K[k] + mixed[k]);
        for (std::size_t y = 1; y < W; ++y) rate[y] = c * static_cast<double>(y) * x[y] / mchi;
    } else {
        double draws = 0.0;  // k neighbor draws plus k' - 1 from the match
        for (std::size_t k = 1; k < W; ++k)
            draws += static_cast<double>(k) * K[k] + static_cast<double>(k - 1) * mixed[k];
        for (std::size_t y = 1; y < W; ++y) rate[y] = draws * static_cast<double>(y) * x[y] / mchi - mixed[y];
    }
    for (std::size_t j = 0; j < W; ++j) d[j] = -K[j] - mixed[j] - rate[j] + rate[j + 1];
    return d;
}

namespace {

double positive_mass(const std::vector<double>& x) {
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) s += x[i];
    return s;
}

// One RK4 step. `clean` is cleared when a stage is evaluated at or below the
// halt threshold, where the right-hand side jumps to zero.
std::vector<double> rk4(const FluidSystem& sys, const std::vector<double>& x, double dt, bool& clean) {
    const double eps = sys.halt_eps;
    const std::size_t W = x.size();
    std::vector<double> tmp(W);
    clean = true;
    auto stage = [&](const std::vector<double>& k, double a) {
        double m = 0.0;
        for (std::size_t i = 0; i < W; ++i) {
            tmp[i] = x[i] + a * k[i];
            if (i > 0) m += std::max(tmp[i], 0.0);
        }
        if (m <= eps) clean = false;
        return rhs(sys.kind, tmp, eps, sys.shift);
    };
    const auto k1 = rhs(sys.kind, x, eps, sys.shift);
    const auto k2 = stage(k1, dt / 2);
    const auto k3 = stage(k2, dt / 2);
    const auto k4 = stage(k3, dt);
    std::vector<double> y(W);
    for (std::size_t i = 0; i < W; ++i) y[i] = x[i] + dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    if (positive_mass(y) <= eps) clean = false;
    return y;
}

constexpr double kClampTol = 1e-13;
constexpr double kMinSubstep = 1e-12;

std::size_t step_count(double h) {
    if (!(h > 0.0 && h <= kMaxMesh)) throw Error(Errc::MeshInvalid, "mesh must lie in (0, 0.01]");
    return static_cast<std::size_t>(std::ceil(1.0 / h - 1e-9));
}

double grid_time(std::size_t i, std::size_t steps, double h) {
    return i >= steps ? 1.0 : std::min(static_cast<double>(i) * h, 1.0);
}

}  // namespace

FluidSolution solve(const FluidSystem& sys, double h, SolveOptions opt) {
    const std::size_t steps = step_count(h);
    const std::size_t stride = std::max<std::size_t>(opt.record_stride, 1);
    FluidSolution sol;
    sol.steps = steps;
    std::vector<double> x = sys.initial.weights();
    bool halted = false;

    auto record = [&](std::size_t i) {
        if (i % stride == 0 || i == steps) {
            sol.grid.push_back(grid_time(i, steps, h));
            sol.states.emplace_back(x);
        }
    };
    record(0);
    for (std::size_t i = 1; i <= steps; ++i) {
        const double t0 = grid_time(i - 1, steps, h);
        const double dt = grid_time(i, steps, h) - t0;
        if (!halted && positive_mass(x) <= sys.halt_eps) {
            halted = true;
            sol.t_halt = t0;
        }
        // Near exhaustion the system turns stiff, so a grid step is split in
        // halves until each piece stays clean and (almost) nonnegative. When
        // no piece above the floor works the threshold has been reached.
        double rem = dt, sub = dt;
        while (!halted && rem > dt * 1e-15) {
            sub = std::min(sub, rem);
            bool clean;
            std::vector<double> y = rk4(sys, x, sub, clean);
            double neg = 0.0;
            for (double v : y) neg -= std::min(v, 0.0);
            if (clean && neg <= kClampTol) {
                for (double& v : y) v = std::max(v, 0.0);
                sol.max_clamp = std::max(sol.max_clamp, neg);
                sol.total_clamp += neg;
                x = std::move(y);
                rem -= sub;
            } else if (sub > dt * kMinSubstep) {
                sub /= 2;
            } else {
                halted = true;
                sol.t_halt = t0 + (dt - rem);
            }
        }
        record(i);
    }
    if (!halted && positive_mass(x) <= sys.halt_eps) sol.t_halt = 1.0;
    sol.coverage = std::clamp(1.0 - x[0], 0.0, 1.0);
    return sol;
}

double poisson_v_rhs(double rho, double v) {
    if (!(v > 0.0)) return 0.0;
    return -(1.0 + 1.0 / -std::expm1(-rho * v));
}

namespace {

double coverage_integrand(double rho, double v) {
    if (!(v > 0.0)) return 0.0;
    const double rv = rho * v;
    return std::exp(-rv) * (rv / -std::expm1(-rv) - 1.0 + rv);
}

}  // namespace

PoissonSolution solve_poisson_greedy(double rho, double h) {
    if (!(rho > 0.0) || !std::isfinite(rho)) throw Error(Errc::InvalidArgument, "rho must be positive");
    const std::size_t steps = step_count(h);
    PoissonSolution sol;
    sol.t.reserve(steps + 1);
    sol.v.reserve(steps + 1);
    double v = 1.0;
    sol.t.push_back(0.0);
    sol.v.push_back(v);
    for (std::size_t i = 1; i <= steps; ++i) {
        const double t0 = grid_time(i - 1, steps, h);
        const double dt = grid_time(i, steps, h) - t0;
        if (v > 0.0) {
            const double k1 = poisson_v_rhs(rho, v);
            const double k2 = poisson_v_rhs(rho, v + dt / 2 * k1);
            const double k3 = poisson_v_rhs(rho, v + dt / 2 * k2);
            const double k4 = poisson_v_rhs(rho, v + dt * k3);
            v = std::max(0.0, v + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4));
            if (v == 0.0) sol.t_halt = grid_time(i, steps, h);
        }
        sol.t.push_back(grid_time(i, steps, h));
        sol.v.push_back(v);
    }

    // Composite Simpson over the uniform part, 3/8 rule for an odd leftover,
    // trapezoid for a shortened last interval.
    std::vector<double> g(sol.v.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = coverage_integrand(rho, sol.v[i]);
    const bool short_last = std::abs((sol.t[steps] - sol.t[steps - 1]) - h) > 1e-12 * h;
    const std::size_t uniform = short_last ? steps - 1 : steps;
    double integral = 0.0;
    std::size_t simpson = uniform;
    if (uniform % 2 == 1) simpson = uniform >= 3 ? uniform - 3 : 0;
    for (std::size_t i = 0; i + 2 <= simpson; i += 2) integral += h / 3 * (g[i] + 4 * g[i + 1] + g[i + 2]);
    if (uniform % 2 == 1) {
        if (uniform >= 3) {
            const std::size_t a = uniform - 3;
            integral += 3 * h / 8 * (g[a] + 3 * g[a + 1] + 3 * g[a + 2] + g[a + 3]);
        } else {
            integral += h / 2 * (g[0] + g[1]);
        }
    }
    if (short_last) integral += (sol.t[steps] - sol.t[steps - 1]) / 2 * (g[steps - 1] + g[steps]);
    sol.coverage = 1.0 - std::exp(-rho) - integral;
    return sol;
}

double poisson_greedy_closed_form(double rho) { return 1.0 - std::log(2.0 - std::exp(-rho)) / rho; }

}  // namespace cmm
