#include "cmm/replicates.hpp"

#include <cmath>
#include <exception>

namespace cmm {

ReplicateResult run_replicate(const ReplicateSpec& spec, std::size_t i) {
    Rng rng(spec.seed, i);
    DegreeVector dv = sample_degree_vector(spec.model, spec.n, rng);
    ReplicateResult r;
    r.index = i;
    r.evenized = dv.evenized;
    r.trajectory = run(dv, spec.kind, rng, spec.grid, spec.options);
    return r;
}

std::vector<ReplicateResult> run_replicates_serial(const ReplicateSpec& spec) {
    std::vector<ReplicateResult> out(spec.replicates);
    for (std::size_t i = 0; i < spec.replicates; ++i) out[i] = run_replicate(spec, i);
    return out;
}

namespace {

// Runs body(i) for i < count on the OpenMP team and rethrows the first failure.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
    std::exception_ptr err;
    const auto total = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < total; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(cmm_parallel_error)
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
}

}  // namespace

std::vector<ReplicateResult> run_replicates(const ReplicateSpec& spec) {
    std::vector<ReplicateResult> out(spec.replicates);
    parallel_for(spec.replicates, [&](std::size_t i) { out[i] = run_replicate(spec, i); });
    return out;
}

std::vector<FluidSolution> solve_all_serial(const std::vector<FluidSystem>& systems, double h, SolveOptions opt) {
    std::vector<FluidSolution> out;
    out.reserve(systems.size());
    for (const auto& s : systems) out.push_back(solve(s, h, opt));
    return out;
}

std::vector<FluidSolution> solve_all(const std::vector<FluidSystem>& systems, double h, SolveOptions opt) {
    std::vector<FluidSolution> out(systems.size());
    parallel_for(systems.size(), [&](std::size_t i) { out[i] = solve(systems[i], h, opt); });
    return out;
}

Summary summarize(const std::vector<double>& xs) {
    Summary s;
    s.count = xs.size();
    if (xs.empty()) return s;
    for (double x : xs) s.mean += x;
    s.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return s;
}

}  // namespace cmm
