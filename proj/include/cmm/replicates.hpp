#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cmm/cm_matcher.hpp"
#include "cmm/criteria.hpp"
#include "cmm/degree_model.hpp"
#include "cmm/fluid.hpp"

namespace cmm {

struct ReplicateSpec {
    DegreeModel model = DegreeModel::regular(1);
    CriterionKind kind = CriterionKind::Greedy;
    std::size_t n = 0;
    std::size_t replicates = 1;
    std::uint64_t seed = 0;
    std::vector<double> grid;
    SimOptions options;
};

struct ReplicateResult {
    std::size_t index = 0;
    bool evenized = false;
    Trajectory trajectory;
};

// Replicate i draws its degrees and its matching from Rng(seed, i), so the
// result does not depend on scheduling.
ReplicateResult run_replicate(const ReplicateSpec& spec, std::size_t i);

std::vector<ReplicateResult> run_replicates_serial(const ReplicateSpec& spec);
// OpenMP across replicates; identical output to the serial runner.
std::vector<ReplicateResult> run_replicates(const ReplicateSpec& spec);

std::vector<FluidSolution> solve_all_serial(const std::vector<FluidSystem>& systems, double h, SolveOptions opt = {});
std::vector<FluidSolution> solve_all(const std::vector<FluidSystem>& systems, double h, SolveOptions opt = {});

struct Summary {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation
    std::size_t count = 0;
};
Summary summarize(const std::vector<double>& xs);

}  // namespace cmm
