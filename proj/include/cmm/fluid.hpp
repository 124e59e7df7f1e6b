#pragma once

#include <cstddef>
#include <limits>
#include <string_view>
#include <vector>

#include "cmm/criteria.hpp"
#include "cmm/measure.hpp"

namespace cmm {

inline constexpr double kHaltEps = 1e-9;
inline constexpr double kMaxMesh = 0.01;

// Law of the availabilities that lose one stub to the explored node without
// being chosen as its match. SizeBiased treats each of them as a fresh
// size-biased draw, which is exact for GREEDY. Conditional removes the chosen
// draw from the k draws instead, which is what the finite process does under
// UNI-MIN and UNI-MAX.
enum class ShiftLaw { SizeBiased, Conditional };

std::string_view shift_law_name(ShiftLaw s);    // size-biased | conditional
ShiftLaw parse_shift_law(std::string_view name);  // throws InvalidArgument

struct FluidSystem {
    CriterionKind kind;
    RealMeasure initial;
    double halt_eps = kHaltEps;
    ShiftLaw shift = ShiftLaw::SizeBiased;

    std::size_t bound() const { return initial.bound(); }
};

// Throws UnsupportedKernel for criteria without a kernel and InvalidArgument
// when the initial mass is not 1.
FluidSystem make_system(CriterionKind kind, RealMeasure initial, double halt_eps = kHaltEps,
                        ShiftLaw shift = ShiftLaw::SizeBiased);

// Time derivative of every coordinate 0..N of the state x. Negative entries of
// x are read as 0. Zero once the mass on positive degrees is <= halt_eps.
std::vector<double> rhs(CriterionKind kind, const std::vector<double>& x, double halt_eps = kHaltEps,
                        ShiftLaw shift = ShiftLaw::SizeBiased);

struct SolveOptions {
    std::size_t record_stride = 1;  // keep every k-th grid state (the last one always)
};

struct FluidSolution {
    std::vector<double> grid;
    std::vector<RealMeasure> states;
    double t_halt = std::numeric_limits<double>::infinity();
    double coverage = 0.0;
    double max_clamp = 0.0;    // largest negative mass removed in one step
    double total_clamp = 0.0;
    std::size_t steps = 0;
};

// Fixed-step RK4 on [0, 1]; throws MeshInvalid unless 0 < h <= 0.01.
FluidSolution solve(const FluidSystem& sys, double h, SolveOptions opt = {});

struct PoissonSolution {
    std::vector<double> t;
    std::vector<double> v;
    double coverage = 0.0;
    double t_halt = std::numeric_limits<double>::infinity();
};

// Scalar reduction for GREEDY on Poisson(rho) degrees.
double poisson_v_rhs(double rho, double v);
PoissonSolution solve_poisson_greedy(double rho, double h);
double poisson_greedy_closed_form(double rho);

}  // namespace cmm
