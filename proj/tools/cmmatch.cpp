#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "cmm/cm_matcher.hpp"
#include "cmm/degree_model.hpp"
#include "cmm/error.hpp"
#include "cmm/fluid.hpp"
#include "cmm/offline.hpp"
#include "cmm/replicates.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kExitTolerance = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct IoFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Echo = std::vector<std::pair<std::string, std::string>>;

std::string num(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

// Output sink: a file, or stdout for "-".
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (path == "-") return;
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_) throw IoFailure("cannot write '" + path + "'");
    }
    std::ostream& os() { return file_ ? *file_ : std::cout; }
    bool is_stdout() const { return !file_; }

private:
    std::unique_ptr<std::ofstream> file_;
};

void header(std::ostream& os, const std::string& command, std::uint64_t seed, const Echo& echo) {
    os << "# cmmatch " << kVersion << '\n';
    os << "# generator: " << cmm::Rng::kName << '\n';
    os << "# seed: " << seed << '\n';
    os << "# config: " << command;
    for (const auto& [k, v] : echo) os << " --" << k << '=' << v;
    os << '\n';
}

bool out_of_hypothesis(const cmm::DegreeModel& m, cmm::CriterionKind k) {
    return !m.bounded() && (k == cmm::CriterionKind::UniMin || k == cmm::CriterionKind::UniMax);
}

void warn_hypothesis(std::ostream& os, const cmm::DegreeModel& m, cmm::CriterionKind k) {
    std::cerr << "warning: out-of-hypothesis: " << cmm::criterion_name(k) << " on unbounded-support model " << m.name()
              << " (solved on a truncated support)\n";
    os << "# hypothesis: out-of-hypothesis\n";
}

cmm::RealMeasure initial_measure(const cmm::DegreeModel& m, double eps) {
    return cmm::pmf_truncated(m, m.support_max().value_or(1), eps);
}

struct FluidPoint {
    double coverage;
    double t_halt;
};

FluidPoint fluid_point(const cmm::DegreeModel& m, cmm::CriterionKind k, double h, double eps, double halt_eps,
                       cmm::ShiftLaw shift) {
    auto sol = cmm::solve(cmm::make_system(k, initial_measure(m, eps), halt_eps, shift), h, {.record_stride = 1u << 30});
    return {sol.coverage, sol.t_halt};
}

// ---- simulate ----

struct SimulateArgs {
    std::string model;
    std::string criterion = "greedy";
    std::size_t n = 10000;
    std::size_t replicates = 1;
    std::uint64_t seed = 0;
    std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0};
    std::string out = "-";
    std::string trajectory_out;
    bool serial = false;
};

int cmd_simulate(const SimulateArgs& a) {
    const auto model = cmm::DegreeModel::parse(a.model);
    const auto kind = cmm::parse_criterion(a.criterion);
    if (a.replicates < 1 || a.n < 1) throw cmm::Error(cmm::Errc::InvalidArgument, "n and replicates must be >= 1");
    std::string grid;
    for (double t : a.grid) grid += (grid.empty() ? "" : ",") + num(t);
    const Echo echo{{"model", model.name()},
                    {"criterion", std::string(cmm::criterion_name(kind))},
                    {"n", std::to_string(a.n)},
                    {"replicates", std::to_string(a.replicates)},
                    {"seed", std::to_string(a.seed)},
                    {"grid", grid}};

    Sink out(a.out);
    std::optional<Sink> traj;
    if (!a.trajectory_out.empty()) traj.emplace(a.trajectory_out);

    cmm::ReplicateSpec spec{model, kind, a.n, a.replicates, a.seed, a.trajectory_out.empty() ? std::vector<double>{} : a.grid, {}};
    const auto results = a.serial ? cmm::run_replicates_serial(spec) : cmm::run_replicates(spec);

    auto& os = out.os();
    header(os, "simulate", a.seed, echo);
    os << "replicate,seed,n,model,criterion,coverage,blocked_frac,selfloops,multiedges,evenized\n";
    std::vector<double> cov;
    for (const auto& r : results) {
        const auto& t = r.trajectory;
        cov.push_back(t.coverage);
        os << r.index << ',' << a.seed << ',' << a.n << ',' << model.name() << ',' << cmm::criterion_name(kind) << ','
           << num(t.coverage) << ',' << num(t.blocked_frac) << ',' << t.selfloops << ',' << t.multiedges << ','
           << (r.evenized ? 1 : 0) << '\n';
    }
    const auto s = cmm::summarize(cov);
    if (out.is_stdout()) {
        os << "# coverage mean=" << num(s.mean) << " std=" << num(s.stddev) << '\n';
    } else {
        std::cout << "coverage mean=" << num(s.mean) << " std=" << num(s.stddev) << " replicates=" << s.count << '\n';
    }

    if (traj) {
        auto& ts = traj->os();
        header(ts, "simulate", a.seed, echo);
        ts << "replicate,t,degree,weight\n";
        for (const auto& r : results)
            for (std::size_t g = 0; g < r.trajectory.grid.size(); ++g) {
                const auto& w = r.trajectory.measures[g].weights();
                for (std::size_t y = 0; y < w.size(); ++y)
                    ts << r.index << ',' << num(r.trajectory.grid[g]) << ',' << y << ',' << num(w[y]) << '\n';
            }
    }
    return 0;
}

// ---- fluid ----

struct FluidArgs {
    std::string model;
    std::string criterion = "greedy";
    double mesh = 1e-4;
    std::optional<double> poisson;
    double halt_eps = cmm::kHaltEps;
    double eps = 1e-12;
    std::string out = "-";
    std::string solution_out;
    std::size_t stride = 100;
    std::string shift = "size-biased";
};

int cmd_fluid(const FluidArgs& a) {
    Sink out(a.out);
    auto& os = out.os();
    if (a.poisson) {
        const double rho = *a.poisson;
        const auto model = cmm::DegreeModel::poisson(rho);
        auto sol = cmm::solve_poisson_greedy(rho, a.mesh);
        header(os, "fluid", 0, {{"poisson", num(rho)}, {"mesh", num(a.mesh)}});
        os << "model,criterion,h,coverage,t_halt\n";
        os << model.name() << ",greedy," << num(a.mesh) << ',' << num(sol.coverage) << ',' << num(sol.t_halt) << '\n';
        if (!a.solution_out.empty()) {
            Sink s(a.solution_out);
            header(s.os(), "fluid", 0, {{"poisson", num(rho)}, {"mesh", num(a.mesh)}});
            s.os() << "t,v\n";
            for (std::size_t i = 0; i < sol.t.size(); ++i)
                if (i % a.stride == 0 || i + 1 == sol.t.size()) s.os() << num(sol.t[i]) << ',' << num(sol.v[i]) << '\n';
        }
        return 0;
    }
    if (a.model.empty()) throw cmm::Error(cmm::Errc::InvalidArgument, "fluid needs --model or --poisson");
    const auto model = cmm::DegreeModel::parse(a.model);
    const auto kind = cmm::parse_criterion(a.criterion);
    const auto shift = cmm::parse_shift_law(a.shift);
    const Echo echo{{"model", model.name()},
                    {"criterion", std::string(cmm::criterion_name(kind))},
                    {"mesh", num(a.mesh)},
                    {"halt-eps", num(a.halt_eps)},
                    {"shift", a.shift}};
    header(os, "fluid", 0, echo);
    if (out_of_hypothesis(model, kind)) warn_hypothesis(os, model, kind);
    auto sol = cmm::solve(cmm::make_system(kind, initial_measure(model, a.eps), a.halt_eps, shift), a.mesh,
                          {.record_stride = a.stride});
    os << "model,criterion,h,coverage,t_halt\n";
    os << model.name() << ',' << cmm::criterion_name(kind) << ',' << num(a.mesh) << ',' << num(sol.coverage) << ','
       << num(sol.t_halt) << '\n';
    if (!a.solution_out.empty()) {
        Sink s(a.solution_out);
        header(s.os(), "fluid", 0, echo);
        s.os() << "t,degree,weight\n";
        for (std::size_t i = 0; i < sol.grid.size(); ++i) {
            const auto& w = sol.states[i].weights();
            for (std::size_t y = 0; y < w.size(); ++y) s.os() << num(sol.grid[i]) << ',' << y << ',' << num(w[y]) << '\n';
        }
    }
    return 0;
}

// ---- compare ----

struct CompareArgs {
    std::string model;
    std::string criterion = "greedy";
    std::size_t n = 100000;
    std::size_t replicates = 10;
    std::uint64_t seed = 0;
    double mesh = 1e-4;
    double tol = 0.01;
    double eps = 1e-12;
    std::string shift = "size-biased";
    std::string out = "-";
};

int cmd_compare(const CompareArgs& a) {
    const auto model = cmm::DegreeModel::parse(a.model);
    const auto kind = cmm::parse_criterion(a.criterion);
    if (a.replicates < 1 || a.n < 1) throw cmm::Error(cmm::Errc::InvalidArgument, "n and replicates must be >= 1");
    const auto shift = cmm::parse_shift_law(a.shift);
    const Echo echo{{"model", model.name()},
                    {"criterion", std::string(cmm::criterion_name(kind))},
                    {"n", std::to_string(a.n)},
                    {"replicates", std::to_string(a.replicates)},
                    {"seed", std::to_string(a.seed)},
                    {"mesh", num(a.mesh)},
                    {"tol", num(a.tol)},
                    {"shift", a.shift}};
    Sink out(a.out);
    auto& os = out.os();
    header(os, "compare", a.seed, echo);
    if (out_of_hypothesis(model, kind)) warn_hypothesis(os, model, kind);

    const auto fl = fluid_point(model, kind, a.mesh, a.eps, cmm::kHaltEps, shift);
    cmm::ReplicateSpec spec{model, kind, a.n, a.replicates, a.seed, {}, {}};
    std::vector<double> cov;
    for (const auto& r : cmm::run_replicates(spec)) cov.push_back(r.trajectory.coverage);
    const auto s = cmm::summarize(cov);
    const double gap = std::abs(s.mean - fl.coverage);

    os << "model,criterion,n,replicates,coverage_sim_mean,coverage_sim_std,coverage_fluid,abs_gap\n";
    os << model.name() << ',' << cmm::criterion_name(kind) << ',' << a.n << ',' << a.replicates << ',' << num(s.mean)
       << ',' << num(s.stddev) << ',' << num(fl.coverage) << ',' << num(gap) << '\n';
    if (gap > a.tol) {
        std::cerr << "compare: abs_gap " << num(gap) << " exceeds tolerance " << num(a.tol) << '\n';
        return kExitTolerance;
    }
    return 0;
}

// ---- sweep ----

struct SweepArgs {
    std::string family;
    double from = 0, to = 0, step = 1;
    std::vector<std::string> criteria{"greedy", "uni-min"};
    double mesh = 1e-4;
    double eps = 1e-12;
    std::string shift = "size-biased";
    std::string out = "-";
};

int cmd_sweep(const SweepArgs& a) {
    if (a.family != "regular" && a.family != "uniform" && a.family != "poisson")
        throw cmm::Error(cmm::Errc::InvalidArgument, "family must be regular, uniform or poisson");
    if (!(a.step > 0) || a.to < a.from) throw cmm::Error(cmm::Errc::InvalidArgument, "empty or invalid range");
    const auto shift = cmm::parse_shift_law(a.shift);
    std::vector<cmm::CriterionKind> kinds;
    std::string crit;
    for (const auto& c : a.criteria) {
        kinds.push_back(cmm::parse_criterion(c));
        crit += (crit.empty() ? "" : ",") + std::string(cmm::criterion_name(kinds.back()));
    }

    struct Point {
        double param;
        cmm::DegreeModel model;
        cmm::CriterionKind kind;
        bool scalar;
        std::size_t system = 0;
    };
    std::vector<Point> points;
    std::vector<cmm::FluidSystem> systems;
    const auto count = static_cast<std::size_t>(std::floor((a.to - a.from) / a.step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) {
        const double p = a.from + static_cast<double>(i) * a.step;
        const auto model = a.family == "regular" ? cmm::DegreeModel::regular(static_cast<cmm::Degree>(std::lround(p)))
                           : a.family == "uniform"
                               ? cmm::DegreeModel::uniform(1, static_cast<cmm::Degree>(std::lround(p)))
                               : cmm::DegreeModel::poisson(p);
        for (auto k : kinds) {
            const bool scalar = a.family == "poisson" && k == cmm::CriterionKind::Greedy;
            Point pt{p, model, k, scalar};
            if (!scalar) {
                pt.system = systems.size();
                systems.push_back(cmm::make_system(k, initial_measure(model, a.eps), cmm::kHaltEps, shift));
            }
            points.push_back(pt);
        }
    }
    const auto sols = cmm::solve_all(systems, a.mesh, {.record_stride = 1u << 30});

    Sink out(a.out);
    auto& os = out.os();
    header(os, "sweep", 0,
           {{"family", a.family}, {"from", num(a.from)}, {"to", num(a.to)}, {"step", num(a.step)}, {"criteria", crit},
            {"mesh", num(a.mesh)}, {"shift", a.shift}});
    bool warned = false;
    for (const auto& pt : points)
        if (!warned && out_of_hypothesis(pt.model, pt.kind)) {
            warn_hypothesis(os, pt.model, pt.kind);
            warned = true;
        }
    os << "family,param,model,criterion,h,coverage,t_halt,closed_form\n";
    for (const auto& pt : points) {
        double cov, th;
        std::string closed;
        if (pt.scalar) {
            auto sol = cmm::solve_poisson_greedy(pt.param, a.mesh);
            cov = sol.coverage;
            th = sol.t_halt;
            closed = num(cmm::poisson_greedy_closed_form(pt.param));
        } else {
            cov = sols[pt.system].coverage;
            th = sols[pt.system].t_halt;
        }
        os << a.family << ',' << num(pt.param) << ',' << pt.model.name() << ',' << cmm::criterion_name(pt.kind) << ','
           << num(a.mesh) << ',' << num(cov) << ',' << num(th) << ',' << closed << '\n';
    }
    return 0;
}

// ---- oracle ----

struct OracleArgs {
    std::string graph;
    std::string criterion = "greedy";
    std::string out = "-";
};

int cmd_oracle(const OracleArgs& a) {
    const auto kind = cmm::parse_criterion(a.criterion);
    const auto g = cmm::read_edge_list(a.graph);
    const auto d = cmm::enumerate_offline(g, kind);
    Sink out(a.out);
    auto& os = out.os();
    header(os, "oracle", 0, {{"graph", a.graph}, {"criterion", std::string(cmm::criterion_name(kind))}});
    os << "matched,coverage,probability\n";
    for (auto [m, p] : d.by_matched) os << m << ',' << num(static_cast<double>(m) / g.n()) << ',' << num(p) << '\n';
    os << "# mean coverage=" << num(d.mean()) << '\n';
    return 0;
}

// Expands "--config file" into "--key value" pairs for keys not given on the
// command line.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string path;
        std::size_t width = 0;
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            width = 2;
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            width = 1;
        } else {
            continue;
        }
        std::ifstream in(path);
        if (!in) throw IoFailure("cannot read config '" + path + "'");
        std::set<std::string> given;
        for (const auto& s : args)
            if (s.rfind("--", 0) == 0) given.insert(s.substr(2, s.find('=') == std::string::npos ? std::string::npos : s.find('=') - 2));
        args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + width));
        std::string line;
        while (std::getline(in, line)) {
            auto trim = [](std::string s) {
                s.erase(0, s.find_first_not_of(" \t\r"));
                s.erase(s.find_last_not_of(" \t\r") + 1);
                return s;
            };
            line = trim(line);
            if (line.empty() || line[0] == '#') continue;
            auto eq = line.find('=');
            if (eq == std::string::npos) throw CLI::ParseError("config line without '=': " + line, kExitConfig);
            std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
            if (key.rfind("--", 0) == 0) key = key.substr(2);
            if (given.count(key)) continue;
            args.push_back("--" + key);
            args.push_back(value);
        }
        break;
    }
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Configuration-model matching: simulation and fluid limits"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    SimulateArgs sim;
    auto* s = app.add_subcommand("simulate", "Monte Carlo runs of the joint graph/matching construction");
    s->add_option("--model", sim.model, "Degree model, e.g. regular:d=3")->required();
    s->add_option("--criterion", sim.criterion, "greedy | uni-min | uni-max | min-min | max-max");
    s->add_option("--n", sim.n, "Number of nodes");
    s->add_option("--replicates", sim.replicates, "Independent runs");
    s->add_option("--seed", sim.seed, "Base seed");
    s->add_option("--grid", sim.grid, "Trajectory sample times in [0,1]")->delimiter(',');
    s->add_option("--out", sim.out, "Summary CSV path, - for stdout");
    s->add_option("--trajectory-out", sim.trajectory_out, "Trajectory CSV path");
    s->add_flag("--serial", sim.serial, "Use the single-threaded runner");

    FluidArgs fl;
    auto* f = app.add_subcommand("fluid", "Solve the fluid-limit ODE");
    f->add_option("--model", fl.model, "Degree model");
    f->add_option("--criterion", fl.criterion, "greedy | uni-min | uni-max");
    f->add_option("--mesh", fl.mesh, "RK4 step in (0, 0.01]");
    f->add_option("--poisson", fl.poisson, "Scalar GREEDY route for Poisson(rho) degrees");
    f->add_option("--halt-eps", fl.halt_eps, "Freeze once positive-degree mass is below this");
    f->add_option("--tail-eps", fl.eps, "Tail mass left out when truncating unbounded models");
    f->add_option("--out", fl.out, "Summary CSV path, - for stdout");
    f->add_option("--solution-out", fl.solution_out, "Solution CSV path");
    f->add_option("--stride", fl.stride, "Write every k-th grid point of the solution");
    f->add_option("--shift", fl.shift, "size-biased | conditional");

    CompareArgs cmp;
    auto* c = app.add_subcommand("compare", "Simulation against the fluid prediction; exit 1 beyond --tol");
    c->add_option("--model", cmp.model, "Degree model")->required();
    c->add_option("--criterion", cmp.criterion, "greedy | uni-min | uni-max");
    c->add_option("--n", cmp.n, "Number of nodes");
    c->add_option("--replicates", cmp.replicates, "Independent runs");
    c->add_option("--seed", cmp.seed, "Base seed");
    c->add_option("--mesh", cmp.mesh, "RK4 step");
    c->add_option("--tol", cmp.tol, "Allowed |mean simulated - fluid| coverage gap");
    c->add_option("--tail-eps", cmp.eps, "Tail mass left out when truncating unbounded models");
    c->add_option("--shift", cmp.shift, "size-biased | conditional");
    c->add_option("--out", cmp.out, "CSV path, - for stdout");

    SweepArgs sw;
    auto* w = app.add_subcommand("sweep", "Fluid coverage over a parameter range");
    w->add_option("--family", sw.family, "regular (d) | uniform (1..n) | poisson (rho)")->required();
    w->add_option("--from", sw.from, "First parameter")->required();
    w->add_option("--to", sw.to, "Last parameter")->required();
    w->add_option("--step", sw.step, "Parameter step");
    w->add_option("--criteria", sw.criteria, "Comma-separated criteria")->delimiter(',');
    w->add_option("--mesh", sw.mesh, "RK4 step");
    w->add_option("--tail-eps", sw.eps, "Tail mass left out when truncating unbounded models");
    w->add_option("--shift", sw.shift, "size-biased | conditional");
    w->add_option("--out", sw.out, "CSV path, - for stdout");

    OracleArgs orc;
    auto* o = app.add_subcommand("oracle", "Exact coverage law of the offline matcher on a small graph");
    o->add_option("--graph", orc.graph, "Edge list file")->required();
    o->add_option("--criterion", orc.criterion, "Criterion");
    o->add_option("--out", orc.out, "CSV path, - for stdout");

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = expand_config(std::move(args));
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    } catch (const IoFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }

    try {
        if (*s) return cmd_simulate(sim);
        if (*f) return cmd_fluid(fl);
        if (*c) return cmd_compare(cmp);
        if (*w) return cmd_sweep(sw);
        if (*o) return cmd_oracle(orc);
    } catch (const IoFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const cmm::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code() == cmm::Errc::Io ? kExitIo : kExitConfig;
    }
    return kExitConfig;
}
