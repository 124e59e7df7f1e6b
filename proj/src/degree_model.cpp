#include "cmm/degree_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "cmm/error.hpp"

namespace cmm {

namespace {

constexpr double kPmfSumTol = 1e-9;
constexpr double kPoissonMaxRho = 500.0;

std::string fmt_double(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

std::vector<double> poisson_table(double rho) {
    // Plain recursion keeps the table reproducible bit for bit.
    std::vector<double> p{std::exp(-rho)};
    for (Degree k = 1; k <= kPoissonCap; ++k) {
        double next = p.back() * rho / static_cast<double>(k);
        if (static_cast<double>(k) > rho && next < 1e-300) break;
        p.push_back(next);
    }
    return p;
}

std::vector<double> cumulative(const std::vector<double>& p) {
    std::vector<double> c(p.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) c[i] = (acc += p[i]);
    return c;
}

template <class T>
T parse_number(const std::string& key, const std::string& s) {
    T v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw Error(Errc::InvalidModel, "bad value for " + key + ": '" + s + "'");
    return v;
}

}  // namespace

DegreeModel::DegreeModel(Variant v, std::string name) : v_(std::move(v)), name_(std::move(name)) {
    if (auto* p = std::get_if<Poisson>(&v_)) {
        cdf_ = cumulative(poisson_table(p->rho));
    } else if (auto* e = std::get_if<Explicit>(&v_)) {
        cdf_ = cumulative(e->pmf);
    }
}

DegreeModel DegreeModel::regular(Degree d) {
    if (d == 0) throw Error(Errc::NoPositiveMass, "regular:d=0 has no positive degrees");
    return DegreeModel(Regular{d}, "regular:d=" + std::to_string(d));
}

DegreeModel DegreeModel::uniform(Degree a, Degree b) {
    if (a > b) throw Error(Errc::InvalidModel, "uniform needs a <= b");
    if (b == 0) throw Error(Errc::NoPositiveMass, "uniform:a=0,b=0 has no positive degrees");
    return DegreeModel(UniformRange{a, b}, "uniform:a=" + std::to_string(a) + ",b=" + std::to_string(b));
}

DegreeModel DegreeModel::poisson(double rho) {
    if (!(rho > 0.0) || !std::isfinite(rho)) throw Error(Errc::InvalidModel, "poisson needs rho > 0");
    if (rho > kPoissonMaxRho) throw Error(Errc::InvalidModel, "poisson rho above " + fmt_double(kPoissonMaxRho));
    return DegreeModel(Poisson{rho}, "poisson:rho=" + fmt_double(rho));
}

DegreeModel DegreeModel::explicit_pmf(std::vector<double> pmf) {
    double sum = 0.0;
    for (double p : pmf) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw Error(Errc::InvalidModel, "pmf entries must be >= 0");
        sum += p;
    }
    if (std::abs(sum - 1.0) > kPmfSumTol) throw Error(Errc::InvalidModel, "pmf sums to " + fmt_double(sum));
    while (!pmf.empty() && pmf.back() == 0.0) pmf.pop_back();
    if (pmf.size() <= 1) throw Error(Errc::NoPositiveMass, "pmf concentrated on degree 0");
    return DegreeModel(Explicit{std::move(pmf)}, "explicit");
}

DegreeModel DegreeModel::parse(const std::string& spec) {
    auto colon = spec.find(':');
    std::string kind = spec.substr(0, colon);
    std::map<std::string, std::string> kv;
    if (colon != std::string::npos) {
        std::stringstream ss(spec.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            auto eq = item.find('=');
            if (eq == std::string::npos) throw Error(Errc::InvalidModel, "expected key=value in '" + item + "'");
            kv[item.substr(0, eq)] = item.substr(eq + 1);
        }
    }
    auto take = [&](const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) throw Error(Errc::InvalidModel, kind + " needs " + key + "=");
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto done = [&](DegreeModel m) {
        if (!kv.empty()) throw Error(Errc::InvalidModel, "unknown parameter '" + kv.begin()->first + "'");
        return m;
    };

    if (kind == "regular") return done(regular(parse_number<Degree>("d", take("d"))));
    if (kind == "uniform") {
        auto a = parse_number<Degree>("a", take("a"));
        auto b = parse_number<Degree>("b", take("b"));
        return done(uniform(a, b));
    }
    if (kind == "poisson") return done(poisson(parse_number<double>("rho", take("rho"))));
    if (kind == "explicit") {
        std::string file = take("file");
        auto m = done(explicit_pmf(read_pmf_csv(file)));
        m.name_ = "explicit:file=" + file;
        return m;
    }
    throw Error(Errc::InvalidModel, "unknown model '" + kind + "'");
}

double DegreeModel::pmf(Degree k) const {
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Regular>) {
                return k == m.d ? 1.0 : 0.0;
            } else if constexpr (std::is_same_v<T, UniformRange>) {
                return (k >= m.a && k <= m.b) ? 1.0 / static_cast<double>(m.b - m.a + 1) : 0.0;
            } else if constexpr (std::is_same_v<T, Poisson>) {
                return std::exp(-m.rho + static_cast<double>(k) * std::log(m.rho) - std::lgamma(k + 1.0));
            } else {
                return k < m.pmf.size() ? m.pmf[k] : 0.0;
            }
        },
        v_);
}

std::optional<Degree> DegreeModel::support_max() const {
    return std::visit(
        [](const auto& m) -> std::optional<Degree> {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Regular>) return m.d;
            else if constexpr (std::is_same_v<T, UniformRange>) return m.b;
            else if constexpr (std::is_same_v<T, Poisson>) return std::nullopt;
            else return static_cast<Degree>(m.pmf.size() - 1);
        },
        v_);
}

Degree DegreeModel::sample(Rng& rng) const {
    if (auto* r = std::get_if<Regular>(&v_)) return r->d;
    if (auto* u = std::get_if<UniformRange>(&v_)) return u->a + static_cast<Degree>(rng.uniform_index(u->b - u->a + 1));
    double x = rng.uniform01();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), x);
    if (it == cdf_.end()) --it;
    return static_cast<Degree>(it - cdf_.begin());
}

std::uint64_t DegreeVector::sum() const {
    std::uint64_t s = 0;
    for (Degree d : degrees) s += d;
    return s;
}

DegreeVector sample_degree_vector(const DegreeModel& model, std::size_t n, Rng& rng) {
    if (n == 0) throw Error(Errc::InvalidArgument, "n must be positive");
    DegreeVector dv;
    dv.degrees.reserve(n);
    for (std::size_t i = 0; i < n; ++i) dv.degrees.push_back(model.sample(rng));
    if (dv.sum() % 2 == 1) {
        auto it = std::find_if(dv.degrees.rbegin(), dv.degrees.rend(), [](Degree d) { return d > 0; });
        --*it;  // an odd sum has a positive entry
        dv.evenized = true;
    }
    return dv;
}

RealMeasure pmf_truncated(const DegreeModel& model, Degree N, double eps) {
    if (!(eps > 0.0)) throw Error(Errc::InvalidArgument, "eps must be positive");
    if (auto smax = model.support_max()) {
        if (*smax > N)
            throw Error(Errc::SupportExceeded,
                        "support reaches " + std::to_string(*smax) + " above bound " + std::to_string(N));
        std::vector<double> w(static_cast<std::size_t>(N) + 1, 0.0);
        for (Degree k = 0; k <= *smax; ++k) w[k] = model.pmf(k);
        return RealMeasure(std::move(w));
    }
    const auto& pois = std::get<Poisson>(model.variant());
    std::vector<double> p = poisson_table(pois.rho);
    std::vector<double> tail(p.size() + 1, 0.0);  // tail[k] = P(X >= k)
    for (std::size_t k = p.size(); k-- > 0;) tail[k] = tail[k + 1] + p[k];
    Degree M = N;
    while (M + 1 < tail.size() && tail[M + 1] >= eps) ++M;
    if (M > kPoissonCap) throw Error(Errc::TailTooHeavy, "no bound up to 10^4 reaches tail < eps");
    std::vector<double> w(static_cast<std::size_t>(M) + 1, 0.0);
    for (Degree k = 0; k <= M && k < p.size(); ++k) w[k] = p[k];
    if (M + 1 < tail.size()) w[M] += tail[M + 1];
    return RealMeasure(std::move(w));
}

std::vector<double> read_pmf_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot open pmf file '" + path + "'");
    std::map<Degree, double> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) throw Error(Errc::InvalidModel, "pmf row without comma: '" + line + "'");
        std::string a = line.substr(0, comma), b = line.substr(comma + 1);
        Degree k{};
        auto [ptr, ec] = std::from_chars(a.data(), a.data() + a.size(), k);
        if (ec != std::errc() || ptr != a.data() + a.size()) {
            if (first) {
                first = false;
                continue;  // header
            }
            throw Error(Errc::InvalidModel, "bad degree '" + a + "'");
        }
        first = false;
        rows[k] += parse_number<double>("prob", b);
    }
    if (rows.empty()) throw Error(Errc::InvalidModel, "empty pmf file '" + path + "'");
    std::vector<double> pmf(static_cast<std::size_t>(rows.rbegin()->first) + 1, 0.0);
    for (const auto& [k, p] : rows) pmf[k] = p;
    return pmf;
}

}  // namespace cmm
