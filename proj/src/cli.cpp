#include "gqd/cli.hpp"

#include "gqd/checks.hpp"
#include "gqd/errors.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#ifndef GQD_VERSION
#define GQD_VERSION "0.0.0"
#endif

namespace gqd::cli {

using nlohmann::ordered_json;

std::string version() { return GQD_VERSION; }

namespace {

/// Bad command line or configuration: exit 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// JSON number, with null for values JSON cannot hold.
ordered_json num(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json cnum(cplx v) { return ordered_json::array({num(v.real()), num(v.imag())}); }

double parse_real(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw UsageError(key + ": not a number: '" + text + "'");
    }
    if (used != text.size()) {
        if (text.find('i') != std::string::npos || text.find('j') != std::string::npos) {
            throw UsageError(key + " must be real, got '" + text + "'");
        }
        throw UsageError(key + ": not a number: '" + text + "'");
    }
    return v;
}

std::vector<cplx> pair_up(const std::string& key, const std::vector<double>& v) {
    if (v.size() % 2 != 0) {
        throw UsageError(key + ": expected re,im pairs");
    }
    std::vector<cplx> out;
    for (std::size_t i = 0; i < v.size(); i += 2) {
        out.emplace_back(v[i], v[i + 1]);
    }
    return out;
}

std::vector<double> or_default(const std::vector<double>& v, std::vector<double> fallback) {
    return v.empty() ? fallback : v;
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

void write_csv(std::ostream& os, const Table& t) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        os << (i ? "," : "") << t.columns[i];
    }
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? "," : "") << fmt(row[i]);
        }
        os << '\n';
    }
}

/// Everything a run can be configured with; option names double as config-file keys.
struct RunConfig {
    // model
    double alpha = 0.25;
    double c1 = 1.0;
    double mu = 0.5;
    std::string b2;
    std::optional<double> a;
    std::optional<double> ga;
    std::string loops = "closed";

    // contour
    std::optional<double> y;
    double x_max = 0.0;
    double panel_fraction = 1.0;
    double energy_span = 1.0;
    double contour_abs_tol = 1e-10;
    double contour_rel_tol = 1e-9;

    // packet
    double k0 = 1.0;
    double sigma = 0.2;
    double k_max = 30.0;
    int grid_order = 12;

    // command options
    std::vector<double> z;
    std::vector<double> zgrid{-10.0, -0.5, 20.0, 0.0};
    std::vector<double> times{2.0, 1.0, 0.0};
    std::vector<double> t_list;
    double t0 = 0.0;
    std::string picture = "interaction";
    std::vector<double> tau{0.05, 0.1, 0.2, 0.5, 1.0};
    int terms = 20;
    int bridge_terms = 0;
    double tau_max = 0.5;
    int m = 400;
    int seed_terms = 40;
    std::vector<double> nu{10.0, 30.0, 100.0};
    double gamma0 = 0.1;
    int pairs = 200;
    std::uint64_t seed = 1;

    // output
    std::string csv;
    std::string json;
    bool timing = false;
};

struct Resolved {
    ModelParams params;
    std::optional<ReducedAmplitude> amp;
    ContourSpec contour;
};

ModelParams model_params(const RunConfig& c) {
    ModelParams p{c.alpha, c.c1, c.mu};
    try {
        p.validate();
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    return p;
}

LoopMethod loop_method(const RunConfig& c) {
    if (c.loops == "closed") {
        return LoopMethod::ClosedForm;
    }
    if (c.loops == "quadrature") {
        return LoopMethod::Quadrature;
    }
    throw UsageError("loops must be 'closed' or 'quadrature'");
}

/// Boundary data for the regime. The free theory needs none.
BoundaryData boundary(const RunConfig& c, const ModelParams& p) {
    const bool local = p.regime() == Regime::Local;
    try {
        if (local) {
            if (!c.b2.empty()) {
                throw UsageError("b2 is nonlocal boundary data; alpha > 1/2 takes --a and --ga");
            }
            if (!c.a || !c.ga) {
                if (p.is_free()) {
                    return BoundaryData::local(p, c.a.value_or(-1.0), c.ga.value_or(0.0));
                }
                throw UsageError("local regime (alpha > 1/2) needs boundary data --a and --ga");
            }
            return BoundaryData::local(p, *c.a, *c.ga);
        }
        if (c.a || c.ga) {
            throw UsageError("a and ga are local boundary data; alpha < 1/2 takes --b2");
        }
        if (c.b2.empty()) {
            if (p.is_free()) {
                return BoundaryData::nonlocal(p, 0.0);
            }
            throw UsageError("nonlocal regime (alpha < 1/2) needs boundary data --b2");
        }
        return BoundaryData::nonlocal(p, parse_real("b2", c.b2));
    } catch (const ParameterError& e) {
        throw UsageError(e.what());
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
}

Resolved resolve(const RunConfig& c, bool need_amp = true) {
    Resolved r;
    r.params = model_params(c);
    if (need_amp) {
        r.amp.emplace(r.params, boundary(c, r.params), loop_method(c));
    }
    r.contour.y = c.y;
    r.contour.x_max = c.x_max;
    r.contour.panel_fraction = c.panel_fraction;
    r.contour.energy_span = c.energy_span;
    r.contour.abs_tol = c.contour_abs_tol;
    r.contour.rel_tol = c.contour_rel_tol;
    try {
        r.contour.validate();
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    return r;
}

checks::PacketSpec packet_spec(const RunConfig& c, const ModelParams& p, double t_max) {
    checks::PacketSpec s;
    s.k0 = c.k0;
    s.sigma = c.sigma;
    s.grid.k_max = c.k_max;
    s.grid.order = c.grid_order;
    s.grid.mu = p.mu;
    s.grid.t_max = std::max(t_max, 0.1);
    if (!(c.k0 > 0.0) || !(c.sigma > 0.0)) {
        throw UsageError("k0 and sigma must be > 0");
    }
    return s;
}

ordered_json config_json(const RunConfig& c, const Resolved* r) {
    ordered_json j;
    j["alpha"] = c.alpha;
    j["c1"] = c.c1;
    j["mu"] = c.mu;
    j["b2"] = c.b2.empty() ? ordered_json(nullptr) : ordered_json(parse_real("b2", c.b2));
    j["a"] = c.a ? ordered_json(*c.a) : ordered_json(nullptr);
    j["ga"] = c.ga ? ordered_json(*c.ga) : ordered_json(nullptr);
    j["loops"] = c.loops;
    j["y"] = c.y ? ordered_json(*c.y) : ordered_json(nullptr);
    j["x-max"] = c.x_max;
    j["panel-fraction"] = c.panel_fraction;
    j["energy-span"] = c.energy_span;
    j["contour-abs-tol"] = c.contour_abs_tol;
    j["contour-rel-tol"] = c.contour_rel_tol;
    j["k0"] = c.k0;
    j["sigma"] = c.sigma;
    j["k-max"] = c.k_max;
    j["grid-order"] = c.grid_order;
    j["z"] = c.z;
    j["zgrid"] = c.zgrid;
    j["times"] = c.times;
    j["t-list"] = c.t_list;
    j["t0"] = c.t0;
    j["picture"] = c.picture;
    j["tau"] = c.tau;
    j["terms"] = c.terms;
    j["bridge-terms"] = c.bridge_terms;
    j["tau-max"] = c.tau_max;
    j["m"] = c.m;
    j["seed-terms"] = c.seed_terms;
    j["nu"] = c.nu;
    j["gamma0"] = c.gamma0;
    j["pairs"] = c.pairs;
    j["seed"] = c.seed;
    if (r && r->amp) {
        ordered_json d;
        d["regime"] = r->params.regime() == Regime::Local ? "local" : "nonlocal";
        d["b1"] = r->amp->b1();
        if (r->params.regime() == Regime::Local) {
            d["lambda"] = r->amp->lambda();
        } else {
            d["b2"] = r->amp->b2().real();
        }
        j["derived"] = d;
    }
    return j;
}

class Outputs {
public:
    Outputs(const RunConfig& c, std::ostream& out, bool report_primary)
        : out_(out), csv_(c.csv), json_(c.json) {
        if (csv_.empty() && !report_primary) {
            csv_ = "-";
        }
        if (json_.empty() && report_primary) {
            json_ = "-";
        }
    }

    void emit(const Table& table, const ordered_json& report) {
        if (!csv_.empty()) {
            write_to(csv_, [&](std::ostream& os) { write_csv(os, table); });
        }
        if (!json_.empty()) {
            write_to(json_, [&](std::ostream& os) { os << report.dump(2) << '\n'; });
        }
    }

private:
    template <class F>
    void write_to(const std::string& path, F&& f) {
        if (path == "-") {
            f(out_);
            return;
        }
        std::ofstream file(path);
        if (!file) {
            throw UsageError("cannot open output file '" + path + "'");
        }
        f(file);
    }

    std::ostream& out_;
    std::string csv_;
    std::string json_;
};

ordered_json report_head(const std::string& command, const RunConfig& c, const Resolved* r) {
    ordered_json j;
    j["version"] = version();
    j["command"] = command;
    j["config"] = config_json(c, r);
    return j;
}

std::vector<cplx> z_points(const RunConfig& c) {
    std::vector<cplx> out;
    if (!c.z.empty()) {
        return pair_up("z", c.z);
    }
    const auto& g = c.zgrid;
    if (g.size() != 4 || g[2] < 1 || g[2] != std::floor(g[2])) {
        throw UsageError("zgrid: expected xmin,xmax,n,y");
    }
    const int n = static_cast<int>(g[2]);
    for (int i = 0; i < n; ++i) {
        const double x = n == 1 ? g[0] : g[0] + (g[1] - g[0]) * i / (n - 1);
        out.emplace_back(x, g[3]);
    }
    return out;
}

int cmd_amplitude(const RunConfig& c, std::ostream& out) {
    const Resolved r = resolve(c);
    const auto& amp = *r.amp;
    Table table{{"re_z", "im_z", "re_t", "im_t"}, {}};
    for (cplx z : z_points(c)) {
        const cplx t = amp(z);
        table.rows.push_back({z.real(), z.imag(), t.real(), t.imag()});
    }
    ordered_json rep = report_head("amplitude", c, &r);
    ordered_json s;
    s["b1"] = amp.b1();
    if (amp.regime() == Regime::Local) {
        s["lambda"] = amp.lambda();
    } else {
        const auto ac = asymptotic_coefficients(r.params, amp.b2().real());
        s["b2"] = amp.b2().real();
        s["a1"] = cnum(ac.a1);
        s["a2"] = cnum(ac.a2);
    }
    s["poles"] = amp.poles();
    rep["summary"] = s;
    Outputs(c, out, false).emit(table, rep);
    return exit_pass;
}

checks::Report run_check(const std::string& which, const RunConfig& c, const Resolved& r) {
    const auto& amp = *r.amp;
    const bool local = r.params.regime() == Regime::Local;
    auto require = [&](bool ok, const char* what) {
        if (!ok) {
            throw UsageError(which + " needs the " + what + " regime");
        }
    };
    if (which == "unitarity") {
        checks::UnitarityOptions o;
        o.pairs = c.pairs;
        o.seed = c.seed;
        return checks::unitarity(amp, o);
    }
    if (which == "riccati") {
        checks::RiccatiCheckOptions o;
        o.targets = pair_up("z", c.z);
        return checks::riccati(amp, o);
    }
    if (which == "a-independence") {
        require(!local, "nonlocal");
        return checks::a_independence(r.params, amp.b2().real());
    }
    if (which == "born") {
        require(local, "local");
        return checks::born(amp);
    }
    if (which == "bridge") {
        require(!local, "nonlocal");
        checks::BridgeOptions o;
        o.n_terms = c.bridge_terms;
        return checks::bridge(TimeKernel(r.params, amp.boundary()), o);
    }
    if (which == "volterra") {
        require(!local, "nonlocal");
        checks::VolterraCheckOptions o;
        o.tau_max = c.tau_max;
        o.m = c.m;
        o.march.seed_terms = c.seed_terms;
        return checks::volterra(r.params, amp.b2().real(), o);
    }
    if (which == "composition") {
        const auto& t = c.times;
        if (t.size() != 3) {
            throw UsageError("times: expected t2,t1,t0");
        }
        if (!(t[0] >= t[1] && t[1] >= t[2])) {
            throw UsageError("times: need t2 >= t1 >= t0");
        }
        checks::CompositionOptions o;
        o.t2 = t[0];
        o.t1 = t[1];
        o.t0 = t[2];
        o.packet = packet_spec(c, r.params, t[0] - t[2]);
        o.contour = r.contour;
        return checks::composition(amp, o);
    }
    if (which == "appendix-d") {
        checks::AppendixDCheckOptions o;
        o.nu = c.nu;
        o.gamma0 = c.gamma0;
        o.t = or_default(c.t_list, {0.5, 1.0, 2.0});
        return checks::appendix_d(amp, o);
    }
    if (which == "continuity") {
        checks::ContinuityCheckOptions o;
        o.t = or_default(c.t_list, {1.0, 0.1, 0.01});
        o.packet = packet_spec(c, r.params, *std::max_element(o.t.begin(), o.t.end()));
        o.contour = r.contour;
        return checks::continuity(amp, o);
    }
    throw UsageError("unknown check '" + which + "'");
}

int cmd_check(const std::string& which, const RunConfig& c, std::ostream& out) {
    const Resolved r = resolve(c);
    const auto start = std::chrono::steady_clock::now();
    const checks::Report report = run_check(which, c, r);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    ordered_json rep = report_head("check", c, &r);
    rep["check"] = which;
    ordered_json res = ordered_json::array();
    for (const auto& x : report.residuals) {
        res.push_back({{"name", x.name},
                       {"value", num(x.value)},
                       {"lower", num(x.lower)},
                       {"upper", num(x.upper)},
                       {"pass", x.pass()}});
    }
    rep["residuals"] = res;
    rep["pass"] = report.pass();
    if (c.timing) {
        rep["runtime_s"] = seconds;
    }
    Outputs(c, out, true).emit({report.columns, report.rows}, rep);
    return report.pass() ? exit_pass : exit_failure;
}

int cmd_evolve(const RunConfig& c, std::ostream& out) {
    const Resolved r = resolve(c);
    Picture picture = Picture::Interaction;
    if (c.picture == "schroedinger") {
        picture = Picture::Schroedinger;
    } else if (c.picture != "interaction") {
        throw UsageError("picture must be 'interaction' or 'schroedinger'");
    }
    const auto times = or_default(c.t_list, {0.0, 0.5, 1.0});
    double span = 0.0;
    for (double t : times) {
        span = std::max(span, std::abs(t - c.t0));
    }
    const auto spec = packet_spec(c, r.params, span);
    const RadialState psi = make_gaussian_packet(spec.k0, spec.sigma, spec.grid);
    const bool schroedinger = picture == Picture::Schroedinger;
    auto free_phase = [&](const RadialState& st, double t) {
        return st.multiplied([&](double k) { return std::polar(1.0, -r.params.energy(k) * t); });
    };
    // U = e^{-i H0 t} U_I e^{i H0 t0}
    const RadialState in = schroedinger ? free_phase(psi, -c.t0) : psi;

    Table table{{"t", "k", "re_psi", "im_psi", "abs2"}, {}};
    ordered_json norms = ordered_json::array();
    const auto nodes = psi.grid().nodes();
    for (double t : times) {
        const EvolvedState e = evolve(EvolvedState(in), t, c.t0, *r.amp, r.contour);
        RadialState s = e.sample(r.params);
        if (schroedinger) {
            s = free_phase(s, t);
        }
        const auto v = s.values();
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            table.rows.push_back({t, nodes[i], v[i].real(), v[i].imag(), std::norm(v[i])});
        }
        norms.push_back({{"t", t}, {"norm", e.norm(r.params)}, {"grid_norm", s.norm()}});
    }
    ordered_json rep = report_head("evolve", c, &r);
    rep["norms"] = norms;
    Outputs(c, out, false).emit(table, rep);
    return exit_pass;
}

int cmd_series(const RunConfig& c, std::ostream& out) {
    const Resolved r = resolve(c);
    if (r.params.regime() != Regime::NonlocalInTime) {
        throw UsageError("series needs the nonlocal regime");
    }
    const TimeKernel kernel(r.params, r.amp->boundary());
    if (c.terms < 1 || c.terms > kernel.n_max()) {
        throw UsageError("terms out of range");
    }
    Table table{{"tau", "re_f", "im_f", "re_series", "im_series", "last_term"}, {}};
    bool warned = false;
    for (double tau : c.tau) {
        if (!(tau > 0.0)) {
            throw UsageError("tau must be > 0");
        }
        const cplx f = f_tau(tau, kernel);
        const auto s = ttilde_series(tau, kernel, c.terms);
        warned = warned || s.warning;
        table.rows.push_back({tau, f.real(), f.imag(), s.value.real(), s.value.imag(), s.last_term});
    }
    ordered_json rep = report_head("series", c, &r);
    rep["a1"] = cnum(kernel.a1());
    rep["a2"] = cnum(kernel.a2());
    rep["truncation_warning"] = warned;
    Outputs(c, out, false).emit(table, rep);
    return exit_pass;
}

int cmd_volterra(const RunConfig& c, std::ostream& out) {
    const Resolved r = resolve(c);
    if (r.params.regime() != Regime::NonlocalInTime) {
        throw UsageError("volterra needs the nonlocal regime");
    }
    VolterraOptions o;
    o.seed_terms = c.seed_terms;
    TimeGrid grid;
    try {
        grid = TimeGrid::graded(r.params, c.tau_max, c.m);
    } catch (const ParameterError& e) {
        throw UsageError(e.what());
    }
    const auto res = volterra_march(r.params, r.amp->boundary(), grid, o);
    const TimeKernel kernel(r.params, r.amp->boundary());
    Table table{{"tau", "re_f", "im_f", "re_series", "im_series"}, {}};
    for (std::size_t j = 0; j < res.tau.size(); ++j) {
        const cplx s = ttilde_series(res.tau[j], kernel, std::min(c.terms, kernel.n_max())).value;
        table.rows.push_back({res.tau[j], res.f[j].real(), res.f[j].imag(), s.real(), s.imag()});
    }
    ordered_json rep = report_head("volterra", c, &r);
    rep["seed_nodes"] = res.seed_nodes;
    Outputs(c, out, false).emit(table, rep);
    return exit_pass;
}

int cmd_probe(const RunConfig& c, std::ostream& out) {
    const Resolved r = resolve(c);
    const auto probe = appendix_d_probe(c.nu, c.gamma0, or_default(c.t_list, {0.5, 1.0, 2.0}), *r.amp);
    Table table{{"nu", "t", "re_R", "im_R", "abs_R"}, {}};
    for (const auto& row : probe.rows) {
        table.rows.push_back({row.nu, row.t, row.value.real(), row.value.imag(), std::abs(row.value)});
    }
    ordered_json rep = report_head("probe-appendix-d", c, &r);
    ordered_json s = ordered_json::array();
    for (const auto& x : probe.summary) {
        s.push_back({{"nu", x.nu}, {"max_abs", x.max_abs}, {"variation", x.variation}});
    }
    rep["summary"] = s;
    rep["slope"] = num(probe.slope);
    Outputs(c, out, true).emit(table, rep);
    return exit_pass;
}

void add_options(CLI::App& app, RunConfig& c) {
    app.add_option("--alpha", c.alpha, "exponent of the form factor c1 k^-alpha")->capture_default_str();
    app.add_option("--c1", c.c1, "coupling scale")->capture_default_str();
    app.add_option("--mu", c.mu, "reduced mass")->capture_default_str();
    app.add_option("--b2", c.b2, "nonlocal boundary coefficient (real)");
    app.add_option("--a", c.a, "local reference energy (negative)");
    app.add_option("--ga", c.ga, "local reference value t(a)");
    app.add_option("--loops", c.loops, "loop integrals: closed|quadrature")->capture_default_str();

    app.add_option("--y", c.y, "contour height (default min(1, 1/max(|t-t0|, 0.1)))");
    app.add_option("--x-max", c.x_max, "contour truncation, 0 = none")->capture_default_str();
    app.add_option("--panel-fraction", c.panel_fraction, "fine panel width over y")->capture_default_str();
    app.add_option("--energy-span", c.energy_span, "fine region over the largest grid energy")
        ->capture_default_str();
    app.add_option("--contour-abs-tol", c.contour_abs_tol)->capture_default_str();
    app.add_option("--contour-rel-tol", c.contour_rel_tol)->capture_default_str();

    app.add_option("--k0", c.k0, "packet mean momentum")->capture_default_str();
    app.add_option("--sigma", c.sigma, "packet momentum width")->capture_default_str();
    app.add_option("--k-max", c.k_max, "packet grid end")->capture_default_str();
    app.add_option("--grid-order", c.grid_order, "Gauss-Legendre points per panel")->capture_default_str();

    app.add_option("--z", c.z, "evaluation point re,im (repeatable)")->delimiter(',');
    app.add_option("--zgrid", c.zgrid, "xmin,xmax,n,y when no --z is given")
        ->delimiter(',')
        ->expected(4)
        ->capture_default_str();
    app.add_option("--times", c.times, "t2,t1,t0 for the composition check")
        ->delimiter(',')
        ->expected(3)
        ->capture_default_str();
    app.add_option("--t,--t-list", c.t_list, "comma separated times")->delimiter(',');
    app.add_option("--t0", c.t0, "initial time for evolve")->capture_default_str();
    app.add_option("--picture", c.picture, "interaction|schroedinger")->capture_default_str();
    app.add_option("--tau", c.tau, "comma separated durations for series")->delimiter(',')->capture_default_str();
    app.add_option("--terms", c.terms, "series terms")->capture_default_str();
    app.add_option("--bridge-terms", c.bridge_terms, "bridge check terms, 0 = from the predicted rate")
        ->capture_default_str();
    app.add_option("--tau-max", c.tau_max)->capture_default_str();
    app.add_option("--m", c.m, "Volterra grid nodes")->capture_default_str();
    app.add_option("--seed-terms", c.seed_terms, "expansion terms on the pinned Volterra nodes")
        ->capture_default_str();
    app.add_option("--nu", c.nu, "comma separated nu for the Lorentzian probe states")->delimiter(',')->capture_default_str();
    app.add_option("--gamma0", c.gamma0)->capture_default_str();
    app.add_option("--pairs", c.pairs, "random pairs for the unitarity check")->capture_default_str();
    app.add_option("--seed", c.seed, "random seed")->capture_default_str();

    app.add_option("--csv", c.csv, "CSV output path, - for stdout");
    app.add_option("--json", c.json, "JSON output path, - for stdout");
    app.add_flag("--timing", c.timing, "add runtime to check reports (breaks byte-identical output)");
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Generalized quantum dynamics of a separable power-law interaction", "gqd"};
    app.set_version_flag("--version", version());
    app.set_config("--config", "", "flat key = value file; flags override it");
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig c;
    add_options(app, c);

    std::string which;
    auto* amplitude = app.add_subcommand("amplitude", "t(z) or N(z) over a set of points");
    auto* check = app.add_subcommand("check", "run an invariant suite, exit 0 iff it passes");
    check->add_option("which", which,
                      "unitarity|composition|a-independence|bridge|riccati|born|volterra|appendix-d|continuity")
        ->required();
    auto* evolve_cmd = app.add_subcommand("evolve", "evolve a Gaussian packet");
    auto* series = app.add_subcommand("series", "f(tau) and the Ttilde series");
    auto* volterra_cmd = app.add_subcommand("volterra", "march the scalar Volterra equation");
    auto* probe = app.add_subcommand("probe-appendix-d", "<psi_nu| R(t, 0) |psi_nu> table");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_pass;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_pass;
    } catch (const CLI::CallForVersion&) {
        out << version() << '\n';
        return exit_pass;
    } catch (const CLI::ParseError& e) {
        err << "gqd: " << e.what() << '\n';
        return exit_usage;
    }

    try {
        if (amplitude->parsed()) {
            return cmd_amplitude(c, out);
        }
        if (check->parsed()) {
            return cmd_check(which, c, out);
        }
        if (evolve_cmd->parsed()) {
            return cmd_evolve(c, out);
        }
        if (series->parsed()) {
            return cmd_series(c, out);
        }
        if (volterra_cmd->parsed()) {
            return cmd_volterra(c, out);
        }
        if (probe->parsed()) {
            return cmd_probe(c, out);
        }
    } catch (const UsageError& e) {
        err << "gqd: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "gqd: " << e.what() << '\n';
        return exit_failure;
    }
    return exit_usage;
}

} // namespace gqd::cli
