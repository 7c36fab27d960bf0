// One PASS/FAIL line per acceptance criterion. Tolerances are pinned here, not
// taken from the library defaults. Exit status is nonzero if any line fails.

#include "gqd/checks.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace gqd;

namespace {

const ModelParams local_params{1.0, 1.0, 0.5};
const ModelParams nonlocal_params{0.25, 1.0, 0.5};

ReducedAmplitude local_amp() { return ReducedAmplitude(local_params, BoundaryData::local(local_params, -1.0, 1.0)); }
ReducedAmplitude nonlocal_amp(double b2) {
    return ReducedAmplitude(nonlocal_params, BoundaryData::nonlocal(nonlocal_params, b2));
}

struct Outcome {
    bool pass = true;
    std::string detail;

    void add(const std::string& label, const checks::Report& r) {
        for (const auto& res : r.residuals) {
            if (!res.pass()) {
                pass = false;
                detail += " " + label + ":" + res.name + "=" + fmt(res.value) + "!";
            }
        }
        // headline residual for the log
        if (!r.residuals.empty()) {
            detail += " " + label + ":" + r.residuals.front().name + "=" + fmt(r.residuals.front().value);
        }
    }

    static std::string fmt(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", v);
        return buf;
    }
};

struct Criterion {
    const char* name;
    double time_limit;
    std::function<Outcome()> body;
};

Outcome unitarity() {
    Outcome o;
    checks::UnitarityOptions opt;
    opt.pairs = 200;
    opt.seed = 1;
    opt.tolerance = 1e-7;
    opt.hermiticity_tolerance = 1e-12;
    o.add("local", checks::unitarity(local_amp(), opt));
    o.add("b2=0", checks::unitarity(nonlocal_amp(0.0), opt));
    o.add("b2=0.1", checks::unitarity(nonlocal_amp(0.1), opt));
    return o;
}

Outcome riccati() {
    Outcome o;
    checks::RiccatiCheckOptions opt;
    opt.tolerance_local = 1e-6;
    opt.tolerance_nonlocal = 1e-4;
    o.add("local", checks::riccati(local_amp(), opt));
    o.add("b2=0.1", checks::riccati(nonlocal_amp(0.1), opt));
    return o;
}

Outcome a_independence() {
    Outcome o;
    checks::AIndependenceOptions opt;
    opt.a_values = {-1e2, -1e3, -1e4};
    opt.tolerance = 1e-4;
    o.add("b2=1e-3", checks::a_independence(nonlocal_params, 1e-3, opt));
    return o;
}

Outcome born() {
    Outcome o;
    checks::BornOptions opt;
    opt.equivalence_tolerance = 1e-10;
    opt.ratio_target = 8.0;
    opt.ratio_tolerance = 1.0;
    o.add("local", checks::born(local_amp(), opt));
    return o;
}

Outcome bridge() {
    Outcome o;
    checks::BridgeOptions opt;
    opt.tolerance = 1e-6;
    opt.rate_tolerance = 1e-3;
    o.add("b2=0.1", checks::bridge(TimeKernel(nonlocal_params, BoundaryData::nonlocal(nonlocal_params, 0.1)), opt));
    return o;
}

Outcome volterra() {
    Outcome o;
    checks::VolterraCheckOptions opt;
    opt.m = 400;
    opt.tau_max = 0.5;
    opt.tolerance = 1e-3;
    opt.min_order = 1.0;
    o.add("b2=0", checks::volterra(nonlocal_params, 0.0, opt));
    return o;
}

Outcome composition() {
    Outcome o;
    checks::CompositionOptions opt;
    opt.t2 = 2.0;
    opt.t1 = 1.0;
    opt.t0 = 0.0;
    opt.norm_tolerance = 1e-4;
    opt.tolerance = 5e-4;
    opt.packet.grid.t_max = 2.0;
    o.add("local", checks::composition(local_amp(), opt));
    o.add("b2=0", checks::composition(nonlocal_amp(0.0), opt));
    return o;
}

Outcome appendix_d() {
    Outcome o;
    checks::AppendixDCheckOptions opt;
    opt.nu = {10.0, 30.0, 100.0};
    opt.gamma0 = 0.1;
    opt.slope_target = -1.0;
    opt.slope_tolerance = 0.2;
    opt.variation_tolerance = 0.01;
    opt.magnitude_drift = 0.1;
    o.add("local", checks::appendix_d(local_amp(), opt));
    o.add("b2=0", checks::appendix_d(nonlocal_amp(0.0), opt));
    return o;
}

Outcome continuity() {
    Outcome o;
    checks::ContinuityCheckOptions opt;
    opt.t = {1.0, 0.1, 0.01};
    opt.packet.grid.t_max = 1.0;
    o.add("b2=0", checks::continuity(nonlocal_amp(0.0), opt));
    return o;
}

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"unitarity", 60.0, unitarity},
        {"riccati", 60.0, riccati},
        {"a-independence", 60.0, a_independence},
        {"born", 60.0, born},
        {"bridge", 60.0, bridge},
        {"volterra", 120.0, volterra},
        {"composition", 300.0, composition},
        {"appendix-d", 120.0, appendix_d},
        {"continuity", 120.0, continuity},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.body();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string(" exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.time_limit) {
            out.pass = false;
            out.detail += " over time limit";
        }
        failed += out.pass ? 0 : 1;
        std::printf("%s %zu %s (%.1fs)%s\n", out.pass ? "PASS" : "FAIL", i + 1, c.name, secs, out.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
