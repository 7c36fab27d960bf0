#include "gqd/cli.hpp"

#include <json.hpp>

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = gqd::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> csv_rows(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line) && !line.empty() && line[0] != '{') {
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            row.push_back(std::strtod(cell.c_str(), nullptr));
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace

TEST_CASE("amplitude") {
    const auto r = run({"amplitude", "--alpha", "0.25", "--c1", "1", "--mu", "0.5", "--b2", "0", "--z", "-1,0"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("re_z,im_z,re_t,im_t\n", 0) == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0][2] == doctest::Approx(-0.0358224480).epsilon(1e-9));

    const auto zero = run({"amplitude", "--alpha", "0.25", "--c1", "0"});
    REQUIRE(zero.code == 0);
    for (const auto& row : csv_rows(zero.out)) {
        CHECK(row[2] == 0.0);
        CHECK(row[3] == 0.0);
    }
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run({"amplitude", "--alpha", "0.25"}).code == 2);
    CHECK(run({"amplitude", "--alpha", "1", "--a", "-1"}).code == 2);
    CHECK(run({"amplitude", "--alpha", "1", "--b2", "0"}).code == 2);
    CHECK(run({"amplitude", "--alpha", "0.5", "--b2", "0"}).code == 2);
    CHECK(run({"check", "unitarity", "--alpha", "0.25", "--b2", "0.1+0.2i"}).code == 2);
    CHECK(run({"check", "nonsense", "--alpha", "0.25", "--b2", "0"}).code == 2);
    CHECK(run({"check", "born", "--alpha", "0.25", "--b2", "0"}).code == 2);
    CHECK(run({"check", "composition", "--alpha", "0.25", "--b2", "0", "--times", "1,2,0"}).code == 2);
    CHECK(run({"amplitude", "--alpha", "0.25", "--b2", "0", "--z", "-1"}).code == 2);
    CHECK(run({"amplitude", "--alpha", "0.25", "--b2", "0", "--y", "-1"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({}).code == 2);
    const auto r = run({"check", "unitarity", "--alpha", "0.25", "--b2", "0.1+0.2i"});
    CHECK(r.err.find("real") != std::string::npos);
}

TEST_CASE("check reports") {
    const auto r = run({"check", "unitarity", "--alpha", "0.25", "--b2", "0.1"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["version"] == gqd::cli::version());
    CHECK(j["command"] == "check");
    CHECK(j["check"] == "unitarity");
    CHECK(j["pass"] == true);
    CHECK(j["config"]["alpha"] == 0.25);
    CHECK(j["config"]["b2"] == 0.1);
    CHECK(j["residuals"][0]["value"].get<double>() <= 1e-7);
    CHECK_FALSE(j.contains("runtime_s"));

    // two-term g_a at b2 = 0.1 converges too slowly in a: a genuine failure
    const auto f = run({"check", "a-independence", "--alpha", "0.25", "--b2", "0.1"});
    CHECK(f.code == 1);
    CHECK(nlohmann::json::parse(f.out)["pass"] == false);

    for (const char* which : {"riccati", "born"}) {
        CHECK(run({"check", which, "--alpha", "1", "--a", "-1", "--ga", "1"}).code == 0);
    }
    for (const char* which : {"riccati", "bridge", "a-independence"}) {
        CHECK(run({"check", which, "--alpha", "0.25", "--b2", "0.001"}).code == 0);
    }
}

TEST_CASE("output is deterministic") {
    const std::vector<std::string> args{"check", "riccati", "--alpha", "0.25", "--b2", "0.1", "--csv", "-"};
    const auto a = run(args);
    const auto b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("config file with flag overrides") {
    const std::string path = "gqd_test_cli.cfg";
    {
        std::ofstream f(path);
        f << "alpha = 1\na = -1\nga = 1\nz = -2,0.5\n";
    }
    const auto from_file = run({"amplitude", "--config", path});
    REQUIRE(from_file.code == 0);
    const auto rows = csv_rows(from_file.out);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0][0] == -2.0);

    const auto over = run({"amplitude", "--config", path, "--ga", "0", "--json", "-"});
    REQUIRE(over.code == 0);
    CHECK(csv_rows(over.out)[0][2] == 0.0);
    CHECK(over.out.find("\"ga\": 0.0") != std::string::npos);
    std::remove(path.c_str());
    CHECK(run({"amplitude", "--config", "does-not-exist.cfg"}).code == 2);
}

TEST_CASE("evolve") {
    const auto r = run({"evolve", "--alpha", "0.25", "--b2", "0", "--t", "0", "--json", "gqd_test_evolve.json"});
    REQUIRE(r.code == 0);
    std::ifstream jf("gqd_test_evolve.json");
    const auto j = nlohmann::json::parse(jf);
    CHECK(j["norms"][0]["norm"].get<double>() == doctest::Approx(1.0).epsilon(1e-10));
    // t = 0 reproduces the packet
    const auto rows = csv_rows(r.out);
    REQUIRE(!rows.empty());
    double peak = 0.0;
    for (const auto& row : rows) {
        CHECK(row[3] == 0.0);
        peak = std::max(peak, row[2]);
    }
    CHECK(peak > 0.0);
    std::remove("gqd_test_evolve.json");

    // Schroedinger picture of the free theory: only phases change
    const auto s = run({"evolve", "--alpha", "0.25", "--c1", "0", "--picture", "schroedinger", "--t", "0,1"});
    REQUIRE(s.code == 0);
    const auto srows = csv_rows(s.out);
    const std::size_t half = srows.size() / 2;
    for (std::size_t i = 0; i < half; ++i) {
        CHECK(srows[i + half][4] == doctest::Approx(srows[i][4]).epsilon(1e-12));
    }
    CHECK(srows[half + 200][3] != 0.0);
}

TEST_CASE("series, volterra and probe") {
    const auto s = run({"series", "--alpha", "0.25", "--b2", "0", "--tau", "0.5", "--terms", "3"});
    REQUIRE(s.code == 0);
    const auto row = csv_rows(s.out).at(0);
    CHECK(row[3] == doctest::Approx(row[1]));
    CHECK(run({"series", "--alpha", "1", "--a", "-1", "--ga", "1"}).code == 2);

    const auto v = run({"volterra", "--alpha", "0.25", "--b2", "0", "--m", "100"});
    REQUIRE(v.code == 0);
    CHECK(csv_rows(v.out).size() == 100);

    const auto p = run({"probe-appendix-d", "--alpha", "0.25", "--b2", "0", "--nu", "10", "--t", "0"});
    REQUIRE(p.code == 0);
    const auto j = nlohmann::json::parse(p.out);
    CHECK(j["summary"][0]["max_abs"] == 0.0);
}
