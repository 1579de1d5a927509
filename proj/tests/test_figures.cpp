#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "sqzcool/errors.hpp"
#include "sqzcool/figures.hpp"

using namespace sqzcool;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("sqzcool_test_" + name);
    fs::remove_all(d);
    return d;
}

}  // namespace

TEST_SUITE("figures") {

TEST_CASE("git blob hashes") {
    CHECK(git_blob_sha1("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
    CHECK(git_blob_sha1("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST_CASE("figure 1 panels and manifest") {
    FigureOptions o;
    o.out_dir = scratch("fig1").string();
    const FigureReport r = reproduce_figure(1, o);
    CHECK_FALSE(r.partial);
    REQUIRE(r.panels.size() == 4);
    for (const auto& p : r.panels) {
        const std::string body = slurp(fs::path(o.out_dir) / p.file);
        CHECK(git_blob_sha1(body) == p.git_blob_sha1);
        CHECK(body.rfind("curve,", 0) == 0);
    }

    // The Stokes dip: the squeezed force spectrum vanishes at omega = -omega_m.
    std::istringstream a(slurp(fs::path(o.out_dir) / "fig1_a.csv"));
    std::string line;
    bool found = false;
    while (std::getline(a, line)) {
        if (line.rfind("internal,-1,", 0) == 0) {
            found = true;
            const double s = std::stod(line.substr(line.find(',', 12) - 0).substr(1));
            CHECK(s < 1e-12);
        }
    }
    CHECK(found);

    const auto m = nlohmann::json::parse(slurp(r.manifest_path));
    CHECK(m["figure"] == 1);
    CHECK(m["parameters"]["n_T"] == 1000.0);
    CHECK(m["parameters"]["phi"] == "opt");
    CHECK(m["partial"] == false);
    CHECK(m["content_hash"].get<std::string>().size() == 40);
}

TEST_CASE("figure 3 has one row set per temperature") {
    FigureOptions o;
    o.out_dir = scratch("fig3").string();
    o.resolution = 0.1;
    o.optimizer.starts = 3;
    const FigureReport r = reproduce_figure(3, o);
    CHECK(r.panels.size() == 8);
    CHECK(fs::exists(fs::path(o.out_dir) / "fig3_row1_phi.csv"));
    CHECK(fs::exists(fs::path(o.out_dir) / "fig3_row2_R.csv"));
    const auto m = nlohmann::json::parse(slurp(r.manifest_path));
    CHECK(m["rows"][0]["parameters"]["n_T"] == 0.1);
    CHECK(m["rows"][1]["parameters"]["n_T"] == 1e5);
}

TEST_CASE("overrides reach the figure parameters") {
    FigureOptions o;
    o.out_dir = scratch("fig1o").string();
    o.resolution = 0.1;
    o.overrides.set("n_T", 10.0);
    const FigureReport r = reproduce_figure(1, o);
    const auto m = nlohmann::json::parse(slurp(r.manifest_path));
    CHECK(m["parameters"]["n_T"] == 10.0);
}

TEST_CASE("unknown figure") {
    FigureOptions o;
    CHECK_THROWS_AS(reproduce_figure(7, o), ConfigError);
    CHECK_THROWS_AS(reproduce_figure(0, o), ConfigError);
}

}
