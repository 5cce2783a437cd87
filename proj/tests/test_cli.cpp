#include "catch_amalgamated.hpp"

#include <hermconv/serialize.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;
using hermconv::io::json;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

struct Result {
    int code;
    std::string out;
};

Result sh(const std::string& args) {
    const char* bin = std::getenv("HERMCONV_BIN");
    REQUIRE(bin != nullptr);
    const std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    while (std::size_t k = std::fread(buf, 1, sizeof buf, p)) out.append(buf, k);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const auto d = fs::temp_directory_path() / ("hermconv_cli_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

} // namespace

TEST_CASE("eval prints the function on a grid") {
    const auto r = sh("eval --corpus step --x -2,0,0.999,1");
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["values"] == json::array({0, 1, 1, 0}));
}

TEST_CASE("usage and config errors exit with 2") {
    CHECK(sh("").code == 2);
    CHECK(sh("nope").code == 2);
    CHECK(sh("eval --x 1").code == 2);
    CHECK(sh("eval --corpus nosuch --x 1").code == 2);
    CHECK(sh("eval --corpus step --x 1,abc").code == 2);
    CHECK(sh("orlicz scan --A power:0.5").code == 2);
    CHECK(sh("hermite truncated-sum --n 8 --corpus step --schedule-exp 0.5").code == 2);
    CHECK(sh("run /nonexistent.cfg").code == 2);
    const auto d = scratch("bad");
    std::ofstream(d / "bad.json") << R"({"nodes": [0, 1], "values": [1, 2, 3]})";
    CHECK(sh("eval --input " + (d / "bad.json").string() + " --x 0.5").code == 2);
}

TEST_CASE("check-pair exit status follows the verdict") {
    const auto good = sh("orlicz check-pair --A power:2 --B power:2");
    CHECK(good.code == 0);
    CHECK(json::parse(good.out)["verdict"] == "pass");
    const auto bad = sh("orlicz check-pair --A power:2 --B linear");
    CHECK(bad.code == 1);
    CHECK(json::parse(bad.out)["verdict"] == "fail");
}

TEST_CASE("orlicz norm matches L2") {
    const auto r = sh("orlicz norm --A power:2 --corpus step");
    REQUIRE(r.code == 0);
    CHECK_THAT(hermconv::io::to_double(json::parse(r.out)["luxemburg_norm"]), WithinRel(std::sqrt(2.0), 1e-9));
}

TEST_CASE("hermite subcommands") {
    const auto d = scratch("hermite");
    const auto e = sh("hermite expand --n 4 --corpus step --output " + (d / "e.json").string());
    REQUIRE(e.code == 0);
    const auto j = hermconv::io::read_json_file((d / "e.json").string());
    CHECK(j["n"] == 4);
    CHECK(j["T"].is_null());
    CHECK(j["coeffs"].size() == 5);
    CHECK(std::abs(j["coeffs"][1].get<double>()) < 1e-14);  // odd coefficients of an even function

    const auto v = json::parse(sh("hermite eval --n 0 --x 0").out);
    CHECK_THAT(v["points"][0]["values"][0].get<double>(), WithinRel(std::pow(M_PI, -0.25), 1e-14));

    REQUIRE(sh("hermite truncated-sum --n 64 --corpus bump --output " + (d / "s.json").string()).code == 0);
    CHECK(fs::exists(d / "s.tsv"));
    const auto s = hermconv::io::read_grid((d / "s.json").string());
    CHECK_THAT(s(0.0), WithinAbs(std::exp(-1.0), 0.02));
}

TEST_CASE("operator subcommands") {
    const auto d = scratch("op");
    std::ofstream(d / "g.json") << R"({"domain_kind": "half_line", "nodes": [0, 1], "values": [1]})";
    const auto in = " --input " + (d / "g.json").string();
    const auto s = json::parse(sh("op stieltjes" + in + " --t-grid 0.5,2").out);
    CHECK_THAT(s["values"][0].get<double>(), WithinRel(std::log(3.0), 1e-8));
    CHECK_THAT(s["values"][1].get<double>(), WithinRel(std::log(1.5), 1e-8));
    const auto w = sh("op sandwich" + in);
    CHECK(w.code == 0);
    CHECK(json::parse(w.out).contains("margins"));
}

TEST_CASE("sansone subcommands") {
    const auto r = sh("sansone remainder --n-list 64,128");
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out).size() == 2);
    const auto d = scratch("sansone");
    std::ofstream(d / "g.json") << R"({"domain_kind": "half_line", "nodes": [0, 1], "values": [1]})";
    const auto lb = sh("sansone lower-bound --g " + (d / "g.json").string() +
                       " --n 256 --comb-period sign_consistent --x-grid 0.1,0.5,0.9 --output " + (d / "lb.json").string());
    CHECK(lb.code == 0);
    CHECK(slurp(d / "lb.tsv").rfind("x\tSg\tcomb_sum\tratio\n", 0) == 0);
}

TEST_CASE("run writes reports that are reproducible byte for byte") {
    const auto d = scratch("run");
    std::ofstream(d / "t.cfg") << "experiment = truncated\ncorpus = bump, zero\nn_list = 16, 64\np_list = 2\n"
                                  "young_b = power:2\noutput_dir = " << (d / "a").string() << "\n";
    const auto a = sh("run " + (d / "t.cfg").string());
    REQUIRE(a.code == 0);
    for (const char* f : {"truncated_bump.json", "truncated_bump.tsv", "truncated_bump.timing.tsv", "truncated_zero.json"})
        CHECK(fs::exists(d / "a" / f));
    const auto j = hermconv::io::read_json_file((d / "a" / "truncated_bump.json").string());
    CHECK(j["config_hash"].get<std::string>().size() == 16);
    CHECK(j["report"]["columns"] == json::array({"n", "T", "L2", "modular"}));

    fs::rename(d / "a", d / "first");
    REQUIRE(sh("run " + (d / "t.cfg").string()).code == 0);
    CHECK(slurp(d / "first" / "truncated_bump.json") == slurp(d / "a" / "truncated_bump.json"));
    CHECK(slurp(d / "first" / "truncated_bump.tsv") == slurp(d / "a" / "truncated_bump.tsv"));
    REQUIRE(sh("run " + (d / "t.cfg").string() + " --output-dir " + (d / "b").string()).code == 0);
    CHECK(fs::exists(d / "b" / "truncated_bump.json"));

    std::ofstream(d / "bad.cfg") << "experiment = truncated\nn_lst = 4\n";
    CHECK(sh("run " + (d / "bad.cfg").string()).code == 2);
}

TEST_CASE("run exits 1 when a check fails") {
    // Two points too close for the trend factor on the step: error(n_max) > error(n_min) / 2.
    const auto d = scratch("fail");
    std::ofstream(d / "t.cfg") << "experiment = truncated\ncorpus = step\nn_list = 64, 80\np_list = 6\noutput_dir = "
                               << (d / "o").string() << "\n";
    const auto r = sh("run " + (d / "t.cfg").string());
    CHECK(r.code == 1);
    CHECK(r.out.find("fail") != std::string::npos);
}
