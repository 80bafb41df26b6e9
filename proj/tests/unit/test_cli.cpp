#include <catch_amalgamated.hpp>

#include "linform/cli.hpp"
#include "linform/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

using namespace linform;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code = -1;
    std::string out;
    std::string err;
};

Result cli(std::vector<std::string> args) {
    args.insert(args.begin(), "linform");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Result r;
    r.code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

fs::path scratch() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("linform_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
    const auto path = scratch() / name;
    std::ofstream(path) << text;
    return path.string();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const std::string kSym = R"({"components": [
  {"rate": "1", "speed": "1", "start": "0", "coef": "1"},
  {"rate": "1", "speed": "1", "start": "0", "coef": "1"}]})";

const std::string kGeneric = R"({"components": [
  {"rate": "1", "speed": "3", "start": "0", "coef": "1"},
  {"rate": "2", "speed": "5", "start": "1/2", "coef": "1"}]})";

}  // namespace

TEST_CASE("derive-pde reports the squared factor for the symmetric sum") {
    const auto r = cli({"derive-pde", "--spec", write_file("sym.json", kSym)});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["n"] == 2);
    CHECK(j["order"] == 4);
    CHECK(j["factor_check"]["power"] == 2);
    const auto q = operator_from_json(j["factor_check"]["quotient_terms"]);
    const auto T = OperatorPoly::T(), X = OperatorPoly::X();
    CHECK(q == T * T + T.scaled(4) - (X * X).scaled(4));
    CHECK(j["meta"]["tool"] == "linform");
}

TEST_CASE("atoms totals") {
    const auto sym = json::parse(cli({"atoms", "--spec", write_file("sym.json", kSym), "--t", "1"}).out);
    CHECK(sym["atoms"].size() == 3);
    CHECK(std::abs(sym["total_mass"].get<double>() - std::exp(-2.0)) < 1e-15);
    const auto gen = json::parse(cli({"atoms", "--spec", write_file("gen.json", kGeneric), "--t", "1"}).out);
    CHECK(gen["atoms"].size() == 4);
    CHECK(std::abs(gen["total_mass"].get<double>() - std::exp(-3.0)) < 1e-15);
}

TEST_CASE("cf and density") {
    const auto spec = write_file("sym.json", kSym);
    const auto cf = json::parse(cli({"cf", "--spec", spec, "--alpha", "0,1"}).out);
    CHECK(cf["values"][0]["re"] == 1.0);
    CHECK(cf["values"][0]["im"] == 0.0);
    CHECK(std::abs(cf["values"][1]["re"].get<double>() - 0.5413411329464508) < 1e-12);

    const auto d = cli({"density", "--spec", spec, "--t", "1"});
    REQUIRE(d.code == 0);
    const auto grid = json::parse(d.out);
    CHECK(std::abs(grid["ac_mass"].get<double>() - (1.0 - std::exp(-2.0))) < 1e-6);

    const auto csv = cli({"density", "--spec", spec, "--format", "csv", "--points", "65536", "--half-width", "1.5"});
    CHECK(csv.code == 2);  // tail has not decayed on this grid
    CHECK(csv.err.find("bandwidth") != std::string::npos);
}

TEST_CASE("simulate is reproducible") {
    const auto spec = write_file("gen.json", kGeneric);
    const auto a = cli({"simulate", "--spec", spec, "--samples", "5000", "--seed", "9", "--format", "csv"});
    const auto b = cli({"simulate", "--spec", spec, "--samples", "5000", "--seed", "9", "--format", "csv"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("# seed=9") != std::string::npos);
    std::istringstream in(a.out);
    const auto s = read_samples_csv(in);
    CHECK(s.size() == 5000);
    CHECK(s.seed == 9);

    const auto bin_path = (scratch() / "draws.bin").string();
    CHECK(cli({"simulate", "--spec", spec, "--samples", "100", "--format", "bin"}).code == 1);
    const auto bin = cli({"simulate", "--spec", spec, "--samples", "100", "--format", "bin", "--out", bin_path});
    CHECK(bin.code == 0);
    CHECK(read_file(bin_path).size() == 16 + 12 * 100);
}

TEST_CASE("verify passes on valid specs") {
    const auto r = cli({"verify", "--spec", write_file("gen.json", kGeneric)});
    CHECK(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["passed"] == true);
    CHECK(j["checks"].size() == 3);
    const auto adv = json::parse(cli({"verify", "--spec", write_file("sym.json", kSym), "--advisory"}).out);
    CHECK(adv["checks"].back()["check_name"] == "fd_residual");
    CHECK(adv["checks"].back()["advisory"] == true);
}

TEST_CASE("kac table") {
    const auto r = cli({"kac", "--spec", write_file("sym.json", kSym), "--samples", "20000", "--scales", "1,100"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["rows"].size() == 2);
    CHECK(j["limit_variance"] == 2.0);
    CHECK(j["rows"][1]["ks"].get<double>() < j["rows"][0]["ks"].get<double>());
}

TEST_CASE("exit codes for invalid input") {
    const auto bad = write_file("bad.json", R"({"components":[{"rate":"1","speed":"1","start":"0","coef":"1"},
        {"rate":"1","start":"0","coef":"1"}]})");
    const auto schema = cli({"atoms", "--spec", bad});
    CHECK(schema.code == 1);
    CHECK(schema.err.find("components[1].speed: missing") != std::string::npos);

    CHECK(cli({"atoms", "--spec", (scratch() / "missing.json").string()}).code == 1);
    CHECK(cli({"atoms"}).code == 1);
    CHECK(cli({"frobnicate"}).code == 1);
    CHECK(cli({}).code == 1);
    const auto spec = write_file("sym.json", kSym);
    CHECK(cli({"atoms", "--spec", spec, "--t", "-1"}).code == 1);
    CHECK(cli({"atoms", "--spec", spec, "--t", "0"}).code == 1);
    CHECK(cli({"cf", "--spec", spec, "--format", "xml"}).code == 1);
    CHECK(cli({"derive-pde", "--spec", spec, "--cap", "1"}).code == 1);
    CHECK(cli({"simulate", "--spec", spec, "--samples", "0"}).code == 1);
}

TEST_CASE("validate rejects malformed configs") {
    RunConfig cfg;
    cfg.command = "atoms";
    CHECK_THROWS(validate(cfg));
    cfg.spec_path = "x.json";
    CHECK_NOTHROW(validate(cfg));
    cfg.format = "bin";
    CHECK_THROWS(validate(cfg));
    cfg.command = "simulate";
    CHECK_NOTHROW(validate(cfg));
    cfg.command = "selftest";
    cfg.spec_path.clear();
    CHECK_NOTHROW(validate(cfg));
}

TEST_CASE("selftest runs the acceptance suite") {
    const auto r = cli({"selftest"});
    CHECK(r.code == 0);
    CHECK(r.out.find("selftest: all required criteria passed") != std::string::npos);
}
