#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include "subdivkit/io.hpp"
#include "support/fixtures.hpp"

#include <json.hpp>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

using namespace subdivkit;
using fx::q;
using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

std::string g_cli;
fs::path g_dir;

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
    std::string cmd = env + (env.empty() ? "" : " ") + g_cli + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    RunResult r;
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string stash(const std::string& name, const std::string& text) {
    fs::path p = g_dir / name;
    io::write_file(p.string(), text);
    return p.string();
}

std::string shq(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

TEST_CASE("analyze reports and exit codes") {
    std::string hat = stash("hat2.json", io::emit_mask_json(seqalg::hat_mask(2)));
    auto r = run_cli("analyze " + shq(hat) + " --m 0");
    CHECK(r.code == 0);
    json rep = json::parse(r.out);
    CHECK(rep["sum_rules"] == 2);
    CHECK(std::abs(rep["sm2"].get<double>() - 1.5) < 1e-9);
    CHECK(rep["s_a"] == "0");
    CHECK(rep["interpolation"]["verdict"] == "verified");
    CHECK(rep["interpolation"]["n_s"] == 1);

    std::string m7 = stash("m2_s7.json", io::emit_mask_json(fx::m2_s7()));
    r = run_cli("analyze " + shq(m7) + " --m 0");
    CHECK(r.code == 0);
    rep = json::parse(r.out);
    CHECK(std::abs(rep["sm2"].get<double>() - 1.29617) < 1e-4);
    CHECK(rep["s_a"] == "1/7");
    CHECK(rep["interpolation"]["n_s"] == 3);

    // unconfirmed at an unreachable target
    r = run_cli("analyze " + shq(m7) + " --m 3");
    CHECK(r.code == 2);

    std::string m3 = stash("m3_j2.json", io::emit_mask_json(fx::m3_j2()));
    r = run_cli("analyze " + shq(m3) + " --m 1 --n-max 4");
    CHECK(r.code == 0);
    rep = json::parse(r.out);
    CHECK(rep["s_a"] == "1/4");
    CHECK(rep["sminf_lower_bounds"].size() == 4);
}

TEST_CASE("analyze byte determinism") {
    std::string m7 = stash("det.json", io::emit_mask_json(fx::m2_s7()));
    auto a = run_cli("analyze " + shq(m7) + " --m 1 --n-max 3");
    auto b = run_cli("analyze " + shq(m7) + " --m 1 --n-max 3");
    CHECK(a.out == b.out);
    CHECK(a.code == b.code);
}

TEST_CASE("usage errors exit 64") {
    CHECK(run_cli("analyze /no/such/file.json").code == 64);
    std::string junk = stash("junk.json", "{ definitely not json");
    CHECK(run_cli("analyze " + shq(junk)).code == 64);
    CHECK(run_cli("").code == 64);
    CHECK(run_cli("frobnicate").code == 64);
    CHECK(run_cli("analyze").code == 64);
    std::string hat = stash("hat2b.json", io::emit_mask_json(seqalg::hat_mask(2)));
    CHECK(run_cli("analyze " + shq(hat) + " --sa 0.25").code == 64);
    CHECK(run_cli("construct --dilation 2 --sa 1/7 --support nope --sum-rules 2").code == 64);
}

TEST_CASE("construct regenerates the dilation-2 three-step mask") {
    auto r = run_cli("construct --dilation 2 --sa 1/7 --support -2:2 --sum-rules 2");
    CHECK(r.code == 0);
    json rep = json::parse(r.out);
    CHECK(rep["params"]["n_s"] == 3);
    CHECK(rep["best"]["support"] == json::array({-2, 1}));
    CHECK(rep["best"]["coeffs"] == json::array({"-1/28", "3/14", "15/28", "2/7"}));
    CHECK(rep["best"]["exact"] == true);
    CHECK(rep["best"]["verdict"] == "verified");
}

TEST_CASE("construct reports infeasible half-integer problems") {
    CHECK(run_cli("construct --dilation 2 --sa 1/2 --support -3:4 --sum-rules 2").code == 3);
    CHECK(run_cli("construct --dilation 2 --sa 1/2 --support -4:5 --sum-rules 2").code == 3);
}

TEST_CASE("subdivide performs midpoint refinement with the hat scheme") {
    quasistat::SchemeSpec hat({seqalg::hat_mask(2)});
    std::string scheme = stash("hat_scheme.json", io::emit_scheme_json(hat));
    std::string square = stash("square.csv", "x,y\n0,0\n1,0\n1,1\n0,1\n");

    auto r = run_cli("subdivide " + shq(scheme) + " " + shq(square) + " --levels 1");
    CHECK(r.code == 0);
    CHECK(r.out == "x,y\n0,0\n0.5,0\n1,0\n1,0.5\n1,1\n0.5,1\n0,1\n");

    auto rj = run_cli("subdivide " + shq(scheme) + " " + shq(square) +
                      " --levels 1 --format json");
    CHECK(rj.code == 0);
    json rep = json::parse(rj.out);
    CHECK(rep["points"].size() == 7);
    CHECK(rep["first_index"] == 0);
    CHECK(rep["parameter"]["scale"] == "1/2");
    CHECK(rep["parameter"]["shift"] == "0");
    CHECK(rep["parameter"]["s_a"] == "0");

    auto rs = run_cli("subdivide " + shq(scheme) + " " + shq(square) +
                      " --levels 2 --format svg");
    CHECK(rs.code == 0);
    CHECK(rs.out.rfind("<?xml", 0) == 0);
    size_t first = rs.out.find("<path");
    CHECK(first != std::string::npos);
    CHECK(rs.out.find("<path", first + 1) == std::string::npos);
}

TEST_CASE("subdivide input validation and resource cap") {
    quasistat::SchemeSpec hat({seqalg::hat_mask(2)});
    std::string scheme = stash("hat_scheme2.json", io::emit_scheme_json(hat));
    std::string empty = stash("empty.csv", "x,y\n");
    CHECK(run_cli("subdivide " + shq(scheme) + " " + shq(empty)).code == 64);
    std::string one = stash("one.csv", "1,2\n");
    CHECK(run_cli("subdivide " + shq(scheme) + " " + shq(one)).code == 64);

    std::string square = stash("square2.csv", "x,y\n0,0\n1,0\n1,1\n0,1\n");
    auto r = run_cli("subdivide " + shq(scheme) + " " + shq(square) + " --levels 12",
                     "SUBDIVKIT_MAX_COEFFS=100");
    CHECK(r.code == 4);
}

TEST_CASE("sample-phi emits the closed-support grid") {
    std::string hat = stash("hat2c.json", io::emit_mask_json(seqalg::hat_mask(2)));
    auto r = run_cli("sample-phi " + shq(hat) + " --level 1");
    CHECK(r.code == 0);
    CHECK(r.out == "x,value\n-1,0\n-0.5,0.5\n0,1\n0.5,0.5\n1,0\n");

    std::string m3 = stash("m3_j3.json", io::emit_mask_json(fx::m3_j3(q(7, 256))));
    auto rd = run_cli("sample-phi " + shq(m3) + " --level 4 --deriv 2");
    CHECK(rd.code == 0);
    CHECK(rd.out.find("nan") == std::string::npos);
    CHECK(rd.out.find("inf") == std::string::npos);
    CHECK(std::count(rd.out.begin(), rd.out.end(), '\n') > 50);
}

TEST_CASE("spectrum lists transition eigenvalues by modulus") {
    std::string hat = stash("hat2d.json", io::emit_mask_json(seqalg::hat_mask(2)));
    auto r = run_cli("spectrum " + shq(hat) + " --gamma 0");
    CHECK(r.code == 0);
    json rep = json::parse(r.out);
    CHECK(rep["dimension"] == 3);
    REQUIRE(rep["eigenvalues"].size() == 3);
    CHECK(std::abs(rep["eigenvalues"][0].get<double>() - 1.0) < 1e-9);
    CHECK(std::abs(rep["eigenvalues"][1].get<double>() - 0.5) < 1e-9);
    CHECK(std::abs(rep["eigenvalues"][2].get<double>() - 0.5) < 1e-9);

    auto r1 = run_cli("spectrum " + shq(hat) + " --gamma 1");
    json rep1 = json::parse(r1.out);
    REQUIRE(rep1["eigenvalues"].size() == 3);
    for (size_t i = 0; i < 3; ++i)
        CHECK(std::abs(rep["eigenvalues"][i].get<double>() -
                       rep1["eigenvalues"][i].get<double>()) < 1e-9);

    std::string m7 = stash("m2_s7b.json", io::emit_mask_json(fx::m2_s7()));
    auto r7 = run_cli("spectrum " + shq(m7) + " --gamma 0");
    json rep7 = json::parse(r7.out);
    bool has1 = false, hasHalf = false;
    for (const auto& ev : rep7["eigenvalues"]) {
        if (!ev.is_number()) continue;
        if (std::abs(ev.get<double>() - 1.0) < 1e-9) has1 = true;
        if (std::abs(ev.get<double>() - 0.5) < 1e-9) hasHalf = true;
    }
    CHECK(has1);
    CHECK(hasHalf);
}

int run_tests(int argc, char** argv) {
    doctest::Context ctx;
    std::vector<char*> args;
    for (int i = 0; i < argc; ++i) {
        std::string a = argv[i];
        if (a.rfind("--cli=", 0) == 0)
            g_cli = a.substr(6);
        else
            args.push_back(argv[i]);
    }
    if (g_cli.empty()) {
        std::fprintf(stderr, "usage: test_cli --cli=PATH [doctest args]\n");
        return 64;
    }
    g_dir = fs::temp_directory_path() / "subdivkit_cli_tests";
    fs::create_directories(g_dir);
    ctx.applyCommandLine(static_cast<int>(args.size()), args.data());
    return ctx.run();
}

int main(int argc, char** argv) { return run_tests(argc, argv); }
