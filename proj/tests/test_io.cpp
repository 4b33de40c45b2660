#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "subdivkit/io.hpp"
#include "support/fixtures.hpp"

#include <cmath>
#include <random>

using namespace subdivkit;
using fx::q;

namespace {

Mask random_rational_mask(std::mt19937& rng) {
    std::uniform_int_distribution<long> dilation(2, 4), lo(-4, 0), len(1, 7);
    std::uniform_int_distribution<long> num(-9, 9), den(1, 12);
    long n = len(rng);
    std::vector<Scalar> c;
    for (long i = 0; i < n; ++i) c.push_back(Scalar::ratio(num(rng), den(rng)));
    if (FiniteSequence(0, c).is_zero()) c[0] = Scalar(1);
    return Mask(FiniteSequence(lo(rng), std::move(c)), dilation(rng));
}

}  // namespace

TEST_CASE("scalar text forms") {
    CHECK(io::scalar_string(q(-3, 7)) == "-3/7");
    CHECK(io::scalar_string(Scalar(5)) == "5");
    CHECK(io::parse_scalar("22/8") == q(11, 4));
    CHECK(io::parse_scalar(" -4 ") == Scalar(-4));
    CHECK(io::parse_scalar("0.5").exact() == false);
    CHECK(io::parse_scalar("2.5e-1").dbl() == doctest::Approx(0.25));
    CHECK_THROWS_AS(io::parse_scalar("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(io::parse_scalar("three"), std::invalid_argument);
    CHECK_THROWS_AS(io::parse_scalar(""), std::invalid_argument);
    CHECK_THROWS_AS(io::parse_scalar("1/2/3"), std::invalid_argument);
}

TEST_CASE("float text is reparse-stable") {
    std::mt19937 rng(551);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        double x = std::ldexp(u(rng), i % 64 - 32);
        double back = std::strtod(io::format_float(x).c_str(), nullptr);
        CHECK(back == x);
    }
}

TEST_CASE("mask json roundtrip is exact") {
    std::mt19937 rng(552);
    for (int i = 0; i < 200; ++i) {
        Mask a = random_rational_mask(rng);
        Mask b = io::parse_mask_json(io::emit_mask_json(a));
        CHECK(b.dilation == a.dilation);
        CHECK(b.seq == a.seq);
    }
    Mask h = seqalg::hat_mask(3);
    CHECK(io::emit_mask_json(h) == io::emit_mask_json(h));  // byte determinism
}

TEST_CASE("mask json rejects malformed input") {
    const char* ok =
        "{\"dilation\": 2, \"support\": [-1, 1], \"coeffs\": [\"1/4\", \"1/2\", \"1/4\"]}";
    CHECK(io::parse_mask_json(ok).seq == seqalg::hat_mask(2).seq);

    auto bad = [](const std::string& text) {
        CHECK_THROWS_AS(io::parse_mask_json(text), std::invalid_argument);
    };
    bad("not json at all");
    bad("[1,2,3]");
    bad("{\"dilation\": 2, \"support\": [-1, 1]}");                                  // missing coeffs
    bad("{\"dilation\": 1, \"support\": [0, 0], \"coeffs\": [\"1\"]}");              // dilation < 2
    bad("{\"dilation\": 2, \"support\": [1, -1], \"coeffs\": [\"1\"]}");             // bounds order
    bad("{\"dilation\": 2, \"support\": [-1, 1], \"coeffs\": [\"1/2\", \"1/2\"]}");  // length
    bad("{\"dilation\": 2, \"support\": [0, 0], \"coeffs\": [\"1\"], \"extra\": 1}");
    bad("{\"dilation\": 2, \"support\": [0, 0], \"coeffs\": [true]}");
    bad("{\"dilation\": 2.5, \"support\": [0, 0], \"coeffs\": [\"1\"]}");
}

TEST_CASE("mask json carries floats and mixed entries") {
    Mask a(FiniteSequence(0, {Scalar(0.25), q(3, 4)}), 2);
    Mask b = io::parse_mask_json(io::emit_mask_json(a, "mixed"));
    CHECK(!b.seq.at(0).exact());
    CHECK(b.seq.at(0).dbl() == 0.25);
    CHECK(b.seq.at(1) == q(3, 4));
    // numbers are accepted on input
    Mask c = io::parse_mask_json(
        "{\"dilation\": 2, \"support\": [0, 1], \"coeffs\": [0.25, \"3/4\"]}");
    CHECK(c.seq == b.seq);
}

TEST_CASE("scheme json roundtrip and validation") {
    auto spec = fx::ring1_pair();
    auto back = io::parse_scheme_json(io::emit_scheme_json(spec, "pair"));
    REQUIRE(back.period() == spec.period());
    CHECK(back.dilation == spec.dilation);
    for (size_t i = 0; i < spec.masks.size(); ++i) CHECK(back.masks[i].seq == spec.masks[i].seq);

    CHECK_THROWS_AS(io::parse_scheme_json("{\"dilation\": 2, \"masks\": []}"),
                    std::invalid_argument);
    // unnormalized member mask
    CHECK_THROWS_AS(
        io::parse_scheme_json("{\"dilation\": 2, \"masks\": [{\"dilation\": 2, "
                              "\"support\": [0, 0], \"coeffs\": [\"2\"]}]}"),
        std::invalid_argument);
    // dilation mismatch
    CHECK_THROWS_AS(
        io::parse_scheme_json("{\"dilation\": 3, \"masks\": [{\"dilation\": 2, "
                              "\"support\": [0, 0], \"coeffs\": [\"1\"]}]}"),
        std::invalid_argument);
}

TEST_CASE("polygon csv forms") {
    io::Polygon p = io::parse_polygon_csv("x,y\n0,0\n1,0\n1,1\n");
    CHECK(p.dim == 2);
    REQUIRE(p.points.size() == 3);
    CHECK(p.points[2][0] == 1.0);

    io::Polygon no_header = io::parse_polygon_csv("0,0\n1,0.5\n");
    CHECK(no_header.dim == 2);
    CHECK(no_header.points[1][1] == 0.5);

    io::Polygon three = io::parse_polygon_csv("x,y,z\n0,0,1\n1,0,2\n");
    CHECK(three.dim == 3);
    CHECK(three.points[1][2] == 2.0);

    CHECK_THROWS_AS(io::parse_polygon_csv(""), std::invalid_argument);
    CHECK_THROWS_AS(io::parse_polygon_csv("x,y\n1,2\n"), std::invalid_argument);  // one point
    CHECK_THROWS_AS(io::parse_polygon_csv("1,2\n3,4,5\n"), std::invalid_argument);
    CHECK_THROWS_AS(io::parse_polygon_csv("1,2\nnan,4\n"), std::invalid_argument);
    CHECK_THROWS_AS(io::parse_polygon_csv("1,2\n3,\n"), std::invalid_argument);
}

TEST_CASE("polygon csv roundtrip") {
    std::mt19937 rng(553);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    std::uniform_int_distribution<int> len(2, 20), dim(2, 3);
    for (int i = 0; i < 200; ++i) {
        io::Polygon p;
        p.dim = static_cast<size_t>(dim(rng));
        int n = len(rng);
        for (int j = 0; j < n; ++j)
            p.points.push_back({u(rng), u(rng), p.dim == 3 ? u(rng) : 0.0});
        io::Polygon back = io::parse_polygon_csv(io::emit_polygon_csv(p));
        REQUIRE(back.dim == p.dim);
        REQUIRE(back.points.size() == p.points.size());
        for (size_t j = 0; j < p.points.size(); ++j)
            for (size_t c = 0; c < 3; ++c) CHECK(back.points[j][c] == p.points[j][c]);
    }
}

TEST_CASE("svg holds one path inside a fitted viewBox") {
    io::Polygon p;
    p.points = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}};
    std::string svg = io::emit_svg(p);
    CHECK(svg.find("<?xml") == 0);
    CHECK(svg.find("viewBox=\"") != std::string::npos);
    size_t first = svg.find("<path");
    CHECK(first != std::string::npos);
    CHECK(svg.find("<path", first + 1) == std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(io::emit_svg(p) == svg);
}
