#include "rainbow/errors.hpp"
#include "rainbow/serialize.hpp"

#include "cli_support.hpp"

#include <doctest.h>

#include <charconv>
#include <cmath>
#include <limits>
#include <cstring>
#include <sstream>

using namespace rainbow;

TEST_SUITE("serialize") {

TEST_CASE("doubles round-trip through their text form") {
    for (double v : {0.0, 1.0, -0.1, 1.0 / 3.0, 6.02214076e23, 5e-324, 0.7869}) {
        const std::string text = format_double(v);
        double back = 0.0;
        std::from_chars(text.data(), text.data() + text.size(), back);
        CHECK(back == v);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("profile JSON") {
    const auto p = build_rainbow_profile(2, 0.5);
    const auto j = to_json(p);
    CHECK(j.dump().rfind("{\"L\":2,\"alpha\":0.5,\"h\":", 0) == 0);
    CHECK(j["couplings"].size() == 3);
    const auto back = profile_from_json(j);
    CHECK(back.L == 2);
    CHECK(back.couplings == p.couplings);
    CHECK(back.h == p.h);
    auto broken = j;
    broken["couplings"].erase(0);
    CHECK_THROWS_AS(profile_from_json(broken), ContractViolation);
}

TEST_CASE("lattice JSON") {
    const auto lat = build_lattice_2d(1, 0.5);
    const auto j = to_json(lat);
    CHECK(j["L"] == 1);
    REQUIRE(j["links"].size() == 4);
    CHECK(j["links"][0].size() == 3);
    CHECK(j["links"][0][0] == lat.links[0].a);
    CHECK(j["links"][0][2] == lat.links[0].amplitude);
}

TEST_CASE("bond list JSON uses half-integer labels") {
    const auto bonds = sdrg_run(build_rainbow_profile(2, 0.1).couplings);
    const auto j = to_json(bonds, 4);
    CHECK(j["bonds"][0]["left"] == -0.5);
    CHECK(j["bonds"][0]["right"] == 0.5);
    CHECK(j["bonds"][0]["sign"] == 1);
    CHECK(j["bonds"][1]["left"] == -1.5);
    CHECK(j["bonds"][1]["sign"] == -1);
    CHECK(j["trace"].size() == 2);
    CHECK(j["trace"][0]["created"] == true);
    CHECK(j["trace"][1]["created"] == false);
}

TEST_CASE("fit JSON") {
    FitResult fit;
    fit.model = "line";
    fit.names = {"a", "b"};
    fit.coefficients = Eigen::Vector2d(1.5, -2.0);
    fit.chi2 = 0.25;
    fit.condition = 3.0;
    const auto j = to_json(fit);
    CHECK(j.dump() == R"({"model":"line","coeffs":{"a":1.5,"b":-2.0},"chi2":0.25,"dof":0,"condition":3.0})");
}

TEST_CASE("CSV writers") {
    std::ostringstream os;
    write_comment_header(os, {"one", "two"});
    CHECK(os.str() == "# one\n# two\n");

    std::ostringstream spec;
    write_spectrum_csv(spec, diagonalize(hopping_matrix_1d(build_rainbow_profile(1, 1.0))));
    CHECK(spec.str() == "m,energy\n-1,-0.5\n0,0.5\n");

    std::ostringstream ent;
    write_entropy_csv(ent, {{10, 0.5, 1.0, 0.25}}, "L", "z");
    CHECK(ent.str() == "L,z,n,S\n10,0.5,1,0.25\n");

    EntanglementSpectrum es;
    es.nu = {0.9, 0.1};
    es.eps = {-2.0, 2.0};
    std::ostringstream e;
    write_entanglement_spectrum_csv(e, es);
    CHECK(e.str() == "p,nu,eps\n-0.5,0.9,-2\n0.5,0.1,2\n");

    AmplitudeTable amps{2, 1, {0.0, 0.6, -0.8, 0.0}};
    std::ostringstream a;
    write_amplitudes_csv(a, amps);
    CHECK(a.str() == "bitstring,amplitude\n01,0.6\n10,-0.8\n");

    ValidityMap map{{{10, 0.0, 1.0}, {10, 1.0, 0.8}}, {{10, 0.5, std::nan("")}}};
    std::ostringstream g, c;
    write_validity_csv(g, map);
    write_contour_csv(c, map);
    CHECK(g.str() == "L,z,overlap\n10,0,1\n10,1,0.8\n");
    CHECK(c.str() == "L,z_at_0.90,z_at_0.95\n10,0.5,nan\n");
}

TEST_CASE("orbital binary round-trip") {
    Eigen::MatrixXd M(3, 2);
    M << 1, 2, 3, 4, 5, 6.5;
    std::stringstream ss;
    write_orbitals_binary(ss, M);
    const std::string raw = ss.str();
    CHECK(raw.size() == 16 + 6 * 8);
    CHECK(raw[0] == 3);
    CHECK(raw[8] == 2);
    double second;
    std::memcpy(&second, raw.data() + 16 + 8, sizeof(double));
    CHECK(second == 3.0); // column-major: (1,0) comes second
    CHECK(read_orbitals_binary(ss) == M);
    std::stringstream truncated(raw.substr(0, 30));
    CHECK_THROWS(read_orbitals_binary(truncated));
}

TEST_CASE("arc diagram") {
    const std::string art = render_arcs(rainbow_bonds(2), 4);
    CHECK(art == " +--------+   (-)\n    +--+      (+)\n o  o  o  o \n");
}

}

TEST_SUITE("cli") {

TEST_CASE("ranges") {
    using rainbow::cli::parse_double_range;
    using rainbow::cli::parse_int_range;
    CHECK(parse_int_range("60:160:20") == std::vector<int>{60, 80, 100, 120, 140, 160});
    CHECK(parse_int_range("8:24:5") == std::vector<int>{8, 13, 18, 23});
    CHECK(parse_int_range("7") == std::vector<int>{7});
    CHECK(parse_int_range("100,101,150") == std::vector<int>{100, 101, 150});
    const auto z = parse_double_range("0:4:0.4");
    REQUIRE(z.size() == 11);
    CHECK(z.back() == doctest::Approx(4.0));
    CHECK(parse_double_range("0:4:0.5").size() == 9);
    CHECK(parse_double_range("1,0.9,0.75") == std::vector<double>{1.0, 0.9, 0.75});
    CHECK_THROWS_AS(parse_int_range("1:5"), rainbow::cli::UsageError);
    CHECK_THROWS_AS(parse_int_range("5:1:1"), rainbow::cli::UsageError);
    CHECK_THROWS_AS(parse_int_range("1:5:0"), rainbow::cli::UsageError);
    CHECK_THROWS_AS(parse_double_range("abc"), rainbow::cli::UsageError);
    CHECK_THROWS_AS(parse_double_range("1,,2"), rainbow::cli::UsageError);
    CHECK_THROWS_AS(parse_double_range(""), rainbow::cli::UsageError);
}

TEST_CASE("provenance") {
    const nlohmann::ordered_json cfg = {{"L", "5"}, {"z", "1"}};
    const auto lines = rainbow::cli::provenance_lines("spectrum", cfg);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "rainbow_lab " + rainbow::cli::tool_version());
    CHECK(lines[2] == R"(config: {"L":"5","z":"1"})");
    CHECK(rainbow::cli::provenance_json("spectrum", cfg)["command"] == "spectrum");
}

}
