#include "rainbow/continuum.hpp"
#include "rainbow/errors.hpp"
#include "rainbow/lattice.hpp"
#include "rainbow/spectra.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace rainbow;
using std::numbers::pi;

namespace {

Eigen::VectorXd exact_orbital(int L, double z, int m) {
    const auto spec = diagonalize(hopping_matrix_1d(profile_from_z(L, z)));
    return spec.orbitals.col(spec.level_index(m));
}

Eigen::MatrixXd exact_ground_state(int L, double z) {
    return occupied_orbitals(diagonalize(hopping_matrix_1d(profile_from_z(L, z))));
}

// L (psi_n^2 + psi_{n+1}^2) against n/L: adjacent sites differ by a quarter
// period in the fast phase, so the pair sum follows the smooth envelope.
std::vector<std::pair<double, double>> envelope(const Eigen::VectorXd& psi, int L) {
    std::vector<std::pair<double, double>> out;
    for (int i = 0; i + 1 < psi.size(); ++i) {
        const double x = (site_label(i, L) + 0.5) / L;
        out.emplace_back(x, L * (psi[i] * psi[i] + psi[i + 1] * psi[i + 1]));
    }
    return out;
}

double interpolate(const std::vector<std::pair<double, double>>& f, double x) {
    for (std::size_t i = 0; i + 1 < f.size(); ++i)
        if (f[i].first <= x && x <= f[i + 1].first) {
            const double t = (x - f[i].first) / (f[i + 1].first - f[i].first);
            return f[i].second + t * (f[i + 1].second - f[i].second);
        }
    return f.back().second;
}

} // namespace

TEST_SUITE("continuum") {

TEST_CASE("continuum parameters") {
    const auto flat = continuum_params(0.0, 50);
    CHECK(flat.tilde_L == 50.0);
    CHECK(std::isinf(flat.beta));
    CHECK(flat.T == 0.0);
    for (double h : {1e-9, 0.01, 0.5, 3.0}) {
        const auto p = continuum_params(h, 50);
        CHECK(p.tilde_L >= 50.0);
        CHECK(p.beta * p.T == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(p.tilde_L == doctest::Approx(std::expm1(h * 50) / h).epsilon(1e-12));
    }
    CHECK_THROWS_AS(continuum_params(-0.1, 5), DomainError);
}

TEST_CASE("deformed length and its logarithm") {
    CHECK(deformed_length(0.0, 7.0) == 7.0);
    CHECK(deformed_length(1e-12, 7.0) == doctest::Approx(7.0).epsilon(1e-10));
    CHECK(log_deformed_length(0.0, 100.0) == doctest::Approx(std::log(100.0)).epsilon(1e-15));
    // large hL: ln((e^{hL}-1)/h) ~ hL - ln h
    CHECK(log_deformed_length(2.0, 1000.0) == doctest::Approx(2000.0 - std::log(2.0)).epsilon(1e-15));
    CHECK(log_deformed_length(0.3, 10.0) == doctest::Approx(std::log(std::expm1(3.0) / 0.3)).epsilon(1e-14));
}

TEST_CASE("analytic energies") {
    CHECK(analytic_energy(0, 0.0, 100) == doctest::Approx(7.853981633974483e-3).epsilon(1e-14));
    CHECK(analytic_energy(0, 0.01, 100) == doctest::Approx(4.570571e-3).epsilon(1e-6));
    for (double h : {0.0, 0.02, 0.3})
        CHECK(analytic_energy(-1, h, 40) == doctest::Approx(-analytic_energy(0, h, 40)).epsilon(1e-15));
}

TEST_CASE("analytic energies are equally spaced and scale with a(z)") {
    testing::Gen gen(5);
    for (int trial = 0; trial < 50; ++trial) {
        const int L = gen.integer(1, 2000);
        const double h = gen.scale(1e-6, 5.0) / L;
        const int m = gen.integer(-L, L - 1);
        const double step = analytic_energy(1, h, L) - analytic_energy(0, h, L);
        CHECK(analytic_energy(m + 1, h, L) - analytic_energy(m, h, L) ==
              doctest::Approx(step).epsilon(1e-9));
        const double a = velocity_scale(h * L);
        CHECK(analytic_energy(m, h, L) ==
              doctest::Approx(a * pi * (m + 0.5) / (2.0 * L)).epsilon(1e-10));
    }
}

TEST_CASE("coordinate map") {
    CHECK(coordinate_map(3.5, 0.0) == 3.5);
    CHECK(coordinate_map(-3.5, 0.0) == -3.5);
    const double h = 0.05;
    const int L = 40;
    CHECK(coordinate_map(L, h) == doctest::Approx(continuum_params(h, L).tilde_L).epsilon(1e-14));
    CHECK(coordinate_map(-L, h) == doctest::Approx(-continuum_params(h, L).tilde_L).epsilon(1e-14));
    testing::Gen gen(6);
    for (int trial = 0; trial < 50; ++trial) {
        const double x = gen.real(-30.0, 30.0);
        const double hh = gen.real(0.0, 0.3);
        CHECK(coordinate_map(-x, hh) == doctest::Approx(-coordinate_map(x, hh)));
        CHECK(coordinate_map(x + 0.01, hh) > coordinate_map(x, hh));
        const double dx = 1e-6;
        const double slope = (coordinate_map(x + dx, hh) - coordinate_map(x - dx, hh)) / (2 * dx);
        CHECK(slope == doctest::Approx(std::exp(hh * std::abs(x))).epsilon(1e-6));
    }
}

TEST_CASE("analytic wavefunctions") {
    const auto w = analytic_wavefunction(0, 0.0, 100);
    CHECK(w.components.size() == 200);
    CHECK(w.components.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(wavefunction_overlap(w.components, exact_orbital(100, 0.0, 0)) > 0.999);

    const auto d = analytic_wavefunction(0, 1.0 / 200, 200);
    CHECK(wavefunction_overlap(d.components, exact_orbital(200, 1.0, 0)) > 0.99);

    const auto e = analytic_wavefunction(0, 0.01, 100);
    CHECK(wavefunction_overlap(e.components, exact_orbital(100, 1.0, 0)) > 0.99);

    // huge z stays finite
    const auto big = analytic_wavefunction(-3, 5.0, 200);
    CHECK(big.components.allFinite());
    CHECK(big.components.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("orbitals collapse in n/L at fixed z") {
    auto mismatch = [](const Eigen::VectorXd& small, int L, const Eigen::VectorXd& large) {
        const auto a = envelope(small, L);
        const auto b = envelope(large, 2 * L);
        double worst = 0.0;
        for (const auto& [x, v] : a)
            worst = std::max(worst, std::abs(v - interpolate(b, x)));
        return worst;
    };
    // finite-size corrections are O(1/L): doubling L halves the mismatch
    const double exact_100 = mismatch(exact_orbital(100, 2.0, 0), 100, exact_orbital(200, 2.0, 0));
    const double exact_200 = mismatch(exact_orbital(200, 2.0, 0), 200, exact_orbital(400, 2.0, 0));
    CHECK(exact_100 < 0.05);
    CHECK(exact_200 / exact_100 == doctest::Approx(0.5).epsilon(0.2));

    const double cont_100 = mismatch(analytic_wavefunction(0, 0.02, 100).components, 100,
                                     analytic_wavefunction(0, 0.01, 200).components);
    const double cont_200 = mismatch(analytic_wavefunction(0, 0.01, 200).components, 200,
                                     analytic_wavefunction(0, 0.005, 400).components);
    CHECK(cont_100 < 0.05);
    CHECK(cont_200 / cont_100 == doctest::Approx(0.5).epsilon(0.2));
}

TEST_CASE("wavefunction overlap") {
    Eigen::VectorXd v(3), w(3);
    v << 1, 2, 2;
    w << 2, -1, 0;
    CHECK(wavefunction_overlap(v, v) == doctest::Approx(1.0));
    CHECK(wavefunction_overlap(v, -3.0 * v) == doctest::Approx(1.0));
    CHECK(wavefunction_overlap(v, w) == doctest::Approx(0.0));
    CHECK_THROWS_AS(wavefunction_overlap(v, Eigen::VectorXd::Ones(4)), ContractViolation);
}

TEST_CASE("Slater overlap is invariant under rotations of either basis") {
    testing::Gen gen(17);
    const auto M = exact_ground_state(12, 1.5);
    CHECK(slater_overlap(M, M) == doctest::Approx(1.0).epsilon(1e-12));
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::MatrixXd R = gen.orthogonal(12);
        CHECK(slater_overlap(M, M * R) == doctest::Approx(1.0).epsilon(1e-12));
        // non-orthonormal spanning sets give the same state
        Eigen::MatrixXd S = M * R;
        S.col(0) *= 3.0;
        S.col(1) += S.col(2);
        CHECK(slater_overlap(M, S) == doctest::Approx(1.0).epsilon(1e-12));
    }
    const auto other = exact_ground_state(12, 20.0);
    const double o = slater_overlap(M, other);
    CHECK(o >= 0.0);
    CHECK(o < 1.0);
}

TEST_CASE("rank-deficient Slater input gives zero") {
    Eigen::MatrixXd M = exact_ground_state(4, 0.5);
    Eigen::MatrixXd bad = M;
    bad.col(1) = 2.0 * bad.col(0);
    const auto r = slater_overlap_checked(M, bad);
    CHECK(r.rank_deficient);
    CHECK(r.value == 0.0);
    CHECK_FALSE(slater_overlap_checked(M, M).rank_deficient);
}

TEST_CASE("continuum ground state vs exact ground state") {
    // at z = 0 the lattice correction is finite and size independent
    std::vector<double> flat;
    for (int L : {20, 50, 100}) {
        const double o = slater_overlap(continuum_ground_state(0.0, L), exact_ground_state(L, 0.0));
        CHECK(o >= 0.98);
        flat.push_back(o);
    }
    CHECK(std::abs(flat.front() - flat.back()) < 1e-3);
    CHECK(slater_overlap(continuum_ground_state(0.02 / 100, 100), exact_ground_state(100, 0.02)) > 0.9);
}

TEST_CASE("per-orbital overlap decays deep in the band") {
    const auto curve = orbital_overlap_curve(1.0 / 200, 200);
    REQUIRE(curve.size() == 200);
    // m/L = 0.02 -> m = -4 (index 3); m/L = 0.9 -> m = -180 (index 179)
    CHECK(curve[3] > curve[179]);
    CHECK(curve[0] > 0.99);
}

TEST_CASE("validity map") {
    const std::vector<double> z{0.0, 0.5, 1.0, 2.0, 4.0, 8.0};
    const auto map = validity_map({10, 20}, z, 2);
    REQUIRE(map.grid.size() == 12);
    REQUIRE(map.contours.size() == 2);
    for (std::size_t i = 0; i < map.grid.size(); ++i) {
        CHECK(map.grid[i].L == (i < 6 ? 10 : 20));
        CHECK(map.grid[i].z == z[i % 6]);
        CHECK(map.grid[i].overlap >= 0.0);
        CHECK(map.grid[i].overlap <= 1.0 + 1e-12);
    }
    CHECK(map.grid[0].overlap >= 0.98);
    CHECK(map.grid[6].overlap >= 0.98);
    // beyond the plateau the overlap only falls
    for (int a = 0; a < 2; ++a)
        for (int k = 2; k + 1 < 6; ++k)
            CHECK(map.grid[a * 6 + k + 1].overlap <= map.grid[a * 6 + k].overlap + 1e-12);
    for (const auto& c : map.contours)
        if (std::isfinite(c.z_at_090) && std::isfinite(c.z_at_095))
            CHECK(c.z_at_095 <= c.z_at_090);

    // same answer on one thread
    const auto serial = validity_map({10, 20}, z, 1);
    for (std::size_t i = 0; i < map.grid.size(); ++i)
        CHECK(serial.grid[i].overlap == map.grid[i].overlap);
}

TEST_CASE("contour crossing") {
    const std::vector<double> z{0, 1, 2, 3};
    CHECK(contour_crossing(z, {1.0, 0.96, 0.92, 0.5}, 0.95) == doctest::Approx(1.25));
    CHECK(contour_crossing(z, {1.0, 0.96, 0.92, 0.5}, 0.90) == doctest::Approx(2.0 + 0.02 / 0.42));
    CHECK(std::isnan(contour_crossing(z, {1.0, 0.99, 0.98, 0.97}, 0.9)));
    CHECK(contour_crossing(z, {0.5, 0.4, 0.3, 0.2}, 0.9) == 0.0);
    CHECK_THROWS_AS(contour_crossing(z, {1.0}, 0.9), ContractViolation);
}

}
