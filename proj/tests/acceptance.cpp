// Acceptance checks. Usage: acceptance [criterion...]; no argument runs all ten.
// Each criterion prints one line "criterion N: PASS|FAIL ..." and the exit code
// is non-zero when any selected criterion fails.
#include "rainbow/continuum.hpp"
#include "rainbow/entanglement.hpp"
#include "rainbow/fitting.hpp"
#include "rainbow/lattice.hpp"
#include "rainbow/parallel.hpp"
#include "rainbow/qubism.hpp"
#include "rainbow/sdrg.hpp"
#include "rainbow/spectra.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace rainbow;

namespace {

constexpr double pi = std::numbers::pi;
constexpr std::array<double, 4> kOrders{1.0, 2.0, 3.0, 4.0};

int jobs() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct Verdict {
    bool passed = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok)
            passed = false;
        if (detail.tellp() > 0)
            detail << "; ";
        detail << what << (ok ? "" : " [violated]");
    }
};

std::string fmt(double v, int digits = 4) {
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

Eigen::MatrixXd ground_state(const CouplingProfile& profile,
                             FillingPolicy policy = FillingPolicy::Strict) {
    return occupied_orbitals(diagonalize(hopping_matrix_1d(profile)), policy);
}

double halfchain_entropy(const CouplingProfile& profile) {
    const auto occ = ground_state(profile);
    const auto block = leading_block(profile.L);
    const auto nu = correlation_eigenvalues(correlation_matrix(occ, block));
    return renyi_entropy(nu, 1.0);
}

std::vector<int> int_range(int start, int stop, int step) {
    std::vector<int> out;
    for (int v = start; v <= stop; v += step)
        out.push_back(v);
    return out;
}

Verdict fermi_velocity_law() {
    Verdict v;
    Stopwatch clock;
    const int L = 500;
    double worst = 0.0;
    for (double z : {0.5, 1.0, 2.0, 4.0}) {
        const auto est = fermi_velocity(diagonalize(hopping_matrix_1d(profile_from_z(L, z))), L, z);
        worst = std::max(worst, std::abs(est.a_numeric / velocity_scale(z) - 1.0));
        v.detail << (v.detail.tellp() > 0 ? " " : "") << "a(" << z << ")=" << fmt(est.a_numeric, 5);
    }
    v.require(worst <= 0.02, "max relative error " + fmt(worst) + " <= 0.02");
    v.require(clock.seconds() < 10.0, "runtime " + fmt(clock.seconds(), 3) + " s < 10 s");
    return v;
}

Verdict central_charge() {
    Verdict v;
    const std::array<double, 1> order{1.0};
    const auto curve = halfchain_scan({50, 100, 200, 400}, {0.0}, order, jobs());
    const double c = fit_central_charge(curve, 1.0).coeff("c");
    v.require(std::abs(c - 1.0) <= 0.05, "c = " + fmt(c, 5) + " within 1 +- 0.05");
    return v;
}

Verdict volume_law() {
    Verdict v;
    const double alpha = 0.5;
    const auto Ls = int_range(20, 100, 10);
    std::vector<double> S(Ls.size());
    parallel_for(Ls.size(), jobs(), [&](std::size_t i) {
        S[i] = halfchain_entropy(build_rainbow_profile(Ls[i], alpha));
    });
    Eigen::MatrixXd X(Ls.size(), 2);
    Eigen::VectorXd y(Ls.size());
    for (std::size_t i = 0; i < Ls.size(); ++i) {
        X(i, 0) = Ls[i];
        X(i, 1) = 1.0;
        y[i] = S[i];
    }
    const double slope = linear_lsq(X, y).coefficients[0];
    const double exact = -std::log(alpha) / 3.0;
    const double quoted = -0.318 * std::log(alpha);
    v.require(std::abs(slope / exact - 1.0) <= 0.07,
              "slope " + fmt(slope, 5) + " vs " + fmt(exact, 5) + " within 7%");
    v.require(std::abs(quoted / slope - 1.0) <= 0.07,
              "quoted prefactor gives " + fmt(quoted, 5) + ", within 7% of slope");
    return v;
}

Verdict deformed_entropy_curve() {
    Verdict v;
    const std::array<double, 1> order{1.0};
    const auto curve = halfchain_scan(int_range(50, 400, 50), {1.0, 2.0, 4.0}, order, jobs());
    std::vector<double> offset;
    for (const auto& p : curve)
        offset.push_back(p.entropy - halfchain_entropy_prediction(p.param / p.length, p.length, 1.0, 0.0));
    double cprime = 0.0;
    for (double d : offset)
        cprime += d;
    cprime /= static_cast<double>(offset.size());
    double rms = 0.0;
    for (double d : offset)
        rms += (d - cprime) * (d - cprime);
    rms = std::sqrt(rms / static_cast<double>(offset.size()));
    v.require(rms <= 0.05, "c' = " + fmt(cprime) + ", RMS " + fmt(rms) + " <= 0.05 nats");
    return v;
}

Verdict renyi_coefficients() {
    Verdict v;
    const std::vector<int> Ls{100, 101, 150, 151, 200, 201, 300, 301, 400, 401};
    std::vector<double> zs;
    for (int k = 0; k <= 10; ++k)
        zs.push_back(0.4 * k);
    const auto curve = halfchain_scan(Ls, zs, kOrders, jobs());

    auto fit_at = [&](double z, double n) {
        EntropyCurve sel;
        for (const auto& p : curve)
            if (p.param == z && p.order == n)
                sel.push_back(p);
        return fit_renyi_halfchain(sel, n);
    };

    double c_lo = INFINITY, c_hi = -INFINITY, d_err = 0.0, f_err = 0.0;
    for (double n : kOrders) {
        const auto uniform = fit_at(0.0, n);
        const double d0 = uniform.coeff("d_n");
        const double f0 = fn_reference(static_cast<int>(n), uniform);
        for (double z : zs) {
            const auto fit = fit_at(z, n);
            const double c = fit.coeff("c_n");
            c_lo = std::min(c_lo, c);
            c_hi = std::max(c_hi, c);
            const double d_pred = dn_prediction(d0, n, z);
            d_err = std::max(d_err, std::abs(fit.coeff("d_n") - d_pred) / std::abs(d_pred));
            const double f_pred = fn_prediction(f0, n, z);
            f_err = std::max(f_err, std::abs(std::abs(fit.coeff("f_n")) - f_pred) / f_pred);
        }
    }
    v.require(c_lo >= 0.96 && c_hi <= 1.04,
              "c_n in [" + fmt(c_lo, 5) + ", " + fmt(c_hi, 5) + "] within [0.96, 1.04]");
    v.require(d_err <= 0.05, "d_n max relative deviation " + fmt(d_err) + " <= 0.05");
    v.require(f_err <= 0.10, "|f_n| max relative deviation " + fmt(f_err) + " <= 0.10");
    return v;
}

Verdict spectrum_collapse() {
    Verdict v;
    const auto Ls = int_range(60, 160, 20);
    const auto zi = int_range(5, 40, 5);
    struct Row {
        double collapse = 0.0;
        double entropy = 0.0;
        int L = 0;
        double z = 0.0;
    };
    std::vector<Row> rows(Ls.size() * zi.size());
    parallel_for(rows.size(), jobs(), [&](std::size_t idx) {
        const int L = Ls[idx / zi.size()];
        const double z = zi[idx % zi.size()];
        const auto occ = ground_state(profile_from_z(L, z));
        const auto C = correlation_matrix(occ, leading_block(L));
        const auto es = entanglement_spectrum(C);
        const int count = static_cast<int>(es.eps.size());
        // p runs over k - (count - 1)/2; take the five levels nearest p = 0.
        std::vector<int> order(count);
        for (int k = 0; k < count; ++k)
            order[k] = k;
        auto label = [&](int k) { return k - (count - 1) / 2.0; };
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return std::abs(label(a)) < std::abs(label(b)); });
        Row r{0.0, 0.0, L, z};
        for (int j = 0; j < 5; ++j) {
            const double p = label(order[j]);
            const double scaled = es.eps[order[j]] * z / (2.0 * pi * pi);
            r.collapse = std::max(r.collapse, std::abs(scaled - p) / std::abs(p));
        }
        const double S = renyi_entropy(es.nu, 1.0);
        r.entropy = std::abs(pi * pi / (3.0 * es.delta_L) / S - 1.0);
        rows[idx] = r;
    });
    const auto worst_collapse = *std::max_element(
        rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.collapse < b.collapse; });
    const auto worst_entropy = *std::max_element(
        rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.entropy < b.entropy; });
    v.require(worst_collapse.collapse <= 0.05,
              "collapse max |eps z/(2 pi^2) - p|/|p| " + fmt(worst_collapse.collapse) + " at L=" +
                  std::to_string(worst_collapse.L) + " z=" + fmt(worst_collapse.z) + " <= 0.05");
    v.require(worst_entropy.entropy <= 0.10,
              "pi^2/(3 Delta_L) vs S max " + fmt(worst_entropy.entropy) + " <= 0.10");
    return v;
}

Verdict rainbow_limit() {
    Verdict v;
    const auto profile = build_rainbow_profile(10, 0.01);
    const auto occ = ground_state(profile);
    const auto S = renyi_entropies(correlation_matrix(occ, leading_block(10)), kOrders);
    const double target = 10.0 * std::log(2.0);
    v.require(std::abs(S[0] - target) <= 1e-3,
              "S - 10 ln 2 = " + fmt(S[0] - target) + ", |.| <= 1e-3");
    const auto [lo, hi] = std::minmax_element(S.begin(), S.end());
    v.require(*hi - *lo <= 1e-3, "Renyi spread " + fmt(*hi - *lo) + " <= 1e-3");

    auto sorted = [](std::vector<Bond> b) {
        std::sort(b.begin(), b.end(), [](const Bond& x, const Bond& y) { return x.left < y.left; });
        return b;
    };
    const bool same = sorted(sdrg_run(profile.couplings).bonds) == sorted(rainbow_bonds(10).bonds);
    v.require(same, "SDRG bonds equal the rainbow matching");
    const double occupation = (site_occupations(occ).array() - 0.5).abs().maxCoeff();
    v.require(occupation <= 1e-10, "max |<n_i> - 1/2| " + fmt(occupation) + " <= 1e-10");
    return v;
}

Verdict oracle_equivalence() {
    Verdict v;
    Stopwatch clock;
    double worst = 0.0;
    for (int L : {2, 3, 4})
        for (double alpha : {0.01, 0.3, 1.0}) {
            const auto occ = ground_state(build_rainbow_profile(L, alpha));
            const auto amps = slater_amplitudes(occ, 2 * L);
            for (int l = 1; l < 2 * L; ++l) {
                std::vector<int> trailing;
                for (int i = l; i < 2 * L; ++i)
                    trailing.push_back(i);
                for (const auto& block : {leading_block(l), trailing}) {
                    const auto a = renyi_entropies(correlation_matrix(occ, block), kOrders);
                    const auto b = brute_force_block_entropy(amps, block, kOrders);
                    for (std::size_t k = 0; k < kOrders.size(); ++k)
                        worst = std::max(worst, std::abs(a[k] - b[k]));
                }
            }
        }
    v.require(worst <= 1e-10, "max difference " + fmt(worst) + " <= 1e-10");
    v.require(clock.seconds() < 5.0, "runtime " + fmt(clock.seconds(), 3) + " s < 5 s");
    return v;
}

Verdict two_dimensional() {
    Verdict v;
    Stopwatch clock;
    const auto Ls = int_range(8, 24, 2);
    const std::array<double, 1> order{1.0};
    std::vector<double> A;
    double A_half = 0.0;
    for (double alpha : {1.0, 0.9, 0.75, 0.5}) {
        const auto curve = lattice2d_scan(Ls, alpha, order, FillingPolicy::Staggered, jobs());
        // x is the side 2L (the boundary length of the left half); the
        // half-length reading x = L, s = S/L is reported alongside
        std::vector<double> x, s, x_half, s_half;
        for (const auto& p : curve) {
            x.push_back(2.0 * p.length);
            s.push_back(p.entropy / (2.0 * p.length));
            x_half.push_back(p.length);
            s_half.push_back(p.entropy / p.length);
        }
        A.push_back(fit_2d(x, s).coeff("A"));
        A_half = fit_2d(x_half, s_half).coeff("A");
    }
    v.require(std::abs(A[0]) < 0.005, "A(1) = " + fmt(A[0]) + ", |A| < 0.005");
    v.require(A[0] < A[1] && A[1] < A[2] && A[2] < A[3],
              "A(0.9)=" + fmt(A[1]) + " A(0.75)=" + fmt(A[2]) + " strictly increasing");
    v.require(std::abs(A[3] / 0.0594 - 1.0) <= 0.25, "A(0.5) = " + fmt(A[3]) + " within 25% of 0.0594");
    v.detail << "; half-length normalization gives A(0.5) = " << fmt(A_half);
    v.require(clock.seconds() < 600.0, "runtime " + fmt(clock.seconds(), 3) + " s < 600 s");
    return v;
}

Verdict qubism_ranks() {
    Verdict v;
    const auto amps = slater_amplitudes(ground_state(build_rainbow_profile(5, 0.01)), 10);
    const int r2 = schmidt_rank(amps, 2), r4 = schmidt_rank(amps, 4);
    v.require(r2 == 4, "schmidt_rank(2) = " + std::to_string(r2) + " == 4");
    v.require(r4 == 16, "schmidt_rank(4) = " + std::to_string(r4) + " == 16");
    const int lit = lit_pixel_count(ppm_bytes(render(amps)));
    v.require(lit == 32, "PPM lit pixels " + std::to_string(lit) + " == 32");
    return v;
}

using Check = Verdict (*)();
constexpr std::array<Check, 10> kCriteria{
    fermi_velocity_law, central_charge,    volume_law,    deformed_entropy_curve, renyi_coefficients,
    spectrum_collapse,  rainbow_limit,     oracle_equivalence, two_dimensional,   qubism_ranks,
};

} // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        const int n = std::atoi(argv[i]);
        if (n < 1 || n > static_cast<int>(kCriteria.size())) {
            std::fprintf(stderr, "unknown criterion '%s' (expected 1..10)\n", argv[i]);
            return 2;
        }
        selected.push_back(n);
    }
    if (selected.empty())
        for (int n = 1; n <= static_cast<int>(kCriteria.size()); ++n)
            selected.push_back(n);

    bool all = true;
    for (int n : selected) {
        Verdict v;
        try {
            v = kCriteria[n - 1]();
        } catch (const std::exception& e) {
            v.passed = false;
            v.detail << "exception: " << e.what();
        }
        all = all && v.passed;
        std::printf("criterion %d: %s %s\n", n, v.passed ? "PASS" : "FAIL", v.detail.str().c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
