#include "rainbow/continuum.hpp"

#include "rainbow/errors.hpp"
#include "rainbow/lattice.hpp"
#include "rainbow/parallel.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace rainbow {

namespace {

constexpr double kSeriesBelow = 1e-8;
constexpr double pi = std::numbers::pi;

// (e^{h x} - 1) / (e^{h L} - 1) for 0 <= x <= L without overflow.
double deformed_ratio(double h, double x, double L) {
    if (h < kSeriesBelow)
        return deformed_length(h, x) / deformed_length(h, L);
    return std::exp(h * (x - L)) * std::expm1(-h * x) / std::expm1(-h * L);
}

} // namespace

double deformed_length(double h, double x) {
    const double hx = h * x;
    if (std::abs(h) < kSeriesBelow)
        return x * (1.0 + hx / 2.0 + hx * hx / 6.0);
    return std::expm1(hx) / h;
}

double log_deformed_length(double h, double L) {
    const double hL = h * L;
    if (std::abs(h) < kSeriesBelow)
        return std::log(L) + std::log1p(hL / 2.0 + hL * hL / 6.0);
    if (hL > 30.0)
        return hL + std::log1p(-std::exp(-hL)) - std::log(h);
    return std::log(std::expm1(hL) / h);
}

ContinuumParams continuum_params(double h, int L) {
    if (!(h >= 0.0))
        throw DomainError("h must be non-negative");
    ContinuumParams p;
    p.h = h;
    p.L = L;
    p.tilde_L = deformed_length(h, L);
    p.T = h / (2.0 * pi);
    p.beta = h > 0.0 ? 2.0 * pi / h : std::numeric_limits<double>::infinity();
    return p;
}

double analytic_energy(int m, double h, int L) {
    return pi * (m + 0.5) / (2.0 * deformed_length(h, L));
}

AnalyticWavefunction analytic_wavefunction(int m, double h, int L) {
    AnalyticWavefunction wf;
    wf.m = m;
    wf.components.resize(2 * L);
    for (int i = 0; i < 2 * L; ++i) {
        const double n = site_label(i, L);
        const double an = std::abs(n);
        const double sign = n > 0 ? 1.0 : -1.0;
        const double phase =
            pi * (n - m) / 2.0 + sign * pi * (m + 0.5) / 2.0 * deformed_ratio(h, an, L);
        // e^{h|n|/2}, rescaled by e^{-hL/2} to stay finite
        wf.components[i] = std::exp(0.5 * h * (an - L)) * std::cos(phase);
    }
    wf.components.normalize();
    return wf;
}

double coordinate_map(double x, double h) {
    const double mapped = deformed_length(h, std::abs(x));
    return x < 0 ? -mapped : mapped;
}

double wavefunction_overlap(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size())
        throw ContractViolation("overlap of vectors with different lengths");
    const double na = a.norm(), nb = b.norm();
    if (na == 0.0 || nb == 0.0)
        return 0.0;
    return std::min(1.0, std::abs(a.dot(b)) / (na * nb));
}

SlaterOverlap slater_overlap_checked(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    if (A.rows() != B.rows() || A.cols() != B.cols())
        throw ContractViolation("slater overlap of orbital sets with different shapes");
    SlaterOverlap out;
    const int k = static_cast<int>(A.cols());
    if (k == 0) {
        out.value = 1.0;
        return out;
    }
    auto orthonormal = [&](const Eigen::MatrixXd& M, bool& deficient) {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
        qr.setThreshold(1e-10);
        if (qr.rank() < k)
            deficient = true;
        Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(M.rows(), k);
        return Q;
    };
    bool deficient = false;
    const Eigen::MatrixXd Qa = orthonormal(A, deficient);
    const Eigen::MatrixXd Qb = orthonormal(B, deficient);
    if (deficient) {
        out.rank_deficient = true;
        return out;
    }
    // product of principal-angle cosines, summed in log space
    const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(Qa.transpose() * Qb).singularValues();
    double log_sum = 0.0;
    for (int i = 0; i < s.size(); ++i) {
        if (s[i] <= 0.0)
            return out;
        log_sum += std::log(s[i]);
    }
    out.value = std::min(1.0, std::exp(log_sum));
    return out;
}

double slater_overlap(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    return slater_overlap_checked(A, B).value;
}

Eigen::MatrixXd continuum_ground_state(double h, int L) {
    Eigen::MatrixXd occ(2 * L, L);
    for (int k = 0; k < L; ++k)
        occ.col(k) = analytic_wavefunction(-1 - k, h, L).components;
    return occ;
}

std::vector<double> orbital_overlap_curve(double h, int L) {
    const auto spectrum = diagonalize(hopping_matrix_1d(profile_from_z(L, h * L)));
    std::vector<double> curve(L);
    for (int k = 0; k < L; ++k) {
        const int m = -1 - k;
        curve[k] = wavefunction_overlap(analytic_wavefunction(m, h, L).components,
                                        spectrum.orbitals.col(spectrum.level_index(m)));
    }
    return curve;
}

double contour_crossing(const std::vector<double>& z, const std::vector<double>& overlap,
                        double level) {
    if (z.empty() || z.size() != overlap.size())
        throw ContractViolation("contour needs matching, non-empty z and overlap lists");
    if (overlap[0] < level)
        return z[0];
    for (std::size_t i = 0; i + 1 < z.size(); ++i) {
        if (overlap[i] >= level && overlap[i + 1] < level) {
            const double t = (overlap[i] - level) / (overlap[i] - overlap[i + 1]);
            return z[i] + t * (z[i + 1] - z[i]);
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

ValidityMap validity_map(const std::vector<int>& L_list, const std::vector<double>& z_list,
                         int jobs) {
    ValidityMap map;
    const std::size_t nz = z_list.size();
    map.grid.resize(L_list.size() * nz);
    parallel_for(map.grid.size(), jobs, [&](std::size_t idx) {
        const int L = L_list[idx / nz];
        const double z = z_list[idx % nz];
        const auto profile = profile_from_z(L, z);
        const auto occ = occupied_orbitals(diagonalize(hopping_matrix_1d(profile)));
        map.grid[idx] = {L, z, slater_overlap(continuum_ground_state(profile.h, L), occ)};
    });
    for (std::size_t a = 0; a < L_list.size(); ++a) {
        std::vector<double> overlap(nz);
        for (std::size_t b = 0; b < nz; ++b)
            overlap[b] = map.grid[a * nz + b].overlap;
        map.contours.push_back({L_list[a], contour_crossing(z_list, overlap, 0.90),
                                contour_crossing(z_list, overlap, 0.95)});
    }
    return map;
}

} // namespace rainbow
