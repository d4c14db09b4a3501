#pragma once

#include "rainbow/spectra.hpp"

#include <Eigen/Dense>

#include <vector>

namespace rainbow {

/// Length and temperature scales of the deformed continuum theory.
struct ContinuumParams {
    double h = 0.0;
    int L = 0;
    double tilde_L = 0.0; // (e^{hL} - 1) / h, equal to L at h = 0
    double beta = 0.0;    // 2 pi / h (infinite at h = 0)
    double T = 0.0;       // h / (2 pi)
};

ContinuumParams continuum_params(double h, int L);

/// (e^{hx} - 1) / h with the h -> 0 limit x.
double deformed_length(double h, double x);

/// ln((e^{hL} - 1) / h), finite for any hL.
double log_deformed_length(double h, double L);

/// h pi (m + 1/2) / (2 (e^{hL} - 1)).
double analytic_energy(int m, double h, int L);

struct AnalyticWavefunction {
    int m = 0;
    Eigen::VectorXd components; // over n = -(L-1/2), ..., L-1/2, unit norm
};

AnalyticWavefunction analytic_wavefunction(int m, double h, int L);

/// sign(x) (e^{h|x|} - 1) / h.
double coordinate_map(double x, double h);

/// |<a|b>| after normalizing both vectors.
double wavefunction_overlap(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// |<A|B>| of two Slater determinants given by their orbital columns.
///
/// Columns need not be orthonormal: each set is orthonormalized first, so the
/// result is |det(Qa^T Qb)|. Rank-deficient sets give 0.
struct SlaterOverlap {
    double value = 0.0;
    bool rank_deficient = false;
};

SlaterOverlap slater_overlap_checked(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);
double slater_overlap(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

/// Occupied continuum orbitals m = -1, ..., -L as columns.
Eigen::MatrixXd continuum_ground_state(double h, int L);

/// Overlap of analytic and exact orbital m for every occupied level,
/// returned in order m = -1, -2, ..., -L.
std::vector<double> orbital_overlap_curve(double h, int L);

struct ValidityPoint {
    int L;
    double z;
    double overlap;
};

struct ValidityContour {
    int L;
    double z_at_090; // NaN when the overlap never drops below the level
    double z_at_095;
};

struct ValidityMap {
    std::vector<ValidityPoint> grid; // L-major, z ascending within each L
    std::vector<ValidityContour> contours;
};

/// Slater overlap between continuum and exact ground states over a grid.
/// z_list must be ascending; points are evaluated on up to `jobs` threads.
ValidityMap validity_map(const std::vector<int>& L_list, const std::vector<double>& z_list,
                         int jobs = 1);

/// First z at which the overlap crosses `level` from above, linearly
/// interpolated; NaN if it never does.
double contour_crossing(const std::vector<double>& z, const std::vector<double>& overlap,
                        double level);

} // namespace rainbow
