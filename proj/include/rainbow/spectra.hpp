#pragma once

#include "rainbow/lattice.hpp"

#include <Eigen/Dense>

#include <vector>

namespace rainbow {

/// Single-particle eigensystem of a hopping matrix.
///
/// energies ascend; column k of `orbitals` is the unit eigenvector of
/// energies[k]. Level index relative to the Fermi point is m = k - dim/2, so
/// m = 0 is the first level above zero energy and m = -1 the first below.
struct SpectrumResult {
    Eigen::VectorXd energies;
    Eigen::MatrixXd orbitals;
    double residual = 0.0;
    // Chain spectra resolve every level to high relative accuracy, even when
    // energies are many orders of magnitude below the bandwidth.
    bool relative_accuracy = false;
    // Two-colouring of the hopping graph (0/1 per site); empty when the graph
    // is not bipartite.
    std::vector<int> sublattice;

    int dim() const { return static_cast<int>(energies.size()); }
    double spectral_radius() const;
    /// Column index of level m counted from the Fermi point.
    int level_index(int m) const { return dim() / 2 + m; }
};

/// Chains of even length go through a bidiagonal SVD of the sublattice
/// block (energies come in exact +-sigma pairs); everything else through a
/// dense symmetric eigensolver. Degenerate clusters (spread < 1e-12) of the
/// dense route are re-orthogonalized into a basis fixed by the subspace alone
/// and ordered by the index of each vector's largest component. Every
/// orbital's largest-magnitude component (the first one on ties within 1e-12)
/// is made positive.
SpectrumResult diagonalize(const HoppingMatrix& H);

/// What to do when the spectrum has levels at zero energy.
enum class FillingPolicy {
    Strict,    // refuse: half filling is ambiguous
    Staggered, // resolve with an infinitesimal staggered potential
};

/// Negative-energy orbitals at half filling, dim x dim/2.
Eigen::MatrixXd occupied_orbitals(const SpectrumResult& spectrum,
                                  FillingPolicy policy = FillingPolicy::Strict);

/// <n_i> = sum_k |psi^k_i|^2.
Eigen::VectorXd site_occupations(const Eigen::MatrixXd& occupied);

/// z / (e^z - 1), equal to 1 at z = 0.
double velocity_scale(double z);

struct FermiVelocityEstimate {
    double z = 0.0;
    double a_numeric = 0.0;
    double a_analytic = 0.0;
};

/// Gap across the Fermi point in units of pi / (2L).
FermiVelocityEstimate fermi_velocity(const SpectrumResult& spectrum, int L, double z);

/// Slope of E_m against pi (m + 1/2) / (2L) over |m + 1/2| <= max_m + 1/2.
double fermi_velocity_fit(const SpectrumResult& spectrum, int L, int max_m = 4);

} // namespace rainbow
