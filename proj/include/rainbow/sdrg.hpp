#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace rainbow {

/// Two-site orbital (e_left + sign * e_right) / sqrt(2), sites as storage
/// indices with left < right. sign = +1 is the bonding flavour.
struct Bond {
    int left = 0;
    int right = 0;
    int sign = 1;

    friend bool operator==(const Bond&, const Bond&) = default;
};

/// Signed coupling stored as sign * exp(log_magnitude) so that products of
/// many small hoppings never underflow.
struct LogCoupling {
    double log_magnitude = 0.0;
    int sign = 1;

    double value() const;
    static LogCoupling from_value(double J);
};

/// One decimation: the strongest link (left, right) becomes a bond; when it
/// had neighbours on both sides they get linked by -J_L J_R / J_max.
struct DecimationStep {
    int step = 0;
    int left = 0;
    int right = 0;
    LogCoupling decimated;
    bool created = false;
    int new_left = -1;
    int new_right = -1;
    LogCoupling neighbour_left;
    LogCoupling neighbour_right;
    LogCoupling effective;
};

struct BondList {
    std::vector<Bond> bonds;
    std::vector<DecimationStep> trace;
};

/// Strong-disorder RG on an open chain with couplings[i] on link (i, i+1).
/// Throws when the two strongest links agree to 1e-12 (relative).
BondList sdrg_run(std::span<const double> couplings);

/// Concentric bonds k = 1..L joining -(k-1/2) and k-1/2, innermost first,
/// signs alternating from + at the centre.
BondList rainbow_bonds(int L);

/// One orbital per bond, (e_i + sign e_j) / sqrt(2).
Eigen::MatrixXd bond_state_orbitals(const BondList& bonds, int dim);

/// (number of bonds cut by the block) * ln 2.
double sdrg_entropy(const BondList& bonds, std::span<const int> block);

/// First-order orbitals of the strongly deformed chain: bond k plus
/// alpha-weighted amplitude on the neighbouring sites, normalized. residuals[k]
/// is |H psi - <psi|H|psi> psi| against the exact hopping matrix.
struct PerturbativeOrbitals {
    Eigen::MatrixXd orbitals;
    std::vector<double> residuals;
};

PerturbativeOrbitals perturbative_orbitals(int L, double alpha);

} // namespace rainbow
