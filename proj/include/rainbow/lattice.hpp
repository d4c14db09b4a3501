#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace rainbow {

/// Open 1D chain of 2L sites labelled n = -(L-1/2), ..., L-1/2.
///
/// couplings[i] is the hopping on the link between sites i and i+1 (0-based
/// storage index, i = n + L - 1/2). For rainbow profiles the central link
/// couplings[L-1] is 1 and the entry k links away from it is alpha^(2k-1).
struct CouplingProfile {
    int L = 0;
    double alpha = 1.0;
    double h = 0.0;
    double z = 0.0;
    std::vector<double> couplings;

    double smallest_coupling = 1.0;
    // Set when some coupling is below 1e-280 (close to the subnormal range).
    bool underflow_warning = false;

    int sites() const { return 2 * L; }
};

/// Half-odd-integer label of storage index i in a chain with half-length L.
inline double site_label(int index, int L) { return index - L + 0.5; }

/// Storage index of the half-odd-integer label n.
inline int site_index(double label, int L) { return static_cast<int>(label + L - 0.5); }

CouplingProfile build_rainbow_profile(int L, double alpha);
CouplingProfile profile_from_z(int L, double z);

/// Real symmetric single-particle hopping matrix, element -J/2 on every link.
///
/// Matrices built from an open chain also keep their off-diagonal band in
/// `chain_band` so spectra can use the bipartite chain solver.
struct HoppingMatrix {
    Eigen::MatrixXd entries;
    std::vector<double> chain_band;

    int dim() const { return static_cast<int>(entries.rows()); }
    bool is_chain() const { return !chain_band.empty(); }
};

HoppingMatrix hopping_matrix_chain(std::span<const double> couplings);
HoppingMatrix hopping_matrix_1d(const CouplingProfile& profile);

struct Site2D {
    double x;
    double y;
};

struct Link2D {
    int a;
    int b;
    double amplitude;
};

/// 2L x 2L square lattice with x, y in {+-1/2, ..., +-(L-1/2)}.
///
/// Sites are stored row-major in (x, y): index = ix * 2L + iy with
/// x = ix - L + 1/2. Links are emitted site by site in that order, first the
/// vertical link to (x, y+1), then the horizontal link to (x+1, y).
struct Lattice2D {
    int L = 0;
    double alpha = 1.0;
    std::vector<Site2D> sites;
    std::vector<Link2D> links;

    int side() const { return 2 * L; }
    int index(int ix, int iy) const { return ix * side() + iy; }
};

Lattice2D build_lattice_2d(int L, double alpha);
HoppingMatrix hopping_matrix_2d(const Lattice2D& lattice);

/// Permutation matrix for i -> dim-1-i.
Eigen::MatrixXd reversal_permutation(int dim);

} // namespace rainbow
