#pragma once

#include "rainbow/lattice.hpp"
#include "rainbow/qubism.hpp"
#include "rainbow/spectra.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace rainbow {

inline constexpr double kOccupationClip = 1e-14;

/// C_ij = <c^dag_i c_j> restricted to a block of sites.
struct CorrelationMatrix {
    std::vector<int> block;
    Eigen::MatrixXd entries;
};

CorrelationMatrix correlation_matrix(const Eigen::MatrixXd& occupied, std::span<const int> block);

/// Eigenvalues nu_p of the block correlation matrix, descending.
std::vector<double> correlation_eigenvalues(const CorrelationMatrix& C);

/// Renyi entropy (nats) of a Gaussian state from its occupation spectrum.
/// Order 1 is the von Neumann entropy. Levels within 1e-14 of 0 or 1
/// contribute nothing.
double renyi_entropy(std::span<const double> nu, double order);

std::vector<double> renyi_entropies(const CorrelationMatrix& C, std::span<const double> orders);

/// Sites 0 .. count-1.
std::vector<int> leading_block(int count);

struct EntanglementSpectrum {
    std::vector<double> nu;  // descending
    std::vector<double> eps; // ln((1 - nu)/nu), ascending; +-inf for pinned levels
    double delta_L = 0.0;
    double f0 = 0.0;
};

/// Default number of levels nearest eps = 0 used for the spacing estimate.
inline constexpr int kSpacingWindow = 4;

/// delta_L is the mean spacing of the `window` finite levels closest to
/// eps = 0; f0 = sum_p ln(1 + e^{-eps_p}).
EntanglementSpectrum entanglement_spectrum(const CorrelationMatrix& C, int window = kSpacingWindow);

/// (c/6) ln((e^{hL} - 1)/h) + c', reducing to (c/6) ln L + c' at h = 0.
double halfchain_entropy_prediction(double h, int L, double c, double cprime);

/// (c/3) ln((beta/pi) sinh(pi L / beta)).
double thermal_cft_entropy(double beta, double L, double c);

/// One entropy sample: block length (or half-chain size), geometry
/// parameter (z for chains, alpha for the 2D lattice), Renyi order, value.
struct EntropyPoint {
    int length = 0;
    double param = 0.0;
    double order = 1.0;
    double entropy = 0.0;
};

using EntropyCurve = std::vector<EntropyPoint>;

/// Half-chain entropies of rainbow chains over an (L, z) grid.
EntropyCurve halfchain_scan(const std::vector<int>& L_list, const std::vector<double>& z_list,
                            std::span<const double> orders, int jobs = 1);

/// Entropies of the blocks [0, l) for l = 1 .. 2L-1 of one chain.
EntropyCurve boundary_block_scan(const CouplingProfile& profile, std::span<const double> orders);

/// Left half (x < 0) of the 2D lattice, one point per size and order.
EntropyCurve lattice2d_scan(const std::vector<int>& L_list, double alpha,
                            std::span<const double> orders,
                            FillingPolicy policy = FillingPolicy::Staggered, int jobs = 1);

/// Renyi entropies from the singular values of the amplitude matrix of a
/// contiguous block touching either end of the chain (N <= 14).
std::vector<double> brute_force_block_entropy(const AmplitudeTable& amps, std::span<const int> block,
                                              std::span<const double> orders);

} // namespace rainbow
