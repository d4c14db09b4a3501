#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace rainbow {

inline constexpr int kMaxAmplitudeSites = 14;

/// Full many-body wavefunction over occupation bitstrings.
///
/// Configuration index: site 0 (leftmost) is the most significant bit, so the
/// index read in binary is the occupation string left to right.
struct AmplitudeTable {
    int n_sites = 0;
    int filling = 0;
    std::vector<double> amplitudes; // 2^n_sites entries

    std::uint32_t size() const { return std::uint32_t{1} << n_sites; }
    double norm_squared() const;
    int nonzero_count(double threshold = 1e-12) const;
    std::string bitstring(std::uint32_t config) const;
};

/// Slater determinant expansion of the occupied orbitals (rows = sites).
/// Each amplitude is the determinant of the occupied-site rows, sites taken
/// in increasing order.
AmplitudeTable slater_amplitudes(const Eigen::MatrixXd& occupied, int n_sites);

/// Row-major signed pixel grid, side = 2^{N/2}.
struct QubismImage {
    int side = 0;
    std::vector<double> pixels;

    double at(int row, int col) const { return pixels[static_cast<std::size_t>(row) * side + col]; }
    int nonzero_count(double threshold = 0.0) const;
};

/// Cell of each configuration: sites (2i, 2i+1) pick the quadrant at depth i,
/// coarsest first, with 00 -> top-left, 01 -> top-right, 10 -> bottom-left,
/// 11 -> bottom-right.
struct QubismCell {
    int row;
    int col;
};

QubismCell qubism_cell(std::uint32_t config, int n_sites);

QubismImage render(const AmplitudeTable& amps);

/// Rank of the 2^l x 2^{N-l} amplitude matrix (first l sites vs the rest),
/// singular values counted above 1e-10 of the largest.
int schmidt_rank(const AmplitudeTable& amps, int l);

/// Schmidt coefficients squared for the cut after the first `cut` sites.
Eigen::VectorXd schmidt_spectrum(const AmplitudeTable& amps, int cut);

/// Binary P6 image: red = round(255 |a| / max|a|) for a > 0, green likewise
/// for a < 0, blue = 0.
std::string ppm_bytes(const QubismImage& image);
void write_ppm(const QubismImage& image, const std::string& path);

/// Number of pixels with any non-zero colour channel in a P6 buffer.
int lit_pixel_count(const std::string& ppm);

} // namespace rainbow
