#include "rainbow/lattice.hpp"

#include "rainbow/errors.hpp"

#include <cmath>
#include <string>

namespace rainbow {

namespace {

constexpr double kUnderflowThreshold = 1e-280;

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw DomainError("alpha must lie in (0, 1], got " + std::to_string(alpha));
}

void check_half_length(int L) {
    if (L < 1)
        throw DomainError("half-length L must be positive, got " + std::to_string(L));
}

// Couplings are generated as exp(-h (2k-1) / 2) so that large z never goes
// through a power of a number below one.
CouplingProfile make_profile(int L, double alpha, double h) {
    CouplingProfile p;
    p.L = L;
    p.alpha = alpha;
    p.h = h;
    p.z = h * L;
    p.couplings.assign(2 * L - 1, 1.0);
    for (int k = 1; k < L; ++k) {
        const double J = std::exp(-0.5 * h * (2 * k - 1));
        p.couplings[L - 1 + k] = J;
        p.couplings[L - 1 - k] = J;
    }
    p.smallest_coupling = p.couplings.front();
    for (double J : p.couplings)
        p.smallest_coupling = std::min(p.smallest_coupling, J);
    p.underflow_warning = p.smallest_coupling < kUnderflowThreshold;
    return p;
}

} // namespace

CouplingProfile build_rainbow_profile(int L, double alpha) {
    check_half_length(L);
    check_alpha(alpha);
    return make_profile(L, alpha, -2.0 * std::log(alpha));
}

CouplingProfile profile_from_z(int L, double z) {
    check_half_length(L);
    if (!(z >= 0.0))
        throw DomainError("z must be non-negative, got " + std::to_string(z));
    const double h = z / L;
    return make_profile(L, std::exp(-0.5 * h), h);
}

HoppingMatrix hopping_matrix_chain(std::span<const double> couplings) {
    const int dim = static_cast<int>(couplings.size()) + 1;
    HoppingMatrix H;
    H.entries = Eigen::MatrixXd::Zero(dim, dim);
    H.chain_band.resize(couplings.size());
    for (int i = 0; i + 1 < dim; ++i) {
        const double t = -0.5 * couplings[i];
        H.entries(i, i + 1) = t;
        H.entries(i + 1, i) = t;
        H.chain_band[i] = t;
    }
    return H;
}

HoppingMatrix hopping_matrix_1d(const CouplingProfile& profile) {
    return hopping_matrix_chain(profile.couplings);
}

Lattice2D build_lattice_2d(int L, double alpha) {
    check_half_length(L);
    check_alpha(alpha);

    Lattice2D lat;
    lat.L = L;
    lat.alpha = alpha;
    const int side = 2 * L;
    const double log_alpha = std::log(alpha);
    // alpha^|x| with alpha^0 == 1 exactly
    auto amplitude = [&](double x) { return x == 0.0 ? 1.0 : std::exp(std::abs(x) * log_alpha); };

    lat.sites.reserve(side * side);
    for (int ix = 0; ix < side; ++ix)
        for (int iy = 0; iy < side; ++iy)
            lat.sites.push_back({site_label(ix, L), site_label(iy, L)});

    lat.links.reserve(2 * side * (side - 1));
    for (int ix = 0; ix < side; ++ix) {
        const double x = site_label(ix, L);
        for (int iy = 0; iy < side; ++iy) {
            if (iy + 1 < side)
                lat.links.push_back({lat.index(ix, iy), lat.index(ix, iy + 1), amplitude(x)});
            if (ix + 1 < side)
                lat.links.push_back({lat.index(ix, iy), lat.index(ix + 1, iy), amplitude(x + 0.5)});
        }
    }
    return lat;
}

HoppingMatrix hopping_matrix_2d(const Lattice2D& lattice) {
    const int dim = static_cast<int>(lattice.sites.size());
    HoppingMatrix H;
    H.entries = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto& link : lattice.links) {
        H.entries(link.a, link.b) = -0.5 * link.amplitude;
        H.entries(link.b, link.a) = -0.5 * link.amplitude;
    }
    return H;
}

Eigen::MatrixXd reversal_permutation(int dim) {
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i)
        P(i, dim - 1 - i) = 1.0;
    return P;
}

} // namespace rainbow
