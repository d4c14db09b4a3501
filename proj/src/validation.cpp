#include "rainbow/validation.hpp"

#include "rainbow/continuum.hpp"
#include "rainbow/entanglement.hpp"
#include "rainbow/fitting.hpp"
#include "rainbow/lattice.hpp"
#include "rainbow/qubism.hpp"
#include "rainbow/sdrg.hpp"
#include "rainbow/spectra.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace rainbow {

namespace {

constexpr std::array<double, 4> kOrders{1.0, 2.0, 3.0, 4.0};

CheckResult make(std::string name, double measured, double tolerance, std::string detail = {}) {
    return {std::move(name), measured <= tolerance, measured, tolerance, std::move(detail)};
}

Eigen::MatrixXd ground_state(const CouplingProfile& profile) {
    return occupied_orbitals(diagonalize(hopping_matrix_1d(profile)));
}

CheckResult master_oracle() {
    double worst = 0.0;
    std::string where;
    for (int L : {2, 3, 4})
        for (double alpha : {0.01, 0.3, 1.0}) {
            const auto occ = ground_state(build_rainbow_profile(L, alpha));
            const auto amps = slater_amplitudes(occ, 2 * L);
            for (int l = 1; l < 2 * L; ++l) {
                std::vector<int> blocks[2] = {leading_block(l), {}};
                for (int i = l; i < 2 * L; ++i)
                    blocks[1].push_back(i);
                for (const auto& block : blocks) {
                    const auto exact = renyi_entropies(correlation_matrix(occ, block), kOrders);
                    const auto brute = brute_force_block_entropy(amps, block, kOrders);
                    for (std::size_t k = 0; k < kOrders.size(); ++k) {
                        const double d = std::abs(exact[k] - brute[k]);
                        if (d > worst) {
                            worst = d;
                            std::ostringstream os;
                            os << "2L=" << 2 * L << " alpha=" << alpha << " block size "
                               << block.size() << " n=" << kOrders[k];
                            where = os.str();
                        }
                    }
                }
            }
        }
    return make("correlation matrix vs brute-force entropies", worst, 1e-10, where);
}

CheckResult spectrum_invariants() {
    double worst = 0.0;
    for (double z : {0.0, 1.0, 4.0, 12.0}) {
        const auto H = hopping_matrix_1d(profile_from_z(40, z));
        const auto spec = diagonalize(H);
        const int n = spec.dim();
        const double ortho = (spec.orbitals.transpose() * spec.orbitals -
                              Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
        double pairing = 0.0;
        for (int k = 0; k < n; ++k)
            pairing = std::max(pairing, std::abs(spec.energies[k] + spec.energies[n - 1 - k]));
        worst = std::max({worst, ortho, pairing, spec.residual / spec.spectral_radius()});
    }
    return make("orthonormality, residual and particle-hole pairing", worst, 1e-10);
}

CheckResult chain_vs_dense() {
    // The dense route is forced by dropping the chain band.
    double worst = 0.0;
    for (double z : {0.0, 2.0, 6.0}) {
        auto H = hopping_matrix_1d(profile_from_z(30, z));
        const auto chain = diagonalize(H);
        H.chain_band.clear();
        const auto dense = diagonalize(H);
        worst = std::max(worst, (chain.energies - dense.energies).cwiseAbs().maxCoeff());
        worst = std::max(worst, 1.0 - slater_overlap(occupied_orbitals(chain),
                                                     occupied_orbitals(dense)));
    }
    return make("chain solver vs dense solver", worst, 1e-10);
}

CheckResult half_filling() {
    double worst = 0.0;
    for (double alpha : {0.01, 0.6, 1.0}) {
        const auto n = site_occupations(ground_state(build_rainbow_profile(25, alpha)));
        worst = std::max(worst, (n.array() - 0.5).abs().maxCoeff());
    }
    return make("site occupations at half filling", worst, 1e-10);
}

CheckResult complement_symmetry() {
    double worst = 0.0;
    const auto occ = ground_state(build_rainbow_profile(12, 0.8));
    for (int l = 1; l < 24; ++l) {
        std::vector<int> rest;
        for (int i = l; i < 24; ++i)
            rest.push_back(i);
        const auto a = renyi_entropies(correlation_matrix(occ, leading_block(l)), kOrders);
        const auto b = renyi_entropies(correlation_matrix(occ, rest), kOrders);
        for (std::size_t k = 0; k < kOrders.size(); ++k)
            worst = std::max(worst, std::abs(a[k] - b[k]));
    }
    return make("entropy of block equals entropy of complement", worst, 1e-8);
}

CheckResult sdrg_matches_rainbow() {
    int mismatches = 0;
    for (int L = 1; L <= 8; ++L)
        for (double alpha : {0.05, 0.1, 0.2}) {
            const auto profile = build_rainbow_profile(L, alpha);
            auto run = sdrg_run(profile.couplings).bonds;
            auto expected = rainbow_bonds(L).bonds;
            auto by_span = [](const Bond& a, const Bond& b) { return a.left > b.left; };
            std::sort(run.begin(), run.end(), by_span);
            std::sort(expected.begin(), expected.end(), by_span);
            if (run != expected)
                ++mismatches;
        }
    return make("SDRG on rainbow profiles reproduces the rainbow matching", mismatches, 0.0);
}

CheckResult sdrg_entropy_oracle() {
    double worst = 0.0;
    const int L = 6;
    const auto bonds = rainbow_bonds(L);
    const auto occ = bond_state_orbitals(bonds, 2 * L);
    for (int l = 1; l < 2 * L; ++l) {
        const auto block = leading_block(l);
        const double one = kOrders[0];
        const double exact = renyi_entropies(correlation_matrix(occ, block), {&one, 1})[0];
        worst = std::max(worst, std::abs(exact - sdrg_entropy(bonds, block)));
    }
    return make("bond-counting entropy vs correlation matrix of bond states", worst, 1e-12);
}

CheckResult energy_identity() {
    double worst = 0.0;
    for (int L : {10, 100, 1000})
        for (double z : {0.0, 1e-9, 0.5, 3.0, 30.0})
            for (int m : {-7, -1, 0, 4}) {
                const double h = z / L;
                const double ref = velocity_scale(z) * std::numbers::pi * (m + 0.5) / (2.0 * L);
                const double e = analytic_energy(m, h, L);
                worst = std::max(worst, std::abs(e - ref) / std::abs(ref));
            }
    return make("continuum energy equals a(z) pi (m+1/2) / 2L", worst, 1e-12);
}

CheckResult mirror_symmetry() {
    double worst = 0.0;
    for (int L : {1, 4, 9}) {
        const auto H = hopping_matrix_1d(build_rainbow_profile(L, 0.7)).entries;
        const auto P = reversal_permutation(2 * L);
        worst = std::max(worst, (P * H - H * P).cwiseAbs().maxCoeff());
    }
    for (int L : {1, 3}) {
        const auto lat = build_lattice_2d(L, 0.6);
        const auto H = hopping_matrix_2d(lat).entries;
        const int s = lat.side();
        Eigen::MatrixXd P = Eigen::MatrixXd::Zero(s * s, s * s);
        for (int ix = 0; ix < s; ++ix)
            for (int iy = 0; iy < s; ++iy)
                P(lat.index(ix, s - 1 - iy), lat.index(ix, iy)) = 1.0;
        worst = std::max(worst, (P * H * P.transpose() - H).cwiseAbs().maxCoeff());
    }
    return make("mirror symmetry of hopping matrices", worst, 0.0);
}

CheckResult fit_round_trip() {
    EntropyCurve pts;
    for (int L : {20, 40, 80, 160})
        pts.push_back({L, 0.0, 1.0, std::log(L) / 6.0 + 0.7});
    const auto fit = fit_central_charge(pts);
    const double d = std::max(std::abs(fit.coeff("c") - 1.0), std::abs(fit.coeff("cprime") - 0.7));
    return make("central-charge fit recovers its own model", d, 1e-10);
}

} // namespace

std::vector<CheckResult> run_validation_suite() {
    return {master_oracle(),        spectrum_invariants(), chain_vs_dense(),
            half_filling(),         complement_symmetry(), sdrg_matches_rainbow(),
            sdrg_entropy_oracle(),  energy_identity(),     mirror_symmetry(),
            fit_round_trip()};
}

} // namespace rainbow
