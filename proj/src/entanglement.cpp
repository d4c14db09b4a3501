#include "rainbow/entanglement.hpp"

#include "rainbow/continuum.hpp"
#include "rainbow/errors.hpp"
#include "rainbow/linalg.hpp"
#include "rainbow/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

namespace rainbow {

namespace {

bool pinned(double nu) { return nu <= kOccupationClip || nu >= 1.0 - kOccupationClip; }

void check_order(double order) {
    if (!(order >= 1.0))
        throw DomainError("Renyi order must be >= 1, got " + std::to_string(order));
}

// ln(1 + e^{-x}) for any x
double softplus_neg(double x) {
    return x >= 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

std::vector<double> entropies_of(std::span<const double> nu, std::span<const double> orders) {
    std::vector<double> out;
    out.reserve(orders.size());
    for (double n : orders)
        out.push_back(renyi_entropy(nu, n));
    return out;
}

} // namespace

CorrelationMatrix correlation_matrix(const Eigen::MatrixXd& occupied, std::span<const int> block) {
    if (block.empty())
        throw DomainError("correlation matrix of an empty block");
    const int n = static_cast<int>(occupied.rows());
    std::vector<char> seen(n, 0);
    for (int i : block) {
        if (i < 0 || i >= n)
            throw DomainError("block site " + std::to_string(i) + " outside 0.." +
                              std::to_string(n - 1));
        if (seen[i]++)
            throw DomainError("block site " + std::to_string(i) + " listed twice");
    }
    CorrelationMatrix C;
    C.block.assign(block.begin(), block.end());
    Eigen::MatrixXd rows(block.size(), occupied.cols());
    for (std::size_t a = 0; a < block.size(); ++a)
        rows.row(a) = occupied.row(block[a]);
    C.entries = rows * rows.transpose();
    return C;
}

std::vector<double> correlation_eigenvalues(const CorrelationMatrix& C) {
    const Eigen::VectorXd values = linalg::symmetric_eigenvalues(C.entries);
    std::vector<double> nu(values.data(), values.data() + values.size());
    std::reverse(nu.begin(), nu.end());
    return nu;
}

double renyi_entropy(std::span<const double> nu, double order) {
    check_order(order);
    double S = 0.0;
    if (order == 1.0) {
        for (double v : nu) {
            if (pinned(v))
                continue;
            S -= v * std::log(v) + (1.0 - v) * std::log1p(-v);
        }
        return S;
    }
    for (double v : nu) {
        if (pinned(v))
            continue;
        S += std::log(std::pow(v, order) + std::pow(1.0 - v, order));
    }
    return S / (1.0 - order);
}

std::vector<double> renyi_entropies(const CorrelationMatrix& C, std::span<const double> orders) {
    for (double n : orders)
        check_order(n);
    const auto nu = correlation_eigenvalues(C);
    return entropies_of(nu, orders);
}

std::vector<int> leading_block(int count) {
    std::vector<int> block(count);
    std::iota(block.begin(), block.end(), 0);
    return block;
}

EntanglementSpectrum entanglement_spectrum(const CorrelationMatrix& C, int window) {
    if (window < 2)
        throw DomainError("spacing window needs at least 2 levels");
    EntanglementSpectrum es;
    es.nu = correlation_eigenvalues(C);
    es.eps.reserve(es.nu.size());
    std::vector<double> finite;
    for (double v : es.nu) {
        if (v <= kOccupationClip) {
            es.eps.push_back(std::numeric_limits<double>::infinity());
        } else if (v >= 1.0 - kOccupationClip) {
            es.eps.push_back(-std::numeric_limits<double>::infinity());
        } else {
            const double e = std::log((1.0 - v) / v);
            es.eps.push_back(e);
            finite.push_back(e);
            es.f0 += softplus_neg(e);
        }
    }
    std::sort(es.eps.begin(), es.eps.end());

    std::sort(finite.begin(), finite.end(),
              [](double a, double b) { return std::abs(a) < std::abs(b); });
    const std::size_t used = std::min<std::size_t>(finite.size(), window);
    if (used < 2) {
        es.delta_L = std::numeric_limits<double>::quiet_NaN();
    } else {
        const auto [lo, hi] = std::minmax_element(finite.begin(), finite.begin() + used);
        es.delta_L = (*hi - *lo) / static_cast<double>(used - 1);
    }
    return es;
}

double halfchain_entropy_prediction(double h, int L, double c, double cprime) {
    if (!(h >= 0.0))
        throw DomainError("h must be non-negative");
    return c / 6.0 * log_deformed_length(h, L) + cprime;
}

double thermal_cft_entropy(double beta, double L, double c) {
    if (!(beta > 0.0))
        throw DomainError("inverse temperature must be positive");
    const double y = std::numbers::pi * L / beta;
    // ln sinh(y), stable for large y
    const double log_sinh = y > 20.0 ? y + std::log1p(-std::exp(-2.0 * y)) - std::numbers::ln2
                                     : std::log(std::sinh(y));
    return c / 3.0 * (std::log(beta / std::numbers::pi) + log_sinh);
}

EntropyCurve halfchain_scan(const std::vector<int>& L_list, const std::vector<double>& z_list,
                            std::span<const double> orders, int jobs) {
    for (double n : orders)
        check_order(n);
    const std::size_t nz = z_list.size();
    std::vector<std::vector<double>> values(L_list.size() * nz);
    parallel_for(values.size(), jobs, [&](std::size_t idx) {
        const int L = L_list[idx / nz];
        const auto profile = profile_from_z(L, z_list[idx % nz]);
        const auto occ = occupied_orbitals(diagonalize(hopping_matrix_1d(profile)));
        const auto block = leading_block(L);
        values[idx] = renyi_entropies(correlation_matrix(occ, block), orders);
    });
    EntropyCurve curve;
    for (std::size_t idx = 0; idx < values.size(); ++idx)
        for (std::size_t k = 0; k < orders.size(); ++k)
            curve.push_back({L_list[idx / nz], z_list[idx % nz], orders[k], values[idx][k]});
    return curve;
}

EntropyCurve boundary_block_scan(const CouplingProfile& profile, std::span<const double> orders) {
    for (double n : orders)
        check_order(n);
    const auto occ = occupied_orbitals(diagonalize(hopping_matrix_1d(profile)));
    EntropyCurve curve;
    for (int l = 1; l < profile.sites(); ++l) {
        const auto block = leading_block(l);
        const auto S = renyi_entropies(correlation_matrix(occ, block), orders);
        for (std::size_t k = 0; k < orders.size(); ++k)
            curve.push_back({l, profile.z, orders[k], S[k]});
    }
    return curve;
}

EntropyCurve lattice2d_scan(const std::vector<int>& L_list, double alpha,
                            std::span<const double> orders, FillingPolicy policy, int jobs) {
    for (double n : orders)
        check_order(n);
    std::vector<std::vector<double>> values(L_list.size());
    parallel_for(values.size(), jobs, [&](std::size_t idx) {
        const auto lattice = build_lattice_2d(L_list[idx], alpha);
        const auto occ = occupied_orbitals(diagonalize(hopping_matrix_2d(lattice)), policy);
        // x < 0 is the first L columns, i.e. the first L * 2L sites in row-major order
        const auto block = leading_block(lattice.L * lattice.side());
        values[idx] = renyi_entropies(correlation_matrix(occ, block), orders);
    });
    EntropyCurve curve;
    for (std::size_t idx = 0; idx < values.size(); ++idx)
        for (std::size_t k = 0; k < orders.size(); ++k)
            curve.push_back({L_list[idx], alpha, orders[k], values[idx][k]});
    return curve;
}

std::vector<double> brute_force_block_entropy(const AmplitudeTable& amps, std::span<const int> block,
                                              std::span<const double> orders) {
    for (double n : orders)
        check_order(n);
    const int N = amps.n_sites;
    if (block.empty() || static_cast<int>(block.size()) >= N)
        throw DomainError("block must be a proper, non-empty subset of the sites");
    std::vector<int> sorted(block.begin(), block.end());
    std::sort(sorted.begin(), sorted.end());
    const int l = static_cast<int>(sorted.size());
    for (int k = 1; k < l; ++k)
        if (sorted[k] != sorted[k - 1] + 1)
            throw DomainError("brute-force entropy needs a contiguous block");
    int cut = 0;
    if (sorted.front() == 0)
        cut = l;
    else if (sorted.back() == N - 1)
        cut = N - l;
    else
        throw DomainError("brute-force entropy needs a block touching a chain end");

    const Eigen::VectorXd p = schmidt_spectrum(amps, cut);
    std::vector<double> out;
    for (double n : orders) {
        double S = 0.0;
        if (n == 1.0) {
            for (int i = 0; i < p.size(); ++i)
                if (p[i] > 0.0)
                    S -= p[i] * std::log(p[i]);
        } else {
            double trace = 0.0;
            for (int i = 0; i < p.size(); ++i)
                trace += std::pow(p[i], n);
            S = std::log(trace) / (1.0 - n);
        }
        out.push_back(S);
    }
    return out;
}

} // namespace rainbow
