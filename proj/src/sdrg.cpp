#include "rainbow/sdrg.hpp"

#include "rainbow/errors.hpp"
#include "rainbow/lattice.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace rainbow {

namespace {

constexpr double kTieTolerance = 1e-12;

struct ActiveLink {
    int left;
    int right;
    LogCoupling J;
};

LogCoupling renormalized(const LogCoupling& left, const LogCoupling& right, const LogCoupling& max) {
    return {left.log_magnitude + right.log_magnitude - max.log_magnitude,
            -left.sign * right.sign * max.sign};
}

} // namespace

double LogCoupling::value() const {
    if (sign == 0)
        return 0.0;
    return sign * std::exp(log_magnitude);
}

LogCoupling LogCoupling::from_value(double J) {
    if (J == 0.0)
        return {-std::numeric_limits<double>::infinity(), 0};
    return {std::log(std::abs(J)), J > 0 ? 1 : -1};
}

BondList sdrg_run(std::span<const double> couplings) {
    if (couplings.empty())
        throw DomainError("sdrg needs at least one link");
    const int sites = static_cast<int>(couplings.size()) + 1;
    if (sites % 2 != 0)
        throw DomainError("sdrg needs an even number of sites, got " + std::to_string(sites));

    std::vector<ActiveLink> chain;
    for (int i = 0; i + 1 < sites; ++i)
        chain.push_back({i, i + 1, LogCoupling::from_value(couplings[i])});

    BondList out;
    int step = 0;
    while (!chain.empty()) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < chain.size(); ++k)
            if (chain[k].J.log_magnitude > chain[best].J.log_magnitude)
                best = k;
        if (chain[best].J.sign == 0)
            throw NumericError("sdrg reached a chain of decoupled sites");
        for (std::size_t k = 0; k < chain.size(); ++k) {
            if (k == best)
                continue;
            if (std::abs(chain[k].J.log_magnitude - chain[best].J.log_magnitude) < kTieTolerance)
                throw NumericError("degenerate strongest coupling between links (" +
                                   std::to_string(chain[best].left) + "," +
                                   std::to_string(chain[best].right) + ") and (" +
                                   std::to_string(chain[k].left) + "," +
                                   std::to_string(chain[k].right) + ")");
        }

        const ActiveLink link = chain[best];
        out.bonds.push_back({link.left, link.right, link.J.sign});
        DecimationStep rec;
        rec.step = step++;
        rec.left = link.left;
        rec.right = link.right;
        rec.decimated = link.J;

        const bool has_left = best > 0;
        const bool has_right = best + 1 < chain.size();
        if (has_left && has_right) {
            const ActiveLink& l = chain[best - 1];
            const ActiveLink& r = chain[best + 1];
            rec.created = true;
            rec.new_left = l.left;
            rec.new_right = r.right;
            rec.neighbour_left = l.J;
            rec.neighbour_right = r.J;
            rec.effective = renormalized(l.J, r.J, link.J);
            ActiveLink merged{l.left, r.right, rec.effective};
            chain.erase(chain.begin() + static_cast<std::ptrdiff_t>(best) - 1,
                        chain.begin() + static_cast<std::ptrdiff_t>(best) + 2);
            chain.insert(chain.begin() + static_cast<std::ptrdiff_t>(best) - 1, merged);
        } else {
            // boundary decimation: the one neighbouring link simply disappears
            const auto first = has_left ? best - 1 : best;
            const auto last = has_right ? best + 2 : best + 1;
            chain.erase(chain.begin() + static_cast<std::ptrdiff_t>(first),
                        chain.begin() + static_cast<std::ptrdiff_t>(last));
        }
        out.trace.push_back(rec);
    }
    return out;
}

BondList rainbow_bonds(int L) {
    if (L < 1)
        throw DomainError("rainbow needs L >= 1");
    BondList out;
    for (int k = 1; k <= L; ++k)
        out.bonds.push_back({L - k, L + k - 1, k % 2 == 1 ? 1 : -1});
    return out;
}

Eigen::MatrixXd bond_state_orbitals(const BondList& bonds, int dim) {
    Eigen::MatrixXd occ = Eigen::MatrixXd::Zero(dim, bonds.bonds.size());
    const double w = 1.0 / std::numbers::sqrt2;
    for (std::size_t k = 0; k < bonds.bonds.size(); ++k) {
        const auto& b = bonds.bonds[k];
        if (b.left < 0 || b.right >= dim || b.left >= b.right)
            throw ContractViolation("bond outside the chain");
        occ(b.left, k) = w;
        occ(b.right, k) = b.sign * w;
    }
    return occ;
}

double sdrg_entropy(const BondList& bonds, std::span<const int> block) {
    auto inside = [&](int site) {
        for (int s : block)
            if (s == site)
                return true;
        return false;
    };
    int cut = 0;
    for (const auto& b : bonds.bonds)
        cut += inside(b.left) != inside(b.right);
    return cut * std::numbers::ln2;
}

PerturbativeOrbitals perturbative_orbitals(int L, double alpha) {
    if (L < 1)
        throw DomainError("perturbative orbitals need L >= 1");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw DomainError("alpha must lie in [0, 1]");
    const int dim = 2 * L;

    // alpha = 0 is the decoupled limit; only the central link survives
    std::vector<double> couplings(dim - 1, 0.0);
    couplings[L - 1] = 1.0;
    if (alpha > 0.0) {
        const auto profile = build_rainbow_profile(L, alpha);
        couplings = profile.couplings;
    }
    const auto H = hopping_matrix_chain(couplings);

    PerturbativeOrbitals out;
    out.orbitals = Eigen::MatrixXd::Zero(dim, L);
    for (int k = 1; k <= L; ++k) {
        const int sign = k % 2 == 1 ? 1 : -1;
        const int left = L - k, right = L + k - 1;
        auto col = out.orbitals.col(k - 1);
        col[left] = 1.0;
        col[right] = sign;
        if (k < L) { // outer neighbours
            col[left - 1] = alpha;
            col[right + 1] = sign * alpha;
        }
        if (k > 1) { // inner neighbours
            col[left + 1] = alpha;
            col[right - 1] = sign * alpha;
        }
        col.normalize();
        const Eigen::VectorXd Hpsi = H.entries * col;
        out.residuals.push_back((Hpsi - col.dot(Hpsi) * col).norm());
    }
    return out;
}

} // namespace rainbow
