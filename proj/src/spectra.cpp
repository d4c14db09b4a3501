#include "rainbow/spectra.hpp"

#include "rainbow/errors.hpp"
#include "rainbow/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>

namespace rainbow {

namespace {

constexpr double kDegeneracySpread = 1e-12;
constexpr double kZeroModeTolerance = 1e-12;

void require_symmetric(const Eigen::MatrixXd& A) {
    if (A.rows() != A.cols())
        throw ContractViolation("hopping matrix is not square");
    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    const double asym = (A - A.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale)
        throw ContractViolation("hopping matrix is not symmetric (max asymmetry " +
                                std::to_string(asym) + ")");
}

std::vector<int> two_colouring(const Eigen::MatrixXd& A) {
    const int n = static_cast<int>(A.rows());
    std::vector<int> colour(n, -1);
    for (int start = 0; start < n; ++start) {
        if (colour[start] >= 0)
            continue;
        colour[start] = 0;
        std::queue<int> pending;
        pending.push(start);
        while (!pending.empty()) {
            const int i = pending.front();
            pending.pop();
            if (A(i, i) != 0.0)
                return {};
            for (int j = 0; j < n; ++j) {
                if (j == i || A(i, j) == 0.0)
                    continue;
                if (colour[j] < 0) {
                    colour[j] = 1 - colour[i];
                    pending.push(j);
                } else if (colour[j] == colour[i]) {
                    return {};
                }
            }
        }
    }
    return colour;
}

int dominant_index(const Eigen::Ref<const Eigen::VectorXd>& v) {
    const double top = v.cwiseAbs().maxCoeff();
    for (int i = 0; i < v.size(); ++i)
        if (std::abs(v[i]) >= top * (1.0 - 1e-12))
            return i;
    return 0;
}

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
    if (v[dominant_index(v)] < 0.0)
        v = -v;
}

// Replace the columns of V spanning a degenerate subspace with a basis that
// depends only on the projector P = V V^T: repeatedly take the site with the
// largest remaining projector weight and project its unit vector. P is kept
// factored as M M^T so each step costs O(n k).
Eigen::MatrixXd canonical_basis(const Eigen::MatrixXd& V) {
    const int n = static_cast<int>(V.rows());
    const int k = static_cast<int>(V.cols());
    Eigen::MatrixXd M = V;
    Eigen::MatrixXd basis(n, k);
    for (int c = 0; c < k; ++c) {
        Eigen::Index pivot = 0;
        M.rowwise().squaredNorm().maxCoeff(&pivot);
        Eigen::VectorXd v = M * M.row(pivot).transpose();
        v /= v.norm();
        basis.col(c) = v;
        M -= v * (v.transpose() * M);
    }
    std::vector<int> order(k);
    for (int c = 0; c < k; ++c)
        order[c] = c;
    std::vector<int> key(k);
    for (int c = 0; c < k; ++c)
        key[c] = dominant_index(basis.col(c));
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return key[a] < key[b]; });
    Eigen::MatrixXd sorted(n, k);
    for (int c = 0; c < k; ++c)
        sorted.col(c) = basis.col(order[c]);
    return sorted;
}

SpectrumResult chain_spectrum(const HoppingMatrix& H) {
    const int dim = H.dim();
    const int half = dim / 2;
    const auto& t = H.chain_band;
    std::vector<double> d(half), e(half - 1);
    for (int j = 0; j < half; ++j)
        d[j] = t[2 * j];
    for (int j = 0; j + 1 < half; ++j)
        e[j] = t[2 * j + 1];
    const auto svd = linalg::lower_bidiagonal_svd(d, e);

    SpectrumResult out;
    out.relative_accuracy = true;
    out.energies.resize(dim);
    out.orbitals = Eigen::MatrixXd::Zero(dim, dim);
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    for (int k = 0; k < half; ++k) {
        const double s = svd.values[k];
        const int below = k;           // -s, most negative first
        const int above = dim - 1 - k; // +s
        out.energies[below] = -s;
        out.energies[above] = s;
        for (int j = 0; j < half; ++j) {
            out.orbitals(2 * j, below) = svd.U(j, k) * inv_sqrt2;
            out.orbitals(2 * j + 1, below) = -svd.V(j, k) * inv_sqrt2;
            out.orbitals(2 * j, above) = svd.U(j, k) * inv_sqrt2;
            out.orbitals(2 * j + 1, above) = svd.V(j, k) * inv_sqrt2;
        }
    }
    for (int k = 0; k < dim; ++k)
        fix_sign(out.orbitals.col(k));

    double residual = 0.0;
    for (int k = 0; k < dim; ++k) {
        const auto psi = out.orbitals.col(k);
        double r2 = 0.0;
        for (int i = 0; i < dim; ++i) {
            double hpsi = 0.0;
            if (i > 0)
                hpsi += t[i - 1] * psi[i - 1];
            if (i + 1 < dim)
                hpsi += t[i] * psi[i + 1];
            const double r = hpsi - out.energies[k] * psi[i];
            r2 += r * r;
        }
        residual = std::max(residual, std::sqrt(r2));
    }
    out.residual = residual;
    out.sublattice.resize(dim);
    for (int i = 0; i < dim; ++i)
        out.sublattice[i] = i % 2;
    return out;
}

SpectrumResult dense_spectrum(const HoppingMatrix& H) {
    auto eig = linalg::symmetric_eigen(H.entries);
    SpectrumResult out;
    out.energies = std::move(eig.values);
    out.orbitals = std::move(eig.vectors);
    const int dim = H.dim();

    int start = 0;
    while (start < dim) {
        int stop = start + 1;
        while (stop < dim && out.energies[stop] - out.energies[start] < kDegeneracySpread)
            ++stop;
        if (stop - start > 1) {
            const Eigen::MatrixXd block = out.orbitals.middleCols(start, stop - start);
            out.orbitals.middleCols(start, stop - start) = canonical_basis(block);
        }
        start = stop;
    }
    for (int k = 0; k < dim; ++k)
        fix_sign(out.orbitals.col(k));

    const Eigen::MatrixXd R =
        H.entries * out.orbitals - out.orbitals * out.energies.asDiagonal();
    out.residual = dim > 0 ? R.colwise().norm().maxCoeff() : 0.0;
    out.sublattice = two_colouring(H.entries);
    return out;
}

} // namespace

double SpectrumResult::spectral_radius() const {
    if (energies.size() == 0)
        return 0.0;
    return std::max(std::abs(energies[0]), std::abs(energies[energies.size() - 1]));
}

SpectrumResult diagonalize(const HoppingMatrix& H) {
    require_symmetric(H.entries);
    const bool zero_diagonal = H.entries.diagonal().cwiseAbs().maxCoeff() == 0.0;
    SpectrumResult out = (H.is_chain() && H.dim() % 2 == 0 && zero_diagonal)
                             ? chain_spectrum(H)
                             : dense_spectrum(H);
    const double bound = 1e-10 * std::max(out.spectral_radius(), 1e-300);
    if (!(out.residual <= std::max(bound, 1e-13)))
        throw NumericError("eigen-residual " + std::to_string(out.residual) +
                           " exceeds tolerance for a " + std::to_string(H.dim()) +
                           "-site hopping matrix");
    return out;
}

Eigen::MatrixXd occupied_orbitals(const SpectrumResult& spectrum, FillingPolicy policy) {
    const int dim = spectrum.dim();
    if (dim % 2 != 0)
        throw DomainError("half filling needs an even number of sites, got " + std::to_string(dim));
    const int half = dim / 2;

    auto is_zero = [&](double E) {
        return spectrum.relative_accuracy ? E == 0.0 : std::abs(E) < kZeroModeTolerance;
    };
    std::vector<int> negative, zero;
    for (int k = 0; k < dim; ++k) {
        const double E = spectrum.energies[k];
        if (is_zero(E))
            zero.push_back(k);
        else if (E < 0.0)
            negative.push_back(k);
    }

    if (zero.empty()) {
        if (static_cast<int>(negative.size()) != half)
            throw NumericError("spectrum is not particle-hole balanced");
        return spectrum.orbitals.leftCols(half);
    }

    if (policy == FillingPolicy::Strict)
        throw NumericError(std::to_string(zero.size()) +
                           " zero modes at the Fermi level; choose an explicit filling policy");

    if (spectrum.sublattice.empty())
        throw NumericError("staggered filling needs a bipartite hopping graph");
    const int missing = half - static_cast<int>(negative.size());
    if (missing < 0 || missing > static_cast<int>(zero.size()))
        throw NumericError("zero modes cannot complete half filling");

    Eigen::MatrixXd Z(dim, zero.size());
    for (std::size_t c = 0; c < zero.size(); ++c)
        Z.col(c) = spectrum.orbitals.col(zero[c]);
    Eigen::VectorXd stagger(dim);
    for (int i = 0; i < dim; ++i)
        stagger[i] = spectrum.sublattice[i] == 0 ? 1.0 : -1.0;
    const Eigen::MatrixXd P = Z.transpose() * stagger.asDiagonal() * Z;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> split(P);
    if (missing > 0 && missing < static_cast<int>(zero.size()) &&
        split.eigenvalues()[missing] - split.eigenvalues()[missing - 1] < 1e-10)
        throw NumericError("staggered potential does not split the zero-mode subspace");

    Eigen::MatrixXd occ(dim, half);
    for (std::size_t c = 0; c < negative.size(); ++c)
        occ.col(c) = spectrum.orbitals.col(negative[c]);
    const Eigen::MatrixXd filled = Z * split.eigenvectors().leftCols(missing);
    const Eigen::MatrixXd canonical = canonical_basis(filled);
    for (int c = 0; c < missing; ++c) {
        occ.col(negative.size() + c) = canonical.col(c);
        fix_sign(occ.col(negative.size() + c));
    }
    return occ;
}

Eigen::VectorXd site_occupations(const Eigen::MatrixXd& occupied) {
    return occupied.rowwise().squaredNorm();
}

double velocity_scale(double z) {
    if (std::abs(z) < 1e-8)
        return 1.0 - 0.5 * z;
    return z / std::expm1(z);
}

FermiVelocityEstimate fermi_velocity(const SpectrumResult& spectrum, int L, double z) {
    if (spectrum.dim() < 4)
        throw DomainError("fermi velocity needs at least 4 levels");
    const int dim = spectrum.dim();
    const double gap = spectrum.energies[dim / 2] - spectrum.energies[dim / 2 - 1];
    FermiVelocityEstimate est;
    est.z = z;
    est.a_numeric = gap * 2.0 * L / std::numbers::pi;
    est.a_analytic = velocity_scale(z);
    return est;
}

double fermi_velocity_fit(const SpectrumResult& spectrum, int L, int max_m) {
    const int dim = spectrum.dim();
    if (dim < 2 * (max_m + 1))
        throw DomainError("not enough levels for the requested fit window");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (int m = -max_m - 1; m <= max_m; ++m) {
        const double x = std::numbers::pi * (m + 0.5) / (2.0 * L);
        const double y = spectrum.energies[spectrum.level_index(m)];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

} // namespace rainbow
