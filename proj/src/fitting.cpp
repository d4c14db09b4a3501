#include "rainbow/fitting.hpp"

#include "rainbow/continuum.hpp"
#include "rainbow/errors.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <string>

namespace rainbow {

namespace {

constexpr double pi = std::numbers::pi;

double log_prefactor(double order) { return (1.0 + 1.0 / order) / 12.0; }

// ln((e^z - 1)/z), 0 at z = 0
double log_velocity_ratio(double z) {
    if (z < 1e-8)
        return z / 2.0;
    return z > 30.0 ? z + std::log1p(-std::exp(-z)) - std::log(z) : std::log(std::expm1(z) / z);
}

} // namespace

double FitResult::coeff(const std::string& name) const {
    for (std::size_t k = 0; k < names.size(); ++k)
        if (names[k] == name)
            return coefficients[static_cast<Eigen::Index>(k)];
    throw ContractViolation("fit " + model + " has no coefficient " + name);
}

FitResult linear_lsq(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                     std::vector<std::string> names, std::string model) {
    const auto rows = design.rows(), cols = design.cols();
    if (y.size() != rows)
        throw ContractViolation("design rows and data length differ");
    if (rows < cols || cols == 0)
        throw DomainError("least squares needs at least as many data points as coefficients");
    if (names.empty())
        for (Eigen::Index k = 0; k < cols; ++k)
            names.push_back("b" + std::to_string(k));

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(design);
    const Eigen::MatrixXd R = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
    const double scale = R.diagonal().cwiseAbs().maxCoeff();
    for (Eigen::Index k = 0; k < cols; ++k)
        if (!(std::abs(R(k, k)) > 1e-12 * scale))
            throw RankDeficiencyError("design matrix is rank deficient at column " +
                                          std::to_string(k) + " (" + names[k] + ")",
                                      static_cast<int>(k));

    FitResult fit;
    fit.model = std::move(model);
    fit.names = std::move(names);
    fit.coefficients = qr.solve(y);
    const Eigen::VectorXd residual = design * fit.coefficients - y;
    fit.chi2 = residual.squaredNorm();
    fit.dof = static_cast<int>(rows - cols);

    const Eigen::MatrixXd Rinv =
        R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(cols, cols));
    const double sigma2 = fit.dof > 0 ? fit.chi2 / fit.dof : 1.0;
    fit.covariance = sigma2 * Rinv * Rinv.transpose();

    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(design).singularValues();
    fit.condition = sv[sv.size() - 1] > 0 ? sv[0] / sv[sv.size() - 1] : INFINITY;
    return fit;
}

FitResult fit_central_charge(std::span<const EntropyPoint> points, double order, Abscissa abscissa) {
    std::set<int> sizes;
    for (const auto& p : points)
        sizes.insert(p.length);
    if (sizes.size() < 3)
        throw DomainError("central-charge fit needs at least 3 distinct sizes");

    const double k = log_prefactor(order);
    Eigen::MatrixXd X(points.size(), 2);
    Eigen::VectorXd y(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        const double log_size = abscissa == Abscissa::Plain
                                    ? std::log(static_cast<double>(p.length))
                                    : log_deformed_length(p.param / p.length, p.length);
        X(i, 0) = k * log_size;
        X(i, 1) = 1.0;
        y[i] = p.entropy;
    }
    return linear_lsq(X, y, {"c", "cprime"},
                      abscissa == Abscissa::Plain ? "central_charge" : "central_charge_deformed");
}

FitResult fit_renyi_halfchain(std::span<const EntropyPoint> points, double order) {
    std::set<int> sizes;
    bool even = false, odd = false;
    for (const auto& p : points) {
        sizes.insert(p.length);
        (p.length % 2 == 0 ? even : odd) = true;
    }
    if (sizes.size() < 6)
        throw DomainError("Renyi half-chain fit needs at least 6 sizes");
    if (!(even && odd))
        throw RankDeficiencyError("oscillation column (-1)^L needs both parities of L", 2);

    Eigen::MatrixXd X(points.size(), 3);
    Eigen::VectorXd y(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double L = points[i].length;
        X(i, 0) = log_prefactor(order) * std::log(4.0 * L / pi);
        X(i, 1) = 1.0;
        X(i, 2) = (points[i].length % 2 == 0 ? 1.0 : -1.0) * std::pow(8.0 * L / pi, -1.0 / order);
        y[i] = points[i].entropy;
    }
    return linear_lsq(X, y, {"c_n", "d_n", "f_n"}, "renyi_halfchain");
}

FitResult fit_2d(std::span<const double> x, std::span<const double> s) {
    if (x.size() != s.size())
        throw ContractViolation("fit_2d needs matching abscissa and data");
    if (x.size() < 5)
        throw DomainError("2D fit needs at least 5 sizes");
    Eigen::MatrixXd X(x.size(), 3);
    Eigen::VectorXd y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        X(i, 0) = x[i];
        X(i, 1) = std::log(x[i]);
        X(i, 2) = 1.0;
        y[i] = s[i];
    }
    return linear_lsq(X, y, {"A", "B", "C"}, "entropy_2d");
}

std::optional<double> fn_analytic(int n) {
    if (n == 1)
        return -1.0;
    return std::nullopt;
}

double fn_reference(int n, const FitResult& uniform_fit) {
    if (auto f = fn_analytic(n))
        return *f;
    return uniform_fit.coeff("f_n");
}

double dn_prediction(double d0, double order, double z) {
    return d0 + log_prefactor(order) * log_velocity_ratio(z);
}

double fn_prediction(double f0, double order, double z) {
    return std::abs(f0) * std::exp(-log_velocity_ratio(z) / order);
}

} // namespace rainbow
