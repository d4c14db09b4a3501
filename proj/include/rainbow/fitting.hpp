#pragma once

#include "rainbow/entanglement.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rainbow {

struct FitResult {
    std::string model;
    std::vector<std::string> names;
    Eigen::VectorXd coefficients;
    double chi2 = 0.0; // unnormalized sum of squared residuals
    int dof = 0;
    Eigen::MatrixXd covariance;
    double condition = 0.0;

    double coeff(const std::string& name) const;
};

/// Least squares through a Householder QR of the design matrix. A column
/// whose R diagonal falls below 1e-12 of the largest is reported as rank
/// deficient.
FitResult linear_lsq(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                     std::vector<std::string> names = {}, std::string model = "linear");

enum class Abscissa {
    Plain,    // ln L
    Deformed, // ln((e^{hL} - 1)/h) with h = z / L taken from EntropyPoint::param
};

/// S = k_n c ln(L) + c' with k_n = (1 + 1/n)/12 (1/6 for n = 1).
/// Coefficients "c" and "cprime".
FitResult fit_central_charge(std::span<const EntropyPoint> points, double order = 1.0,
                             Abscissa abscissa = Abscissa::Plain);

/// Half-chain Renyi ansatz with K = 1:
/// S = c_n (1+1/n)/12 ln(4L/pi) + d_n + f_n (-1)^L (8L/pi)^{-1/n}.
/// Coefficients "c_n", "d_n", "f_n". Needs >= 6 sizes of both parities.
FitResult fit_renyi_halfchain(std::span<const EntropyPoint> points, double order);

/// s = A x + B ln x + C on (x, s) samples; coefficients "A", "B", "C".
FitResult fit_2d(std::span<const double> x, std::span<const double> s);

/// Closed-form oscillation amplitude; only f_1 = -1 is known in closed form.
std::optional<double> fn_analytic(int n);

/// f_n reference: the closed form when there is one, otherwise the fitted
/// f_n of the uniform chain.
double fn_reference(int n, const FitResult& uniform_fit);

/// d_n(0) + (1+1/n)/12 ln((e^z-1)/z) with c = 1.
double dn_prediction(double d0, double order, double z);

/// |f_n(0)| ((e^z-1)/z)^{-1/n}.
double fn_prediction(double f0, double order, double z);

} // namespace rainbow
