#pragma once

#include "cms/log_domain.hpp"
#include "cms/potential.hpp"

#include <span>
#include <vector>

namespace cms {

/// Per-symbol log-domain vector; entry i belongs to symbol i + 1.
using LogVector = std::vector<double>;

/// (L_{t phi} f)(x0) = sum_{a -> x0} e^{t phi(a x0)} f(a), with f = e^{log_f}.
LogVector apply_transfer_log(const MarkovPotential& phi, double t, std::span<const double> log_f);

/// (L^T_{t phi} f)(x0) = sum_{x0 -> a} e^{t phi(x0 a)} f(a).
LogVector apply_transpose_log(const MarkovPotential& phi, double t, std::span<const double> log_f);

struct EigenOptions {
    /// Stop once successive normalized iterates agree to tol * max(1, |entry|).
    double tol = 1e-12;
    /// 0 selects 100 * n_symbols.
    int max_iter = 0;
    /// When power iteration hits max_iter (nearly periodic operators, e.g. a
    /// maximizing cycle longer than 1 at large t), solve instead by shifted
    /// inverse iteration on the matrix rescaled by the max-plus sub-actions.
    /// Dense, O(n^3) per step.
    bool inverse_fallback = true;
};

/// Leading eigen-triple of L_{t phi} and its transpose.
///
/// Gauge: sum_a h(a) h^T(a) = 1, and the remaining scalar freedom
/// (h, h^T) -> (c h, h^T / c) is fixed by sum_a h(a)^2 = sum_a h^T(a)^2.
struct SpectralData {
    double t = 1.0;
    /// log of the Perron eigenvalue, i.e. P_G(t phi).
    double log_pressure = 0.0;
    LogVector log_h;
    LogVector log_h_T;
    /// max over both eigen-equations of sup_x |(L log_h)(x) - log_pressure - log_h(x)|.
    double residual = 0.0;
    /// Power-iteration sweeps, or inverse-iteration steps when `inverse_iteration` is set.
    int iterations = 0;
    bool inverse_iteration = false;
};

/// Log-domain power iteration on L_{t phi} and L^T_{t phi}.
///
/// Throws ConvergenceError when the iteration cap is hit, and also up front
/// for periodic graphs, where the normalized iterates cycle instead of
/// converging (a Cesaro-averaged iteration is needed there).
SpectralData leading_eigen(const MarkovPotential& phi, double t, const EigenOptions& opts = {});

/// Apply the gauge described on SpectralData to an arbitrary eigenvector pair.
void fix_gauge(LogVector& log_h, LogVector& log_h_T);

/// sup_x |apply(log_f)(x) - log_lambda - log_f(x)| for the forward operator.
double transfer_residual(const MarkovPotential& phi, double t, double log_lambda, std::span<const double> log_f);
/// Same for the transpose operator.
double transpose_residual(const MarkovPotential& phi, double t, double log_lambda, std::span<const double> log_f);

struct PeriodicOrbitSum {
    int n = 0;
    /// log Z_n(t phi, a); kNegInf when no closed path of length n passes through a.
    double log_z = kNegInf;
    /// (1/n) log Z_n(t phi, a)
    double log_z_over_n = kNegInf;
};

/// Exact periodic-orbit sums Z_n(t phi, a) = sum over closed paths a -> ... -> a
/// of length n of e^{t S_n phi}, for n = 1..n_max, by forward dynamic programming.
std::vector<PeriodicOrbitSum> gurevich_from_cycles(const MarkovPotential& phi, double t, Symbol a, int n_max);

struct PressureCurve {
    std::vector<double> t;
    std::vector<double> pressure_over_t;
    /// h(mu_t) per grid point; empty until filled by the equilibrium module.
    std::vector<double> entropy;
    std::vector<SpectralData> spectra;
    /// Diagnostic only: P_G(t phi)/t non-increasing along the grid (within 1e-12).
    bool monotone_decreasing = true;
};

PressureCurve pressure_curve(const MarkovPotential& phi, std::span<const double> t_grid, const EigenOptions& opts = {});

/// {start, start * ratio, ..., start * ratio^(count-1)}
std::vector<double> geometric_grid(double start, double ratio, int count);

/// Default zero-temperature grid {1, 2, 4, ..., 2^10}.
std::vector<double> default_t_grid();

} // namespace cms
