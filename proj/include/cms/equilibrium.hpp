#pragma once

#include "cms/potential.hpp"
#include "cms/transfer.hpp"

#include <span>
#include <vector>

namespace cms {

/// Stationary Markov equilibrium state of t*phi in log form:
///   pi_t(a)  = h_t(a) h^T_t(a)
///   P_t(ab)  = h^T_t(b) / h^T_t(a) * e^{t phi(ab) - P_G(t phi)}
/// log_P is indexed like the edges of graph.
struct StationaryMarkovMeasure {
    ShiftGraph graph;
    double t = 1.0;
    LogVector log_pi;
    std::vector<double> log_P;
};

/// Builds (pi_t, P_t) and checks the stationary Markov structure:
/// sum pi = 1, unit row sums, and pi P = pi. A row-sum defect above
/// max(10 * residual, 1e-12) throws MeasureError.
StationaryMarkovMeasure stationary_measure(const SpectralData& sd, const MarkovPotential& phi);

/// Structural defects of a measure, all absolute.
struct MeasureDefects {
    double mass = 0.0;          ///< |sum_a pi(a) - 1|
    double row_sum = 0.0;       ///< max_a |sum_b P(ab) - 1|
    double stationarity = 0.0;  ///< max_b |sum_a pi(a) P(ab) - pi(b)|
};

MeasureDefects measure_defects(const StationaryMarkovMeasure& m);

/// log mu_t([w]) = log pi(w0) + sum_i log P(w_i w_{i+1}); kNegInf if w is inadmissible.
double cylinder_log_measure(const StationaryMarkovMeasure& m, std::span<const Symbol> word);

/// Same value from the eigen-data directly:
/// log h(w0) + log h^T(wn) + sum_i (t phi(w_i w_{i+1}) - P_G(t phi)).
double cylinder_log_measure(const SpectralData& sd, const MarkovPotential& phi, std::span<const Symbol> word);

/// Entropy rate -sum_{ab} pi(a) P(ab) log P(ab), with 0 log 0 = 0.
double entropy(const StationaryMarkovMeasure& m);

/// mu(phi) = sum_{ab} pi(a) P(ab) phi(ab).
double integral_phi(const StationaryMarkovMeasure& m, const MarkovPotential& phi);

/// |h(mu_t) + t mu_t(phi) - P_G(t phi)|
double variational_defect(const StationaryMarkovMeasure& m, const MarkovPotential& phi, double log_pressure);

} // namespace cms
