#include "cms/equilibrium.hpp"

#include "cms/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cms {

StationaryMarkovMeasure stationary_measure(const SpectralData& sd, const MarkovPotential& phi) {
    const ShiftGraph& g = phi.graph();
    StationaryMarkovMeasure m{g, sd.t, {}, {}};
    m.log_pi.resize(static_cast<std::size_t>(g.n_symbols()));
    for (std::size_t i = 0; i < m.log_pi.size(); ++i) m.log_pi[i] = sd.log_h[i] + sd.log_h_T[i];
    m.log_P.resize(g.edge_count());
    for (std::size_t idx = 0; idx < g.edge_count(); ++idx) {
        const Edge& e = g.edge(idx);
        m.log_P[idx] = sd.log_h_T[e.to - 1] - sd.log_h_T[e.from - 1] + sd.t * phi.on_edge(idx) - sd.log_pressure;
    }
    const MeasureDefects d = measure_defects(m);
    const double allowed = std::max(10.0 * sd.residual, 1e-12);
    if (d.row_sum > allowed) {
        throw MeasureError("transition rows deviate from 1 by " + std::to_string(d.row_sum) + " at t=" +
                           std::to_string(sd.t) + " (eigen residual " + std::to_string(sd.residual) + ")");
    }
    return m;
}

MeasureDefects measure_defects(const StationaryMarkovMeasure& m) {
    const ShiftGraph& g = m.graph;
    MeasureDefects d;
    double mass = 0.0;
    for (double lp : m.log_pi) mass += std::exp(lp);
    d.mass = std::abs(mass - 1.0);

    std::vector<double> inflow(m.log_pi.size(), 0.0);
    for (Symbol a = 1; a <= g.n_symbols(); ++a) {
        double row = 0.0;
        for (std::size_t idx : g.out_edge_indices(a)) {
            const double p = std::exp(m.log_P[idx]);
            row += p;
            inflow[g.edge(idx).to - 1] += std::exp(m.log_pi[a - 1]) * p;
        }
        d.row_sum = std::max(d.row_sum, std::abs(row - 1.0));
    }
    for (std::size_t b = 0; b < inflow.size(); ++b) {
        d.stationarity = std::max(d.stationarity, std::abs(inflow[b] - std::exp(m.log_pi[b])));
    }
    return d;
}

double cylinder_log_measure(const StationaryMarkovMeasure& m, std::span<const Symbol> word) {
    if (word.empty() || !is_admissible(m.graph, word)) return kNegInf;
    double acc = m.log_pi[word.front() - 1];
    for (std::size_t i = 0; i + 1 < word.size(); ++i) acc += m.log_P[*m.graph.edge_index(word[i], word[i + 1])];
    return acc;
}

double cylinder_log_measure(const SpectralData& sd, const MarkovPotential& phi, std::span<const Symbol> word) {
    const ShiftGraph& g = phi.graph();
    if (word.empty() || !is_admissible(g, word)) return kNegInf;
    double acc = sd.log_h[word.front() - 1] + sd.log_h_T[word.back() - 1];
    for (std::size_t i = 0; i + 1 < word.size(); ++i) {
        acc += sd.t * phi(word[i], word[i + 1]) - sd.log_pressure;
    }
    return acc;
}

double entropy(const StationaryMarkovMeasure& m) {
    const ShiftGraph& g = m.graph;
    double h = 0.0;
    for (std::size_t idx = 0; idx < g.edge_count(); ++idx) {
        const double lp = m.log_P[idx];
        if (is_neg_inf(lp)) continue;
        const double weight = std::exp(m.log_pi[g.edge(idx).from - 1] + lp);
        h -= weight * lp;
    }
    return std::max(h, 0.0);
}

double integral_phi(const StationaryMarkovMeasure& m, const MarkovPotential& phi) {
    const ShiftGraph& g = m.graph;
    double acc = 0.0;
    for (std::size_t idx = 0; idx < g.edge_count(); ++idx) {
        acc += std::exp(m.log_pi[g.edge(idx).from - 1] + m.log_P[idx]) * phi.on_edge(idx);
    }
    return acc;
}

double variational_defect(const StationaryMarkovMeasure& m, const MarkovPotential& phi, double log_pressure) {
    return std::abs(entropy(m) + m.t * integral_phi(m, phi) - log_pressure);
}

} // namespace cms
