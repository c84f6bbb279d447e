#include "cms/potential.hpp"

#include "cms/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cms {

MarkovPotential::MarkovPotential(ShiftGraph graph, std::vector<double> edge_values, std::optional<TailModel> tail)
    : graph_(std::move(graph)), values_(std::move(edge_values)), tail_(tail) {
    if (values_.size() != graph_.edge_count()) {
        throw ShiftError("potential has " + std::to_string(values_.size()) + " values for " +
                         std::to_string(graph_.edge_count()) + " edges");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            const Edge& e = graph_.edge(i);
            throw ShiftError("potential is not finite on edge " + std::to_string(e.from) + "->" +
                             std::to_string(e.to));
        }
    }
}

MarkovPotential MarkovPotential::from_function(ShiftGraph graph, const std::function<double(Symbol, Symbol)>& phi,
                                               std::optional<TailModel> tail) {
    std::vector<double> values;
    values.reserve(graph.edge_count());
    for (const Edge& e : graph.edges()) values.push_back(phi(e.from, e.to));
    return MarkovPotential(std::move(graph), std::move(values), tail);
}

double MarkovPotential::operator()(Symbol a, Symbol b) const {
    const auto idx = graph_.edge_index(a, b);
    return idx ? values_[*idx] : kNegInf;
}

MarkovPotential linear_potential(const ShiftGraph& graph, double c0, double c1) {
    std::optional<TailModel> tail;
    const int n = graph.n_symbols();
    switch (graph.family()) {
    case ShiftFamily::FullShift:
        // Finite alphabet: nothing beyond the truncation.
        tail = TailModel{0.0, false};
        break;
    case ShiftFamily::RenewalShift:
        // For a > N the only successor is a-1, so sup(phi|[a]) = c0 + c1 (2a - 1):
        // a geometric series with ratio e^{2 c1}.
        if (c1 < 0.0) {
            const double first = std::exp(c0 + c1 * (2.0 * (n + 1) - 1.0));
            tail = TailModel{first / (1.0 - std::exp(2.0 * c1)), true};
        } else {
            tail = TailModel{std::numeric_limits<double>::infinity(), false};
        }
        break;
    case ShiftFamily::ExplicitEdges:
        break;
    }
    return MarkovPotential::from_function(
        graph, [c0, c1](Symbol a, Symbol b) { return c0 + c1 * static_cast<double>(a + b); }, tail);
}

double first_variation(const MarkovPotential& phi) {
    const ShiftGraph& g = phi.graph();
    double v1 = 0.0;
    for (Symbol a = 1; a <= g.n_symbols(); ++a) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t idx : g.out_edge_indices(a)) {
            lo = std::min(lo, phi.on_edge(idx));
            hi = std::max(hi, phi.on_edge(idx));
        }
        v1 = std::max(v1, hi - lo);
    }
    return v1;
}

PotentialReport summability_report(const MarkovPotential& phi) {
    const ShiftGraph& g = phi.graph();
    PotentialReport report;
    report.v1 = first_variation(phi);
    report.symbol_sups.reserve(static_cast<std::size_t>(g.n_symbols()));
    for (Symbol a = 1; a <= g.n_symbols(); ++a) {
        double hi = kNegInf;
        for (std::size_t idx : g.out_edge_indices(a)) hi = std::max(hi, phi.on_edge(idx));
        report.symbol_sups.push_back(hi);
        report.truncated_sum += std::exp(hi);
    }
    report.summability_sum = report.truncated_sum;
    if (const auto& tail = phi.tail()) {
        report.has_tail_information = true;
        report.summability_sum += tail->sum_bound;
        report.coercive = tail->coercive;
    }
    return report;
}

MarkovPotential transpose_potential(const MarkovPotential& phi) {
    ShiftGraph tg = transpose_graph(phi.graph());
    std::vector<double> values;
    values.reserve(tg.edge_count());
    for (const Edge& e : tg.edges()) values.push_back(phi(e.to, e.from));
    return MarkovPotential(std::move(tg), std::move(values));
}

MarkovPotential normalize_to_zero_max(const MarkovPotential& phi, double alpha) {
    std::vector<double> values(phi.edge_values().begin(), phi.edge_values().end());
    for (double& v : values) v -= alpha;
    std::optional<TailModel> tail = phi.tail();
    if (tail) tail->sum_bound *= std::exp(-alpha);
    return MarkovPotential(phi.graph(), std::move(values), tail);
}

} // namespace cms
