#include "cms/ergodic_opt.hpp"

#include "cms/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <string>

namespace cms {

namespace {

constexpr int kEnumerationLimit = 12;

bool mean_ties(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

double cycle_sum(const MarkovPotential& phi, const Word& cycle) {
    double s = 0.0;
    for (std::size_t i = 0; i < cycle.size(); ++i) s += phi(cycle[i], cycle[(i + 1) % cycle.size()]);
    return s;
}

struct CycleChoice {
    bool found = false;
    double mean = kNegInf;
    Word cycle;

    void offer(double m, const Word& c) {
        if (!found || (m > mean && !mean_ties(m, mean))) {
            found = true;
            mean = m;
            cycle = c;
            return;
        }
        if (mean_ties(m, mean) && (c.size() < cycle.size() || (c.size() == cycle.size() && c < cycle))) {
            cycle = c;
        }
    }
};

MaxCycleCert enumerate_cycles(const MarkovPotential& phi) {
    const ShiftGraph& g = phi.graph();
    const int n = g.n_symbols();
    CycleChoice best;
    Word path;
    std::vector<bool> on_path(static_cast<std::size_t>(n) + 1, false);

    // Simple cycles whose smallest symbol is `start`, each found exactly once.
    std::function<void(Symbol, Symbol, double)> extend = [&](Symbol start, Symbol a, double weight) {
        const auto succ = g.successors(a);
        const auto idxs = g.out_edge_indices(a);
        for (std::size_t k = 0; k < succ.size(); ++k) {
            const Symbol b = succ[k];
            const double w = weight + phi.on_edge(idxs[k]);
            if (b == start) {
                best.offer(w / static_cast<double>(path.size()), path);
            } else if (b > start && !on_path[b]) {
                on_path[b] = true;
                path.push_back(b);
                extend(start, b, w);
                path.pop_back();
                on_path[b] = false;
            }
        }
    };
    for (Symbol s = 1; s <= n; ++s) {
        path.assign(1, s);
        on_path[s] = true;
        extend(s, s, 0.0);
        on_path[s] = false;
    }
    return {cycle_sum(phi, best.cycle) / static_cast<double>(best.cycle.size()), best.cycle};
}

using DenseMatrix = std::vector<std::vector<double>>;

// Max weight over paths of length >= 1 under phi - shift (Floyd-Warshall).
// Requires no positive cycles, i.e. shift >= maximizing value.
DenseMatrix max_path_weights(const MarkovPotential& phi, double shift) {
    const ShiftGraph& g = phi.graph();
    const auto n = static_cast<std::size_t>(g.n_symbols());
    DenseMatrix m(n, std::vector<double>(n, kNegInf));
    for (std::size_t idx = 0; idx < g.edge_count(); ++idx) {
        const Edge& e = g.edge(idx);
        m[e.from - 1][e.to - 1] = phi.on_edge(idx) - shift;
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            if (is_neg_inf(m[i][k])) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (is_neg_inf(m[k][j])) continue;
                m[i][j] = std::max(m[i][j], m[i][k] + m[k][j]);
            }
        }
    return m;
}

double karp_mean(const MarkovPotential& phi) {
    const ShiftGraph& g = phi.graph();
    const auto n = static_cast<std::size_t>(g.n_symbols());
    // walks[k][v]: heaviest walk with exactly k edges ending at v (any start).
    DenseMatrix walks(n + 1, std::vector<double>(n, kNegInf));
    std::fill(walks[0].begin(), walks[0].end(), 0.0);
    for (std::size_t k = 1; k <= n; ++k) {
        for (std::size_t idx = 0; idx < g.edge_count(); ++idx) {
            const Edge& e = g.edge(idx);
            const double prev = walks[k - 1][e.from - 1];
            if (!is_neg_inf(prev)) walks[k][e.to - 1] = std::max(walks[k][e.to - 1], prev + phi.on_edge(idx));
        }
    }
    double best = kNegInf;
    for (std::size_t v = 0; v < n; ++v) {
        if (is_neg_inf(walks[n][v])) continue;
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < n; ++k) {
            if (is_neg_inf(walks[k][v])) continue;
            worst = std::min(worst, (walks[n][v] - walks[k][v]) / static_cast<double>(n - k));
        }
        best = std::max(best, worst);
    }
    return best;
}

// Shortest, then lexicographically smallest, cycle inside the edge subset.
Word shortest_cycle(const ShiftGraph& g, const std::vector<bool>& edge_on) {
    const int n = g.n_symbols();
    Word best;
    for (Symbol s = 1; s <= n; ++s) {
        // Distance to s using only symbols >= s, so s is the cycle minimum.
        std::vector<int> dist(static_cast<std::size_t>(n) + 1, -1);
        std::queue<Symbol> queue;
        dist[s] = 0;
        queue.push(s);
        while (!queue.empty()) {
            const Symbol b = queue.front();
            queue.pop();
            const auto preds = g.predecessors(b);
            const auto idxs = g.in_edge_indices(b);
            for (std::size_t k = 0; k < preds.size(); ++k) {
                const Symbol a = preds[k];
                if (a < s || !edge_on[idxs[k]] || dist[a] >= 0) continue;
                dist[a] = dist[b] + 1;
                queue.push(a);
            }
        }
        int length = -1;
        {
            const auto succ = g.successors(s);
            const auto idxs = g.out_edge_indices(s);
            for (std::size_t k = 0; k < succ.size(); ++k) {
                if (succ[k] < s || !edge_on[idxs[k]] || dist[succ[k]] < 0) continue;
                const int len = dist[succ[k]] + 1;
                if (length < 0 || len < length) length = len;
            }
        }
        if (length < 0 || (!best.empty() && static_cast<std::size_t>(length) > best.size())) continue;
        Word cycle{s};
        Symbol at = s;
        for (int remaining = length - 1; remaining > 0; --remaining) {
            const auto succ = g.successors(at);
            const auto idxs = g.out_edge_indices(at);
            for (std::size_t k = 0; k < succ.size(); ++k) {
                if (succ[k] >= s && edge_on[idxs[k]] && dist[succ[k]] == remaining) {
                    at = succ[k];
                    break;
                }
            }
            cycle.push_back(at);
        }
        if (best.empty() || cycle.size() < best.size() || (cycle.size() == best.size() && cycle < best)) {
            best = std::move(cycle);
        }
    }
    return best;
}

MaxCycleCert karp_certificate(const MarkovPotential& phi) {
    const ShiftGraph& g = phi.graph();
    const double lambda = karp_mean(phi);
    const DenseMatrix m = max_path_weights(phi, lambda);
    const double tol = 1e-9 * std::max(1.0, std::abs(lambda));
    std::vector<bool> critical(g.edge_count(), false);
    for (std::size_t idx = 0; idx < g.edge_count(); ++idx) {
        const Edge& e = g.edge(idx);
        const double back = e.from == e.to ? 0.0 : m[e.to - 1][e.from - 1];
        critical[idx] = !is_neg_inf(back) && phi.on_edge(idx) - lambda + back >= -tol;
    }
    Word cycle = shortest_cycle(g, critical);
    if (cycle.empty()) throw std::runtime_error("no critical cycle found for mean " + std::to_string(lambda));
    return {cycle_sum(phi, cycle) / static_cast<double>(cycle.size()), std::move(cycle)};
}

enum class Side { Forward, Backward };

// One max-plus Bellman sweep, without normalization.
LogVector bellman(const MarkovPotential& phi, std::span<const double> v, double alpha, Side side) {
    const ShiftGraph& g = phi.graph();
    LogVector out(v.size(), kNegInf);
    for (Symbol x = 1; x <= g.n_symbols(); ++x) {
        const auto nbrs = side == Side::Forward ? g.predecessors(x) : g.successors(x);
        const auto idxs = side == Side::Forward ? g.in_edge_indices(x) : g.out_edge_indices(x);
        double best = kNegInf;
        for (std::size_t k = 0; k < nbrs.size(); ++k) {
            best = std::max(best, phi.on_edge(idxs[k]) + v[nbrs[k] - 1] - alpha);
        }
        out[x - 1] = best;
    }
    return out;
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

struct SweepOutcome {
    bool converged = false;
    LogVector v;
    double last_shift = 0.0;
    double last_diff = 0.0;
};

SweepOutcome iterate(const MarkovPotential& phi, LogVector v, double alpha, Side side, double tol, int max_iter) {
    SweepOutcome out;
    for (int iter = 0; iter < max_iter; ++iter) {
        LogVector w = bellman(phi, v, alpha, side);
        const double shift = *std::max_element(w.begin(), w.end());
        for (double& x : w) x -= shift;
        out.last_shift = shift;
        out.last_diff = sup_distance(w, v);
        v = std::move(w);
        if (out.last_diff <= tol) {
            out.converged = true;
            break;
        }
    }
    out.v = std::move(v);
    return out;
}

// Max over critical nodes c of the Kleene-star column (forward) or row (backward).
LogVector kleene_seed(const MarkovPotential& phi, double alpha, Side side) {
    const auto n = static_cast<std::size_t>(phi.n_symbols());
    const DenseMatrix m = max_path_weights(phi, alpha);
    const double tol = 1e-9 * std::max(1.0, std::abs(alpha));
    LogVector v(n, kNegInf);
    for (std::size_t c = 0; c < n; ++c) {
        if (m[c][c] < -tol) continue;
        for (std::size_t x = 0; x < n; ++x) {
            const double w = x == c ? std::max(0.0, m[c][c]) : (side == Side::Forward ? m[c][x] : m[x][c]);
            v[x] = std::max(v[x], w);
        }
    }
    const double top = *std::max_element(v.begin(), v.end());
    for (double& x : v) x -= top;
    return v;
}

LogVector subaction(const MarkovPotential& phi, double alpha, const SubActionOptions& opts, Side side) {
    const auto n = static_cast<std::size_t>(phi.n_symbols());
    const int max_iter = opts.max_iter > 0 ? opts.max_iter : 1000 * phi.n_symbols();
    const char* name = side == Side::Forward ? "forward" : "backward";
    SweepOutcome run = iterate(phi, LogVector(n, 0.0), alpha, side, opts.tol, max_iter);
    if (!run.converged) {
        const LogVector seed = kleene_seed(phi, alpha, side);
        if (std::none_of(seed.begin(), seed.end(), [](double x) { return std::isinf(x); })) {
            run = iterate(phi, seed, alpha, side, opts.tol, max_iter);
        }
    }
    if (!run.converged) {
        throw ConvergenceError(std::string(name) + " max-plus value iteration did not settle (sweep difference " +
                                   std::to_string(run.last_diff) + "); alpha may not be the maximizing value",
                               run.last_diff, max_iter);
    }
    if (std::abs(run.last_shift) > 1e-9 * std::max(1.0, std::abs(alpha))) {
        throw ConvergenceError(std::string(name) + " sub-action: per-sweep growth " + std::to_string(run.last_shift) +
                                   " != 0; alpha=" + std::to_string(alpha) + " is not the maximizing value",
                               std::abs(run.last_shift), max_iter);
    }
    return run.v;
}

double calibration_residual(const MarkovPotential& phi, std::span<const double> v, double alpha, Side side) {
    const LogVector image = bellman(phi, v, alpha, side);
    return sup_distance(image, v);
}

// Tarjan's strongly connected components restricted to enabled edges.
std::vector<int> components(const ShiftGraph& g, const std::vector<bool>& edge_on) {
    const auto n = static_cast<std::size_t>(g.n_symbols());
    std::vector<int> index(n + 1, -1), low(n + 1, 0), comp(n + 1, -1);
    std::vector<bool> on_stack(n + 1, false);
    std::vector<Symbol> stack;
    int counter = 0;
    int n_comp = 0;
    std::function<void(Symbol)> visit = [&](Symbol a) {
        index[a] = low[a] = counter++;
        stack.push_back(a);
        on_stack[a] = true;
        const auto succ = g.successors(a);
        const auto idxs = g.out_edge_indices(a);
        for (std::size_t k = 0; k < succ.size(); ++k) {
            if (!edge_on[idxs[k]]) continue;
            const Symbol b = succ[k];
            if (index[b] < 0) {
                visit(b);
                low[a] = std::min(low[a], low[b]);
            } else if (on_stack[b]) {
                low[a] = std::min(low[a], index[b]);
            }
        }
        if (low[a] == index[a]) {
            Symbol b;
            do {
                b = stack.back();
                stack.pop_back();
                on_stack[b] = false;
                comp[b] = n_comp;
            } while (b != a);
            ++n_comp;
        }
    };
    for (Symbol a = 1; a <= g.n_symbols(); ++a) {
        if (index[a] < 0) visit(a);
    }
    return comp;
}

} // namespace

MaxCycleCert maximizing_value(const MarkovPotential& phi, CycleMethod method) {
    if (method == CycleMethod::Auto) {
        method = phi.n_symbols() <= kEnumerationLimit ? CycleMethod::Enumerate : CycleMethod::Karp;
    }
    return method == CycleMethod::Enumerate ? enumerate_cycles(phi) : karp_certificate(phi);
}

LogVector forward_subaction(const MarkovPotential& phi, double alpha, const SubActionOptions& opts) {
    return subaction(phi, alpha, opts, Side::Forward);
}

LogVector backward_subaction(const MarkovPotential& phi, double alpha, const SubActionOptions& opts) {
    return subaction(phi, alpha, opts, Side::Backward);
}

double forward_calibration_residual(const MarkovPotential& phi, std::span<const double> v, double alpha) {
    return calibration_residual(phi, v, alpha, Side::Forward);
}

double backward_calibration_residual(const MarkovPotential& phi, std::span<const double> v_T, double alpha) {
    return calibration_residual(phi, v_T, alpha, Side::Backward);
}

SubActionPair calibrated_pair(const MarkovPotential& phi, const SubActionOptions& opts) {
    MaxCycleCert cert = maximizing_value(phi);
    SubActionPair pair;
    pair.alpha = cert.alpha;
    pair.maximizing_cycle = std::move(cert.cycle);
    pair.V = forward_subaction(phi, pair.alpha, opts);
    pair.V_T = backward_subaction(phi, pair.alpha, opts);
    double top = kNegInf;
    for (std::size_t i = 0; i < pair.V.size(); ++i) top = std::max(top, pair.V[i] + pair.V_T[i]);
    for (double& x : pair.V) x -= 0.5 * top;
    for (double& x : pair.V_T) x -= 0.5 * top;
    const auto defects = edge_defects(phi, pair);
    for (std::size_t idx = 0; idx < defects.size(); ++idx) {
        if (std::abs(defects[idx]) <= 1e-9) pair.omega_edges.push_back(phi.graph().edge(idx));
    }
    return pair;
}

std::vector<double> edge_defects(const MarkovPotential& phi, const SubActionPair& pair) {
    const ShiftGraph& g = phi.graph();
    std::vector<double> out(g.edge_count());
    for (std::size_t idx = 0; idx < g.edge_count(); ++idx) {
        const Edge& e = g.edge(idx);
        out[idx] = phi.on_edge(idx) + pair.V[e.from - 1] - pair.V[e.to - 1] - pair.alpha;
    }
    return out;
}

double spread(std::span<const double> v) {
    if (v.empty()) return 0.0;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
}

ZeroTempSubAction subaction_zero_temp(std::span<const SpectralData> spectra) {
    if (spectra.empty()) throw std::invalid_argument("subaction_zero_temp needs a nonempty grid");
    ZeroTempSubAction out;
    LogVector prev;
    for (const SpectralData& sd : spectra) {
        LogVector v(sd.log_h.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = sd.log_h[i] / sd.t;
        if (!prev.empty()) {
            std::vector<double> diff(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) diff[i] = v[i] - prev[i];
            out.cauchy.push_back(spread(diff));
        }
        prev = std::move(v);
    }
    const SpectralData& last = spectra.back();
    out.t_max = last.t;
    out.V = std::move(prev);
    out.V_T.resize(last.log_h_T.size());
    for (std::size_t i = 0; i < out.V_T.size(); ++i) out.V_T[i] = last.log_h_T[i] / last.t;
    if (out.cauchy.size() >= 2) {
        const double tail = out.cauchy.back();
        const double before = out.cauchy[out.cauchy.size() - 2];
        out.cauchy_decreasing = tail <= before + 1e-12;
    }
    return out;
}

ZeroTempSubAction subaction_zero_temp(const MarkovPotential& phi, std::span<const double> t_grid,
                                      const EigenOptions& opts) {
    const PressureCurve curve = pressure_curve(phi, t_grid, opts);
    return subaction_zero_temp(curve.spectra);
}

NonWandering nonwandering(const MarkovPotential& phi, const SubActionPair& pair, double tol) {
    const ShiftGraph& g = phi.graph();
    const auto defects = edge_defects(phi, pair);
    std::vector<bool> on(g.edge_count(), false);
    NonWandering out;
    for (std::size_t idx = 0; idx < g.edge_count(); ++idx) {
        if (std::abs(defects[idx]) <= tol) {
            on[idx] = true;
            out.zero_defect_edges.push_back(g.edge(idx));
        }
    }
    const auto comp = components(g, on);
    std::vector<int> comp_edges(static_cast<std::size_t>(g.n_symbols()) + 1, 0);
    for (std::size_t idx = 0; idx < g.edge_count(); ++idx) {
        const Edge& e = g.edge(idx);
        if (on[idx] && comp[e.from] == comp[e.to]) {
            out.recurrent_edges.push_back(e);
            ++comp_edges[comp[e.from]];
        }
    }
    for (Symbol a = 1; a <= g.n_symbols(); ++a) {
        if (comp_edges[comp[a]] > 0) out.recurrent_symbols.push_back(a);
    }
    if (out.recurrent_edges.empty()) {
        throw std::runtime_error("no cycle among zero-defect edges; sub-action is not calibrated");
    }
    return out;
}

} // namespace cms
