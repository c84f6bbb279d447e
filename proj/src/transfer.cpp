#include "cms/transfer.hpp"

#include "cms/ergodic_opt.hpp"
#include "cms/errors.hpp"
#include "cms/log_domain.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <string>

namespace cms {

namespace {

enum class Direction { Transfer, Transpose };

// Both operators are one log-sum-exp per symbol over its in-edges (transfer)
// or out-edges (transpose). kNegInf entries of log_f are absorbed.
LogVector apply_log(const MarkovPotential& phi, double t, std::span<const double> log_f, Direction dir) {
    const ShiftGraph& g = phi.graph();
    const auto n = static_cast<std::size_t>(g.n_symbols());
    if (log_f.size() != n) {
        throw ShiftError("log vector has " + std::to_string(log_f.size()) + " entries for " + std::to_string(n) +
                         " symbols");
    }
    LogVector out(n);
    std::vector<double> terms;
    for (Symbol x = 1; x <= g.n_symbols(); ++x) {
        const auto nbrs = dir == Direction::Transfer ? g.predecessors(x) : g.successors(x);
        const auto idxs = dir == Direction::Transfer ? g.in_edge_indices(x) : g.out_edge_indices(x);
        terms.clear();
        for (std::size_t k = 0; k < nbrs.size(); ++k) {
            terms.push_back(t * phi.on_edge(idxs[k]) + log_f[nbrs[k] - 1]);
        }
        out[x - 1] = log_sum_exp(terms);
    }
    return out;
}

double max_entry(std::span<const double> v) { return *std::max_element(v.begin(), v.end()); }

double scaled_distance(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(a[i])));
    }
    return d;
}

struct PowerResult {
    double log_lambda;
    LogVector log_v;
    int iterations;
};

PowerResult power_iterate(const MarkovPotential& phi, double t, Direction dir, double tol, int max_iter) {
    const auto n = static_cast<std::size_t>(phi.n_symbols());
    LogVector v(n, 0.0);
    LogVector prev2;
    double last_diff = std::numeric_limits<double>::infinity();
    for (int iter = 1; iter <= max_iter; ++iter) {
        LogVector w = apply_log(phi, t, v, dir);
        double inc = 0.0;
        for (std::size_t i = 0; i < n; ++i) inc += w[i] - v[i];
        inc /= static_cast<double>(n);
        const double shift = max_entry(w);
        for (double& x : w) x -= shift;
        last_diff = scaled_distance(w, v);
        if (last_diff <= tol) return {inc, std::move(w), iter};
        prev2 = std::exchange(v, std::move(w));
    }
    const bool two_cycle = !prev2.empty() && scaled_distance(v, prev2) <= tol;
    throw ConvergenceError(std::string(dir == Direction::Transfer ? "transfer" : "transpose") +
                               " power iteration did not converge at t=" + std::to_string(t) +
                               (two_cycle ? " (period-2 oscillation; use Cesaro damping)" : ""),
                           last_diff, max_iter);
}

// Solves a x = b by Gaussian elimination with partial pivoting. Returns
// false on an exactly singular pivot.
bool solve_dense(std::vector<std::vector<double>>& a, std::vector<double>& b, std::vector<double>& x) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        if (a[c][c] == 0.0) return false;
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r][c] / a[c][c];
            if (f == 0.0) continue;
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t k = i + 1; k < n; ++k) acc -= a[i][k] * x[k];
        x[i] = acc / a[i][i];
    }
    return true;
}

// Perron pair of the operator in direction dir, computed on the rescaled matrix
//   Q(x, y) = exp(t (phi - alpha) + s(y) - s(x)),  y a neighbour of x,
// where s = t * (tropical eigenvector), so 0 <= Q <= 1 with a 1 in every row and
// nothing overflows at any t. Noda iteration: inverse iteration shifted by the
// upper Collatz-Wielandt bound, convergent regardless of the spectral gap.
struct NodaResult {
    double log_lambda;
    LogVector log_v;
    int iterations;
};

NodaResult noda_iterate(const MarkovPotential& phi, double t, Direction dir, double alpha,
                        std::span<const double> tropical, double tol) {
    const ShiftGraph& g = phi.graph();
    const auto n = static_cast<std::size_t>(g.n_symbols());
    std::vector<std::vector<double>> q(n, std::vector<double>(n, 0.0));
    for (Symbol x = 1; x <= g.n_symbols(); ++x) {
        const auto nbrs = dir == Direction::Transfer ? g.predecessors(x) : g.successors(x);
        const auto idxs = dir == Direction::Transfer ? g.in_edge_indices(x) : g.out_edge_indices(x);
        for (std::size_t k = 0; k < nbrs.size(); ++k) {
            q[x - 1][nbrs[k] - 1] =
                std::exp(t * (phi.on_edge(idxs[k]) - alpha + tropical[nbrs[k] - 1] - tropical[x - 1]));
        }
    }
    std::vector<double> v(n, 1.0), qv(n), z;
    double lo = 0.0, hi = 0.0;
    constexpr int kMaxIter = 200;
    for (int iter = 1; iter <= kMaxIter; ++iter) {
        lo = std::numeric_limits<double>::infinity();
        hi = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += q[i][j] * v[j];
            qv[i] = acc;
            lo = std::min(lo, acc / v[i]);
            hi = std::max(hi, acc / v[i]);
        }
        if (hi - lo <= tol * hi) {
            LogVector log_v(n);
            for (std::size_t i = 0; i < n; ++i) log_v[i] = std::log(v[i]) + t * tropical[i];
            return {std::log(0.5 * (lo + hi)) + t * alpha, std::move(log_v), iter};
        }
        auto m = q;
        for (std::size_t i = 0; i < n; ++i) {
            for (double& e : m[i]) e = -e;
            m[i][i] += hi;
        }
        std::vector<double> rhs = v;
        if (!solve_dense(m, rhs, z)) break;
        const double top = *std::max_element(z.begin(), z.end());
        bool positive = top > 0.0;
        for (double& e : z) {
            e /= top;
            positive = positive && e > 0.0;
        }
        if (!positive) break;
        v = z;
    }
    throw ConvergenceError(std::string(dir == Direction::Transfer ? "transfer" : "transpose") +
                               " shifted inverse iteration did not converge at t=" + std::to_string(t),
                           (hi - lo) / hi, kMaxIter);
}

double residual_of(const MarkovPotential& phi, double t, double log_lambda, std::span<const double> log_f,
                   Direction dir) {
    const LogVector image = apply_log(phi, t, log_f, dir);
    double r = 0.0;
    for (std::size_t i = 0; i < image.size(); ++i) r = std::max(r, std::abs(image[i] - log_lambda - log_f[i]));
    return r;
}

} // namespace

LogVector apply_transfer_log(const MarkovPotential& phi, double t, std::span<const double> log_f) {
    return apply_log(phi, t, log_f, Direction::Transfer);
}

LogVector apply_transpose_log(const MarkovPotential& phi, double t, std::span<const double> log_f) {
    return apply_log(phi, t, log_f, Direction::Transpose);
}

double transfer_residual(const MarkovPotential& phi, double t, double log_lambda, std::span<const double> log_f) {
    return residual_of(phi, t, log_lambda, log_f, Direction::Transfer);
}

double transpose_residual(const MarkovPotential& phi, double t, double log_lambda, std::span<const double> log_f) {
    return residual_of(phi, t, log_lambda, log_f, Direction::Transpose);
}

void fix_gauge(LogVector& log_h, LogVector& log_h_T) {
    const std::size_t n = log_h.size();
    std::vector<double> buf(n);
    for (std::size_t i = 0; i < n; ++i) buf[i] = log_h[i] + log_h_T[i];
    const double log_mass = log_sum_exp(buf);
    for (std::size_t i = 0; i < n; ++i) buf[i] = 2.0 * log_h[i];
    const double log_sq_h = log_sum_exp(buf);
    for (std::size_t i = 0; i < n; ++i) buf[i] = 2.0 * log_h_T[i];
    const double log_sq_hT = log_sum_exp(buf);
    // shift_h + shift_hT = -log_mass; 2 shift_h + log_sq_h = 2 shift_hT + log_sq_hT
    const double half_diff = 0.25 * (log_sq_hT - log_sq_h);
    const double shift_h = -0.5 * log_mass + half_diff;
    const double shift_hT = -0.5 * log_mass - half_diff;
    for (double& x : log_h) x += shift_h;
    for (double& x : log_h_T) x += shift_hT;
}

SpectralData leading_eigen(const MarkovPotential& phi, double t, const EigenOptions& opts) {
    const ShiftGraph& g = phi.graph();
    if (!is_topologically_transitive(g)) {
        throw ShiftError("leading_eigen requires a strongly connected graph");
    }
    if (const int period = graph_period(g); period > 1) {
        throw ConvergenceError("graph has period " + std::to_string(period) +
                                   "; normalized power iterates oscillate (use Cesaro damping)",
                               std::numeric_limits<double>::infinity(), 0);
    }
    const int max_iter = opts.max_iter > 0 ? opts.max_iter : 100 * g.n_symbols();
    SpectralData sd;
    sd.t = t;
    try {
        PowerResult fwd = power_iterate(phi, t, Direction::Transfer, opts.tol, max_iter);
        PowerResult bwd = power_iterate(phi, t, Direction::Transpose, opts.tol, max_iter);
        sd.log_pressure = fwd.log_lambda;
        sd.log_h = std::move(fwd.log_v);
        sd.log_h_T = std::move(bwd.log_v);
        sd.iterations = std::max(fwd.iterations, bwd.iterations);
    } catch (const ConvergenceError&) {
        if (!opts.inverse_fallback) throw;
        const double alpha = maximizing_value(phi).alpha;
        NodaResult fwd = noda_iterate(phi, t, Direction::Transfer, alpha, forward_subaction(phi, alpha), opts.tol);
        NodaResult bwd = noda_iterate(phi, t, Direction::Transpose, alpha, backward_subaction(phi, alpha), opts.tol);
        sd.log_pressure = fwd.log_lambda;
        sd.log_h = std::move(fwd.log_v);
        sd.log_h_T = std::move(bwd.log_v);
        sd.iterations = std::max(fwd.iterations, bwd.iterations);
        sd.inverse_iteration = true;
    }
    fix_gauge(sd.log_h, sd.log_h_T);
    sd.residual = std::max(transfer_residual(phi, t, sd.log_pressure, sd.log_h),
                           transpose_residual(phi, t, sd.log_pressure, sd.log_h_T));
    return sd;
}

std::vector<PeriodicOrbitSum> gurevich_from_cycles(const MarkovPotential& phi, double t, Symbol a, int n_max) {
    const ShiftGraph& g = phi.graph();
    if (!g.contains(a)) throw ShiftError("symbol " + std::to_string(a) + " outside alphabet");
    LogVector mass(static_cast<std::size_t>(g.n_symbols()), kNegInf);
    mass[a - 1] = 0.0;
    std::vector<PeriodicOrbitSum> out;
    out.reserve(static_cast<std::size_t>(std::max(n_max, 0)));
    for (int n = 1; n <= n_max; ++n) {
        mass = apply_log(phi, t, mass, Direction::Transfer);
        const double log_z = mass[a - 1];
        out.push_back({n, log_z, is_neg_inf(log_z) ? kNegInf : log_z / n});
    }
    return out;
}

PressureCurve pressure_curve(const MarkovPotential& phi, std::span<const double> t_grid, const EigenOptions& opts) {
    std::vector<std::future<SpectralData>> jobs;
    jobs.reserve(t_grid.size());
    for (double t : t_grid) {
        jobs.push_back(std::async(std::launch::async, [&phi, t, &opts] { return leading_eigen(phi, t, opts); }));
    }
    PressureCurve curve;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        SpectralData sd = jobs[i].get();
        curve.t.push_back(t_grid[i]);
        curve.pressure_over_t.push_back(sd.log_pressure / t_grid[i]);
        curve.spectra.push_back(std::move(sd));
    }
    for (std::size_t i = 1; i < curve.pressure_over_t.size(); ++i) {
        if (curve.pressure_over_t[i] > curve.pressure_over_t[i - 1] + 1e-12) curve.monotone_decreasing = false;
    }
    return curve;
}

std::vector<double> geometric_grid(double start, double ratio, int count) {
    std::vector<double> grid;
    double t = start;
    for (int i = 0; i < count; ++i, t *= ratio) grid.push_back(t);
    return grid;
}

std::vector<double> default_t_grid() { return geometric_grid(1.0, 2.0, 11); }

} // namespace cms
