// Fixtures, random generators and brute-force oracles shared by the test suites.
#pragma once

#include "cms/potential.hpp"
#include "cms/shift.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <vector>

namespace fixtures {

using namespace cms;

inline MarkovPotential f0() { return linear_potential(build_shift(ShiftSpec::full_shift(2)), 0.0, 0.0); }

inline MarkovPotential f1() { return linear_potential(build_shift(ShiftSpec::full_shift(2)), 2.0, -1.0); }

/// Raw renewal potential -(a+b)/2; its maximizing value is -1 on the loop at 1.
inline MarkovPotential f2_raw(int n) { return linear_potential(build_shift(ShiftSpec::renewal_shift(n)), 0.0, -0.5); }

inline MarkovPotential f2(int n) { return normalize_to_zero_max(f2_raw(n), -1.0); }

/// Random graph on n symbols containing a Hamiltonian cycle (so it is strongly
/// connected) plus extra edges with probability p, and a self-loop at 1 when
/// `aperiodic` is set.
inline ShiftGraph random_graph(std::mt19937& rng, int n, double p, bool aperiodic = true) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 1);
    std::shuffle(order.begin(), order.end(), rng);
    std::set<Edge> edges;
    for (int i = 0; i < n; ++i) edges.insert({order[i], order[(i + 1) % n]});
    if (aperiodic) edges.insert({1, 1});
    std::bernoulli_distribution coin(p);
    for (int a = 1; a <= n; ++a) {
        for (int b = 1; b <= n; ++b) {
            if (coin(rng)) edges.insert({a, b});
        }
    }
    return ShiftGraph(n, {edges.begin(), edges.end()});
}

/// Graph where every symbol has an in- and out-edge but connectivity is left to chance.
inline ShiftGraph random_loose_graph(std::mt19937& rng, int n, double p) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 1);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::set<Edge> edges;
    for (int a = 1; a <= n; ++a) edges.insert({a, perm[a - 1]});
    std::bernoulli_distribution coin(p);
    for (int a = 1; a <= n; ++a) {
        for (int b = 1; b <= n; ++b) {
            if (coin(rng)) edges.insert({a, b});
        }
    }
    return ShiftGraph(n, {edges.begin(), edges.end()});
}

inline MarkovPotential random_potential(std::mt19937& rng, const ShiftGraph& g, double lo = -2.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> values(g.edge_count());
    for (double& v : values) v = u(rng);
    return MarkovPotential(g, values);
}

/// Dense 0/1 adjacency, 0-based.
inline std::vector<std::vector<int>> adjacency(const ShiftGraph& g) {
    const int n = g.n_symbols();
    std::vector<std::vector<int>> a(n, std::vector<int>(n, 0));
    for (const Edge& e : g.edges()) a[e.from - 1][e.to - 1] = 1;
    return a;
}

/// Warshall transitive closure.
inline std::vector<std::vector<int>> reachability(const ShiftGraph& g) {
    auto r = adjacency(g);
    const int n = g.n_symbols();
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (r[i][k] && r[k][j]) r[i][j] = 1;
    return r;
}

/// Every simple cycle, each listed once starting from its smallest symbol.
inline std::vector<Word> simple_cycles(const ShiftGraph& g) {
    std::vector<Word> out;
    const int n = g.n_symbols();
    const auto adj = adjacency(g);
    Word path;
    std::vector<bool> used(n + 1, false);
    std::function<void(int, int)> dfs = [&](int start, int v) {
        for (int w = start; w <= n; ++w) {
            if (!adj[v - 1][w - 1]) continue;
            if (w == start) {
                out.push_back(path);
            } else if (!used[w]) {
                used[w] = true;
                path.push_back(w);
                dfs(start, w);
                path.pop_back();
                used[w] = false;
            }
        }
    };
    for (int s = 1; s <= n; ++s) {
        path = {s};
        used.assign(n + 1, false);
        used[s] = true;
        dfs(s, s);
    }
    return out;
}

inline double cycle_mean(const MarkovPotential& phi, const Word& c) {
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) s += phi(c[i], c[(i + 1) % c.size()]);
    return s / static_cast<double>(c.size());
}

/// All admissible words of the given length, in lexicographic order.
inline std::vector<Word> admissible_words(const ShiftGraph& g, std::size_t length) {
    std::vector<Word> out;
    Word w;
    std::function<void()> rec = [&]() {
        if (w.size() == length) {
            out.push_back(w);
            return;
        }
        if (w.empty()) {
            for (int a = 1; a <= g.n_symbols(); ++a) {
                w.push_back(a);
                rec();
                w.pop_back();
            }
        } else {
            for (Symbol b : g.successors(w.back())) {
                w.push_back(b);
                rec();
                w.pop_back();
            }
        }
    };
    rec();
    return out;
}

/// log Z_n(t phi, a) by enumerating every closed path a -> ... -> a of length n.
inline double brute_log_orbit_sum(const MarkovPotential& phi, double t, Symbol a, int n) {
    double z = 0.0;
    Word w{a};
    std::function<void(double)> rec = [&](double s) {
        if (static_cast<int>(w.size()) == n) {
            if (phi.graph().has_edge(w.back(), a)) z += std::exp(t * (s + phi(w.back(), a)));
            return;
        }
        for (Symbol b : phi.graph().successors(w.back())) {
            const double step = phi(w.back(), b);
            w.push_back(b);
            rec(s + step);
            w.pop_back();
        }
    };
    rec(0.0);
    return std::log(z);
}

} // namespace fixtures
