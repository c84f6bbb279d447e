#include "cms/experiment.hpp"

#include "cms/bilateral.hpp"
#include "cms/equilibrium.hpp"
#include "cms/ergodic_opt.hpp"
#include "cms/errors.hpp"
#include "cms/ldp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace cms {

namespace {

std::string strip_comment(const std::string& line) {
    const auto hash = line.find('#');
    return hash == std::string::npos ? line : line.substr(0, hash);
}

template <typename T>
T parse_value(const std::string& token, const std::string& source, int line, const char* what) {
    std::istringstream in(token);
    T value{};
    in >> value;
    if (!in || !in.eof()) throw ParseError(source, line, std::string("expected ") + what + ", got '" + token + "'");
    return value;
}

std::vector<std::string> tokens_of(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::string& header) : out_(path) {
        if (!out_) throw std::runtime_error("cannot write " + path.string());
        out_ << header << '\n';
    }

    template <typename... Cells>
    void row(const Cells&... cells) {
        bool first = true;
        ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
        out_ << '\n';
    }

private:
    static std::string cell(double x) { return format_number(x); }
    static std::string cell(int x) { return std::to_string(x); }
    static std::string cell(long x) { return std::to_string(x); }
    static std::string cell(std::size_t x) { return std::to_string(x); }
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }

    std::ofstream out_;
};

struct Checks {
    std::vector<CheckResult> list;

    void add(std::string name, bool hard, bool passed, std::string detail) {
        list.push_back({std::move(name), hard, passed, std::move(detail)});
    }
};

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

std::string family_name(ShiftFamily f) {
    switch (f) {
    case ShiftFamily::FullShift: return "full-shift";
    case ShiftFamily::RenewalShift: return "renewal-shift";
    case ShiftFamily::ExplicitEdges: return "explicit";
    }
    return "?";
}

struct Truncation {
    int n = 0;
    MarkovPotential phi_raw;
};

std::vector<Truncation> materialize(const ExperimentConfig& cfg) {
    std::vector<Truncation> out;
    if (!cfg.shift_file.empty()) {
        ShiftFile file = parse_shift_file(cfg.shift_file);
        const int n = file.phi.n_symbols();
        out.push_back({n, std::move(file.phi)});
        return out;
    }
    for (int n : cfg.truncations) {
        const ShiftSpec spec{cfg.family, n, {}};
        out.push_back({n, linear_potential(build_shift(spec), cfg.c0, cfg.c1)});
    }
    return out;
}

} // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x < 0 ? "-inf" : "inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

ShiftFile parse_shift_text(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    int alphabet = 0;
    std::vector<Edge> edges;
    std::map<Edge, double> weights;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto tok = tokens_of(strip_comment(raw));
        if (tok.empty()) continue;
        if (tok[0] == "alphabet") {
            if (tok.size() != 2) throw ParseError(source, line_no, "usage: alphabet <N>");
            if (alphabet != 0) throw ParseError(source, line_no, "alphabet declared twice");
            alphabet = parse_value<int>(tok[1], source, line_no, "alphabet size");
            if (alphabet < 1) throw ParseError(source, line_no, "alphabet size must be at least 1");
        } else if (tok[0] == "edge") {
            if (tok.size() != 4) throw ParseError(source, line_no, "usage: edge <a> <b> <phi>");
            if (alphabet == 0) throw ParseError(source, line_no, "edge before alphabet declaration");
            const Edge e{parse_value<int>(tok[1], source, line_no, "symbol"),
                         parse_value<int>(tok[2], source, line_no, "symbol")};
            const double w = parse_value<double>(tok[3], source, line_no, "potential value");
            if (e.from < 1 || e.from > alphabet || e.to < 1 || e.to > alphabet) {
                throw ParseError(source, line_no, "edge " + tok[1] + " " + tok[2] + " outside alphabet {1.." +
                                                      std::to_string(alphabet) + "}");
            }
            if (!std::isfinite(w)) throw ParseError(source, line_no, "potential value must be finite");
            if (!weights.emplace(e, w).second) {
                throw ParseError(source, line_no, "duplicate edge " + tok[1] + " " + tok[2]);
            }
            edges.push_back(e);
        } else {
            throw ParseError(source, line_no, "unknown declaration '" + tok[0] + "'");
        }
    }
    if (alphabet == 0) throw ParseError(source, line_no, "missing alphabet declaration");
    try {
        ShiftSpec spec = ShiftSpec::explicit_edges(alphabet, edges);
        ShiftGraph g = build_shift(spec);
        std::vector<double> values;
        values.reserve(g.edge_count());
        for (const Edge& e : g.edges()) values.push_back(weights.at(e));
        return {std::move(spec), MarkovPotential(std::move(g), std::move(values))};
    } catch (const ShiftError& err) {
        throw ParseError(source, line_no, err.what());
    }
}

ShiftFile parse_shift_file(const std::filesystem::path& path) {
    return parse_shift_text(read_file(path), path.string());
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& source,
                                   const std::filesystem::path& base_dir) {
    ExperimentConfig cfg;
    bool truncation_set = false;
    bool offsets_set = false;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = strip_comment(raw);
        const auto tok = tokens_of(line);
        if (tok.empty()) continue;
        const std::string& key = tok[0];
        auto need = [&](std::size_t n, const char* usage) {
            if (tok.size() != n) throw ParseError(source, line_no, std::string("usage: ") + usage);
        };
        if (key == "shift_file") {
            need(2, "shift_file <path>");
            const std::filesystem::path p(tok[1]);
            cfg.shift_file = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
        } else if (key == "family") {
            need(2, "family full-shift|renewal-shift");
            if (tok[1] == "full-shift") cfg.family = ShiftFamily::FullShift;
            else if (tok[1] == "renewal-shift") cfg.family = ShiftFamily::RenewalShift;
            else throw ParseError(source, line_no, "unknown family '" + tok[1] + "'");
        } else if (key == "potential") {
            need(4, "potential linear <c0> <c1>");
            if (tok[1] != "linear") throw ParseError(source, line_no, "only 'linear' potentials are built in");
            cfg.c0 = parse_value<double>(tok[2], source, line_no, "c0");
            cfg.c1 = parse_value<double>(tok[3], source, line_no, "c1");
        } else if (key == "truncation") {
            if (tok.size() < 2) throw ParseError(source, line_no, "usage: truncation <N> [<N> ...]");
            if (!truncation_set) cfg.truncations.clear();
            truncation_set = true;
            for (std::size_t i = 1; i < tok.size(); ++i) {
                const int n = parse_value<int>(tok[i], source, line_no, "truncation size");
                if (n < 1) throw ParseError(source, line_no, "truncation size must be at least 1");
                cfg.truncations.push_back(n);
            }
        } else if (key == "normalize") {
            need(2, "normalize yes|no");
            if (tok[1] == "yes" || tok[1] == "true") cfg.normalize = true;
            else if (tok[1] == "no" || tok[1] == "false") cfg.normalize = false;
            else throw ParseError(source, line_no, "normalize expects yes or no");
        } else if (key == "t_grid") {
            need(4, "t_grid <start> <ratio> <count>");
            cfg.t_start = parse_value<double>(tok[1], source, line_no, "grid start");
            cfg.t_ratio = parse_value<double>(tok[2], source, line_no, "grid ratio");
            cfg.t_count = parse_value<int>(tok[3], source, line_no, "grid count");
            if (cfg.t_start < 1.0 || cfg.t_ratio <= 1.0 || cfg.t_count < 1) {
                throw ParseError(source, line_no, "t_grid needs start >= 1, ratio > 1, count >= 1");
            }
        } else if (key == "tol") {
            need(2, "tol <x>");
            cfg.eigen.tol = parse_value<double>(tok[1], source, line_no, "tolerance");
        } else if (key == "max_iter") {
            need(2, "max_iter <n>");
            cfg.eigen.max_iter = parse_value<int>(tok[1], source, line_no, "iteration cap");
        } else if (key == "cylinder") {
            if (tok.size() < 2) throw ParseError(source, line_no, "usage: cylinder <a> [<b> ...]");
            Word w;
            for (std::size_t i = 1; i < tok.size(); ++i) w.push_back(parse_value<int>(tok[i], source, line_no, "symbol"));
            cfg.cylinders.push_back(std::move(w));
        } else if (key == "offset") {
            if (tok.size() < 2) throw ParseError(source, line_no, "usage: offset <k> [<k> ...]");
            if (!offsets_set) cfg.offsets.clear();
            offsets_set = true;
            for (std::size_t i = 1; i < tok.size(); ++i) cfg.offsets.push_back(parse_value<long>(tok[i], source, line_no, "offset"));
        } else if (key == "point") {
            const auto pos = line.find("point");
            std::string rest = line.substr(pos + 5);
            if (rest.find('|') == std::string::npos) throw ParseError(source, line_no, "usage: point <preamble>|<cycle>");
            cfg.points.push_back(rest);
        } else if (key == "orbit_n_max") {
            need(2, "orbit_n_max <n>");
            cfg.orbit_n_max = parse_value<int>(tok[1], source, line_no, "orbit length");
        } else if (key == "out") {
            need(2, "out <dir>");
            cfg.out_dir = tok[1];
        } else {
            throw ParseError(source, line_no, "unknown key '" + key + "'");
        }
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
    return parse_config_text(read_file(path), path.string(), path.parent_path());
}

void describe_shift(const ShiftFile& file, std::ostream& out) {
    const MarkovPotential& phi = file.phi;
    const ShiftGraph& g = phi.graph();
    const PotentialReport rep = summability_report(phi);
    out << "symbols: " << g.n_symbols() << "\n";
    out << "edges: " << g.edge_count() << "\n";
    const bool transitive = is_topologically_transitive(g);
    out << "strongly connected: " << (transitive ? "yes" : "no") << "\n";
    if (transitive) out << "period: " << graph_period(g) << "\n";
    out << "first variation V1: " << format_number(rep.v1) << "\n";
    out << "summability sum (truncated): " << format_number(rep.truncated_sum) << "\n";
    out << "tail information: " << (rep.has_tail_information ? "yes" : "none") << "\n";
    out << "coercive: " << (!rep.has_tail_information ? "unknown" : rep.coercive ? "yes" : "no") << "\n";
    const MaxCycleCert cert = maximizing_value(phi);
    out << "maximizing value alpha: " << format_number(cert.alpha) << " on cycle (" << word_label(cert.cycle)
        << ")\n";
}

RunResult run_experiment(const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    const std::vector<double> grid = cfg.t_grid();
    const std::vector<Truncation> truncations = materialize(cfg);
    Checks checks;

    CsvWriter pressure_csv(cfg.out_dir / "pressure.csv", "N,t,log_pressure,pressure_over_t,residual,iterations,solver");
    CsvWriter measure_csv(cfg.out_dir / "measure.csv", "N,t,entropy,integral_phi,variational_defect");
    CsvWriter sub_csv(cfg.out_dir / "subactions.csv", "N,a,V,V_T,V_plus_VT");
    CsvWriter defect_csv(cfg.out_dir / "defects.csv", "N,a,b,defect");
    CsvWriter trunc_csv(cfg.out_dir / "truncation.csv", "t,N,log_pressure,delta_vs_previous_N");
    CsvWriter orbit_csv(cfg.out_dir / "orbits.csv", "N,n,log_Z_over_n,gap_to_pressure");
    std::ostringstream summary;

    std::vector<std::vector<double>> log_lambda_by_n;
    for (const Truncation& tr : truncations) {
        const std::string tag = "N=" + std::to_string(tr.n);
        const MaxCycleCert cert = maximizing_value(tr.phi_raw);
        const MarkovPotential phi = cfg.normalize ? normalize_to_zero_max(tr.phi_raw, cert.alpha) : tr.phi_raw;
        const double alpha = cfg.normalize ? 0.0 : cert.alpha;
        summary << "[" << tag << "] family=" << (cfg.shift_file.empty() ? family_name(cfg.family) : "file")
                << " alpha(raw)=" << format_number(cert.alpha) << " cycle=(" << word_label(cert.cycle) << ")"
                << " normalized=" << (cfg.normalize ? "yes" : "no") << "\n";

        PressureCurve curve = pressure_curve(phi, grid, cfg.eigen);
        double worst_residual = 0.0, worst_smm = 0.0, worst_var = 0.0;
        std::vector<double> log_lambda;
        for (const SpectralData& sd : curve.spectra) {
            const StationaryMarkovMeasure m = stationary_measure(sd, phi);
            const MeasureDefects d = measure_defects(m);
            const double h = entropy(m);
            const double integral = integral_phi(m, phi);
            const double var = variational_defect(m, phi, sd.log_pressure);
            curve.entropy.push_back(h);
            worst_residual = std::max(worst_residual, sd.residual);
            worst_smm = std::max({worst_smm, d.mass, d.row_sum, d.stationarity});
            if (sd.t <= 8.0) worst_var = std::max(worst_var, var);
            pressure_csv.row(tr.n, sd.t, sd.log_pressure, sd.log_pressure / sd.t, sd.residual, sd.iterations,
                             sd.inverse_iteration ? "inverse" : "power");
            measure_csv.row(tr.n, sd.t, h, integral, var);
            log_lambda.push_back(sd.log_pressure);
        }
        checks.add(tag + " eigen residual <= 1e-10", true, worst_residual <= 1e-10, sci(worst_residual));
        checks.add(tag + " stationary Markov structure <= 1e-10", true, worst_smm <= 1e-10, sci(worst_smm));
        checks.add(tag + " variational identity (t<=8) <= 1e-8", true, worst_var <= 1e-8, sci(worst_var));

        const double final_p = curve.pressure_over_t.back();
        checks.add(tag + " P_G(t phi)/t -> alpha at t_max (0.05)", false, std::abs(final_p - alpha) < 0.05,
                   "P/t=" + format_number(final_p) + " alpha=" + format_number(alpha));
        checks.add(tag + " P_G(t phi)/t non-increasing", false, curve.monotone_decreasing, "");

        const SubActionPair pair = calibrated_pair(phi);
        const double cal_f = forward_calibration_residual(phi, pair.V, pair.alpha);
        const double cal_b = backward_calibration_residual(phi, pair.V_T, pair.alpha);
        double sup_sum = kNegInf;
        for (std::size_t i = 0; i < pair.V.size(); ++i) {
            sup_sum = std::max(sup_sum, pair.V[i] + pair.V_T[i]);
            sub_csv.row(tr.n, static_cast<int>(i + 1), pair.V[i], pair.V_T[i], pair.V[i] + pair.V_T[i]);
        }
        checks.add(tag + " sub-action calibration <= 1e-10", true, std::max(cal_f, cal_b) <= 1e-10,
                   sci(std::max(cal_f, cal_b)));
        checks.add(tag + " max(V + V_T) = 0 within 1e-10", true, std::abs(sup_sum) <= 1e-10, sci(sup_sum));
        const auto defects = edge_defects(phi, pair);
        for (std::size_t idx = 0; idx < defects.size(); ++idx) {
            const Edge& e = phi.graph().edge(idx);
            defect_csv.row(tr.n, e.from, e.to, defects[idx]);
        }
        const NonWandering omega = nonwandering(phi, pair);
        summary << "[" << tag << "] recurrent symbols:";
        for (Symbol s : omega.recurrent_symbols) summary << " " << s;
        summary << "\n";

        const ZeroTempSubAction zt = subaction_zero_temp(curve.spectra);
        std::vector<double> diff(pair.V.size());
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = zt.V[i] - pair.V[i];
        checks.add(tag + " zero-temperature V matches max-plus V (0.05)", false, spread(diff) < 0.05,
                   "spread=" + sci(spread(diff)));
        checks.add(tag + " (1/t) log h_t Cauchy trend", false, zt.cauchy_decreasing, "");

        bool entropy_down = true;
        for (std::size_t i = 1; i < curve.entropy.size(); ++i) {
            if (curve.entropy[i] > curve.entropy[i - 1] + 1e-12) entropy_down = false;
        }
        checks.add(tag + " entropy h(mu_t) non-increasing", false, entropy_down, "");

        const auto orbits = gurevich_from_cycles(phi, 1.0, 1, cfg.orbit_n_max);
        const double p1 = leading_eigen(phi, 1.0, cfg.eigen).log_pressure;
        double gap4 = std::numeric_limits<double>::quiet_NaN();
        for (const auto& o : orbits) {
            const double gap = std::abs(o.log_z_over_n - p1);
            if (o.n == 4) gap4 = gap;
            orbit_csv.row(tr.n, o.n, o.log_z_over_n, gap);
        }
        if (cfg.orbit_n_max > 4) {
            const double gap_last = std::abs(orbits.back().log_z_over_n - p1);
            checks.add(tag + " (1/n) log Z_n(phi,1) gap at n=" + std::to_string(cfg.orbit_n_max) + " below n=4", false,
                       gap_last < gap4, sci(gap_last) + " vs " + sci(gap4));
        }

        log_lambda_by_n.push_back(log_lambda);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double delta = log_lambda_by_n.size() > 1
                                     ? log_lambda[i] - log_lambda_by_n[log_lambda_by_n.size() - 2][i]
                                     : std::numeric_limits<double>::quiet_NaN();
            trunc_csv.row(grid[i], tr.n, log_lambda[i], delta);
        }

        if (&tr != &truncations.back()) continue;

        // Rate functions and LDP reports on the largest truncation.
        const InvolutionKernel kernel = involution_kernel(phi);
        const double kdef = kernel_identity_defect(phi, kernel);
        checks.add(tag + " involution kernel identity exact", true, kdef == 0.0, sci(kdef));

        CsvWriter cyl_csv(cfg.out_dir / "cylinders.csv", "t,word,log_measure");
        bool offset_exact = true;
        for (const Word& w : cfg.cylinders) {
            if (!is_admissible(phi.graph(), w)) {
                checks.add("cylinder " + word_label(w) + " admissible", true, false, "inadmissible word");
                continue;
            }
            const LdpReport rep = ldp_report(phi, pair, w, curve.spectra);
            CsvWriter ldp_csv(cfg.out_dir / ("ldp_" + word_label(w) + ".csv"), "word,t,log_measure_over_t,target,gap");
            for (std::size_t i = 0; i < rep.t.size(); ++i) {
                ldp_csv.row(word_label(w), rep.t[i], rep.log_measure_over_t[i], rep.target, rep.gap[i]);
                cyl_csv.row(rep.t[i], word_label(w), rep.log_measure_over_t[i] * rep.t[i]);
            }
            summary << "[" << tag << "] cylinder " << word_label(w) << ": target=" << format_number(rep.target)
                    << " final_gap=" << sci(rep.final_gap) << "\n";
            checks.add(tag + " LDP [" + word_label(w) + "] gap decreasing and < 0.05", false, rep.success,
                       "final gap " + sci(rep.final_gap));
            for (long k : cfg.offsets) {
                const BilateralCylinder c{w, k};
                const LdpReport brep = bilateral_ldp_report(phi, pair, c, curve.spectra);
                if (brep.log_measure_over_t != rep.log_measure_over_t || brep.target != rep.target) offset_exact = false;
                CsvWriter b_csv(cfg.out_dir / ("bilateral_" + word_label(w) + "_" + std::to_string(k) + ".csv"),
                                "word,offset,t,log_measure_over_t,target,gap");
                for (std::size_t i = 0; i < brep.t.size(); ++i) {
                    b_csv.row(word_label(w), k, brep.t[i], brep.log_measure_over_t[i], brep.target, brep.gap[i]);
                }
            }
        }
        if (!cfg.cylinders.empty()) {
            checks.add(tag + " bilateral measure offset invariance exact", true, offset_exact, "");
        }

        CsvWriter point_csv(cfg.out_dir / "points.csv", "point,rate_I,rate_I_series,rate_hat,hypothesis");
        bool series_ok = true, hat_ok = true, monotone_ok = true;
        for (const std::string& text : cfg.points) {
            const EventuallyPeriodicPoint x = parse_point(phi.graph(), text);
            const double i_val = rate_I(phi, pair, x);
            const double s_val = rate_I_series(phi, pair, x);
            const TwoSidedPoint two = with_canonical_past(phi.graph(), x);
            const double h_val = rate_hat(phi, pair, kernel, two);
            const bool hyp = rate_hat_hypothesis(phi, pair, two);
            auto agree = [](double a, double b) {
                return (is_neg_inf(a) && is_neg_inf(b)) || std::abs(a - b) <= 1e-9;
            };
            if (!is_neg_inf(i_val) && !agree(i_val, s_val)) series_ok = false;
            if (!agree(i_val, h_val)) hat_ok = false;
            for (std::size_t k = 0; k < 20; ++k) {
                if (f_k(phi, pair, x, k + 1) > f_k(phi, pair, x, k) + 1e-10) monotone_ok = false;
            }
            point_csv.row(x.to_string(), i_val, s_val, h_val, hyp ? "holds" : "fails");
        }
        if (!cfg.points.empty()) {
            checks.add(tag + " rate_I = series form (1e-9)", true, series_ok, "");
            checks.add(tag + " rate_hat = rate_I of future (1e-9)", true, hat_ok, "");
            checks.add(tag + " F_k non-increasing for k <= 20", true, monotone_ok, "");
        }
    }

    if (log_lambda_by_n.size() > 1) {
        const auto& last = log_lambda_by_n.back();
        const auto& prev = log_lambda_by_n[log_lambda_by_n.size() - 2];
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (grid[i] <= 8.0) worst = std::max(worst, std::abs(last[i] - prev[i]));
        }
        checks.add("truncation stability of log lambda_t (t<=8) < 1e-8", false, worst < 1e-8, sci(worst));
    }

    RunResult result;
    result.checks = std::move(checks.list);
    bool hard_ok = true;
    summary << "\nchecks:\n";
    for (const CheckResult& c : result.checks) {
        if (c.hard && !c.passed) hard_ok = false;
        summary << (c.passed ? "PASS" : "FAIL") << (c.hard ? " [hard] " : " [diag] ") << c.name;
        if (!c.detail.empty()) summary << " : " << c.detail;
        summary << "\n";
    }
    summary << "\nstatus: " << (hard_ok ? "ok" : "failed") << "\n";
    std::ofstream(cfg.out_dir / "summary.txt") << summary.str();
    result.exit_code = hard_ok ? 0 : 1;
    return result;
}

} // namespace cms
