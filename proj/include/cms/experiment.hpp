#pragma once

#include "cms/potential.hpp"
#include "cms/transfer.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cms {

struct ShiftFile {
    ShiftSpec spec;
    MarkovPotential phi;
};

/// Shift file grammar, one declaration per line, '#' starts a comment:
///   alphabet <N>
///   edge <a> <b> <phi>
/// Undeclared edges are forbidden transitions. Errors carry the line number.
ShiftFile parse_shift_text(const std::string& text, const std::string& source = "<input>");
ShiftFile parse_shift_file(const std::filesystem::path& path);

struct ExperimentConfig {
    /// Explicit shift file; when empty the generator family below is used.
    std::filesystem::path shift_file;
    ShiftFamily family = ShiftFamily::FullShift;
    /// phi(ab) = c0 + c1 (a + b) for generator families.
    double c0 = 0.0;
    double c1 = 0.0;
    std::vector<int> truncations{2};
    /// Replace phi by phi - alpha(phi) before everything else.
    bool normalize = true;
    double t_start = 1.0;
    double t_ratio = 2.0;
    int t_count = 11;
    EigenOptions eigen;
    std::vector<Word> cylinders;
    std::vector<long> offsets{0};
    /// Evaluation points in "<preamble>|<cycle>" syntax.
    std::vector<std::string> points;
    /// Closed-orbit sums through symbol 1 up to this length.
    int orbit_n_max = 12;
    std::filesystem::path out_dir = "out";

    std::vector<double> t_grid() const { return geometric_grid(t_start, t_ratio, t_count); }
};

/// Flat key-value config; repeated `cylinder`, `point` keys accumulate.
///   shift_file <path>            (relative to the config file)
///   family full-shift|renewal-shift
///   potential linear <c0> <c1>
///   truncation <N> [<N> ...]
///   normalize yes|no
///   t_grid <start> <ratio> <count>
///   tol <x>            max_iter <n>
///   cylinder <a> [<b> ...]
///   offset <k> [<k> ...]
///   point <preamble>|<cycle>
///   orbit_n_max <n>
///   out <dir>
ExperimentConfig parse_config_text(const std::string& text, const std::string& source = "<config>",
                                   const std::filesystem::path& base_dir = {});
ExperimentConfig parse_config_file(const std::filesystem::path& path);

struct CheckResult {
    std::string name;
    bool hard = true;  ///< hard checks decide the exit status; others are diagnostics
    bool passed = false;
    std::string detail;
};

struct RunResult {
    std::vector<CheckResult> checks;
    int exit_code = 0;
};

/// Runs the full pipeline and writes pressure.csv, measure.csv,
/// subactions.csv, defects.csv, truncation.csv, cylinders.csv, points.csv,
/// ldp_<word>.csv, bilateral_<word>_<k>.csv and summary.txt to out_dir.
/// Exit code is 0 iff every hard check passed.
RunResult run_experiment(const ExperimentConfig& config);

/// Human-readable diagnostics for a shift file (the `check` subcommand).
void describe_shift(const ShiftFile& file, std::ostream& out);

/// Lossless, locale-independent number formatting used for all CSV output.
std::string format_number(double x);

} // namespace cms
