#include "cms/errors.hpp"
#include "cms/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Zero-temperature LDP experiments on truncated countable Markov shifts"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    double tol = 0.0;
    auto* run = app.add_subcommand("run", "run the full pipeline from a config file");
    run->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "output directory (overrides `out`)");
    run->add_option("--tol", tol, "eigen tolerance (overrides `tol`)")->check(CLI::PositiveNumber);

    std::string shift_path;
    auto* check = app.add_subcommand("check", "print diagnostics for a shift file");
    check->add_option("shiftfile", shift_path, "shift file")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*check) {
            cms::describe_shift(cms::parse_shift_file(shift_path), std::cout);
            return 0;
        }
        cms::ExperimentConfig cfg = cms::parse_config_file(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (tol > 0.0) cfg.eigen.tol = tol;
        const cms::RunResult result = cms::run_experiment(cfg);
        for (const auto& c : result.checks) {
            std::cout << (c.passed ? "PASS" : "FAIL") << (c.hard ? " [hard] " : " [diag] ") << c.name;
            if (!c.detail.empty()) std::cout << " : " << c.detail;
            std::cout << '\n';
        }
        std::cout << "wrote " << cfg.out_dir.string() << "/summary.txt\n";
        return result.exit_code;
    } catch (const cms::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
    } catch (const cms::ShiftError& e) {
        std::cerr << "shift error: " << e.what() << '\n';
    } catch (const cms::ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << '\n';
    } catch (const cms::MeasureError& e) {
        std::cerr << "measure error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
    }
    return 2;
}
