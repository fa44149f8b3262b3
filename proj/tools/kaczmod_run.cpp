// Batch runner: kaczmod_run --config run.json [--out DIR] [overrides]
//
// Output directory precedence: --out, then output.directory in the config,
// then $KACZMOD_OUT, then ./kaczmod_out.

#include <cstdint>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kaczmod/cli/config.hpp"
#include "kaczmod/cli/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Kaczmarz experiments in Hilbert C*-modules"};
    std::string config_path;
    std::string out_dir;
    std::optional<std::size_t> max_iter;
    std::optional<double> tol;
    std::optional<std::size_t> truncation;
    std::optional<std::uint64_t> seed;
    app.add_option("--config", config_path, "JSON experiment config")->required()->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--max-iter", max_iter, "override numeric.max_iter");
    app.add_option("--tol", tol, "override numeric.tol");
    app.add_option("--truncation", truncation, "override numeric.truncation");
    app.add_option("--seed", seed, "override numeric.seed");
    CLI11_PARSE(app, argc, argv);

    try {
        auto config = kaczmod::cli::load_config(config_path);
        if (max_iter) config.numeric.max_iter = *max_iter;
        if (tol) {
            if (!(*tol > 0.0)) throw kaczmod::cli::ConfigError("--tol: must be > 0");
            config.numeric.tol = *tol;
        }
        if (truncation) config.numeric.truncation = *truncation;
        if (seed) config.numeric.seed = *seed;

        if (out_dir.empty()) {
            if (config.output.directory) {
                out_dir = *config.output.directory;
            } else if (const char* env = std::getenv("KACZMOD_OUT"); env && *env) {
                out_dir = env;
            } else {
                out_dir = "kaczmod_out";
            }
        }
        const auto summary = kaczmod::cli::run_and_emit(config, out_dir);
        std::cout << summary["experiment"].get<std::string>() << ": wrote " << summary["files"].size()
                  << " files to " << out_dir << "\n";
        return 0;
    } catch (const kaczmod::cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
