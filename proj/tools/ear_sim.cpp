// Sweep driver: runs the retransmission schemes over a loss or BER grid and
// writes one CSV row per (grid point, scheme).
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ear/harness.hpp"

int main(int argc, char** argv) {
    CLI::App app{"XOR-coded retransmission simulator (ARQ / NC-ARQ / EAR)"};

    std::string config_path;
    std::vector<std::string> scheme_names;
    std::string ber_sweep;
    std::vector<double> losses;
    ear::ExperimentConfig cfg;

    app.add_option("--config", config_path, "key=value manifest; flags override it");
    app.add_option("--scheme", scheme_names, "arq, ncarq, ear (repeatable; default all)");
    auto* opt_n = app.add_option("--receivers", cfg.receivers, "number of receivers")
                      ->check(CLI::Range(2, 64));
    auto* opt_k = app.add_option("--packets", cfg.packets, "batch size K")->check(CLI::PositiveNumber);
    app.add_option("--ber-sweep", ber_sweep, "bit error rate sweep start:stop:step");
    app.add_option("--loss", losses,
                   "loss rates; N values = one per-receiver point, otherwise one "
                   "symmetric point each")
        ->delimiter(',');
    auto* opt_t = app.add_option("--trials", cfg.trials, "trials per grid point")
                      ->check(CLI::PositiveNumber);
    auto* opt_s = app.add_option("--seed", cfg.seed, "base RNG seed");
    auto* opt_o = app.add_option("--out", cfg.out_path, "output CSV path (default stdout)");
    auto* opt_c = app.add_option("--round-cap", cfg.round_cap, "abort a trial after this many rounds")
                      ->check(CLI::PositiveNumber);
    auto* flag_a = app.add_flag("--compare-analytic", cfg.compare_analytic,
                                "fill the closed-form lambda column");
    auto* flag_p = app.add_flag("--full-scale", cfg.full_scale, "raise K to 100000");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) {
            ear::ExperimentConfig file_cfg = ear::load_config_file(config_path);
            if (*opt_n) file_cfg.receivers = cfg.receivers;
            if (*opt_k) file_cfg.packets = cfg.packets;
            if (*opt_t) file_cfg.trials = cfg.trials;
            if (*opt_s) file_cfg.seed = cfg.seed;
            if (*opt_o) file_cfg.out_path = cfg.out_path;
            if (*opt_c) file_cfg.round_cap = cfg.round_cap;
            if (*flag_a) file_cfg.compare_analytic = cfg.compare_analytic;
            if (*flag_p) file_cfg.full_scale = cfg.full_scale;
            cfg = std::move(file_cfg);
        }
        if (!scheme_names.empty()) {
            cfg.schemes.clear();
            for (const std::string& name : scheme_names)
                cfg.schemes.push_back(ear::parse_scheme(name));
        }
        if (!ber_sweep.empty()) {
            double a = 0, b = 0, s = 0;
            if (std::sscanf(ber_sweep.c_str(), "%lf:%lf:%lf", &a, &b, &s) != 3)
                throw std::invalid_argument("--ber-sweep must be start:stop:step");
            cfg.ber_sweep = {a, b, s};
            if (!cfg.ber_sweep.active())
                throw std::invalid_argument("--ber-sweep has no points");
        }
        if (!losses.empty()) cfg.losses = losses;

        ear::run_and_write(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
