#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ear/channel.hpp"
#include "ear/schemes.hpp"

namespace ear {

struct SweepSpec {
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;

    bool active() const { return step > 0.0 && stop >= start; }
    std::vector<double> points() const;
};

struct ExperimentConfig {
    std::vector<Scheme> schemes{Scheme::Arq, Scheme::NcArq, Scheme::Ear};
    int receivers = 2;
    long packets = 10'000;  // desk-scale default; --full-scale raises to 1e5
    // Either an explicit loss grid or a BER sweep (BER wins when active).
    // Exactly `receivers` values form one per-receiver grid point; any other
    // count is read as one symmetric grid point per value.
    std::vector<double> losses;
    SweepSpec ber_sweep;
    FecModel fec;
    int trials = 30;
    std::uint64_t seed = 1;
    long round_cap = 1'000'000;
    std::string out_path;  // empty writes to stdout
    bool compare_analytic = false;
    bool full_scale = false;
    double delta_t = 0.0;  // fixed retransmission slot; informational only
};

// Flat key=value manifest ("trials = 30", '#' comments). Unknown keys throw.
ExperimentConfig load_config_file(const std::string& path);

struct ResultRow {
    Scheme scheme;
    int receivers = 0;
    double ber = 0.0;  // 0 when the grid point came from --loss
    std::vector<double> omegas;
    long packets = 0;
    int trials = 0;
    std::uint64_t seed = 0;
    double retx_mean = 0.0;
    double retx_ci95 = 0.0;
    double lambda_empirical = 0.0;
    double lambda_analytic = 0.0;
    std::optional<double> gain_vs_arq;    // filled on EAR rows when ARQ ran
    std::optional<double> gain_vs_ncarq;  // filled on EAR rows when NC-ARQ ran
    double unwanted_mean = 0.0;
    double overhead_a_mean = 0.0;  // mean total bytes per trial
    double overhead_b_mean = 0.0;
};

// Retransmission-count ratio of a baseline over EAR; 1 when both are zero.
double gain(long baseline_retx, long ear_retx);

// Runs every (grid point, scheme, trial) combination. Trials at the same grid
// point share per-trial seeds across schemes so gains use common random
// numbers. Throws std::runtime_error naming the grid point if a trial hits
// the round cap.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

std::string to_csv(const std::vector<ResultRow>& rows);

// Full run: execute and write CSV to config.out_path or stdout.
void run_and_write(const ExperimentConfig& config);

}  // namespace ear
