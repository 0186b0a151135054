#include "ear/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "ear/analytic.hpp"
#include "ear/channel_params.hpp"

namespace ear {

std::vector<double> SweepSpec::points() const {
    std::vector<double> out;
    if (!active()) return out;
    const long n = std::lround(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(start + step * static_cast<double>(i));
    return out;
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

SweepSpec parse_sweep(const std::string& s) {
    SweepSpec spec;
    if (std::sscanf(s.c_str(), "%lf:%lf:%lf", &spec.start, &spec.stop, &spec.step) != 3)
        throw std::invalid_argument("sweep must be start:stop:step, got: " + s);
    if (!spec.active()) throw std::invalid_argument("sweep has no points: " + s);
    return spec;
}

bool parse_bool(const std::string& s) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw std::invalid_argument("expected boolean, got: " + s);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

struct GridPoint {
    double ber = 0.0;
    std::vector<double> omegas;
};

std::vector<GridPoint> build_grid(const ExperimentConfig& cfg) {
    std::vector<GridPoint> grid;
    if (cfg.ber_sweep.active()) {
        for (double ber : cfg.ber_sweep.points()) {
            GridPoint g;
            g.ber = ber;
            g.omegas.assign(static_cast<std::size_t>(cfg.receivers), ber_to_per(ber, cfg.fec));
            grid.push_back(std::move(g));
        }
    } else if (cfg.losses.size() == static_cast<std::size_t>(cfg.receivers)) {
        grid.push_back({0.0, cfg.losses});
    } else if (!cfg.losses.empty()) {
        for (double w : cfg.losses)
            grid.push_back({0.0, std::vector<double>(static_cast<std::size_t>(cfg.receivers), w)});
    } else {
        throw std::invalid_argument("no grid: give a loss list or a BER sweep");
    }
    return grid;
}

double lambda_for(Scheme s, const ChannelParams& sorted) {
    switch (s) {
        case Scheme::Arq: return lambda_arq(sorted);
        case Scheme::NcArq: return lambda_ncarq(sorted);
        case Scheme::Ear: return lambda_ear(sorted);
    }
    return 0.0;
}

}  // namespace

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    ExperimentConfig cfg;
    cfg.schemes.clear();
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "scheme" || key == "schemes") {
            std::stringstream ss(val);
            std::string item;
            while (std::getline(ss, item, ','))
                if (!trim(item).empty()) cfg.schemes.push_back(parse_scheme(trim(item)));
        } else if (key == "receivers") {
            cfg.receivers = std::stoi(val);
        } else if (key == "packets") {
            cfg.packets = std::stol(val);
        } else if (key == "loss" || key == "losses") {
            cfg.losses = parse_double_list(val);
        } else if (key == "ber_sweep") {
            cfg.ber_sweep = parse_sweep(val);
        } else if (key == "trials") {
            cfg.trials = std::stoi(val);
        } else if (key == "seed") {
            cfg.seed = std::stoull(val);
        } else if (key == "round_cap") {
            cfg.round_cap = std::stol(val);
        } else if (key == "out") {
            cfg.out_path = val;
        } else if (key == "compare_analytic") {
            cfg.compare_analytic = parse_bool(val);
        } else if (key == "full_scale") {
            cfg.full_scale = parse_bool(val);
        } else if (key == "delta_t") {
            cfg.delta_t = std::stod(val);
        } else {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unknown key: " + key);
        }
    }
    if (cfg.schemes.empty())
        cfg.schemes = {Scheme::Arq, Scheme::NcArq, Scheme::Ear};
    return cfg;
}

double gain(long baseline_retx, long ear_retx) {
    if (ear_retx == 0) return baseline_retx == 0 ? 1.0 : HUGE_VAL;
    return static_cast<double>(baseline_retx) / static_cast<double>(ear_retx);
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
    ExperimentConfig cfg = config;
    if (const char* env = std::getenv("EAR_SIM_SEED"))
        cfg.seed = std::stoull(env);
    if (cfg.full_scale) cfg.packets = std::max(cfg.packets, 100'000L);
    if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");

    const auto grid = build_grid(cfg);
    std::vector<ResultRow> rows;

    for (const GridPoint& g : grid) {
        const ChannelParams channel = make_channel(g.omegas);
        auto sorted_omegas = g.omegas;
        std::sort(sorted_omegas.begin(), sorted_omegas.end());
        const ChannelParams sorted = make_channel(sorted_omegas);

        std::map<Scheme, long> totals;
        for (Scheme s : cfg.schemes) {
            SimConfig sim;
            sim.receivers = cfg.receivers;
            sim.packets = cfg.packets;
            sim.omega = channel;
            sim.seed = cfg.seed;
            sim.round_cap = cfg.round_cap;

            ResultRow row;
            row.scheme = s;
            row.receivers = cfg.receivers;
            row.ber = g.ber;
            row.omegas = g.omegas;
            row.packets = cfg.packets;
            row.trials = cfg.trials;
            row.seed = cfg.seed;

            long total = 0;
            double sum = 0.0, sumsq = 0.0, unwanted = 0.0, bytes_a = 0.0, bytes_b = 0.0;
            for (int t = 0; t < cfg.trials; ++t) {
                sim.trial = static_cast<std::uint64_t>(t);
                const TrialResult r = run_trial(sim, s);
                if (!r.completed) {
                    std::ostringstream os;
                    os << "round cap " << cfg.round_cap << " hit: scheme=" << scheme_name(s)
                       << " N=" << cfg.receivers << " trial=" << t << " omegas=";
                    for (std::size_t i = 0; i < g.omegas.size(); ++i)
                        os << (i ? ";" : "") << g.omegas[i];
                    throw std::runtime_error(os.str());
                }
                total += r.retransmissions;
                const auto x = static_cast<double>(r.retransmissions);
                sum += x;
                sumsq += x * x;
                unwanted += static_cast<double>(r.unwanted_retx);
                bytes_a += static_cast<double>(r.overhead_a_bytes);
                bytes_b += static_cast<double>(r.overhead_b_bytes);
            }
            const double nt = cfg.trials;
            row.retx_mean = sum / nt;
            if (cfg.trials > 1) {
                const double var = std::max(0.0, (sumsq - sum * sum / nt) / (nt - 1.0));
                row.retx_ci95 = 1.96 * std::sqrt(var / nt);
            }
            row.lambda_empirical =
                row.retx_mean / (static_cast<double>(cfg.receivers) * static_cast<double>(cfg.packets));
            row.lambda_analytic = lambda_for(s, sorted);
            row.unwanted_mean = unwanted / nt;
            row.overhead_a_mean = bytes_a / nt;
            row.overhead_b_mean = bytes_b / nt;
            totals[s] = total;
            rows.push_back(std::move(row));
        }

        for (ResultRow& row : rows) {
            if (row.scheme != Scheme::Ear || row.ber != g.ber || row.omegas != g.omegas) continue;
            if (auto it = totals.find(Scheme::Arq); it != totals.end())
                row.gain_vs_arq = gain(it->second, totals[Scheme::Ear]);
            if (auto it = totals.find(Scheme::NcArq); it != totals.end())
                row.gain_vs_ncarq = gain(it->second, totals[Scheme::Ear]);
        }
    }

    std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return std::tie(a.receivers, a.ber, a.omegas, a.scheme) <
               std::tie(b.receivers, b.ber, b.omegas, b.scheme);
    });
    return rows;
}

std::string to_csv(const std::vector<ResultRow>& rows) {
    std::string out =
        "scheme,N,ber,omega_csv,K,trials,seed,total_retx_mean,total_retx_ci95,"
        "lambda_empirical,lambda_analytic,gain_vs_arq,gain_vs_ncarq,unwanted_count,"
        "overhead_a_bytes,overhead_b_bytes\n";
    for (const ResultRow& r : rows) {
        std::string omega_csv;
        for (std::size_t i = 0; i < r.omegas.size(); ++i)
            omega_csv += (i ? ";" : "") + fmt(r.omegas[i]);
        out += scheme_name(r.scheme);
        out += ',' + std::to_string(r.receivers);
        out += ',' + fmt(r.ber);
        out += ',' + omega_csv;
        out += ',' + std::to_string(r.packets);
        out += ',' + std::to_string(r.trials);
        out += ',' + std::to_string(r.seed);
        out += ',' + fmt(r.retx_mean);
        out += ',' + fmt(r.retx_ci95);
        out += ',' + fmt(r.lambda_empirical);
        out += ',' + fmt(r.lambda_analytic);
        out += ',';
        if (r.gain_vs_arq) out += fmt(*r.gain_vs_arq);
        out += ',';
        if (r.gain_vs_ncarq) out += fmt(*r.gain_vs_ncarq);
        out += ',' + fmt(r.unwanted_mean);
        out += ',' + fmt(r.overhead_a_mean);
        out += ',' + fmt(r.overhead_b_mean);
        out += '\n';
    }
    return out;
}

void run_and_write(const ExperimentConfig& config) {
    const std::string csv = to_csv(run_experiment(config));
    if (config.out_path.empty()) {
        std::cout << csv;
        return;
    }
    std::ofstream out(config.out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write: " + config.out_path);
    out << csv;
}

}  // namespace ear
