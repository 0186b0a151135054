#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ear/channel_params.hpp"

namespace ear {

enum class Scheme { Arq, NcArq, Ear };

const char* scheme_name(Scheme s);
Scheme parse_scheme(const std::string& name);  // throws on unknown name

struct SimConfig {
    int receivers = 2;
    long packets = 1000;  // K requested packets per receiver
    ChannelParams omega;
    std::uint64_t seed = 0;
    std::uint64_t trial = 0;
    long round_cap = 1'000'000;
};

struct TrialResult {
    long initial_tx = 0;
    long retransmissions = 0;
    long rounds = 0;
    // Solo retransmissions of coded compounds held only by the lossiest
    // receiver and wanted by all others: such a unit has no coding partner
    // in the round and its airtime serves fewer receivers than it could.
    long unwanted_retx = 0;
    // Transmissions mixing two or more already-coded units.
    long coded_coded_combines = 0;
    long decode_failures = 0;
    long monotonicity_violations = 0;
    long code_check_failures = 0;
    unsigned long long overhead_a_bytes = 0;
    unsigned long long overhead_b_bytes = 0;
    std::vector<long> per_round_retx;
    bool completed = false;
};

// Runs one seeded trial of the given scheme to completion (or the round cap).
// All K*N native packets are delivered iff result.completed.
TrialResult run_trial(const SimConfig& config, Scheme scheme);

}  // namespace ear
