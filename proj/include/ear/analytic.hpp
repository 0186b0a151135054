#pragma once

#include <utility>
#include <vector>

#include "ear/channel_params.hpp"
#include "ear/pattern.hpp"

namespace ear {

// Expected retransmissions to rescue a queue whose packets are missing at the
// given receivers: queue_size / (1 - prod omega_i over zero_receivers).
double rescue_expectation(double queue_size, ReceiverSet zero_receivers,
                          const ChannelParams& omega);

// Expected number of packets relocated from `from` to `to` while rescuing a
// queue of the given size.
double transfer_expectation(double queue_size, const LossPattern& from,
                            const LossPattern& to, const ChannelParams& omega);

// Average retransmissions per packet for plain per-packet ARQ.
double lambda_arq(const ChannelParams& omega);

// Average retransmissions per packet under NC-ARQ; requires omegas sorted
// ascending (throws otherwise rather than silently sorting).
double lambda_ncarq(const ChannelParams& omega);

// Average retransmissions per packet under EAR; requires omegas sorted.
double lambda_ear(const ChannelParams& omega);

struct Lemma1Counts {
    double coded_retx = 0.0;   // transmissions carrying the dominated queue
    double solo_native = 0.0;  // leftover natives of the larger queue
};

// Requires size_a <= size_b and omega_a <= omega_b.
Lemma1Counts lemma1_counts(double size_a, double size_b, double omega_a, double omega_b);

// Expected deliveries spent on unwanted coded packets in the symmetric
// 3-receiver channel; zero when omega^3 + omega^2 - 1 <= 0 (no unwanted
// packets arise below that threshold).
double unwanted_overhead(double k, double omega);

// The two 3-receiver symmetric queue sizes whose ordering decides whether
// unwanted packets appear (N1 first, N2 second).
std::pair<double, double> n1_n2(double k, double omega);

// Probability that a packet destined to `dest` lands in pattern `p` after its
// initial transmission; zero if p marks dest as holding it.
double initial_pattern_prob(const LossPattern& p, int dest, const ChannelParams& omega);

struct PatternRef {
    int receiver = 0;  // requester of the packets behind this pattern
    LossPattern pattern;
};

struct PrimarySets {
    std::vector<PatternRef> phi_upper;  // patterns of receiver i, entries >= i zero
    std::vector<PatternRef> phi_lower;  // patterns of receivers j < i, entry i set
    std::vector<PatternRef> all;        // their union
};

// Partition cell for receiver i: every loss pattern of every receiver lands in
// exactly one primary set. Membership of phi_lower additionally requires all
// entries above i to be zero, which is what makes the cells disjoint.
PrimarySets primary_sets(int i, int n);

// Closed-form total transmissions charged to receiver i's primary set:
// K * prod_{k=i}^N omega_k / (1 - prod_{k=i}^N omega_k). Requires sorted omegas.
double phi_rescue_total(int i, double k, const ChannelParams& omega);

struct FlowEntry {
    int receiver = 0;  // primary set the pattern belongs to
    LossPattern pattern;
    double inflow = 0.0;     // K * Pr{pattern} plus incoming transfers
    double rescue_tx = 0.0;  // expected transmissions to drain the queue
    std::vector<std::pair<Mask, double>> transfers_out;
};

struct FlowLedger {
    std::vector<FlowEntry> entries;
    std::vector<double> phi_totals;  // index i-1: transmissions charged to set i
    double total = 0.0;
};

// Numerically replays the per-pattern inflow/rescue/transfer bookkeeping
// inside each primary set, ascending by pattern weight. The per-set totals
// telescope to phi_rescue_total and the grand total to K*N*lambda_ear.
// Requires sorted omegas and N <= 10.
FlowLedger pattern_flow_solve(double k, const ChannelParams& omega);

}  // namespace ear
