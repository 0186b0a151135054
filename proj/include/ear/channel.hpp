#pragma once

#include <cstdint>
#include <vector>

#include "ear/channel_params.hpp"
#include "ear/pattern.hpp"

namespace ear {

// Bounded-distance decoding model for the RS-coded 1532-byte packet: the
// packet splits into ceil(packet_bytes / rs_k) blocks of rs_n 8-bit symbols
// and is lost iff any block has more than `correctable_symbols` symbol errors.
// CRC is treated as perfect detection.
struct FecModel {
    int packet_bytes = 1532;
    int rs_n = 32;
    int rs_k = 28;
    int correctable_symbols = 2;
    int symbol_bits = 8;

    int blocks_per_packet() const { return (packet_bytes + rs_k - 1) / rs_k; }
};

// Maps a bit error rate to a packet erasure probability under the FEC model.
// Monotone non-decreasing in ber; throws for ber outside [0, 1].
double ber_to_per(double ber, const FecModel& fec = {});

// Counter-based deterministic random stream: a draw is a pure function of
// (seed, trial, round, tx, receiver), so call order and parallelism cannot
// change results.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t trial = 0;
};

double uniform_draw(const RngStream& rng, std::uint64_t round, std::uint64_t tx,
                    std::uint64_t receiver);

// One Bernoulli success draw: true iff the packet gets through to `receiver`.
bool channel_delivers(const RngStream& rng, std::uint64_t round, std::uint64_t tx,
                      int receiver, double omega);

// Delivery masks for `transmissions` packets sent in one round; bit (i-1) of
// entry t is set iff receiver i got transmission t.
std::vector<Mask> sample_round(const ChannelParams& omega, int transmissions,
                               const RngStream& rng, std::uint64_t round);

}  // namespace ear
