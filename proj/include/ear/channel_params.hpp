#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace ear {

// Per-receiver erasure probabilities. Receiver ids are 1-based throughout;
// receiver i maps to bit (i-1) in pattern masks.
struct ChannelParams {
    std::vector<double> omegas;
    bool sorted_ascending = false;

    int receivers() const { return static_cast<int>(omegas.size()); }
    double omega(int receiver) const { return omegas[static_cast<std::size_t>(receiver - 1)]; }
};

// Builds params from raw probabilities, validating each omega is in [0, 1].
ChannelParams make_channel(std::vector<double> omegas);

// Returns the channel re-ordered so omega_i <= omega_j for i <= j, together
// with the permutation: perm[k] is the original 1-based receiver id now at
// sorted position k+1. The sort is stable so equal rates keep their order.
std::pair<ChannelParams, std::vector<int>> sort_channel(const ChannelParams& params);

}  // namespace ear
