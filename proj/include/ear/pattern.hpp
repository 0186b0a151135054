#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "ear/channel_params.hpp"

namespace ear {

using Mask = std::uint64_t;

constexpr int kMaxReceivers = 64;

// Packet-loss pattern over N receivers: bit (i-1) set means receiver i holds
// the packet. A pattern only exists while at least one intended receiver of
// the packet lacks it.
struct LossPattern {
    Mask bits = 0;
    int n = 0;

    LossPattern() = default;
    LossPattern(Mask bits, int n);

    // Entries as 0/1 flags, entry k for receiver k+1 (convenience for tests).
    static LossPattern of(std::initializer_list<int> entries);

    bool holds(int receiver) const { return (bits >> (receiver - 1)) & 1u; }

    auto operator<=>(const LossPattern&) const = default;
};

// Set of 1-based receiver ids.
struct ReceiverSet {
    Mask mask = 0;

    static ReceiverSet of(std::initializer_list<int> receivers);

    bool contains(int receiver) const { return (mask >> (receiver - 1)) & 1u; }
    bool empty() const { return mask == 0; }
    int count() const;

    auto operator<=>(const ReceiverSet&) const = default;
};

struct GroupMember {
    LossPattern pattern;
    ReceiverSet dests;
};

using CodeGroup = std::vector<GroupMember>;

// Number of non-zero entries.
int weight(const LossPattern& p);

// True iff the members' packets can be XORed into one transmission that every
// intended receiver can decode: destination sets pairwise disjoint, and each
// destination's column of the stacked pattern matrix has its only zero in that
// member's own row. Throws std::invalid_argument for fewer than 2 or more than
// N members, or mismatched pattern lengths.
bool can_code(const std::vector<GroupMember>& members);

// The maximal code group containing (p, dests) under the all-zero-column
// restriction: one partner per receiver currently holding p, each partner
// being p with the intended entries set and that receiver's entry cleared.
// A weight-0 pattern yields the degenerate group {(p, dests)} of size 1.
// Throws if any intended entry of p is already set.
CodeGroup unique_code_group(const LossPattern& p, ReceiverSet dests);

struct QueueState {
    std::size_t size = 0;
    double loss_rate = 0.0;
};

// Queue domination: every packet of `a` rides inside coded transmissions
// with `b` until `a` empties, which holds when a is no larger and no lossier.
bool dominates(const QueueState& a, const QueueState& b);

// Per-retransmission probability that a packet moves from pattern `from` to
// pattern `to` (equal patterns give the stay probability). Zero whenever `to`
// clears an entry: overheard packets are retained.
double transition_prob(const LossPattern& from, const LossPattern& to,
                       const ChannelParams& omega);

}  // namespace ear
