#include "ear/pattern.hpp"

#include <bit>
#include <stdexcept>

namespace ear {

LossPattern::LossPattern(Mask bits, int n) : bits(bits), n(n) {
    if (n < 1 || n > kMaxReceivers)
        throw std::invalid_argument("pattern length out of range");
    if (n < kMaxReceivers && (bits >> n) != 0)
        throw std::invalid_argument("pattern bits exceed receiver count");
}

LossPattern LossPattern::of(std::initializer_list<int> entries) {
    Mask bits = 0;
    int i = 0;
    for (int e : entries) {
        if (e) bits |= Mask{1} << i;
        ++i;
    }
    return LossPattern(bits, i);
}

ReceiverSet ReceiverSet::of(std::initializer_list<int> receivers) {
    ReceiverSet s;
    for (int r : receivers) s.mask |= Mask{1} << (r - 1);
    return s;
}

int ReceiverSet::count() const { return std::popcount(mask); }

int weight(const LossPattern& p) { return std::popcount(p.bits); }

bool can_code(const std::vector<GroupMember>& members) {
    if (members.empty()) throw std::invalid_argument("empty member list");
    const int n = members.front().pattern.n;
    if (static_cast<int>(members.size()) < 2 || static_cast<int>(members.size()) > n)
        throw std::invalid_argument("member count must be in [2, N]");

    Mask all_dests = 0;
    for (const auto& m : members) {
        if (m.pattern.n != n) throw std::invalid_argument("mismatched pattern lengths");
        if (m.dests.empty()) throw std::invalid_argument("empty destination set");
        if (all_dests & m.dests.mask) return false;  // destinations must be disjoint
        all_dests |= m.dests.mask;
    }

    // Each destination column needs its only zero in its own member's row.
    for (std::size_t i = 0; i < members.size(); ++i) {
        const Mask d = members[i].dests.mask;
        if (members[i].pattern.bits & d) return false;
        for (std::size_t j = 0; j < members.size(); ++j) {
            if (j == i) continue;
            if ((members[j].pattern.bits & d) != d) return false;
        }
    }
    return true;
}

CodeGroup unique_code_group(const LossPattern& p, ReceiverSet dests) {
    if (dests.empty()) throw std::invalid_argument("empty destination set");
    if (p.bits & dests.mask)
        throw std::invalid_argument("intended entries of the pattern must be zero");

    CodeGroup group;
    group.push_back({p, dests});
    const Mask filled = p.bits | dests.mask;
    for (int j = 1; j <= p.n; ++j) {
        if (!p.holds(j)) continue;
        const Mask partner = filled & ~(Mask{1} << (j - 1));
        group.push_back({LossPattern(partner, p.n), ReceiverSet::of({j})});
    }
    return group;
}

bool dominates(const QueueState& a, const QueueState& b) {
    return a.size <= b.size && a.loss_rate <= b.loss_rate;
}

double transition_prob(const LossPattern& from, const LossPattern& to,
                       const ChannelParams& omega) {
    if (from.n != to.n || from.n != omega.receivers())
        throw std::invalid_argument("pattern/channel length mismatch");
    if (from.bits & ~to.bits) return 0.0;  // entries are monotone

    double prob = 1.0;
    for (int i = 1; i <= from.n; ++i) {
        if (from.holds(i)) continue;
        prob *= to.holds(i) ? 1.0 - omega.omega(i) : omega.omega(i);
    }
    return prob;
}

}  // namespace ear
