#include "ear/analytic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace ear {

namespace {

void require_sorted(const ChannelParams& omega) {
    if (!omega.sorted_ascending ||
        !std::is_sorted(omega.omegas.begin(), omega.omegas.end()))
        throw std::invalid_argument("omegas must be sorted ascending; see sort_channel");
}

void require_valid(const ChannelParams& omega) {
    for (double w : omega.omegas)
        if (!(w >= 0.0 && w < 1.0))
            throw std::invalid_argument("omega must be in [0, 1)");
}

double tail_product(const ChannelParams& omega, int from) {
    double prod = 1.0;
    for (int j = from; j <= omega.receivers(); ++j) prod *= omega.omega(j);
    return prod;
}

}  // namespace

double rescue_expectation(double queue_size, ReceiverSet zero_receivers,
                          const ChannelParams& omega) {
    if (zero_receivers.empty()) throw std::invalid_argument("no zero receivers");
    double stay = 1.0;
    for (int i = 1; i <= omega.receivers(); ++i)
        if (zero_receivers.contains(i)) stay *= omega.omega(i);
    if (stay >= 1.0) throw std::invalid_argument("rescue expectation diverges: omega = 1");
    return queue_size / (1.0 - stay);
}

double transfer_expectation(double queue_size, const LossPattern& from,
                            const LossPattern& to, const ChannelParams& omega) {
    if (queue_size == 0.0) return 0.0;
    Mask zeros = ~from.bits;
    if (from.n < kMaxReceivers) zeros &= (Mask{1} << from.n) - 1;
    return rescue_expectation(queue_size, ReceiverSet{zeros}, omega) *
           transition_prob(from, to, omega);
}

double lambda_arq(const ChannelParams& omega) {
    require_valid(omega);
    double sum = 0.0;
    for (double w : omega.omegas) sum += w / (1.0 - w);
    return sum / omega.receivers();
}

double lambda_ncarq(const ChannelParams& omega) {
    require_valid(omega);
    require_sorted(omega);
    const int n = omega.receivers();
    double sum = 0.0;
    for (int i = 1; i <= n; ++i)
        sum += tail_product(omega, i) / (1.0 - omega.omega(i));
    return sum / n;
}

double lambda_ear(const ChannelParams& omega) {
    require_valid(omega);
    require_sorted(omega);
    const int n = omega.receivers();
    double sum = 0.0;
    for (int i = 1; i <= n; ++i) {
        const double prod = tail_product(omega, i);
        sum += prod / (1.0 - prod);
    }
    return sum / n;
}

Lemma1Counts lemma1_counts(double size_a, double size_b, double omega_a, double omega_b) {
    if (size_a > size_b || omega_a > omega_b)
        throw std::invalid_argument("lemma 1 requires size_a <= size_b and omega_a <= omega_b");
    if (!(omega_a >= 0.0 && omega_b < 1.0))
        throw std::invalid_argument("omega out of range");
    Lemma1Counts counts;
    counts.coded_retx = size_a / (1.0 - omega_a);
    counts.solo_native = size_b - size_a * (1.0 - omega_b) / (1.0 - omega_a);
    return counts;
}

double unwanted_overhead(double k, double omega) {
    if (!(omega >= 0.0 && omega < 1.0)) throw std::invalid_argument("omega out of range");
    const double threshold = omega * omega * omega + omega * omega - 1.0;
    if (threshold <= 0.0) return 0.0;
    const double w2 = omega * omega;
    const double w3 = w2 * omega;
    return k * omega * (1.0 - omega) * threshold / ((1.0 - w3) * (1.0 - w2));
}

std::pair<double, double> n1_n2(double k, double omega) {
    if (!(omega >= 0.0 && omega < 1.0)) throw std::invalid_argument("omega out of range");
    const double w2 = omega * omega;
    const double w3 = w2 * omega;
    const double miss2 = (1.0 - omega) * (1.0 - omega);
    const double n1 = k * omega * miss2 / (1.0 - w3);
    const double n2 = k * w2 * w2 * miss2 / ((1.0 - w3) * (1.0 - w2));
    return {n1, n2};
}

double initial_pattern_prob(const LossPattern& p, int dest, const ChannelParams& omega) {
    if (p.n != omega.receivers()) throw std::invalid_argument("length mismatch");
    if (p.holds(dest)) return 0.0;  // the pattern cannot exist
    double prob = 1.0;
    for (int i = 1; i <= p.n; ++i)
        prob *= p.holds(i) ? 1.0 - omega.omega(i) : omega.omega(i);
    return prob;
}

PrimarySets primary_sets(int i, int n) {
    if (i < 1 || i > n) throw std::invalid_argument("receiver index out of range");
    PrimarySets sets;

    // Phi^i: receiver i's patterns with every entry at position >= i zero.
    const Mask low = (Mask{1} << (i - 1)) - 1;
    for (Mask m = 0;; ++m) {
        const Mask bits = m & low;
        if (bits == m) sets.phi_upper.push_back({i, LossPattern(bits, n)});
        if (m >= low) break;
    }

    // Phi_i: patterns of receivers j < i whose highest set entry is i.
    const Mask bit_i = Mask{1} << (i - 1);
    for (int j = 1; j < i; ++j) {
        const Mask bit_j = Mask{1} << (j - 1);
        for (Mask m = 0;; ++m) {
            const Mask free = m & low & ~bit_j;
            if (free == m) sets.phi_lower.push_back({j, LossPattern(free | bit_i, n)});
            if (m >= low) break;
        }
    }

    sets.all = sets.phi_upper;
    sets.all.insert(sets.all.end(), sets.phi_lower.begin(), sets.phi_lower.end());
    return sets;
}

double phi_rescue_total(int i, double k, const ChannelParams& omega) {
    require_valid(omega);
    require_sorted(omega);
    if (i < 1 || i > omega.receivers()) throw std::invalid_argument("receiver index out of range");
    const double prod = tail_product(omega, i);
    if (prod == 0.0) return 0.0;
    return k * prod / (1.0 - prod);
}

FlowLedger pattern_flow_solve(double k, const ChannelParams& omega) {
    require_valid(omega);
    require_sorted(omega);
    const int n = omega.receivers();
    if (n < 2 || n > 10) throw std::invalid_argument("flow solver supports 2 <= N <= 10");

    FlowLedger ledger;
    ledger.phi_totals.assign(static_cast<std::size_t>(n), 0.0);
    if (k == 0.0) return ledger;

    for (int i = 1; i <= n; ++i) {
        // Patterns of Phi^i: free bits are positions below i-1 (0-based).
        const Mask low = (Mask{1} << (i - 1)) - 1;
        std::vector<Mask> masks;
        for (Mask m = 0;; ++m) {
            if ((m & low) == m) masks.push_back(m);
            if (m >= low) break;
        }
        std::sort(masks.begin(), masks.end(), [](Mask a, Mask b) {
            const int wa = std::popcount(a), wb = std::popcount(b);
            return wa != wb ? wa < wb : a < b;
        });

        std::vector<double> inflow(masks.size(), 0.0);
        std::vector<std::size_t> index_of(static_cast<std::size_t>(low) + 1, 0);
        for (std::size_t idx = 0; idx < masks.size(); ++idx)
            index_of[masks[idx]] = idx;

        for (std::size_t idx = 0; idx < masks.size(); ++idx) {
            const LossPattern from(masks[idx], n);
            FlowEntry entry;
            entry.receiver = i;
            entry.pattern = from;
            entry.inflow = inflow[idx] + k * initial_pattern_prob(from, i, omega);

            Mask zeros = ~from.bits & ((n < kMaxReceivers ? (Mask{1} << n) : 0) - 1);
            entry.rescue_tx = rescue_expectation(entry.inflow, ReceiverSet{zeros}, omega);

            // Transfers stay inside Phi^i: flip a non-empty subset of the
            // remaining free low bits.
            const Mask open = low & ~from.bits;
            for (Mask sub = open; sub != 0; sub = (sub - 1) & open) {
                const LossPattern to(from.bits | sub, n);
                const double amount = entry.rescue_tx * transition_prob(from, to, omega);
                inflow[index_of[to.bits]] += amount;
                entry.transfers_out.emplace_back(to.bits, amount);
            }

            ledger.phi_totals[static_cast<std::size_t>(i - 1)] += entry.rescue_tx;
            ledger.entries.push_back(std::move(entry));
        }
        ledger.total += ledger.phi_totals[static_cast<std::size_t>(i - 1)];
    }
    return ledger;
}

}  // namespace ear
