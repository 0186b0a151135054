#include "ear/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace ear {

namespace {

inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// log of the binomial tail P(X > t), X ~ Bin(n, p), summed in linear space
// with log terms for stability at tiny p.
double binomial_tail_above(int n, int t, double p) {
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    double tail = 0.0;
    for (int e = t + 1; e <= n; ++e) {
        const double lc = std::lgamma(n + 1.0) - std::lgamma(e + 1.0) -
                          std::lgamma(n - e + 1.0);
        tail += std::exp(lc + e * lp + (n - e) * lq);
    }
    return tail < 1.0 ? tail : 1.0;
}

}  // namespace

double ber_to_per(double ber, const FecModel& fec) {
    if (!(ber >= 0.0 && ber <= 1.0)) throw std::invalid_argument("ber must be in [0, 1]");
    if (ber == 0.0) return 0.0;
    if (ber == 1.0) return 1.0;
    // Symbol in error iff any of its bits flips.
    const double symbol_err = -std::expm1(fec.symbol_bits * std::log1p(-ber));
    const double block_fail =
        binomial_tail_above(fec.rs_n, fec.correctable_symbols, symbol_err);
    // Packet lost iff any of its blocks is uncorrectable.
    return -std::expm1(fec.blocks_per_packet() * std::log1p(-block_fail));
}

double uniform_draw(const RngStream& rng, std::uint64_t round, std::uint64_t tx,
                    std::uint64_t receiver) {
    std::uint64_t h = mix64(rng.seed);
    h = mix64(h ^ rng.trial);
    h = mix64(h ^ round);
    h = mix64(h ^ tx);
    h = mix64(h ^ receiver);
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

bool channel_delivers(const RngStream& rng, std::uint64_t round, std::uint64_t tx,
                      int receiver, double omega) {
    return uniform_draw(rng, round, tx, static_cast<std::uint64_t>(receiver)) >= omega;
}

std::vector<Mask> sample_round(const ChannelParams& omega, int transmissions,
                               const RngStream& rng, std::uint64_t round) {
    std::vector<Mask> deliveries(static_cast<std::size_t>(transmissions), 0);
    for (int t = 0; t < transmissions; ++t)
        for (int r = 1; r <= omega.receivers(); ++r)
            if (channel_delivers(rng, round, static_cast<std::uint64_t>(t), r, omega.omega(r)))
                deliveries[static_cast<std::size_t>(t)] |= Mask{1} << (r - 1);
    return deliveries;
}

}  // namespace ear
