#include "ear/schemes.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ear/channel.hpp"
#include "ear/overhead.hpp"
#include "ear/pattern.hpp"

namespace ear {

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Arq: return "arq";
        case Scheme::NcArq: return "ncarq";
        case Scheme::Ear: return "ear";
    }
    return "?";
}

Scheme parse_scheme(const std::string& name) {
    if (name == "arq" || name == "harq") return Scheme::Arq;
    if (name == "ncarq" || name == "nc-arq" || name == "ncharq") return Scheme::NcArq;
    if (name == "ear") return Scheme::Ear;
    throw std::invalid_argument("unknown scheme: " + name);
}

namespace {

struct QueueKey {
    Mask pattern = 0;
    Mask dests = 0;
    auto operator<=>(const QueueKey&) const = default;
};

// One retransmission unit: a native packet or an XOR of natives. `dests`
// holds the receivers still owed a constituent, `holders` the receivers known
// to possess the unit. The pair (holders, dests) is the unit's queue key.
struct Unit {
    std::vector<std::uint32_t> natives;
    Mask dests = 0;
    Mask holders = 0;
    QueueKey key;
    bool alive = true;
};

class Simulator {
  public:
    Simulator(const SimConfig& cfg, Scheme scheme)
        : cfg_(cfg), scheme_(scheme), n_(cfg.receivers), k_(cfg.packets),
          rng_{cfg.seed, cfg.trial} {
        if (n_ < 2 || n_ > kMaxReceivers) throw std::invalid_argument("receivers out of range");
        if (k_ < 1) throw std::invalid_argument("packets must be >= 1");
        if (cfg.omega.receivers() != n_) throw std::invalid_argument("omega length mismatch");
        for (double w : cfg.omega.omegas)
            if (!(w >= 0.0 && w <= 0.99))
                throw std::invalid_argument("simulation requires omega <= 0.99");
        int worst = 1;
        for (int r = 2; r <= n_; ++r)
            if (cfg.omega.omega(r) >= cfg.omega.omega(worst)) worst = r;
        const Mask full = (Mask{1} << n_) - 1;
        unwanted_class_ = QueueKey{bit(worst), full & ~bit(worst)};
    }

    TrialResult run() {
        initial_phase();
        std::uint64_t round = 1;
        while (delivered_ < total_packets()) {
            if (static_cast<long>(round) > cfg_.round_cap) {
                result_.rounds = static_cast<long>(round - 1);
                result_.completed = false;
                return result_;
            }
            compact_queues();
            const auto txs = schedule();
            if (txs.empty())
                throw std::logic_error("undelivered packets but nothing scheduled");
            account(txs);
            for (std::size_t t = 0; t < txs.size(); ++t)
                apply_feedback(txs[t], delivery_mask(round, t));
            ++round;
        }
        result_.rounds = static_cast<long>(round - 1);
        result_.completed = true;
        return result_;
    }

  private:
    using Tx = std::vector<std::uint32_t>;

    long total_packets() const { return static_cast<long>(n_) * k_; }
    int owner(std::uint32_t native) const { return static_cast<int>(native / k_) + 1; }
    static Mask bit(int receiver) { return Mask{1} << (receiver - 1); }

    void initial_phase() {
        delivered_flags_.assign(static_cast<std::size_t>(total_packets()), 0);
        result_.initial_tx = total_packets();
        for (long id = 0; id < total_packets(); ++id) {
            Mask got = 0;
            for (int r = 1; r <= n_; ++r)
                if (channel_delivers(rng_, 0, static_cast<std::uint64_t>(id), r,
                                     cfg_.omega.omega(r)))
                    got |= bit(r);
            const auto native = static_cast<std::uint32_t>(id);
            if (got & bit(owner(native))) {
                delivered_flags_[id] = 1;
                ++delivered_;
                continue;
            }
            Unit u;
            u.natives = {native};
            u.dests = bit(owner(native));
            u.holders = got;
            enqueue(std::move(u));
        }
    }

    void enqueue(Unit&& u) {
        u.key = QueueKey{u.holders, u.dests};
        const auto id = static_cast<std::uint32_t>(units_.size());
        queues_[u.key].push_back(id);
        units_.push_back(std::move(u));
    }

    void rekey(std::uint32_t id) {
        Unit& u = units_[id];
        const QueueKey key{u.holders, u.dests};
        if (key == u.key) return;
        u.key = key;
        queues_[key].push_back(id);  // stale entry under the old key is skipped
    }

    void compact_queues() {
        for (auto it = queues_.begin(); it != queues_.end();) {
            auto& q = it->second;
            std::erase_if(q, [&](std::uint32_t id) {
                return !units_[id].alive || units_[id].key != it->first;
            });
            it = q.empty() ? queues_.erase(it) : std::next(it);
        }
    }

    // --- scheduling -------------------------------------------------------

    struct Cursor {
        std::deque<std::uint32_t>* q = nullptr;
        std::size_t pos = 0;
    };

    bool peek(Cursor& c, const QueueKey& key, std::uint32_t& out) {
        while (c.pos < c.q->size()) {
            const std::uint32_t id = (*c.q)[c.pos];
            const Unit& u = units_[id];
            if (u.alive && u.key == key && !scheduled_[id]) {
                out = id;
                return true;
            }
            ++c.pos;
        }
        return false;
    }

    void take(std::uint32_t id, Tx& tx) {
        scheduled_[id] = 1;
        tx.push_back(id);
    }

    std::vector<Tx> schedule() {
        scheduled_.assign(units_.size(), 0);
        std::map<QueueKey, Cursor> cursors;
        for (auto& [key, q] : queues_) cursors[key] = Cursor{&q, 0};

        std::vector<Tx> txs;
        switch (scheme_) {
            case Scheme::Arq: schedule_arq(cursors, txs); break;
            case Scheme::NcArq: schedule_ncarq(cursors, txs); break;
            case Scheme::Ear: schedule_ear(cursors, txs); break;
        }
        return txs;
    }

    void schedule_arq(std::map<QueueKey, Cursor>& cursors, std::vector<Tx>& txs) {
        for (auto& [key, c] : cursors) {
            std::uint32_t id;
            while (peek(c, key, id)) {
                Tx tx;
                take(id, tx);
                txs.push_back(std::move(tx));
            }
        }
    }

    std::vector<int> receivers_by_loss() const {
        std::vector<int> order(static_cast<std::size_t>(n_));
        std::iota(order.begin(), order.end(), 1);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return cfg_.omega.omega(a) < cfg_.omega.omega(b);
        });
        return order;
    }

    struct Bucket {
        QueueKey key;
        Cursor* cursor = nullptr;
    };

    // Greedy maximal grouping over native packets with their patterns frozen
    // at initial classification: walk destinations in ascending loss rate and
    // extend each group with the lightest compatible pattern per receiver.
    void schedule_ncarq(std::map<QueueKey, Cursor>& cursors, std::vector<Tx>& txs) {
        const auto order = receivers_by_loss();
        std::vector<std::vector<Bucket>> seeds(static_cast<std::size_t>(n_) + 1);
        std::vector<std::vector<Bucket>> partners(static_cast<std::size_t>(n_) + 1);
        for (auto& [key, c] : cursors) {
            const int r = std::countr_zero(key.dests) + 1;
            seeds[static_cast<std::size_t>(r)].push_back({key, &c});
        }
        for (std::size_t r = 1; r < seeds.size(); ++r) {
            std::sort(seeds[r].begin(), seeds[r].end(),
                      [](const Bucket& a, const Bucket& b) { return a.key.pattern < b.key.pattern; });
            partners[r] = seeds[r];
            // Lightest compatible pattern first: spending a widely-overheard
            // packet on a small group starves later, larger groups.
            std::sort(partners[r].begin(), partners[r].end(), [](const Bucket& a, const Bucket& b) {
                const int wa = std::popcount(a.key.pattern), wb = std::popcount(b.key.pattern);
                return wa != wb ? wa < wb : a.key.pattern < b.key.pattern;
            });
        }

        for (int r : order) {
            for (Bucket& b : seeds[static_cast<std::size_t>(r)]) {
                std::uint32_t seed_id;
                while (peek(*b.cursor, b.key, seed_id)) {
                    Tx tx;
                    take(seed_id, tx);
                    Mask group_dests = bit(r);
                    Mask common = b.key.pattern;
                    for (int r2 : order) {
                        if (group_dests & bit(r2)) continue;
                        if (!(common & bit(r2))) continue;
                        for (Bucket& pb : partners[static_cast<std::size_t>(r2)]) {
                            if ((pb.key.pattern & group_dests) != group_dests) continue;
                            std::uint32_t id2;
                            if (!peek(*pb.cursor, pb.key, id2)) continue;
                            take(id2, tx);
                            group_dests |= bit(r2);
                            common &= pb.key.pattern;
                            break;
                        }
                    }
                    emit(tx, txs);
                }
            }
        }
    }

    // Two passes: first pair each queue with its unique code group front to
    // front by ascending pattern weight; the leftovers then cascade into
    // smaller still-decodable groups, and whatever remains goes solo.
    void schedule_ear(std::map<QueueKey, Cursor>& cursors, std::vector<Tx>& txs) {
        std::vector<QueueKey> keys;
        keys.reserve(cursors.size());
        for (const auto& [key, c] : cursors) keys.push_back(key);
        std::sort(keys.begin(), keys.end(), [](const QueueKey& a, const QueueKey& b) {
            const int wa = std::popcount(a.pattern), wb = std::popcount(b.pattern);
            if (wa != wb) return wa < wb;
            return std::tie(a.pattern, a.dests) < std::tie(b.pattern, b.dests);
        });

        std::vector<std::uint32_t> leftovers;
        for (const QueueKey& key : keys) {
            Cursor& c = cursors[key];
            std::uint32_t seed_id;
            while (peek(c, key, seed_id)) {
                Tx tx;
                take(seed_id, tx);
                if (key.pattern == 0) {
                    emit(tx, txs);  // nobody overheard it; no partner can exist
                    continue;
                }
                const Mask filled = key.pattern | key.dests;
                for (int j = 1; j <= n_; ++j) {
                    if (!(key.pattern & bit(j))) continue;
                    const Mask need = filled & ~bit(j);
                    bool found = false;
                    const QueueKey exact{need, bit(j)};
                    auto it = cursors.find(exact);
                    std::uint32_t id2;
                    if (it != cursors.end() && peek(it->second, exact, id2)) {
                        take(id2, tx);
                        found = true;
                    }
                    if (found) continue;
                    for (auto& [pk, pc] : cursors) {
                        if (pk.dests != bit(j)) continue;
                        if ((pk.pattern & need) != need) continue;
                        if (peek(pc, pk, id2)) { take(id2, tx); break; }
                    }
                }
                if (tx.size() >= 2)
                    emit(tx, txs);
                else
                    leftovers.push_back(seed_id);
            }
        }

        std::vector<char> used(leftovers.size(), 0);
        for (std::size_t i = 0; i < leftovers.size(); ++i) {
            if (used[i]) continue;
            used[i] = 1;
            Tx tx{leftovers[i]};
            Mask group_dests = units_[leftovers[i]].dests;
            Mask common = units_[leftovers[i]].holders;
            for (;;) {
                std::size_t best = leftovers.size();
                for (std::size_t j = i + 1; j < leftovers.size(); ++j) {
                    if (used[j]) continue;
                    const Unit& v = units_[leftovers[j]];
                    if (v.dests & group_dests) continue;
                    if ((v.holders & group_dests) != group_dests) continue;
                    if ((common & v.dests) != v.dests) continue;
                    if (best == leftovers.size()) {
                        best = j;
                        continue;
                    }
                    const Unit& w = units_[leftovers[best]];
                    const int wv = std::popcount(v.holders), ww = std::popcount(w.holders);
                    if (wv < ww || (wv == ww && std::tie(v.holders, v.dests) <
                                                    std::tie(w.holders, w.dests)))
                        best = j;
                }
                if (best == leftovers.size()) break;
                used[best] = 1;
                tx.push_back(leftovers[best]);
                group_dests |= units_[leftovers[best]].dests;
                common &= units_[leftovers[best]].holders;
            }
            emit(tx, txs);
        }
    }

    void emit(Tx& tx, std::vector<Tx>& txs) {
        if (tx.size() >= 2) {
            std::vector<GroupMember> members;
            members.reserve(tx.size());
            for (std::uint32_t id : tx)
                members.push_back({LossPattern(units_[id].holders, n_),
                                   ReceiverSet{units_[id].dests}});
            if (!can_code(members)) ++result_.code_check_failures;
            int coded = 0;
            for (std::uint32_t id : tx) coded += units_[id].natives.size() >= 2;
            if (coded >= 2) ++result_.coded_coded_combines;
        } else if (scheme_ == Scheme::Ear && units_[tx.front()].natives.size() >= 2 &&
                   units_[tx.front()].key == unwanted_class_) {
            // A coded compound held only by the lossiest receiver and wanted
            // by all others has no partner this round: an unwanted-packet
            // retransmission.
            ++result_.unwanted_retx;
        }
        txs.push_back(std::move(tx));
    }

    // --- feedback ---------------------------------------------------------

    Mask delivery_mask(std::uint64_t round, std::size_t tx_index) {
        Mask got = 0;
        for (int r = 1; r <= n_; ++r)
            if (channel_delivers(rng_, round, tx_index, r, cfg_.omega.omega(r)))
                got |= bit(r);
        return got;
    }

    void account(const std::vector<Tx>& txs) {
        result_.retransmissions += static_cast<long>(txs.size());
        result_.per_round_retx.push_back(static_cast<long>(txs.size()));
        ++result_.rounds;
        const HeaderModel a{HeaderScheme::A};
        const HeaderModel b{HeaderScheme::B};
        for (const Tx& tx : txs) {
            std::size_t constituents = 0;
            for (std::uint32_t id : tx) constituents += units_[id].natives.size();
            result_.overhead_a_bytes += header_len(constituents, a, n_);
            result_.overhead_b_bytes += header_len(constituents, b, n_);
        }
    }

    void obtain(int r, Unit& u) {
        if (u.holders & bit(r)) return;
        u.holders |= bit(r);
        if (u.dests & bit(r)) {
            u.dests &= ~bit(r);
            for (std::uint32_t native : u.natives) {
                if (owner(native) == r && !delivered_flags_[native]) {
                    delivered_flags_[native] = 1;
                    ++delivered_;
                    break;
                }
            }
        }
    }

    void apply_feedback(const Tx& tx, Mask got) {
        std::vector<Mask> before;
        before.reserve(tx.size());
        for (std::uint32_t id : tx) before.push_back(units_[id].holders);

        const bool track_overhear = scheme_ == Scheme::Ear;
        Mask blob_mask = 0;
        for (int r = 1; r <= n_; ++r) {
            if (!(got & bit(r))) continue;
            int unheld = 0;
            std::uint32_t lone = 0;
            for (std::uint32_t id : tx) {
                if (!(units_[id].holders & bit(r))) {
                    ++unheld;
                    lone = id;
                }
            }
            if (unheld == 1) {
                Unit& u = units_[lone];
                if (track_overhear || (u.dests & bit(r))) obtain(r, u);
            } else if (unheld > 1) {
                blob_mask |= bit(r);
                // The receiver cannot strip the transmission down to any
                // single unit. For an intended receiver that is a decode
                // failure (the emission check should make it unreachable);
                // for a bystander the coded compound itself is new knowledge,
                // so the constituents collapse into one retransmission unit.
                for (std::uint32_t id : tx)
                    if (units_[id].dests & bit(r)) ++result_.decode_failures;
            }
        }

        for (std::size_t i = 0; i < tx.size(); ++i)
            if (before[i] & ~units_[tx[i]].holders) ++result_.monotonicity_violations;

        Mask hold_all = ~Mask{0};
        bool any_survivor = false;
        for (std::uint32_t id : tx) {
            hold_all &= units_[id].holders;
            if (units_[id].dests == 0)
                units_[id].alive = false;  // rescued
            else
                any_survivor = true;
        }

        // When every receiver of the transmission could already reduce it to
        // units it knows, the constituents stay independent and free to
        // recombine next round.
        bool has_coded = false;
        for (std::uint32_t id : tx)
            if (units_[id].natives.size() >= 2) has_coded = true;
        const bool collapse = blob_mask != 0 || (has_coded && got != 0);
        if (tx.size() >= 2 && any_survivor && collapse && scheme_ == Scheme::Ear) {
            // The coded transmission itself becomes the retransmission unit;
            // the constituents it carried are dropped from their queues.
            Unit merged;
            for (std::uint32_t id : tx) {
                auto& nat = units_[id].natives;
                merged.natives.insert(merged.natives.end(), nat.begin(), nat.end());
                merged.dests |= units_[id].dests;
                units_[id].alive = false;
            }
            std::sort(merged.natives.begin(), merged.natives.end());
            merged.holders = (got | hold_all) & ~merged.dests;
            enqueue(std::move(merged));
            return;
        }

        for (std::uint32_t id : tx)
            if (units_[id].alive) rekey(id);
    }

    const SimConfig& cfg_;
    Scheme scheme_;
    int n_;
    long k_;
    RngStream rng_;

    std::vector<Unit> units_;
    std::map<QueueKey, std::deque<std::uint32_t>> queues_;
    std::vector<char> delivered_flags_;
    std::vector<char> scheduled_;
    long delivered_ = 0;
    QueueKey unwanted_class_;
    TrialResult result_;
};

}  // namespace

TrialResult run_trial(const SimConfig& config, Scheme scheme) {
    Simulator sim(config, scheme);
    return sim.run();
}

}  // namespace ear
