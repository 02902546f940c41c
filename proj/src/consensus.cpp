#include "aleph/consensus.hpp"

#include "aleph/node.hpp"

#include <algorithm>
#include <stdexcept>

namespace aleph::consensus {

const char* to_string(Vote v) {
    switch (v) {
        case Vote::Zero: return "0";
        case Vote::One: return "1";
        case Vote::Bot: return "bot";
    }
    return "?";
}

namespace {

void require_prime(const dag::LocalView& view, const Digest& d, const char* who) {
    if (!view.is_prime(d)) throw std::invalid_argument(std::string(who) + ": unit is not prime");
}

// Deterministic common fallback bit for level-0 candidates, whose dealer
// would be the candidate's own creator and whose nonces precede any level
// that carries shares. A function of (candidate, nonce) alone, so every
// view resolves it identically.
int level0_fallback_bit(const Digest& candidate, uint32_t nonce) {
    Bytes buf;
    put_bytes(buf, std::span<const uint8_t>(reinterpret_cast<const uint8_t*>("lvl0coin"), 8));
    put_bytes(buf, candidate.bytes);
    put_u32(buf, nonce);
    return crypto::sha256d(buf).bytes[31] & 1;
}

// Combined coin bit for (dealer, nonce), or Blocked while the view holds
// fewer than coin_k shares.
EvalResult coin_bit(const dag::LocalView& view, ConsensusState& state, CoinId id) {
    auto it = state.coin_cache.find(id);
    if (it != state.coin_cache.end()) return EvalResult::of(Vote(it->second));
    const auto* shares = view.shares_for(id.dealer, id.nonce);
    uint32_t coin_k = view.config().coin_k;
    if (!shares || shares->size() < coin_k) return EvalResult::blocked(id);
    std::vector<crypto::CoinShare> list;
    list.reserve(shares->size());
    for (const auto& [holder, share] : *shares) list.push_back(share);
    int bit = crypto::coin_combine(list, coin_k, id.nonce);
    state.coin_cache.emplace(id, bit);
    return EvalResult::of(Vote(bit));
}

struct Votes {
    std::vector<std::pair<ProcessId, Vote>> entries;
    bool blocked = false;
    CoinId blocked_on{};
};

template <typename Eval>
Votes gather(const dag::LocalView& view, const Digest& u, Eval&& eval) {
    Votes out;
    for (const Digest& v : view.prime_ancestors(u)) {
        EvalResult r = eval(v);
        if (r.blocked()) {
            out.blocked = true;
            out.blocked_on = r.coin();
            return out;
        }
        out.entries.emplace_back(view.unit(v).creator, r.vote());
    }
    return out;
}

}  // namespace

Vote round_type(const dag::LocalView& view, const Digest& candidate, const Digest& u) {
    require_prime(view, candidate, "round_type");
    require_prime(view, u, "round_type");
    uint32_t lc = view.level_of(candidate);
    uint32_t lu = view.level_of(u);
    if (lu <= lc + 1) return Vote::Bot;
    return Vote((lu - lc) % 2);
}

Vote sup_maj(const std::vector<std::pair<ProcessId, Vote>>& votes, uint32_t supermajority) {
    uint64_t zero_mask = 0, one_mask = 0;
    for (const auto& [creator, v] : votes) {
        if (v == Vote::Zero) zero_mask |= 1ull << creator;
        if (v == Vote::One) one_mask |= 1ull << creator;
    }
    if (uint32_t(std::popcount(one_mask)) >= supermajority) return Vote::One;
    if (uint32_t(std::popcount(zero_mask)) >= supermajority) return Vote::Zero;
    return Vote::Bot;
}

Vote exist_pref1(const std::vector<std::pair<ProcessId, Vote>>& votes) {
    bool saw_zero = false;
    for (const auto& [creator, v] : votes) {
        if (v == Vote::One) return Vote::One;
        if (v == Vote::Zero) saw_zero = true;
    }
    return saw_zero ? Vote::Zero : Vote::Bot;
}

EvalResult pi(const dag::LocalView& view, ConsensusState& state, const Digest& candidate,
              const Digest& u) {
    auto key = std::pair(candidate, u);
    if (auto it = state.pi_memo.find(key); it != state.pi_memo.end())
        return EvalResult::of(it->second);

    Vote rt = round_type(view, candidate, u);
    Vote result;
    if (rt == Vote::Bot) {
        result = view.is_below(candidate, u) ? Vote::One : Vote::Zero;
    } else {
        Votes votes = gather(view, u, [&](const Digest& v) { return pi(view, state, candidate, v); });
        if (votes.blocked) return EvalResult::blocked(votes.blocked_on);
        if (rt == Vote::One) {
            result = sup_maj(votes.entries, view.config().supermajority);
        } else {
            // Exist_TC with the coin of dealer fai(level-1, candidate).
            Vote ex = exist_pref1(votes.entries);
            if (ex != Vote::Bot) {
                result = ex;
            } else {
                uint32_t nonce = view.level_of(u) - 1;
                state.coin_consultations++;
                if (view.level_of(u) - view.level_of(candidate) == 2)
                    state.violations.push_back("coin consulted at round offset 2 for " +
                                               candidate.hex());
                if (view.level_of(candidate) == 0) {
                    result = Vote(level0_fallback_bit(candidate, nonce));
                } else {
                    CoinId id{node::fai(view, nonce, candidate), nonce};
                    EvalResult coin = coin_bit(view, state, id);
                    if (coin.blocked()) return coin;
                    result = coin.vote();
                }
            }
        }
    }
    state.pi_memo.emplace(key, result);
    return EvalResult::of(result);
}

EvalResult delta(const dag::LocalView& view, ConsensusState& state, const Digest& candidate,
                 const Digest& u) {
    auto key = std::pair(candidate, u);
    if (auto it = state.delta_memo.find(key); it != state.delta_memo.end())
        return EvalResult::of(it->second);

    Vote rt = round_type(view, candidate, u);
    Vote result;
    if (rt == Vote::Bot) {
        result = Vote::Bot;
    } else if (rt == Vote::Zero) {
        Votes votes = gather(view, u, [&](const Digest& v) { return pi(view, state, candidate, v); });
        if (votes.blocked) return EvalResult::blocked(votes.blocked_on);
        result = sup_maj(votes.entries, view.config().supermajority);
    } else {
        Votes votes =
            gather(view, u, [&](const Digest& v) { return delta(view, state, candidate, v); });
        if (votes.blocked) return EvalResult::blocked(votes.blocked_on);
        result = exist_pref1(votes.entries);
    }
    state.delta_memo.emplace(key, result);
    return EvalResult::of(result);
}

DecideOutcome decide_candidate(const dag::LocalView& view, ConsensusState& state,
                               const Digest& candidate) {
    if (auto it = state.decisions.find(candidate); it != state.decisions.end())
        return {true, it->second, state.decision_witness_level.at(candidate)};
    require_prime(view, candidate, "decide_candidate");

    uint32_t lc = view.level_of(candidate);
    for (uint32_t level = lc + 2; level <= view.max_level(); ++level) {
        for (const Digest& w : view.prime_units_at(level)) {
            EvalResult r = delta(view, state, candidate, w);
            if (r.blocked() || r.vote() == Vote::Bot) continue;
            state.decisions.emplace(candidate, r.vote());
            state.decision_witness_level.emplace(candidate, level);
            return {true, r.vote(), level};
        }
    }
    return {};
}

Settlement settle_slot(const dag::LocalView& view, ConsensusState& state, uint32_t level,
                       ProcessId creator) {
    auto key = std::pair(level, creator);
    if (auto it = state.settled.find(key); it != state.settled.end()) return it->second;

    std::vector<Digest> slot_primes;
    for (const Digest& d : view.prime_units_at(level))
        if (view.unit(d).creator == creator) slot_primes.push_back(d);

    Settlement s;
    if (slot_primes.size() == 1) {
        DecideOutcome d = decide_candidate(view, state, slot_primes[0]);
        if (d.decided && d.value == Vote::One) {
            s.kind = Settlement::Kind::SettledOne;
            s.unit = slot_primes[0];
            s.witness_level = d.witness_level;
            state.settled.emplace(key, s);
            return s;
        }
    }
    // Virtual-zero: a level+4 witness below which every prime of this slot
    // is decided 0 settles the slot negatively, vacuously when none is below.
    for (const Digest& v : view.prime_units_at(level + 4)) {
        bool all_zero = true;
        for (const Digest& a : slot_primes) {
            if (!view.is_below(a, v)) continue;
            DecideOutcome d = decide_candidate(view, state, a);
            if (!d.decided || d.value != Vote::Zero) {
                all_zero = false;
                break;
            }
        }
        if (all_zero) {
            s.kind = Settlement::Kind::SettledZero;
            s.witness_level = level + 4;
            state.settled.emplace(key, s);
            return s;
        }
    }
    return s;  // Pending, not frozen
}

ChooseOutcome choose_timing(const dag::LocalView& view, ConsensusState& state, uint32_t level) {
    if (state.timing_chain.size() > level)
        return {true, state.timing_chain[level]};
    if (state.timing_chain.size() != level)
        throw std::logic_error("timing chain must be extended level by level");

    uint32_t choice_level = 0;
    for (ProcessId creator : view.sigma(level)) {
        Settlement s = settle_slot(view, state, level, creator);
        switch (s.kind) {
            case Settlement::Kind::Pending:
                return {};
            case Settlement::Kind::SettledZero:
                choice_level = std::max(choice_level, s.witness_level);
                continue;
            case Settlement::Kind::SettledOne:
                choice_level = std::max(choice_level, s.witness_level);
                state.timing_chain.push_back(s.unit);
                state.choice_offsets.push_back(choice_level - level);
                return {true, s.unit};
        }
    }
    return {};  // every slot settled zero: wait for more primes at this level
}

std::vector<Digest> break_ties(const dag::LocalView& view, const std::vector<Digest>& batch) {
    if (batch.empty()) return {};
    Digest r{};
    for (const Digest& d : batch)
        for (size_t i = 0; i < 32; ++i) r.bytes[i] ^= d.bytes[i];

    std::vector<Digest> remaining = batch;
    std::vector<Digest> out;
    out.reserve(batch.size());
    while (!remaining.empty()) {
        std::vector<Digest> layer;
        for (const Digest& u : remaining) {
            bool minimal = std::ranges::none_of(remaining, [&](const Digest& v) {
                return v != u && view.is_below(v, u);
            });
            if (minimal) layer.push_back(u);
        }
        std::sort(layer.begin(), layer.end(), [&](const Digest& a, const Digest& b) {
            Digest ta, tb;
            for (size_t i = 0; i < 32; ++i) {
                ta.bytes[i] = a.bytes[i] ^ r.bytes[i];
                tb.bytes[i] = b.bytes[i] ^ r.bytes[i];
            }
            if (ta != tb) return ta < tb;
            auto ca = view.unit(a).creator, cb = view.unit(b).creator;
            if (ca != cb) return ca < cb;
            return a < b;
        });
        std::erase_if(remaining, [&](const Digest& u) {
            return std::ranges::find(layer, u) != layer.end();
        });
        out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

BatchOutcome next_batch(const dag::LocalView& view, ConsensusState& state) {
    uint32_t k = uint32_t(state.batches.size());
    if (state.timing_chain.size() <= k) return {};
    const Digest& timing = state.timing_chain[k];

    std::vector<Digest> members;
    for (const Digest& d : view.digests_in_insertion_order())
        if (view.is_below(d, timing) && !state.ordered.count(d)) members.push_back(d);

    BatchRecord rec;
    rec.index = k;
    rec.timing_unit = timing;
    rec.units = break_ties(view, members);
    for (const Digest& d : rec.units) {
        const auto& payload = view.unit(d).payload;
        if (!payload.empty()) rec.payload_digests.push_back(crypto::sha256d(payload));
        state.ordered.insert(d);
    }
    state.batches.push_back(rec);
    return {true, rec};
}

size_t advance_ordering(const dag::LocalView& view, ConsensusState& state) {
    size_t emitted = 0;
    while (true) {
        uint32_t level = uint32_t(state.timing_chain.size());
        // Keep a safety margin: slots at the view's frontier can still gain
        // primes, but settlements only ever use witnesses at level + 4.
        ChooseOutcome c = choose_timing(view, state, level);
        if (!c.chosen) break;
        BatchOutcome b = next_batch(view, state);
        if (!b.ready) break;
        ++emitted;
    }
    return emitted;
}

ValidationStatus validation_status(const dag::LocalView& view, const Digest& u) {
    std::vector<Digest> variants = view.fork_variants_of(u);
    uint32_t lu = view.level_of(u);

    auto try_witness = [&](const Digest& v) -> bool {
        if (v == u || !view.high_above(u, v)) return false;
        for (const Digest& f : variants)
            if (view.is_below(f, v)) return false;
        return true;
    };

    // Validators usually appear within two levels; scan those first.
    std::vector<Digest> ordered = view.digests_in_insertion_order();
    std::stable_sort(ordered.begin(), ordered.end(), [&](const Digest& a, const Digest& b) {
        return view.level_of(a) < view.level_of(b);
    });
    for (const Digest& v : ordered) {
        if (view.level_of(v) < lu) continue;
        if (try_witness(v)) return {true, v};
    }
    return {};
}

}  // namespace aleph::consensus
