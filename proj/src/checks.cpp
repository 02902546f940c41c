#include "aleph/checks.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace aleph::checks {

using consensus::ConsensusState;
using consensus::EvalResult;
using consensus::Vote;
using aleph::Digest;
using dag::LocalView;

std::vector<std::string> check_structural(const LocalView& view, Rng& rng, int samples) {
    std::vector<std::string> out;
    auto all = view.digests_in_insertion_order();

    for (const Digest& d : all) {
        const dag::Unit& u = view.unit(d);
        uint32_t level = view.level_of(d);
        uint32_t max_parent = 0;
        for (const Digest& p : u.parents) {
            if (!view.contains(p)) out.push_back("downward closure broken at " + d.hex());
            uint32_t pl = view.level_of(p);
            max_parent = std::max(max_parent, pl);
            if (pl > level) out.push_back("parent level above unit level at " + d.hex());
        }
        if (!u.parents.empty() && level > max_parent + 1)
            out.push_back("level jumps more than one past parents at " + d.hex());
    }

    // Prime multiplicity per (creator, level) exceeds one only under forks.
    std::map<std::pair<dag::ProcessId, uint32_t>, int> prime_count;
    for (uint32_t l = 0; l <= view.max_level(); ++l)
        for (const Digest& d : view.prime_units_at(l)) {
            auto creator = view.unit(d).creator;
            if (creator >= view.config().n_processes) continue;
            if (++prime_count[{creator, l}] > 1 && !view.is_forked(creator))
                out.push_back("multiple primes per level for unforked creator " +
                              std::to_string(creator));
        }

    // Sampled quorum intersection and two-levels-above.
    auto random_high_pair = [&]() -> std::optional<std::pair<Digest, Digest>> {
        for (int tries = 0; tries < 20; ++tries) {
            const Digest& hi = all[rng.below(all.size())];
            const Digest& lo = all[rng.below(all.size())];
            if (view.high_above(lo, hi)) return std::pair(lo, hi);
        }
        return std::nullopt;
    };
    for (int s = 0; s < samples; ++s) {
        auto a = random_high_pair();
        auto b = random_high_pair();
        if (a && b && !view.is_below(b->first, a->second) && !view.is_below(a->first, b->second))
            out.push_back("quorum intersection failed: " + a->second.hex() + " / " +
                          b->second.hex());
        if (a) {
            uint32_t threshold = view.level_of(a->second) + 2;
            int checked = 0;
            for (const Digest& w : all) {
                if (view.level_of(w) < threshold) continue;
                if (!view.high_above(a->first, w))
                    out.push_back("two-levels-above failed at " + w.hex());
                if (++checked >= 20) break;
            }
        }
    }
    return out;
}

std::vector<std::string> check_voting_lemmas(const LocalView& view, ConsensusState& state) {
    std::vector<std::string> out;
    std::vector<Digest> primes;
    for (uint32_t l = 0; l <= view.max_level(); ++l)
        for (const Digest& d : view.prime_units_at(l))
            if (view.unit(d).creator < view.config().n_processes) primes.push_back(d);

    // Full evaluation; blocked results simply stay out of the memo tables.
    for (const Digest& cand : primes)
        for (const Digest& u : primes) {
            if (view.level_of(u) < view.level_of(cand)) continue;
            consensus::pi(view, state, cand, u);
            consensus::delta(view, state, cand, u);
        }

    for (const Digest& cand : primes) {
        uint32_t lc = view.level_of(cand);

        // (i) single supermajority at odd rounds.
        for (uint32_t l = lc + 3; l <= view.max_level(); l += 2) {
            std::set<Vote> values;
            for (const Digest& u : view.prime_units_at(l)) {
                auto it = state.pi_memo.find({cand, u});
                if (it != state.pi_memo.end() && it->second != Vote::Bot) values.insert(it->second);
            }
            if (values.size() > 1)
                out.push_back("single-supermajority violated for " + cand.hex() + " at level " +
                              std::to_string(l));
        }

        // (ii) unanimous decision, which also rules out conflicting decisions.
        std::optional<std::pair<uint32_t, Vote>> first_decision;
        for (const Digest& u : primes) {
            auto it = state.delta_memo.find({cand, u});
            if (it == state.delta_memo.end() || it->second == Vote::Bot) continue;
            uint32_t lu = view.level_of(u);
            if (!first_decision || lu < first_decision->first) first_decision = {{lu, it->second}};
        }
        if (first_decision) {
            for (const Digest& u : primes) {
                auto it = state.delta_memo.find({cand, u});
                if (it == state.delta_memo.end() || it->second == Vote::Bot) continue;
                if (it->second != first_decision->second &&
                    view.level_of(u) >= first_decision->first + 2)
                    out.push_back("unanimous-decision violated for " + cand.hex());
                if (it->second != first_decision->second &&
                    view.level_of(u) < first_decision->first + 2)
                    out.push_back("conflicting decisions for " + cand.hex());
            }
        }

        // (v) hidden candidates only ever decide 0.
        bool hidden = false;
        for (const Digest& v : view.prime_units_at(lc + 4))
            if (!view.is_below(cand, v)) {
                hidden = true;
                break;
            }
        if (hidden) {
            for (const Digest& u : primes) {
                if (view.level_of(u) < lc + 4) continue;
                auto it = state.delta_memo.find({cand, u});
                if (it != state.delta_memo.end() && it->second == Vote::One)
                    out.push_back("hidden candidate decided 1: " + cand.hex());
            }
        }
    }

    // (iv) necessity of positive decisions.
    for (const Digest& u1 : primes) {
        uint32_t l1 = view.level_of(u1);
        if (l1 < 1 || l1 + 3 > view.max_level()) continue;
        bool premise = true;
        for (const Digest& other : view.prime_units_at(l1))
            if (other != u1 && view.is_below(other, u1)) {
                premise = false;
                break;
            }
        if (!premise) continue;
        for (const Digest& cand : view.prime_ancestors(u1)) {
            if (view.unit(cand).creator >= view.config().n_processes) continue;
            for (const Digest& u4 : view.prime_units_at(l1 + 3)) {
                EvalResult r = consensus::delta(view, state, cand, u4);
                if (r.blocked() || r.vote() != Vote::One)
                    out.push_back("positive decision missing for prime ancestor " + cand.hex() +
                                  " at witness " + u4.hex());
            }
        }
    }
    return out;
}

std::vector<std::string> check_cross_view(
    const std::vector<const LocalView*>& views,
    const std::vector<const ConsensusState*>& states) {
    std::vector<std::string> out;
    for (size_t a = 0; a < states.size(); ++a) {
        for (size_t b = a + 1; b < states.size(); ++b) {
            // Memoized evaluations on shared pairs must agree.
            for (const auto& [key, value] : states[a]->pi_memo) {
                auto it = states[b]->pi_memo.find(key);
                if (it != states[b]->pi_memo.end() && it->second != value)
                    out.push_back("pi disagreement between views " + std::to_string(a) + " and " +
                                  std::to_string(b));
            }
            for (const auto& [key, value] : states[a]->delta_memo) {
                auto it = states[b]->delta_memo.find(key);
                if (it != states[b]->delta_memo.end() && it->second != value)
                    out.push_back("delta disagreement between views " + std::to_string(a) +
                                  " and " + std::to_string(b));
            }
            // Ordered outputs must be mutual prefixes.
            const auto& ba = states[a]->batches;
            const auto& bb = states[b]->batches;
            size_t common = std::min(ba.size(), bb.size());
            for (size_t k = 0; k < common; ++k) {
                if (ba[k].timing_unit != bb[k].timing_unit || ba[k].units != bb[k].units) {
                    out.push_back("ordered outputs diverge at batch " + std::to_string(k) +
                                  " between views " + std::to_string(a) + " and " +
                                  std::to_string(b));
                    break;
                }
            }
        }
    }
    (void)views;
    return out;
}

}  // namespace aleph::checks
