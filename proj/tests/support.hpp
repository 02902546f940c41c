#pragma once

// Shared fixtures: a random signed-DAG generator (optionally with a forking
// creator) and a lock-step network where every create is followed by a full
// synchronization, which collapses the DAG into a clean round structure.

#include "aleph/gossip.hpp"
#include "aleph/node.hpp"
#include "aleph/rng.hpp"

#include <memory>
#include <vector>

namespace aleph::testing {

struct GeneratedDag {
    dag::ViewConfig cfg;
    node::Roster roster;
    std::vector<dag::Unit> units;  // creation order, always parent-closed
};

// Random DAG over n creators (creator 0 forks when with_forker is set):
// first unit per creator is a proper dealing unit, later units pick the own
// chain tip (or, for the forker, any own unit) and a random existing unit.
inline GeneratedDag generate_dag(Rng& rng, uint32_t n, size_t total_units, bool with_forker,
                                 uint64_t key_seed = 1000) {
    GeneratedDag out;
    out.cfg = dag::make_view_config(n);
    out.roster = node::derive_roster(key_seed, n);

    dag::Unit genesis = dag::make_genesis(n);
    Digest genesis_d = dag::hash_of(genesis);
    out.units.push_back(genesis);

    std::vector<std::vector<Digest>> own(n);  // per-creator units, oldest first
    std::vector<Digest> pool{genesis_d};

    for (size_t i = 0; i < total_units; ++i) {
        uint32_t c = uint32_t(rng.below(n));
        dag::Unit u;
        u.creator = c;
        auto keys = node::ProcessKeys::derive(key_seed, c);
        if (own[c].empty()) {
            u.parents = {genesis_d, genesis_d};
            u.dealing = crypto::coin_deal(c, out.cfg.coin_k, out.roster.box_keys,
                                          keys.dealer_seed);
        } else {
            bool fork = with_forker && c == 0 && own[c].size() > 1 && rng.below(4) == 0;
            const Digest& p1 = fork ? own[c][rng.below(own[c].size())] : own[c].back();
            const Digest& p2 = pool[rng.below(pool.size())];
            u.parents = {p1, p2};
            u.payload = {uint8_t(i), uint8_t(i >> 8), uint8_t(c)};
        }
        dag::sign_unit(u, keys.sign);
        Digest d = dag::hash_of(u);
        own[c].push_back(d);
        pool.push_back(d);
        out.units.push_back(u);
    }
    return out;
}

inline dag::LocalView view_of(const GeneratedDag& g) {
    dag::LocalView view(g.cfg, g.roster.verify_keys);
    for (const auto& u : g.units) {
        auto res = view.insert(u);
        if (res != dag::InsertResult::Inserted)
            throw std::logic_error("generated unit rejected");
    }
    return view;
}

// N cores advancing in strict rounds with a full pairwise sync after every
// create. Deterministic for a fixed seed.
struct LockstepNet {
    std::vector<std::unique_ptr<node::ProcessCore>> cores;
    uint64_t session = 0;

    explicit LockstepNet(uint32_t n, uint64_t seed = 5) {
        auto cfg = dag::make_view_config(n);
        auto roster = node::derive_roster(seed, n);
        for (uint32_t i = 0; i < n; ++i)
            cores.push_back(std::make_unique<node::ProcessCore>(
                i, cfg, node::ProcessKeys::derive(seed, i), roster, seed + i));
    }

    void full_sync() {
        for (size_t i = 0; i < cores.size(); ++i)
            for (size_t j = i + 1; j < cores.size(); ++j)
                gossip::sync_session(*cores[i], *cores[j], session++);
    }

    void round(uint32_t units_per_core = 1) {
        for (uint32_t k = 0; k < units_per_core; ++k) {
            for (auto& core : cores) {
                core->create_unit({});
                full_sync();
            }
        }
    }

    void rounds(uint32_t count) {
        for (uint32_t i = 0; i < count; ++i) round();
    }
};

}  // namespace aleph::testing
