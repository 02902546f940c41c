#include "aleph/node.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <stdexcept>

namespace aleph::node {

namespace {

std::array<uint8_t, 32> derive_seed32(uint64_t run_seed, ProcessId id, const char* label) {
    Bytes buf;
    put_bytes(buf, std::span<const uint8_t>(reinterpret_cast<const uint8_t*>("alephkey"), 8));
    put_u64(buf, run_seed);
    put_u32(buf, id);
    put_bytes(buf, std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(label), 4));
    return crypto::sha256d(buf).bytes;
}

}  // namespace

ProcessKeys ProcessKeys::derive(uint64_t run_seed, ProcessId id) {
    ProcessKeys k;
    k.sign = crypto::SigningKey::from_seed(derive_seed32(run_seed, id, "sign"));
    k.box = crypto::BoxSecretKey::from_seed(derive_seed32(run_seed, id, "boxx"));
    k.dealer_seed = derive_seed32(run_seed, id, "deal");
    return k;
}

Roster derive_roster(uint64_t run_seed, uint32_t n_processes) {
    Roster r;
    for (ProcessId id = 0; id < n_processes; ++id) {
        ProcessKeys k = ProcessKeys::derive(run_seed, id);
        r.verify_keys.push_back(k.sign.verify_key());
        r.box_keys.push_back(k.box.public_key());
    }
    return r;
}

ProcessId fai(const dag::LocalView& view, uint32_t nonce, const Digest& v) {
    for (ProcessId idx : view.sigma(nonce))
        if (view.dealing_unit_below(idx, v)) return idx;
    throw std::runtime_error("fai: no dealing unit below the given unit");
}

ProcessCore::ProcessCore(ProcessId id, dag::ViewConfig cfg, ProcessKeys keys, Roster roster,
                         uint64_t rng_seed)
    : id_(id),
      cfg_(cfg),
      keys_(std::move(keys)),
      roster_(std::move(roster)),
      rng_(rng_seed),
      view_(cfg, roster_.verify_keys),
      dealer_state_(cfg.n_processes, DealerState::Unknown),
      holder_secret_(cfg.n_processes) {
    dag::InsertResult r = view_.insert(dag::make_genesis(cfg_.n_processes));
    assert(r == dag::InsertResult::Inserted);
    (void)r;
}

void ProcessCore::embed_coin_material(dag::Unit& draft, const dag::LocalView::Hypothetical& hypo) {
    if (!last_created_) {
        draft.dealing =
            crypto::coin_deal(id_, cfg_.coin_k, roster_.box_keys, keys_.dealer_seed);
        return;
    }
    if (!hypo.prime || hypo.level < 4) return;

    const uint32_t level = hypo.level;
    // Family of hyperedges: for each prime V below the draft with
    // 1 <= L(V) <= level - 3, the set of dealers with a dealing unit below V.
    // Walking sigma_level, dealers join the transversal until every hyperedge
    // is hit; the walker's own shares for those dealers ride along.
    std::vector<std::vector<uint64_t>> family;  // dealer masks, N <= 64
    for (uint32_t lv = 1; lv + 3 <= level; ++lv) {
        for (const auto& vd : view_.prime_units_at(lv)) {
            bool below_draft = std::ranges::any_of(
                draft.parents, [&](const Digest& p) { return view_.is_below(vd, p); });
            if (!below_draft) continue;
            std::vector<uint64_t> mask(1, 0);
            for (ProcessId dealer = 0; dealer < cfg_.n_processes; ++dealer)
                if (view_.dealing_unit_below(dealer, vd)) mask[0] |= 1ull << dealer;
            family.push_back(std::move(mask));
        }
    }
    if (family.empty()) return;

    auto dealing_below_draft = [&](ProcessId dealer) {
        return std::ranges::any_of(draft.parents, [&](const Digest& p) {
            return view_.dealing_unit_below(dealer, p).has_value();
        });
    };

    uint64_t transversal = 0;
    uint32_t transversal_size = 0;
    auto covered = [&] {
        return std::ranges::all_of(family,
                                   [&](const auto& mask) { return mask[0] & transversal; });
    };
    for (ProcessId dealer : view_.sigma(level)) {
        if (covered()) break;
        bool in_union = std::ranges::any_of(
            family, [&](const auto& mask) { return (mask[0] >> dealer) & 1; });
        if (!in_union || !dealing_below_draft(dealer)) continue;
        transversal |= 1ull << dealer;
        ++transversal_size;
        if (dealer_state_[dealer] == DealerState::Good)
            draft.coin_shares.push_back(
                crypto::coin_make_share(dealer, id_, level, holder_secret_[dealer]));
    }
    transversal_log_.emplace_back(level, transversal_size);
}

const dag::Unit& ProcessCore::create_unit(Bytes payload) {
    dag::Unit draft;
    draft.creator = id_;
    draft.payload = std::move(payload);

    if (!last_created_) {
        draft.parents = {view_.genesis(), view_.genesis()};
    } else {
        auto above_own = view_.maximal_units_above(*last_created_);
        auto all_max = view_.maximal_units();
        assert(!above_own.empty() && !all_max.empty());
        draft.parents.push_back(above_own[rng_.below(above_own.size())]);
        draft.parents.push_back(all_max[rng_.below(all_max.size())]);
    }

    auto hypo = view_.hypothesize(id_, draft.parents[0], draft.parents[1]);
    embed_coin_material(draft, hypo);
    sign_unit(draft, keys_.sign);

    Digest digest = dag::hash_of(draft);
    dag::InsertResult res = integrate(draft);
    if (res != dag::InsertResult::Inserted)
        throw std::logic_error(std::string("own unit rejected: ") + dag::to_string(res));
    last_created_ = digest;
    return view_.unit(digest);
}

void ProcessCore::note_dealing(const dag::Unit& u, const Digest& digest) {
    if (!u.dealing || u.creator >= cfg_.n_processes) return;
    if (view_.dealing_unit_of(u.creator) != digest) return;  // a later fork variant
    auto secret = crypto::coin_recover_secret(*u.dealing, id_, keys_.box);
    if (secret) {
        dealer_state_[u.creator] = DealerState::Good;
        holder_secret_[u.creator] = *secret;
    } else {
        dealer_state_[u.creator] = DealerState::Faulty;
    }
}

dag::InsertResult ProcessCore::integrate(const dag::Unit& u) {
    dag::InsertResult res = view_.insert(u);
    if (res == dag::InsertResult::Inserted) note_dealing(u, dag::hash_of(u));
    return res;
}

ProcessCore::BatchApply ProcessCore::apply_batch(const std::vector<dag::Unit>& units) {
    std::vector<Digest> before = view_.digests_in_insertion_order();
    for (const dag::Unit& u : units) {
        dag::InsertResult res = integrate(u);
        if (res == dag::InsertResult::Inserted || res == dag::InsertResult::Duplicate) continue;
        // Roll back: rebuild the view from the pre-batch unit list. Units
        // that were valid once stay valid, so reinserts cannot fail.
        dag::LocalView fresh(cfg_, roster_.verify_keys);
        std::fill(dealer_state_.begin(), dealer_state_.end(), DealerState::Unknown);
        for (const Digest& d : before) {
            if (fresh.insert(view_.unit(d)) != dag::InsertResult::Inserted)
                throw std::logic_error("rollback reinsert failed");
        }
        view_ = std::move(fresh);
        for (const Digest& d : before) {
            const dag::Unit& old = view_.unit(d);
            if (old.dealing) note_dealing(old, d);
        }
        return {false, res};
    }
    return {true, dag::InsertResult::Inserted};
}

bool ProcessCore::has_holder_secret(ProcessId dealer) const {
    return dealer < dealer_state_.size() && dealer_state_[dealer] == DealerState::Good;
}

const dag::Unit& ProcessCore::create_fork_variant(const dag::Unit& original) {
    if (original.creator != id_) throw std::invalid_argument("can only fork own units");
    dag::Unit variant = original;
    variant.payload.push_back(0xFF);
    sign_unit(variant, keys_.sign);
    Digest digest = dag::hash_of(variant);
    if (integrate(variant) != dag::InsertResult::Inserted)
        throw std::logic_error("fork variant rejected by own view");
    return view_.unit(digest);
}

}  // namespace aleph::node
