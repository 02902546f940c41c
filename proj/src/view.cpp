#include "aleph/view.hpp"

#include "aleph/permutation.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace aleph::dag {

const char* to_string(InsertResult r) {
    switch (r) {
        case InsertResult::Inserted: return "inserted";
        case InsertResult::Duplicate: return "duplicate";
        case InsertResult::MissingParent: return "missing-parent";
        case InsertResult::BadSignature: return "bad-signature";
        case InsertResult::Malformed: return "malformed";
    }
    return "?";
}

ViewConfig make_view_config(uint32_t n) {
    ViewConfig cfg;
    cfg.n_processes = n;
    cfg.supermajority = (2 * n + 2) / 3;  // ceil(2N/3)
    cfg.coin_k = (2 * n) / 3 + 1;         // floor(2N/3) + 1
    return cfg;
}

LocalView::LocalView(ViewConfig cfg, std::vector<crypto::VerifyKey> roster)
    : cfg_(cfg), roster_(std::move(roster)) {
    if (roster_.size() != cfg_.n_processes)
        throw std::invalid_argument("roster size must equal process count");
    if (cfg_.n_processes > 64)
        throw std::invalid_argument("desk-scale views support at most 64 processes");
    genesis_digest_ = genesis_digest(cfg_.n_processes);
    by_creator_.resize(cfg_.n_processes + 1);
    dealing_of_.resize(cfg_.n_processes);
    dealing_units_.resize(cfg_.n_processes);
}

const LocalView::Rec& LocalView::rec(const Digest& d) const {
    auto it = index_of_.find(d);
    if (it == index_of_.end()) throw std::out_of_range("unit not in view: " + d.hex());
    return recs_[it->second];
}

bool LocalView::down_contains(const Rec& v, uint32_t index) const {
    // Units inserted after v cannot be below it: the down-set is frozen at insert.
    if (index / 64 >= v.down.size()) return false;
    return (v.down[index / 64] >> (index % 64)) & 1;
}

namespace {
bool down_contains_span(const std::vector<uint64_t>& down, uint32_t index) {
    if (index / 64 >= down.size()) return false;
    return (down[index / 64] >> (index % 64)) & 1;
}
}  // namespace

bool LocalView::is_below(const Digest& u, const Digest& v) const {
    return down_contains(rec(v), rec(u).index);
}

// Counts distinct real creators of units in the interval [lo, hi]; stops
// early once stop_at is reached (pass N+1 for an exact count).
uint32_t LocalView::support_count(const Rec& lo, const Rec& hi, uint32_t stop_at) const {
    uint64_t creators = 0;
    uint32_t count = 0;
    for (size_t word = 0; word < hi.down.size(); ++word) {
        uint64_t bits = hi.down[word];
        while (bits) {
            uint32_t idx = uint32_t(word * 64 + std::countr_zero(bits));
            bits &= bits - 1;
            const Rec& x = recs_[idx];
            if (x.unit.creator >= cfg_.n_processes) continue;  // genesis never counts
            uint64_t bit = 1ull << x.unit.creator;
            if (creators & bit) continue;
            if (down_contains(x, lo.index)) {
                creators |= bit;
                if (++count >= stop_at) return count;
            }
        }
    }
    return count;
}

uint32_t LocalView::support_between(const Digest& u, const Digest& v) const {
    const Rec& lo = rec(u);
    const Rec& hi = rec(v);
    if (!down_contains(hi, lo.index))
        throw std::invalid_argument("support_between requires u <= v");
    return support_count(lo, hi, cfg_.n_processes + 1);
}

bool LocalView::high_above(const Digest& u, const Digest& v) const {
    const Rec& lo = rec(u);
    const Rec& hi = rec(v);
    if (!down_contains(hi, lo.index)) return false;
    return support_count(lo, hi, cfg_.supermajority) >= cfg_.supermajority;
}

InsertResult LocalView::check_shape(const Unit& u, const Digest& digest) const {
    if (u.creator == cfg_.n_processes) {
        // Only the protocol's genesis constant may use the reserved id.
        if (digest != genesis_digest_) return InsertResult::Malformed;
        return InsertResult::Inserted;
    }
    if (u.creator > cfg_.n_processes) return InsertResult::Malformed;
    if (u.parents.size() != 2) return InsertResult::Malformed;

    const bool dealing_shaped =
        u.parents[0] == genesis_digest_ && u.parents[1] == genesis_digest_;
    if (u.dealing.has_value() != dealing_shaped) return InsertResult::Malformed;
    if (u.dealing) {
        if (u.dealing->dealer != u.creator) return InsertResult::Malformed;
        if (u.dealing->coin_k != cfg_.coin_k) return InsertResult::Malformed;
        if (u.dealing->commitments.size() != cfg_.coin_k) return InsertResult::Malformed;
        if (u.dealing->encrypted_shares.size() != cfg_.n_processes) return InsertResult::Malformed;
    }
    for (size_t i = 0; i < u.coin_shares.size(); ++i) {
        const auto& s = u.coin_shares[i];
        if (s.holder != u.creator) return InsertResult::Malformed;
        if (i > 0) {
            const auto& p = u.coin_shares[i - 1];
            if (std::tuple(p.dealer, p.holder, p.nonce) >= std::tuple(s.dealer, s.holder, s.nonce))
                return InsertResult::Malformed;
        }
    }
    for (const auto& p : u.parents)
        if (!contains(p)) return InsertResult::MissingParent;
    if (!verify_unit_signature(u, roster_[u.creator])) return InsertResult::BadSignature;
    return InsertResult::Inserted;
}

uint32_t LocalView::compute_level(const Rec& r) const {
    if (r.unit.is_genesis_shaped()) return 0;
    uint32_t m = 0;
    for (const auto& p : r.unit.parents) m = std::max(m, rec(p).level);
    // Count creators of level-m units the new unit is high above.
    uint64_t creators = 0;
    uint32_t count = 0;
    for (size_t word = 0; word < r.down.size(); ++word) {
        uint64_t bits = r.down[word];
        while (bits) {
            uint32_t idx = uint32_t(word * 64 + std::countr_zero(bits));
            bits &= bits - 1;
            if (idx == r.index) continue;
            const Rec& x = recs_[idx];
            if (x.level != m) continue;
            if (x.unit.creator >= cfg_.n_processes) continue;
            uint64_t bit = 1ull << x.unit.creator;
            if (creators & bit) continue;
            if (support_count(x, r, cfg_.supermajority) >= cfg_.supermajority) {
                creators |= bit;
                ++count;
            }
        }
        if (count >= cfg_.supermajority) break;
    }
    return count >= cfg_.supermajority ? m + 1 : m;
}

bool LocalView::compute_prime(const Rec& r) const {
    for (const auto& d : by_creator_[r.unit.creator]) {
        const Rec& other = rec(d);
        if (other.level == r.level && down_contains(r, other.index)) return false;
    }
    return true;
}

void LocalView::index_unit(const Rec& r) {
    const Unit& u = r.unit;
    // Fork registry: same-creator incomparabilities.
    if (u.creator < cfg_.n_processes) {
        for (const auto& d : by_creator_[u.creator]) {
            const Rec& other = rec(d);
            if (!down_contains(r, other.index) && !down_contains(other, r.index)) {
                forks_[u.creator].insert(d);
                forks_[u.creator].insert(r.digest);
            }
        }
    }
    by_creator_[u.creator].push_back(r.digest);
    if (r.prime) {
        if (primes_at_.size() <= r.level) primes_at_.resize(r.level + 1);
        primes_at_[r.level].push_back(r.digest);
    }
    if (u.dealing && u.creator < cfg_.n_processes) {
        dealing_units_[u.creator].push_back(r.digest);
        if (!dealing_of_[u.creator]) dealing_of_[u.creator] = r.digest;
    }
    for (const auto& s : u.coin_shares)
        share_pool_[{s.dealer, s.nonce}].emplace(s.holder, s);
    for (const auto& p : u.parents) max_units_.erase(p);
    max_units_.insert(r.digest);
    max_level_ = std::max(max_level_, r.level);
}

InsertResult LocalView::insert(const Unit& u) {
    Digest digest = hash_of(u);
    if (contains(digest)) return InsertResult::Duplicate;
    InsertResult shape = check_shape(u, digest);
    if (shape != InsertResult::Inserted) return shape;

    // Embedded shares must verify against the registered dealing of their dealer.
    for (const auto& s : u.coin_shares) {
        if (s.dealer >= cfg_.n_processes) return InsertResult::Malformed;
        const crypto::DealingPayload* dp = dealing_payload_of(s.dealer);
        if (!dp || !crypto::coin_verify_share(*dp, s)) return InsertResult::Malformed;
    }

    Rec r;
    r.unit = u;
    r.digest = digest;
    r.index = uint32_t(recs_.size());
    size_t words = r.index / 64 + 1;
    r.down.assign(words, 0);
    for (const auto& p : u.parents) {
        const Rec& pr = rec(p);
        for (size_t w = 0; w < pr.down.size(); ++w) r.down[w] |= pr.down[w];
    }
    r.down[r.index / 64] |= 1ull << (r.index % 64);

    recs_.push_back(std::move(r));
    index_of_.emplace(digest, recs_.back().index);
    Rec& stored = recs_.back();
    stored.level = compute_level(stored);
    stored.prime = compute_prime(stored);
    index_unit(stored);
    return InsertResult::Inserted;
}

std::vector<Digest> LocalView::prime_units_at(uint32_t level) const {
    if (level >= primes_at_.size()) return {};
    return primes_at_[level];
}

const std::vector<Digest>& LocalView::prime_ancestors(const Digest& v) const {
    const Rec& r = rec(v);
    if (!r.prime || r.level == 0)
        throw std::invalid_argument("prime_ancestors requires a prime unit of level >= 1");
    if (!r.prime_ancestors) {
        std::vector<Digest> out;
        for (const auto& d : prime_units_at(r.level - 1)) {
            const Rec& cand = rec(d);
            if (down_contains(r, cand.index) &&
                support_count(cand, r, cfg_.supermajority) >= cfg_.supermajority)
                out.push_back(d);
        }
        r.prime_ancestors = std::move(out);
    }
    return *r.prime_ancestors;
}

std::vector<Digest> LocalView::maximal_units() const {
    return {max_units_.begin(), max_units_.end()};
}

std::vector<Digest> LocalView::maximal_units_above(const Digest& w) const {
    const Rec& lo = rec(w);
    std::vector<Digest> out;
    for (const auto& d : max_units_)
        if (down_contains(rec(d), lo.index)) out.push_back(d);
    return out;
}

const std::vector<Digest>& LocalView::units_by(ProcessId creator) const {
    if (creator >= by_creator_.size()) throw std::out_of_range("creator out of range");
    return by_creator_[creator];
}

std::vector<Digest> LocalView::fork_variants_of(const Digest& u) const {
    const Rec& r = rec(u);
    std::vector<Digest> out;
    if (r.unit.creator >= cfg_.n_processes) return out;
    for (const auto& d : by_creator_[r.unit.creator]) {
        if (d == u) continue;
        const Rec& other = rec(d);
        if (!down_contains(r, other.index) && !down_contains(other, r.index)) out.push_back(d);
    }
    return out;
}

const std::set<Digest>& LocalView::fork_registry(ProcessId creator) const {
    static const std::set<Digest> empty;
    auto it = forks_.find(creator);
    return it == forks_.end() ? empty : it->second;
}

bool LocalView::is_forked(ProcessId creator) const { return forks_.count(creator) > 0; }

std::optional<Digest> LocalView::dealing_unit_of(ProcessId creator) const {
    if (creator >= cfg_.n_processes) return std::nullopt;
    return dealing_of_[creator];
}

const crypto::DealingPayload* LocalView::dealing_payload_of(ProcessId creator) const {
    if (creator >= cfg_.n_processes || !dealing_of_[creator]) return nullptr;
    return &rec(*dealing_of_[creator]).unit.dealing.value();
}

std::optional<Digest> LocalView::dealing_unit_below(ProcessId creator, const Digest& v) const {
    if (creator >= cfg_.n_processes) return std::nullopt;
    const Rec& hi = rec(v);
    std::optional<Digest> best;
    for (const auto& d : dealing_units_[creator]) {
        if (!down_contains(hi, rec(d).index)) continue;
        if (!best || d < *best) best = d;
    }
    return best;
}

const std::map<uint32_t, crypto::CoinShare>* LocalView::shares_for(uint32_t dealer,
                                                                   uint32_t nonce) const {
    auto it = share_pool_.find({dealer, nonce});
    return it == share_pool_.end() ? nullptr : &it->second;
}

const std::vector<uint32_t>& LocalView::sigma(uint32_t level) const {
    uint32_t nonce = std::max(level, 1u);
    auto it = sigma_cache_.find(nonce);
    if (it == sigma_cache_.end())
        it = sigma_cache_.emplace(nonce, crypto::common_permutation(nonce, roster_)).first;
    return it->second;
}

LocalView::Hypothetical LocalView::hypothesize(ProcessId creator, const Digest& p1,
                                               const Digest& p2) const {
    const Rec& a = rec(p1);
    const Rec& b = rec(p2);
    std::vector<uint64_t> down(std::max(a.down.size(), b.down.size()), 0);
    for (size_t w = 0; w < a.down.size(); ++w) down[w] |= a.down[w];
    for (size_t w = 0; w < b.down.size(); ++w) down[w] |= b.down[w];

    uint32_t m = std::max(a.level, b.level);
    uint64_t voters = 0;
    uint32_t count = 0;
    for (size_t word = 0; word < down.size(); ++word) {
        uint64_t bits = down[word];
        while (bits) {
            uint32_t idx = uint32_t(word * 64 + std::countr_zero(bits));
            bits &= bits - 1;
            const Rec& x = recs_[idx];
            if (x.level != m || x.unit.creator >= cfg_.n_processes) continue;
            uint64_t bit = 1ull << x.unit.creator;
            if (voters & bit) continue;
            // Interval [x, draft]: units in the draft's down-set that are
            // above x, plus the draft itself.
            uint64_t creators = creator < cfg_.n_processes ? (1ull << creator) : 0;
            uint32_t support = creator < cfg_.n_processes ? 1 : 0;
            for (size_t w2 = 0; w2 < down.size() && support < cfg_.supermajority; ++w2) {
                uint64_t bits2 = down[w2];
                while (bits2) {
                    uint32_t idx2 = uint32_t(w2 * 64 + std::countr_zero(bits2));
                    bits2 &= bits2 - 1;
                    const Rec& y = recs_[idx2];
                    if (y.unit.creator >= cfg_.n_processes) continue;
                    uint64_t ybit = 1ull << y.unit.creator;
                    if (creators & ybit) continue;
                    if (down_contains(y, x.index)) {
                        creators |= ybit;
                        if (++support >= cfg_.supermajority) break;
                    }
                }
            }
            if (support >= cfg_.supermajority) {
                voters |= bit;
                ++count;
            }
        }
        if (count >= cfg_.supermajority) break;
    }

    Hypothetical h;
    h.level = count >= cfg_.supermajority ? m + 1 : m;
    h.prime = true;
    if (creator < cfg_.n_processes) {
        for (const auto& d : by_creator_[creator]) {
            const Rec& other = rec(d);
            if (other.level == h.level && down_contains_span(down, other.index)) {
                h.prime = false;
                break;
            }
        }
    }
    return h;
}

std::vector<Digest> LocalView::digests_in_insertion_order() const {
    std::vector<Digest> out;
    out.reserve(recs_.size());
    for (const auto& r : recs_) out.push_back(r.digest);
    return out;
}

}  // namespace aleph::dag
