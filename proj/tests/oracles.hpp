#pragma once

// Brute-force reference implementations of the poset queries, kept
// deliberately independent of LocalView's incremental bookkeeping: reachability
// by DFS over parent edges, levels by the recursive definition, support by
// full interval enumeration. Slow and obviously correct.

#include "aleph/unit.hpp"

#include <map>
#include <set>
#include <vector>

namespace aleph::testing {

class OracleDag {
public:
    OracleDag(uint32_t n_processes, uint32_t supermajority)
        : n_(n_processes), supermaj_(supermajority) {}

    void add(const dag::Unit& u) {
        Digest d = dag::hash_of(u);
        units_.emplace(d, u);
        order_.push_back(d);
    }

    const std::vector<Digest>& digests() const { return order_; }
    const dag::Unit& unit(const Digest& d) const { return units_.at(d); }

    bool is_below(const Digest& u, const Digest& v) const {
        if (u == v) return true;
        for (const Digest& p : units_.at(v).parents)
            if (is_below(u, p)) return true;
        return false;
    }

    std::set<uint32_t> creators_between(const Digest& u, const Digest& v) const {
        std::set<uint32_t> out;
        for (const auto& [d, w] : units_) {
            if (!is_below(u, d) || !is_below(d, v)) continue;
            if (w.creator < n_) out.insert(w.creator);
        }
        return out;
    }

    bool high_above(const Digest& u, const Digest& v) const {
        return is_below(u, v) && creators_between(u, v).size() >= supermaj_;
    }

    uint32_t level(const Digest& d) const {
        auto it = level_memo_.find(d);
        if (it != level_memo_.end()) return it->second;
        const dag::Unit& u = units_.at(d);
        uint32_t result = 0;
        if (!u.parents.empty()) {
            uint32_t m = 0;
            for (const auto& [e, w] : units_)
                if (e != d && is_below(e, d)) m = std::max(m, level(e));
            std::set<uint32_t> creators;
            for (const auto& [e, w] : units_) {
                if (e == d || !is_below(e, d)) continue;
                if (level(e) != m || w.creator >= n_) continue;
                if (high_above(e, d)) creators.insert(w.creator);
            }
            result = creators.size() >= supermaj_ ? m + 1 : m;
        }
        level_memo_.emplace(d, result);
        return result;
    }

    bool prime(const Digest& d) const {
        const dag::Unit& u = units_.at(d);
        for (const auto& [e, w] : units_) {
            if (e == d || w.creator != u.creator) continue;
            if (is_below(e, d) && level(e) == level(d)) return false;
        }
        return true;
    }

    std::set<Digest> prime_ancestors(const Digest& d) const {
        std::set<Digest> out;
        for (const auto& [e, w] : units_) {
            if (!prime(e) || level(e) + 1 != level(d)) continue;
            if (high_above(e, d)) out.insert(e);
        }
        return out;
    }

    std::set<Digest> maximal() const {
        std::set<Digest> out;
        for (const auto& [d, u] : units_) {
            bool is_max = true;
            for (const auto& [e, w] : units_)
                if (e != d && is_below(d, e)) is_max = false;
            if (is_max) out.insert(d);
        }
        return out;
    }

private:
    uint32_t n_;
    uint32_t supermaj_;
    std::map<Digest, dag::Unit> units_;
    std::vector<Digest> order_;
    mutable std::map<Digest, uint32_t> level_memo_;
};

}  // namespace aleph::testing
