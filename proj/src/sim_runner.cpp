#include "aleph/sim.hpp"

#include <algorithm>
#include <memory>
#include <queue>

namespace aleph::sim {

using consensus::ConsensusState;
using aleph::Digest;

namespace {

struct SimProcess {
    std::unique_ptr<node::ProcessCore> core;
    std::unique_ptr<node::ProcessCore> branch;  // branching forker's second view
    ConsensusState cons;
    std::optional<FaultSpec> fault;
    bool crashed = false;
    bool silent = false;
    uint32_t created = 0;
    uint64_t steps_taken = 0;
};

struct Event {
    uint64_t time = 0;
    uint64_t seq = 0;
    enum class Kind : uint8_t { Step, Sync } kind = Kind::Step;
    uint32_t actor = 0;
    uint32_t partner = 0;
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        return std::tie(a.time, a.seq) > std::tie(b.time, b.seq);
    }
};

uint64_t subseed(uint64_t seed, const char* label, uint32_t index) {
    Bytes buf;
    put_u64(buf, seed);
    put_bytes(buf, std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(label), 4));
    put_u32(buf, index);
    Digest d = crypto::sha256d(buf);
    uint64_t out = 0;
    for (int i = 0; i < 8; ++i) out |= uint64_t(d.bytes[i]) << (8 * i);
    return out;
}

Bytes make_payload(uint64_t seed, uint32_t process, uint32_t counter, uint32_t size) {
    Bytes header;
    put_bytes(header, std::span<const uint8_t>(reinterpret_cast<const uint8_t*>("payload!"), 8));
    put_u64(header, seed);
    put_u32(header, process);
    put_u32(header, counter);
    Bytes out;
    uint32_t block = 0;
    while (out.size() < size) {
        Bytes blk = header;
        put_u32(blk, block++);
        Digest d = crypto::sha256d(blk);
        out.insert(out.end(), d.bytes.begin(), d.bytes.end());
    }
    out.resize(size);
    return out;
}

// The branching forker answers even peers from its trunk view and odd peers
// from the cloned branch.
node::ProcessCore& endpoint(SimProcess& p, uint32_t peer) {
    if (p.branch && peer % 2 == 1) return *p.branch;
    return *p.core;
}

void maybe_crash(SimProcess& p, uint64_t now) {
    if (p.fault && p.fault->kind == FaultSpec::Kind::Crash && now >= p.fault->at_time)
        p.crashed = true;
}

}  // namespace

RunReport run_simulation(const SimConfig& cfg) {
    cfg.validate();
    const uint32_t n = cfg.n_processes;
    RunReport report;
    report.config = cfg;
    report.correct.assign(n, true);

    dag::ViewConfig vcfg = dag::make_view_config(n);
    node::Roster roster = node::derive_roster(cfg.seed, n);

    std::vector<SimProcess> procs(n);
    for (uint32_t i = 0; i < n; ++i) {
        procs[i].core = std::make_unique<node::ProcessCore>(
            i, vcfg, node::ProcessKeys::derive(cfg.seed, i), roster, subseed(cfg.seed, "core", i));
    }
    for (const FaultSpec& f : cfg.faults) {
        if (procs[f.process].fault) throw std::invalid_argument("one fault per process");
        procs[f.process].fault = f;
        procs[f.process].silent = f.kind == FaultSpec::Kind::Silent;
        report.correct[f.process] = false;
    }
    if (cfg.faults.size() > cfg.f_max()) report.beyond_tolerance = true;

    Rng sched_rng(subseed(cfg.seed, "schd", 0));
    size_t delay_cursor = 0;
    auto draw_delay = [&]() -> uint64_t {
        if (!cfg.delay.script.empty())
            return cfg.delay.script[delay_cursor++ % cfg.delay.script.size()];
        return sched_rng.between(cfg.delay.min, cfg.delay.max);
    };

    std::priority_queue<Event, std::vector<Event>, EventAfter> queue;
    uint64_t seq = 0;
    for (uint32_t i = 0; i < n; ++i) queue.push({1 + i, seq++, Event::Kind::Step, i, 0});

    uint64_t steps_done = 0;
    uint64_t session = 0;

    auto advance = [&](SimProcess& p) {
        if (p.fault) return;  // faulty processes' outputs carry no claims
        consensus::advance_ordering(p.core->view(), p.cons);
    };

    auto do_create = [&](SimProcess& p, uint32_t id) {
        Bytes payload;
        if (p.created < cfg.payloads.per_process && cfg.payloads.size > 0)
            payload = make_payload(cfg.seed, id, p.created, cfg.payloads.size);
        uint32_t unit_index = p.created;
        node::ProcessCore& actor =
            (p.branch && unit_index % 2 == 1) ? *p.branch : *p.core;
        const dag::Unit& u = actor.create_unit(payload);
        p.created++;
        report.units_created++;
        if (p.fault && unit_index == p.fault->at_unit) {
            if (p.fault->kind == FaultSpec::Kind::ForkOnce) {
                p.core->create_fork_variant(u);
                report.units_created++;
            } else if (p.fault->kind == FaultSpec::Kind::Branching) {
                p.branch = std::make_unique<node::ProcessCore>(*p.core);
            }
        }
    };

    while (!queue.empty()) {
        Event e = queue.top();
        queue.pop();
        SimProcess& p = procs[e.actor];
        maybe_crash(p, e.time);

        if (e.kind == Event::Kind::Step) {
            if (p.crashed || steps_done >= cfg.steps) continue;
            steps_done++;
            p.steps_taken++;
            do_create(p, e.actor);
            advance(p);
            if (p.steps_taken % cfg.sync_period == 0) {
                uint32_t partner = uint32_t(p.core->rng().below(n - 1));
                if (partner >= e.actor) partner++;
                queue.push({e.time + draw_delay(), seq++, Event::Kind::Sync, e.actor, partner});
            }
            queue.push({e.time + 1 + sched_rng.below(cfg.step_jitter + 1), seq++,
                        Event::Kind::Step, e.actor, 0});
        } else {
            SimProcess& q = procs[e.partner];
            maybe_crash(q, e.time);
            if (p.crashed || q.crashed) continue;
            auto res = gossip::sync_session(endpoint(p, e.partner), endpoint(q, e.actor),
                                            session++, {!p.silent, !q.silent});
            report.units_exchanged += res.units_to_initiator + res.units_to_responder;
            if (res.status == gossip::SyncResult::Status::Completed)
                report.syncs_completed++;
            else
                report.syncs_rejected++;
            advance(p);
            advance(q);
        }
    }

    // Eventual delivery: correct processes keep gossiping until quiescent.
    if (cfg.final_flush) {
        bool changed = true;
        uint32_t guard = 0;
        while (changed && guard++ < 4 * n) {
            changed = false;
            for (uint32_t i = 0; i < n; ++i) {
                if (!report.correct[i] || procs[i].crashed) continue;
                for (uint32_t j = i + 1; j < n; ++j) {
                    if (!report.correct[j] || procs[j].crashed) continue;
                    size_t before = procs[i].core->view().size() + procs[j].core->view().size();
                    gossip::sync_session(*procs[i].core, *procs[j].core, session++);
                    if (procs[i].core->view().size() + procs[j].core->view().size() != before)
                        changed = true;
                }
            }
        }
        for (auto& p : procs) advance(p);
    }

    // Metrics and the embedded invariant suite.
    Rng check_rng(subseed(cfg.seed, "chck", 0));
    std::vector<const dag::LocalView*> correct_views;
    std::vector<const ConsensusState*> correct_states;
    for (uint32_t i = 0; i < n; ++i) {
        SimProcess& p = procs[i];
        report.logs.push_back(p.cons.batches);
        for (auto [level, size] : p.core->transversal_log())
            report.transversals.emplace_back(level, size);
        if (!report.correct[i]) continue;
        report.max_level = std::max(report.max_level, p.core->view().max_level());
        report.coin_consultations += p.cons.coin_consultations;
        for (const auto& [cand, wl] : p.cons.decision_witness_level)
            report.decision_offsets.emplace_back(p.core->view().level_of(cand),
                                                 wl - p.core->view().level_of(cand));
        for (uint32_t off : p.cons.choice_offsets) report.choice_offsets.push_back(off);
        for (const auto& v : p.cons.violations)
            report.violations.push_back("process " + std::to_string(i) + ": " + v);

        auto structural = checks::check_structural(p.core->view(), check_rng, 20);
        auto voting = checks::check_voting_lemmas(p.core->view(), p.cons);
        for (const auto& v : structural)
            report.violations.push_back("process " + std::to_string(i) + ": " + v);
        for (const auto& v : voting)
            report.violations.push_back("process " + std::to_string(i) + ": " + v);
        correct_views.push_back(&p.core->view());
        correct_states.push_back(&p.cons);
    }
    for (const auto& v : checks::check_cross_view(correct_views, correct_states))
        report.violations.push_back(v);

    // Dissemination under eventual delivery: every correct unit everywhere.
    if (cfg.final_flush) {
        for (uint32_t i = 0; i < n; ++i) {
            if (!report.correct[i]) continue;
            for (const Digest& d : procs[i].core->view().units_by(i)) {
                for (uint32_t j = 0; j < n; ++j) {
                    if (!report.correct[j] || j == i) continue;
                    if (!procs[j].core->view().contains(d))
                        report.violations.push_back("unit by " + std::to_string(i) +
                                                    " missing from view " + std::to_string(j));
                }
            }
        }
    }

    return report;
}

}  // namespace aleph::sim
