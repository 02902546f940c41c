#include "aleph/gossip.hpp"

#include <algorithm>
#include <set>

namespace aleph::gossip {

namespace {
constexpr uint8_t kTagHello = 1;
constexpr uint8_t kTagInventory = 2;
constexpr uint8_t kTagUnits = 3;
constexpr uint8_t kTagReject = 4;

constexpr uint32_t kMaxBatch = 1u << 20;
}  // namespace

Bytes encode_message(const SyncMessage& m) {
    Bytes out;
    if (const auto* h = std::get_if<Hello>(&m)) {
        put_u8(out, kTagHello);
        put_u32(out, h->sender);
        put_u64(out, h->session);
    } else if (const auto* inv = std::get_if<Inventory>(&m)) {
        put_u8(out, kTagInventory);
        put_u32(out, uint32_t(inv->digests.size()));
        for (const auto& d : inv->digests) put_bytes(out, d.bytes);
    } else if (const auto* units = std::get_if<UnitsMsg>(&m)) {
        put_u8(out, kTagUnits);
        put_u32(out, uint32_t(units->encoded_units.size()));
        for (const auto& u : units->encoded_units) {
            put_u32(out, uint32_t(u.size()));
            put_bytes(out, u);
        }
    } else {
        put_u8(out, kTagReject);
        put_u8(out, uint8_t(std::get<Reject>(m).reason));
    }
    return out;
}

SyncMessage decode_message(std::span<const uint8_t> bytes) {
    ByteReader r(bytes);
    uint8_t tag = r.u8();
    switch (tag) {
        case kTagHello: {
            Hello h;
            h.sender = r.u32();
            h.session = r.u64();
            if (!r.done()) throw std::runtime_error("trailing bytes in hello");
            return h;
        }
        case kTagInventory: {
            Inventory inv;
            uint32_t n = r.u32();
            if (n > kMaxBatch) throw std::runtime_error("inventory too large");
            inv.digests.resize(n);
            for (auto& d : inv.digests) std::ranges::copy(r.take(32), d.bytes.begin());
            for (size_t i = 1; i < inv.digests.size(); ++i)
                if (!(inv.digests[i - 1] < inv.digests[i]))
                    throw std::runtime_error("inventory digests not strictly ascending");
            if (!r.done()) throw std::runtime_error("trailing bytes in inventory");
            return inv;
        }
        case kTagUnits: {
            UnitsMsg msg;
            uint32_t n = r.u32();
            if (n > kMaxBatch) throw std::runtime_error("unit batch too large");
            msg.encoded_units.resize(n);
            for (auto& u : msg.encoded_units) u = r.bytes(r.u32());
            if (!r.done()) throw std::runtime_error("trailing bytes in units message");
            return msg;
        }
        case kTagReject: {
            Reject rej;
            rej.reason = RejectReason(r.u8());
            if (!r.done()) throw std::runtime_error("trailing bytes in reject");
            return rej;
        }
        default:
            throw std::runtime_error("unknown sync message tag");
    }
}

Inventory inventory_of(const dag::LocalView& view) {
    Inventory inv;
    inv.digests = view.digests_in_insertion_order();
    std::sort(inv.digests.begin(), inv.digests.end());
    return inv;
}

UnitsMsg units_to_send(const dag::LocalView& view, const Inventory& peer_inventory) {
    std::set<Digest> peer_has(peer_inventory.digests.begin(), peer_inventory.digests.end());
    UnitsMsg msg;
    for (const Digest& d : view.digests_in_insertion_order())
        if (!peer_has.count(d)) msg.encoded_units.push_back(dag::canonical_encode(view.unit(d)));
    return msg;
}

BatchValidation validate_batch(const dag::LocalView& view, const UnitsMsg& msg,
                               const std::vector<crypto::VerifyKey>& roster) {
    BatchValidation out;
    std::set<Digest> staged;
    for (const Bytes& enc : msg.encoded_units) {
        dag::Unit u;
        try {
            u = dag::canonical_decode(enc);
        } catch (const std::exception&) {
            out.reason = RejectReason::Malformed;
            return out;
        }
        Digest d = dag::unit_hash(enc);
        if (u.creator >= roster.size()) {
            // Only the genesis constant may carry the reserved creator.
            if (d != view.genesis()) {
                out.reason = RejectReason::Malformed;
                return out;
            }
        } else if (!dag::verify_unit_signature(u, roster[u.creator])) {
            out.reason = RejectReason::BadSignature;
            return out;
        }
        for (const Digest& p : u.parents) {
            if (!view.contains(p) && !staged.count(p)) {
                out.reason = RejectReason::MissingParent;
                return out;
            }
        }
        staged.insert(d);
        out.units.push_back(std::move(u));
    }
    out.ok = true;
    return out;
}

namespace {

std::optional<RejectReason> responder_check_hello(const Hello& h, uint32_t self_id,
                                                  uint32_t n_processes) {
    if (h.sender >= n_processes || h.sender == self_id) return RejectReason::IdMismatch;
    return std::nullopt;
}

std::optional<RejectReason> initiator_check_hello(const Hello& h, uint32_t expected_peer) {
    if (h.sender != expected_peer) return RejectReason::IdMismatch;
    return std::nullopt;
}

}  // namespace

SyncResult sync_session(node::ProcessCore& initiator, node::ProcessCore& responder,
                        uint64_t session, SyncPolicy policy) {
    const uint32_t n = initiator.view().config().n_processes;

    auto hello_i = std::get<Hello>(
        decode_message(encode_message(Hello{initiator.id(), session})));
    if (auto rej = responder_check_hello(hello_i, responder.id(), n))
        return {SyncResult::Status::IdMismatch, *rej, 0, 0};
    auto hello_r = std::get<Hello>(
        decode_message(encode_message(Hello{responder.id(), session})));
    if (auto rej = initiator_check_hello(hello_r, responder.id()))
        return {SyncResult::Status::IdMismatch, *rej, 0, 0};

    auto inv_i = std::get<Inventory>(decode_message(encode_message(inventory_of(initiator.view()))));
    auto inv_r = std::get<Inventory>(decode_message(encode_message(inventory_of(responder.view()))));

    auto to_responder = std::get<UnitsMsg>(decode_message(encode_message(
        policy.initiator_sends ? units_to_send(initiator.view(), inv_r) : UnitsMsg{})));
    auto to_initiator = std::get<UnitsMsg>(decode_message(encode_message(
        policy.responder_sends ? units_to_send(responder.view(), inv_i) : UnitsMsg{})));

    SyncResult result;
    result.units_to_initiator = to_initiator.encoded_units.size();
    result.units_to_responder = to_responder.encoded_units.size();

    // Each side verifies the whole batch before mutating anything.
    BatchValidation for_initiator =
        validate_batch(initiator.view(), to_initiator, initiator.view().roster());
    BatchValidation for_responder =
        validate_batch(responder.view(), to_responder, responder.view().roster());

    bool initiator_ok = for_initiator.ok;
    bool responder_ok = for_responder.ok;
    RejectReason reason = RejectReason::Malformed;
    if (!initiator_ok) reason = for_initiator.reason;
    if (!responder_ok) reason = for_responder.reason;

    if (initiator_ok) {
        auto applied = initiator.apply_batch(for_initiator.units);
        if (!applied.ok) {
            initiator_ok = false;
            reason = RejectReason::Malformed;
        }
    }
    if (responder_ok) {
        auto applied = responder.apply_batch(for_responder.units);
        if (!applied.ok) {
            responder_ok = false;
            reason = RejectReason::Malformed;
        }
    }

    if (initiator_ok && responder_ok) {
        result.status = SyncResult::Status::Completed;
    } else {
        result.status = SyncResult::Status::Rejected;
        result.reason = reason;
    }
    return result;
}

}  // namespace aleph::gossip
