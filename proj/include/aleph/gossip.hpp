#pragma once

#include "aleph/node.hpp"

#include <variant>

namespace aleph::gossip {

using aleph::Digest;

// Wire messages. Every sync session serializes these to bytes and decodes
// them on the far side, so the format below is the interop surface:
// a 1-byte tag, then little-endian fields; inventory digests sorted
// ascending; unit sequences parent-closed and topologically ordered.
struct Hello {
    uint32_t sender = 0;
    uint64_t session = 0;
};
struct Inventory {
    std::vector<Digest> digests;  // sorted ascending
};
struct UnitsMsg {
    std::vector<Bytes> encoded_units;  // canonical encodings, parents first
};
enum class RejectReason : uint8_t {
    IdMismatch = 1,
    BadSignature = 2,
    MissingParent = 3,
    Malformed = 4,
};
struct Reject {
    RejectReason reason = RejectReason::IdMismatch;
};

using SyncMessage = std::variant<Hello, Inventory, UnitsMsg, Reject>;

Bytes encode_message(const SyncMessage& m);
SyncMessage decode_message(std::span<const uint8_t> bytes);  // throws std::runtime_error

// Units the sender has and the peer's declared inventory lacks, in
// insertion order (parents always precede children).
UnitsMsg units_to_send(const dag::LocalView& view, const Inventory& peer_inventory);

Inventory inventory_of(const dag::LocalView& view);

// Validates a received batch without touching the view: decodes every unit,
// checks every signature, and checks parent closure against view + batch
// prefix. Returns the decoded units or the rejection reason.
struct BatchValidation {
    bool ok = false;
    RejectReason reason = RejectReason::Malformed;
    std::vector<dag::Unit> units;
};
BatchValidation validate_batch(const dag::LocalView& view, const UnitsMsg& msg,
                               const std::vector<crypto::VerifyKey>& roster);

struct SyncResult {
    enum class Status { Completed, IdMismatch, Rejected };
    Status status = Status::Completed;
    RejectReason reason = RejectReason::IdMismatch;  // for Rejected / IdMismatch
    size_t units_to_initiator = 0;
    size_t units_to_responder = 0;
};

// Fault knob: a silent process declares its inventory but ships no units.
struct SyncPolicy {
    bool initiator_sends = true;
    bool responder_sends = true;
};

// One full pairwise synchronization, run atomically over in-memory byte
// transport: hello exchange with id check, inventory swap, unit exchange
// with whole-batch verification before any view mutation.
SyncResult sync_session(node::ProcessCore& initiator, node::ProcessCore& responder,
                        uint64_t session, SyncPolicy policy = {});

}  // namespace aleph::gossip
