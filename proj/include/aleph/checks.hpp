#pragma once

#include "aleph/consensus.hpp"
#include "aleph/rng.hpp"

#include <string>
#include <vector>

namespace aleph::checks {

// Structural poset invariants: level bounds, prime multiplicity vs. fork
// registry, sampled quorum intersection and two-levels-above. Returns
// human-readable violation strings; empty means clean.
std::vector<std::string> check_structural(const dag::LocalView& view, Rng& rng, int samples);

// Evaluates pi/delta for every (candidate, prime) pair the view can support
// and asserts the voting properties: single supermajority per odd level,
// unanimous decisions, positive decisions forced by well-spread candidates,
// zero-only decisions for hidden candidates.
std::vector<std::string> check_voting_lemmas(const dag::LocalView& view,
                                             consensus::ConsensusState& state);

// Cross-view agreement: memoized pi/delta values for shared (candidate,
// unit) pairs must coincide, and ordered-output logs must be mutual prefixes.
std::vector<std::string> check_cross_view(
    const std::vector<const dag::LocalView*>& views,
    const std::vector<const consensus::ConsensusState*>& states);

}  // namespace aleph::checks
