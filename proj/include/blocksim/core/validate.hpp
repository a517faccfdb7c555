// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "blocksim/core/block.hpp"

namespace blocksim::core {

enum class RejectReason : std::uint8_t {
  none = 0,
  bad_link,        // prev_hash or height does not extend the claimed parent
  bad_timestamp,   // not monotone past the parent
  bad_proof,       // method-specific proof check failed
  not_authorized,  // creator barred by the access rules in force
};

inline const char* to_string(RejectReason r) {
  switch (r) {
    case RejectReason::none: return "none";
    case RejectReason::bad_link: return "bad_link";
    case RejectReason::bad_timestamp: return "bad_timestamp";
    case RejectReason::bad_proof: return "bad_proof";
    case RejectReason::not_authorized: return "not_authorized";
  }
  return "unknown";
}

struct ValidationResult {
  bool accepted = false;
  RejectReason reason = RejectReason::none;

  static ValidationResult accept() { return {true, RejectReason::none}; }
  static ValidationResult reject(RejectReason r) { return {false, r}; }
};

// Structural checks every method shares: the candidate must point at the
// parent it is judged against, sit one height above it, and not claim a
// timestamp before the parent's. Proof and authorization checks are the
// consensus engine's job.
inline ValidationResult validate_linkage(const Block& parent, const Hash256& parent_digest,
                                         const Block& candidate) {
  if (candidate.prev_hash != parent_digest || candidate.height != parent.height + 1) {
    return ValidationResult::reject(RejectReason::bad_link);
  }
  if (candidate.timestamp < parent.timestamp) {
    return ValidationResult::reject(RejectReason::bad_timestamp);
  }
  return ValidationResult::accept();
}

}  // namespace blocksim::core
