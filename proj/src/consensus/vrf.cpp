// SPDX-License-Identifier: Apache-2.0
#include "blocksim/consensus/vrf.hpp"

namespace blocksim::consensus::vrf {

namespace {

using core::Hash256;
using core::Sha256;

Hash256 tagged(std::string_view tag, std::initializer_list<std::span<const std::uint8_t>> parts) {
  Sha256 h;
  h.update(tag);
  for (auto p : parts) h.update(p);
  return h.digest();
}

std::span<const std::uint8_t> span_of(const Hash256& h) { return {h.data(), h.size()}; }

}  // namespace

KeyPair keygen(core::DetRng& rng) {
  KeyPair kp;
  rng.fill(kp.sk);
  kp.pk = tagged("bsv1.pk", {std::span<const std::uint8_t>(kp.sk.data(), kp.sk.size())});
  return kp;
}

Proof evaluate(const KeyPair& kp, const Hash256& seed) {
  Proof p;
  p.seed_used = seed;
  p.eval = tagged("bsv1.eval",
                  {std::span<const std::uint8_t>(kp.sk.data(), kp.sk.size()), span_of(seed)});
  p.y = tagged("bsv1.out", {span_of(p.eval)});
  p.bind = tagged("bsv1.bind", {span_of(kp.pk), span_of(seed), span_of(p.eval)});
  return p;
}

bool verify(const Hash256& pk, const Hash256& seed, const Proof& proof) {
  if (proof.seed_used != seed) return false;
  Hash256 y = tagged("bsv1.out", {span_of(proof.eval)});
  if (y != proof.y) return false;
  Hash256 bind = tagged("bsv1.bind", {span_of(pk), span_of(seed), span_of(proof.eval)});
  return bind == proof.bind;
}

}  // namespace blocksim::consensus::vrf
