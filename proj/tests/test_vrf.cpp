// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "blocksim/consensus/vrf.hpp"
#include "blocksim/core/rng.hpp"
#include "doctest.h"

using namespace blocksim;
using namespace blocksim::consensus;

namespace {

core::Hash256 random_seed(core::DetRng& rng) {
  core::Hash256 s{};
  rng.fill(s);
  return s;
}

}  // namespace

TEST_CASE("evaluate is deterministic and verify accepts it") {
  core::DetRng rng(3, "vrf-basic");
  vrf::KeyPair kp = vrf::keygen(rng);
  core::Hash256 seed = random_seed(rng);

  vrf::Proof p = vrf::evaluate(kp, seed);
  CHECK(p == vrf::evaluate(kp, seed));
  CHECK(p.seed_used == seed);
  CHECK(vrf::verify(kp.pk, seed, p));
}

TEST_CASE("different keys and seeds give different draws") {
  core::DetRng rng(4, "vrf-distinct");
  vrf::KeyPair a = vrf::keygen(rng);
  vrf::KeyPair b = vrf::keygen(rng);
  core::Hash256 seed = random_seed(rng);

  CHECK(a.pk != b.pk);
  CHECK(vrf::evaluate(a, seed).y != vrf::evaluate(b, seed).y);
  CHECK(vrf::evaluate(a, seed).y != vrf::evaluate(a, random_seed(rng)).y);
}

TEST_CASE("completeness holds across a thousand pairs") {
  core::DetRng rng(5, "vrf-completeness");
  for (int i = 0; i < 1000; ++i) {
    vrf::KeyPair kp = vrf::keygen(rng);
    core::Hash256 seed = random_seed(rng);
    CAPTURE(i);
    REQUIRE(vrf::verify(kp.pk, seed, vrf::evaluate(kp, seed)));
  }
}

TEST_CASE("any single tampered bit is rejected") {
  core::DetRng rng(6, "vrf-tamper");
  vrf::KeyPair kp = vrf::keygen(rng);
  core::Hash256 seed = random_seed(rng);
  vrf::Proof good = vrf::evaluate(kp, seed);

  auto flip = [](core::Hash256 h, std::size_t bit) {
    h[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    return h;
  };

  for (std::size_t bit = 0; bit < 256; bit += 7) {
    CAPTURE(bit);
    vrf::Proof p = good;
    p.y = flip(p.y, bit);
    CHECK_FALSE(vrf::verify(kp.pk, seed, p));

    p = good;
    p.eval = flip(p.eval, bit);
    CHECK_FALSE(vrf::verify(kp.pk, seed, p));

    p = good;
    p.bind = flip(p.bind, bit);
    CHECK_FALSE(vrf::verify(kp.pk, seed, p));

    CHECK_FALSE(vrf::verify(flip(kp.pk, bit), seed, good));
    CHECK_FALSE(vrf::verify(kp.pk, flip(seed, bit), good));
  }
}

TEST_CASE("verify pins the proof to the seed it claims") {
  core::DetRng rng(7, "vrf-seed-swap");
  vrf::KeyPair kp = vrf::keygen(rng);
  core::Hash256 s1 = random_seed(rng);
  core::Hash256 s2 = random_seed(rng);

  vrf::Proof p = vrf::evaluate(kp, s1);
  CHECK_FALSE(vrf::verify(kp.pk, s2, p));

  // A proof for s2 pasted onto a claim about s1 fails too.
  vrf::Proof q = vrf::evaluate(kp, s2);
  q.seed_used = s1;
  CHECK_FALSE(vrf::verify(kp.pk, s1, q));
}
