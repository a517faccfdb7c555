#!/usr/bin/env python3
"""Golden digests for the canonical block layout.

Builds block byte images straight from docs/serialization.md with no help
from the C++ code, and prints their SHA-256 digests. The values frozen into
tests/test_block_format.cpp come from this script.
"""

import hashlib
import struct


def obs(kind: int, sensor_id: str, sim_time: int, *, value: float = 0.0, amount: int = 0) -> bytes:
    out = struct.pack("<B", kind)
    sid = sensor_id.encode()
    out += struct.pack("<I", len(sid)) + sid
    out += struct.pack("<Q", sim_time)
    if kind == 0:
        out += struct.pack("<d", value)
    else:
        out += struct.pack("<Q", amount)
    return out


def block(height: int, prev: bytes, ts: int, miner: str, observations: list[bytes],
          proof: bytes, nonce: int) -> bytes:
    out = struct.pack("<I", 1)                       # layout version
    out += struct.pack("<Q", height)
    assert len(prev) == 32
    out += prev
    out += struct.pack("<Q", ts)
    m = miner.encode()
    out += struct.pack("<I", len(m)) + m
    out += struct.pack("<I", len(observations))
    for o in observations:
        out += o
    out += proof
    out += struct.pack("<Q", nonce)
    return out


PROOF_NONE = struct.pack("<B", 0)


def proof_stake(investment: int) -> bytes:
    return struct.pack("<B", 1) + struct.pack("<Q", investment)


def proof_sortition(y: bytes, ev: bytes, bind: bytes, seed: bytes,
                    num: int, den: int, rnd: int) -> bytes:
    return (struct.pack("<B", 2) + y + ev + bind + seed
            + struct.pack("<Q", num) + struct.pack("<Q", den) + struct.pack("<I", rnd))


def main() -> None:
    genesis = block(0, bytes(32), 0, "genesis", [], PROOF_NONE, 0)
    print(f"genesis bytes         : {len(genesis)}")
    print(f"genesis digest        : {hashlib.sha256(genesis).hexdigest()}")

    gd = hashlib.sha256(genesis).digest()
    b1 = block(
        1, gd, 41, "n3",
        [
            obs(0, "s17", 30, value=21.5),
            obs(1, "n3", 41, amount=40),
            obs(2, "n3", 41, amount=3),
        ],
        proof_stake(500), 7,
    )
    print(f"stake block bytes     : {len(b1)}")
    print(f"stake block digest    : {hashlib.sha256(b1).hexdigest()}")

    b2 = block(
        1, gd, 12, "n0",
        [obs(0, "s2", 10, value=-3.25)],
        proof_sortition(bytes(range(32)), bytes(32), b"\xff" * 32, gd, 1, 20, 2), 0,
    )
    print(f"sortition block bytes : {len(b2)}")
    print(f"sortition block digest: {hashlib.sha256(b2).hexdigest()}")

    # Mid-state sanity value: digest of b1's bytes with a different nonce,
    # for the prefix-state test.
    b1n = block(
        1, gd, 41, "n3",
        [
            obs(0, "s17", 30, value=21.5),
            obs(1, "n3", 41, amount=40),
            obs(2, "n3", 41, amount=3),
        ],
        proof_stake(500), 123456789,
    )
    print(f"stake nonce2 digest   : {hashlib.sha256(b1n).hexdigest()}")


if __name__ == "__main__":
    main()
