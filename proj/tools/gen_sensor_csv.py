#!/usr/bin/env python3
"""Generate the bundled sensor dataset (data/sensors.csv).

Synthetic temperature streams: 48 sensors sampled every 60 s for two hours.
Each sensor is baseline + a shared heat event + a persistent per-sensor bias
+ AR(1) noise. The heat event is a smooth bump centered 40 minutes in, so the
cluster mean crosses the dataset's 75th percentile upward and back downward
inside the first simulated hour, then stays quiet. Fixed seed; rerunning
reproduces the committed file byte for byte.
"""

import argparse
import datetime as dt
import math
import random


def bump(t: float, center: float, width: float) -> float:
    z = (t - center) / width
    return math.exp(-0.5 * z * z)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="data/sensors.csv")
    ap.add_argument("--sensors", type=int, default=48)
    ap.add_argument("--duration", type=int, default=7200, help="seconds of data")
    ap.add_argument("--cadence", type=int, default=60, help="seconds between samples")
    ap.add_argument("--seed", type=int, default=20260301)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    start = dt.datetime(2026, 3, 1, tzinfo=dt.timezone.utc)

    baseline = 21.0
    amplitude = 9.0
    center, width = 2400.0, 480.0

    bias = [rng.gauss(0.0, 0.8) for _ in range(args.sensors)]
    ar = [0.0] * args.sensors
    phi, sigma = 0.8, 0.15

    ticks = list(range(0, args.duration + 1, args.cadence))
    rows = []
    means = []
    for t in ticks:
        shared = baseline + amplitude * bump(t, center, width)
        total = 0.0
        for s in range(args.sensors):
            ar[s] = phi * ar[s] + rng.gauss(0.0, sigma)
            temp = shared + bias[s] + ar[s]
            total += temp
            stamp = (start + dt.timedelta(seconds=t)).strftime("%Y-%m-%dT%H:%M:%SZ")
            rows.append((f"s{s + 1:02d}", stamp, f"{temp:.3f}"))
        means.append((t, total / args.sensors))

    temps = sorted(float(r[2]) for r in rows)
    rank = max(1, math.ceil(0.75 * len(temps)))  # nearest-rank percentile
    p75 = temps[rank - 1]

    crossings = []
    for (t0, m0), (t1, m1) in zip(means, means[1:]):
        if (m0 > p75) != (m1 > p75):
            crossings.append((t1, +1 if m1 > p75 else -1))
    early = [c for c in crossings if c[0] <= 3600]
    late = [c for c in crossings if c[0] > 4500]
    assert len(early) >= 2, f"want >=2 crossings in the first hour, got {early}"
    assert not late, f"want a quiet tail, got crossings at {late}"

    with open(args.out, "w", newline="\n") as f:
        f.write("sensor_id,timestamp,temperature\n")
        for sensor_id, stamp, temp in rows:
            f.write(f"{sensor_id},{stamp},{temp}\n")

    print(f"{args.out}: {len(rows)} rows, {args.sensors} sensors, p75={p75:.3f}")
    for t, d in crossings:
        print(f"  mean crosses p75 {'up' if d > 0 else 'down'} at t={t}s")


if __name__ == "__main__":
    main()
