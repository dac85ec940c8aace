"""Sweep every system of k affine maps with a in [1, A], b in [-B, B] and compare
the star check with the gcd of the products over s = 0..S-1."""

import argparse
import itertools
import math
import time
from dataclasses import dataclass

from primedec.dickson import star_check


@dataclass
class SweepConfig:
    max_k: int = 3
    max_a: int = 4
    max_b: int = 6
    samples: int = 1001


def gcd_of_products(maps, samples):
    g = 0
    for s in range(samples):
        g = math.gcd(g, math.prod(a * s + b for a, b in maps))
        if g == 1:
            break
    return g


def run(cfg: SweepConfig):
    maps = [(a, b) for a in range(1, cfg.max_a + 1) for b in range(-cfg.max_b, cfg.max_b + 1)]
    total = holds = mismatches = 0
    t0 = time.perf_counter()
    for k in range(1, cfg.max_k + 1):
        for system in itertools.combinations_with_replacement(maps, k):
            v = star_check(system)
            g = gcd_of_products(system, cfg.samples)
            total += 1
            holds += v.holds
            if v.holds != (g == 1):
                mismatches += 1
                print("mismatch:", system, v, g)
    print(f"{total} systems, {holds} satisfy star, {mismatches} mismatches, {time.perf_counter() - t0:.2f}s")
    return mismatches


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-k", type=int, default=3)
    ap.add_argument("--max-a", type=int, default=4)
    ap.add_argument("--max-b", type=int, default=6)
    args = ap.parse_args()
    raise SystemExit(1 if run(SweepConfig(args.max_k, args.max_a, args.max_b)) else 0)
