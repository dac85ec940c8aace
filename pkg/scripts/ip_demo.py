"""Build independence witnesses for prime(x + y_1 + ... + y_n) and print them."""

import argparse
import time
from dataclasses import dataclass

from primedec.patterns import build_ip_witnesses, find_shattering


@dataclass
class DemoConfig:
    n: int = 1
    k: int = 2
    budget: int = 2 * 10**5
    shatter_k: int = 3


def run(cfg: DemoConfig):
    t0 = time.perf_counter()
    sh = find_shattering(cfg.shatter_k)
    print(f"shattering k={cfg.shatter_k} offsets={sh.offsets} verified={sh.verify()}")
    for s, b in sh.witnesses.items():
        print(f"  {sorted(s)!s:12} b={b:5d}  values={[b + a for a in sh.offsets]}")
    res = build_ip_witnesses(cfg.n, cfg.k, cfg.budget)
    if res is None:
        print(f"n={cfg.n} k={cfg.k}: budget of {cfg.budget} progressions exhausted")
    else:
        ap = res.progression
        print(f"n={cfg.n} k={cfg.k}: progression a={ap.a} b={ap.b} terms={list(ap.terms)}")
        print(f"  offsets {res.offsets}")
        for s, b in res.witnesses.items():
            print(f"  cells {sorted(s)!s:20} b={b}")
        print(f"  verified={res.verify()}")
    print(f"{time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=1)
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--budget", type=int, default=2 * 10**5)
    args = ap.parse_args()
    run(DemoConfig(args.n, args.k, args.budget))
