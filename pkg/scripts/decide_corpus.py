"""Decide every sentence in a file and print a verdict table."""

import argparse
import time
from dataclasses import dataclass
from pathlib import Path

from primedec.qe import decide_sentence
from primedec.syntax import parse_formula


@dataclass
class CorpusConfig:
    path: Path = Path(__file__).with_name("sentences.txt")
    search_bound: int = 10**4


def run(cfg: CorpusConfig):
    lines = [l.strip() for l in cfg.path.read_text(encoding="utf-8").splitlines()]
    print(f"{'verdict':8} {'(D)?':5} {'witness':>8} {'ms':>7}  sentence")
    for text in lines:
        if not text or text.startswith("#"):
            continue
        t0 = time.perf_counter()
        v = decide_sentence(parse_formula(text), search_bound=cfg.search_bound)
        ms = 1000 * (time.perf_counter() - t0)
        w = "" if v.witness is None else str(v.witness)
        print(f"{str(v.value).lower():8} {'yes' if v.conditional_on_dickson else 'no':5} {w:>8} {ms:7.1f}  {text}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("path", nargs="?", type=Path, default=CorpusConfig.path)
    ap.add_argument("--bound", type=int, default=CorpusConfig.search_bound)
    args = ap.parse_args()
    run(CorpusConfig(args.path, args.bound))
