from __future__ import annotations

import os
from dataclasses import dataclass

from .normal import DEFAULT_DNF_CAP
from .numtheory import DEFAULT_MR_ROUNDS
from .qe import DEFAULT_LCM_CAP

DEFAULT_SEARCH_BOUND = 10**4
BOUND_ENV = "PRIMEDEC_BOUND"


@dataclass(frozen=True)
class RunConfig:
    search_bound: int = DEFAULT_SEARCH_BOUND
    dnf_cap: int = DEFAULT_DNF_CAP
    lcm_cap: int = DEFAULT_LCM_CAP
    mr_rounds: int = DEFAULT_MR_ROUNDS
    trace: bool = False
    json: bool = False
    simplify: bool = False

    def __post_init__(self):
        for name in ("search_bound", "dnf_cap", "lcm_cap", "mr_rounds"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")

    @staticmethod
    def default_bound() -> int:
        raw = os.environ.get(BOUND_ENV)
        return int(raw) if raw else DEFAULT_SEARCH_BOUND
