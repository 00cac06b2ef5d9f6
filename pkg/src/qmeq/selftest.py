"""Built-in regression suite: equivalence questions on the walk machines.

Eight fixed cases over the cycle-walk family with known verdicts.  Cases
1-6 run on size-4 machines (8-dimensional state spaces) and finish in
seconds; cases 7-8 run on size-8 machines (16-dimensional state spaces)
and take noticeably longer, so callers can select subsets.
"""

from __future__ import annotations

from dataclasses import dataclass

from .checker import CheckReport, check_equivalence
from .circuits import build_walk_machine
from .errors import UsageError
from .linalg import pure_density


@dataclass(frozen=True)
class WalkCase:
    index: int
    size: int
    coin1: str
    state1: str
    coin2: str
    state2: str
    expected: str  # "equivalent" | "not-equivalent"


WALK_CASES: tuple[WalkCase, ...] = (
    WalkCase(1, 4, "H", "0c0p", "H", "0c2p", "not-equivalent"),
    WalkCase(2, 4, "H", "phic0p", "H", "phic2p", "equivalent"),
    WalkCase(3, 4, "H", "0c0p", "H", "1c2p", "equivalent"),
    WalkCase(4, 4, "H", "0c1p", "H", "1c1p", "equivalent"),
    WalkCase(5, 4, "H", "0c2p", "H", "1c0p", "equivalent"),
    WalkCase(6, 4, "H", "0c0p", "Y", "0c0p", "equivalent"),
    WalkCase(7, 8, "H", "0c0p", "H", "1c6p", "equivalent"),
    WalkCase(8, 8, "H", "0c0p", "Y", "0c0p", "equivalent"),
)


def run_case(case: WalkCase, *, early_abort: bool = True, tolerance: float | None = None) -> CheckReport:
    """Run one suite case and return the checker's report."""
    m1, states1 = build_walk_machine(case.size, case.coin1)
    m2, states2 = build_walk_machine(case.size, case.coin2)
    rho1 = pure_density(states1[case.state1])
    rho2 = pure_density(states2[case.state2])
    return check_equivalence(
        m1, m2, rho1, rho2, early_abort=early_abort, tolerance=tolerance
    )


def select_cases(indices=None) -> tuple[WalkCase, ...]:
    """Subset of the suite by 1-based case index (all when indices is None)."""
    if indices is None:
        return WALK_CASES
    by_index = {c.index: c for c in WALK_CASES}
    picked = []
    for i in indices:
        if i not in by_index:
            raise UsageError(f"no such case {i}; valid cases are 1..{len(WALK_CASES)}")
        picked.append(by_index[i])
    return tuple(sorted(picked, key=lambda c: c.index))
