"""Property sweeps over record depths for one policy.

Checks, at every depth up to a limit: self-consistency, drop generator
against set difference, predicate against enumeration, closed-form
counts, the family's hard size cap, and realized gaps against
``gap_bound``.  The predicate is evaluated at every rank up to
``pointwise_limit``; deeper, it is evaluated on the ranks retained at
``n`` or ``n - 1`` plus a fixed-seed random sample of the rest.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .api import (
    dropped_ranks,
    gap_bound,
    retained_count,
    retained_ranks,
    retention_predicate,
)
from .spec import Family, PolicySpec

# measured ceiling on RPR count / ((r + 1) * (log2 n + 1)) over n <= 2**14
RPR_LOG_RATIO_CAP = 1.0


def size_cap(policy: PolicySpec, n: int) -> float:
    """Hard cap on the retained count at depth ``n``, or inf where none applies."""
    p = policy.param
    fam = policy.family
    if fam in (Family.DPR, Family.TAPERED_DPR):
        return 2 * p + 1
    if fam is Family.GSNR:
        return 6 * p + 2
    if fam is Family.CRPR:
        return p
    if fam is Family.FR:
        return n / p + 2
    if fam is Family.RPR and n > 1:
        return RPR_LOG_RATIO_CAP * (p + 1) * (math.log2(n) + 1)
    return math.inf


@dataclass
class CheckReport:
    policy: PolicySpec
    max_depth: int
    violations: list[str] = field(default_factory=list)
    limit: int = 20

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, message: str) -> None:
        if len(self.violations) < self.limit:
            self.violations.append(message)


def check_policy(policy: PolicySpec, max_depth: int, pointwise_limit: int = 2048,
                 samples: int = 64, seed: int = 0) -> CheckReport:
    report = CheckReport(policy, max_depth)
    rng = random.Random(seed)
    prev: tuple[int, ...] = ()
    for n in range(max_depth + 1):
        ranks = retained_ranks(policy, n)
        kept = set(ranks)
        after = retained_ranks(policy, n + 1)
        if not set(after) <= kept | {n}:
            report.add(f"n={n}: retained set at n+1 resurrects a discarded rank")
        if set(dropped_ranks(policy, n)) != kept - set(after):
            report.add(f"n={n}: drop generator disagrees with set difference")
        if retained_count(policy, n) != len(ranks):
            report.add(f"n={n}: closed-form count {retained_count(policy, n)} != {len(ranks)}")
        if len(ranks) > size_cap(policy, n):
            report.add(f"n={n}: {len(ranks)} retained exceeds cap {size_cap(policy, n):.2f}")
        if policy.family is Family.FR and n and abs(len(ranks) - (n / policy.param + 1)) > 1:
            report.add(f"n={n}: fixed-resolution count {len(ranks)} not within 1 of n/r+1")
        for lo, hi in zip(ranks, ranks[1:]):
            if hi - lo > gap_bound(policy, lo, n):
                report.add(f"n={n}: gap {lo}->{hi} exceeds bound {gap_bound(policy, lo, n)}")
        if n <= pointwise_limit:
            probe = range(n)
        else:
            probe = kept | set(prev) | {rng.randrange(n) for _ in range(samples)}
        for t in probe:
            if t < n and retention_predicate(policy, t, n) != (t in kept):
                report.add(f"n={n}: predicate disagrees with enumeration at rank {t}")
        prev = ranks
    return report
