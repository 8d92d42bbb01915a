"""Evaluation of decompositions: sizes, weighted complexity, truth match.

Implemented definitions (spelled out because published variants differ):

- wsc        = w_r * |R| + w_u * |UA| + w_p * |PA|, exact rationals.
- accuracy   = fraction of ground-truth roles with an exact permission-set
               match in the mined catalog.
- distance   = mean over truth roles of (1 - best Jaccard similarity
               against any mined role); 0 when every truth role is matched
               exactly, at most 1.
- elapsed_ms = wall-clock time around the mining call only, supplied by the
               caller (this module never does I/O or timing itself).

Reports serialize to JSON and CSV with a fixed field order so repeated runs
compare byte-for-byte (the timing field excepted, being wall-clock).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .model import (
    AccessMatrix,
    Decomposition,
    IncompleteDecompositionError,
    MiningConfig,
    is_complete,
)

JSON_FIELDS = (
    "r_count",
    "ua_size",
    "pa_size",
    "wsc",
    "accuracy",
    "distance",
    "elapsed_ms",
    "algorithm",
    "k",
    "dataset",
    "seed",
)


@dataclass(frozen=True)
class MetricsReport:
    r_count: int
    ua_size: int
    pa_size: int
    wsc: Fraction
    accuracy: Fraction | None
    distance: Fraction | None
    elapsed_ms: float
    algorithm: str = ""
    k: int = 0
    dataset: str = ""
    seed: int = 0

    def to_json_dict(self) -> dict:
        """Field order follows JSON_FIELDS; exact rationals become canonical
        fraction strings ("6", "1/2") so no precision is lost in transit."""
        return {
            "r_count": self.r_count,
            "ua_size": self.ua_size,
            "pa_size": self.pa_size,
            "wsc": str(self.wsc),
            "accuracy": None if self.accuracy is None else str(self.accuracy),
            "distance": None if self.distance is None else str(self.distance),
            "elapsed_ms": self.elapsed_ms,
            "algorithm": self.algorithm,
            "k": self.k,
            "dataset": self.dataset,
            "seed": self.seed,
        }

    def csv_values(self) -> list[str]:
        d = self.to_json_dict()
        return ["" if d[f] is None else str(d[f]) for f in JSON_FIELDS]


def jaccard(a: frozenset[int], b: frozenset[int]) -> Fraction:
    union = len(a | b)
    if union == 0:
        return Fraction(1)
    return Fraction(len(a & b), union)


def accuracy_distance(
    mined: Sequence[frozenset[int]], truth: Sequence[frozenset[int]]
) -> tuple[Fraction, Fraction]:
    """Exact-match fraction and mean best-Jaccard shortfall, truth-side."""
    mined_sets = [frozenset(s) for s in mined]
    truth_sets = [frozenset(s) for s in truth]
    if not mined_sets or not truth_sets:
        raise ValueError("accuracy/distance are undefined for empty catalogs")
    mined_lookup = set(mined_sets)
    matched = sum(1 for t in truth_sets if t in mined_lookup)
    total = Fraction(0)
    for t in truth_sets:
        best = max(jaccard(t, m) for m in mined_sets)
        total += 1 - best
    n = len(truth_sets)
    return Fraction(matched, n), total / n


def measure(
    upa: AccessMatrix,
    d: Decomposition,
    cfg: MiningConfig,
    truth: Sequence[frozenset[int]] | None = None,
    *,
    elapsed_ms: float = 0.0,
    algorithm: str = "",
    dataset: str = "",
) -> MetricsReport:
    """Score a decomposition; refuses incomplete ones, whose numbers would
    not describe a valid role set."""
    if not is_complete(upa, d):
        raise IncompleteDecompositionError("refusing to measure an incomplete decomposition")
    r = d.r_count()
    ua = d.ua_size()
    pa = d.pa_size()
    w_r, w_u, w_p = cfg.wsc_weights
    wsc = w_r * r + w_u * ua + w_p * pa
    accuracy = distance = None
    if truth is not None:
        accuracy, distance = accuracy_distance([x.perms for x in d.roles], truth)
    return MetricsReport(
        r_count=r,
        ua_size=ua,
        pa_size=pa,
        wsc=wsc,
        accuracy=accuracy,
        distance=distance,
        elapsed_ms=elapsed_ms,
        algorithm=algorithm,
        k=cfg.max_perms_per_role,
        dataset=dataset,
        seed=cfg.seed,
    )
