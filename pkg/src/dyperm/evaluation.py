"""Agreement between a detected partition and ground truth (NMI, ARI)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Union

import numpy as np

from .errors import NodeSetMismatch
from .graph import Partition

Labels = Union[Partition, Mapping[int, int]]


@dataclass(frozen=True)
class ContingencyTable:
    counts: np.ndarray  # rows: detected communities, columns: truth communities
    n: int

    @property
    def row_sums(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def col_sums(self) -> np.ndarray:
        return self.counts.sum(axis=0)


@dataclass(frozen=True)
class EvalRecord:
    timestamp: int
    nmi: float
    ari: float
    skipped: int = 0


def _labels(x: Labels) -> Mapping[int, int]:
    return x.assignment if isinstance(x, Partition) else x


def contingency(a: Labels, b: Labels) -> ContingencyTable:
    la, lb = _labels(a), _labels(b)
    if la.keys() != lb.keys():
        raise NodeSetMismatch(
            f"partitions cover different node sets ({len(la)} vs {len(lb)} nodes)"
        )
    nodes = sorted(la)
    _, ra = np.unique(np.fromiter((la[u] for u in nodes), dtype=np.int64, count=len(nodes)), return_inverse=True)
    _, rb = np.unique(np.fromiter((lb[u] for u in nodes), dtype=np.int64, count=len(nodes)), return_inverse=True)
    counts = np.zeros((ra.max(initial=-1) + 1, rb.max(initial=-1) + 1), dtype=np.int64)
    np.add.at(counts, (ra, rb), 1)
    return ContingencyTable(counts, len(nodes))


def _entropy(sizes: np.ndarray, n: int) -> float:
    p = sizes[sizes > 0] / n
    return -math.fsum(p * np.log(p))


def nmi(a: Labels, b: Labels) -> float:
    """Normalized mutual information, 2 I(A;B) / (H(A) + H(B)), natural log.

    Two single-cluster partitions score 1.0; if exactly one side has zero
    entropy the score is 0.0.
    """
    t = contingency(a, b)
    if t.n == 0:
        return 1.0
    ha, hb = _entropy(t.row_sums, t.n), _entropy(t.col_sums, t.n)
    if ha == 0.0 and hb == 0.0:
        return 1.0
    if ha == 0.0 or hb == 0.0:
        return 0.0
    nz = t.counts > 0
    if (nz.sum(axis=0) == 1).all() and (nz.sum(axis=1) == 1).all():
        # one-to-one correspondence: exactly 1.0 despite rounding
        return 1.0
    pij = t.counts[nz] / t.n
    outer = np.outer(t.row_sums, t.col_sums)[nz] / (t.n * t.n)
    mi = math.fsum(pij * np.log(pij / outer))
    return min(1.0, max(0.0, 2.0 * mi / (ha + hb)))


def _comb2(x):
    return x * (x - 1) / 2.0


def ari(a: Labels, b: Labels) -> float:
    """Hubert-Arabie adjusted Rand index from pair counts.

    Returns 1.0 in the degenerate case where the expected index equals the
    maximum index (both partitions trivial in the same way).
    """
    t = contingency(a, b)
    if t.n < 2:
        return 1.0
    index = float(_comb2(t.counts).sum())
    sum_a = float(_comb2(t.row_sums).sum())
    sum_b = float(_comb2(t.col_sums).sum())
    expected = sum_a * sum_b / _comb2(t.n)
    maximum = (sum_a + sum_b) / 2.0
    if maximum == expected:
        return 1.0
    if index == sum_a == sum_b:
        return 1.0
    return (index - expected) / (maximum - expected)


def score_against_truth(detected: Labels, truth: Mapping[int, int], timestamp: int = 0) -> EvalRecord:
    """Score on the nodes both sides know; nodes missing from truth are skipped."""
    det = _labels(detected)
    common = [u for u in det if u in truth]
    skipped = len(det) - len(common)
    a = {u: det[u] for u in common}
    b = {u: truth[u] for u in common}
    return EvalRecord(timestamp, nmi(a, b), ari(a, b), skipped)
