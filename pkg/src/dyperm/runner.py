"""Drive an engine through an event stream, one row per time-stamp."""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field
from itertools import groupby
from typing import Callable, Iterable, Mapping, Sequence

from .engine import DyPermEngine
from .evaluation import score_against_truth
from .graph import AtomicEvent

TruthLookup = Callable[[int], "Mapping[int, int] | None"]


@dataclass
class TimestampRow:
    timestamp: int
    n_nodes: int
    n_edges: int
    n_communities: int
    graph_perm: float
    nmi: float | None = None
    ari: float | None = None
    skipped: int | None = None
    elapsed_us: int = 0


@dataclass
class RunResult:
    rows: list[TimestampRow] = field(default_factory=list)
    scored: bool = False

    def to_csv(self, timing: bool = True, metrics: Sequence[str] = ("nmi", "ari")) -> str:
        """Render rows with 6-decimal floats; metric columns follow ``metrics``."""
        metrics = list(metrics) if self.scored else []
        header = ["timestamp", "n_nodes", "n_edges", "n_communities", "graph_perm"]
        if metrics:
            header += [*metrics, "skipped"]
        if timing:
            header.append("elapsed_us")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in self.rows:
            rec = [r.timestamp, r.n_nodes, r.n_edges, r.n_communities, f"{r.graph_perm:.6f}"]
            if metrics:
                if r.nmi is None:
                    rec += [""] * (len(metrics) + 1)
                else:
                    rec += [f"{getattr(r, m):.6f}" for m in metrics] + [r.skipped]
            if timing:
                rec.append(r.elapsed_us)
            w.writerow(rec)
        return buf.getvalue()


def run_timeline(
    engine: DyPermEngine,
    events: Iterable[AtomicEvent],
    truth: TruthLookup | None = None,
    extra_timestamps: Iterable[int] = (),
) -> RunResult:
    """Apply ``events`` grouped by time-stamp and record the state after each.

    Row 0 describes the base snapshot. ``extra_timestamps`` adds rows for
    time-stamps that have ground truth but no events.
    """
    result = RunResult(scored=truth is not None)
    batches = {t: list(batch) for t, batch in groupby(events, key=lambda e: e.timestamp)}
    stamps = sorted({0, *batches, *extra_timestamps})
    for t in stamps:
        start = time.perf_counter_ns()
        for e in batches.get(t, ()):
            engine.apply_event(e)
        elapsed = (time.perf_counter_ns() - start) // 1000
        row = TimestampRow(
            t,
            len(engine.graph),
            engine.graph.n_edges,
            engine.partition.n_communities,
            engine.graph_perm,
            elapsed_us=elapsed,
        )
        if truth is not None:
            labels = truth(t)
            if labels is not None:
                rec = score_against_truth(engine.partition, labels, t)
                row.nmi, row.ari, row.skipped = rec.nmi, rec.ari, rec.skipped
        result.rows.append(row)
    return result
