"""Incremental updates versus full static recomputation after every event."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .engine import DyPermEngine
from .evaluation import nmi
from .graph import AtomicEvent, Graph, Partition
from .permanence import graph_perm
from .static import InitConfig, static_maximize
from .workload import apply_to_graph


@dataclass
class BenchReport:
    n_events: int
    incremental_us: list[float]
    affected_volume: list[int]
    static_us: dict[int, int]  # event index -> static re-run time
    final_nmi: float
    final_perm_incremental: float
    final_perm_static: float

    @property
    def incremental_total_s(self) -> float:
        return sum(self.incremental_us) / 1e6

    @property
    def static_total_s(self) -> float:
        """Static arm total; extrapolated from the sampled events when strided."""
        if not self.static_us:
            return 0.0
        mean = sum(self.static_us.values()) / len(self.static_us)
        return mean * self.n_events / 1e6

    @property
    def speedup(self) -> float:
        inc = self.incremental_total_s
        return self.static_total_s / inc if inc > 0 else float("inf")

    def scaling_exponent(self) -> float:
        """Log-log slope of per-event latency against affected volume.

        Events are binned by volume (quantiles) and the bin medians are fitted,
        which keeps timer noise on tiny events from dominating the fit.
        """
        vol = np.asarray(self.affected_volume, dtype=float)
        lat = np.asarray(self.incremental_us, dtype=float)
        ok = (vol > 0) & (lat > 0)
        vol, lat = vol[ok], lat[ok]
        if vol.size < 10 or np.unique(vol).size < 3:
            return float("nan")
        edges = np.unique(np.quantile(vol, np.linspace(0, 1, 11)))
        idx = np.clip(np.searchsorted(edges, vol, side="right") - 1, 0, edges.size - 2)
        xs, ys = [], []
        for b in range(edges.size - 1):
            sel = idx == b
            if sel.sum() >= 3:
                xs.append(np.log(np.median(vol[sel])))
                ys.append(np.log(np.median(lat[sel])))
        if len(xs) < 3:
            return float("nan")
        return float(np.polyfit(xs, ys, 1)[0])

    def summary(self) -> str:
        lines = [
            f"events={self.n_events}",
            f"incremental_total_s={self.incremental_total_s:.6f}",
            f"static_total_s={self.static_total_s:.6f}",
            f"static_samples={len(self.static_us)}",
            f"speedup={self.speedup:.2f}",
            f"latency_volume_exponent={self.scaling_exponent():.3f}",
            f"final_nmi={self.final_nmi:.6f}",
            f"final_perm_incremental={self.final_perm_incremental:.6f}",
            f"final_perm_static={self.final_perm_static:.6f}",
        ]
        return "\n".join(lines) + "\n"

    def per_event_csv(self) -> str:
        lines = ["event,affected_volume,incremental_us,static_us"]
        for i, (vol, us) in enumerate(zip(self.affected_volume, self.incremental_us)):
            st = self.static_us.get(i, "")
            lines.append(f"{i},{vol},{us:.1f},{st}")
        return "\n".join(lines) + "\n"


def _affected_volume(engine: DyPermEngine, e: AtomicEvent) -> int:
    """Summed degree of the communities the event touches (pre-event)."""
    labels, members, adj = engine.partition.assignment, engine.partition.members, engine.graph.adj
    comms = {labels[x] for x in (e.u, e.v) if x is not None and x in labels}
    return sum(len(adj[w]) for c in comms for w in members[c])


def bench(
    base: Graph,
    base_partition: Partition,
    events: list[AtomicEvent],
    init: InitConfig = InitConfig(),
    static_every: int = 1,
) -> BenchReport:
    """Time both arms over ``events``.

    The static arm re-runs ``static_maximize`` on the snapshot after event
    ``i`` for every ``static_every``-th event (and the last one); with a
    stride above 1 its total is extrapolated from the sampled mean.
    """
    engine = DyPermEngine(base.copy(), base_partition)
    mirror = base.copy()
    inc_us, volume, static_us = [], [], {}
    final_static = None
    last = len(events) - 1
    for i, e in enumerate(events):
        volume.append(_affected_volume(engine, e))
        t0 = time.perf_counter_ns()
        engine.apply_event(e)
        inc_us.append((time.perf_counter_ns() - t0) / 1000)
        apply_to_graph(mirror, e)
        if i % static_every == 0 or i == last:
            t0 = time.perf_counter_ns()
            part = static_maximize(mirror, init)
            static_us[i] = (time.perf_counter_ns() - t0) // 1000
            if i == last:
                final_static = part
    if final_static is None:
        final_static = static_maximize(mirror, init)
    return BenchReport(
        n_events=len(events),
        incremental_us=inc_us,
        affected_volume=volume,
        static_us=static_us,
        final_nmi=nmi(engine.partition, final_static),
        final_perm_incremental=engine.graph_perm,
        final_perm_static=graph_perm(mirror, final_static).graph_perm,
    )
