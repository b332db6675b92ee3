"""
Incremental updates versus recomputing from scratch
===================================================

After every event one can either patch the communities locally or rerun
the static maximizer on the whole snapshot. Both arms are timed here on a
mid-sized workload; the static arm is sampled every 20 events.
"""

from dyperm import GenConfig, Partition, gen_dynamic, static_maximize
from dyperm.bench import bench
from dyperm.static import InitConfig

w = gen_dynamic(GenConfig(n=500, k=10, mu=0.2, avg_degree=12, steps=3, seed=2))
events = w.events[:300]
cfg = InitConfig(seed=0)

base = static_maximize(w.base, cfg)
print(f"static start: {base.n_communities} communities")

report = bench(w.base, base, events, cfg, static_every=20)
print(report.summary())

# Per-event cost rises with the size of the communities an event touches.
rows = report.per_event_csv().splitlines()
print("\n".join(rows[:6]))
