# The float backend runs the same pipeline on doubles with a relative rank
# tolerance.  On small oracle data it should make the same decisions.

import time

from thetarecon.oracle import generate_steiner, random_config
from thetarecon.pipeline import RunConfig, reconstruct

for g in (3, 4, 5):
    inp = generate_steiner(random_config(g, seed=3, height=20), witness_count=24, seed=3)

    t0 = time.perf_counter()
    exact = reconstruct(inp, RunConfig(seed=3))
    t1 = time.perf_counter()
    approx = reconstruct(inp, RunConfig(backend="float", tol=1e-8, seed=3))
    t2 = time.perf_counter()

    print(f"g={g}: exact {t1 - t0:.2f}s, float {t2 - t1:.2f}s")
    print("  same signs:", exact.signs == approx.signs)
    print("  same rank-1 verdicts:", exact.rank_one.ok == approx.rank_one.ok)
    print("  worst rank-1 residual (float): %.1e" % approx.rank_one.worst_residual)
    worst = max(float(r) for row in approx.report.witness_results for r in row["residuals"].values())
    print("  worst witness residual (float): %.1e" % worst)
