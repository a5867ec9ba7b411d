# Genus 3 by hand: branch points 1,2,3,4,7,8 plus the pair 5,6 defining α.
# Run with: python demos/genus3_walkthrough.py

import numpy as np

from thetarecon import linalg as la
from thetarecon.oracle import HyperellipticConfig, generate_steiner, witness_point
from thetarecon.phi import PhiMap, compare_up_to_gl, recover_phi
from thetarecon.quadrics import assemble_quadrics, prym_hyperplanes, resolve_signs
from thetarecon.steiner import wedge_points

cfg = HyperellipticConfig(3, (1, 2, 3, 4, 7, 8, 5, 6))
inp = generate_steiner(cfg, witness_count=24, seed=0)
print(len(inp.pairs), "Steiner pairs")  # C(6,1) = 6

# pair I = {1}: L through x_1, x_7 and L' through x_1, x_8
pair = inp.pair(0)
print("L  =", [str(x) for x in pair.L])   # (t-1)(t-5) -> 5, -6, 1
print("L' =", [str(x) for x in pair.Lp])  # (t-1)(t-6) -> 6, -7, 1

# the recovery only ever sees the wedge points L ∧ L'
points = wedge_points(inp)
print("L∧L' =", [str(x) for x in points[0][1]])

# quadrics through the six wedge points: one conic in P²
i2 = la.quadrics_through_points([q for _, q in points])
print("dim I2 =", len(i2))
print(i2[0])

phi, diag = recover_phi(points, inp.ctx, seed=0)
print("basis ids", diag.chosen_basis_ids, "normalizer", diag.normalizing_id)
print(phi.matrix)

# recovered Φ agrees with the true one after a basis change of W
truth = PhiMap(3, inp.ground_truth.phi)
gauge = compare_up_to_gl(truth, phi, inp.ctx)
print("h =", gauge.h.tolist(), " scale =", gauge.scale)

# Prym hyperplanes: Φ(L∧L') = c M²
for ident, (m, c) in prym_hyperplanes(phi, points).items():
    print(ident, inp.ground_truth.subsets[ident], "M =", [str(x) for x in m], "c =", c)

# the witness at s = 2 lies on z² = (t-5)(t-6)
p = witness_point(cfg, 2)
print("witness", [str(x) for x in p])
v, w = p[:3], p[3:]
print("L L' =", (pair.L @ v) * (pair.Lp @ v), " M(w)² =", (inp.ground_truth.prym[0] @ w) ** 2)

# signs from witnesses (expressed in the coordinates of the true Φ)
signs = resolve_signs(inp, gauge.pull_back_phi(phi), inp.witnesses)
print("signs", signs)

quads = assemble_quadrics(inp, phi, signs)
q = quads[0].matrix
print(np.array([[str(x) for x in row] for row in q]))
print("rank", la.rank(q), " mixed block zero:", not any(q[:3, 3:].ravel()))

# every quadric vanishes on every witness once pulled back to the true coordinates
back = [gauge.pull_back_quadric(q.matrix, 3) for q in quads]
print("all vanish:", all(la.evaluate_form(b, x) == 0 for b in back for x in inp.witnesses))
