# Φ is only defined up to GL(W), and each quadric's sign depends on how its
# pair is written down.  This script pokes at both.

import random
from fractions import Fraction

from thetarecon.oracle import generate_steiner, random_config
from thetarecon.phi import compare_up_to_gl, recover_phi
from thetarecon.pipeline import RunConfig, reconstruct
from thetarecon.quadrics import flip_signs, resolve_signs_blind
from thetarecon.steiner import SteinerInput, ThetaPair, wedge_points

inp = generate_steiner(random_config(4, seed=11), witness_count=24, seed=11)
points = wedge_points(inp)

# two seeds pick different basis points, so two different matrices ...
a, da = recover_phi(points, inp.ctx, seed=0)
b, db = recover_phi(points, inp.ctx, seed=99)
print(da.chosen_basis_ids, db.chosen_basis_ids)
print("same matrix:", (a.matrix == b.matrix).all())

# ... related by S²h for some h on W
w = compare_up_to_gl(a, b, inp.ctx)
print("h =", [[str(x) for x in row] for row in w.h], "scale", w.scale)

# full run: signs from witnesses
res = reconstruct(inp, RunConfig(seed=0))
print(res.sign_method, set(res.signs.values()), "all vanish:", res.report.all_vanish)

# without witnesses the signs come from parity constraints between pairs;
# the answer is fixed only up to flipping every sign
blind = resolve_signs_blind(inp, res.phi)
print("blind agrees:", blind in (res.signs, flip_signs(res.signs)))

# rescale and swap the input covectors: the emitted quadrics keep their zero sets
rng = random.Random(0)
pairs = []
for p in inp.pairs:
    lam = Fraction(rng.choice([-3, -1, 2, 5]), rng.randint(1, 7))
    pairs.append(ThetaPair(p.id, p.Lp * lam, p.L) if rng.random() < 0.5 else ThetaPair(p.id, p.L * lam, p.Lp))
other = SteinerInput(inp.ctx, pairs, inp.witnesses, inp.ground_truth)
res2 = reconstruct(other, RunConfig(seed=0))
flipped = sum(res.signs[k] != res2.signs[k] for k in res.signs)
print(f"{flipped} of {len(pairs)} signs changed; all vanish:", res2.report.all_vanish)
print("graded dims", res.report.graded_dims, res2.report.graded_dims)
