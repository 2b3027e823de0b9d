"""Total-variation geometry on finite outcome spaces.

The total-variation (TV) distance between two distributions is the
largest disagreement they can have about any event.  On a finite space
it collapses to half the L1 norm of the difference, which is what the
library computes; this script checks that identity against the literal
supremum over all events, then looks at how TV behaves on random
distributions drawn uniformly (in the L1 sense) from the simplex.

Run:  python3 demos/01_tv_geometry.py
"""

import itertools

import numpy as np

from credal import (
    OutcomeSpace,
    event_probability,
    make_distribution,
    sample_l1_uniform,
    tv_distance,
)

rng = np.random.default_rng(7)

# -- 1. The sup-over-events definition, checked exhaustively ----------------

space = OutcomeSpace(["a", "b", "c", "d", "e"])
p = make_distribution(space, [0.35, 0.05, 0.25, 0.15, 0.20])
q = make_distribution(space, [0.10, 0.30, 0.25, 0.05, 0.30])

best_gap, best_set = -1.0, ()
for r in range(len(space) + 1):
    for combo in itertools.combinations(range(len(space)), r):
        ev = space.event_from_indices(combo)
        gap = abs(event_probability(p, ev) - event_probability(q, ev))
        if gap > best_gap:
            best_gap, best_set = gap, combo

print("exhaustive sup over all 32 events :", best_gap)
print("worst event                       :", [space.labels[i] for i in best_set])
print("tv_distance (half-L1)             :", tv_distance(p, q))
assert abs(best_gap - tv_distance(p, q)) < 1e-15
print()

# -- 2. Metric axioms on random draws ---------------------------------------

a = sample_l1_uniform(space, rng)
b = sample_l1_uniform(space, rng)
c = sample_l1_uniform(space, rng)

print("d(a,a) =", tv_distance(a, a))
print("d(a,b) =", tv_distance(a, b), " d(b,a) =", tv_distance(b, a))
lhs = tv_distance(a, b)
rhs = tv_distance(a, c) + tv_distance(c, b)
print(f"triangle: d(a,b) = {lhs:.6f}  <=  d(a,c) + d(c,b) = {rhs:.6f}")
assert lhs <= rhs + 1e-12
print()

# -- 3. Distances between uniform draws concentrate with dimension ----------

print("mean TV distance between two L1-uniform draws:")
for n in (2, 4, 8, 16, 32):
    sp = OutcomeSpace(list(range(n)))
    dists = [
        tv_distance(sample_l1_uniform(sp, rng), sample_l1_uniform(sp, rng))
        for _ in range(2000)
    ]
    print(f"  n = {n:2d}:  mean = {np.mean(dists):.4f}   sd = {np.std(dists):.4f}")

print()
print("The distance is always in [0, 1]; as the space grows, random")
print("pairs land in an ever-narrower band around a typical distance.")
