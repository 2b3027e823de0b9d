"""Conditioning a credal set can widen it: dilation in two coin flips.

A credal set replaces a single distribution with a set of candidates.
Here the model is two flips linked by an unknown bias: candidate
distributions assign (p/2, (1-p)/2, p/2, (1-p)/2) to the outcomes
H1H2, H1T2, T1H2, T1T2 as p sweeps a grid.  Before any observation,
every candidate gives the "flips match" event probability exactly 1/2.
After observing that the first flip came up heads, the candidates
disagree: the match probability dilates to the whole grid range.

Run:  python3 demos/02_credal_conditioning.py
"""

import numpy as np

from credal import (
    CredalSet,
    coin_match_family,
    credal_condition,
    event_probability,
    make_distribution,
    probability_range,
)

family = coin_match_family()
space = family.space

grid = np.linspace(0.0, 1.0, 21)
members = [make_distribution(space, family.probs((p,))) for p in grid]
credal = CredalSet(members, labels=[f"p={p:.2f}" for p in grid])

match = space.event(["H1H2", "T1T2"])
first_heads = space.event(["H1H2", "H1T2"])

lo, hi = probability_range(credal, match)
print(f"before conditioning:  P(match) in [{lo:.3f}, {hi:.3f}]")

posterior, mapping = credal_condition(credal, first_heads)
match_after = mapping.map_event(match)
lo2, hi2 = probability_range(posterior, match_after)
print(f"after seeing H1:      P(match) in [{lo2:.3f}, {hi2:.3f}]")
print()

# Walk a few members to see the mechanism: conditioning on H1 turns the
# match probability into p itself, so the spread of the grid is exposed.
print(" p      P(match)    P(match | H1)")
for k in (0, 5, 10, 15, 20):
    p = grid[k]
    before = event_probability(members[k], match)
    cond = mapping.map_distribution(members[k])
    after = event_probability(cond, mapping.map_event(match))
    print(f" {p:.2f}   {before:.4f}      {after:.4f}")

print()
print("Every member moved from exactly 1/2 to its own value of p: the")
print("observation was uninformative for each candidate jointly, yet the")
print("set-valued belief went from the point 1/2 to the full interval.")

# Conditioning on the *second* flip instead: its probability is p under
# member p, so the p = 0 candidate assigns the evidence probability zero
# and is dropped -- it simply cannot be updated on that observation.
second_heads = space.event(["H1H2", "T1H2"])
posterior2, _ = credal_condition(credal, second_heads)
print(f"\nconditioning on H2 instead drops {len(credal) - len(posterior2)} member"
      f" (the p = 0.00 candidate assigns that evidence probability zero);"
      f" {len(posterior2)} of {len(credal)} remain.")
