"""Finite outcome spaces, distributions, and total-variation geometry.

Conventions used throughout the package:

* An outcome space is an ordered tuple of distinct hashable labels
  (strings or integers).  Ordering matters because distributions are
  stored as dense vectors aligned with it.
* Total variation distance between two probability vectors ``a, b`` over
  the same finite space is ``sup_E |a(E) - b(E)|``, which on a finite
  space equals ``0.5 * sum_i |a_i - b_i|``.  It is the metric every
  geometric notion in this package (uniformity, thickness, member
  merging) is defined against.
* Sampling uniformly in that metric over the probability simplex is the
  flat Dirichlet distribution, realized by normalizing i.i.d. unit
  exponentials.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    IndexOutOfRange,
    LengthMismatch,
    NegativeWeight,
    SpaceMismatch,
    ZeroProbabilityEvent,
    ZeroTotal,
)

__all__ = [
    "OutcomeSpace",
    "Event",
    "FiniteDistribution",
    "RationalDistribution",
    "make_distribution",
    "make_rational_distribution",
    "tv_distance",
    "event_probability",
    "condition",
    "sample_l1_uniform",
    "stable_sum",
]

# Above this length, plain pairwise summation is swapped for compensated
# summation so that long reductions stay reproducible to the last bit.
_FSUM_CUTOFF = 10_000


def stable_sum(values) -> float:
    """Sum a 1-D collection of floats with order-independent accuracy.

    Uses numpy's pairwise summation for short inputs and ``math.fsum``
    (exact compensated summation) once the length makes accumulated
    rounding worth worrying about.
    """
    arr = np.asarray(values, dtype=np.float64).ravel()
    if arr.size > _FSUM_CUTOFF:
        return math.fsum(arr.tolist())
    return float(np.sum(arr))


class OutcomeSpace:
    """An ordered finite set of distinct outcome labels."""

    __slots__ = ("labels", "_index")

    def __init__(self, labels: Sequence[str | int]):
        labels = tuple(labels)
        if len(labels) == 0:
            raise LengthMismatch("an outcome space needs at least one outcome")
        index = {lab: i for i, lab in enumerate(labels)}
        if len(index) != len(labels):
            raise LengthMismatch("outcome labels must be distinct")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_index", index)

    def __setattr__(self, name, value):  # immutable
        raise AttributeError("OutcomeSpace is immutable")

    def __len__(self) -> int:
        return len(self.labels)

    def __eq__(self, other) -> bool:
        return isinstance(other, OutcomeSpace) and self.labels == other.labels

    def __hash__(self) -> int:
        return hash(self.labels)

    def __repr__(self) -> str:
        return f"OutcomeSpace({list(self.labels)!r})"

    def index(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise IndexOutOfRange(f"label {label!r} not in space") from None

    def event(self, labels: Iterable) -> "Event":
        """Event consisting of the given outcome labels."""
        return Event(self, indices=[self.index(lab) for lab in labels])

    def event_from_indices(self, indices: Iterable[int]) -> "Event":
        return Event(self, indices=indices)

    def full_event(self) -> "Event":
        return Event(self, indices=range(len(self.labels)))


class Event:
    """A subset of an outcome space, kept as sorted outcome indices."""

    __slots__ = ("space", "indices")

    def __init__(self, space: OutcomeSpace, indices: Iterable[int]):
        idx = sorted(set(int(i) for i in indices))
        n = len(space)
        if idx and (idx[0] < 0 or idx[-1] >= n):
            raise IndexOutOfRange(f"event indices must lie in [0, {n})")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "indices", tuple(idx))

    def __setattr__(self, name, value):
        raise AttributeError("Event is immutable")

    def __len__(self) -> int:
        return len(self.indices)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Event)
            and self.space == other.space
            and self.indices == other.indices
        )

    def __hash__(self) -> int:
        return hash((self.space, self.indices))

    def __repr__(self) -> str:
        return f"Event({list(self.labels)!r})"

    @property
    def labels(self) -> tuple:
        return tuple(self.space.labels[i] for i in self.indices)

    def complement(self) -> "Event":
        present = set(self.indices)
        return Event(self.space, (i for i in range(len(self.space)) if i not in present))

    def intersect(self, other: "Event") -> "Event":
        _require_same_space(self.space, other.space)
        return Event(self.space, set(self.indices) & set(other.indices))

    def union(self, other: "Event") -> "Event":
        _require_same_space(self.space, other.space)
        return Event(self.space, set(self.indices) | set(other.indices))

    __and__ = intersect
    __or__ = union

    def indicator(self) -> np.ndarray:
        out = np.zeros(len(self.space), dtype=bool)
        out[list(self.indices)] = True
        return out


def _require_same_space(a: OutcomeSpace, b: OutcomeSpace) -> None:
    if a != b:
        raise SpaceMismatch(f"outcome spaces differ: {a!r} vs {b!r}")


class FiniteDistribution:
    """A probability vector over a finite outcome space.

    The constructor expects an already-normalized vector (sum within
    1e-12 of one); use :func:`make_distribution` to normalize raw
    non-negative weights.
    """

    __slots__ = ("space", "probs")

    def __init__(self, space: OutcomeSpace, probs):
        probs = np.asarray(probs, dtype=np.float64)
        if probs.ndim != 1 or probs.size != len(space):
            raise LengthMismatch(
                f"need {len(space)} probabilities, got shape {probs.shape}"
            )
        if np.any(probs < 0.0):
            raise NegativeWeight("probabilities must be non-negative")
        total = stable_sum(probs)
        if abs(total - 1.0) > 1e-12:
            raise ZeroTotal(f"probabilities sum to {total!r}, not 1")
        probs = probs.copy()
        probs.setflags(write=False)
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "probs", probs)

    def __setattr__(self, name, value):
        raise AttributeError("FiniteDistribution is immutable")

    def __repr__(self) -> str:
        body = ", ".join(
            f"{lab!r}: {p:.6g}" for lab, p in zip(self.space.labels, self.probs)
        )
        return f"FiniteDistribution({{{body}}})"

    def prob(self, event: Event) -> float:
        return event_probability(self, event)

    def support(self) -> Event:
        return Event(self.space, np.flatnonzero(self.probs > 0.0))

    def to_dict(self) -> dict:
        return {
            "labels": list(self.space.labels),
            "probs": [float(p) for p in self.probs],
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "FiniteDistribution":
        return cls(OutcomeSpace(payload["labels"]), payload["probs"])


class RationalDistribution:
    """An exact probability vector with :class:`fractions.Fraction` entries.

    Used where the package promises exact arithmetic (urn posteriors,
    counting measures over finite credal sets).  Mirrors the float API:
    ``prob`` returns a Fraction, ``to_float`` drops to a
    :class:`FiniteDistribution`.
    """

    __slots__ = ("space", "probs")

    def __init__(self, space: OutcomeSpace, probs):
        probs = tuple(Fraction(p) for p in probs)
        if len(probs) != len(space):
            raise LengthMismatch(f"need {len(space)} probabilities, got {len(probs)}")
        if any(p < 0 for p in probs):
            raise NegativeWeight("probabilities must be non-negative")
        if sum(probs) != 1:
            raise ZeroTotal(f"probabilities sum to {sum(probs)}, not 1")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "probs", probs)

    def __setattr__(self, name, value):
        raise AttributeError("RationalDistribution is immutable")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RationalDistribution)
            and self.space == other.space
            and self.probs == other.probs
        )

    def __hash__(self) -> int:
        return hash((self.space, self.probs))

    def __repr__(self) -> str:
        body = ", ".join(
            f"{lab!r}: {p}" for lab, p in zip(self.space.labels, self.probs)
        )
        return f"RationalDistribution({{{body}}})"

    def prob(self, event: Event) -> Fraction:
        _require_same_space(self.space, event.space)
        return sum((self.probs[i] for i in event.indices), Fraction(0))

    def condition(self, event: Event) -> "RationalDistribution":
        mass = self.prob(event)
        if mass == 0:
            raise ZeroProbabilityEvent("conditioning event has probability zero")
        keep = set(event.indices)
        probs = tuple(
            (p / mass if i in keep else Fraction(0)) for i, p in enumerate(self.probs)
        )
        return RationalDistribution(self.space, probs)

    def to_float(self) -> FiniteDistribution:
        return make_distribution(self.space, [float(p) for p in self.probs])


def make_distribution(space: OutcomeSpace, weights) -> FiniteDistribution:
    """Normalize non-negative weights into a distribution over ``space``.

    Relative proportions are preserved exactly up to the single division
    by the total; already-normalized input passes through unchanged.
    """
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1 or w.size != len(space):
        raise LengthMismatch(f"need {len(space)} weights, got shape {w.shape}")
    if np.any(w < 0.0):
        raise NegativeWeight("weights must be non-negative")
    total = stable_sum(w)
    if total <= 0.0:
        raise ZeroTotal("weights sum to zero")
    return FiniteDistribution(space, w / total)


def make_rational_distribution(space: OutcomeSpace, weights) -> RationalDistribution:
    """Exact-arithmetic counterpart of :func:`make_distribution`."""
    w = [Fraction(x) for x in weights]
    if len(w) != len(space):
        raise LengthMismatch(f"need {len(space)} weights, got {len(w)}")
    if any(x < 0 for x in w):
        raise NegativeWeight("weights must be non-negative")
    total = sum(w, Fraction(0))
    if total == 0:
        raise ZeroTotal("weights sum to zero")
    return RationalDistribution(space, [x / total for x in w])


def _as_prob_array(d) -> np.ndarray:
    if isinstance(d, FiniteDistribution):
        return d.probs
    if isinstance(d, RationalDistribution):
        return np.asarray([float(p) for p in d.probs], dtype=np.float64)
    raise TypeError(f"expected a distribution, got {type(d).__name__}")


def tv_distance(a, b) -> float:
    """Total variation distance ``sup_E |a(E) - b(E)| = 0.5 * ||a - b||_1``."""
    _require_same_space(a.space, b.space)
    pa, pb = _as_prob_array(a), _as_prob_array(b)
    return 0.5 * stable_sum(np.abs(pa - pb))


def event_probability(d: FiniteDistribution, event: Event) -> float:
    """Probability mass the distribution assigns to the event."""
    _require_same_space(d.space, event.space)
    if not event.indices:
        return 0.0
    return stable_sum(d.probs[list(event.indices)])


def condition(d: FiniteDistribution, event: Event) -> FiniteDistribution:
    """Bayesian conditioning on an event of positive probability.

    The result lives on the same outcome space with support inside the
    event; restricting to a smaller space is a separate relabeling step
    (see :func:`credal.sets.credal_condition`).
    """
    if isinstance(d, RationalDistribution):
        return d.condition(event)
    mass = event_probability(d, event)
    if mass <= 0.0:
        raise ZeroProbabilityEvent("conditioning event has probability zero")
    out = np.zeros(len(d.space), dtype=np.float64)
    idx = list(event.indices)
    out[idx] = d.probs[idx] / mass
    # Guard against rounding pushing the total off one.
    out /= stable_sum(out)
    return FiniteDistribution(d.space, out)


def sample_l1_uniform(space: OutcomeSpace, rng: np.random.Generator):
    """Draw one distribution uniformly (w.r.t. TV distance) over the simplex.

    Normalized i.i.d. unit exponentials are jointly flat-Dirichlet, which
    is exactly the uniform law under the L1 (hence TV) metric.  Pass an
    explicit ``numpy.random.Generator``; determinism and parallel stream
    splitting are the caller's to manage via seeds and ``Generator.spawn``.
    """
    row = sample_l1_uniform_rows(len(space), 1, rng)[0]
    return FiniteDistribution(space, row)


def sample_l1_uniform_rows(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Batch form of :func:`sample_l1_uniform`: ``size`` rows of length ``n``.

    Returns a plain array (rows sum to one) for callers that build large
    stacks of weight vectors and do not want object overhead.
    """
    if n < 1 or size < 1:
        raise LengthMismatch("need n >= 1 and size >= 1")
    x = rng.standard_exponential(size=(size, n))
    totals = x.sum(axis=1, keepdims=True)
    # A total of exactly zero has probability zero; resample defensively.
    while np.any(totals == 0.0):  # pragma: no cover - probability-zero branch
        bad = totals[:, 0] == 0.0
        x[bad] = rng.standard_exponential(size=(int(bad.sum()), n))
        totals = x.sum(axis=1, keepdims=True)
    return x / totals
