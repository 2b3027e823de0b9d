"""Credal sets (sets of distributions) and conditioning with relabeling.

Conditioning a credal set on an event ``E`` does two things at once:

* every member with positive mass on ``E`` is Bayes-conditioned, members
  assigning zero mass are discarded (their conditional is undefined);
* the outcome space is restricted to ``E`` via an explicit
  :class:`EventMap`, the bookkeeping object that translates events of the
  original space into events of the restricted space (``f -> f & E``)
  and back.  Keeping the map around is what makes iterated, time-indexed
  conditioning auditable: probabilities assigned before and after the
  restriction can be compared event by event.

Distinct members may collapse to the same conditional; such duplicates
are merged (total variation below ``MERGE_TOL``) and the merge count is
recorded in ``multiplicities``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import (
    Event,
    FiniteDistribution,
    OutcomeSpace,
    RationalDistribution,
    _require_same_space,
    event_probability,
    stable_sum,
)
from .errors import AllMembersZero, IndexOutOfRange, LengthMismatch, SpaceMismatch

__all__ = [
    "CredalSet",
    "EventMap",
    "credal_condition",
    "probability_range",
    "MERGE_TOL",
]

MERGE_TOL = 1e-12


class CredalSet:
    """A non-empty finite set of distributions over one outcome space.

    ``multiplicities[i]`` counts how many original members are
    represented by ``members[i]`` after any merging; fresh sets default
    to all ones.  ``labels`` optionally names members (e.g. the parameter
    value that generated each one).
    """

    __slots__ = ("space", "members", "labels", "multiplicities")

    def __init__(
        self,
        members: Sequence[FiniteDistribution | RationalDistribution],
        labels: Sequence | None = None,
        multiplicities: Sequence[int] | None = None,
    ):
        members = tuple(members)
        if not members:
            raise LengthMismatch("a credal set needs at least one member")
        space = members[0].space
        for m in members[1:]:
            _require_same_space(space, m.space)
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != len(members):
                raise LengthMismatch("one label per member required")
        if multiplicities is None:
            multiplicities = (1,) * len(members)
        else:
            multiplicities = tuple(int(k) for k in multiplicities)
            if len(multiplicities) != len(members):
                raise LengthMismatch("one multiplicity per member required")
            if any(k < 1 for k in multiplicities):
                raise LengthMismatch("multiplicities must be positive")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "multiplicities", multiplicities)

    def __setattr__(self, name, value):
        raise AttributeError("CredalSet is immutable")

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __repr__(self) -> str:
        return f"CredalSet({len(self.members)} members over {self.space!r})"

    def member(self, i: int):
        if not 0 <= i < len(self.members):
            raise IndexOutOfRange(f"member index {i} out of range")
        return self.members[i]

    def total_multiplicity(self) -> int:
        return sum(self.multiplicities)


def probability_range(c: CredalSet, event: Event) -> tuple[float, float]:
    """Lower and upper probability of the event across all members."""
    probs = [float(m.prob(event)) for m in c.members]
    return min(probs), max(probs)


class EventMap:
    """Relabeling induced by conditioning: source events to the event space.

    The target space's outcomes are exactly the outcomes of the
    conditioning event, in source order.  The forward direction sends a
    source event ``f`` to the target event for ``f & E``; the preimage of
    a target event is the corresponding subset of ``E`` in the source
    space.  Forward mapping is surjective but many-to-one: all source
    outcomes outside ``E`` are dropped, so mapping then pulling back
    returns ``f & E``, not ``f``.
    """

    __slots__ = ("source_space", "event", "target_space", "_src2tgt", "_tgt2src")

    def __init__(self, event: Event, target_space: OutcomeSpace | None = None):
        if len(event) == 0:
            raise LengthMismatch("cannot restrict to an empty event")
        source_space = event.space
        if target_space is None:
            target_space = OutcomeSpace(event.labels)
        elif len(target_space) != len(event):
            raise SpaceMismatch("target space must have one outcome per event member")
        src2tgt = {s: t for t, s in enumerate(event.indices)}
        object.__setattr__(self, "source_space", source_space)
        object.__setattr__(self, "event", event)
        object.__setattr__(self, "target_space", target_space)
        object.__setattr__(self, "_src2tgt", src2tgt)
        object.__setattr__(self, "_tgt2src", tuple(event.indices))

    def __setattr__(self, name, value):
        raise AttributeError("EventMap is immutable")

    def __repr__(self) -> str:
        return f"EventMap({self.event!r} -> {self.target_space!r})"

    def map_event(self, f: Event) -> Event:
        """Image of a source event: ``f & E`` expressed in the target space."""
        _require_same_space(self.source_space, f.space)
        tgt = [self._src2tgt[i] for i in f.indices if i in self._src2tgt]
        return Event(self.target_space, tgt)

    def preimage(self, g: Event) -> Event:
        """Source-space event corresponding to a target event (a subset of E)."""
        _require_same_space(self.target_space, g.space)
        return Event(self.source_space, (self._tgt2src[j] for j in g.indices))

    def map_distribution(self, d):
        """Push a source distribution supported on E to the target space."""
        if isinstance(d, RationalDistribution):
            probs = [d.probs[i] for i in self._tgt2src]
            total = sum(probs, Fraction(0))
            if total != 1:
                if total == 0:
                    raise AllMembersZero("distribution has no mass on the event")
                probs = [p / total for p in probs]
            return RationalDistribution(self.target_space, probs)
        probs = d.probs[list(self._tgt2src)].astype(np.float64)
        total = stable_sum(probs)
        if total <= 0.0:
            raise AllMembersZero("distribution has no mass on the event")
        return FiniteDistribution(self.target_space, probs / total)


def _merge_key(member) -> tuple:
    if isinstance(member, RationalDistribution):
        return member.probs
    scaled = np.rint(np.asarray(member.probs) / MERGE_TOL)
    return tuple(int(v) for v in scaled)


def credal_condition(c: CredalSet, event: Event) -> tuple[CredalSet, EventMap]:
    """Condition every member on the event and restrict to its outcomes.

    Members assigning zero probability to the event are dropped; if all
    of them do, :class:`~credal.errors.AllMembersZero` is raised.
    Surviving conditionals that coincide (TV below ``MERGE_TOL``) are
    merged, summing their multiplicities.  Returns the conditioned set
    together with the :class:`EventMap` used for the restriction.
    """
    _require_same_space(c.space, event.space)
    emap = EventMap(event)

    merged: dict[tuple, int] = {}
    members: list = []
    labels: list = []
    mults: list[int] = []
    have_labels = c.labels is not None
    for i, m in enumerate(c.members):
        if isinstance(m, RationalDistribution):
            mass = m.prob(event)
        else:
            mass = event_probability(m, event)
        if mass <= 0:
            continue
        conditioned = emap.map_distribution(m)
        key = _merge_key(conditioned)
        if key in merged:
            slot = merged[key]
            mults[slot] += c.multiplicities[i]
            continue
        merged[key] = len(members)
        members.append(conditioned)
        if have_labels:
            labels.append(c.labels[i])
        mults.append(c.multiplicities[i])
    if not members:
        raise AllMembersZero("every member assigns zero probability to the event")
    return (
        CredalSet(members, labels=labels if have_labels else None, multiplicities=mults),
        emap,
    )
