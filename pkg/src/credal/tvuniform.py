"""The uniform reference measure on simply parametrized credal sets.

A *simply parametrized family* is a map ``x -> f(x)`` from a box of
parameters into the probability simplex.  "Uniform over the family"
is defined geometrically: mass proportional to how much total-variation
distance the family sweeps per unit of parameter, so that the measure is
invariant under reparametrization.  The local sweep rate in parameter
slot ``k`` is the *thickness*

    t_k(x) = lim_{h -> 0} TV(f(x), f(x + h e_k)) / |h|,

and the unnormalized density is the product ``rho(x) = prod_k t_k(x)``.
Two regimes are supported:

* an explicit finite credal set, where "uniform" degenerates to the
  counting measure over the (distinct) members; and
* a continuously parametrized family, where event probabilities are
  integrals ``(1/Z) * int rho(x) * f(x)(E) dx`` evaluated by adaptive
  Gauss-Legendre quadrature with panels split at the registered kink
  locations of the thickness.

The binomial head-count family is the fully worked example: its
thickness has sharp points at ``k/n`` and equals ``n`` at both
endpoints, and its normalizer for ``n = 10`` is ``3.66021568``.
"""

from __future__ import annotations

import heapq
import itertools
import math
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .core import (
    Event,
    FiniteDistribution,
    OutcomeSpace,
    RationalDistribution,
    _require_same_space,
    stable_sum,
)
from .errors import (
    ConfigInvalid,
    DegenerateFamily,
    IndexOutOfRange,
    LengthMismatch,
    SpaceMismatch,
    StepTooLarge,
    ZeroEvidence,
)
from .sets import CredalSet

__all__ = [
    "ParamBox",
    "ParamFamily",
    "thickness",
    "tvu_density",
    "build_measure",
    "TvuMeasure",
    "CountingMeasure",
    "binomial_family",
    "bernoulli_family",
    "coin_match_family",
    "product_family",
    "product_space",
    "component_event",
    "iid_extension",
    "DEFAULT_ATOMS",
]

# Number of grid atoms used when a continuous family is discretized for
# sampling (inverse-CDF over a uniform inclusive grid weighted by the
# density).  1601 atoms over [0, 1] puts atoms at every multiple of
# 1/1600.
DEFAULT_ATOMS = 1601

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


class ParamBox:
    """An axis-aligned box of parameters: one closed interval per slot."""

    __slots__ = ("intervals",)

    def __init__(self, intervals: Sequence[tuple[float, float]]):
        ivs = tuple((float(a), float(b)) for a, b in intervals)
        if not ivs:
            raise ConfigInvalid("a parameter box needs at least one slot")
        for a, b in ivs:
            if not (math.isfinite(a) and math.isfinite(b)) or b <= a:
                raise ConfigInvalid(f"invalid interval ({a}, {b})")
        object.__setattr__(self, "intervals", ivs)

    def __setattr__(self, name, value):
        raise AttributeError("ParamBox is immutable")

    @property
    def ndim(self) -> int:
        return len(self.intervals)

    def __repr__(self) -> str:
        return f"ParamBox({list(self.intervals)!r})"

    def contains(self, x) -> bool:
        x = _as_point(x, self.ndim)
        return all(a <= xi <= b for xi, (a, b) in zip(x, self.intervals))

    def clip(self, x) -> tuple:
        x = _as_point(x, self.ndim)
        return tuple(min(max(xi, a), b) for xi, (a, b) in zip(x, self.intervals))


def _as_point(x, ndim: int) -> tuple:
    if np.isscalar(x):
        pt = (float(x),)
    else:
        pt = tuple(float(v) for v in np.atleast_1d(np.asarray(x, dtype=float)))
    if len(pt) != ndim:
        raise LengthMismatch(f"expected a {ndim}-dimensional parameter, got {len(pt)}")
    return pt


class ParamFamily:
    """A parametrized family of distributions over a fixed outcome space.

    ``probs_fn`` maps a parameter tuple to a normalized probability
    vector.  Optional registrations speed up and sharpen the geometry:

    * ``kinks[k]``: interior parameter values where the thickness in
      slot ``k`` is not smooth (quadrature panels never straddle them,
      finite differences never step across them);
    * ``thickness_fns[k]``: closed-form thickness for slot ``k``;
    * ``probs_batch`` / ``thickness_batch``: vectorized versions taking
      an ``(N, ndim)`` array of parameter points.

    Families without registered thickness fall back to the
    finite-difference estimator :func:`thickness`.
    """

    __slots__ = (
        "box",
        "space",
        "probs_fn",
        "kinks",
        "thickness_fns",
        "probs_batch_fn",
        "thickness_batch_fns",
        "name",
        "meta",
    )

    def __init__(
        self,
        box: ParamBox,
        space: OutcomeSpace,
        probs_fn: Callable,
        *,
        kinks: Sequence[Sequence[float]] | None = None,
        thickness_fns: Sequence[Callable | None] | None = None,
        probs_batch: Callable | None = None,
        thickness_batch: Sequence[Callable | None] | None = None,
        name: str = "",
        meta: dict | None = None,
    ):
        d = box.ndim
        if kinks is None:
            kinks = ((),) * d
        else:
            if len(kinks) != d:
                raise ConfigInvalid("one kink list per parameter slot required")
            kinks = tuple(tuple(sorted(float(v) for v in ks)) for ks in kinks)
            for (a, b), ks in zip(box.intervals, kinks):
                if any(not a < v < b for v in ks):
                    raise ConfigInvalid("kinks must lie strictly inside the box")
        if thickness_fns is None:
            thickness_fns = (None,) * d
        elif len(thickness_fns) != d:
            raise ConfigInvalid("one thickness function per parameter slot required")
        if thickness_batch is None:
            thickness_batch = (None,) * d
        elif len(thickness_batch) != d:
            raise ConfigInvalid("one batch thickness per parameter slot required")
        object.__setattr__(self, "box", box)
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "probs_fn", probs_fn)
        object.__setattr__(self, "kinks", kinks)
        object.__setattr__(self, "thickness_fns", tuple(thickness_fns))
        object.__setattr__(self, "probs_batch_fn", probs_batch)
        object.__setattr__(self, "thickness_batch_fns", tuple(thickness_batch))
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "meta", dict(meta or {}))

    def __setattr__(self, name, value):
        raise AttributeError("ParamFamily is immutable")

    def __repr__(self) -> str:
        tag = self.name or "family"
        return f"ParamFamily({tag!r}, ndim={self.box.ndim}, space={self.space!r})"

    @property
    def ndim(self) -> int:
        return self.box.ndim

    def probs(self, x) -> np.ndarray:
        """Probability vector at parameter ``x`` (validated, normalized)."""
        x = _as_point(x, self.ndim)
        if not self.box.contains(x):
            raise IndexOutOfRange(f"parameter {x} outside the box")
        p = np.asarray(self.probs_fn(x), dtype=np.float64)
        if p.shape != (len(self.space),):
            raise LengthMismatch(
                f"family returned shape {p.shape}, expected ({len(self.space)},)"
            )
        return p

    def probs_matrix(self, xs: np.ndarray) -> np.ndarray:
        """Probability vectors at each row of ``xs`` (shape (N, ndim))."""
        xs = np.atleast_2d(np.asarray(xs, dtype=np.float64))
        if xs.shape[1] != self.ndim:
            raise LengthMismatch(f"expected (N, {self.ndim}) parameter rows")
        if self.probs_batch_fn is not None:
            out = np.asarray(self.probs_batch_fn(xs), dtype=np.float64)
        else:
            out = np.stack([self.probs_fn(tuple(row)) for row in xs]).astype(np.float64)
        return out

    def eval(self, x) -> FiniteDistribution:
        return FiniteDistribution(self.space, self.probs(x))

    __call__ = eval

    def event_probs(self, xs: np.ndarray, event: Event) -> np.ndarray:
        _require_same_space(self.space, event.space)
        mat = self.probs_matrix(xs)
        if not event.indices:
            return np.zeros(mat.shape[0])
        return mat[:, list(event.indices)].sum(axis=1)


# ---------------------------------------------------------------------------
# Thickness estimation
# ---------------------------------------------------------------------------

# Relative half-width (in units of the slot's interval length) below
# which a point counts as sitting on a kink or boundary.
_KINK_SNAP = 1e-9


def _breakpoints(family: ParamFamily, k: int) -> np.ndarray:
    a, b = family.box.intervals[k]
    return np.array([a, *family.kinks[k], b])


def thickness(family: ParamFamily, x, k: int = 0, h: float | None = None) -> float:
    """Finite-difference estimate of the thickness in parameter slot ``k``.

    Richardson-extrapolated one-sided differences are taken on each side
    of ``x`` that has room, never stepping across a registered kink or
    box boundary; the two sides are averaged when both exist, which at a
    kink yields the mean of the one-sided limits.  ``h`` defaults to
    ``1e-5`` times the slot's interval length and must fit inside it.
    """
    x = _as_point(x, family.ndim)
    if not family.box.contains(x):
        raise IndexOutOfRange(f"parameter {x} outside the box")
    if not 0 <= k < family.ndim:
        raise IndexOutOfRange(f"no parameter slot {k}")
    a, b = family.box.intervals[k]
    span = b - a
    if h is None:
        h = 1e-5 * span
    if not 0.0 < h <= span:
        raise StepTooLarge(f"step {h} does not fit in interval of length {span}")

    xk = x[k]
    bps = _breakpoints(family, k)
    snap = _KINK_SNAP * span
    # Room to move on each side before hitting the next breakpoint.
    above = bps[bps > xk + snap]
    below = bps[bps < xk - snap]
    room_r = float(above[0] - xk) if above.size else 0.0
    room_l = float(xk - below[-1]) if below.size else 0.0

    base = np.asarray(family.probs(x))

    def one_sided(sign: float, room: float) -> float | None:
        step = min(h, room)
        if step <= 0.0:
            return None

        def rate(s: float) -> float:
            y = list(x)
            y[k] = xk + sign * s
            shifted = np.asarray(family.probs(tuple(y)))
            return 0.5 * stable_sum(np.abs(shifted - base)) / s

        d1, d2 = rate(step), rate(step / 2.0)
        return 2.0 * d2 - d1  # cancels the O(h) term of the one-sided quotient

    right = one_sided(+1.0, room_r)
    left = one_sided(-1.0, room_l)
    sides = [v for v in (right, left) if v is not None]
    if not sides:  # pragma: no cover - box validation makes this unreachable
        raise StepTooLarge("no room for a finite-difference step")
    return float(np.mean(sides))


def _thickness_column(family: ParamFamily, xs: np.ndarray, k: int) -> np.ndarray:
    """Thickness values for slot ``k`` at each parameter row, batched."""
    batch = family.thickness_batch_fns[k]
    if batch is not None:
        return np.asarray(batch(xs), dtype=np.float64)
    fn = family.thickness_fns[k]
    if fn is not None:
        return np.asarray([fn(tuple(row)) for row in xs], dtype=np.float64)
    return np.asarray([thickness(family, tuple(row), k) for row in xs])


def tvu_density(family: ParamFamily, x) -> float:
    """Unnormalized uniformity density: product of per-slot thicknesses."""
    x = _as_point(x, family.ndim)
    row = np.asarray([x], dtype=np.float64)
    value = 1.0
    for k in range(family.ndim):
        value *= float(_thickness_column(family, row, k)[0])
    return value


def _density_rows(family: ParamFamily, xs: np.ndarray) -> np.ndarray:
    xs = np.atleast_2d(np.asarray(xs, dtype=np.float64))
    out = np.ones(xs.shape[0])
    for k in range(family.ndim):
        out *= _thickness_column(family, xs, k)
    if not np.all(np.isfinite(out)) or np.any(out < 0.0):
        raise DegenerateFamily("density must be finite and non-negative")
    return out


# ---------------------------------------------------------------------------
# Quadrature construction
# ---------------------------------------------------------------------------


def _gl_half(dens, lo: float, hi: float):
    """Gauss-Legendre 8 nodes/weights/density on one subinterval."""
    c, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    xs = c + half * _GL_NODES
    ws = half * _GL_WEIGHTS
    rho = dens(xs)
    return xs, ws, rho, float(ws @ rho)


def _adaptive_panels_1d(dens, breakpoints, resolution, tol, max_panels):
    """Adaptively refined Gauss-Legendre grid for a 1-D density.

    Panels start from the breakpoint segments (kinks are always panel
    edges) subdivided to roughly ``resolution`` panels in proportion to
    length.  Each panel's integral is estimated by its two half-panel
    GL-8 rules; the difference from the whole-panel rule is the local
    error.  The worst panel is split until the summed error estimate
    drops below ``tol`` relative to the integral.
    """
    total_len = breakpoints[-1] - breakpoints[0]

    def entry(a, b, i_self=None):
        mid = 0.5 * (a + b)
        left = _gl_half(dens, a, mid)
        right = _gl_half(dens, mid, b)
        if i_self is None:
            i_self = _gl_half(dens, a, b)[3]
        value = left[3] + right[3]
        return {
            "a": a,
            "b": b,
            "mid": mid,
            "left": left,
            "right": right,
            "value": value,
            "err": abs(i_self - value),
        }

    entries = {}
    counter = itertools.count()
    heap = []

    def push(e):
        key = next(counter)
        entries[key] = e
        heapq.heappush(heap, (-e["err"], key))

    for a, b in zip(breakpoints[:-1], breakpoints[1:]):
        if b <= a:
            continue
        parts = max(1, math.ceil(resolution * (b - a) / total_len))
        edges = np.linspace(a, b, parts + 1)
        for lo, hi in zip(edges[:-1], edges[1:]):
            push(entry(lo, hi))

    def totals():
        vs = [e["value"] for e in entries.values()]
        es = [e["err"] for e in entries.values()]
        return math.fsum(vs), math.fsum(es)

    value, err = totals()
    while err > tol * max(abs(value), 1e-300) and len(entries) < max_panels:
        neg_err, key = heapq.heappop(heap)
        e = entries.pop(key, None)
        if e is None:  # stale heap entry
            continue
        if e["err"] == 0.0:
            push(e)
            break
        push(entry(e["a"], e["mid"], i_self=e["left"][3]))
        push(entry(e["mid"], e["b"], i_self=e["right"][3]))
        value, err = totals()

    ordered = sorted(entries.values(), key=lambda e: e["a"])
    nodes = np.concatenate([np.concatenate([e["left"][0], e["right"][0]]) for e in ordered])
    weights = np.concatenate([np.concatenate([e["left"][1], e["right"][1]]) for e in ordered])
    rho = np.concatenate([np.concatenate([e["left"][2], e["right"][2]]) for e in ordered])
    return nodes, weights, rho


class TvuMeasure:
    """Quadrature representation of the uniform measure over a family.

    Stores the final node set ``nodes`` (shape ``(N, ndim)``), the
    quadrature ``weights``, the unnormalized density values ``density``
    at the nodes, and the normalizer ``Z = sum(weights * density)``.
    Event probabilities and posterior predictive values are weighted
    sums over this fixed node set, so they are deterministic for a given
    construction.
    """

    __slots__ = ("family", "nodes", "weights", "density", "z", "_probs", "meta")

    def __init__(self, family: ParamFamily, nodes, weights, density, meta=None):
        nodes = np.atleast_2d(np.asarray(nodes, dtype=np.float64))
        weights = np.asarray(weights, dtype=np.float64)
        density = np.asarray(density, dtype=np.float64)
        z = float(math.fsum(weights * density))
        if not math.isfinite(z) or z <= 0.0:
            raise DegenerateFamily(f"family sweeps zero TV length (Z={z!r})")
        for arr in (nodes, weights, density):
            arr.setflags(write=False)
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "density", density)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "_probs", family.probs_matrix(nodes))
        object.__setattr__(self, "meta", dict(meta or {}))

    def __setattr__(self, name, value):
        raise AttributeError("TvuMeasure is immutable")

    def __repr__(self) -> str:
        return (
            f"TvuMeasure({self.family!r}, nodes={self.nodes.shape[0]}, Z={self.z:.9g})"
        )

    @property
    def normalizer(self) -> float:
        return self.z

    def pdf(self, x) -> float:
        """Normalized density at ``x``."""
        return tvu_density(self.family, x) / self.z

    def event_prob(self, event: Event) -> float:
        """Probability of an event on the family's outcome space."""
        _require_same_space(self.family.space, event.space)
        if not event.indices:
            return 0.0
        pe = self._probs[:, list(event.indices)].sum(axis=1)
        return float(math.fsum(self.weights * self.density * pe)) / self.z

    def expectation(self, values: np.ndarray) -> float:
        """Measure-weighted mean of per-node values (e.g. a statistic of x)."""
        values = np.asarray(values, dtype=np.float64)
        if values.shape[0] != self.nodes.shape[0]:
            raise LengthMismatch("need one value per quadrature node")
        return float(math.fsum(self.weights * self.density * values)) / self.z

    def posterior_predictive(
        self, observed: Event, query: Event, family: ParamFamily | None = None
    ) -> float:
        """Conditional probability of ``query`` given ``observed``.

        Both events live on the outcome space of ``family`` (defaults to
        the measure's own family), which must share this measure's
        parameter box — e.g. the i.i.d. multi-draw extension of a
        single-draw family.  Computes the ratio of the measure-weighted
        likelihoods ``P(query & observed) / P(observed)``.
        """
        fam = family if family is not None else self.family
        if fam.ndim != self.family.ndim:
            raise SpaceMismatch("evaluation family has a different parameter box")
        _require_same_space(fam.space, observed.space)
        _require_same_space(fam.space, query.space)
        mat = self._probs if fam is self.family else fam.probs_matrix(self.nodes)
        joint = query.intersect(observed)
        wj = mat[:, list(joint.indices)].sum(axis=1) if joint.indices else 0.0
        wo = mat[:, list(observed.indices)].sum(axis=1) if observed.indices else 0.0
        den = float(math.fsum(self.weights * self.density * wo)) if observed.indices else 0.0
        if den <= 0.0:
            raise ZeroEvidence("observed event has measure-weighted likelihood zero")
        num = float(math.fsum(self.weights * self.density * wj)) if joint.indices else 0.0
        return num / den

    def sample_params(
        self, rng: np.random.Generator, size: int, atoms: int = DEFAULT_ATOMS
    ) -> np.ndarray:
        """Draw parameters from the normalized density (1-D families).

        The density is discretized on an inclusive uniform grid of
        ``atoms`` points and parameters are drawn from those atoms with
        replacement, so repeated values are expected.  This is the
        sampling scheme the tower's default base level uses.
        """
        if self.family.ndim != 1:
            raise ConfigInvalid("parameter sampling is defined for 1-D families")
        if size < 1 or atoms < 2:
            raise ConfigInvalid("need size >= 1 and atoms >= 2")
        a, b = self.family.box.intervals[0]
        grid = np.linspace(a, b, atoms)
        w = _density_rows(self.family, grid[:, None])
        total = stable_sum(w)
        if total <= 0.0:
            raise DegenerateFamily("density vanishes on the sampling grid")
        return rng.choice(grid, size=size, replace=True, p=w / total)


class CountingMeasure:
    """Uniform counting measure over the members of a finite credal set.

    This is what TV-uniformity degenerates to when the credal set is
    finite: every (distinct) member carries weight ``1/m`` exactly, kept
    as :class:`fractions.Fraction` so that event probabilities over
    rational members are exact.  ``use_multiplicities=True`` weights
    members by their recorded merge multiplicity instead.
    """

    __slots__ = ("credal_set", "weights")

    def __init__(self, credal_set: CredalSet, use_multiplicities: bool = False):
        if use_multiplicities:
            counts = credal_set.multiplicities
        else:
            counts = (1,) * len(credal_set)
        total = sum(counts)
        weights = tuple(Fraction(c, total) for c in counts)
        object.__setattr__(self, "credal_set", credal_set)
        object.__setattr__(self, "weights", weights)

    def __setattr__(self, name, value):
        raise AttributeError("CountingMeasure is immutable")

    def __repr__(self) -> str:
        return f"CountingMeasure({len(self.credal_set)} members)"

    def event_prob(self, event: Event, exclude: int | None = None):
        """Weighted-average probability of the event across members.

        ``exclude`` removes one member and renormalizes the remaining
        weights — the finite-set analogue of deleting a singleton whose
        counting measure, unlike a continuum point, is positive.
        Returns a ``Fraction`` when every member is exact.
        """
        members = self.credal_set.members
        if exclude is not None:
            if not 0 <= exclude < len(members):
                raise IndexOutOfRange(f"member index {exclude} out of range")
            if len(members) == 1:
                raise ZeroEvidence("cannot exclude the only member")
        pairs = [
            (w, m)
            for i, (w, m) in enumerate(zip(self.weights, members))
            if i != exclude
        ]
        wsum = sum((w for w, _ in pairs), Fraction(0))
        exact = all(isinstance(m, RationalDistribution) for _, m in pairs)
        if exact:
            total = sum((w * m.prob(event) for w, m in pairs), Fraction(0))
            return total / wsum
        total = math.fsum(float(w) * float(m.prob(event)) for w, m in pairs)
        return total / float(wsum)

    def posterior_predictive(
        self, observed: Event, query: Event, lift: Callable | None = None
    ):
        """Conditional probability of ``query`` given ``observed``.

        ``lift`` maps each member to the distribution used for
        evaluation (e.g. :func:`iid_extension` to score multi-draw
        events); by default members are evaluated as they are.  Exact
        (``Fraction``) when all lifted members are exact.
        """
        members = [lift(m) if lift is not None else m for m in self.credal_set.members]
        joint = query.intersect(observed)
        exact = all(isinstance(m, RationalDistribution) for m in members)
        if exact:
            den = sum(
                (w * m.prob(observed) for w, m in zip(self.weights, members)),
                Fraction(0),
            )
            if den == 0:
                raise ZeroEvidence("observed event has probability zero in every member")
            num = sum(
                (w * m.prob(joint) for w, m in zip(self.weights, members)), Fraction(0)
            )
            return num / den
        den = math.fsum(float(w) * float(m.prob(observed)) for w, m in zip(self.weights, members))
        if den <= 0.0:
            raise ZeroEvidence("observed event has probability zero in every member")
        num = math.fsum(float(w) * float(m.prob(joint)) for w, m in zip(self.weights, members))
        return num / den

    def sample_members(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Indices of members drawn according to the counting weights."""
        p = np.asarray([float(w) for w in self.weights])
        return rng.choice(len(self.credal_set), size=size, replace=True, p=p)


def build_measure(
    source: ParamFamily | CredalSet,
    *,
    resolution: int = 24,
    tol: float = 1e-6,
    max_panels: int = 4096,
    use_multiplicities: bool = False,
):
    """Construct the uniform measure over a credal set.

    A finite :class:`CredalSet` yields the exact :class:`CountingMeasure`.
    A :class:`ParamFamily` yields a :class:`TvuMeasure` via adaptive
    Gauss-Legendre quadrature of the thickness-product density:
    ``resolution`` sets the starting panel count per dimension (panels
    always break at registered kinks) and panels are then split where
    the local error estimate is largest until the total estimate is
    below ``tol`` relative to the normalizer.  Doubling ``resolution``
    moves ``Z`` by less than ``tol`` by construction.
    """
    if isinstance(source, CredalSet):
        return CountingMeasure(source, use_multiplicities=use_multiplicities)
    if not isinstance(source, ParamFamily):
        raise ConfigInvalid(f"cannot build a measure over {type(source).__name__}")
    if resolution < 1 or tol <= 0.0 or max_panels < resolution:
        raise ConfigInvalid("need resolution >= 1, tol > 0, max_panels >= resolution")

    if source.ndim == 1:
        dens = lambda xs: _density_rows(source, xs[:, None])  # noqa: E731
        bps = _breakpoints(source, 0)
        nodes, weights, rho = _adaptive_panels_1d(dens, bps, resolution, tol, max_panels)
        return TvuMeasure(
            source,
            nodes[:, None],
            weights,
            rho,
            meta={"resolution": resolution, "tol": tol, "panels": nodes.size // 16},
        )
    return _tensor_measure(source, resolution, tol)


def _tensor_measure(family: ParamFamily, resolution: int, tol: float) -> TvuMeasure:
    """Tensor-product quadrature for multi-dimensional boxes.

    Refines by doubling every dimension's panel count until the
    normalizer is stable to ``tol`` (relative).  Intended for small
    ``ndim``; the node count grows as ``(8 * panels)^ndim``.
    """
    per_dim = resolution
    z_prev = None
    for _ in range(6):
        axes = []
        for k in range(family.ndim):
            bps = _breakpoints(family, k)
            xs_list, ws_list = [], []
            total_len = bps[-1] - bps[0]
            for a, b in zip(bps[:-1], bps[1:]):
                parts = max(1, math.ceil(per_dim * (b - a) / total_len))
                edges = np.linspace(a, b, parts + 1)
                for lo, hi in zip(edges[:-1], edges[1:]):
                    c, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
                    xs_list.append(c + half * _GL_NODES)
                    ws_list.append(half * _GL_WEIGHTS)
            axes.append((np.concatenate(xs_list), np.concatenate(ws_list)))
        mesh = np.stack(
            [g.ravel() for g in np.meshgrid(*[ax[0] for ax in axes], indexing="ij")],
            axis=1,
        )
        wmesh = np.stack(
            [g.ravel() for g in np.meshgrid(*[ax[1] for ax in axes], indexing="ij")],
            axis=1,
        ).prod(axis=1)
        rho = _density_rows(family, mesh)
        z = float(math.fsum(wmesh * rho))
        if z_prev is not None and abs(z - z_prev) <= tol * max(abs(z), 1e-300):
            break
        z_prev = z
        per_dim *= 2
    return TvuMeasure(
        family, mesh, wmesh, rho, meta={"resolution": per_dim, "tol": tol}
    )


# ---------------------------------------------------------------------------
# Stock families
# ---------------------------------------------------------------------------


def binomial_family(n: int) -> ParamFamily:
    """Head-count distributions of ``n`` i.i.d. tosses with bias ``p``.

    Outcomes are the head counts ``0..n``.  The thickness has a closed
    form — half the L1 norm of the coordinatewise derivative of the
    pmf — with sharp points at ``k/n`` and value exactly ``n`` at both
    endpoints; it is registered along with those kink locations.
    """
    if n < 1:
        raise ConfigInvalid("need n >= 1")
    ks = np.arange(n + 1)
    coeffs = np.array([math.comb(n, int(k)) for k in ks], dtype=np.float64)

    def probs_batch(xs: np.ndarray) -> np.ndarray:
        p = xs[:, 0][:, None]
        return coeffs * p**ks * (1.0 - p) ** (n - ks)

    def thickness_batch(xs: np.ndarray) -> np.ndarray:
        p = xs[:, 0]
        out = np.empty_like(p)
        interior = (p > 0.0) & (p < 1.0)
        q = p[interior][:, None]
        # d/dp pmf(k; n, p) = C(n,k) p^(k-1) (1-p)^(n-k-1) (k - n p)
        deriv = coeffs * q ** (ks - 1) * (1.0 - q) ** (n - ks - 1) * (ks - n * q)
        out[interior] = 0.5 * np.abs(deriv).sum(axis=1)
        out[~interior] = float(n)  # one-sided limit at both endpoints
        return out

    return ParamFamily(
        ParamBox([(0.0, 1.0)]),
        OutcomeSpace([int(k) for k in ks]),
        lambda x: probs_batch(np.array([[x[0]]]))[0],
        kinks=[tuple(k / n for k in range(1, n))],
        thickness_fns=[lambda x: float(thickness_batch(np.array([[x[0]]]))[0])],
        probs_batch=probs_batch,
        thickness_batch=[thickness_batch],
        name=f"binomial(n={n})",
        meta={"n": n},
    )


def bernoulli_family(labels: Sequence = ("H", "T")) -> ParamFamily:
    """Single two-outcome draw with probability ``p`` on the first label."""
    labels = tuple(labels)
    if len(labels) != 2:
        raise ConfigInvalid("a two-outcome family needs exactly two labels")

    def probs_batch(xs: np.ndarray) -> np.ndarray:
        p = xs[:, 0]
        return np.stack([p, 1.0 - p], axis=1)

    return ParamFamily(
        ParamBox([(0.0, 1.0)]),
        OutcomeSpace(labels),
        lambda x: np.array([x[0], 1.0 - x[0]]),
        thickness_fns=[lambda x: 1.0],
        probs_batch=probs_batch,
        thickness_batch=[lambda xs: np.ones(xs.shape[0])],
        name="bernoulli",
    )


def coin_match_family() -> ParamFamily:
    """Two coins forced to agree in bias: guessed coin 1 vs hidden coin 2.

    Outcomes record (coin 1, coin 2); coin 1 is fair and independent of
    coin 2, whose bias is the unknown parameter ``p``:
    ``(p/2, (1-p)/2, p/2, (1-p)/2)`` over ``H1H2, H1T2, T1H2, T1T2``.
    Conditioning on coin 1's outcome dilates the probability of the
    "match" event — see the dilation demo.  Thickness is identically 1.
    """

    def probs_batch(xs: np.ndarray) -> np.ndarray:
        p = xs[:, 0]
        return np.stack([0.5 * p, 0.5 * (1.0 - p), 0.5 * p, 0.5 * (1.0 - p)], axis=1)

    return ParamFamily(
        ParamBox([(0.0, 1.0)]),
        OutcomeSpace(["H1H2", "H1T2", "T1H2", "T1T2"]),
        lambda x: np.array(
            [0.5 * x[0], 0.5 * (1.0 - x[0]), 0.5 * x[0], 0.5 * (1.0 - x[0])]
        ),
        thickness_fns=[lambda x: 1.0],
        probs_batch=probs_batch,
        thickness_batch=[lambda xs: np.ones(xs.shape[0])],
        name="coin-match",
    )


def product_space(base: OutcomeSpace, draws: int, sep: str = ",") -> OutcomeSpace:
    """Outcome space of ``draws`` ordered draws with labels joined by ``sep``."""
    if draws < 1:
        raise ConfigInvalid("need draws >= 1")
    combos = itertools.product(base.labels, repeat=draws)
    return OutcomeSpace([sep.join(str(c) for c in combo) for combo in combos])


def component_event(
    space: OutcomeSpace, base: OutcomeSpace, draws: int, position: int, label
) -> Event:
    """Event "draw ``position`` equals ``label``" in a product space.

    Works by index arithmetic (the product space enumerates draws in
    row-major order), so it never parses labels.
    """
    m = len(base)
    if len(space) != m**draws:
        raise SpaceMismatch(f"space size {len(space)} is not {m}^{draws}")
    if not 0 <= position < draws:
        raise IndexOutOfRange(f"no draw position {position}")
    want = base.index(label)
    stride = m ** (draws - 1 - position)
    idx = [i for i in range(len(space)) if (i // stride) % m == want]
    return Event(space, idx)


def product_family(base: ParamFamily, draws: int, sep: str = ",") -> ParamFamily:
    """I.i.d. extension: ``draws`` independent draws sharing one parameter.

    The parameter box (and kinks) are the base family's; only the
    outcome space changes, to ordered tuples of base outcomes.  No
    closed-form thickness is registered — the product family is meant
    for *evaluating* multi-draw events (posterior predictive), while the
    uniformity density should be built from the base family.
    """
    if draws < 1:
        raise ConfigInvalid("need draws >= 1")
    space = product_space(base.space, draws, sep=sep)

    def probs_fn(x) -> np.ndarray:
        row = np.asarray(base.probs(x))
        out = row
        for _ in range(draws - 1):
            out = np.kron(out, row)
        return out

    def probs_batch(xs: np.ndarray) -> np.ndarray:
        rows = base.probs_matrix(xs)
        out = rows
        for _ in range(draws - 1):
            out = np.einsum("ni,nj->nij", out, rows).reshape(xs.shape[0], -1)
        return out

    return ParamFamily(
        base.box,
        space,
        probs_fn,
        kinks=base.kinks,
        probs_batch=probs_batch,
        name=f"{base.name or 'family'}^{draws}",
        meta={"base_space": base.space, "draws": draws, "sep": sep},
    )


def iid_extension(member, draws: int, sep: str = ","):
    """Lift one distribution to ``draws`` independent ordered draws.

    Exact for :class:`RationalDistribution` members; the counting-measure
    route to posterior predictive values uses this as the ``lift``.
    """
    if draws < 1:
        raise ConfigInvalid("need draws >= 1")
    space = product_space(member.space, draws, sep=sep)
    if isinstance(member, RationalDistribution):
        probs = [
            math.prod(combo, start=Fraction(1))
            for combo in itertools.product(member.probs, repeat=draws)
        ]
        return RationalDistribution(space, probs)
    row = np.asarray(member.probs)
    out = row
    for _ in range(draws - 1):
        out = np.kron(out, row)
    return FiniteDistribution(space, out)
