"""The witness-structure calculus.

A witness table is a sequence of pairs of finite process-id sets
``((W_0, G_0), ..., (W_t, G_t))``: layer i records which processes are
witnessed at round i (W_i) and which turn into invisible ghosts there (G_i).
Tables classify into three nested classes:

* prestructure -- the shape conditions hold: (P1) every later W_i/G_i is
  contained in W_0, (P2) the ghost layers are pairwise disjoint, (P3) a
  ghosted process is never witnessed at the same or a later layer;
* stable -- additionally the last witness layer is nonempty when t >= 1;
* witness -- every witness layer W_1..W_t is nonempty.

The same objects have an equivalent trace presentation: per process, the set
of layer indices where it occurs.  Both presentations are implemented, with
exact round-trip translation.  The three operators are the canonical form C
(delete empty witness layers, merging their ghost sets into the next kept
layer), the stabilization st_S (ghost the set S and truncate the traces at
the last layer that still witnesses something outside S and the ghosts), and
ghosting Gamma_S = C . st_S, the face operator of the snapshot complexes.

Everything here is an immutable value; operations return new objects.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .errors import InvalidArgument, PreconditionViolation
from .rounds import RoundCounter

PRESTRUCTURE = "prestructure"
STABLE = "stable"
WITNESS = "witness"


@dataclass(frozen=True)
class Classification:
    kind: str  # "invalid" | "prestructure" | "stable" | "witness"
    violated: str | None = None  # first violated condition when invalid

    def __bool__(self) -> bool:
        return self.kind != "invalid"


def _normalize_pairs(pairs) -> tuple:
    out = []
    for entry in pairs:
        w, g = entry
        w = tuple(sorted(set(w)))
        g = tuple(sorted(set(g)))
        if any(not isinstance(p, int) or p < 0 for p in w + g):
            raise InvalidArgument(f"process ids must be nonnegative integers: {entry!r}")
        out.append((w, g))
    return tuple(out)


def classify(pairs) -> Classification:
    """Return the strongest class of a raw pair sequence, or the first violation."""
    try:
        pairs = _normalize_pairs(pairs)
    except (InvalidArgument, TypeError, ValueError):
        return Classification("invalid", "shape")
    if not pairs:
        return Classification("invalid", "shape")
    t = len(pairs) - 1
    w0 = set(pairs[0][0])
    for w, g in pairs[1:]:
        if not (set(w) <= w0 and set(g) <= w0):
            return Classification("invalid", "P1")
    seen_ghosts = set()
    for _, g in pairs:
        g = set(g)
        if g & seen_ghosts:
            return Classification("invalid", "P2")
        seen_ghosts |= g
    ghosted = set()
    for w, g in pairs:
        ghosted |= set(g)
        if ghosted & set(w):
            return Classification("invalid", "P3")
    if t >= 1 and not pairs[t][0]:
        return Classification(PRESTRUCTURE)
    if any(not w for w, _ in pairs[1:]):
        return Classification(STABLE)
    return Classification(WITNESS)


class WitnessTable:
    """A validated witness prestructure in table form.

    ``pairs`` is the canonical encoding: a tuple of (sorted W tuple, sorted G
    tuple) pairs.  Equality, hashing, and the JSON key all use it, so equal
    encodings are the same simplex.
    """

    def __init__(self, pairs):
        pairs = _normalize_pairs(pairs)
        cls = classify(pairs)
        if not cls:
            raise InvalidArgument(f"not a witness prestructure: {cls.violated}")
        self.pairs = pairs
        self.classification = cls.kind

    def __eq__(self, other) -> bool:
        return isinstance(other, WitnessTable) and self.pairs == other.pairs

    def __hash__(self) -> int:
        return hash(self.pairs)

    def __repr__(self) -> str:
        return f"WitnessTable({self.key})"

    # -- layers ------------------------------------------------------------

    @property
    def t(self) -> int:
        return len(self.pairs) - 1

    def w(self, i: int) -> frozenset:
        return frozenset(self.pairs[i][0])

    def g(self, i: int) -> frozenset:
        return frozenset(self.pairs[i][1])

    def r_set(self, i: int) -> frozenset:
        return frozenset(self.pairs[i][0] + self.pairs[i][1])

    # -- derived data --------------------------------------------------------

    @cached_property
    def supp(self) -> frozenset:
        return self.r_set(0)

    @cached_property
    def ghost_set(self) -> frozenset:
        out = set()
        for _, g in self.pairs:
            out.update(g)
        return frozenset(out)

    @cached_property
    def active_set(self) -> frozenset:
        return self.supp - self.ghost_set

    @property
    def dim(self) -> int:
        return len(self.active_set) - 1

    @property
    def color(self) -> int | None:
        """The unique active process of a 0-dimensional structure."""
        if self.dim != 0:
            return None
        return next(iter(self.active_set))

    @cached_property
    def traces(self) -> dict:
        """Map process -> frozenset of layer indices where it occurs."""
        out = {p: [] for p in self.supp}
        for i in range(self.t + 1):
            for p in self.r_set(i):
                out[p].append(i)
        return {p: frozenset(ix) for p, ix in out.items()}

    def trace(self, p: int) -> frozenset:
        return self.traces[p]

    def m_count(self, p: int) -> int:
        return len(self.traces[p])

    def last(self, p: int) -> int:
        """Largest layer index whose W part contains p."""
        return max(i for i in range(self.t + 1) if p in self.w(i))

    @property
    def is_stable(self) -> bool:
        return self.classification in (STABLE, WITNESS)

    @property
    def is_witness(self) -> bool:
        return self.classification == WITNESS

    @cached_property
    def key(self) -> str:
        return json.dumps([[list(w), list(g)] for w, g in self.pairs], separators=(",", ":"))

    @classmethod
    def from_key(cls, key: str) -> "WitnessTable":
        return cls(json.loads(key))


@dataclass(frozen=True)
class Derived:
    supp: frozenset
    active: frozenset
    ghosts: frozenset
    dim: int
    color: int | None


def derived(sigma: WitnessTable) -> Derived:
    return Derived(sigma.supp, sigma.active_set, sigma.ghost_set, sigma.dim, sigma.color)


# ---------------------------------------------------------------------------
# Trace form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TraceForm:
    """Trace presentation: active ids, ghost ids, and one trace per process."""

    active: frozenset
    ghosts: frozenset
    traces: tuple  # sorted ((pid, sorted index tuple), ...)

    def trace(self, p: int) -> frozenset:
        for pid, ix in self.traces:
            if pid == p:
                return frozenset(ix)
        raise KeyError(p)

    @property
    def supp(self) -> frozenset:
        return self.active | self.ghosts


def trace_form(active: Iterable[int], ghosts: Iterable[int], traces: Mapping[int, Iterable[int]]) -> TraceForm:
    """Validate and normalize a trace form; raises on a violated condition."""
    active, ghosts = frozenset(active), frozenset(ghosts)
    if active & ghosts:
        raise InvalidArgument(f"active and ghost sets overlap on {sorted(active & ghosts)}")
    if set(traces) != set(active | ghosts):
        raise InvalidArgument("trace domain must be exactly the union of active and ghost sets")
    norm = []
    for p in sorted(traces):
        ix = tuple(sorted(set(traces[p])))
        if not ix or ix[0] < 0:
            raise InvalidArgument(f"trace of {p} must be a set of nonnegative indices")
        if 0 not in ix:
            raise InvalidArgument(f"condition T violated: 0 not in the trace of {p}")
        norm.append((p, ix))
    return TraceForm(active, ghosts, tuple(norm))


def classify_trace(tf: TraceForm) -> Classification:
    """Class of a trace form: stability and witness-ness read off the traces."""
    ghost_max = [max(ix) for p, ix in tf.traces if p in tf.ghosts]
    active_traces = [set(ix) for p, ix in tf.traces if p in tf.active]
    if not tf.active:
        if any(m > 0 for m in ghost_max):
            return Classification(PRESTRUCTURE)
        return Classification(WITNESS)
    t = max(max(ix) for ix in active_traces)
    if ghost_max and max(ghost_max) > t:
        return Classification(PRESTRUCTURE)
    for k in range(1, t + 1):
        hit = any(k in ix for ix in active_traces)
        hit = hit or any(p in tf.ghosts and k in ix and k != max(ix) for p, ix in tf.traces)
        if not hit:
            return Classification(STABLE)
    return Classification(WITNESS)


def to_trace(sigma: WitnessTable) -> TraceForm:
    return trace_form(sigma.active_set, sigma.ghost_set, sigma.traces)


def from_trace(tf: TraceForm) -> WitnessTable:
    """Rebuild the table: a ghost sits in the G row at its last trace index."""
    if not tf.traces:
        return WitnessTable((((), ()),))
    t = max(max(ix) for _, ix in tf.traces)
    ghost_layer = {p: max(ix) for p, ix in tf.traces if p in tf.ghosts}
    pairs = []
    for k in range(t + 1):
        g = {p for p, last in ghost_layer.items() if last == k}
        w = {p for p, ix in tf.traces if k in ix} - g
        pairs.append((w, g))
    return WitnessTable(pairs)


# ---------------------------------------------------------------------------
# Operators: canonical form, stabilization, ghosting
# ---------------------------------------------------------------------------


def canonical_form(sigma: WitnessTable) -> WitnessTable:
    """Drop layers with empty W part, merging their ghosts into the next kept layer."""
    if not sigma.is_stable:
        raise PreconditionViolation("canonical form is only defined for stable prestructures")
    if sigma.t == 0:
        return sigma
    kept = [i for i in range(1, sigma.t + 1) if sigma.pairs[i][0]]
    pairs = [sigma.pairs[0]]
    prev = 0
    for i in kept:
        merged = set()
        for j in range(prev + 1, i + 1):
            merged.update(sigma.pairs[j][1])
        pairs.append((sigma.pairs[i][0], merged))
        prev = i
    return WitnessTable(pairs)


def stabilize(sigma: WitnessTable, ghosted: Iterable[int]) -> WitnessTable:
    """Ghost the set, truncating traces at the last layer not swallowed by it.

    The truncation index is the largest i with R_i not contained in the new
    ghost set; when every layer is swallowed (the whole active set is
    ghosted) the result is the empty structure on the same support.
    """
    s = frozenset(ghosted)
    if not s <= sigma.active_set:
        raise PreconditionViolation(f"cannot stabilize by {sorted(s)}: not a subset of the active set")
    swallowed = s | sigma.ghost_set
    cut = -1
    for i in range(sigma.t, -1, -1):
        if not sigma.r_set(i) <= swallowed:
            cut = i
            break
    if cut < 0:
        return WitnessTable((((), tuple(sorted(sigma.supp))),))
    traces = {p: {i for i in ix if i <= cut} for p, ix in sigma.traces.items()}
    return from_trace(trace_form(sigma.active_set - s, swallowed, traces))


def ghost(sigma: WitnessTable, ghosted: Iterable[int]) -> WitnessTable:
    """The face operator: canonical form of the stabilization."""
    if not sigma.is_witness:
        raise PreconditionViolation("ghosting is only defined for witness structures")
    return canonical_form(stabilize(sigma, ghosted))


def ghost_one(sigma: WitnessTable, p: int) -> WitnessTable:
    return ghost(sigma, (p,))


# ---------------------------------------------------------------------------
# Simplex membership and the purity completion
# ---------------------------------------------------------------------------


def indexes_simplex(sigma: WitnessTable, r: RoundCounter) -> bool:
    """Whether sigma indexes a simplex of the snapshot complex of r.

    Requires a witness structure on the full support whose trace counts are
    exactly r(p)+1 on active processes and at most that on ghosts.
    """
    if not sigma.is_witness or sigma.supp != r.support:
        return False
    for p in sigma.active_set:
        if sigma.m_count(p) != r[p] + 1:
            return False
    for p in sigma.ghost_set:
        if sigma.m_count(p) > r[p] + 1:
            return False
    return True


def complete(sigma: WitnessTable, r: RoundCounter) -> WitnessTable:
    """Extend a simplex of the complex of r to a top simplex it is a face of.

    Every ghost p still owes m(p) = r(p)+1 - M(p) occurrences; appending the
    nested layers V_i = {p : m(p) >= i} realizes them, and ghosting the ghost
    set back recovers sigma.
    """
    if not indexes_simplex(sigma, r):
        raise PreconditionViolation("complete() needs a simplex of the complex of r")
    owed = {p: r[p] + 1 - sigma.m_count(p) for p in sigma.ghost_set}
    rounds = max(owed.values(), default=0)
    pairs = [(tuple(sorted(sigma.supp)), ())]
    pairs += [(tuple(sorted(sigma.r_set(i))), ()) for i in range(1, sigma.t + 1)]
    for i in range(1, rounds + 1):
        pairs.append((tuple(sorted(p for p, m in owed.items() if m >= i)), ()))
    return WitnessTable(pairs)
