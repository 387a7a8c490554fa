"""Snapshot complexes: build the full face lattice and run structural checks.

The complex of a round counter has one simplex per witness structure on the
full support whose trace counts match the counter (exactly r(p)+1 occurrences
for active processes, at most that for ghosts).  Top simplices are exactly
the executions: sequences of nonempty concurrency classes.  The face lattice
is generated downward from the tops by single-element ghosting, which yields
precisely the codimension-1 faces.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

from .errors import PreconditionViolation
from .rounds import RoundCounter
from . import witness
from .witness import WitnessTable


def is_simplex(sigma: WitnessTable, r: RoundCounter) -> bool:
    return witness.indexes_simplex(sigma, r)


def _subsets(elems):
    """Nonempty subsets of a sorted element tuple, in bitmask order."""
    n = len(elems)
    for mask in range(1, 1 << n):
        yield tuple(elems[i] for i in range(n) if mask >> i & 1)


def enumerate_top(r: RoundCounter) -> list:
    """All executions of the counter, as ghost-free witness structures."""
    supp = tuple(sorted(r.support))
    tops = []
    layers = []

    def rec(counts):
        live = tuple(p for p in supp if counts.get(p, 0) > 0)
        if not live:
            tops.append(WitnessTable([(supp, ())] + [(s, ()) for s in layers]))
            return
        for step in _subsets(live):
            for p in step:
                counts[p] -= 1
            layers.append(step)
            rec(counts)
            layers.pop()
            for p in step:
                counts[p] += 1

    rec({p: v for p, v in r if v > 0})
    return tops


class Complex:
    """The face lattice of a snapshot complex, keyed by canonical encoding."""

    def __init__(self, counter, simplices, tops, facets, cofacets):
        self.counter = counter
        self.simplices = simplices  # tuple sorted by (dim, pairs)
        self.tops = tops
        self.facets = facets  # simplex -> sorted tuple of codim-1 faces
        self.cofacets = cofacets  # simplex -> sorted tuple of codim-1 cofaces
        self._members = frozenset(simplices)
        self.by_dim = {}
        for s in simplices:
            self.by_dim.setdefault(s.dim, []).append(s)
        for d in self.by_dim:
            self.by_dim[d] = tuple(self.by_dim[d])

    @property
    def dim(self) -> int:
        return len(self.counter.support) - 1

    def __contains__(self, sigma) -> bool:
        return sigma in self._members

    def __len__(self) -> int:
        return len(self.simplices)

    @property
    def f_vector(self) -> tuple:
        return tuple(len(self.by_dim.get(d, ())) for d in range(-1, self.dim + 1))

    @property
    def euler(self) -> int:
        return sum((-1) ** d * n for d, n in zip(range(-1, self.dim + 1), self.f_vector) if d >= 0)


_BUILD_CACHE: dict = {}


def build(r: RoundCounter, cache: bool = True) -> Complex:
    """Downward closure of the executions under single-element ghosting."""
    if cache and r in _BUILD_CACHE:
        return _BUILD_CACHE[r]
    tops = sorted(enumerate_top(r), key=lambda s: s.pairs)
    facets = {}
    queue = list(tops)
    seen = set(tops)
    while queue:
        sigma = queue.pop()
        faces = sorted(
            (witness.ghost_one(sigma, p) for p in sorted(sigma.active_set)),
            key=lambda s: s.pairs,
        )
        facets[sigma] = tuple(faces)
        for tau in faces:
            if tau not in seen:
                seen.add(tau)
                queue.append(tau)
    simplices = tuple(sorted(seen, key=lambda s: (s.dim, s.pairs)))
    cofacets = {s: [] for s in simplices}
    for sigma, faces in facets.items():
        for tau in faces:
            cofacets[tau].append(sigma)
    cofacets = {s: tuple(sorted(cof, key=lambda x: x.pairs)) for s, cof in cofacets.items()}
    k = Complex(r, simplices, tuple(tops), facets, cofacets)
    if cache:
        _BUILD_CACHE[r] = k
    return k


def vertices(sigma: WitnessTable) -> frozenset:
    """The 0-faces: ghost everything but one active process."""
    act = sigma.active_set
    return frozenset(witness.ghost(sigma, act - {a}) for a in act)


def has_face(sigma: WitnessTable, tau: WitnessTable) -> bool:
    """Face criterion: tau <= sigma iff tau is the ghosting of sigma by A(sigma)-A(tau)."""
    if not tau.active_set <= sigma.active_set:
        return False
    return witness.ghost(sigma, sigma.active_set - tau.active_set) == tau


# ---------------------------------------------------------------------------
# Subcomplex slices and the boundary pieces B_V
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Slice:
    """A set of simplices of a parent complex, as a slice view."""

    parent: Complex
    members: frozenset

    @property
    def sorted_members(self) -> tuple:
        return tuple(sorted(self.members, key=lambda s: (s.dim, s.pairs)))

    def __contains__(self, sigma) -> bool:
        return sigma in self.members

    def __len__(self) -> int:
        return len(self.members)

    def is_closed(self) -> bool:
        return all(f in self.members for s in self.members for f in self.parent.facets[s])


def boundary_subcomplex(k: Complex, ids: Iterable[int]) -> Slice:
    """The simplices whose round-0 ghost set contains the given ids."""
    v = frozenset(ids)
    if not v <= k.counter.support:
        raise PreconditionViolation(f"{sorted(v)} is not within the support")
    return Slice(k, frozenset(s for s in k.simplices if v <= s.g(0)))


def delta_v(sigma: WitnessTable, ids: Iterable[int]) -> WitnessTable:
    """Strip ids from the round-0 ghost set; inverse of re-adding them."""
    v = frozenset(ids)
    if not v <= sigma.g(0):
        raise PreconditionViolation(f"{sorted(v)} is not within the round-0 ghost set")
    w0, g0 = sigma.pairs[0]
    return WitnessTable(((w0, tuple(p for p in g0 if p not in v)),) + sigma.pairs[1:])


def undelta_v(tau: WitnessTable, ids: Iterable[int]) -> WitnessTable:
    v = frozenset(ids)
    w0, g0 = tau.pairs[0]
    return WitnessTable(((w0, tuple(sorted(set(g0) | v))),) + tau.pairs[1:])


# ---------------------------------------------------------------------------
# Structural checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StructureReport:
    pure: bool
    pseudomanifold: bool
    boundary_matches: bool
    strongly_connected: bool
    reconstruction_injective: bool
    counterexample: str | None = None

    @property
    def ok(self) -> bool:
        return (
            self.pure
            and self.pseudomanifold
            and self.boundary_matches
            and self.strongly_connected
            and self.reconstruction_injective
        )


def structural_checks(k: Complex) -> StructureReport:
    n = k.dim
    counterexample = None

    pure = True
    for s in k.simplices:
        if s.dim < n and not k.cofacets[s]:
            pure = False
            counterexample = counterexample or f"pure: {s.key}"

    pseudomanifold = True
    boundary_matches = True
    for s in k.by_dim.get(n - 1, ()):
        ncof = len(k.cofacets[s])
        if ncof not in (1, 2):
            pseudomanifold = False
            counterexample = counterexample or f"pseudomanifold: {s.key} has {ncof} cofaces"
        if (ncof == 1) != bool(s.g(0)):
            boundary_matches = False
            counterexample = counterexample or f"boundary: {s.key}"

    strongly_connected = _dual_graph_connected(k)
    if not strongly_connected:
        counterexample = counterexample or "dual graph disconnected"

    reconstruction_injective = True
    seen = {}
    for s in k.simplices:
        vs = frozenset(v.pairs for v in vertices(s))
        if vs in seen:
            reconstruction_injective = False
            counterexample = counterexample or f"reconstruction: {seen[vs].key} vs {s.key}"
        seen[vs] = s

    return StructureReport(
        pure, pseudomanifold, boundary_matches, strongly_connected, reconstruction_injective, counterexample
    )


def _dual_graph_adjacency(k: Complex) -> dict:
    adj = {s: set() for s in k.tops}
    for f in k.by_dim.get(k.dim - 1, ()):
        cof = [c for c in k.cofacets[f] if c.dim == k.dim]
        for a in cof:
            for b in cof:
                if a != b:
                    adj[a].add(b)
    return {s: tuple(sorted(nb, key=lambda x: x.pairs)) for s, nb in adj.items()}


def _dual_graph_connected(k: Complex) -> bool:
    tops = k.tops
    if len(tops) <= 1:
        return True
    adj = _dual_graph_adjacency(k)
    seen = {tops[0]}
    frontier = [tops[0]]
    while frontier:
        cur = frontier.pop()
        for nb in adj[cur]:
            if nb not in seen:
                seen.add(nb)
                frontier.append(nb)
    return len(seen) == len(tops)


@dataclass(frozen=True)
class PathReport:
    ok: bool
    edges: int
    endpoints: tuple
    counterexample: str | None = None


def expected_endpoint(r: RoundCounter, p: int) -> WitnessTable:
    """The solo vertex of color p: p alone runs all its rounds."""
    other = sorted(r.support - {p})
    return WitnessTable([((p,), tuple(other))] + [((p,), ())] * r[p])


def path_profile(k: Complex) -> PathReport:
    """For a 1-dimensional complex: a subdivided interval with pinned endpoints."""
    if k.dim != 1:
        raise PreconditionViolation("path profile needs a 1-dimensional complex")
    r = k.counter
    a, b = sorted(r.support)
    expected = {expected_endpoint(r, a), expected_endpoint(r, b)}
    leaves = set()
    for v in k.by_dim.get(0, ()):
        valency = len(k.cofacets[v])
        if valency == 1:
            leaves.add(v)
        elif valency != 2:
            return PathReport(False, len(k.tops), (), f"valency {valency}: {v.key}")
    if leaves != expected:
        return PathReport(False, len(k.tops), tuple(sorted(s.key for s in leaves)), "wrong endpoints")
    return PathReport(True, len(k.tops), tuple(sorted(s.key for s in leaves)))


# ---------------------------------------------------------------------------
# Cone and chromatic-subdivision checks
# ---------------------------------------------------------------------------


def cone_check(r: RoundCounter, apex: int) -> bool:
    """Replay the cone bijection for a passive process, face by face.

    The complex is the cone over the complex without ``apex``: simplices with
    apex in W_0 drop it to give the join part, simplices with apex in G_0
    drop it to give the base part, and both maps must be face-compatible
    bijections.
    """
    if r.get(apex, None) != 0:
        raise PreconditionViolation(f"process {apex} is not passive")
    k = build(r)
    base = build(r.delete((apex,)))

    def strip(sigma):
        w0, g0 = sigma.pairs[0]
        if apex in w0:
            return WitnessTable(((tuple(p for p in w0 if p != apex), g0),) + sigma.pairs[1:])
        return delta_v(sigma, (apex,))

    with_apex = [s for s in k.simplices if apex in s.w(0)]
    without_apex = [s for s in k.simplices if apex in s.g(0)]
    if len(with_apex) + len(without_apex) != len(k.simplices):
        return False
    for part in (with_apex, without_apex):
        images = {strip(s) for s in part}
        if len(images) != len(part) or images != set(base.simplices):
            return False
    for s in k.simplices:
        if apex in s.w(0):
            # removing the apex must agree with ghosting it
            if witness.ghost_one(s, apex) != undelta_v(strip(s), (apex,)):
                return False
        for p in sorted(s.active_set - {apex}):
            if strip(witness.ghost_one(s, p)) != witness.ghost_one(strip(s), p):
                return False
    return True


def chromatic_check(r: RoundCounter) -> bool:
    """Compare the built complex with the direct chromatic-subdivision description.

    For a 0/1 counter the simplices are exactly the witness structures whose
    round-0 layer covers the support, whose active round-0 part equals the
    union of all later layers, and whose later layers are pairwise disjoint.
    """
    if any(v not in (0, 1) for _, v in r):
        raise PreconditionViolation("chromatic check needs a 0/1-valued counter")
    act = tuple(sorted(r.active))
    supp = tuple(sorted(r.support))
    expected = set()

    # enumerate: choose W_0 (ghost complement), then layered disjoint pairs
    # (W_i, G_i) with nonempty W_i covering W_0 & active exactly
    for mask in range(1 << len(supp)):
        w0 = tuple(supp[i] for i in range(len(supp)) if mask >> i & 1)
        g0 = tuple(p for p in supp if p not in w0)
        todo0 = tuple(sorted(set(w0) & set(act)))

        def grow(todo, layers):
            if not todo:
                expected.add(WitnessTable([(w0, g0)] + layers))
                return
            for wmask in range(1, 1 << len(todo)):
                w = tuple(todo[i] for i in range(len(todo)) if wmask >> i & 1)
                rest = tuple(p for p in todo if p not in w)
                for gmask in range(1 << len(rest)):
                    g = tuple(rest[i] for i in range(len(rest)) if gmask >> i & 1)
                    grow(tuple(p for p in rest if p not in g), layers + [(w, g)])

        if todo0:
            grow(todo0, [])
        else:
            expected.add(WitnessTable([(w0, g0)]))

    built = set(build(r).simplices)
    return {s.pairs for s in built} == {s.pairs for s in expected}


# ---------------------------------------------------------------------------
# Exports
# ---------------------------------------------------------------------------


def complex_to_json_obj(k: Complex) -> dict:
    return {
        "counter": {str(p): v for p, v in k.counter},
        "f_vector": list(k.f_vector),
        "tops": [s.key for s in k.tops],
        "simplices": [
            {"key": s.key, "dim": s.dim, "facets": [f.key for f in k.facets.get(s, ())]}
            for s in k.simplices
        ],
    }


def complex_to_json(k: Complex) -> str:
    return json.dumps(complex_to_json_obj(k), sort_keys=True, separators=(",", ":"))


def complex_to_dot(k: Complex) -> str:
    """Dual graph in DOT form; tops touching the boundary are flagged."""
    adj = _dual_graph_adjacency(k)
    lines = ["graph dual {"]
    for s in k.tops:
        on_boundary = any(f.g(0) for f in k.facets[s])
        attr = " [boundary=true]" if on_boundary else ""
        lines.append(f'  "{_dot_escape(s.key)}"{attr};')
    seen = set()
    for s in k.tops:
        for nb in adj[s]:
            pair = tuple(sorted((s.key, nb.key)))
            if pair not in seen:
                seen.add(pair)
                lines.append(f'  "{_dot_escape(pair[0])}" -- "{_dot_escape(pair[1])}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_escape(text: str) -> str:
    return text.replace('"', '\\"')
