"""Collapsibility and algebraic verification of the snapshot complexes.

``collapse_pair`` removes everything interior to the complex or to one
chosen round-0 boundary piece, by elementary collapses.  The schedule works
stratum pair by stratum pair:

* stage 1 clears the strata avoiding the chosen process p, pairing each
  stratum with its p-boundary piece;
* stage 2 clears the strata whose first class contains p (and at least one
  other process q), pairing forced-ghost sets A with A+q;
* stage 3 clears the remaining column where p runs alone first.

Each pair is simplicially a (boundary piece, whole complex) pair of a
strictly smaller counter, so its schedule comes from the recursion and is
transported back through the stratum isomorphisms.  Within stages 1 and 2
the batches run in never-decreasing |A| order.  An independent replay
validator is the arbiter of legality.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import CollapseStuck, PreconditionViolation
from .rounds import RoundCounter
from .complexes import Complex, build
from .decomposition import rho_sa
from .witness import WitnessTable


@dataclass(frozen=True)
class CollapseStep:
    free: WitnessTable
    coface: WitnessTable


@dataclass(frozen=True)
class CollapseBatch:
    stage: int  # 0 base case, 1..3 lemma stages, 4 greedy tail
    first: tuple  # S of the stratum pair
    forced: tuple  # A of the stratum pair
    start: int
    stop: int


@dataclass(frozen=True)
class CollapseSequence:
    steps: tuple
    residual: tuple  # surviving simplices, sorted
    batches: tuple = ()

    @property
    def removed(self) -> frozenset:
        out = set()
        for step in self.steps:
            out.add(step.free)
            out.add(step.coface)
        return frozenset(out)

    def to_json_obj(self) -> dict:
        return {
            "steps": [{"free": s.free.key, "coface": s.coface.key} for s in self.steps],
            "residual": [s.key for s in self.residual],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, separators=(",", ":"))


def _subsets_sorted(elems):
    from itertools import combinations

    elems = sorted(elems)
    for n in range(len(elems) + 1):
        yield from (tuple(c) for c in combinations(elems, n))


def _collapse_plan(r: RoundCounter, p: int):
    """Steps removing the simplices with round-0 ghosts empty or exactly {p}."""
    steps = []
    batches = []
    if not r.active:
        supp = tuple(sorted(r.support))
        free = WitnessTable(((tuple(q for q in supp if q != p), (p,)),))
        top = WitnessTable(((supp, ()),))
        steps.append(CollapseStep(free, top))
        batches.append(CollapseBatch(0, (), (), 0, 1))
        return steps, batches

    def run_batch(stage, s, a, sub_r, sub_p):
        start = len(steps)
        sub_steps, _ = _collapse_plan(sub_r, sub_p)
        for st in sub_steps:
            steps.append(CollapseStep(rho_sa(st.free, s, a), rho_sa(st.coface, s, a)))
        batches.append(CollapseBatch(stage, s, a, start, len(steps)))

    act = sorted(r.active)
    stage1 = []
    for s in _subsets_sorted(act):
        if not s or p in s:
            continue
        for a in _subsets_sorted(s):
            if len(a) < len(s):
                stage1.append((s, a))
    for s, a in sorted(stage1, key=lambda sa: (len(sa[1]), sa[0], sa[1])):
        run_batch(1, s, a, r.reduce(s, a), p)

    if p in r.active:
        for s in _subsets_sorted(act):
            if p not in s or len(s) < 2:
                continue
            q = min(x for x in s if x != p)
            inner = [a for a in _subsets_sorted(x for x in s if x not in (p, q))]
            for a in sorted(inner, key=lambda a: (len(a), a)):
                run_batch(2, s, a, r.reduce(s, a), q)
        run_batch(3, (p,), (), r.execute((p,)), p)
    return steps, batches


def collapse_pair(r: RoundCounter, p: int) -> CollapseSequence:
    """Collapse away the interior and the interior of the p-boundary piece."""
    if p not in r.support:
        raise PreconditionViolation(f"process {p} is not in the support")
    steps, batches = _collapse_plan(r, p)
    k = build(r)
    removed = set()
    for step in steps:
        removed.add(step.free)
        removed.add(step.coface)
    residual = tuple(s for s in k.simplices if s not in removed)
    return CollapseSequence(tuple(steps), residual, tuple(batches))


def collapse_to_point(r: RoundCounter) -> CollapseSequence:
    """Collapse the whole complex down to one vertex (plus the empty simplex).

    The first round removes the interior and one boundary piece via the
    staged schedule; the remaining boundary part is finished by a greedy
    free-face search in canonical key order, validated by replay.
    """
    k = build(r)
    if len(k.simplices) <= 2:
        return CollapseSequence((), k.simplices, ())
    p = min(r.support)
    first = collapse_pair(r, p)
    steps = list(first.steps)
    batches = list(first.batches)
    alive = set(first.residual)

    def alive_cofacets(s):
        return [c for c in k.cofacets[s] if c in alive]

    start = len(steps)
    while len(alive) > 2:
        best = None
        for s in sorted(alive, key=lambda x: x.key):
            cof = alive_cofacets(s)
            if len(cof) == 1 and not alive_cofacets(cof[0]):
                best = CollapseStep(s, cof[0])
                break
        if best is None:
            raise CollapseStuck(
                f"no free face among {len(alive)} surviving simplices of {r!r}",
                sorted(s.key for s in alive),
            )
        steps.append(best)
        alive.discard(best.free)
        alive.discard(best.coface)
    if start != len(steps):
        batches.append(CollapseBatch(4, (), (), start, len(steps)))
    residual = tuple(s for s in k.simplices if s in alive)
    return CollapseSequence(tuple(steps), residual, tuple(batches))


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    failed_index: int | None = None
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate_collapse(k: Complex, seq: CollapseSequence) -> ValidationResult:
    """Independent replay: each step must be a legal elementary collapse.

    Maintains the set of surviving simplices; a step is legal when its
    coface is maximal among survivors and is the unique surviving
    codimension-1 coface of the free face.
    """
    alive = set(k.simplices)
    for i, step in enumerate(seq.steps):
        f, c = step.free, step.coface
        if f not in alive or c not in alive:
            return ValidationResult(False, i, "step names a removed or unknown simplex")
        if c not in k.cofacets.get(f, ()):
            return ValidationResult(False, i, "coface does not cover the free face")
        if any(x in alive for x in k.cofacets[c]):
            return ValidationResult(False, i, "coface is not maximal")
        live_cof = [x for x in k.cofacets[f] if x in alive]
        if live_cof != [c]:
            return ValidationResult(False, i, "free face has another surviving coface")
        alive.discard(f)
        alive.discard(c)
    if alive != set(seq.residual):
        return ValidationResult(False, None, "residual does not match the replay")
    return ValidationResult(True)


# ---------------------------------------------------------------------------
# Mod-2 homology
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BettiProfile:
    betti: tuple
    euler: int


def gf2_rank(rows) -> int:
    """Rank of a set of GF(2) row vectors packed as integers."""
    pivots: dict = {}
    rank = 0
    for row in rows:
        while row:
            lead = row.bit_length()
            if lead in pivots:
                row ^= pivots[lead]
            else:
                pivots[lead] = row
                rank += 1
                break
    return rank


def homology_gf2(k: Complex) -> BettiProfile:
    """Non-reduced mod-2 Betti numbers from the facet incidences.

    The empty simplex is excluded from the chain groups, so b_0 counts
    connected components.
    """
    n = k.dim
    if n < 0:
        return BettiProfile((), 0)
    index = {}
    for d in range(n + 1):
        for i, s in enumerate(k.by_dim.get(d, ())):
            index[s] = i
    ranks = {}
    for d in range(1, n + 1):
        rows = []
        for s in k.by_dim.get(d, ()):
            mask = 0
            for f in k.facets[s]:
                mask |= 1 << index[f]
            rows.append(mask)
        ranks[d] = gf2_rank(rows)
    betti = []
    for d in range(n + 1):
        nd = len(k.by_dim.get(d, ()))
        betti.append(nd - ranks.get(d, 0) - ranks.get(d + 1, 0))
    return BettiProfile(tuple(betti), k.euler)
