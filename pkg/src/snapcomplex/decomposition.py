"""The canonical stratification of a snapshot complex.

A stratum is named by a triple (S, A, V): S is the candidate first
concurrency class, A a set of its members forced to be ghosts already in
round 1, and V a set of processes ghosted at round 0.  The stratum
X_{S,A,V} collects the simplices whose layer-1 data is compatible with
(S, A) -- either the first layer covers exactly S with A among its ghosts
(the Y part), or all of S is ghosted at layer 1 (the Z part) -- and whose
round-0 ghosts contain V.  Each stratum is simplicially isomorphic to the
complex of the reduced counter, via the maps ``gamma`` (peel off the first
layer) and ``rho`` (re-attach it).

Simplices with a single layer carry no layer-1 data; they are placed in the
Z part exactly when S is ghosted at round 0, which is the unique reading
that keeps every stratum closed under faces and the gamma/rho pair
mutually inverse.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .errors import InvalidArgument, PreconditionViolation
from .rounds import RoundCounter
from .reports import CheckRecord, Report
from . import witness
from .complexes import Complex, Slice, build, delta_v, undelta_v
from .witness import WitnessTable

IN_Y = "in_Y"
IN_Z = "in_Z"
OUT = "out"


@dataclass(frozen=True)
class StratumId:
    first: frozenset  # S: the first concurrency class
    ghosts: frozenset  # A: members of S forced into the layer-1 ghost set
    round0: frozenset  # V: processes ghosted at round 0

    def __init__(self, first: Iterable[int], ghosts: Iterable[int] = (), round0: Iterable[int] = ()):
        object.__setattr__(self, "first", frozenset(first))
        object.__setattr__(self, "ghosts", frozenset(ghosts))
        object.__setattr__(self, "round0", frozenset(round0))

    def validate(self, r: RoundCounter) -> None:
        if not self.ghosts <= self.first <= r.active:
            raise InvalidArgument(f"need ghosts <= first <= active set, got {self}")
        if not self.round0 <= r.support or self.round0 & self.first:
            raise InvalidArgument(f"round-0 set must avoid the first class, got {self}")

    def __repr__(self) -> str:
        return f"StratumId(S={sorted(self.first)}, A={sorted(self.ghosts)}, V={sorted(self.round0)})"


def membership(sigma: WitnessTable, sid: StratumId) -> str:
    """Y/Z membership of a simplex, gated by the round-0 condition."""
    if not sid.ghosts <= sid.first:
        raise InvalidArgument(f"need ghosts <= first in {sid}")
    if not sid.round0 <= sigma.g(0):
        return OUT
    if sigma.t == 0:
        return IN_Z if sid.first <= sigma.g(0) else OUT
    if sid.first <= sigma.g(1):
        return IN_Z
    if sigma.r_set(1) == sid.first and sid.ghosts <= sigma.g(1):
        return IN_Y
    return OUT


def stratum(k: Complex, sid: StratumId) -> Slice:
    sid.validate(k.counter)
    members = frozenset(s for s in k.simplices if membership(s, sid) != OUT)
    out = Slice(k, members)
    if not out.is_closed():
        raise AssertionError(f"stratum {sid} is not boundary-closed")
    return out


def _y_slice(k: Complex, first, ghosts) -> frozenset:
    """The Y part alone (not boundary-closed); empty when ghosts exceed first."""
    first, ghosts = frozenset(first), frozenset(ghosts)
    if not ghosts <= first:
        return frozenset()
    return frozenset(
        s for s in k.simplices if s.t >= 1 and s.r_set(1) == first and ghosts <= s.g(1)
    )


def _z_slice(k: Complex, first) -> frozenset:
    first = frozenset(first)
    return frozenset(
        s
        for s in k.simplices
        if (s.t == 0 and first <= s.g(0)) or (s.t >= 1 and first <= s.g(1))
    )


# ---------------------------------------------------------------------------
# The gamma / rho isomorphism pair
# ---------------------------------------------------------------------------


def gamma(sigma: WitnessTable, sid: StratumId) -> WitnessTable:
    """Peel the first concurrency class off a stratum member.

    Y members lose their whole layer 1 into the round-0 ghosts, Z members
    only the ghosted copy of S; the forced ghosts A leave the support.
    """
    kind = membership(sigma, sid)
    if kind == OUT:
        raise PreconditionViolation(f"{sigma!r} is not in stratum {sid}")
    s, a = sid.first, sid.ghosts
    pairs = sigma.pairs
    if sigma.t == 0:
        w0, g0 = pairs[0]
        return WitnessTable(((w0, tuple(p for p in g0 if p not in a)),))
    if kind == IN_Y:
        w0 = sigma.w(0) - sigma.g(1)
        g0 = (sigma.g(0) | sigma.g(1)) - a
        return WitnessTable([(w0, g0)] + list(pairs[2:]))
    w0 = sigma.w(0) - s
    g0 = (sigma.g(0) | s) - a
    g1 = sigma.g(1) - s
    return WitnessTable([(w0, g0), (sigma.w(1), g1)] + list(pairs[2:]))


def rho(tau: WitnessTable, first: Iterable[int]) -> WitnessTable:
    """Re-attach the first concurrency class: inverse of gamma for A = 0.

    When tau witnesses part of S at round 0, that part becomes the new layer
    1; otherwise S is already ghosted at round 0 and just moves one layer in.
    """
    s = frozenset(first)
    if not s <= tau.supp:
        raise PreconditionViolation(f"{sorted(s)} is not within the support")
    pairs = tau.pairs
    v0, h0 = tau.w(0), tau.g(0)
    if v0 & s:
        w0 = v0 | (h0 & s)
        return WitnessTable([(w0, h0 - s), (v0 & s, h0 & s)] + list(pairs[1:]))
    if tau.t == 0:
        return tau
    return WitnessTable([(v0 | s, h0 - s), (tau.w(1), tau.g(1) | s)] + list(pairs[2:]))


def rho_sa(tau: WitnessTable, first: Iterable[int], ghosts: Iterable[int] = ()) -> WitnessTable:
    """Inverse of gamma for arbitrary forced ghosts: re-add A, then rho."""
    a = frozenset(ghosts)
    if a:
        tau = undelta_v(tau, a)
    return rho(tau, first)


def gamma_sa(sigma: WitnessTable, first: Iterable[int], ghosts: Iterable[int] = ()) -> WitnessTable:
    return gamma(sigma, StratumId(first, ghosts))


# ---------------------------------------------------------------------------
# Verification: the stratum isomorphisms
# ---------------------------------------------------------------------------


def verify_stratum_iso(r: RoundCounter, sid: StratumId) -> bool:
    """gamma is a face-respecting bijection from the stratum onto its target.

    The target is the complex of the reduced counter, cut down to the
    round-0 boundary piece when the stratum has one.
    """
    sid.validate(r)
    k = build(r)
    part = stratum(k, sid)
    target = build(r.reduce(sid.first, sid.ghosts))
    expected = {t for t in target.simplices if sid.round0 <= t.g(0)}

    images = {}
    for sigma in part.members:
        tau = gamma(sigma, sid)
        if tau in images:
            return False
        images[tau] = sigma
    if set(images) != expected:
        return False
    for tau, sigma in images.items():
        if rho_sa(tau, sid.first, sid.ghosts) != sigma:
            return False
        for p in sorted(sigma.active_set):
            if gamma(witness.ghost_one(sigma, p), sid) != witness.ghost_one(tau, p):
                return False
    return True


def all_stratum_ids(r: RoundCounter) -> list:
    """Every (S, A) pair with A <= S <= active set (V = 0)."""
    act = tuple(sorted(r.active))
    out = []
    for k in range(len(act) + 1):
        for s in combinations(act, k):
            for j in range(len(s) + 1):
                for a in combinations(s, j):
                    out.append(StratumId(s, a))
    return out


# ---------------------------------------------------------------------------
# Verification: incidence laws
# ---------------------------------------------------------------------------


def _fmt(*sets) -> str:
    return " ".join("{" + ",".join(map(str, sorted(x))) + "}" for x in sets)


def verify_incidence(r: RoundCounter) -> Report:
    """Containment, pairwise and multiple intersections, and the Y/Z laws."""
    k = build(r)
    act = tuple(sorted(r.active))
    subsets = [frozenset(c) for n in range(len(act) + 1) for c in combinations(act, n)]
    x = {}
    y = {}
    z = {}
    for s in subsets:
        z[s] = _z_slice(k, s)
        for a in subsets:
            if a <= s:
                y[(s, a)] = _y_slice(k, s, a)
                x[(s, a)] = y[(s, a)] | z[s]
    records = []

    def add(check, params, ok, ce=None):
        records.append(CheckRecord(check, params, ok, None if ok else ce or params))

    pairs = sorted(x, key=lambda sa: (sorted(sa[0]), sorted(sa[1])))
    for s, a in pairs:
        for tt, b in pairs:
            # sufficiency only: the converse fails on small counters, see
            # containment_anomalies()
            criterion = (s == tt and b <= a) or tt <= a
            add("containment", _fmt(s, a, tt, b), not criterion or x[(s, a)] <= x[(tt, b)])
            if s == tt:
                want = x[(s, a | b)]
            elif s < tt:
                want = x[(tt, s | b)]
            elif tt < s:
                want = x[(s, tt | a)]
            else:
                want = z[s | tt]
            add("intersection", _fmt(s, a, tt, b), x[(s, a)] & x[(tt, b)] == want)
            add(
                "yz-lemma",
                _fmt(s, a, tt, b),
                (z[s] & z[tt] == z[s | tt])
                and (y[(s, a)] & z[tt] == _y_slice(k, s, a | tt))
                and (y[(s, a)] & y[(tt, b)] == (_y_slice(k, s, a | b) if s == tt else frozenset())),
            )

    # multiple intersections of X_{S_1}..X_{S_t}, t = 2, 3
    tails = [frozenset(s) for s in subsets]
    for count in (2, 3):
        for s1 in subsets:
            for rest in combinations(tails, count - 1):
                if any(s1 <= si for si in rest):
                    continue
                inter = x[(s1, frozenset())]
                for si in rest:
                    inter = inter & x[(si, frozenset())]
                union_rest = frozenset().union(*rest) if rest else frozenset()
                if all(si < s1 for si in rest):
                    want = x[(s1, union_rest)]
                else:
                    want = z[s1 | union_rest]
                add("multi-intersection", _fmt(s1, *rest), inter == want)

    # X_{A,A} as the union of the strictly larger strata with the same ghosts
    for a in subsets:
        if a == frozenset(act):
            continue
        covered = frozenset().union(*(x[(s, a)] for s in subsets if a < s)) if any(
            a < s for s in subsets
        ) else frozenset()
        add("union-xaa", _fmt(a), x[(a, a)] == covered)

    return Report(tuple(records))


def containment_anomalies(r: RoundCounter) -> list:
    """Stratum pairs that are contained although the two-condition test says no.

    The sufficient test (same first class with fewer forced ghosts, or first
    class inside the forced ghosts) misses containments that hold because the
    layer-1 witness set is forced: already with two active processes,
    Z_{act - q} sits inside X_{act, B}.  Returns (S, A, T, B) tuples, sorted.
    """
    k = build(r)
    act = tuple(sorted(r.active))
    subsets = [frozenset(c) for n in range(len(act) + 1) for c in combinations(act, n)]
    x = {}
    for s in subsets:
        zs = _z_slice(k, s)
        for a in subsets:
            if a <= s:
                x[(s, a)] = _y_slice(k, s, a) | zs
    out = []
    for s, a in x:
        for tt, b in x:
            criterion = (s == tt and b <= a) or tt <= a
            if not criterion and x[(s, a)] <= x[(tt, b)]:
                out.append((tuple(sorted(s)), tuple(sorted(a)), tuple(sorted(tt)), tuple(sorted(b))))
    return sorted(out)


# ---------------------------------------------------------------------------
# Verification: commuting diagrams, replayed simplex by simplex
# ---------------------------------------------------------------------------


def verify_diagrams(r: RoundCounter) -> Report:
    """Replay the three commuting squares on every admissible parameter tuple."""
    k = build(r)
    act = tuple(sorted(r.active))
    supp = frozenset(r.support)
    subsets = [frozenset(c) for n in range(len(act) + 1) for c in combinations(act, n)]
    records = []

    def add(check, params, ok, ce=None):
        records.append(CheckRecord(check, params, ok, None if ok else ce))

    # strata-within-strata: peeling A then S agrees with peeling S|A at once
    for a in subsets:
        rest = build(r.delete(a))
        for s in subsets:
            if not s or s & a:
                continue
            ok, ce = True, None
            big = stratum(k, StratumId(s | a, a))
            for sigma in big.sorted_members:
                step = gamma(sigma, StratumId(a, a))
                if membership(step, StratumId(s)) == OUT or step not in rest:
                    ok, ce = False, sigma.key
                    break
                if gamma(step, StratumId(s)) != gamma(sigma, StratumId(s | a, a)):
                    ok, ce = False, sigma.key
                    break
            add("diagram-strata", _fmt(s, a), ok, ce)

    # forcing fewer ghosts differs from forcing more only by round-0 ghosts
    for s in subsets:
        if not s:
            continue
        for a in subsets:
            if not a <= s:
                continue
            for b in subsets:
                if not b <= a:
                    continue
                ok, ce = True, None
                for sigma in stratum(k, StratumId(s, a)).sorted_members:
                    lhs = gamma(sigma, StratumId(s, b))
                    rhs = undelta_v(gamma(sigma, StratumId(s, a)), a - b)
                    if lhs != rhs:
                        ok, ce = False, sigma.key
                        break
                add("diagram-ghost-forcing", _fmt(s, a, b), ok, ce)

    # peeling the first class commutes with stripping round-0 ghosts
    for s in subsets:
        if not s:
            continue
        for a in subsets:
            if not a <= s:
                continue
            for nv in range(len(supp - s) + 1):
                for v in combinations(sorted(supp - s), nv):
                    v = frozenset(v)
                    ok, ce = True, None
                    dropped = build(r.delete(v))
                    for sigma in stratum(k, StratumId(s, a, v)).sorted_members:
                        phi = gamma(sigma, StratumId(s, a))
                        psi = delta_v(sigma, v)
                        if not v <= phi.g(0):
                            ok, ce = False, sigma.key
                            break
                        if membership(psi, StratumId(s, a)) == OUT or psi not in dropped:
                            ok, ce = False, sigma.key
                            break
                        if delta_v(phi, v) != gamma(psi, StratumId(s, a)):
                            ok, ce = False, sigma.key
                            break
                    add("diagram-boundary", _fmt(s, a, v), ok, ce)

    return Report(tuple(records))


# ---------------------------------------------------------------------------
# Verification: the strata partition of the whole complex
# ---------------------------------------------------------------------------


def strata_partition(k: Complex) -> Report:
    """Every simplex interior lands in exactly one stratum interior.

    Single-layer simplices are the faces of the passive-set simplex; every
    other simplex is interior to the stratum named by its own layer data
    (R_1, G_1, G_0), and to no other.  Interior-ness is decided through the
    transport maps, independently of that formula.
    """
    r = k.counter
    act = tuple(sorted(r.active))
    passive = frozenset(r.passive)
    supp = frozenset(r.support)
    triples = []
    for n in range(1, len(act) + 1):
        for s in combinations(act, n):
            s = frozenset(s)
            for j in range(len(s)):
                for a in combinations(sorted(s), j):
                    for nv in range(len(supp - s) + 1):
                        for v in combinations(sorted(supp - s), nv):
                            triples.append((s, frozenset(a), frozenset(v)))
    records = []
    for sigma in k.simplices:
        interiors = []
        for s, a, v in triples:
            sid = StratumId(s, a, v)
            if membership(sigma, sid) == OUT:
                continue
            transported = delta_v(gamma(sigma, sid), v)
            if not transported.g(0):
                interiors.append((s, a, v))
        if sigma.t == 0:
            ok = not interiors and sigma.w(0) <= passive
        else:
            ok = interiors == [(sigma.r_set(1), sigma.g(1), sigma.g(0))]
        records.append(
            CheckRecord("partition", sigma.key, ok, None if ok else f"interiors={interiors!r}")
        )
    return Report(tuple(records))
