"""Shared corpus generators and independent oracles for the test suite.

The oracles deliberately re-derive results along different routes than the
library: stabilization via the per-layer move-set table instead of trace
truncation, canonical form via a single forward-merging pass, executions via
unpruned sequence filtering.
"""

from __future__ import annotations

from itertools import combinations, product

from snapcomplex import RoundCounter, WitnessTable

# ---------------------------------------------------------------------------
# Counter corpora
# ---------------------------------------------------------------------------


def counters_with(max_support: int, max_cardinality: int) -> list:
    """Canonical-form counters with 1..max_support processes, bounded total."""
    out = []
    for size in range(1, max_support + 1):
        for values in product(range(max_cardinality + 1), repeat=size):
            if sum(values) <= max_cardinality:
                out.append(RoundCounter.of(*values))
    return out


# ---------------------------------------------------------------------------
# Witness-table corpora
# ---------------------------------------------------------------------------


def all_prestructures(universe=(0, 1, 2), max_t=3):
    """Every witness prestructure with support in the universe and <= max_t+1 layers."""
    universe = tuple(sorted(universe))
    for n in range(len(universe) + 1):
        for supp in combinations(universe, n):
            for wmask in range(1 << len(supp)):
                w0 = tuple(supp[i] for i in range(len(supp)) if wmask >> i & 1)
                g0 = tuple(p for p in supp if p not in w0)
                head = ((w0, g0),)
                yield WitnessTable(head)
                yield from _extend(head, w0, max_t)


def _extend(pairs, avail, max_t):
    if len(pairs) > max_t:
        return
    avail = tuple(sorted(avail))
    for wmask in range(1 << len(avail)):
        w = tuple(avail[i] for i in range(len(avail)) if wmask >> i & 1)
        rest = tuple(p for p in avail if p not in w)
        for gmask in range(1 << len(rest)):
            g = tuple(rest[i] for i in range(len(rest)) if gmask >> i & 1)
            nxt = pairs + ((w, g),)
            yield WitnessTable(nxt)
            yield from _extend(nxt, tuple(p for p in avail if p not in g), max_t)


def all_witness_structures(universe=(0, 1, 2), max_t=3) -> list:
    return [s for s in all_prestructures(universe, max_t) if s.is_witness]


def random_witness(rng, universe=(0, 1, 2, 3, 4), max_t=4) -> WitnessTable:
    """A random witness structure: nonempty later witness layers by construction."""
    supp = rng.sample(universe, rng.randint(1, len(universe)))
    w0 = [p for p in supp if rng.random() < 0.8]
    g0 = [p for p in supp if p not in w0]
    pairs = [(tuple(sorted(w0)), tuple(sorted(g0)))]
    avail = sorted(w0)
    for _ in range(rng.randint(0, max_t)):
        if not avail:
            break
        w = rng.sample(avail, rng.randint(1, len(avail)))
        rest = [p for p in avail if p not in w]
        g = [p for p in rest if rng.random() < 0.3]
        pairs.append((tuple(sorted(w)), tuple(sorted(g))))
        avail = [p for p in avail if p not in g]
    return WitnessTable(pairs)


def random_counter(rng, max_support=4, max_value=3) -> RoundCounter:
    size = rng.randint(1, max_support)
    ids = rng.sample(range(max_support + 2), size)
    return RoundCounter({p: rng.randint(0, max_value) for p in ids})


# ---------------------------------------------------------------------------
# Independent oracles
# ---------------------------------------------------------------------------


def stabilize_via_table(sigma: WitnessTable, ghosted) -> WitnessTable:
    """Move-set route: per layer, demote the processes whose last surviving
    occurrence this is, i.e. J_i = (W_i minus union of later layers) meet
    (ghosted set union existing ghosts)."""
    s = frozenset(ghosted)
    assert s <= sigma.active_set
    swallowed = s | sigma.ghost_set
    cut = None
    for i in range(sigma.t, -1, -1):
        if not sigma.r_set(i) <= swallowed:
            cut = i
            break
    if cut is None:
        return WitnessTable((((), tuple(sorted(sigma.supp))),))
    pairs = []
    for i in range(cut + 1):
        later = set()
        for j in range(i + 1, cut + 1):
            later |= sigma.r_set(j)
        move = (sigma.w(i) - later) & swallowed
        pairs.append((sigma.w(i) - move, sigma.g(i) | move))
    return WitnessTable(pairs)


def canonical_oracle(sigma: WitnessTable) -> WitnessTable:
    """Forward-merge route: sweep once, carrying ghost sets of dropped layers."""
    assert sigma.is_stable
    if sigma.t == 0:
        return sigma
    out = [sigma.pairs[0]]
    carried = set()
    for i in range(1, sigma.t + 1):
        carried |= sigma.g(i)
        if sigma.w(i):
            out.append((sigma.w(i), carried))
            carried = set()
    assert not carried
    return WitnessTable(out)


def ghost_oracle(sigma: WitnessTable, ghosted) -> WitnessTable:
    return canonical_oracle(stabilize_via_table(sigma, ghosted))


def m_count_brute(sigma: WitnessTable, p: int) -> int:
    return sum(1 for i in range(sigma.t + 1) if p in sigma.w(i) or p in sigma.g(i))


def enumerate_top_brute(r: RoundCounter) -> set:
    """Unpruned route: filter all bounded layer sequences by occurrence counts."""
    act = tuple(sorted(r.active))
    supp = tuple(sorted(r.support))
    total = r.cardinality
    subsets = [tuple(act[i] for i in range(len(act)) if m >> i & 1) for m in range(1, 1 << len(act))]
    found = set()
    for length in range(total + 1):
        for seq in product(subsets, repeat=length):
            counts = {p: 0 for p in act}
            for layer in seq:
                for p in layer:
                    counts[p] += 1
            if all(counts[p] == r[p] for p in act):
                found.add(WitnessTable([(supp, ())] + [(layer, ()) for layer in seq]))
    return found


def betti_of_simplex_set(simplices) -> tuple:
    """Mod-2 Betti numbers of an arbitrary downward-closed simplex set."""
    from snapcomplex import ghost
    from snapcomplex.topology import gf2_rank

    members = set(simplices)
    by_dim = {}
    for s in members:
        by_dim.setdefault(s.dim, []).append(s)
    top = max(by_dim)
    index = {}
    for d in by_dim:
        for i, s in enumerate(sorted(by_dim[d], key=lambda x: x.pairs)):
            index[s] = i
    ranks = {}
    for d in range(1, top + 1):
        rows = []
        for s in by_dim.get(d, ()):
            mask = 0
            for p in sorted(s.active_set):
                f = ghost(s, (p,))
                assert f in members, "set is not downward closed"
                if f.dim >= 0:
                    mask |= 1 << index[f]
            rows.append(mask)
        ranks[d] = gf2_rank(rows)
    return tuple(
        len(by_dim.get(d, ())) - ranks.get(d, 0) - ranks.get(d + 1, 0) for d in range(top + 1)
    )
