"""Shared builders for tests."""
from qpdim.chaincomplex import FreeComplex
from qpdim.fpmodule import cyclic_module, residue_field


def quotient(ring, gens, bound=None):
    return cyclic_module(ring, gens, bound)


def k_of(ring, bound=None):
    return residue_field(ring, bound)


def pad_trivially(c: FreeComplex, j: int, twist: int = 0) -> FreeComplex:
    """C (+) (0 -> R -1-> R -> 0) placed in degrees j+1, j: a non-minimal complex."""
    ring = c.ring
    zero, one = ring.zero(), ring.one()
    ranks = list(c.ranks)
    twists = [list(t) for t in c.twists]
    diffs = [[list(row) for row in d] for d in c.diffs]
    for i in (j, j + 1):
        k = i - c.lo
        ranks[k] += 1
        twists[k].append(twist)
    for i in range(c.lo + 1, c.hi + 1):
        d = diffs[i - c.lo - 1]
        grew_rows = i - 1 in (j, j + 1)
        grew_cols = i in (j, j + 1)
        if grew_cols:
            for row in d:
                row.append(zero)
        if grew_rows:
            d.append([zero] * (len(d[0]) if d else ranks[i - c.lo]))
        if i == j + 1:
            d[-1][-1] = one
    return FreeComplex(ring, c.lo, ranks, twists if ring.graded else None, diffs)
