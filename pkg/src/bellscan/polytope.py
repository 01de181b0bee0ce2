"""Local bounds, saturating strategies and the facet (tightness) test.

Everything here is exact: bounds are maxima of integer linear forms over
deterministic strategies, and the tightness test computes the rank of an
integer matrix by fraction-free (Bareiss) elimination.  A functional is a
facet of the local polytope iff its bound is attained and the saturating
deterministic points span an affine subspace of dimension d-1, where d is
the no-signaling dimension of the scenario.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import (
    BellFunctional,
    CapacityError,
    DeterministicStrategy,
    Scenario,
    behavior_of_strategy,
    evaluate,
    strategies,
)

__all__ = [
    "FacetReport",
    "ns_dimension",
    "local_bound",
    "local_bound_bruteforce",
    "saturating_strategies",
    "facet_check",
    "behavior_vector",
]

_BRUTEFORCE_LIMIT = 24  # m_a + m_b; 2^24 strategy evaluations at most


@dataclass(frozen=True)
class FacetReport:
    is_tight: bool
    local_bound: Fraction
    saturating_count: int
    affine_dim: int
    ns_dim: int


def ns_dimension(s: Scenario) -> int:
    """Free-parameter count of a binary-outcome behavior: m_a + m_b + m_a*m_b."""
    return s.m_a + s.m_b + s.m_a * s.m_b


def local_bound(f: BellFunctional) -> Fraction:
    """Maximum over all deterministic strategies.

    For each of the 2^m_a Alice assignments, Bob's settings decouple: setting
    y contributes max(0, M_B(y) + sum_{x on} C(x,y)).
    """
    ma, mb = f.scenario.m_a, f.scenario.m_b
    best = None
    for mask in range(1 << ma):
        on = [x for x in range(ma) if (mask >> x) & 1]
        total = sum(f.alice_marg[x] for x in on)
        for y in range(mb):
            col = f.bob_marg[y] + sum(f.corr[x][y] for x in on)
            if col > 0:
                total += col
        if best is None or total > best:
            best = total
    return Fraction(best)


def local_bound_bruteforce(f: BellFunctional) -> Fraction:
    """Full 2^(m_a+m_b) enumeration; the oracle for local_bound."""
    ma, mb = f.scenario.m_a, f.scenario.m_b
    if ma + mb > _BRUTEFORCE_LIMIT:
        raise CapacityError(
            f"brute-force enumeration over 2^{ma + mb} strategies exceeds the guard")
    best = None
    for s in strategies(f.scenario):
        value = evaluate(f, behavior_of_strategy(s))
        if best is None or value > best:
            best = value
    return Fraction(best)


def saturating_strategies(f: BellFunctional) -> list[DeterministicStrategy]:
    """Strategies whose behavior attains f.bound exactly."""
    out = []
    for s in strategies(f.scenario):
        if evaluate(f, behavior_of_strategy(s)) == f.bound:
            out.append(s)
    return out


def behavior_vector(s: DeterministicStrategy) -> tuple[int, ...]:
    """Embedding of a deterministic behavior in the d-dimensional parameter space."""
    joint = tuple(a * b for a in s.s_a for b in s.s_b)
    return s.s_a + s.s_b + joint


def _integer_rank(rows: list[list[int]]) -> int:
    """Rank by fraction-free Gaussian elimination (Bareiss); exact over Z."""
    mat = [list(r) for r in rows]
    nr = len(mat)
    if nr == 0:
        return 0
    nc = len(mat[0])
    rank = 0
    prev = 1
    for col in range(nc):
        if rank == nr:
            break
        piv = next((r for r in range(rank, nr) if mat[r][col] != 0), None)
        if piv is None:
            continue
        if piv != rank:
            mat[rank], mat[piv] = mat[piv], mat[rank]
        pivval = mat[rank][col]
        prow = mat[rank]
        for r in range(rank + 1, nr):
            row = mat[r]
            factor = row[col]
            for j in range(col, nc):
                row[j] = (pivval * row[j] - factor * prow[j]) // prev
        prev = pivval
        rank += 1
    return rank


def facet_check(f: BellFunctional) -> FacetReport:
    """Tightness test against the no-signaling polytope dimension.

    affine_dim is the rank of the saturating vertices' differences from one
    reference vertex; an empty saturating set reports affine_dim = -1 rather
    than an error so that searches can treat non-facets as data.
    """
    d = ns_dimension(f.scenario)
    lb = local_bound(f)
    sats = saturating_strategies(f)
    if not sats:
        return FacetReport(False, lb, 0, -1, d)
    vecs = [behavior_vector(s) for s in sats]
    ref = vecs[0]
    diffs = [[v[i] - ref[i] for i in range(d)] for v in vecs[1:]]
    affine_dim = _integer_rank(diffs) if diffs else 0
    is_tight = (lb == f.bound) and (affine_dim == d - 1)
    return FacetReport(is_tight, lb, len(sats), affine_dim, d)
