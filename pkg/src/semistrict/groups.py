"""Standard small groups and recognising them by name."""
from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .grp import (FinGroup, abelian_invariants, direct_product, find_isomorphism,
                  is_abelian, order_profile)
from .limits import LIMITS


def table_from_op(elements, op, identity=None, labels=None, name=None):
    """Build a FinGroup from a Python list of elements and a binary operation."""
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    table = np.empty((n, n), dtype=np.int64)
    for i, x in enumerate(elements):
        for j, y in enumerate(elements):
            table[i, j] = index[op(x, y)]
    labs = labels if labels is not None else [str(e) for e in elements]
    e = None if identity is None else index[identity]
    return FinGroup(labs, table, e, name=name)


def trivial_group(name="1"):
    return FinGroup(["e"], [[0]], 0, name=name)


@lru_cache(maxsize=None)
def cyclic(n):
    ar = np.arange(n)
    return FinGroup([str(i) for i in range(n)], (ar[:, None] + ar[None, :]) % n, 0, name=f"Z/{n}")


def abelian(*ns, name=None):
    """Z/n1 × Z/n2 × ... as a table group with labels like '(1,0)'."""
    if not ns:
        return trivial_group()
    elems = list(itertools.product(*[range(n) for n in ns]))
    return table_from_op(elems, lambda x, y: tuple((a + b) % n for a, b, n in zip(x, y, ns)),
                         identity=tuple(0 for _ in ns),
                         labels=["(" + ",".join(map(str, e)) + ")" for e in elems],
                         name=name or "x".join(f"Z/{n}" for n in ns))


def _cycle_label(perm):
    n = len(perm)
    seen = [False] * n
    parts = []
    for i in range(n):
        if seen[i] or perm[i] == i:
            seen[i] = True
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = True
            cyc.append(j + 1)
            j = perm[j]
        parts.append("(" + "".join(map(str, cyc)) + ")")
    return "".join(parts) or "e"


def permutation_group(perms, name=None):
    """Group closed under composition (p*q)(i) = p(q(i)); perms are tuples."""
    perms = [tuple(p) for p in perms]
    n = len(perms[0])
    ident = tuple(range(n))
    elems = sorted(set(perms) | {ident})
    # close under composition
    frontier = list(elems)
    have = set(elems)
    while frontier:
        new = []
        for p in frontier:
            for q in perms:
                r = tuple(p[q[i]] for i in range(n))
                if r not in have:
                    have.add(r)
                    new.append(r)
        frontier = new
    elems = sorted(have)
    return table_from_op(elems, lambda p, q: tuple(p[q[i]] for i in range(n)),
                         identity=ident, labels=[_cycle_label(p) for p in elems], name=name)


@lru_cache(maxsize=None)
def symmetric(n):
    return permutation_group(list(itertools.permutations(range(n))), name=f"S{n}")


def _is_even(p):
    inv = sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])
    return inv % 2 == 0


@lru_cache(maxsize=None)
def alternating(n):
    evens = [p for p in itertools.permutations(range(n)) if _is_even(p)]
    return permutation_group(evens, name=f"A{n}")


@lru_cache(maxsize=None)
def dihedral(n):
    """Symmetries of the n-gon, order 2n; elements r^k and s r^k."""
    elems = [(k, f) for f in (0, 1) for k in range(n)]

    def op(x, y):
        (a, f), (b, g) = x, y
        return ((a + (b if f == 0 else -b)) % n, f ^ g)

    labels = [(f"r{k}" if k else "e") if f == 0 else (f"r{k}s" if k else "s") for k, f in elems]
    return table_from_op(elems, op, identity=(0, 0), labels=labels, name=f"D{n}")


@lru_cache(maxsize=None)
def dicyclic(n):
    """Dicyclic group of order 4n (Q8 for n = 2), as pairs (k, j) = a^k x^j."""
    elems = [(k, j) for j in (0, 1) for k in range(2 * n)]

    def op(x, y):
        (a, i), (b, j) = x, y
        if i == 0:
            return ((a + b) % (2 * n), j)
        # x a^b = a^-b x ;  x x = a^n
        k = (a - b) % (2 * n)
        if j == 0:
            return (k, 1)
        return ((k + n) % (2 * n), 0)

    labels = [f"a{k}" if j == 0 else f"a{k}x" for k, j in elems]
    labels[0] = "e"
    return table_from_op(elems, op, identity=(0, 0), labels=labels, name=f"Dic{n}")


def quaternion():
    g = dicyclic(2)
    return FinGroup(g.elements, g.table, g.identity, name="Q8")


def klein():
    return abelian(2, 2, name="Z/2xZ/2")


# ---------------------------------------------------------------------------
# naming

def _named_nonabelian():
    out = []
    for n in range(3, 9):
        out.append((f"D{n}" if n > 3 else "S3", lambda n=n: dihedral(n)))
    out.append(("Q8", lambda: dicyclic(2)))
    out.append(("Dic3", lambda: dicyclic(3)))
    out.append(("Q16", lambda: dicyclic(4)))
    out.append(("A4", lambda: alternating(4)))
    out.append(("S4", lambda: symmetric(4)))
    return out


def structure_name(g):
    """Human-readable isomorphism type, or None if not recognised.

    Abelian groups are named by invariant factors ("Z/2xZ/4"); a handful of
    small non-abelian groups are recognised by isomorphism search.
    """
    if g.order == 1:
        return "1"
    if is_abelian(g):
        return "x".join(f"Z/{k}" for k in abelian_invariants(g))
    if g.order > LIMITS.iso_cap:
        return None
    prof = order_profile(g)
    for name, build in _named_nonabelian():
        h = build()
        if h.order == g.order and order_profile(h) == prof and find_isomorphism(g, h) is not None:
            return name
    return None


def describe(g):
    """structure_name, falling back to the order."""
    return structure_name(g) or f"order {g.order}"


def as_direct_product(*groups):
    """Materialised direct product with tuple labels."""
    return direct_product(*groups).as_fingroup()
