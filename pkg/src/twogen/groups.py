"""Finite-group kernel: explicit Cayley tables, closure, d(G), generating graphs.

A Group is a multiplication table over elements 0..n-1 with the identity
normalized to index 0.  The hot paths (subgroup closure, the d(G) = 2 pair
search) run on plain Python row lists with big-int bitmasks for membership;
everything bulk-shaped (orders, validation, product tables) is numpy.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional

import numpy as np

from twogen import arith

DEFAULT_SIZE_CAP = 4096
SIZE_CAP_ENV = "TWOGEN_SIZE_CAP"


class GroupSizeError(ValueError):
    """Requested order exceeds the explicit-table size cap."""


def size_cap() -> int:
    return int(os.environ.get(SIZE_CAP_ENV, DEFAULT_SIZE_CAP))


def check_order(n: int) -> None:
    cap = size_cap()
    if n > cap:
        raise GroupSizeError(f"order {n} exceeds the size cap {cap}")
    if n < 1:
        raise ValueError(f"group order must be positive, got {n}")


@dataclass(frozen=True, eq=False)
class Group:
    """Immutable finite group: table[a][b] = a*b, identity at index 0."""

    order: int
    table: np.ndarray
    inverse: np.ndarray
    recipe: str
    element_labels: Optional[tuple[str, ...]] = None

    identity = 0

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def __repr__(self) -> str:
        return f"Group(order={self.order}, recipe={self.recipe!r})"

    @cached_property
    def rows(self) -> list[list[int]]:
        """Table as Python lists; much faster than numpy for scalar hot loops."""
        return self.table.tolist()

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        idx = np.arange(n)
        orders = np.zeros(n, dtype=np.int64)
        pw = idx.copy()
        k = 1
        while (orders == 0).any():
            if k > n:
                raise ValueError("power walk exceeded group order; table is not a group")
            hit = (pw == 0) & (orders == 0)
            orders[hit] = k
            pw = self.table[pw, idx].astype(np.int64)
            k += 1
        return orders

    @cached_property
    def _cyclic_data(self) -> tuple[list[tuple[int, int, int]], list[int]]:
        """Distinct cyclic subgroups as (representative, bitmask, size), plus
        the subgroup id generated by each element.

        Pair searches only ever need one generator per cyclic subgroup, so this
        is the deduplication table they all index through.
        """
        rows = self.rows
        n = self.order
        by_mask: dict[int, int] = {}
        subs: list[tuple[int, int, int]] = []
        sub_of = [0] * n
        for a in range(n):
            mask = 1
            size = 1
            x = a
            while x != 0:
                mask |= 1 << x
                size += 1
                x = rows[x][a]
            sid = by_mask.get(mask)
            if sid is None:
                sid = len(subs)
                by_mask[mask] = sid
                subs.append((a, mask, size))
            sub_of[a] = sid
        return subs, sub_of


def make_group(
    table: np.ndarray | list,
    recipe: str,
    element_labels: Optional[Iterable[str]] = None,
) -> Group:
    """Wrap a table as a Group, checking the cheap laws (identity, inverses)."""
    t = np.ascontiguousarray(np.asarray(table, dtype=np.int64))
    if t.ndim != 2 or t.shape[0] != t.shape[1]:
        raise ValueError(f"table must be square, got shape {t.shape}")
    n = t.shape[0]
    check_order(n)
    if t.min() < 0 or t.max() >= n:
        raise ValueError("table entries must be element indices 0..n-1")
    idx = np.arange(n)
    if not (np.array_equal(t[0], idx) and np.array_equal(t[:, 0], idx)):
        raise ValueError("identity law fails: element 0 is not the identity")
    ii, jj = np.nonzero(t == 0)
    if len(ii) != n:
        raise ValueError("inverse law fails: some row lacks a unique identity entry")
    inverse = np.zeros(n, dtype=np.uint16)
    inverse[ii] = jj
    labels = tuple(element_labels) if element_labels is not None else None
    if labels is not None and len(labels) != n:
        raise ValueError("element_labels length must equal the order")
    return Group(order=n, table=t.astype(np.uint16), inverse=inverse, recipe=recipe, element_labels=labels)


# --------------------------------------------------------------------------
# validation


def validation_failure(g: Group) -> Optional[str]:
    """First violated group law, or None.  Associativity is the full n^3 check."""
    t = g.table.astype(np.int64)
    n = g.order
    idx = np.arange(n)
    if not (np.array_equal(t[0], idx) and np.array_equal(t[:, 0], idx)):
        return "identity law: row/column 0 is not the identity permutation"
    if not np.array_equal(np.sort(t, axis=1), np.broadcast_to(idx, t.shape)):
        return "latin square: some row is not a permutation"
    if not np.array_equal(np.sort(t, axis=0), np.broadcast_to(idx[:, None], t.shape)):
        return "latin square: some column is not a permutation"
    if not np.array_equal(t[idx, g.inverse.astype(np.int64)], np.zeros(n, dtype=np.int64)):
        return "inverse law: a*inverse[a] != identity"
    for a in range(n):
        # (a*b)*c versus a*(b*c), vectorized over (b, c)
        if not np.array_equal(t[t[a], :], t[a][t]):
            return f"associativity fails at left factor {a}"
    return None


def validate(g: Group) -> bool:
    """True iff identity, Latin-square, inverse and full associativity laws hold."""
    return validation_failure(g) is None


# --------------------------------------------------------------------------
# closure and generation


def _close(rows: list[list[int]], seeds: Iterable[int], halt_size: int = 0):
    """Work-list subgroup closure with bitmask membership.

    Returns (mask, elements).  With halt_size > 0, returns None as soon as the
    closure exceeds halt_size elements: a proper subgroup has at most n//2
    elements, so callers pass n//2 to turn "generates G" into an early exit.
    """
    mask = 1
    elems = [0]
    for s in seeds:
        if not (mask >> s) & 1:
            mask |= 1 << s
            elems.append(s)
    if halt_size and len(elems) > halt_size:
        return None
    i = 1
    while i < len(elems):
        a = elems[i]
        ra = rows[a]
        j = 1
        while j <= i:
            b = elems[j]
            p = ra[b]
            if not (mask >> p) & 1:
                mask |= 1 << p
                elems.append(p)
            p = rows[b][a]
            if not (mask >> p) & 1:
                mask |= 1 << p
                elems.append(p)
            j += 1
        if halt_size and len(elems) > halt_size:
            return None
        i += 1
    return mask, elems


def closure(g: Group, seeds: Iterable[int]) -> set[int]:
    """Subgroup generated by the seed elements (always contains the identity)."""
    seeds = list(seeds)
    for s in seeds:
        if not 0 <= s < g.order:
            raise ValueError(f"element {s} out of range for order {g.order}")
    mask, elems = _close(g.rows, seeds)
    assert g.order % len(elems) == 0, "closure size does not divide the group order"
    return set(elems)


def element_order(g: Group, a: int) -> int:
    if not 0 <= a < g.order:
        raise ValueError(f"element {a} out of range for order {g.order}")
    rows = g.rows
    s = 1
    x = a
    while x != 0:
        x = rows[x][a]
        s += 1
    return s


def order_spectrum(g: Group) -> dict[int, int]:
    """Map: element order -> number of elements of that order."""
    vals, counts = np.unique(g.element_orders, return_counts=True)
    return {int(v): int(c) for v, c in zip(vals, counts)}


def _generating_pair(g: Group) -> Optional[tuple[int, int]]:
    """First pair (a, b) with <a, b> = G, or None after an exhaustive search.

    a runs over one representative per cyclic subgroup; b runs over everything
    not yet known to be useless.  Two prunes keep this exhaustive but fast:
    - per a, once <a, b> = H != G is computed, every b' in H is skipped, since
      <a, b'> lies inside H;
    - once a's loop exhausts, every element of <a> is dead for good: a pair
      (x, y) with x a power of a has <x, y> inside some computed <a, y>.
    """
    n = g.order
    if n == 1:
        return None
    rows = g.rows
    subs, _ = g._cyclic_data
    half = n // 2
    full_mask = (1 << n) - 1
    dead = 1
    for rep, sub_mask, size in subs:
        if size == 1 or (dead >> rep) & 1:
            continue
        rem = full_mask & ~sub_mask & ~dead
        while rem:
            b = (rem & -rem).bit_length() - 1
            res = _close(rows, (rep, b), half)
            if res is None:
                return (rep, b)
            mask, _ = res
            rem &= ~mask
        dead |= sub_mask
    return None


def _search_tuples(
    rows: list[list[int]],
    subs: list[tuple[int, int, int]],
    base_mask: int,
    base_elems: list[int],
    start: int,
    depth: int,
    half: int,
) -> bool:
    """DFS: can the closure of base_elems reach G with depth more generators
    drawn from the cyclic representatives subs[start:]?"""
    covered = base_mask
    for idx in range(start, len(subs)):
        rep = subs[idx][0]
        if (covered >> rep) & 1:
            continue
        res = _close(rows, base_elems + [rep], half)
        if res is None:
            return True
        mask, elems = res
        if depth > 1 and _search_tuples(rows, subs, mask, elems, idx + 1, depth - 1, half):
            return True
        covered |= mask
    return False


def d_min(g: Group, assume_cube_free_cap: bool = True) -> int:
    """Size of a minimum generating set.

    0 for the trivial group; 1 iff some element has full order; 2 via the
    exhaustive pruned pair search.  Past that, cube-free orders are returned
    as 3 when the cap is enabled (d <= 3 holds for every group of cube-free
    order); otherwise the exhaustive k-tuple search runs for k = 3, 4, ...
    """
    n = g.order
    if n == 1:
        return 0
    if bool((g.element_orders == n).any()):
        return 1
    if _generating_pair(g) is not None:
        return 2
    if assume_cube_free_cap and arith.is_cube_free(arith.factorize(n)):
        return 3
    rows = g.rows
    subs, _ = g._cyclic_data
    half = n // 2
    k = 3
    while True:
        if _search_tuples(rows, subs, 1, [0], 0, k, half):
            return k
        k += 1
        if k > n.bit_length():
            raise ValueError(f"no generating set of size <= log2(n) found for order {n}")


@dataclass(frozen=True)
class GeneratingGraph:
    """Vertices are the group elements; edges are the pairs that generate G."""

    order: int
    edges: frozenset[tuple[int, int]]

    def edge_count(self) -> int:
        return len(self.edges)


def generating_graph(g: Group) -> GeneratingGraph:
    """All unordered pairs {a, b}, a != b, with <a, b> = G.

    The verdict only depends on the pair of cyclic subgroups (<a>, <b>), so one
    closure per subgroup pair decides every element pair.
    """
    n = g.order
    if n == 1:
        return GeneratingGraph(order=1, edges=frozenset())
    rows = g.rows
    subs, sub_of = g._cyclic_data
    half = n // 2
    k = len(subs)
    verdict = [[False] * k for _ in range(k)]
    for i in range(k):
        verdict[i][i] = subs[i][2] == n
        for j in range(i + 1, k):
            ok = _close(rows, (subs[i][0], subs[j][0]), half) is None
            verdict[i][j] = ok
            verdict[j][i] = ok
    edges = set()
    for a in range(n):
        va = verdict[sub_of[a]]
        for b in range(a + 1, n):
            if va[sub_of[b]]:
                edges.add((a, b))
    return GeneratingGraph(order=n, edges=frozenset(edges))


# --------------------------------------------------------------------------
# products and serialization


def direct_product(a: Group, b: Group) -> Group:
    """Componentwise product; element (x, y) is encoded as x + |a|*y."""
    n = a.order * b.order
    check_order(n)
    ia = np.arange(n) % a.order
    ib = np.arange(n) // a.order
    ta = a.table.astype(np.int64)
    tb = b.table.astype(np.int64)
    table = ta[ia[:, None], ia[None, :]] + a.order * tb[ib[:, None], ib[None, :]]
    return make_group(table, recipe=f"{a.recipe}*{b.recipe}")


def group_to_json(g: Group) -> str:
    doc = {"order": g.order, "recipe": g.recipe, "table": g.table.astype(int).tolist()}
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def group_from_json(text: str) -> Group:
    doc = json.loads(text)
    return make_group(doc["table"], recipe=doc["recipe"])
