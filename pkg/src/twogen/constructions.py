"""Builders for every concrete group the classifier reasons about.

All constructors emit validated-by-construction Group values with canonical
recipe strings; `from_recipe` parses the shared grammar (cyclic:n, elab:p:k,
meta:m:h:r, witness:p:q, cubewit:p:n, psl2:p, a4, d:n, dic:n, products
joined with '*').
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from twogen import arith
from twogen.groups import Group, check_order, direct_product, make_group


@dataclass(frozen=True)
class Action:
    """One automorphism of the target per element of the acting group.

    maps[j] is the permutation of the target's elements assigned to acting
    element j; maps[0] must be the identity.  label is a short tag used when
    building recipe strings for the resulting semidirect products.
    """

    acting_order: int
    target: Group
    maps: tuple[tuple[int, ...], ...]
    label: str = ""

    def is_trivial(self) -> bool:
        ident = tuple(range(self.target.order))
        return all(m == ident for m in self.maps)


def action_failure(act: Action, acting: Group) -> Optional[str]:
    """First violated Action law against the acting group's table, or None."""
    n = act.target.order
    h = acting.order
    if act.acting_order != h:
        return f"acting_order {act.acting_order} != |H| = {h}"
    if len(act.maps) != h:
        return f"need {h} maps, got {len(act.maps)}"
    ident = tuple(range(n))
    if act.maps[0] != ident:
        return "maps[0] is not the identity permutation"
    t = act.target.table.astype(np.int64)
    perms = []
    for j, m in enumerate(act.maps):
        p = np.asarray(m, dtype=np.int64)
        if p.shape != (n,) or not np.array_equal(np.sort(p), np.arange(n)):
            return f"maps[{j}] is not a permutation of 0..{n - 1}"
        if not np.array_equal(p[t], t[p[:, None], p[None, :]]):
            return f"maps[{j}] is not an automorphism of the target"
        perms.append(p)
    # Composition law that makes the inverse-twist product associative:
    # maps[u*v] must equal maps[v] applied after maps[u].
    ht = acting.rows
    for u in range(h):
        for v in range(h):
            w = ht[u][v]
            if not np.array_equal(perms[w], perms[v][perms[u]]):
                return f"maps[{u}*{v}] != maps[{v}] o maps[{u}]"
    return None


def semidirect_product(n_grp: Group, h_grp: Group, act: Action, recipe: Optional[str] = None) -> Group:
    """Semidirect product on pairs (a, b) encoded a + |N|*b.

    Multiplication twists the left pair's second slot through the action:
    (n1, h1)(n2, h2) = (n1 * maps[inverse(h1)](n2), h1 h2).
    """
    if not np.array_equal(act.target.table, n_grp.table):
        raise ValueError("action target does not match the normal factor")
    err = action_failure(act, h_grp)
    if err is not None:
        raise ValueError(f"invalid action: {err}")
    n = n_grp.order
    h = h_grp.order
    check_order(n * h)
    tn = n_grp.table.astype(np.int64)
    th = h_grp.table.astype(np.int64)
    perms = [np.asarray(m, dtype=np.int64) for m in act.maps]
    table = np.zeros((n * h, n * h), dtype=np.int64)
    for h1 in range(h):
        phi = perms[int(h_grp.inverse[h1])]
        twisted = tn[:, phi]  # [a, n2] -> n1 * phi(n2)
        for h2 in range(h):
            block = twisted + n * th[h1, h2]
            table[n * h1 : n * (h1 + 1), n * h2 : n * (h2 + 1)] = block
    if recipe is None:
        tag = act.label or "phi"
        recipe = f"sdp({n_grp.recipe},{h_grp.recipe},{tag})"
    return make_group(table, recipe=recipe)


# --------------------------------------------------------------------------
# elementary builders


def cyclic(n: int) -> Group:
    check_order(n)
    idx = np.arange(n)
    table = (idx[:, None] + idx[None, :]) % n
    return make_group(table, recipe=f"cyclic:{n}")


def elementary_abelian(p: int, k: int) -> Group:
    if not arith.is_prime(p):
        raise ValueError(f"{p} is not prime")
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    n = p**k
    check_order(n)
    idx = np.arange(n)
    table = np.zeros((n, n), dtype=np.int64)
    for i in range(k):
        d = (idx // p**i) % p
        table += ((d[:, None] + d[None, :]) % p) * p**i
    return make_group(table, recipe=f"elab:{p}:{k}")


def metacyclic(m: int, h: int, r: int) -> Group:
    """Split metacyclic group <a, b | a^m = 1 = b^h, b^-1 a b = a^r>."""
    if m < 1 or h < 1:
        raise ValueError("need m >= 1 and h >= 1")
    r = r % m if m > 1 else 0
    if m > 1 and pow(r, h, m) != 1:
        raise ValueError(f"r^h = {r}^{h} is not 1 mod {m}; the relations collapse")
    check_order(m * h)
    n_grp = cyclic(m)
    maps = []
    rj = 1 % m if m > 1 else 0
    for _ in range(h):
        maps.append(tuple((rj * x) % m for x in range(m)) if m > 1 else (0,))
        rj = (rj * r) % m if m > 1 else 0
    act = Action(acting_order=h, target=n_grp, maps=tuple(maps), label=f"u{r}")
    return semidirect_product(n_grp, cyclic(h), act, recipe=f"meta:{m}:{h}:{r}")


def dihedral(n: int) -> Group:
    """Dihedral group of order 2n."""
    g = metacyclic(n, 2, (n - 1) % n if n > 1 else 0)
    return dataclasses.replace(g, recipe=f"d:{n}")


def dicyclic(n: int) -> Group:
    """Dicyclic group of order 4n: <a, b | a^(2n) = 1, b^2 = a^n, b^-1 a b = a^-1>."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    order = 4 * n
    check_order(order)
    m = 2 * n
    idx = np.arange(order)
    i_part = idx % m
    j_part = idx // m
    eps = np.where(j_part[:, None] == 1, -1, 1)
    i_new = i_part[:, None] + eps * i_part[None, :]
    j_sum = j_part[:, None] + j_part[None, :]
    i_new = i_new + np.where(j_sum == 2, n, 0)
    table = (i_new % m) + m * (j_sum % 2)
    return make_group(table, recipe=f"dic:{n}")


def a4() -> Group:
    """Alternating group on 4 letters, as the Klein group extended by a 3-cycle."""
    klein = elementary_abelian(2, 2)
    rot = (0, 2, 3, 1)  # cycles the three involutions
    rot2 = tuple(rot[rot[x]] for x in range(4))
    act = Action(acting_order=3, target=klein, maps=((0, 1, 2, 3), rot, rot2), label="rot3")
    return semidirect_product(klein, cyclic(3), act, recipe="a4")


# --------------------------------------------------------------------------
# witnesses


def witness_p2q(p: int, q: int) -> Group:
    """Order p^2*q group with d = 3: Z_p x Z_p acted on by an order-q scalar."""
    if not (arith.is_prime(p) and arith.is_prime(q)):
        raise ValueError(f"{p} and {q} must both be prime")
    if (p - 1) % q != 0:
        raise ValueError(f"no scalar of order {q} exists mod {p}: {q} does not divide {p - 1}")
    check_order(p * p * q)
    a = next(u for u in range(2, p) if pow(u, q, p) == 1)
    target = elementary_abelian(p, 2)
    idx = np.arange(p * p)
    x1, x2 = idx % p, idx // p
    maps = []
    az = 1
    for _ in range(q):
        maps.append(tuple(((az * x1) % p + p * ((az * x2) % p)).tolist()))
        az = (az * a) % p
    act = Action(acting_order=q, target=target, maps=tuple(maps), label=f"scalar{a}")
    return semidirect_product(target, cyclic(q), act, recipe=f"witness:{p}:{q}")


def cube_witness(p: int, n: int) -> Group:
    """Order-n group with d >= 3 built from a rank-3 elementary abelian block."""
    if not arith.is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n % p**3 != 0:
        raise ValueError(f"{p}^3 does not divide {n}")
    check_order(n)
    g = elementary_abelian(p, 3)
    rest = n // p**3
    if rest > 1:
        g = direct_product(g, cyclic(rest))
    return dataclasses.replace(g, recipe=f"cubewit:{p}:{n}")


# --------------------------------------------------------------------------
# action enumeration


def _cyclic_log(n_grp: Group) -> Optional[tuple[int, list[int]]]:
    """(generator, discrete-log table) if the target is cyclic, else None."""
    n = n_grp.order
    if n == 1:
        return (0, [0])
    orders = n_grp.element_orders
    gens = np.nonzero(orders == n)[0]
    if len(gens) == 0:
        return None
    g0 = int(gens[0])
    log = [0] * n
    rows = n_grp.rows
    x = g0
    k = 1
    while x != 0:
        log[x] = k
        x = rows[x][g0]
        k += 1
    return g0, log


def _power_table(n_grp: Group, g0: int) -> list[int]:
    """pow_tab[k] = g0^k for k in 0..order(g0)-1."""
    rows = n_grp.rows
    tab = [0]
    x = g0
    while x != 0:
        tab.append(x)
        x = rows[x][g0]
    return tab


def _unit_action_on_cyclic(n_grp: Group, g0: int, log: list[int], pow_tab: list[int], units: list[int], label: str) -> Action:
    """Action whose maps multiply the exponent by the given unit sequence."""
    m = n_grp.order
    maps = []
    for u in units:
        maps.append(tuple(pow_tab[(u * log[x]) % m] for x in range(m)))
    return Action(acting_order=len(units), target=n_grp, maps=tuple(maps), label=label)


def _is_elemab_rank2(n_grp: Group) -> Optional[int]:
    """The prime p if the target is Z_p x Z_p in standard encoding, else None."""
    n = n_grp.order
    root = math.isqrt(n)
    if root * root != n or not arith.is_prime(root):
        return None
    if np.array_equal(n_grp.table, elementary_abelian(root, 2).table):
        return root
    return None


def _matrices_with_power_identity(p: int, h: int) -> np.ndarray:
    """All 2x2 matrices over F_p with M^h = I, in lexicographic entry order."""
    k = p**4
    ents = np.arange(k)
    mats = np.stack(
        [
            np.stack([ents // p**3 % p, ents // p**2 % p], axis=1),
            np.stack([ents // p % p, ents % p], axis=1),
        ],
        axis=1,
    )
    acc = np.broadcast_to(np.eye(2, dtype=np.int64), mats.shape).copy()
    base = mats.copy()
    e = h
    while e:
        if e & 1:
            acc = np.einsum("nij,njk->nik", acc, base) % p
        base = np.einsum("nij,njk->nik", base, base) % p
        e >>= 1
    good = (acc == np.eye(2, dtype=np.int64)).all(axis=(1, 2))
    return mats[good]


def _matrix_perm(mat: np.ndarray, p: int) -> tuple[int, ...]:
    idx = np.arange(p * p)
    x1, x2 = idx % p, idx // p
    y1 = (mat[0, 0] * x1 + mat[0, 1] * x2) % p
    y2 = (mat[1, 0] * x1 + mat[1, 1] * x2) % p
    return tuple((y1 + p * y2).tolist())


def _matrix_label(mat: np.ndarray) -> str:
    return "m" + ",".join(str(int(v)) for v in mat.reshape(-1))


def enumerate_actions_cyclic(h: int, n_grp: Group) -> list[Action]:
    """All actions of Z_h on a cyclic target or on Z_p x Z_p, trivial included.

    For a cyclic target of order m, these are the units u with u^h = 1 (mod m);
    for Z_p x Z_p every 2x2 matrix over F_p with M^h = I, found by brute force
    over all p^4 matrices.  Emitted in ascending unit / lexicographic matrix
    order.
    """
    if h < 1:
        raise ValueError(f"need acting order >= 1, got {h}")
    cyc = _cyclic_log(n_grp)
    if cyc is not None:
        g0, log = cyc
        m = n_grp.order
        pow_tab = _power_table(n_grp, g0)
        out = []
        for u in range(1, m + 1) if m == 1 else range(1, m):
            if m > 1 and (math.gcd(u, m) != 1 or pow(u, h, m) != 1):
                continue
            units = [pow(u, z, m) if m > 1 else 0 for z in range(h)]
            out.append(_unit_action_on_cyclic(n_grp, g0, log, pow_tab, units, label=f"u{u % m}"))
        return out
    p = _is_elemab_rank2(n_grp)
    if p is None:
        raise ValueError("unsupported action target: need a cyclic group or Z_p x Z_p")
    out = []
    for mat in _matrices_with_power_identity(p, h):
        maps = []
        mz = np.eye(2, dtype=np.int64)
        for _ in range(h):
            maps.append(_matrix_perm(mz, p))
            mz = (mat @ mz) % p
        out.append(Action(acting_order=h, target=n_grp, maps=tuple(maps), label=_matrix_label(mat)))
    return out


def enumerate_actions_elemab(q: int, n_grp: Group) -> list[Action]:
    """All actions of Z_q x Z_q (standard encoding, acting order q^2) on the target.

    Cyclic target: pairs of units (u1, u2), each of multiplicative order
    dividing q; element z1 + q*z2 acts as u1^z1 * u2^z2.  Z_p x Z_p target:
    pairs of commuting matrices with M_i^q = I.
    """
    if not arith.is_prime(q):
        raise ValueError(f"{q} must be prime")
    cyc = _cyclic_log(n_grp)
    if cyc is not None:
        g0, log = cyc
        m = n_grp.order
        pow_tab = _power_table(n_grp, g0)
        us = [u for u in range(1, max(m, 2)) if math.gcd(u, m) == 1 and pow(u, q, m) == 1] if m > 1 else [0]
        out = []
        for u1 in us:
            for u2 in us:
                units = [
                    (pow(u1, z % q, m) * pow(u2, z // q, m)) % m if m > 1 else 0
                    for z in range(q * q)
                ]
                out.append(
                    _unit_action_on_cyclic(n_grp, g0, log, pow_tab, units, label=f"u{u1},{u2}")
                )
        return out
    p = _is_elemab_rank2(n_grp)
    if p is None:
        raise ValueError("unsupported action target: need a cyclic group or Z_p x Z_p")
    mats = _matrices_with_power_identity(p, q)
    out = []
    for m1 in mats:
        for m2 in mats:
            if not np.array_equal((m1 @ m2) % p, (m2 @ m1) % p):
                continue
            maps = []
            for z in range(q * q):
                mz = (np.linalg.matrix_power(m1, z % q) @ np.linalg.matrix_power(m2, z // q)) % p
                maps.append(_matrix_perm(mz.astype(np.int64), p))
            out.append(
                Action(
                    acting_order=q * q,
                    target=n_grp,
                    maps=tuple(maps),
                    label=f"{_matrix_label(m1)};{_matrix_label(m2)}",
                )
            )
    return out


# --------------------------------------------------------------------------
# PSL(2, p)


def psl2(p: int) -> Group:
    """PSL(2, p) as permutations of the projective line over F_p.

    Points are ordered 0, 1, ..., p-1, infinity (infinity last); the group is
    the closure of x -> x+1 and x -> -1/x under composition, with -1/0 taken
    as infinity and -1/infinity as 0.
    """
    if not arith.is_prime(p) or p < 5:
        raise ValueError(f"need a prime p >= 5, got {p}")
    expected = p * (p * p - 1) // 2
    check_order(expected)
    inf = p
    pts = p + 1
    shift = tuple([(x + 1) % p for x in range(p)] + [inf])
    neg_inv = tuple(
        [inf] + [(-pow(x, p - 2, p)) % p for x in range(1, p)] + [0]
    )
    ident = tuple(range(pts))
    index = {ident: 0}
    elems = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for e in frontier:
            for gen in (shift, neg_inv):
                prod = tuple(e[gen[x]] for x in range(pts))  # e after gen
                if prod not in index:
                    index[prod] = len(elems)
                    elems.append(prod)
                    nxt.append(prod)
        frontier = nxt
    if len(elems) != expected:
        raise ValueError(f"closure produced {len(elems)} elements, expected {expected}")
    perms = np.array(elems, dtype=np.int64)
    n = len(elems)
    table = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        comp = perms[i][perms]  # row j: elems[i] o elems[j]
        table[i] = [index[tuple(row)] for row in comp.tolist()]
    return make_group(table, recipe=f"psl2:{p}")


# --------------------------------------------------------------------------
# catalogs and recipes


def order12_catalog() -> list[Group]:
    """The five isomorphism types of order 12."""
    return [
        cyclic(12),
        direct_product(elementary_abelian(2, 2), cyclic(3)),
        a4(),
        dihedral(6),
        dicyclic(3),
    ]


def _parse_int_args(parts: list[str], count: int, atom: str) -> list[int]:
    if len(parts) != count:
        raise ValueError(f"recipe atom {atom!r}: expected {count} integer arguments")
    try:
        return [int(x) for x in parts]
    except ValueError:
        raise ValueError(f"recipe atom {atom!r}: arguments must be integers") from None


def _build_atom(atom: str) -> Group:
    name, *parts = atom.split(":")
    if name == "cyclic":
        return cyclic(*_parse_int_args(parts, 1, atom))
    if name == "elab":
        return elementary_abelian(*_parse_int_args(parts, 2, atom))
    if name == "meta":
        return metacyclic(*_parse_int_args(parts, 3, atom))
    if name == "witness":
        return witness_p2q(*_parse_int_args(parts, 2, atom))
    if name == "cubewit":
        return cube_witness(*_parse_int_args(parts, 2, atom))
    if name == "psl2":
        return psl2(*_parse_int_args(parts, 1, atom))
    if name == "a4":
        if parts:
            raise ValueError("recipe atom 'a4' takes no arguments")
        return a4()
    if name == "d":
        return dihedral(*_parse_int_args(parts, 1, atom))
    if name == "dic":
        return dicyclic(*_parse_int_args(parts, 1, atom))
    raise ValueError(f"unknown recipe atom {name!r}")


def from_recipe(recipe: str) -> Group:
    """Build a group from a recipe string; factors joined with '*'."""
    atoms = [a.strip() for a in recipe.split("*")]
    if not atoms or any(not a for a in atoms):
        raise ValueError(f"malformed recipe {recipe!r}")
    g = _build_atom(atoms[0])
    for atom in atoms[1:]:
        g = direct_product(g, _build_atom(atom))
    return g
