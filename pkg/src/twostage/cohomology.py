"""Group cohomology H^k(G; M) from the normalized inhomogeneous complex.

Cochains in degree k are functions from k-tuples of non-identity group
elements into the module (normalized: anything touching the identity is
zero, which cuts the rank from |G|^k to (|G|-1)^k without changing the
cohomology).  The differential is the usual alternating sum

    (d f)(g1, ..., g_{k+1}) = g1 . f(g2, ..., g_{k+1})
        + sum_i (-1)^i f(g1, ..., g_i g_{i+1}, ..., g_{k+1})
        + (-1)^{k+1} f(g1, ..., gk)

with terms landing on degenerate tuples dropped.  Cohomology is then a
subquotient computation over Z, so classes come with exact coordinates
and honest cocycle representatives.

``oracle_cohomology`` recomputes the same groups by enumerating every
cochain function and counting cosets, with no matrices anywhere.  It
exists to catch systematic errors in the linear-algebra route and is used
by the test suite and the command line ``--oracle`` flag.
"""

from __future__ import annotations

import itertools
from typing import Sequence

from .abelian import AbHom, CochainComplex, FgAbGroup, Subquotient, direct_sum, homology_at, kernel_subgroup
from .errors import InternalConsistencyError, SizeBoundError
from .groups import GModule
from .linalg import IntMatrix

__all__ = [
    "Cocycle",
    "CohomologyGroup",
    "Derivations",
    "bar_complex",
    "cohomology",
    "cohomology_range",
    "derivations",
    "oracle_cohomology",
]

DEFAULT_MAX_RANK = 20_000
DEFAULT_MAX_ENUMERATION = 2 ** 20


def _tuples(n: int, k: int) -> list[tuple[int, ...]]:
    """All k-tuples of non-identity element indices, lexicographic."""
    return list(itertools.product(range(1, n), repeat=k))


def _tuple_index(t: Sequence[int], n: int) -> int:
    idx = 0
    for g in t:
        idx = idx * (n - 1) + (g - 1)
    return idx


class Cocycle:
    """A normalized cochain, stored as a flat vector over the cochain
    group's generators: block t holds the value on tuple t in base
    generator coordinates."""

    __slots__ = ("module", "degree", "vector")

    def __init__(self, module: GModule, degree: int, vector: Sequence[int]):
        n = module.group.order
        expected = (n - 1) ** degree * module.base.ngens
        vector = tuple(int(x) for x in vector)
        if len(vector) != expected:
            raise ValueError(f"degree {degree} cochain needs {expected} coordinates, got {len(vector)}")
        self.module = module
        self.degree = degree
        self.vector = vector

    def value(self, t: Sequence[int]) -> tuple[int, ...]:
        """Value on a tuple of element indices, in base generator coords.
        Tuples touching the identity give zero (normalization)."""
        n = self.module.group.order
        if len(t) != self.degree:
            raise ValueError(f"expected a {self.degree}-tuple, got {len(t)} entries")
        mb = self.module.base.ngens
        if any(not 0 <= g < n for g in t):
            raise ValueError(f"element index out of range in {t!r}")
        if any(g == 0 for g in t):
            return (0,) * mb
        block = _tuple_index(t, n) * mb
        return self.vector[block : block + mb]

    def as_dict(self) -> dict[tuple[int, ...], tuple[int, ...]]:
        n = self.module.group.order
        return {t: self.value(t) for t in _tuples(n, self.degree)}

    def __add__(self, other: "Cocycle") -> "Cocycle":
        if self.module is not other.module or self.degree != other.degree:
            raise ValueError("cochain mismatch")
        return Cocycle(self.module, self.degree, [a + b for a, b in zip(self.vector, other.vector)])

    def scale(self, c: int) -> "Cocycle":
        return Cocycle(self.module, self.degree, [c * x for x in self.vector])

    def __repr__(self):
        return f"Cocycle(degree {self.degree}, {self.module!r})"


def bar_complex(module: GModule, kmax: int, max_rank: int = DEFAULT_MAX_RANK) -> CochainComplex:
    """The normalized cochain complex C^0 -> ... -> C^kmax.

    C^k is a direct sum of (|G|-1)^k copies of the coefficient group, one
    block per tuple, blocks in lexicographic tuple order.  Raises when any
    cochain group would exceed ``max_rank`` generators.
    """
    if kmax < 0:
        raise ValueError("kmax must be non-negative")
    n = module.group.order
    mb = module.base.ngens
    counts = [(n - 1) ** k for k in range(kmax + 1)]
    for k, c in enumerate(counts):
        if c * mb > max_rank:
            raise SizeBoundError(
                f"cochain group in degree {k} is too large",
                requested=c * mb,
                bound=max_rank,
            )
    groups = [direct_sum([module.base] * c) for c in counts]
    maps = []
    for k in range(kmax):
        maps.append(AbHom(groups[k], groups[k + 1], _differential_matrix(module, k)))
    return CochainComplex(groups, maps)


def _differential_matrix(module: GModule, k: int) -> IntMatrix:
    n = module.group.order
    mb = module.base.ngens
    table = module.group.table
    rows = (n - 1) ** (k + 1) * mb
    cols = (n - 1) ** k * mb
    out = [[0] * cols for _ in range(rows)]

    def add_identity_block(row_block: int, col_block: int, sign: int):
        r0, c0 = row_block * mb, col_block * mb
        for i in range(mb):
            out[r0 + i][c0 + i] += sign

    for s in itertools.product(range(1, n), repeat=k + 1):
        row_block = _tuple_index(s, n)
        # g1 acts on the tail
        tail = _tuple_index(s[1:], n)
        act = module.action[s[0]]
        r0, c0 = row_block * mb, tail * mb
        for i in range(mb):
            row = out[r0 + i]
            arow = act.data[i]
            for j in range(mb):
                a = arow[j]
                if a:
                    row[c0 + j] += a
        # interior multiplications, dropped when they hit the identity
        sign = -1
        for i in range(k):
            merged = table[s[i]][s[i + 1]]
            if merged != 0:
                t = s[:i] + (merged,) + s[i + 2 :]
                add_identity_block(row_block, _tuple_index(t, n), sign)
            sign = -sign
        # drop the last coordinate
        add_identity_block(row_block, _tuple_index(s[:-1], n), sign)
    return IntMatrix.from_rows(out, cols=cols)


class CohomologyGroup:
    """H^k(G; M) with exact class coordinates and cocycle representatives."""

    __slots__ = ("module", "degree", "group", "representatives", "_sub", "_d_out", "_next_group")

    def __init__(self, module: GModule, degree: int, sub: Subquotient, d_out: AbHom):
        self.module = module
        self.degree = degree
        self.group = sub.group
        self._sub = sub
        self._d_out = d_out
        self._next_group = d_out.target
        width = len(sub.group.coordinate_moduli())
        reps = []
        for i in range(width):
            coords = [0] * width
            coords[i] = 1
            reps.append(Cocycle(module, degree, sub.representative(coords)))
        self.representatives = tuple(reps)

    def is_cocycle(self, z: Cocycle) -> bool:
        return self._next_group.is_zero(self._d_out(z.vector))

    def class_of(self, z: Cocycle) -> tuple[int, ...]:
        """Canonical coordinates of the class [z]; additive, kills exactly
        the coboundaries, and inverts ``cocycle_at``."""
        if z.degree != self.degree or z.module is not self.module:
            raise ValueError("cocycle does not belong to this cohomology group")
        if not self.is_cocycle(z):
            raise ValueError("not a cocycle: differential does not vanish")
        return self._sub.class_coords(z.vector)

    def cocycle_at(self, coords: Sequence[int]) -> Cocycle:
        return Cocycle(self.module, self.degree, self._sub.representative(coords))

    def classes(self, limit: int | None = None) -> list[tuple[int, ...]]:
        return self.group.element_coords(limit)

    def __repr__(self):
        return f"CohomologyGroup(H^{self.degree} = {self.group.symbol()})"


def cohomology(module: GModule, k: int, max_rank: int = DEFAULT_MAX_RANK) -> CohomologyGroup:
    """H^k(G; M) by Smith reduction of the normalized complex."""
    if k < 0:
        raise ValueError("degree must be non-negative")
    complex_ = bar_complex(module, k + 1, max_rank=max_rank)
    sub = homology_at(complex_, k)
    return CohomologyGroup(module, k, sub, complex_.maps[k])


def cohomology_range(module: GModule, kmax: int, max_rank: int = DEFAULT_MAX_RANK) -> list[CohomologyGroup]:
    """H^0 through H^kmax off a single complex; cheaper than repeated calls."""
    if kmax < 0:
        raise ValueError("degree must be non-negative")
    complex_ = bar_complex(module, kmax + 1, max_rank=max_rank)
    out = []
    for k in range(kmax + 1):
        sub = homology_at(complex_, k)
        out.append(CohomologyGroup(module, k, sub, complex_.maps[k]))
    return out


class Derivations:
    """Z^1(G; M): crossed homomorphisms d(gh) = g.d(h) + d(g), presented
    with explicit representatives.  This is the full cocycle group, not
    its quotient by principal derivations."""

    __slots__ = ("module", "group", "representatives", "_sub")

    def __init__(self, module: GModule, sub: Subquotient):
        self.module = module
        self.group = sub.group
        self._sub = sub
        width = len(sub.group.coordinate_moduli())
        reps = []
        for i in range(width):
            coords = [0] * width
            coords[i] = 1
            reps.append(Cocycle(module, 1, sub.representative(coords)))
        self.representatives = tuple(reps)

    def coords_of(self, z: Cocycle) -> tuple[int, ...]:
        return self._sub.class_coords(z.vector)

    def __repr__(self):
        return f"Derivations({self.group.symbol()})"


def derivations(module: GModule, max_rank: int = DEFAULT_MAX_RANK) -> Derivations:
    """The group of derivations (1-cocycles) with representatives."""
    complex_ = bar_complex(module, 2, max_rank=max_rank)
    sub = kernel_subgroup(complex_.maps[1])
    return Derivations(module, sub)


# -- enumeration oracle ----------------------------------------------------


def oracle_cohomology(
    module: GModule,
    k: int,
    max_enumeration: int = DEFAULT_MAX_ENUMERATION,
    normalized: bool = True,
) -> tuple[int, ...]:
    """H^k(G; M) as invariant factors, by sheer enumeration.

    Enumerates every cochain function, filters cocycles pointwise, builds
    the coset space modulo coboundaries, and reads off the isomorphism
    type by counting element orders.  No matrices are involved at any
    point, which is what makes this an independent check on the Smith
    normal form route.  ``normalized=False`` enumerates unnormalized
    cochains (functions on all tuples, nothing dropped) as a debugging
    cross-check; the answer must be the same.
    """
    if k < 0:
        raise ValueError("degree must be non-negative")
    group = module.group
    base = module.base
    n = group.order
    size = base.order
    domain = list(range(1, n)) if normalized else list(range(n))

    elems = base.element_coords()
    moduli = base.coordinate_moduli()
    zero = tuple([0] * len(moduli))

    def add(a, b):
        return tuple((x + y) % m for x, y, m in zip(a, b, moduli))

    def neg(a):
        return tuple((-x) % m for x, m in zip(a, moduli))

    act_table = []
    for g in range(n):
        mapping = {}
        for e in elems:
            mapping[e] = base.reduce(module.act(g, base.lift(e)))
        act_table.append(mapping)

    tuples_k = list(itertools.product(domain, repeat=k))
    tuples_km1 = list(itertools.product(domain, repeat=k - 1)) if k >= 1 else []
    count = size ** len(tuples_k)
    if count > max_enumeration:
        raise SizeBoundError("oracle enumeration too large", requested=count, bound=max_enumeration)

    def coboundary(f: dict, deg: int) -> tuple:
        """df as a tuple of values aligned with the (deg+1)-tuple list."""
        out = []
        for s in itertools.product(domain, repeat=deg + 1):
            tail_val = _lookup(f, s[1:], normalized, zero)
            acc = act_table[s[0]][tail_val]
            sign = -1
            for i in range(deg):
                merged = group.table[s[i]][s[i + 1]]
                t = s[:i] + (merged,) + s[i + 2 :]
                val = _lookup(f, t, normalized, zero)
                acc = add(acc, val if sign > 0 else neg(val))
                sign = -sign
            val = _lookup(f, s[:-1], normalized, zero)
            acc = add(acc, val if sign > 0 else neg(val))
            out.append(acc)
        return tuple(out)

    # all cocycles in degree k
    cocycles = []
    for values in itertools.product(elems, repeat=len(tuples_k)):
        f = dict(zip(tuples_k, values))
        if all(v == zero for v in coboundary(f, k)):
            cocycles.append(values)

    # all coboundaries from degree k-1
    if k == 0:
        boundaries = {tuple([zero] * len(tuples_k))}
    else:
        km1_count = size ** len(tuples_km1)
        if km1_count > max_enumeration:
            raise SizeBoundError("oracle enumeration too large", requested=km1_count, bound=max_enumeration)
        boundaries = set()
        for values in itertools.product(elems, repeat=len(tuples_km1)):
            f = dict(zip(tuples_km1, values))
            db = coboundary(f, k - 1)
            boundaries.add(tuple(db))

    # coset representatives, then isomorphism type by order counting
    rep_of = {}
    cosets = []
    for z in sorted(cocycles):
        if z in rep_of:
            continue
        cosets.append(z)
        for b in boundaries:
            shifted = tuple(add(zv, bv) for zv, bv in zip(z, b))
            rep_of[shifted] = z
    zero_fn = rep_of[tuple([zero] * len(tuples_k))]

    def add_cosets(c1, c2):
        return rep_of[tuple(add(a, b) for a, b in zip(c1, c2))]

    return _invariant_factors_by_counting(cosets, add_cosets, zero_fn)


def _lookup(f: dict, t: tuple, normalized: bool, zero):
    if normalized and any(g == 0 for g in t):
        return zero
    return f[t]


def _invariant_factors_by_counting(elements: list, add, zero) -> tuple[int, ...]:
    """Invariant factors of an explicit finite abelian group.

    For each prime p, the count of solutions of p^j x = 0 determines the
    partition of the p-primary part; primes are then recombined into a
    divisibility chain.  Pure counting, no matrices.
    """
    n = len(elements)
    residue = n
    primes = []
    p = 2
    while p * p <= residue:
        if residue % p == 0:
            primes.append(p)
            while residue % p == 0:
                residue //= p
        p += 1
    if residue > 1:
        primes.append(residue)
    per_prime = {}
    for p in primes:
        part = 1
        m = n
        while m % p == 0:
            part *= p
            m //= p
        logs = []
        powers = list(elements)
        while True:
            for i, y in enumerate(powers):
                acc = y
                for _ in range(p - 1):
                    acc = add(acc, y)
                powers[i] = acc
            cnt = sum(1 for y in powers if y == zero)
            e = 0
            c = cnt
            while c % p == 0:
                e += 1
                c //= p
            if c != 1:
                raise InternalConsistencyError("kernel count is not a prime power")
            logs.append(e)
            if cnt == part:
                break
        conj = [logs[0]] + [logs[i] - logs[i - 1] for i in range(1, len(logs))]
        lam = []
        i = 1
        while True:
            cnt_ge = sum(1 for c in conj if c >= i)
            if cnt_ge == 0:
                break
            lam.append(cnt_ge)
            i += 1
        per_prime[p] = sorted(lam, reverse=True)
    width = max((len(v) for v in per_prime.values()), default=0)
    invs = []
    for slot in range(width):
        d = 1
        for p, lam in per_prime.items():
            if slot < len(lam):
                d *= p ** lam[slot]
        invs.append(d)
    return tuple(sorted(invs))
