"""Independent brute-force oracles used to cross-check the fast paths.

Everything in here is deliberately naive: permutation-expansion
determinants, gcds of explicitly enumerated minors, box enumeration of
lattice points.  None of it shares code with the package internals it
checks, which is the point.
"""

from __future__ import annotations

import itertools
from math import gcd

from twostage.linalg import IntMatrix


def det_leibniz(m: IntMatrix) -> int:
    """Determinant by permutation expansion; only sane for n <= 6."""
    assert m.rows == m.cols
    n = m.rows
    if n == 0:
        return 1
    total = 0
    for perm in itertools.permutations(range(n)):
        sign = 1
        seen = [False] * n
        for start in range(n):
            if seen[start]:
                continue
            length = 0
            j = start
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
        term = sign
        for i in range(n):
            term *= m[i, perm[i]]
        total += term
    return total


def minor_gcd_diagonal(m: IntMatrix) -> list[int]:
    """Expected Smith diagonal from determinantal divisors.

    g_k = gcd of all k x k minors; the k-th Smith invariant is
    g_k / g_{k-1}.  This pins the diagonal down independently of any
    reduction strategy.
    """
    n = min(m.rows, m.cols)
    diag = []
    prev = 1
    for k in range(1, n + 1):
        g = 0
        for rows_idx in itertools.combinations(range(m.rows), k):
            for cols_idx in itertools.combinations(range(m.cols), k):
                sub = IntMatrix(k, k, [m[i, j] for i in rows_idx for j in cols_idx])
                g = gcd(g, det_leibniz(sub))
        if g == 0:
            diag.extend([0] * (n - len(diag)))
            return diag
        diag.append(g // prev)
        prev = g
    return diag


def rank_fraction_free(m: IntMatrix) -> int:
    """Rank by fraction-free elimination with full pivot search."""
    a = m.to_rows()
    rows, cols = m.rows, m.cols
    rank = 0
    prev = 1
    for t in range(min(rows, cols)):
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] != 0:
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        pi, pj = pivot
        a[t], a[pi] = a[pi], a[t]
        for r in a:
            r[t], r[pj] = r[pj], r[t]
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                a[i][j] = (a[i][j] * a[t][t] - a[i][t] * a[t][j]) // prev
            a[i][t] = 0
        prev = a[t][t]
        rank += 1
    return rank


def kernel_vectors_in_box(m: IntMatrix, bound: int) -> list[tuple[int, ...]]:
    """All x with m @ x = 0 and every coordinate in [-bound, bound]."""
    out = []
    for x in itertools.product(range(-bound, bound + 1), repeat=m.cols):
        if all(v == 0 for v in m.apply(x)):
            out.append(x)
    return out


def in_span_small(basis_cols: list[tuple[int, ...]], target: tuple[int, ...], coeff_bound: int) -> bool:
    """Is target an integer combination of the basis columns, searching a box."""
    if not basis_cols:
        return all(v == 0 for v in target)
    for coeffs in itertools.product(range(-coeff_bound, coeff_bound + 1), repeat=len(basis_cols)):
        vec = [0] * len(target)
        for c, col in zip(coeffs, basis_cols):
            for i, v in enumerate(col):
                vec[i] += c * v
        if tuple(vec) == target:
            return True
    return False


def random_unimodular(rng, n: int, steps: int = 12) -> IntMatrix:
    """Product of random elementary matrices; determinant is +-1."""
    a = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(steps):
        kind = rng.randrange(3)
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        if kind == 0:
            a[i], a[j] = a[j], a[i]
        elif kind == 1:
            q = rng.randint(-3, 3)
            a[i] = [x + q * y for x, y in zip(a[i], a[j])]
        else:
            a[i] = [-x for x in a[i]]
    return IntMatrix.from_rows(a, cols=n)


def abelian_type_from_elements(elements, add, zero) -> tuple[int, ...]:
    """Invariant factors of a finite abelian group given by explicit elements.

    Uses only order counting: for each prime p, the number of solutions of
    p^j * x = 0 determines the partition shape of the p-part.  No matrices.
    """
    n = len(elements)
    factors_by_prime = {}
    residue = n
    p = 2
    primes = []
    while p * p <= residue:
        if residue % p == 0:
            primes.append(p)
            while residue % p == 0:
                residue //= p
        p += 1
    if residue > 1:
        primes.append(residue)
    for p in primes:
        part_size = 1
        m = n
        while m % p == 0:
            part_size *= p
            m //= p
        counts = []
        multiples = list(elements)  # multiples[i] = p^j * elements[i]
        while True:
            for i, y in enumerate(multiples):
                acc = y
                for _ in range(p - 1):
                    acc = add(acc, y)
                multiples[i] = acc
            cnt = sum(1 for y in multiples if y == zero)
            e = 0
            c = cnt
            while c % p == 0:
                e += 1
                c //= p
            assert c == 1, "subgroup size must be a p-power"
            counts.append(e)
            if cnt == part_size:
                break
        conj = [counts[0]] + [counts[i] - counts[i - 1] for i in range(1, len(counts))]
        lam = []
        i = 1
        while True:
            parts_ge_i = sum(1 for c in conj if c >= i)
            if parts_ge_i == 0:
                break
            lam.append(parts_ge_i)
            i += 1
        factors_by_prime[p] = sorted(lam, reverse=True)
    width = max((len(v) for v in factors_by_prime.values()), default=0)
    invs = []
    for slot in range(width):
        d = 1
        for p, lam in factors_by_prime.items():
            if slot < len(lam):
                d *= p ** lam[slot]
        invs.append(d)
    return tuple(sorted(invs))


def enumerate_homs_bruteforce(a, b) -> set:
    """Canonical keys of all homomorphisms A -> B, both finite.

    Tries every assignment of generator images and keeps those that kill
    every relation of A.  Completely independent of the kernel-lattice
    route used by hom_group.
    """
    import itertools as _it

    b_elems = b.elements()
    keys = set()
    for images in _it.product(b_elems, repeat=a.ngens):
        ok = True
        for j in range(a.presentation.cols):
            rel = a.presentation.column(j)
            acc = [0] * b.ngens
            for coeff, img in zip(rel, images):
                for i, x in enumerate(img):
                    acc[i] += coeff * x
            if not b.is_zero(acc):
                ok = False
                break
        if ok:
            keys.add(tuple(b.reduce(img) for img in images))
    return keys


def homology_bruteforce(complex_, k) -> tuple[int, ...]:
    """Invariant factors of ker/im at slot k by explicit enumeration."""
    g = complex_.groups[k]
    elems = g.elements()
    if k < len(complex_.maps):
        d_out = complex_.maps[k]
        cocycles = [x for x in elems if d_out.target.is_zero(d_out(x))]
    else:
        cocycles = list(elems)
    if k > 0:
        d_in = complex_.maps[k - 1]
        boundaries = {g.reduce(d_in(y)) for y in complex_.groups[k - 1].elements()}
    else:
        boundaries = {g.reduce([0] * g.ngens)}
    # cosets of the boundary subgroup inside the cocycle subgroup
    cocycle_keys = {g.reduce(x) for x in cocycles}
    reps = {}
    for key in sorted(cocycle_keys):
        if key in reps:
            continue
        vec = g.lift(key)
        for b in boundaries:
            bv = g.lift(b)
            shifted = g.reduce([p + q for p, q in zip(vec, bv)])
            reps[shifted] = key
    cosets = sorted(set(reps.values()))
    index = {key: reps[key] for key in cocycle_keys}

    def add(c1, c2):
        v1, v2 = g.lift(c1), g.lift(c2)
        return index[g.reduce([p + q for p, q in zip(v1, v2)])]

    zero = index[g.reduce([0] * g.ngens)]
    return abelian_type_from_elements(cosets, add, zero)


def totient(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


def brute_force_automorphisms(group) -> set:
    """All automorphisms by filtering every permutation fixing the identity."""
    n = group.order
    table = group.table
    out = set()
    for perm in itertools.permutations(range(1, n)):
        phi = (0,) + perm
        if all(phi[table[i][j]] == table[phi[i]][phi[j]] for i in range(n) for j in range(n)):
            out.add(phi)
    return out
