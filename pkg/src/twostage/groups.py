"""Finite groups as explicit multiplication tables, and modules over them.

A group of order n is a table t with t[i][j] the index of the product;
index 0 is always the identity.  Construction checks the full set of group
laws: the Latin-square property, two-sided inverses, and associativity.
Associativity uses Light's test against a generating set, which is
equivalent to the cubic check but fast enough for tables in the hundreds.

Groups built from permutation generators get a deterministic element
order: breadth-first over products, generators applied in input order, so
the same generators always give the same table.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from .abelian import AbHom, FgAbGroup
from .errors import SizeBoundError, ValidationError, Violation
from .linalg import IntMatrix

__all__ = ["FiniteGroup", "GModule", "automorphism_group"]

DEFAULT_MAX_GROUP_ORDER = 512
DEFAULT_MAX_AUT_ORDER = 64


class FiniteGroup:
    """An explicit finite group; identity is element 0."""

    __slots__ = ("order", "table", "inverse")

    def __init__(self, table: Sequence[Sequence[int]]):
        table = tuple(tuple(int(x) for x in row) for row in table)
        n = len(table)
        violations = []
        if n == 0:
            raise ValidationError(Violation("group.table", "empty table; a group needs an identity"))
        for i, row in enumerate(table):
            if len(row) != n:
                raise ValidationError(
                    Violation("group.table", f"row {i} has length {len(row)}, expected {n}")
                )
            for j, x in enumerate(row):
                if not 0 <= x < n:
                    raise ValidationError(
                        Violation("group.table", f"entry out of range at ({i}, {j})", {"value": x})
                    )
        for i in range(n):
            if table[0][i] != i or table[i][0] != i:
                violations.append(
                    Violation("group.identity", "element 0 is not a two-sided identity", {"index": i})
                )
                break
        for i in range(n):
            if len(set(table[i])) != n:
                violations.append(Violation("group.table", f"row {i} is not a permutation"))
                break
            if len({table[j][i] for j in range(n)}) != n:
                violations.append(Violation("group.table", f"column {i} is not a permutation"))
                break
        inverse = [None] * n
        for i in range(n):
            inv = next((j for j in range(n) if table[i][j] == 0 and table[j][i] == 0), None)
            if inv is None:
                violations.append(Violation("group.inverse", f"element {i} has no two-sided inverse"))
                break
            inverse[i] = inv
        if not violations:
            gens = _greedy_generators(table)
            witness = _light_associativity_witness(table, gens)
            if witness is not None:
                violations.append(
                    Violation("group.associativity", "product is not associative", {"triple": witness})
                )
        if violations:
            raise ValidationError(violations)
        self.order = n
        self.table = table
        self.inverse = tuple(inverse)

    # -- constructors ----------------------------------------------------

    @classmethod
    def trivial(cls) -> "FiniteGroup":
        return cls([[0]])

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        if n < 1:
            raise ValueError("order must be positive")
        return cls([[(i + j) % n for j in range(n)] for i in range(n)])

    @classmethod
    def from_cyclic_factors(cls, factors: Sequence[int]) -> "FiniteGroup":
        """Direct product of cyclic groups, elements in mixed-radix order."""
        for d in factors:
            if d < 1:
                raise ValueError("cyclic factors of a finite group must be >= 1")
        n = 1
        for d in factors:
            n *= d
        def decode(idx):
            out = []
            for d in reversed(factors):
                out.append(idx % d)
                idx //= d
            return tuple(reversed(out))
        def encode(tup):
            idx = 0
            for c, d in zip(tup, factors):
                idx = idx * d + c
            return idx
        table = [
            [encode(tuple((a + b) % d for a, b, d in zip(decode(i), decode(j), factors))) for j in range(n)]
            for i in range(n)
        ]
        return cls(table) if factors else cls.trivial()

    @classmethod
    def from_permutations(
        cls, generators: Sequence[Sequence[int]], max_order: int = DEFAULT_MAX_GROUP_ORDER
    ) -> "FiniteGroup":
        """Closure of permutation generators under composition.

        Elements are discovered breadth first, multiplying each known
        element on the right by the generators in input order; the
        identity gets index 0.  Exceeding ``max_order`` fails loudly.
        """
        gens = []
        degree = None
        for k, p in enumerate(generators):
            p = tuple(int(x) for x in p)
            if degree is None:
                degree = len(p)
            if len(p) != degree or sorted(p) != list(range(degree)):
                raise ValidationError(
                    Violation("group.generators", f"generator {k} is not a permutation", {"value": p})
                )
            gens.append(p)
        if degree is None:
            degree = 0
        ident = tuple(range(degree))
        elems = [ident]
        index = {ident: 0}
        queue = [ident]
        while queue:
            current = queue.pop(0)
            for g in gens:
                prod = tuple(current[g[i]] for i in range(degree))
                if prod not in index:
                    if len(elems) == max_order:
                        raise SizeBoundError(
                            "permutation closure exceeds the group order bound",
                            requested=f"> {max_order}",
                            bound=max_order,
                        )
                    index[prod] = len(elems)
                    elems.append(prod)
                    queue.append(prod)
        table = [
            [index[tuple(p[q[i]] for i in range(degree))] for q in elems]
            for p in elems
        ]
        return cls(table)

    # -- queries -----------------------------------------------------------

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def element_order(self, i: int) -> int:
        k, x = 1, i
        while x != 0:
            x = self.table[x][i]
            k += 1
        return k

    def is_abelian(self) -> bool:
        n = self.order
        return all(self.table[i][j] == self.table[j][i] for i in range(n) for j in range(i + 1, n))

    def generators(self) -> tuple[int, ...]:
        return _greedy_generators(self.table)

    def relabel(self, perm: Sequence[int]) -> "FiniteGroup":
        """The isomorphic group with element i renamed to perm[i]."""
        n = self.order
        perm = tuple(perm)
        if sorted(perm) != list(range(n)) or perm[0] != 0:
            raise ValueError("relabeling must be a permutation fixing the identity")
        new = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                new[perm[i]][perm[j]] = perm[self.table[i][j]]
        return FiniteGroup(new)

    def abelianization(self) -> FgAbGroup:
        """G made abelian: generators are the non-identity elements, one
        relation g + h - gh per pair."""
        n = self.order
        if n == 1:
            return FgAbGroup.trivial()
        cols = []
        for i in range(1, n):
            for j in range(1, n):
                col = [0] * (n - 1)
                col[i - 1] += 1
                col[j - 1] += 1
                p = self.table[i][j]
                if p != 0:
                    col[p - 1] -= 1
                cols.append(col)
        return FgAbGroup(IntMatrix.from_columns(cols, rows=n - 1))

    def __repr__(self):
        return f"FiniteGroup(order {self.order})"


def _greedy_generators(table) -> tuple[int, ...]:
    """Small generating set: repeatedly adjoin the lowest element not yet
    generated.  At most log2(n) generators."""
    n = len(table)
    closure = {0}
    gens = []
    while len(closure) < n:
        new_gen = next(i for i in range(n) if i not in closure)
        gens.append(new_gen)
        frontier = [new_gen]
        closure.add(new_gen)
        while frontier:
            x = frontier.pop()
            for y in list(closure):
                for z in (table[x][y], table[y][x]):
                    if z not in closure:
                        closure.add(z)
                        frontier.append(z)
    return tuple(gens)


def _light_associativity_witness(table, gens):
    """Light's test: (a g) b == a (g b) for generators g suffices."""
    n = len(table)
    for g in gens:
        for a in range(n):
            row_ag = table[table[a][g]]
            row_a = table[a]
            g_row = table[g]
            for b in range(n):
                if row_ag[b] != row_a[g_row[b]]:
                    return (a, g, b)
    return None


def _word_table(table, gens) -> list[list[int]]:
    """For each element, a word in the generators (as a list of generator
    positions) reaching it from the identity by right multiplication."""
    n = len(table)
    words = [None] * n
    words[0] = []
    queue = [0]
    while queue:
        x = queue.pop(0)
        for pos, g in enumerate(gens):
            y = table[x][g]
            if words[y] is None:
                words[y] = words[x] + [pos]
                queue.append(y)
    if any(w is None for w in words):
        raise ValueError("generating set does not generate")  # unreachable for greedy gens
    return words


def automorphism_group(
    group: FiniteGroup, max_order: int = DEFAULT_MAX_AUT_ORDER
) -> list[tuple[int, ...]]:
    """All automorphisms as permutation tuples, sorted lexicographically.

    Brute force over images of a greedy generating set, pruned by element
    orders and by partial homomorphism checks on the subgroups generated
    by prefixes.  Identity is always present; closure under composition
    and inversion is a consequence and is asserted in tests rather than
    trusted.
    """
    n = group.order
    if n > max_order:
        raise SizeBoundError("group too large for automorphism search", requested=n, bound=max_order)
    table = group.table
    gens = _greedy_generators(table)
    if not gens:
        return [(0,)]
    words = _word_table(table, gens)
    orders = [group.element_order(i) for i in range(n)]
    # subgroup generated by each generator prefix, for incremental pruning
    prefix_subgroups = []
    for k in range(1, len(gens) + 1):
        closure = {0}
        frontier = [0]
        for g in gens[:k]:
            if g not in closure:
                closure.add(g)
                frontier.append(g)
        while frontier:
            x = frontier.pop()
            for y in list(closure):
                for z in (table[x][y], table[y][x]):
                    if z not in closure:
                        closure.add(z)
                        frontier.append(z)
        prefix_subgroups.append(sorted(closure))

    candidates_per_gen = [
        [i for i in range(n) if orders[i] == orders[g]] for g in gens
    ]

    results = []

    def build_map(images) -> list[int]:
        phi = [0] * n
        for x in range(n):
            acc = 0
            for pos in words[x]:
                acc = table[acc][images[pos]]
            phi[x] = acc
        return phi

    def extend(k, images):
        if k == len(gens):
            phi = build_map(images)
            if len(set(phi)) != n:
                return
            for a in range(n):
                pa = phi[a]
                ra = table[a]
                for b in range(n):
                    if phi[ra[b]] != table[pa][phi[b]]:
                        return
            results.append(tuple(phi))
            return
        for img in candidates_per_gen[k]:
            # Define the candidate map on the subgroup generated by the
            # prefix, by closing over right multiplication, then check it
            # is an injective homomorphism there before going deeper.
            sub = prefix_subgroups[k]
            imgs = images + [img]
            partial = {0: 0}
            queue = [0]
            while queue:
                x = queue.pop()
                for pos in range(k + 1):
                    y = table[x][gens[pos]]
                    if y not in partial:
                        partial[y] = table[partial[x]][imgs[pos]]
                        queue.append(y)
            ok = len(set(partial.values())) == len(sub)
            if ok:
                for x in sub:
                    px = partial[x]
                    for y in sub:
                        if partial[table[x][y]] != table[px][partial[y]]:
                            ok = False
                            break
                    if not ok:
                        break
            if ok:
                extend(k + 1, imgs)

    extend(0, [])
    return sorted(results)


class GModule:
    """A finite abelian group with a linear action of a finite group.

    ``action[g]`` is an integer matrix on the base group's generators.
    Construction checks that every matrix is a well defined endomorphism,
    that the identity acts as the identity, and that the action respects
    the multiplication table, reporting a witness pair on failure.
    """

    __slots__ = ("group", "base", "action")

    def __init__(self, group: FiniteGroup, base: FgAbGroup, action: Sequence[IntMatrix]):
        if not base.is_finite:
            raise ValidationError(
                Violation("module.base", "coefficients must be a finite group", {"normal_form": base.normal_form})
            )
        if len(action) != group.order:
            raise ValidationError(
                Violation("module.action", f"need one matrix per group element, got {len(action)} for order {group.order}")
            )
        violations = []
        homs = []
        for g, mat in enumerate(action):
            try:
                homs.append(AbHom(base, base, mat))
            except ValidationError:
                violations.append(
                    Violation("module.action", f"matrix for element {g} is not an endomorphism", {"element": g})
                )
        if violations:
            raise ValidationError(violations)
        ident = AbHom.identity(base)
        if not homs[0].equals(ident):
            violations.append(Violation("module.action", "identity element must act as the identity"))
        n = group.order
        for g in range(n):
            for h in range(n):
                gh = group.table[g][h]
                if not (homs[g] @ homs[h]).equals(homs[gh]):
                    violations.append(
                        Violation(
                            "module.action",
                            "action(g) after action(h) differs from action(g h)",
                            {"g": g, "h": h, "gh": gh},
                        )
                    )
                    break
            else:
                continue
            break
        if violations:
            raise ValidationError(violations)
        self.group = group
        self.base = base
        self.action = tuple(action)

    @classmethod
    def trivial(cls, group: FiniteGroup, base: FgAbGroup) -> "GModule":
        ident = IntMatrix.identity(base.ngens)
        return cls(group, base, [ident] * group.order)

    def act(self, g: int, vec: Sequence[int]) -> tuple[int, ...]:
        return self.action[g].apply(vec)

    def is_trivial_action(self) -> bool:
        ident = AbHom.identity(self.base)
        return all(AbHom(self.base, self.base, m).equals(ident) for m in self.action)

    def __repr__(self):
        return f"GModule({self.base.symbol()} over group of order {self.group.order})"
