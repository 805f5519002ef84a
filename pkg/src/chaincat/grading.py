"""Finitely presented abelian grading groups with canonical-form arithmetic.

The groups built here are the maximal grading group L of a chain
polynomial (generators xbar_1..xbar_n, pbar; relations
a_i xbar_i + xbar_{i+1} = pbar for i < n and a_n xbar_n = pbar) and its
extension Ltilde by a generator T with 2T = pbar.  In Ltilde the two
elements tau = (-1)^n xbar_1 and T generate, subject to the single
relation d(a) tau = (-1)^n 2 (d(a) - mu(a)) T; every element therefore
has a unique normal form i*tau + t*T with 0 <= i < d(a).

Canonical forms come from a Smith-type diagonalization of the relation
matrix, computed once per group; element equality reduces to residue
comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .chain import Chain, chain_product, milnor_number


def smith_normal_form(mat):
    """Diagonalize an integer matrix: returns (U, D, V) with U @ mat @ V = D,
    U and V unimodular, D diagonal (no divisibility normalization)."""
    m = len(mat)
    n = len(mat[0]) if m else 0
    A = [list(row) for row in mat]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_op(i, j, q):  # row_i -= q * row_j
        A[i] = [x - q * y for x, y in zip(A[i], A[j])]
        U[i] = [x - q * y for x, y in zip(U[i], U[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for r in range(m):
            A[r][i] -= q * A[r][j]
        for r in range(n):
            V[r][i] -= q * V[r][j]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in range(m):
            A[r][i], A[r][j] = A[r][j], A[r][i]
        for r in range(n):
            V[r][i], V[r][j] = V[r][j], V[r][i]

    t = 0
    while t < min(m, n):
        # find a pivot of minimal absolute value in the trailing block
        pivot = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = abs(A[i][j])
                if v and (best is None or v < best):
                    best, pivot = v, (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        dirty = False
        for i in range(t + 1, m):
            if A[i][t]:
                q = A[i][t] // A[t][t]
                row_op(i, t, q)
                if A[i][t]:
                    dirty = True
        for j in range(t + 1, n):
            if A[t][j]:
                q = A[t][j] // A[t][t]
                col_op(j, t, q)
                if A[t][j]:
                    dirty = True
        if dirty:
            continue  # remainders survived; pick a smaller pivot next pass
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    D = [row[:] for row in A]
    return U, D, V


class GradingGroup:
    """Abelian group given by generators and integer relation rows."""

    def __init__(self, names, relations):
        self.names = tuple(names)
        g = len(self.names)
        self.relations = tuple(tuple(r) for r in relations)
        for r in self.relations:
            if len(r) != g:
                raise ValueError("relation length does not match generators")
        # subgroup spanned by the relations = column space of relations^T
        mat = [[r[i] for r in self.relations] for i in range(g)]
        if not self.relations:
            mat = [[] for _ in range(g)]
        U, D, _ = smith_normal_form(mat) if self.relations else (
            [[int(i == j) for j in range(g)] for i in range(g)], [[] for _ in range(g)], [])
        self._U = U
        diag = []
        for i in range(g):
            d = D[i][i] if self.relations and i < len(D[i]) else 0
            diag.append(d)
        self._diag = tuple(diag)
        self.zero = GroupElement(self, (0,) * g)

    def __eq__(self, other):
        return (
            isinstance(other, GradingGroup)
            and self.names == other.names
            and self.relations == other.relations
        )

    def __hash__(self):
        return hash((self.names, self.relations))

    def gen(self, name) -> "GroupElement":
        i = self.names.index(name)
        coords = [0] * len(self.names)
        coords[i] = 1
        return GroupElement(self, tuple(coords))

    def element(self, coeffs: dict) -> "GroupElement":
        coords = [0] * len(self.names)
        for name, c in coeffs.items():
            coords[self.names.index(name)] += int(c)
        return GroupElement(self, tuple(coords))

    def canon(self, coords) -> tuple:
        y = [sum(u * c for u, c in zip(row, coords)) for row in self._U]
        return tuple(
            (yi % d) if d else yi for yi, d in zip(y, self._diag)
        )

    def free_indices(self):
        return [i for i, d in enumerate(self._diag) if d == 0]

    def describe(self) -> dict:
        return {
            "generators": list(self.names),
            "relations": [
                " + ".join(
                    f"{c}*{n}" for c, n in zip(rel, self.names) if c
                ) + " = 0"
                for rel in self.relations
            ],
            "invariant_factors": [d for d in self._diag if d not in (0, 1)],
            "rank": len(self.free_indices()),
        }


@dataclass(frozen=True)
class GroupElement:
    group: GradingGroup
    coords: tuple

    def _check(self, other):
        if self.group != other.group:
            raise ValueError("elements of different grading groups")

    def __add__(self, other):
        self._check(other)
        return GroupElement(
            self.group, tuple(x + y for x, y in zip(self.coords, other.coords))
        )

    def __sub__(self, other):
        self._check(other)
        return GroupElement(
            self.group, tuple(x - y for x, y in zip(self.coords, other.coords))
        )

    def __neg__(self):
        return GroupElement(self.group, tuple(-x for x in self.coords))

    def __mul__(self, k: int):
        return GroupElement(self.group, tuple(k * x for x in self.coords))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        self._check(other)
        return self.group.canon(self.coords) == other.group.canon(other.coords)

    def __hash__(self):
        return hash((self.group, self.group.canon(self.coords)))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.group.canon(self.coords))


def maximal_grading(a) -> GradingGroup:
    """The grading group L of the chain polynomial: xbar_1..xbar_n, pbar."""
    a = Chain(a)
    n = len(a)
    names = [f"x{i}" for i in range(1, n + 1)] + ["p"]
    rels = []
    for i in range(n):
        row = [0] * (n + 1)
        row[i] = a[i]
        if i + 1 < n:
            row[i + 1] += 1
        row[n] = -1
        rels.append(row)
    return GradingGroup(names, rels)


class ExtendedGrading(GradingGroup):
    """Ltilde: the maximal grading extended by T with 2T = pbar.

    Exposes tau = (-1)^n xbar_1, the order-d(a) quotient Ltilde/<T>, and
    the unique (twist, shift) normal form g = i*tau + t*T, 0 <= i < d(a).
    """

    def __init__(self, a):
        a = Chain(a)
        n = len(a)
        names = [f"x{i}" for i in range(1, n + 1)] + ["p", "T"]
        rels = []
        for i in range(n):
            row = [0] * (n + 2)
            row[i] = a[i]
            if i + 1 < n:
                row[i + 1] += 1
            row[n] = -1
            rels.append(row)
        trow = [0] * (n + 2)
        trow[n + 1] = 2
        trow[n] = -1
        rels.append(trow)
        super().__init__(names, rels)
        self.chain = a
        self.d = chain_product(a)
        self.mu = milnor_number(a)
        # T-coefficient of the defining relation d*tau = t_rel*T
        self.t_rel = (-1) ** n * 2 * (self.d - self.mu)
        self.T = self.gen("T")
        self.pbar = self.gen("p")
        self.tau = self.gen("x1") * ((-1) ** n) if n else self.zero
        if not (self.tau * self.d - self.T * self.t_rel).is_zero():
            raise RuntimeError(
                f"defining relation d*tau = {self.t_rel}*T fails for a={tuple(a)}"
            )
        # expansion of each generator as i*tau + t*T, verified symbol by symbol
        exps = []
        for i in range(1, n + 1):
            dh = chain_product(a[: i - 1])
            mh = milnor_number(a[: i - 1])
            ic = (-1) ** (i - 1) * dh * (-1) ** n
            tc = (-1) ** i * 2 * (dh - mh)
            if not (self.tau * ic + self.T * tc - self.gen(f"x{i}")).is_zero():
                raise RuntimeError(f"tau/T expansion of x{i} fails for a={tuple(a)}")
            exps.append((ic, tc))
        exps.append((0, 2))  # pbar = 2T
        exps.append((0, 1))  # T
        self._expansions = tuple(exps)
        self._weights = self._weight_row()
        self._torsion_is_cyclic_of_order_d()

    def _weight_row(self):
        a = self.chain
        ws = []
        for k in range(len(a)):
            ws.append(Fraction(milnor_number(a[k + 1 :]), chain_product(a[k:])))
        ws.append(Fraction(1))  # pbar
        ws.append(Fraction(1, 2))  # T
        return tuple(ws)

    def _torsion_is_cyclic_of_order_d(self):
        # Ltilde/<T> must be Z/d generated by the image of tau.
        quot = GradingGroup(self.names, self.relations + ((0,) * (len(self.names) - 1) + (1,),))
        tau = GroupElement(quot, self.tau.coords)
        if not (tau * self.d).is_zero():
            raise RuntimeError("tau does not have order dividing d in Ltilde/<T>")
        d = self.d
        k = 2
        while k * k <= d:
            if d % k == 0 and (tau * (d // k)).is_zero():
                raise RuntimeError("tau has order < d in Ltilde/<T>")
            k += 1
        if d > 1 and (tau * 1).is_zero():
            raise RuntimeError("tau vanishes in Ltilde/<T>")

    def decompose(self, g: GroupElement):
        """Unique (i, t) with g = i*tau + t*T and 0 <= i < d(a)."""
        if g.group != self:
            raise ValueError("element of a different group")
        i0 = t0 = 0
        for c, (ic, tc) in zip(g.coords, self._expansions):
            i0 += c * ic
            t0 += c * tc
        return self.normalize_pair(i0, t0)

    def normalize_pair(self, i, t):
        """Reduce (i, t) modulo the relation lattice (d, -t_rel)."""
        q, r = divmod(i, self.d)
        return (r, t + q * self.t_rel)

    def twist(self, i: int) -> GroupElement:
        return self.tau * i

    def shift(self, t: int) -> GroupElement:
        return self.T * t

    def serre_element(self) -> GroupElement:
        """ell_S = n T - xbar_1 - ... - xbar_n, the Serre twist."""
        n = len(self.chain)
        e = self.T * n
        for i in range(1, n + 1):
            e = e - self.gen(f"x{i}")
        return e

    def weight(self, g: GroupElement) -> Fraction:
        """The canonical-weight homomorphism Ltilde -> Q (positive on xbar_i)."""
        if g.group != self:
            raise ValueError("element of a different group")
        return sum(
            (c * w for c, w in zip(g.coords, self._weights)), Fraction(0)
        )


_EXTENDED_CACHE: dict = {}


def extended_grading(a) -> ExtendedGrading:
    key = tuple(a)
    g = _EXTENDED_CACHE.get(key)
    if g is None:
        g = _EXTENDED_CACHE[key] = ExtendedGrading(key)
    return g


def generator_degree(group: ExtendedGrading, i: int) -> GroupElement:
    """Degree of the i-th generator of the quotient-algebra model: index 0
    (odd n only) has degree tau + T, index i >= 1 has degree xbar_i."""
    n = len(group.chain)
    if i == 0:
        if n % 2 == 0:
            raise ValueError("generator index 0 exists only for odd n")
        return group.tau + group.T
    if not 1 <= i <= n:
        raise ValueError(f"generator index {i} out of range")
    expected = {1: n % 2 == 0, 0: n % 2 == 1}[i % 2]
    if not expected:
        raise ValueError(f"index {i} has the wrong parity for n={n}")
    return group.gen(f"x{i}")


def ef_degree_offset(a) -> int:
    """The integer N solving -xbar_2-xbar_4-...-xbar_{n-2} (n even; odd
    indices for odd n) = alpha_{n-3} * tau + N * pbar in L."""
    from .chain import parity_product_sum

    a = Chain(a)
    n = len(a)
    if n < 2:
        raise ValueError("offset needs n >= 2")
    L = maximal_grading(a)
    tau = L.gen("x1") * ((-1) ** n)
    start = 2 if n % 2 == 0 else 1
    lhs = L.zero
    for i in range(start, n - 1, 2):
        lhs = lhs - L.gen(f"x{i}")
    target = lhs - tau * parity_product_sum(a, n - 3)
    pbar = L.gen("p")
    free = L.free_indices()
    if len(free) != 1:
        raise RuntimeError("grading group has unexpected free rank")
    cp = L.canon(pbar.coords)[free[0]]
    cg = L.canon(target.coords)[free[0]]
    if cp == 0 or cg % cp:
        raise RuntimeError("offset relation is unsolvable; group construction broken")
    N = cg // cp
    if not (target - pbar * N).is_zero():
        raise RuntimeError("offset relation is unsolvable; group construction broken")
    return N
