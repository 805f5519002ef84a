"""Monomial model of the endomorphism algebra of the standard exceptional
collection of graded matrix factorizations of a chain polynomial.

For even n the algebra is k[x_1, x_3, ..., x_{n-1}] / (x_i^{a_i}); for odd
n it is k[x_0, x_2, ..., x_{n-1}] / (x_0^2 - eps*x_2, x_i^{a_i}) with
eps = 1 exactly when a_1 = 2.  Degrees live in the extended grading group;
deg(x_0) = tau + T and deg(x_i) = xbar_i.  The basis monomials have
pairwise distinct images in Ltilde/<T> = Z/d(a), which makes every graded
Hom between collection members at most one-dimensional.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .chain import Chain, chain_product, dual_milnor, socle_degree
from .grading import ExtendedGrading, extended_grading, generator_degree


class ExtAlgebra:
    def __init__(self, a):
        a = Chain(a)
        if not a:
            raise ValueError("the algebra needs a nonempty chain")
        self.a = a
        n = len(a)
        self.n = n
        self.group: ExtendedGrading = extended_grading(a)
        if n % 2 == 0:
            self.gens = tuple(range(1, n, 2))
            self.eps = 0
        else:
            self.gens = (0,) + tuple(range(2, n, 2))
            self.eps = 1 if a[0] == 2 else 0
        # exponent bound per generator: x_0 squares away (or into x_2)
        self.bounds = tuple(2 if i == 0 else a[i - 1] for i in self.gens)
        self.basis = list(itertools.product(*(range(b) for b in self.bounds)))
        self.index = {m: k for k, m in enumerate(self.basis)}
        self.gen_degrees = tuple(generator_degree(self.group, i) for i in self.gens)
        # twist/shift pairs by integer arithmetic on the generator expansions
        pairs = []
        for i in self.gens:
            if i == 0:
                pairs.append((1, 1))  # tau + T
            else:
                pairs.append(self.group._expansions[i - 1])
        self.decomp = []
        for m in self.basis:
            ti = sum(e * p[0] for e, p in zip(m, pairs))
            tt = sum(e * p[1] for e, p in zip(m, pairs))
            self.decomp.append(self.group.normalize_pair(ti, tt))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def size(self) -> int:
        """Number of objects in the collection: mu of the reversed chain."""
        return dual_milnor(self.a)

    def _degree(self, mono):
        g = self.group.zero
        for e, d in zip(mono, self.gen_degrees):
            if e:
                g = g + d * e
        return g

    def monomial_name(self, mono) -> str:
        parts = [
            f"x{i}" + (f"^{e}" if e > 1 else "")
            for i, e in zip(self.gens, mono)
            if e
        ]
        return "*".join(parts) if parts else "1"

    def multiply(self, m1, m2):
        """Product of two exponent tuples in reduced form, or None if zero."""
        e = [x + y for x, y in zip(m1, m2)]
        if self.gens and self.gens[0] == 0 and e[0] >= 2:
            carry, e[0] = divmod(e[0], 2)
            if self.eps and len(self.gens) > 1:
                e[1] += carry
            elif carry:
                return None
        for v, b in zip(e, self.bounds):
            if v >= b:
                return None
        return tuple(e)

    def socle(self):
        """The unique nonzero basis monomial killed by every generator."""
        killed = []
        for m in self.basis:
            if all(
                self.multiply(m, self._unit_gen(j)) is None
                for j in range(len(self.gens))
            ):
                killed.append(m)
        if len(killed) != 1:
            raise RuntimeError(f"socle is not one-dimensional for a={tuple(self.a)}")
        return killed[0]

    def _unit_gen(self, j):
        e = [0] * len(self.gens)
        e[j] = 1
        return tuple(e)

    def chi_by_twist(self) -> dict:
        """tau-degree -> Euler contribution (-1)^t of the (unique) monomial."""
        out = {}
        for (i, t), m in zip(self.decomp, self.basis):
            if i in out:
                raise RuntimeError("two basis monomials share a tau-degree")
            out[i] = ((-1) ** t, m)
        return out

    def hom_table(self) -> dict:
        """Map j - i -> [(cohomological degree, dim)] for collection members
        E(i), E(j), 0 <= j - i < number of objects."""
        table = {k: [] for k in range(self.size())}
        for (i, t) in self.decomp:
            if i < self.size():
                table[i].append((t, 1))
        return {k: sorted(v) for k, v in table.items()}

    def gram(self) -> list[list[int]]:
        N = self.size()
        chi = {}
        for (i, t) in self.decomp:
            chi[i] = chi.get(i, 0) + (-1) ** t
        if chi.get(0) != 1:
            raise RuntimeError("unit does not contribute 1 on the diagonal")
        G = [[0] * N for _ in range(N)]
        for p in range(N):
            G[p][p] = 1
            for q in range(p + 1, N):
                G[p][q] = chi.get(q - p, 0)
        return G


def collection_gram(a) -> list[list[int]]:
    """Unitriangular Euler matrix of the collection; [[1]] for the empty
    chain, whose category has a single object with End = Z in degree 0."""
    a = Chain(a)
    if not a:
        return [[1]]
    return ExtAlgebra(a).gram()


@dataclass
class PairingReport:
    ok: bool
    socle_twist: int
    socle_shift: int
    failures: list = field(default_factory=list)


def perfect_pairing_check(B: ExtAlgebra) -> PairingReport:
    """Multiplication into the socle is a perfect pairing: for every
    0 < i < kappa (kappa = socle tau-degree) the tau-degree-i and
    tau-degree-(kappa - i) components either pair onto the socle or are
    both zero."""
    kappa = dual_milnor(B.a.drop_last())
    socle = B.socle()
    si, st = B.group.decompose(B._degree(socle))
    failures = []
    if si != kappa % chain_product(B.a):
        failures.append(("socle-twist", si, kappa % chain_product(B.a)))
    by_twist = {}
    for (i, _), m in zip(B.decomp, B.basis):
        by_twist[i] = m
    full = [i for i in by_twist if i == kappa]
    if len(full) != 1:
        failures.append(("socle-dim", len(full)))
    for i in range(1, kappa):
        m1 = by_twist.get(i)
        m2 = by_twist.get(kappa - i)
        if m1 is None and m2 is None:
            continue
        if m1 is None or m2 is None:
            failures.append(("unpaired", i))
            continue
        if B.multiply(m1, m2) != socle:
            failures.append(("degenerate", i))
    return PairingReport(not failures, si, st, failures)


@dataclass
class StructureReport:
    a: tuple
    ok: bool
    dim_ok: bool
    distinct_ok: bool
    socle_ok: bool
    window_ok: bool
    pairing_ok: bool
    details: dict = field(default_factory=dict)


def structure_report(a) -> StructureReport:
    """All exact structural checks of the algebra and its Hom tables."""
    a = Chain(a)
    B = ExtAlgebra(a)
    n = len(a)
    if n % 2 == 0:
        want = 1
        for i in range(0, n, 2):
            want *= a[i]
    else:
        want = 2
        for i in range(1, n, 2):
            want *= a[i]
    dim_ok = B.dim == want

    twists = [i for (i, _) in B.decomp]
    distinct_ok = len(set(twists)) == len(twists)

    kappa = dual_milnor(a.drop_last())
    d = chain_product(a)
    socle = B.socle()
    si, st = B.group.decompose(B._degree(socle))
    socle_ok = si == kappa % d and st == socle_degree(a)

    window_ok = all(not (kappa < i < d) for i in twists)

    pairing = perfect_pairing_check(B)

    ok = dim_ok and distinct_ok and socle_ok and window_ok and pairing.ok
    return StructureReport(
        tuple(a), ok, dim_ok, distinct_ok, socle_ok, window_ok, pairing.ok,
        details={
            "dim": B.dim,
            "expected_dim": want,
            "socle": B.monomial_name(socle),
            "socle_decomposition": [si, st],
            "pairing_failures": pairing.failures,
        },
    )
