"""Exact invariants of chain exponent vectors.

A chain vector a = (a_1, ..., a_n), all entries >= 2, encodes the chain
polynomial x_1^{a_1} x_2 + x_2^{a_2} x_3 + ... + x_n^{a_n}.  The empty
vector is a legal value and is the base case of every recursion below.
Everything here is exact: Python integers and fractions.Fraction only.
"""

from __future__ import annotations

from fractions import Fraction


class Chain(tuple):
    """Immutable chain vector; behaves as a tuple of ints, entries >= 2."""

    def __new__(cls, entries=()):
        vals = tuple(int(e) for e in entries)
        for e in vals:
            if e < 2:
                raise ValueError(f"chain entries must be >= 2, got {e}")
        return super().__new__(cls, vals)

    @property
    def n(self) -> int:
        return len(self)

    def reverse(self) -> "Chain":
        return Chain(self[::-1])

    def drop_first(self) -> "Chain":
        """The truncation (a_2, ..., a_n)."""
        if not self:
            raise ValueError("cannot truncate the empty chain")
        return Chain(self[1:])

    def drop_last(self) -> "Chain":
        """The truncation (a_1, ..., a_{n-1})."""
        if not self:
            raise ValueError("cannot truncate the empty chain")
        return Chain(self[:-1])

    def __repr__(self):
        return f"Chain{tuple(self)}"

    @staticmethod
    def parse(text: str) -> "Chain":
        """Parse '2,3,2' or 'empty' into a Chain."""
        text = text.strip()
        if text in ("empty", "()", ""):
            return Chain()
        return Chain(int(p) for p in text.split(",") if p.strip())


def chain_product(a) -> int:
    """d(a) = a_1 a_2 ... a_n, with d(empty) = 1."""
    p = 1
    for e in a:
        p *= e
    return p


def milnor_number(a) -> int:
    """mu(a), via mu(empty) = 1 and mu(a) = d(a) - mu(a_2, ..., a_n)."""
    d, mu = 1, 1
    for e in reversed(tuple(a)):
        d, mu = e * d, e * d - mu
    return mu


def dual_milnor(a) -> int:
    """mu of the reversed chain; satisfies mu'(a) = d(a) - mu'(a_1..a_{n-1})."""
    return milnor_number(tuple(a)[::-1])


def parity_product_sum(a, k: int) -> int:
    """alpha_k = d(a_1..a_k) + d(a_1..a_{k-2}) + ..., ending in 1 (k even)
    or a_1 (k odd); extended by alpha_0 = 1 and alpha_{-1} = 0."""
    a = tuple(a)
    if not -1 <= k <= len(a):
        raise ValueError(f"alpha index {k} out of range for n={len(a)}")
    total = 0
    j = k
    while j >= 0:
        total += chain_product(a[:j])
        j -= 2
    return total


def serre_shift(a) -> int:
    """m(a) = (-1)^n mu'(a) - 1 + mu(a_1) - mu(a_1,a_2) + ... -+ mu(a)."""
    a = tuple(a)
    n = len(a)
    total = (-1) ** n * dual_milnor(a) - 1
    for k in range(1, n + 1):
        total += (-1) ** (k - 1) * milnor_number(a[:k])
    return total


def socle_degree(a) -> int:
    """D(a) = n + 2 m(a_1..a_{n-1}): the cohomological degree of the socle."""
    a = tuple(a)
    if not a:
        raise ValueError("socle degree needs a nonempty chain")
    return len(a) + 2 * serre_shift(a[:-1])


def canonical_weights(a) -> list[Fraction]:
    """w_k = mu(a_{k+1}..a_n) / (a_k ... a_n), exact; satisfies
    a_k w_k + w_{k+1} = 1 for k < n and a_n w_n = 1."""
    a = tuple(a)
    if not a:
        raise ValueError("weights need a nonempty chain")
    return [
        Fraction(milnor_number(a[k + 1 :]), chain_product(a[k:]))
        for k in range(len(a))
    ]


def homogeneity_weights(a) -> list[int]:
    """Integer weights q_i = mu(a_{i+1}..a_n) * d(a_1..a_{i-1})."""
    a = tuple(a)
    if not a:
        raise ValueError("weights need a nonempty chain")
    return [milnor_number(a[i + 1 :]) * chain_product(a[:i]) for i in range(len(a))]


def winding_sum(a) -> int:
    """sum_{k=1..n} (-1)^{k-1} d(a_1..a_{k-1}); its absolute value equals
    mu'(a_1..a_{n-1}) = d(a) - mu'(a), with sign (-1)^{n-1} on all tested
    vectors (the sign is recorded, not normalized away)."""
    a = tuple(a)
    if not a:
        raise ValueError("winding sum needs a nonempty chain")
    return sum((-1) ** k * chain_product(a[:k]) for k in range(len(a)))
