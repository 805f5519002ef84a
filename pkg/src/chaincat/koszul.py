"""Graded Koszul matrix factorizations as an independent Ext oracle.

A factorization of a potential p = sum_v v * q_v over a monomial set V is
the exterior algebra on symbols e_v with differential
d = sum_v (v * contraction_v + q_v * wedge_v); the sign convention is the
one that makes d^2 = p * id, and that identity is asserted symbolically at
construction time.  In the extended grading the differential has degree T,
so a factorization is a T-periodic complex; graded Homs into the
stabilization of a variable-generated ideal are computed by restricting
the dual complex to the vanishing locus of those variables and taking
degreewise cohomology over Q.  Degree enumeration terminates because the
canonical weights of the variables are positive; the reported window is
certified below by weight positivity and above by the Serre twist.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor

from .chain import Chain, chain_product, parity_product_sum
from .grading import ExtendedGrading, GradingGroup, GroupElement, extended_grading


# -- small polynomial-dict helpers (exponent tuple -> integer coefficient) --

def _poly_scale(p, c):
    return {e: c * v for e, v in p.items()} if c else {}


def _poly_mul(p, q):
    out = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            v = out.get(e, 0) + c1 * c2
            if v:
                out[e] = v
            elif e in out:
                del out[e]
    return out


def _poly_accum(acc, p, c=1):
    for e, v in p.items():
        w = acc.get(e, 0) + c * v
        if w:
            acc[e] = w
        elif e in acc:
            del acc[e]


def _poly_restrict(p, killed):
    return {
        e: v for e, v in p.items() if not any(e[i] for i in killed)
    }


@dataclass(frozen=True)
class PotentialRing:
    """Ambient graded polynomial data: variables, their degrees, the
    potential, and (for chain rings) positive rational weights."""

    var_names: tuple
    var_degrees: tuple
    potential: dict
    group: GradingGroup
    var_weights: tuple | None = None
    lambda_weights: tuple | None = None

    @property
    def nvars(self) -> int:
        return len(self.var_names)

    def monomial_degree(self, exp) -> GroupElement:
        g = self.group.zero
        for e, d in zip(exp, self.var_degrees):
            if e:
                g = g + d * e
        return g


def chain_ring(a) -> PotentialRing:
    """x_1..x_n with the chain potential, graded by the extended group."""
    a = Chain(a)
    n = len(a)
    if n < 1:
        raise ValueError("chain ring needs a nonempty chain")
    group = extended_grading(a)
    degs = tuple(group.gen(f"x{i}") for i in range(1, n + 1))
    pot = {}
    for i in range(n):
        exp = [0] * n
        exp[i] = a[i]
        if i + 1 < n:
            exp[i + 1] += 1
        pot[tuple(exp)] = 1
    weights = tuple(group._weights[:n])
    return PotentialRing((tuple(f"x{i}" for i in range(1, n + 1))), degs, pot, group, weights)


def vgit_weights(a) -> list[int]:
    """One-parameter-subgroup weights c_1..c_{n+1} leaving the extended
    potential invariant: alternating partial products, with the last two
    opposite."""
    a = Chain(a)
    n = len(a)
    if n < 1:
        raise ValueError("weights need a nonempty chain")
    sign0 = 1 if n % 2 == 0 else -1
    cs = [sign0 * (-1) ** k * chain_product(a[:k]) for k in range(n)]
    cs.append(chain_product(a[:-1]))
    return cs


def vgit_ring(a) -> PotentialRing:
    """x_1..x_{n+1} with potential x_1^{a_1}x_2 + ... + x_{n-1}^{a_{n-1}}x_n
    + x_n^{a_n} x_{n+1}^{a_n}, maximally graded and extended by T."""
    a = Chain(a)
    n = len(a)
    names = tuple(f"x{i}" for i in range(1, n + 2)) + ("p", "T")
    rels = []
    for i in range(n - 1):
        row = [0] * (n + 3)
        row[i] = a[i]
        row[i + 1] += 1
        row[n + 1] = -1
        rels.append(row)
    row = [0] * (n + 3)
    row[n - 1] = a[-1]
    row[n] = a[-1]
    row[n + 1] = -1
    rels.append(row)
    trow = [0] * (n + 3)
    trow[n + 2] = 2
    trow[n + 1] = -1
    rels.append(trow)
    group = GradingGroup(names, rels)
    degs = tuple(group.gen(f"x{i}") for i in range(1, n + 2))
    pot = {}
    for i in range(n - 1):
        exp = [0] * (n + 1)
        exp[i] = a[i]
        exp[i + 1] += 1
        pot[tuple(exp)] = 1
    exp = [0] * (n + 1)
    exp[n - 1] = a[-1]
    exp[n] = a[-1]
    pot[tuple(exp)] = 1
    return PotentialRing(names[: n + 1], degs, pot, group,
                         None, tuple(vgit_weights(a)))


class KoszulMF:
    """Koszul factorization of the ring potential on a monomial regular
    sequence, with an optional grading twist."""

    def __init__(self, ring: PotentialRing, gen_monomials, twist: GroupElement | None = None):
        self.ring = ring
        self.gens = tuple(tuple(g) for g in gen_monomials)
        self.twist = twist if twist is not None else ring.group.zero
        m = len(self.gens)
        self.m = m
        # cofactors: assign every potential term to the first dividing generator
        cof = [dict() for _ in range(m)]
        for exp, coeff in ring.potential.items():
            for j, g in enumerate(self.gens):
                if all(x >= y for x, y in zip(exp, g)):
                    rest = tuple(x - y for x, y in zip(exp, g))
                    cof[j][rest] = cof[j].get(rest, 0) + coeff
                    break
            else:
                raise ValueError(
                    "potential has a term outside the ideal of the generators"
                )
        self.cofactors = tuple(cof)
        self._gen_elem_deg = tuple(
            ring.monomial_degree(g) - ring.group.gen("T") for g in self.gens
        )
        self.columns = self._build_columns()
        self._assert_square_is_potential()

    def _build_columns(self):
        cols = {}
        for B in range(1 << self.m):
            entries = []
            for j in range(self.m):
                bit = 1 << j
                sign = -1 if bin(B & (bit - 1)).count("1") % 2 else 1
                if B & bit:
                    entries.append((B & ~bit, {self.gens[j]: sign}))
                else:
                    q = _poly_scale(self.cofactors[j], sign)
                    if q:
                        entries.append((B | bit, q))
            cols[B] = entries
        return cols

    def _assert_square_is_potential(self):
        for B in range(1 << self.m):
            out = {}
            for A, p1 in self.columns[B]:
                for C, p2 in self.columns[A]:
                    _poly_accum(out.setdefault(C, {}), _poly_mul(p2, p1))
            for C, poly in out.items():
                want = self.ring.potential if C == B else {}
                if poly != want:
                    raise RuntimeError("Koszul square is not the potential")

    def module_degree(self, mask: int) -> GroupElement:
        """Degree of the basis symbol e_A after the twist."""
        g = self.ring.group.zero
        for j in range(self.m):
            if mask & (1 << j):
                g = g + self._gen_elem_deg[j]
        return g - self.twist

    def variable_support(self):
        """Indices of the variables generating the ideal, if all generators
        are single variables; None otherwise."""
        support = []
        for g in self.gens:
            nz = [i for i, e in enumerate(g) if e]
            if len(nz) != 1 or g[nz[0]] != 1:
                return None
            support.append(nz[0])
        return support

    def restriction_weights(self) -> list[int]:
        """One-parameter-subgroup weights of the restriction to the origin:
        subset sums of generator weights, shifted by the twist."""
        cs = self.ring.lambda_weights
        if cs is None:
            raise ValueError("ring carries no one-parameter-subgroup weights")
        gw = [sum(c * e for c, e in zip(cs, g)) for g in self.gens]
        shift = -sum(
            c * coord for c, coord in zip(cs, self.twist.coords[: len(cs)])
        )
        sums = []
        for A in range(1 << self.m):
            sums.append(shift + sum(w for j, w in enumerate(gw) if A & (1 << j)))
        return sorted(sums)


def stab(ring: PotentialRing, gen_monomials, twist: GroupElement | None = None) -> KoszulMF:
    return KoszulMF(ring, gen_monomials, twist)


def object_E(a, i: int = 0) -> KoszulMF:
    """stab(x_2, x_4, ..., x_n) for even n, stab(x_1, x_3, ..., x_n) for
    odd n, twisted by i*tau."""
    a = Chain(a)
    ring = chain_ring(a)
    n = len(a)
    start = 2 if n % 2 == 0 else 1
    gens = []
    for k in range(start, n + 1, 2):
        e = [0] * n
        e[k - 1] = 1
        gens.append(tuple(e))
    return stab(ring, gens, ring.group.twist(i))


def object_F(a, i: int = 0) -> KoszulMF:
    """stab(x_1, x_3, ..., x_{n-1}, x_n) for even n, stab(x_2, x_4, ...,
    x_{n-1}, x_n) for odd n, twisted by i*tau."""
    a = Chain(a)
    ring = chain_ring(a)
    n = len(a)
    start = 1 if n % 2 == 0 else 2
    idxs = list(range(start, n, 2)) + [n]
    gens = []
    for k in idxs:
        e = [0] * n
        e[k - 1] = 1
        gens.append(tuple(e))
    return stab(ring, gens, ring.group.twist(i))


def window_object(a, i: int) -> KoszulMF:
    """The window representative stab(..., x_n x_{n+1}) over the extended
    potential, twisted by -i xbar_1 (even n) or +i xbar_1 (odd n)."""
    a = Chain(a)
    ring = vgit_ring(a)
    n = len(a)
    start = 1 if n % 2 == 0 else 2
    gens = []
    for k in range(start, n, 2):
        e = [0] * (n + 1)
        e[k - 1] = 1
        gens.append(tuple(e))
    e = [0] * (n + 1)
    e[n - 1] = 1
    e[n] = 1
    gens.append(tuple(e))
    sign = -1 if n % 2 == 0 else 1
    return stab(ring, gens, ring.group.gen("x1") * (sign * i))


def window_intervals(a):
    """(I-, I+) as inclusive integer intervals [0, len]."""
    a = Chain(a)
    n = len(a)
    iminus = (0, parity_product_sum(a, n - 1) - 1)
    iplus = (0, chain_product(a[:-1]) + parity_product_sum(a, n - 2) - 1)
    return iminus, iplus


def window_check(a, M: KoszulMF, which: str) -> bool:
    """True iff all restriction-to-origin weights of M lie in the interval."""
    iminus, iplus = window_intervals(a)
    lo, hi = {"I-": iminus, "I+": iplus}[which]
    return all(lo <= w <= hi for w in M.restriction_weights())


# ----------------------------- Ext computation -----------------------------

def _rank(rows) -> int:
    """Rank over Q of a small integer matrix given as list of lists."""
    mat = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    col = 0
    for col in range(ncols):
        piv = None
        for r in range(rank, len(mat)):
            if mat[r][col]:
                piv = r
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        prow = mat[rank]
        inv = 1 / prow[col]
        for r in range(rank + 1, len(mat)):
            if mat[r][col]:
                f = mat[r][col] * inv
                mat[r] = [x - f * y for x, y in zip(mat[r], prow)]
        rank += 1
    return rank


@dataclass
class ExtTable:
    """Graded dimensions dim Hom^t(src, dst(i*tau)) over a window of t per
    twist i; the low edge is certified by weight positivity, the high edge
    by the Serre twist."""

    entries: dict
    windows: dict
    conclusive: bool
    notes: list = field(default_factory=list)

    def nonzero(self):
        return {
            i: {t: d for t, d in ts.items() if d}
            for i, ts in self.entries.items()
            if any(ts.values())
        }


class _DualComplex:
    """Dual of a Koszul factorization restricted to the zero locus of the
    destination's variables; supports degreewise cohomology."""

    def __init__(self, src: KoszulMF, killed):
        self.ring = src.ring
        self.group: ExtendedGrading = src.ring.group
        if not isinstance(self.group, ExtendedGrading):
            raise TypeError("Ext computation needs the chain grading")
        self.killed = frozenset(killed)
        self.live = [i for i in range(src.ring.nvars) if i not in self.killed]
        self.src = src
        self.dual_degrees = {
            A: -src.module_degree(A) for A in range(1 << src.m)
        }
        # transposed, restricted differential: rows of the original columns
        dual_cols = {A: [] for A in range(1 << src.m)}
        for A in range(1 << src.m):
            for B, poly in src.columns[A]:
                p = _poly_restrict(poly, self.killed)
                if p:
                    dual_cols[B].append((A, p))
        self.dual_cols = dual_cols
        self._monomial_cache = {}
        self._basis_cache = {}

    def _monomials(self, target: GroupElement):
        key = self.group.canon(target.coords)
        if key in self._monomial_cache:
            return self._monomial_cache[key]
        wts = self.group._weights
        budget = self.group.weight(target)
        out = []
        nv = self.ring.nvars
        exp = [0] * nv

        def dfs(pos, rem):
            if rem < 0:
                return
            if pos == len(self.live):
                if rem == 0:
                    g = self.ring.monomial_degree(exp)
                    if (g - target).is_zero():
                        out.append(tuple(exp))
                return
            i = self.live[pos]
            w = wts[i]
            top = int(rem / w)
            for e in range(top + 1):
                exp[i] = e
                dfs(pos + 1, rem - e * w)
            exp[i] = 0

        if budget >= 0:
            dfs(0, budget)
        self._monomial_cache[key] = out
        return out

    def basis(self, ell: GroupElement):
        key = self.group.canon(ell.coords)
        if key in self._basis_cache:
            return self._basis_cache[key]
        items = []
        for A in range(1 << self.src.m):
            for mono in self._monomials(ell - self.dual_degrees[A]):
                items.append((A, mono))
        self._basis_cache[key] = items
        return items

    def _matrix(self, src_basis, dst_index):
        rows = []
        for A, mono in src_basis:
            out = {}
            for C, poly in self.dual_cols[A]:
                for e, coeff in poly.items():
                    tgt = (C, tuple(x + y for x, y in zip(e, mono)))
                    out[tgt] = out.get(tgt, 0) + coeff
            row = [0] * len(dst_index)
            for tgt, coeff in out.items():
                if coeff:
                    row[dst_index[tgt]] = coeff
            rows.append(row)
        return rows

    def cohomology_dim(self, ell: GroupElement) -> int:
        T = self.group.T
        here = self.basis(ell)
        if not here:
            return 0
        below = self.basis(ell - T)
        above = self.basis(ell + T)
        idx_here = {b: k for k, b in enumerate(here)}
        rank_in = 0
        if below:
            rank_in = _rank(self._matrix(below, idx_here))
        rank_out = 0
        if above:
            idx_above = {b: k for k, b in enumerate(above)}
            rank_out = _rank(self._matrix(here, idx_above))
        return len(here) - rank_in - rank_out


def ext_dim(src: KoszulMF, dst: KoszulMF, ell: GroupElement) -> int:
    """dim Hom^0(src, dst(ell)) for a variable-generated dst."""
    support = dst.variable_support()
    if support is None:
        raise ValueError("destination ideal must be variable-generated")
    cx = _DualComplex(src, support)
    return cx.cohomology_dim(dst.twist + ell)


def ext_table(src: KoszulMF, dst: KoszulMF, twists, t_range=None) -> ExtTable:
    """dim Hom^t(src, dst(i*tau)) for i in twists, t over a certified or
    user-supplied window."""
    support = dst.variable_support()
    if support is None:
        raise ValueError("destination ideal must be variable-generated")
    group = src.ring.group
    cx = _DualComplex(src, support)

    min_dual_w = min(group.weight(cx.dual_degrees[A]) for A in cx.dual_degrees)
    src_support = src.variable_support()
    serre_ok = src_support is not None
    notes = []
    if serre_ok:
        m2 = min(
            group.weight(-(dst.module_degree(B) + dst.twist))
            for B in range(1 << dst.m)
        )
        w_top = (
            group.weight(group.serre_element())
            + group.weight(src.twist)
            - group.weight(dst.twist)
        )
    elif t_range is None:
        raise ValueError(
            "source is not variable-generated: pass an explicit t_range"
        )

    entries = {}
    windows = {}
    conclusive = True
    for i in twists:
        base = dst.twist + group.twist(i)
        wbase = group.weight(base)
        t_lo_cert = ceil(2 * (min_dual_w - wbase))
        if serre_ok:
            t_hi_cert = floor(2 * (w_top - group.weight(group.twist(i)) - m2))
        else:
            t_hi_cert = None
        if t_range is not None:
            t_lo, t_hi = t_range
            if t_lo > t_lo_cert or (t_hi_cert is not None and t_hi < t_hi_cert):
                conclusive = False
                notes.append(
                    f"twist {i}: window [{t_lo},{t_hi}] narrower than "
                    f"certified [{t_lo_cert},{t_hi_cert}]"
                )
        else:
            t_lo, t_hi = t_lo_cert, t_hi_cert
        windows[i] = (t_lo, t_hi)
        row = {}
        for t in range(t_lo, t_hi + 1):
            row[t] = cx.cohomology_dim(base + group.shift(t))
        entries[i] = row
    return ExtTable(entries, windows, conclusive, notes)
