"""Numerics for the critical family of a doubly perturbed chain fibration.

The fibration is g(z) = z_1 - s z_2 - t z_1^{a_1} z_2 - p(z_2..z_n) with p
the sign-adjusted chain polynomial of (a_2..a_n); the critical values of
the first-coordinate projection of a fiber g = y solve the plane curve

    c_a (s + t z^{a_1})^{d(-a)} = (z - y)^{mu(-a)},

where c_a is an exact positive rational eliminated from the critical-point
equations.  Roots split into small ones (|z| <= 1/2), localized in disk
sectors ("darts"), and large ones (|z| >= 2), localized in sectors at
infinity; nothing lands in the annulus between.  Everything here is
double-precision with residual certification; the constants are exact.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from .chain import Chain, chain_product, milnor_number


# ------------------------------ exact constants ------------------------------

def curve_constant(a):
    """(c_a, c', c''): the curve constant and its elimination by-products.

    c'' = mu(-a)/d(-a) relates z_2 to z_1 on the critical locus; c' is the
    coefficient in (s + t z_1^{a_1})^{mu(a_3..)} = c' z_2^{mu(a_2..)}; and
    c_a = c''^{mu(-a)} / c'.
    """
    a = Chain(a)
    n = len(a)
    if n < 2:
        raise ValueError("curve constant needs n >= 2")
    c = Fraction(1)
    for k in range(n - 1, 0, -1):
        # c_k = a_{k+1}^{mu(a_{k+2}..a_n)} / c_{k+1}, counted from the tail
        c = Fraction(a[k] ** milnor_number(a[k + 1 :])) / c
    c_prime = c
    mu_minus = milnor_number(a[1:])
    d_minus = chain_product(a[1:])
    c_dbl = Fraction(mu_minus, d_minus)
    c_a = c_dbl ** mu_minus / c_prime
    return c_a, c_prime, c_dbl


@dataclass
class FamilyParams:
    a1: int
    mu: int
    mu_minus: int
    d_minus: int
    c: float
    t: complex
    s: complex
    c_exact: Fraction | None = None
    chain: tuple | None = None

    def __post_init__(self):
        if self.mu + self.mu_minus != self.a1 * self.d_minus:
            raise ValueError("multiplicities must satisfy mu + mu_minus = a1*d_minus")
        if self.c <= 0:
            raise ValueError("the curve constant must be positive")


def chain_family(a, t, s) -> FamilyParams:
    a = Chain(a)
    c_a, _, _ = curve_constant(a)
    return FamilyParams(
        a1=a[0],
        mu=milnor_number(a),
        mu_minus=milnor_number(a[1:]),
        d_minus=chain_product(a[1:]),
        c=float(c_a),
        t=complex(t),
        s=complex(s),
        c_exact=c_a,
        chain=tuple(a),
    )


# ------------------------------ polynomial core ------------------------------

def _curve_coeffs(a1, d_minus, mu_minus, c, t, s, y=0.0):
    """Ascending coefficients of c (s + t z^{a1})^{d_minus} - (z - y)^{mu_minus}."""
    deg = max(a1 * d_minus, mu_minus)
    coef = np.zeros(deg + 1, dtype=complex)
    for k in range(d_minus + 1):
        coef[a1 * k] += c * comb(d_minus, k) * s ** (d_minus - k) * t**k
    for j in range(mu_minus + 1):
        coef[j] -= comb(mu_minus, j) * (-y) ** (mu_minus - j)
    return coef


def _poly_val(coef_asc, z):
    v = 0j
    for c in coef_asc[::-1]:
        v = v * z + c
    return v


def _rel_residual(coef_asc, z):
    num = abs(_poly_val(coef_asc, z))
    az = abs(z)
    scale = 0.0
    p = 1.0
    for c in coef_asc:
        scale += abs(c) * p
        p *= az
    return num / scale if scale else num


def _newton_polish(coef_asc, roots, iters=40):
    dcoef = np.array([k * coef_asc[k] for k in range(1, len(coef_asc))])
    out = []
    for z in roots:
        best = z
        best_res = _rel_residual(coef_asc, z)
        for _ in range(iters):
            dp = _poly_val(dcoef, z)
            if dp == 0:
                break
            z = z - _poly_val(coef_asc, z) / dp
            res = _rel_residual(coef_asc, z)
            if res < best_res:
                best, best_res = z, res
            if res < 1e-15:
                break
        out.append(best)
    return np.array(out)


def _solve_poly(coef_asc):
    coef = np.array(coef_asc, dtype=complex)
    # trim a vanishing head (degree drop, e.g. t = 0)
    top = len(coef) - 1
    scale = max(abs(c) for c in coef)
    while top > 0 and abs(coef[top]) <= 1e-300 * scale:
        top -= 1
    coef = coef[: top + 1]
    if top == 0:
        return np.array([])
    roots = np.roots(coef[::-1])
    return _newton_polish(coef, roots)


# --------------------------------- root scenes --------------------------------

@dataclass
class RootScene:
    params: FamilyParams
    roots: np.ndarray
    residuals: np.ndarray
    labels: list
    note: str = ""

    def count(self, label):
        return sum(1 for l in self.labels if l == label)


def _classify(z):
    az = abs(z)
    if az <= 0.5:
        return "small"
    if az >= 2.0:
        return "large"
    return "violation"


def solve_family(p: FamilyParams, residual_tol=1e-10) -> RootScene:
    """All roots of z^{mu_minus} = c (s + t z^{a1})^{d_minus}, classified.

    t = s = 0 degenerates to the root 0 with multiplicity mu_minus (plus
    infinity with multiplicity mu); t = 0 alone keeps the closed-form small
    roots (c s^{d_minus})^{1/mu_minus} times roots of unity.
    """
    note = ""
    if p.t == 0 and p.s == 0:
        roots = np.zeros(p.mu_minus, dtype=complex)
        note = f"degenerate: root 0 of multiplicity {p.mu_minus}, infinity of multiplicity {p.mu}"
        residuals = np.zeros(p.mu_minus)
        labels = ["small"] * p.mu_minus
        return RootScene(p, roots, residuals, labels, note)
    if p.t == 0:
        w = p.c * p.s**p.d_minus
        r = abs(w) ** (1.0 / p.mu_minus)
        base = cmath.phase(w) / p.mu_minus
        roots = np.array(
            [r * cmath.exp(1j * (base + 2 * math.pi * k / p.mu_minus)) for k in range(p.mu_minus)]
        )
        note = f"degree drop at t=0: {p.mu_minus} small roots, infinity of multiplicity {p.mu}"
    else:
        coef = _curve_coeffs(p.a1, p.d_minus, p.mu_minus, p.c, p.t, p.s, 0.0)
        roots = _solve_poly(coef)
    coef = _curve_coeffs(p.a1, p.d_minus, p.mu_minus, p.c, p.t, p.s, 0.0)
    residuals = np.array([_rel_residual(coef, z) for z in roots])
    if residuals.size and residuals.max() > residual_tol:
        note += f" residual {residuals.max():.2e} above tol {residual_tol:.2e};"
    order = sorted(range(len(roots)), key=lambda i: (abs(roots[i]), cmath.phase(roots[i])))
    roots = roots[order]
    residuals = residuals[order]
    labels = [_classify(z) for z in roots]
    return RootScene(p, roots, residuals, labels, note)


def _wrap(x):
    return (x + math.pi) % (2 * math.pi) - math.pi


@dataclass
class DartAssignment:
    kind: str
    sectors: int
    base_arg: float
    components: list
    achieved_radius: float
    achieved_phi: float
    ok: bool
    failures: list = field(default_factory=list)


def _assign(roots, sectors, base_arg, kind):
    components = []
    phi = 0.0
    failures = []
    seen = {}
    for z in roots:
        theta = cmath.phase(z)
        m = round((theta * sectors - base_arg) / (2 * math.pi)) % sectors
        center = (base_arg + 2 * math.pi * m) / sectors
        dev = abs(_wrap(theta - center))
        phi = max(phi, dev)
        if dev >= math.pi / sectors:
            failures.append(("outside-sector", z))
        if m in seen:
            failures.append(("component-collision", m))
        seen[m] = z
        components.append(m)
    if len(seen) != sectors:
        failures.append(("empty-components", sectors - len(seen)))
    if kind == "small":
        radius = max((abs(z) for z in roots), default=0.0)
    else:
        radius = min((abs(z) for z in roots), default=math.inf)
    return DartAssignment(kind, sectors, base_arg, components, radius, phi, not failures, failures)


def dart_report(scene: RootScene):
    """Assign small roots to disk-sector components and large roots to
    sectors at infinity; one root per component is required."""
    p = scene.params
    smalls = [z for z, l in zip(scene.roots, scene.labels) if l == "small"]
    larges = [z for z, l in zip(scene.roots, scene.labels) if l == "large"]
    gamma = cmath.phase(p.s**p.d_minus) % (2 * math.pi) if p.s else 0.0
    small = _assign(smalls, p.mu_minus, gamma, "small")
    gamma_inf = (-cmath.phase(p.t**p.d_minus)) % (2 * math.pi) if p.t else 0.0
    large = _assign(larges, p.mu, gamma_inf, "large")
    return small, large


# ------------------------- curve, lifting, Hessians -------------------------

def critical_curve_roots(a, t, s, y):
    """Roots z_1 of c_a (s + t z_1^{a_1})^{d(-a)} = (z_1 - y)^{mu(-a)}."""
    p = chain_family(a, t, s)
    coef = _curve_coeffs(p.a1, p.d_minus, p.mu_minus, p.c, p.t, p.s, complex(y))
    return _solve_poly(coef)


def _tail_poly(b, w):
    """Sign-adjusted chain polynomial sum_j (-1)^j w_j^{b_j} w_{j+1}, w_{m+1}=1."""
    total = 0j
    m = len(b)
    for j in range(m):
        nxt = w[j + 1] if j + 1 < m else 1.0
        total += (-1) ** (j + 1) * w[j] ** b[j] * nxt
    return total


def _tail_grad(b, w):
    m = len(b)
    g = [0j] * m
    for j in range(m):
        nxt = w[j + 1] if j + 1 < m else 1.0
        g[j] += (-1) ** (j + 1) * b[j] * w[j] ** (b[j] - 1) * nxt
        if j + 1 < m:
            g[j + 1] += (-1) ** (j + 1) * w[j] ** b[j]
    return g


def _tail_hessian(b, w):
    m = len(b)
    H = np.zeros((m, m), dtype=complex)
    for j in range(m):
        nxt = w[j + 1] if j + 1 < m else 1.0
        H[j, j] += (-1) ** (j + 1) * b[j] * (b[j] - 1) * w[j] ** (b[j] - 2) * nxt
        if j + 1 < m:
            H[j, j + 1] += (-1) ** (j + 1) * b[j] * w[j] ** (b[j] - 1)
            H[j + 1, j] += (-1) ** (j + 1) * b[j] * w[j] ** (b[j] - 1)
    return H


def eval_g(a, t, s, z):
    """g(z) = z_1 - s z_2 - t z_1^{a_1} z_2 - p(z_2..z_n)."""
    a = Chain(a)
    return z[0] - s * z[1] - t * z[0] ** a[0] * z[1] - _tail_poly(a[1:], z[1:])


def _grad_g(a, t, s, z):
    tail = _tail_grad(a[1:], z[1:])
    grad = [1 - a[0] * t * z[0] ** (a[0] - 1) * z[1]]
    grad.append(-s - t * z[0] ** a[0] - tail[0])
    grad.extend(-tail[j] for j in range(1, len(a) - 1))
    return grad


def _polish_critical_point(a, t, s, z, y, iters=30):
    """Newton on the full system (g - y, d_2 g, ..., d_n g)."""
    n = len(a)
    z = np.array(z, dtype=complex)

    def system(zv):
        F = np.zeros(n, dtype=complex)
        grad = _grad_g(a, t, s, zv)
        F[0] = eval_g(a, t, s, zv) - y
        F[1:] = grad[1:]
        J = np.zeros((n, n), dtype=complex)
        J[0, :] = grad
        Ht = _tail_hessian(a[1:], zv[1:])
        J[1:, 1:] = -Ht
        J[1, 0] = -a[0] * t * zv[0] ** (a[0] - 1)
        return F, J

    best = z.copy()
    best_res = np.abs(system(z)[0]).max()
    for _ in range(iters):
        F, J = system(z)
        try:
            step = np.linalg.solve(J, F)
        except np.linalg.LinAlgError:
            break
        z = z - step
        res = np.abs(system(z)[0]).max()
        if res < best_res:
            best, best_res = z.copy(), res
        if res < 1e-14:
            break
    return list(best)


@dataclass
class Lift:
    point: list
    g_residual: float
    lagrange_residual: float
    hessian_det: complex
    hessian_det_scaled: float
    hessian_sign_ratio: complex


def lift_critical_point(a, t, s, z1, y) -> Lift:
    """Unique critical point of the fiber projection over (y, z1) on the
    curve; errors on the excluded locus s + t z1^{a_1} = 0."""
    a = Chain(a)
    n = len(a)
    if n < 2:
        raise ValueError("lifting needs n >= 2")
    _, _, c_dbl = curve_constant(a)
    u = s + t * z1 ** a[0]
    if abs(u) < 1e-14 * (abs(s) + abs(t) * abs(z1) ** a[0] + 1e-300):
        raise ValueError("point lies on the excluded locus s + t z1^{a1} = 0")
    z = [complex(z1), (z1 - y) / (float(c_dbl) * u)]
    if n >= 3:
        z.append(u / (a[1] * z[1] ** (a[1] - 1)))
    for k in range(2, n - 1):
        # z_{k+2} = z_k^{a_k} / (a_{k+1} z_{k+1}^{a_{k+1}-1}), chain indices
        z.append(z[k - 1] ** a[k - 1] / (a[k] * z[k] ** (a[k] - 1)))
    z = _polish_critical_point(a, t, s, z, y)
    gval = eval_g(a, t, s, z)
    g_res = abs(gval - y) / (1.0 + abs(y))
    grad = _grad_g(a, t, s, z)
    lam = 1.0 / grad[0]
    lag_res = abs(lam) * math.sqrt(sum(abs(v) ** 2 for v in grad[1:]))
    H = -_tail_hessian(a[1:], z[1:])
    # second derivatives of g in z_2..z_n equal minus those of the tail
    det = np.linalg.det(H)
    scale = 1.0
    for row in H:
        scale *= max(np.abs(row).max(), 1e-300)
    m = n - 1
    ref = (-1) ** (m * (m + 1) // 2) * z[1] ** (a[1] - 2)
    for j in range(2, n):
        ref *= z[j] ** (a[j] - 1)
    # the tail Hessian itself obeys the closed-form determinant identity
    sign_ratio = np.linalg.det(_tail_hessian(a[1:], z[1:])) / ref if ref != 0 else complex("nan")
    return Lift(z, g_res, lag_res, det, abs(det) / scale, sign_ratio)


def g_critical_points(a, t, s=0.0):
    """Critical points and values of g for s = 0: z_1^{mu(a)} =
    c'/(a_1^{mu(-a)} t^{d(-a)}), lifted through the chain."""
    a = Chain(a)
    n = len(a)
    if n < 2:
        raise ValueError("needs n >= 2")
    if s != 0:
        raise ValueError("closed form only at s = 0")
    _, c_prime, _ = curve_constant(a)
    mu = milnor_number(a)
    mu_m = milnor_number(a[1:])
    d_m = chain_product(a[1:])
    w = float(c_prime) / (a[0] ** mu_m * t**d_m)
    r = abs(w) ** (1.0 / mu)
    base = cmath.phase(complex(w)) / mu
    points = []
    values = []
    for k in range(mu):
        z1 = r * cmath.exp(1j * (base + 2 * math.pi * k / mu))
        z = [z1, 1.0 / (a[0] * t * z1 ** (a[0] - 1))]
        u = s + t * z1 ** a[0]
        if n >= 3:
            z.append(u / (a[1] * z[1] ** (a[1] - 1)))
        for j in range(2, n - 1):
            z.append(z[j - 1] ** a[j - 1] / (a[j] * z[j] ** (a[j] - 1)))
        points.append(z)
        values.append(eval_g(a, t, s, z))
    return points, np.array(values)


# ------------------------------- equivariance -------------------------------

def rotation_equivariance(a, t, s) -> float:
    """Max deviation between the rotated root multiset and the root
    multiset at the rotated parameter e^{2 pi i a1/mu} s."""
    a = Chain(a)
    mu = milnor_number(a)
    theta = 2 * math.pi * a[0] / mu
    rho = cmath.exp(2j * math.pi / mu)
    before = solve_family(chain_family(a, t, s)).roots
    after = list(solve_family(chain_family(a, t, s * cmath.exp(1j * theta))).roots)
    dev = 0.0
    for z in before:
        target = rho * z
        j = min(range(len(after)), key=lambda i: abs(after[i] - target))
        dev = max(dev, abs(after[j] - target))
        after.pop(j)
    return dev


# --------------------------------- coil paths ---------------------------------

@dataclass
class PathPlan:
    k: int
    t: float
    points: list
    endpoint_small: complex
    endpoint_large: complex
    small_component: int
    large_component: int
    margin: float


def _coil_angle(rho, lo, hi):
    u = (rho - 0.5) / 1.5
    return lo + (hi - lo) * (3 * u * u - 2 * u * u * u)


def coil_paths(a, k, t, s=1e-3, samples=160) -> PathPlan:
    """Polyline for the k-th matching path: dart connector, radial piece,
    k-fold coil across the annulus, radial piece, dart connector."""
    a = Chain(a)
    p = chain_family(a, t, s)
    if not 0 <= k < p.mu:
        raise ValueError(f"k must lie in [0, {p.mu})")
    scene = solve_family(p)
    small, large = dart_report(scene)
    smalls = [z for z, l in zip(scene.roots, scene.labels) if l == "small"]
    larges = [z for z, l in zip(scene.roots, scene.labels) if l == "large"]
    m_small = (-k) % p.mu_minus
    m_large = k % p.mu
    try:
        b1 = smalls[small.components.index(m_small)]
        b2 = larges[large.components.index(m_large)]
    except ValueError as exc:
        raise RuntimeError(
            f"no critical value in the expected dart component ({exc})"
        )
    theta1 = -2 * math.pi * k / p.mu_minus
    theta2 = 2 * math.pi * k / p.mu
    pts = []
    # connector inside the small dart: constant-radius arc to the center ray
    a1 = theta1 + _wrap(cmath.phase(b1) - theta1)
    for u in np.linspace(0.0, 1.0, 16):
        ang = a1 + (theta1 - a1) * u
        pts.append(abs(b1) * cmath.exp(1j * ang))
    # radial out to the annulus
    for r in np.linspace(abs(b1), 0.5, 16)[1:]:
        pts.append(r * cmath.exp(1j * theta1))
    # coil across the annulus
    lo, hi = -2 * math.pi / p.mu_minus, 2 * math.pi / p.mu
    for r in np.linspace(0.5, 2.0, samples)[1:]:
        pts.append(r * cmath.exp(1j * k * _coil_angle(r, lo, hi)))
    # radial out to the large dart, then arc to the critical value
    for r in np.linspace(2.0, abs(b2), 16)[1:]:
        pts.append(r * cmath.exp(1j * theta2))
    a2 = theta2 + _wrap(cmath.phase(b2) - theta2)
    for u in np.linspace(0.0, 1.0, 16)[1:]:
        ang = theta2 + (a2 - theta2) * u
        pts.append(abs(b2) * cmath.exp(1j * ang))
    pts[0] = b1
    pts[-1] = b2
    crit = list(scene.roots)
    margin = math.inf
    for z in pts[1:-1]:
        for c in crit:
            if c == b1 or c == b2:
                continue
            margin = min(margin, abs(z - c))
    # interior proximity to the endpoints themselves only counts away from the ends
    for z in pts[20:-20]:
        margin = min(margin, abs(z - b1), abs(z - b2))
    return PathPlan(k, float(abs(t)), pts, b1, b2, m_small, m_large, margin)


# ---------------------------- matching-path merge ----------------------------

@dataclass
class MergeReport:
    a: tuple
    t: float
    s: float
    two_positive_real: bool
    y_merge: float
    disc_value: float
    rel_err: float
    ok: bool
    note: str = ""


def _positive_real(roots, atol=1e-8):
    return sorted(
        z.real for z in roots if abs(z.imag) <= atol * (1 + abs(z)) and z.real > atol
    )


def _nearest_pair(roots, pair):
    rs = list(roots)
    p1 = min(rs, key=lambda z: abs(z - pair[0]))
    rs.remove(p1)
    p2 = min(rs, key=lambda z: abs(z - pair[1]))
    return p1, p2


def discriminant_roots(a, t_exact: Fraction, s_exact: Fraction):
    """Real positive roots in y of the z-discriminant of the critical
    curve, computed exactly and solved numerically."""
    import sympy as sp

    a = Chain(a)
    ca, _, _ = curve_constant(a)
    z, y = sp.symbols("z y")
    F = sp.Rational(ca.numerator, ca.denominator) * (
        sp.Rational(s_exact.numerator, s_exact.denominator)
        + sp.Rational(t_exact.numerator, t_exact.denominator) * z ** a[0]
    ) ** chain_product(a[1:]) - (z - y) ** milnor_number(a[1:])
    disc = sp.discriminant(sp.expand(F), z)
    poly = sp.Poly(disc, y)
    coeffs = [float(c) for c in poly.all_coeffs()]
    roots = np.roots(coeffs)
    return _positive_real(roots, atol=1e-7)


def merge_report(a, t="1e-3", s="1e-3", rel_tol=1e-6, y_cap=1e9) -> MergeReport:
    """Track the two positive real critical values of the fiber projection
    as the fiber parameter y grows; they merge at a critical value of g,
    cross-checked against the exact curve discriminant."""
    a = Chain(a)
    t_exact, s_exact = Fraction(str(t)), Fraction(str(s))
    tf, sf = float(t_exact), float(s_exact)
    p = chain_family(a, tf, sf)

    def roots_at(yv):
        coef = _curve_coeffs(p.a1, p.d_minus, p.mu_minus, p.c, p.t, p.s, complex(yv))
        return _solve_poly(coef)

    r0 = roots_at(0.0)
    pos = _positive_real(r0)
    two = len(pos) == 2
    if not two:
        return MergeReport(tuple(a), tf, sf, False, math.nan, math.nan, math.nan, False,
                           note=f"found {len(pos)} positive real roots at y=0")
    pair = (complex(pos[0]), complex(pos[1]))

    def is_real_pair(yv, guess):
        p1, p2 = _nearest_pair(roots_at(yv), guess)
        realish = all(abs(q.imag) <= 1e-9 * (1 + abs(q)) for q in (p1, p2))
        return realish, (p1, p2)

    y = 0.0
    dy = max(0.1 * (pair[1].real - pair[0].real), 1e-6)
    y_hi = None
    while y < y_cap:
        ok, new_pair = is_real_pair(y + dy, pair)
        if ok and abs(new_pair[0] - new_pair[1]) > 1e-9:
            y += dy
            pair = new_pair
            gap = abs(pair[0] - pair[1])
            dy = max(min(2 * dy, 0.25 * gap), 1e-12)
        else:
            if dy <= 1e-12 * max(1.0, y):
                y_hi = y + dy
                break
            dy /= 2
    if y_hi is None:
        return MergeReport(tuple(a), tf, sf, True, math.nan, math.nan, math.nan, False,
                           note="no merge found below the cap")
    lo, hi = y, y_hi
    for _ in range(200):
        if hi - lo <= 1e-12 * max(1.0, hi):
            break
        mid = 0.5 * (lo + hi)
        ok, mid_pair = is_real_pair(mid, pair)
        if ok:
            lo, pair = mid, mid_pair
        else:
            hi = mid
    y_star = 0.5 * (lo + hi)
    disc = discriminant_roots(a, t_exact, s_exact)
    if not disc:
        return MergeReport(tuple(a), tf, sf, True, y_star, math.nan, math.nan, False,
                           note="discriminant has no positive real root")
    b = min(disc, key=lambda v: abs(v - y_star))
    rel = abs(y_star - b) / abs(b)
    return MergeReport(tuple(a), tf, sf, True, y_star, b, rel, rel < rel_tol)


def lifts_at_zero(a, t, s):
    """Lift every critical value of the fiber-over-zero projection."""
    roots = critical_curve_roots(a, t, s, 0.0)
    return [lift_critical_point(a, t, s, z, 0.0) for z in roots]
