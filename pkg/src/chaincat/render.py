"""Plain-text renderers: CSV root listings and standalone SVG scenes."""

from __future__ import annotations

import cmath
import math

from .rootlab import DartAssignment, PathPlan, RootScene, dart_report


def scene_csv(scene: RootScene) -> str:
    small, large = dart_report(scene)
    comp = {}
    si = li = 0
    for z, label in zip(scene.roots, scene.labels):
        if label == "small":
            comp[complex(z)] = small.components[si]
            si += 1
        elif label == "large":
            comp[complex(z)] = large.components[li]
            li += 1
    lines = ["re,im,class,dart,residual"]
    for z, label, res in zip(scene.roots, scene.labels, scene.residuals):
        dart = comp.get(complex(z), "")
        lines.append(f"{z.real:.15g},{z.imag:.15g},{label},{dart},{res:.3e}")
    return "\n".join(lines) + "\n"


def _svg_header(R):
    return (
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{-R:.3f} {-R:.3f} {2*R:.3f} {2*R:.3f}" '
        'width="640" height="640">\n'
        f'<rect x="{-R:.3f}" y="{-R:.3f}" width="{2*R:.3f}" height="{2*R:.3f}" fill="white"/>\n'
    )


def _wedge(r0, r1, center, half, color):
    # sector between angles center +- half, radii r0..r1 (y flipped for svg)
    a0, a1 = center - half, center + half
    p0 = (r0 * math.cos(a0), -r0 * math.sin(a0))
    p1 = (r1 * math.cos(a0), -r1 * math.sin(a0))
    p2 = (r1 * math.cos(a1), -r1 * math.sin(a1))
    p3 = (r0 * math.cos(a1), -r0 * math.sin(a1))
    large = 0
    return (
        f'<path d="M {p0[0]:.4f} {p0[1]:.4f} L {p1[0]:.4f} {p1[1]:.4f} '
        f'A {r1:.4f} {r1:.4f} 0 {large} 0 {p2[0]:.4f} {p2[1]:.4f} '
        f'L {p3[0]:.4f} {p3[1]:.4f} '
        f'A {r0:.4f} {r0:.4f} 0 {large} 1 {p0[0]:.4f} {p0[1]:.4f} Z" '
        f'fill="{color}" fill-opacity="0.25" stroke="none"/>\n'
    )


def _dart_wedges(assign: DartAssignment, r_lo, r_hi, color):
    out = []
    half = max(assign.achieved_phi * 1.2, 0.04)
    for m in range(assign.sectors):
        center = (assign.base_arg + 2 * math.pi * m) / assign.sectors
        out.append(_wedge(r_lo, r_hi, center, half, color))
    return "".join(out)


def scene_svg(scene: RootScene) -> str:
    small, large = dart_report(scene)
    big = max((abs(z) for z in scene.roots), default=2.0)
    R = max(2.5, 1.15 * big)
    parts = [_svg_header(R)]
    for r in (0.5, 2.0):
        parts.append(
            f'<circle cx="0" cy="0" r="{r}" fill="none" stroke="#888" '
            'stroke-width="0.01" stroke-dasharray="0.05,0.05"/>\n'
        )
    if small.components:
        parts.append(_dart_wedges(small, 0.0, max(small.achieved_radius * 1.3, 0.02), "#3366cc"))
    if large.components and math.isfinite(large.achieved_radius):
        parts.append(_dart_wedges(large, large.achieved_radius / 1.1, R, "#cc6633"))
    colors = {"small": "#3366cc", "large": "#cc6633", "violation": "#cc0000"}
    for z, label in zip(scene.roots, scene.labels):
        parts.append(
            f'<circle cx="{z.real:.5f}" cy="{-z.imag:.5f}" r="{R/120:.4f}" '
            f'fill="{colors[label]}"/>\n'
        )
    parts.append("</svg>\n")
    return "".join(parts)


def path_svg(plan: PathPlan, scene: RootScene) -> str:
    big = max(max((abs(z) for z in scene.roots), default=2.0),
              max(abs(z) for z in plan.points))
    R = max(2.5, 1.15 * big)
    parts = [_svg_header(R)]
    for r in (0.5, 2.0):
        parts.append(
            f'<circle cx="0" cy="0" r="{r}" fill="none" stroke="#888" '
            'stroke-width="0.01" stroke-dasharray="0.05,0.05"/>\n'
        )
    pts = " ".join(f"{z.real:.5f},{-z.imag:.5f}" for z in plan.points)
    parts.append(
        f'<polyline points="{pts}" fill="none" stroke="#228833" stroke-width="0.02"/>\n'
    )
    for z, label in zip(scene.roots, scene.labels):
        color = {"small": "#3366cc", "large": "#cc6633", "violation": "#cc0000"}[label]
        parts.append(
            f'<circle cx="{z.real:.5f}" cy="{-z.imag:.5f}" r="{R/120:.4f}" fill="{color}"/>\n'
        )
    for z in (plan.endpoint_small, plan.endpoint_large):
        parts.append(
            f'<circle cx="{z.real:.5f}" cy="{-z.imag:.5f}" r="{R/80:.4f}" '
            'fill="none" stroke="#228833" stroke-width="0.015"/>\n'
        )
    parts.append("</svg>\n")
    return "".join(parts)
