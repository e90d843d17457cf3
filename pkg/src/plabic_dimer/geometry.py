"""Angle assignments, the plabic tiling v(J) = sum of v_i, numerical checks of
the angle laws and isoradiality, and a deterministic SVG renderer."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .dimer import MINUS, PLUS, QuiverWithFaces, arrow_weights, strands, vertex_star
from .collection import boundary_labels
from .cyclic import Weight
from .errors import DegenerateEmbedding, InvalidInput

POINT_TOL = 1e-9
AREA_TOL = 1e-6

Point = tuple[float, float]


@dataclass(frozen=True)
class AngleAssignment:
    """theta_i is the clockwise angle from v_i to v_(i+1)."""

    theta: tuple[float, ...]

    def __post_init__(self):
        th = tuple(float(t) for t in self.theta)
        object.__setattr__(self, "theta", th)
        if not th:
            raise InvalidInput("need at least one angle")
        if any(not (0.0 < t < 2 * math.pi) for t in th):
            raise InvalidInput("every angle must lie in (0, 2pi)")
        if abs(math.fsum(th) - 2 * math.pi) > 1e-12:
            raise InvalidInput(f"angles sum to {math.fsum(th)}, not 2pi")

    @property
    def n(self) -> int:
        return len(self.theta)

    @classmethod
    def uniform(cls, n: int) -> "AngleAssignment":
        return cls((2 * math.pi / n,) * n)

    @classmethod
    def from_json(cls, text: str) -> "AngleAssignment":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"malformed angle file: {exc}") from exc
        if isinstance(data, dict):
            data = data.get("theta")
        if not isinstance(data, list):
            raise InvalidInput("angle file must hold a list of angles")
        return cls(tuple(data))


def unit_vectors(angles: AngleAssignment, rotation: float = 0.0) -> tuple[Point, ...]:
    """v_1 at the top, the rest placed clockwise."""
    out = []
    phi = math.pi / 2 + rotation
    for t in angles.theta:
        out.append((math.cos(phi), math.sin(phi)))
        phi -= t
    return tuple(out)


def theta_of_arrow(angles: AngleAssignment, w: Weight) -> float:
    return math.fsum(angles.theta[i - 1] * c for i, c in enumerate(w.counts, start=1))


def vector_sum(vectors: Sequence[Point], J) -> Point:
    return (math.fsum(vectors[i - 1][0] for i in J), math.fsum(vectors[i - 1][1] for i in J))


@dataclass(frozen=True)
class TilingEmbedding:
    positions: dict
    vectors: tuple[Point, ...]


def embed(Q: QuiverWithFaces, angles: AngleAssignment, rotation: float = 0.0) -> TilingEmbedding:
    if angles.n != Q.n:
        raise InvalidInput(f"{angles.n} angles for n={Q.n}")
    if any(len(f.arrows) == 2 for f in Q.faces.values()):
        raise DegenerateEmbedding("a 2-cycle face cannot be drawn isoradially")
    vecs = unit_vectors(angles, rotation)
    pos = {v: vector_sum(vecs, Q.label(v)) for v in sorted(Q.vertices)}
    return TilingEmbedding(pos, vecs)


def signed_area(points: Sequence[Point]) -> float:
    m = len(points)
    return 0.5 * math.fsum(points[t][0] * points[(t + 1) % m][1] - points[(t + 1) % m][0] * points[t][1]
                           for t in range(m))


def circumcentre(a: Point, b: Point, c: Point) -> Point:
    d = 2 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]))
    if abs(d) < 1e-15:
        raise DegenerateEmbedding("collinear points have no circumcentre")
    sa, sb, sc = a[0] ** 2 + a[1] ** 2, b[0] ** 2 + b[1] ** 2, c[0] ** 2 + c[1] ** 2
    ux = (sa * (b[1] - c[1]) + sb * (c[1] - a[1]) + sc * (a[1] - b[1])) / d
    uy = (sa * (c[0] - b[0]) + sb * (a[0] - c[0]) + sc * (b[0] - a[0])) / d
    return ux, uy


def is_convex(points: Sequence[Point], tol: float = 1e-12) -> bool:
    m = len(points)
    signs = set()
    for t in range(m):
        a, b, c = points[t], points[(t + 1) % m], points[(t + 2) % m]
        cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
        if abs(cross) > tol:
            signs.add(cross > 0)
    return len(signs) <= 1


@dataclass
class GeometryReport:
    name: str
    violations: list[str] = field(default_factory=list)
    max_residual: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def residual(self, value: float, tol: float, what: str) -> None:
        self.max_residual = max(self.max_residual, abs(value))
        if abs(value) > tol:
            self.violations.append(f"{what}: residual {value:.3e}")


def face_vertices(Q: QuiverWithFaces, fid: int) -> list[str]:
    return [Q.arrows[a].tail for a in Q.faces[fid].arrows]


def face_centre_label(Q: QuiverWithFaces, fid: int) -> frozenset:
    """K for a white clique (common part), L for a black one (union)."""
    labs = [Q.label(v) for v in face_vertices(Q, fid)]
    if Q.faces[fid].sign == MINUS:
        return frozenset.intersection(*labs)
    return frozenset.union(*labs)


def check_isoradial(Q: QuiverWithFaces, emb: TilingEmbedding) -> GeometryReport:
    rep = GeometryReport("isoradial tiling")
    tile_area = []
    for fid in sorted(Q.faces):
        verts = face_vertices(Q, fid)
        pts = [emb.positions[v] for v in verts]
        centre = vector_sum(emb.vectors, face_centre_label(Q, fid))
        for v, p in zip(verts, pts):
            rep.residual(math.dist(p, centre) - 1.0, POINT_TOL, f"face {fid} vertex {v} radius")
        cc = circumcentre(pts[0], pts[1], pts[2])
        for v, p in zip(verts, pts):
            rep.residual(math.dist(p, cc) - 1.0, POINT_TOL, f"face {fid} vertex {v} circumradius")
        rep.residual(math.dist(cc, centre), POINT_TOL, f"face {fid} circumcentre")
        if not is_convex(pts):
            rep.violations.append(f"face {fid} is not convex")
        area = signed_area(pts)
        if (area > 0) != (Q.faces[fid].sign == PLUS):
            rep.violations.append(f"face {fid} orientation disagrees with its sign")
        tile_area.append(abs(area))
    hull = [emb.positions[Q.vertex_of_label(E)] for E in boundary_labels(Q.k, Q.n)]
    if not is_convex(hull):
        rep.violations.append("boundary polygon is not convex")
    total, hull_area = math.fsum(tile_area), abs(signed_area(hull))
    rep.details.update(tiles=len(tile_area), tile_area=total, hull_area=hull_area)
    if abs(total - hull_area) > AREA_TOL:
        rep.violations.append(f"tile areas {total} vs polygon {hull_area}")
    return rep


def check_angle_laws(Q: QuiverWithFaces, angles: AngleAssignment) -> GeometryReport:
    rep = GeometryReport("angle laws")
    w = arrow_weights(Q)
    th = {a: theta_of_arrow(angles, wa) for a, wa in w.items()}
    two_pi = 2 * math.pi
    for fid in sorted(Q.faces):
        rep.residual(math.fsum(th[a] for a in Q.faces[fid].arrows) - two_pi, POINT_TOL, f"face {fid}")
    for v in sorted(Q.vertices):
        star = vertex_star(Q, v)
        if not star.is_boundary:
            rep.residual(math.fsum(math.pi - th[a] for a in star.arrows) - two_pi, POINT_TOL, f"vertex {v}")
            continue
        lab = Q.label(v)
        j = boundary_labels(Q.k, Q.n).index(lab) + 1
        jk = (j - Q.k - 1) % Q.n + 1
        rep.residual(math.fsum(math.pi - th[a] for a in star.w_out) - (math.pi - angles.theta[j - 1]),
                     POINT_TOL, f"out-wedge at {v}")
        rep.residual(math.fsum(math.pi - th[a] for a in star.w_in) - (math.pi - angles.theta[jk - 1]),
                     POINT_TOL, f"in-wedge at {v}")
    return rep


def check_arrow_angles(Q: QuiverWithFaces, emb: TilingEmbedding, angles: AngleAssignment) -> GeometryReport:
    """The clockwise angle at K = I n J from K->I to K->J is theta of the arrow."""
    rep = GeometryReport("arrow angles")
    w = arrow_weights(Q)
    for a in sorted(Q.arrows):
        arr = Q.arrows[a]
        K = Q.label(arr.tail) & Q.label(arr.head)
        pk = vector_sum(emb.vectors, K)
        pi_, pj = emb.positions[arr.tail], emb.positions[arr.head]
        ai = math.atan2(pi_[1] - pk[1], pi_[0] - pk[0])
        aj = math.atan2(pj[1] - pk[1], pj[0] - pk[0])
        cw = (ai - aj) % (2 * math.pi)
        rep.residual(cw - theta_of_arrow(angles, w[a]), POINT_TOL, f"arrow {arr.tail}->{arr.head}")
    return rep


# -- SVG -----------------------------------------------------------------------

LAYERS = ("tiles", "arrows", "strands", "labels")
CANVAS = 800


def _fmt(x: float) -> str:
    s = f"{x:.3f}"
    return "0.000" if s == "-0.000" else s


def svg_export(Q: QuiverWithFaces, emb: TilingEmbedding, layers: Sequence[str] = LAYERS) -> str:
    for layer in layers:
        if layer not in LAYERS:
            raise InvalidInput(f"unknown layer {layer!r}")
    pts = list(emb.positions.values())
    span = max(max(abs(x) for x, _ in pts), max(abs(y) for _, y in pts), 1.0) + 0.5
    scale = (CANVAS / 2) / span

    def xy(p: Point) -> tuple[str, str]:
        return _fmt(CANVAS / 2 + p[0] * scale), _fmt(CANVAS / 2 - p[1] * scale)

    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{CANVAS}" height="{CANVAS}" '
           f'viewBox="0 0 {CANVAS} {CANVAS}">',
           '<defs><marker id="head" markerWidth="8" markerHeight="8" refX="7" refY="4" orient="auto">'
           '<path d="M0,0 L8,4 L0,8 z" fill="#333"/></marker></defs>']
    if "tiles" in layers:
        out.append('<g id="tiles" stroke="#555" stroke-width="1">')
        for fid in sorted(Q.faces):
            coords = " ".join(",".join(xy(emb.positions[v])) for v in face_vertices(Q, fid))
            fill = "#bbbbbb" if Q.faces[fid].sign == PLUS else "#ffffff"
            out.append(f'<polygon points="{coords}" fill="{fill}"/>')
        out.append("</g>")
    if "arrows" in layers:
        out.append('<g id="arrows" stroke="#333" stroke-width="1.5" marker-end="url(#head)">')
        for a in sorted(Q.arrows):
            arr = Q.arrows[a]
            p, q = emb.positions[arr.tail], emb.positions[arr.head]
            # shorten so the head stays clear of the vertex dot
            t0, t1 = 0.12, 0.88
            s = (p[0] + t0 * (q[0] - p[0]), p[1] + t0 * (q[1] - p[1]))
            e = (p[0] + t1 * (q[0] - p[0]), p[1] + t1 * (q[1] - p[1]))
            (x1, y1), (x2, y2) = xy(s), xy(e)
            dash = ' stroke-dasharray="4,3"' if arr.is_boundary else ""
            out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"{dash}/>')
        out.append("</g>")
    if "strands" in layers:
        out.append('<g id="strands" fill="none" stroke="#c03030" stroke-width="1" stroke-opacity="0.7">')
        for s in strands(Q):
            mids = []
            for a in s.crossings:
                arr = Q.arrows[a]
                p, q = emb.positions[arr.tail], emb.positions[arr.head]
                mids.append(xy(((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)))
            coords = " ".join(f"{x},{y}" for x, y in mids)
            out.append(f'<polyline points="{coords}" data-strand="{s.start_marker}"/>')
        out.append("</g>")
    if "labels" in layers:
        out.append('<g id="labels" font-family="sans-serif" font-size="13" text-anchor="middle">')
        for v in sorted(Q.vertices):
            x, y = xy(emb.positions[v])
            out.append(f'<circle cx="{x}" cy="{y}" r="3" fill="#000"/>')
            out.append(f'<text x="{x}" y="{_fmt(float(y) - 6)}">{v}</text>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
