"""Concrete planar/3D domains with exact boundary-distance oracles.

Every domain exposes its distance-to-boundary as the pointwise minimum of
a small list of *features*.  A feature is a 1-Lipschitz scalar field
(distance to one boundary component, or the inward wall depth) tagged with
its convexity class; the quadrature module exploits the tags to build
certified second-order enclosures of 1/d along segments.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainMembershipError, SamplingError, SpecValidationError

__all__ = [
    "Domain",
    "Ball",
    "PuncturedBall",
    "SlitDisk",
    "HalfPlane",
    "StraightTube",
    "ZigzagTube",
    "TransformedDomain",
    "segment_inside",
    "sample_interior",
    "domain_from_spec",
    "domain_to_spec",
]

CONCAVE = "concave"
CONVEX = "convex"
AFFINE = "affine"
GENERIC = "generic"


def _as_points(P):
    P = np.asarray(P, dtype=float)
    if P.ndim == 1:
        P = P[None, :]
    return P


def _norm(P, axis=-1):
    return np.sqrt(np.sum(P * P, axis=axis))


def _segment_distance(P, a, b):
    """Distance from each row of P to the closed segment [a, b]."""
    a = np.asarray(a, float)
    ab = np.asarray(b, float) - a
    denom = float(ab @ ab)
    if denom == 0.0:
        return _norm(P - a)
    t = np.clip((P - a) @ ab / denom, 0.0, 1.0)
    return _norm(P - (a + t[:, None] * ab))


# ---------------------------------------------------------------------------
# features


@dataclass(frozen=True)
class WallSphere:
    """Inward depth of a spherical wall: radius - |p - center|."""

    center: tuple
    radius: float
    kind = CONCAVE

    def at(self, P):
        return self.radius - _norm(P - np.asarray(self.center))


@dataclass(frozen=True)
class WallPlane:
    """Signed depth of a hyperplane wall: p.normal - offset (normal unit)."""

    normal: tuple
    offset: float
    kind = AFFINE

    def at(self, P):
        return P @ np.asarray(self.normal) - self.offset


@dataclass(frozen=True)
class WallCapsule:
    """Inward depth of a capsule wall: radius - dist(p, axis segment)."""

    a: tuple
    b: tuple
    radius: float
    kind = CONCAVE

    def at(self, P):
        return self.radius - _segment_distance(P, self.a, self.b)


@dataclass(frozen=True)
class GapPoint:
    """Distance to a removed point."""

    q: tuple
    kind = CONVEX

    def at(self, P):
        return _norm(P - np.asarray(self.q))


@dataclass(frozen=True)
class GapSegment:
    """Distance to a removed (or offset-boundary) closed segment."""

    a: tuple
    b: tuple
    kind = CONVEX

    def at(self, P):
        return _segment_distance(P, self.a, self.b)


@dataclass(frozen=True)
class GapArc:
    """Distance to a circular arc (2D): center, radius, ccw angles.

    The arc spans counterclockwise from angle ``a0`` by ``span`` radians.
    1-Lipschitz but neither convex nor concave, hence tagged generic.
    """

    center: tuple
    radius: float
    a0: float
    span: float
    kind = GENERIC

    def at(self, P):
        c = np.asarray(self.center)
        rel = P - c
        rho = _norm(rel)
        phi = np.arctan2(rel[:, 1], rel[:, 0])
        off = np.mod(phi - self.a0, 2.0 * math.pi)
        inside = off <= self.span
        radial = np.abs(rho - self.radius)
        e0 = c + self.radius * np.array([math.cos(self.a0), math.sin(self.a0)])
        a1 = self.a0 + self.span
        e1 = c + self.radius * np.array([math.cos(a1), math.sin(a1)])
        ends = np.minimum(_norm(P - e0), _norm(P - e1))
        return np.where(inside, radial, ends)


# ---------------------------------------------------------------------------
# domains


class Domain:
    """Connected open set with a membership test and a certified
    distance-to-boundary oracle.

    Immutable after construction; all operations are pure functions of
    their inputs and safe to call from many threads.
    """

    kind = "abstract"
    name = ""
    dim = 2

    def features(self):
        raise NotImplementedError

    def contains_many(self, P):
        raise NotImplementedError

    def contains(self, p):
        return bool(self.contains_many(_as_points(p))[0])

    def dist_many(self, P):
        """Distance to the boundary, min over features.  No membership
        gate; meaningful for interior points."""
        vals = [f.at(P) for f in self.features()]
        return np.minimum.reduce(vals) if len(vals) > 1 else vals[0]

    def dist_to_boundary(self, p):
        p = np.asarray(p, float)
        if not self.contains(p):
            raise DomainMembershipError(p, self.name)
        return float(self.dist_many(_as_points(p))[0])

    def bounding_box(self):
        raise NotImplementedError

    def grid_scale(self):
        """Length scale used for grid pitch (pitch = scale * 2**-level)."""
        raise NotImplementedError

    def anchor(self):
        """Lattice anchor point; grids are centered here so that
        similarity images of a domain produce similarity images of its
        grid."""
        raise NotImplementedError

    def boundary_points(self, k):
        """Roughly k points on the boundary, for verification oracles."""
        raise NotImplementedError

    def spec(self):
        raise NotImplementedError

    def cache_key(self):
        return json.dumps(self.spec(), sort_keys=True)

    def __repr__(self):
        return f"{type(self).__name__}({self.spec()})"


def _circle_points(center, radius, k):
    th = np.linspace(0.0, 2.0 * math.pi, k, endpoint=False)
    return np.asarray(center) + radius * np.stack([np.cos(th), np.sin(th)], axis=1)


def _sphere_points(center, radius, k):
    # Fibonacci lattice on the 2-sphere
    i = np.arange(k) + 0.5
    phi = math.pi * (3.0 - math.sqrt(5.0)) * i
    z = 1.0 - 2.0 * i / k
    rho = np.sqrt(1.0 - z * z)
    pts = np.stack([rho * np.cos(phi), rho * np.sin(phi), z], axis=1)
    return np.asarray(center) + radius * pts


class Ball(Domain):
    kind = "ball"

    def __init__(self, center, radius, name="ball"):
        center = np.asarray(center, float)
        if center.ndim != 1 or center.size not in (2, 3):
            raise SpecValidationError("center", "must be a 2D or 3D point")
        if not np.all(np.isfinite(center)):
            raise SpecValidationError("center", "coordinates must be finite")
        if not (radius > 0):
            raise SpecValidationError("radius", "must be > 0")
        self.center = center
        self.radius = float(radius)
        self.dim = center.size
        self.name = name
        self._features = (WallSphere(tuple(center), self.radius),)

    def features(self):
        return self._features

    def contains_many(self, P):
        return _norm(P - self.center) < self.radius

    def bounding_box(self):
        return self.center - self.radius, self.center + self.radius

    def grid_scale(self):
        return self.radius

    def anchor(self):
        return self.center

    def boundary_points(self, k):
        if self.dim == 2:
            return _circle_points(self.center, self.radius, k)
        return _sphere_points(self.center, self.radius, k)

    def spec(self):
        return {"kind": "ball", "center": list(self.center), "radius": self.radius}


class PuncturedBall(Domain):
    kind = "punctured_ball"

    def __init__(self, center, radius, puncture, name="punctured_ball"):
        base = Ball(center, radius)
        puncture = np.asarray(puncture, float)
        if puncture.shape != base.center.shape:
            raise SpecValidationError("puncture", "dimension mismatch with center")
        if not _norm(puncture - base.center) < radius:
            raise SpecValidationError("puncture", "must lie strictly inside the ball")
        self.center = base.center
        self.radius = base.radius
        self.puncture = puncture
        self.dim = base.dim
        self.name = name
        self._features = (
            WallSphere(tuple(self.center), self.radius),
            GapPoint(tuple(puncture)),
        )

    def features(self):
        return self._features

    def contains_many(self, P):
        inside = _norm(P - self.center) < self.radius
        return inside & (_norm(P - self.puncture) > 0.0)

    def bounding_box(self):
        return self.center - self.radius, self.center + self.radius

    def grid_scale(self):
        return self.radius

    def anchor(self):
        return self.center

    def boundary_points(self, k):
        shell = (
            _circle_points(self.center, self.radius, k)
            if self.dim == 2
            else _sphere_points(self.center, self.radius, k)
        )
        return np.vstack([shell, self.puncture[None, :]])

    def spec(self):
        return {
            "kind": "punctured_ball",
            "center": list(self.center),
            "radius": self.radius,
            "puncture": list(self.puncture),
        }


class SlitDisk(Domain):
    """Planar unit disk minus the half-open slit [0,1) x {0}.

    For distance purposes the slit's closure [0,1] x {0} is used; the
    extra endpoint (1,0) lies on the circle, so the oracle is unchanged.
    """

    kind = "slit_disk"

    def __init__(self, name="slit_disk"):
        self.dim = 2
        self.name = name
        self._features = (
            WallSphere((0.0, 0.0), 1.0),
            GapSegment((0.0, 0.0), (1.0, 0.0)),
        )

    def features(self):
        return self._features

    def contains_many(self, P):
        inside = _norm(P) < 1.0
        on_slit = (P[:, 1] == 0.0) & (P[:, 0] >= 0.0) & (P[:, 0] < 1.0)
        return inside & ~on_slit

    def bounding_box(self):
        return np.array([-1.0, -1.0]), np.array([1.0, 1.0])

    def grid_scale(self):
        return 1.0

    def anchor(self):
        return np.zeros(2)

    def boundary_points(self, k):
        circ = _circle_points((0.0, 0.0), 1.0, k)
        t = np.linspace(0.0, 1.0, k)
        slit = np.stack([t, np.zeros_like(t)], axis=1)
        return np.vstack([circ, slit])

    def spec(self):
        return {"kind": "slit_disk"}


class HalfPlane(Domain):
    """Open upper half-space: last coordinate > 0."""

    kind = "half_plane"

    def __init__(self, dim=2, name="half_plane"):
        if dim not in (2, 3):
            raise SpecValidationError("dim", "must be 2 or 3")
        self.dim = dim
        self.name = name
        normal = tuple(0.0 if i < dim - 1 else 1.0 for i in range(dim))
        self._features = (WallPlane(normal, 0.0),)

    def features(self):
        return self._features

    def contains_many(self, P):
        return P[:, -1] > 0.0

    def bounding_box(self):
        lo = np.full(self.dim, -1.0)
        hi = np.full(self.dim, 1.0)
        lo[-1] = 0.0
        hi[-1] = 2.0
        return lo, hi

    def grid_scale(self):
        return 1.0

    def anchor(self):
        return np.zeros(self.dim)

    def boundary_points(self, k):
        side = max(2, int(round(k ** (1.0 / (self.dim - 1)))))
        axes = [np.linspace(-1.0, 1.0, side)] * (self.dim - 1)
        grid = np.meshgrid(*axes, indexing="ij")
        flat = [g.ravel() for g in grid] + [np.zeros(side ** (self.dim - 1))]
        return np.stack(flat, axis=1)

    def spec(self):
        return {"kind": "half_plane", "dim": self.dim}


class StraightTube(Domain):
    """Planar capsule: the union of open balls of radius r centered on
    the axis segment from (0,0) to (length,0)."""

    kind = "straight_tube"

    def __init__(self, length, radius, name="straight_tube"):
        if not (length > 0):
            raise SpecValidationError("length", "must be > 0")
        if not (radius > 0):
            raise SpecValidationError("radius", "must be > 0")
        self.length = float(length)
        self.radius = float(radius)
        self.dim = 2
        self.name = name
        self._a = np.array([0.0, 0.0])
        self._b = np.array([self.length, 0.0])
        self._features = (WallCapsule((0.0, 0.0), (self.length, 0.0), self.radius),)

    def features(self):
        return self._features

    def contains_many(self, P):
        return _segment_distance(P, self._a, self._b) < self.radius

    def bounding_box(self):
        r = self.radius
        return np.array([-r, -r]), np.array([self.length + r, r])

    def grid_scale(self):
        return 4.0 * self.radius

    def anchor(self):
        return self._a

    def boundary_points(self, k):
        r = self.radius
        per = 2.0 * self.length + 2.0 * math.pi * r
        n_side = max(2, int(k * self.length / per))
        n_cap = max(4, int(k * math.pi * r / per))
        t = np.linspace(0.0, self.length, n_side)
        top = np.stack([t, np.full_like(t, r)], axis=1)
        bot = np.stack([t, np.full_like(t, -r)], axis=1)
        th0 = np.linspace(0.5 * math.pi, 1.5 * math.pi, n_cap)
        cap0 = r * np.stack([np.cos(th0), np.sin(th0)], axis=1)
        th1 = np.linspace(-0.5 * math.pi, 0.5 * math.pi, n_cap)
        cap1 = self._b + r * np.stack([np.cos(th1), np.sin(th1)], axis=1)
        return np.vstack([top, bot, cap0, cap1])

    def axis_point(self, s):
        return np.array([float(s), 0.0])

    def spec(self):
        return {"kind": "straight_tube", "length": self.length, "radius": self.radius}


def _offset_corner(v, u_in, u_out, side_normal_in, side_normal_out, r):
    """Intersection of the two offset lines at a polyline corner."""
    p0 = v + r * side_normal_in
    p1 = v + r * side_normal_out
    # solve p0 + t*u_in = p1 + s*u_out
    A = np.array([[u_in[0], -u_out[0]], [u_in[1], -u_out[1]]])
    rhs = p1 - p0
    t, _ = np.linalg.solve(A, rhs)
    return p0 + t * u_in


class ZigzagTube(Domain):
    """Planar tube around a polyline axis: union of open balls of radius
    r centered on the axis.

    The boundary is decomposed exactly into clipped offset segments,
    outer corner arcs, and end-cap arcs; the distance oracle is the
    minimum of the distances to those pieces, so inner corners (where
    the naive r - dist(axis) value underestimates) are handled exactly.
    """

    kind = "zigzag_tube"

    def __init__(self, vertices, radius, name="zigzag_tube"):
        V = np.asarray(vertices, float)
        if V.ndim != 2 or V.shape[1] != 2 or V.shape[0] < 2:
            raise SpecValidationError("vertices", "need >= 2 planar vertices")
        if not (radius > 0):
            raise SpecValidationError("radius", "must be > 0")
        seg = V[1:] - V[:-1]
        lens = _norm(seg)
        if np.any(lens == 0.0):
            raise SpecValidationError("vertices", "repeated consecutive vertices")
        if radius > np.min(lens) / 10.0 + 1e-12:
            raise SpecValidationError(
                "radius",
                f"radius {radius} exceeds 1/10 of the minimum segment length "
                f"{np.min(lens):.6g}",
            )
        # embedding guard: non-adjacent segments must stay clear of each
        # other so the boundary decomposition below is exact
        nseg = len(lens)
        for i in range(nseg):
            for j in range(i + 2, nseg):
                d = _seg_seg_distance(V[i], V[i + 1], V[j], V[j + 1])
                if d < 2.0 * radius * 1.05:
                    raise SpecValidationError(
                        "vertices",
                        f"segments {i} and {j} come within {d:.4g} "
                        f"(< 2.1 * radius); tube would self-intersect",
                    )
        self.vertices = V
        self.radius = float(radius)
        self.seg_lengths = lens
        self.cum_lengths = np.concatenate([[0.0], np.cumsum(lens)])
        self.dim = 2
        self.name = name
        self._dirs = seg / lens[:, None]
        self._build_boundary()
        feats = [GapSegment(tuple(a), tuple(b)) for a, b in self._offsets]
        feats += [GapArc(tuple(c), self.radius, a0, span) for c, a0, span in self._arcs]
        self._features = tuple(feats)

    def _build_boundary(self):
        V, r, u = self.vertices, self.radius, self._dirs
        nseg = len(u)
        left = np.stack([-u[:, 1], u[:, 0]], axis=1)
        offsets = []
        arcs = []
        # per segment and side, the offset endpoints, adjusted at corners
        ends = {}
        for j in range(1, nseg):
            cross = u[j - 1][0] * u[j][1] - u[j - 1][1] * u[j][0]
            turn = math.atan2(cross, float(u[j - 1] @ u[j]))
            if abs(turn) < 1e-12:
                continue
            clip = r * abs(math.tan(abs(turn) / 2.0))
            if clip > 0.45 * min(self.seg_lengths[j - 1], self.seg_lengths[j]):
                raise SpecValidationError(
                    "vertices", f"turn at vertex {j} too sharp for this radius"
                )
            inner = 1.0 if turn > 0 else -1.0  # +1 = left side is inner
            n_in = inner * left[j - 1]
            n_out_prev = -inner * left[j - 1]
            n_out_next = -inner * left[j]
            corner = _offset_corner(V[j], u[j - 1], u[j], n_in, inner * left[j], r)
            ends[(j - 1, "end", inner)] = corner
            ends[(j, "start", inner)] = corner
            ends[(j - 1, "end", -inner)] = V[j] + r * n_out_prev
            ends[(j, "start", -inner)] = V[j] + r * n_out_next
            # outer arc sweeps the turn angle between the two outer normals
            a_prev = math.atan2(n_out_prev[1], n_out_prev[0])
            a_next = math.atan2(n_out_next[1], n_out_next[0])
            span = np.mod(a_next - a_prev, 2.0 * math.pi)
            if span <= math.pi:
                arcs.append((V[j], a_prev, span))
            else:
                arcs.append((V[j], a_next, 2.0 * math.pi - span))
        for i in range(nseg):
            for side in (1.0, -1.0):
                a = ends.get((i, "start", side), V[i] + r * side * left[i])
                b = ends.get((i, "end", side), V[i + 1] + r * side * left[i])
                offsets.append((a, b))
        # end caps: semicircles facing outward
        th0 = math.atan2(u[0][1], u[0][0])
        arcs.append((V[0], th0 + 0.5 * math.pi, math.pi))
        thn = math.atan2(u[-1][1], u[-1][0])
        arcs.append((V[-1], thn - 0.5 * math.pi, math.pi))
        self._offsets = offsets
        self._arcs = arcs

    def features(self):
        return self._features

    def axis_distance(self, P):
        P = _as_points(P)
        best = np.full(P.shape[0], np.inf)
        for i in range(len(self._dirs)):
            best = np.minimum(
                best, _segment_distance(P, self.vertices[i], self.vertices[i + 1])
            )
        return best

    def contains_many(self, P):
        return self.axis_distance(P) < self.radius

    def axis_point(self, s):
        """Point on the axis polyline at arclength s."""
        s = float(np.clip(s, 0.0, self.cum_lengths[-1]))
        i = int(np.searchsorted(self.cum_lengths[1:], s, side="left"))
        i = min(i, len(self._dirs) - 1)
        return self.vertices[i] + (s - self.cum_lengths[i]) * self._dirs[i]

    def bounding_box(self):
        r = self.radius
        return self.vertices.min(axis=0) - r, self.vertices.max(axis=0) + r

    def grid_scale(self):
        return 4.0 * self.radius

    def anchor(self):
        return self.vertices[0]

    def boundary_points(self, k):
        per_piece = max(4, k // max(1, len(self._offsets) + len(self._arcs)))
        pts = []
        for a, b in self._offsets:
            t = np.linspace(0.0, 1.0, per_piece)
            pts.append(np.asarray(a) + t[:, None] * (np.asarray(b) - np.asarray(a)))
        for c, a0, span in self._arcs:
            th = a0 + np.linspace(0.0, span, per_piece)
            pts.append(np.asarray(c) + self.radius * np.stack([np.cos(th), np.sin(th)], axis=1))
        return np.vstack(pts)

    def spec(self):
        return {
            "kind": "zigzag_tube",
            "vertices": [list(v) for v in self.vertices],
            "radius": self.radius,
        }


def _seg_seg_distance(a0, a1, b0, b1):
    """Distance between two closed planar segments."""
    def orient(p, q, r):
        return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])

    d1 = orient(a0, a1, b0)
    d2 = orient(a0, a1, b1)
    d3 = orient(b0, b1, a0)
    d4 = orient(b0, b1, a1)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)):
        return 0.0
    cands = [
        _segment_distance(np.asarray([b0]), a0, a1)[0],
        _segment_distance(np.asarray([b1]), a0, a1)[0],
        _segment_distance(np.asarray([a0]), b0, b1)[0],
        _segment_distance(np.asarray([a1]), b0, b1)[0],
    ]
    return float(min(cands))


@dataclass(frozen=True)
class _TransformedFeature:
    base: object
    scale: float
    rot_inv: tuple
    shift: tuple

    @property
    def kind(self):
        return self.base.kind

    def at(self, P):
        R = np.asarray(self.rot_inv)
        Q = (P - np.asarray(self.shift)) @ R.T / self.scale
        return self.scale * self.base.at(Q)


class TransformedDomain(Domain):
    """Similarity image lambda*R*x + b of a base domain.

    In-memory construct only (hosts targets of similarity maps for kinds
    that are not closed under rotation, e.g. the slit disk); it is not
    part of the serialization schema.
    """

    kind = "transformed"

    def __init__(self, base, scale, rotation, translation, name=None):
        if not (scale > 0):
            raise SpecValidationError("scale", "must be > 0")
        R = np.asarray(rotation, float)
        if R.shape != (base.dim, base.dim) or not np.allclose(
            R @ R.T, np.eye(base.dim), atol=1e-10
        ):
            raise SpecValidationError("rotation", "must be orthogonal")
        self.base = base
        self.scale = float(scale)
        self.rotation = R
        self.translation = np.asarray(translation, float)
        self.dim = base.dim
        self.name = name or f"transformed_{base.name}"
        self._features = tuple(
            _TransformedFeature(
                f, self.scale, tuple(map(tuple, R)), tuple(self.translation)
            )
            for f in base.features()
        )

    def to_base(self, P):
        return (P - self.translation) @ self.rotation / self.scale

    def from_base(self, P):
        return self.scale * (P @ self.rotation.T) + self.translation

    def features(self):
        return self._features

    def contains_many(self, P):
        return self.base.contains_many(self.to_base(_as_points(P)))

    def bounding_box(self):
        lo, hi = self.base.bounding_box()
        corners = np.array(
            [[lo[i] if (m >> i) & 1 == 0 else hi[i] for i in range(self.dim)]
             for m in range(2 ** self.dim)]
        )
        img = self.from_base(corners)
        return img.min(axis=0), img.max(axis=0)

    def grid_scale(self):
        return self.scale * self.base.grid_scale()

    def anchor(self):
        return self.from_base(self.base.anchor()[None, :])[0]

    def boundary_points(self, k):
        return self.from_base(self.base.boundary_points(k))

    def spec(self):
        return {
            "kind": "transformed",
            "base": self.base.spec(),
            "scale": self.scale,
            "rotation": [list(r) for r in self.rotation],
            "translation": list(self.translation),
        }


# ---------------------------------------------------------------------------
# free operations


def segment_inside(domain, a, b, max_depth=40):
    """Certified test that the closed segment [a, b] lies in the domain.

    Uses the 1-Lipschitz rule |a-b| < d(a)  =>  [a,b] in B(a, d(a)) in D,
    bisecting recursively; returns a conservative False at the depth cap.
    """
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    if not (domain.contains(a) and domain.contains(b)):
        return False
    stack = [(a, b, 0)]
    while stack:
        p, q, depth = stack.pop()
        gap = float(_norm(q - p))
        dp = float(domain.dist_many(p[None, :])[0])
        dq = float(domain.dist_many(q[None, :])[0])
        if gap < dp or gap < dq:
            continue
        if depth >= max_depth:
            return False
        m = 0.5 * (p + q)
        if not domain.contains(m):
            return False
        stack.append((p, m, depth + 1))
        stack.append((m, q, depth + 1))
    return True


def certify_segments(domain, A, B, max_depth=40):
    """Vectorized segment_inside over row-aligned endpoint arrays."""
    A = np.asarray(A, float)
    B = np.asarray(B, float)
    n = A.shape[0]
    ok = domain.contains_many(A) & domain.contains_many(B)
    verdict = np.where(ok, -1, 0)  # -1 undecided, 0 false, 1 true
    idx = np.nonzero(verdict == -1)[0]
    stack = [(A[idx], B[idx], idx, 0)]
    verdict[verdict == -1] = 1  # assume true; flip to 0 on failure
    while stack:
        P, Q, who, depth = stack.pop()
        if who.size == 0:
            continue
        live = verdict[who] == 1
        P, Q, who = P[live], Q[live], who[live]
        if who.size == 0:
            continue
        gap = _norm(Q - P)
        covered = (gap < domain.dist_many(P)) | (gap < domain.dist_many(Q))
        P, Q, who = P[~covered], Q[~covered], who[~covered]
        if who.size == 0:
            continue
        if depth >= max_depth:
            verdict[who] = 0
            continue
        M = 0.5 * (P + Q)
        bad = ~domain.contains_many(M)
        verdict[who[bad]] = 0
        keep = ~bad
        P, Q, M, who = P[keep], Q[keep], M[keep], who[keep]
        stack.append((P, M, who, depth + 1))
        stack.append((M, Q, who, depth + 1))
    return verdict == 1


def sample_interior(domain, n, margin, seed):
    """n seeded rejection samples with dist_to_boundary >= margin."""
    if n < 1:
        raise SpecValidationError("n", "must be >= 1")
    if margin < 0:
        raise SpecValidationError("margin", "must be >= 0")
    rng = np.random.default_rng(seed)
    lo, hi = domain.bounding_box()
    out = []
    budget = max(4000, 400 * n)
    drawn = 0
    while len(out) < n and drawn < budget:
        batch = min(budget - drawn, max(64, 2 * (n - len(out))))
        P = rng.uniform(lo, hi, size=(batch, domain.dim))
        drawn += batch
        good = domain.contains_many(P)
        if margin > 0:
            good = good & (domain.dist_many(P) >= margin)
        else:
            good = good & (domain.dist_many(P) > 0)
        for p in P[good]:
            out.append(p.copy())
            if len(out) == n:
                break
    if len(out) < n:
        raise SamplingError(
            f"could not draw {n} interior points with margin {margin} "
            f"from {domain.name!r} within budget"
        )
    return np.asarray(out)


_KINDS = {
    "ball",
    "punctured_ball",
    "slit_disk",
    "half_plane",
    "straight_tube",
    "zigzag_tube",
}


def domain_from_spec(spec):
    """Construct a domain from a structured spec (dict or JSON text)."""
    if isinstance(spec, (str, bytes)):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as e:
            raise SpecValidationError("<document>", f"invalid JSON: {e}") from e
    if not isinstance(spec, dict):
        raise SpecValidationError("<document>", "expected a JSON object")
    kind = spec.get("kind")
    if kind not in _KINDS:
        raise SpecValidationError("kind", f"unknown kind {kind!r}")

    def need(field, typ=(int, float, list)):
        if field not in spec:
            raise SpecValidationError(field, "missing required field")
        return spec[field]

    if kind == "ball":
        return Ball(need("center"), need("radius"))
    if kind == "punctured_ball":
        return PuncturedBall(need("center"), need("radius"), need("puncture"))
    if kind == "slit_disk":
        return SlitDisk()
    if kind == "half_plane":
        return HalfPlane(dim=int(spec.get("dim", 2)))
    if kind == "straight_tube":
        return StraightTube(need("length"), need("radius"))
    return ZigzagTube(need("vertices"), need("radius"))


def domain_to_spec(domain):
    spec = domain.spec()
    if spec["kind"] not in _KINDS:
        raise SpecValidationError("kind", f"{spec['kind']!r} is not serializable")
    return spec
