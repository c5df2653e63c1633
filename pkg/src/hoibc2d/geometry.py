"""Discretized 2D contours for the boundary-element solver.

A contour is a polyline of straight segments with a local frame on each
element: unit tangent tau, unit outward normal n, length h.  Two builders
cover the solver targets — a closed circle (coated-cylinder cross section)
and an open plate on the x axis.  Degree-of-freedom bookkeeping for the
nodal P1 and elementwise P0 spaces lives here too, including the endpoint
constraints an open contour imposes on every P1 field.
"""

from __future__ import annotations

import hashlib
import io
from dataclasses import dataclass, field

import numpy as np

from .errors import MeshError, UsageError

_MIN_ELEMENTS = 8


def _frozen(a):
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Contour:
    """Straight-segment polyline with per-element frames.

    nodes      (N, 2) float [m]
    elements   (E, 2) int, node indices; consecutive elements share a node
    closed     True for loops (E = N), False for open arcs (E = N - 1)
    tangents   (E, 2) unit tau along the element
    normals    (E, 2) unit n pointing into the exterior domain
    lengths    (E,) element lengths h_e [m]
    sigma      +1 or -1: the z component of n x tau, constant per contour
    """

    nodes: np.ndarray
    elements: np.ndarray
    closed: bool
    tangents: np.ndarray = field(init=False)
    normals: np.ndarray = field(init=False)
    lengths: np.ndarray = field(init=False)
    sigma: float = field(init=False)

    def __post_init__(self):
        nodes = _frozen(np.asarray(self.nodes, dtype=float))
        elems = _frozen(np.asarray(self.elements, dtype=int))
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "elements", elems)
        if nodes.ndim != 2 or nodes.shape[1] != 2:
            raise UsageError("nodes must be an (N, 2) array")
        n_nodes, n_el = nodes.shape[0], elems.shape[0]
        expect = n_nodes if self.closed else n_nodes - 1
        if n_el != expect:
            raise MeshError(
                f"{'closed' if self.closed else 'open'} contour needs "
                f"{expect} elements for {n_nodes} nodes, got {n_el}"
            )
        for e in range(n_el - 1):
            if elems[e, 1] != elems[e + 1, 0]:
                raise MeshError(f"elements {e} and {e + 1} do not chain")
        if self.closed and elems[-1, 1] != elems[0, 0]:
            raise MeshError("closed contour does not wrap around")

        vec = nodes[elems[:, 1]] - nodes[elems[:, 0]]
        h = np.hypot(vec[:, 0], vec[:, 1])
        if np.any(h <= 0.0):
            raise MeshError("zero-length element")
        tau = vec / h[:, None]
        object.__setattr__(self, "lengths", _frozen(h))
        object.__setattr__(self, "tangents", _frozen(tau))
        # orientation is fixed by the builder via the node ordering; the
        # normal is tau rotated a quarter turn, sign chosen per contour
        sig = -1.0 if not self.closed else self._loop_sign(nodes, elems)
        n = sig * np.stack([tau[:, 1], -tau[:, 0]], axis=1)
        object.__setattr__(self, "normals", _frozen(n))
        # z component of n x tau; = sig since n is tau rotated by -sig*90deg
        object.__setattr__(self, "sigma", sig)

    @staticmethod
    def _loop_sign(nodes, elems):
        # shoelace area: positive for counterclockwise node ordering, in
        # which case (tau_y, -tau_x) already points outward
        p = nodes[elems[:, 0]]
        q = nodes[elems[:, 1]]
        area2 = float(np.sum(p[:, 0] * q[:, 1] - q[:, 0] * p[:, 1]))
        if area2 == 0.0:
            raise MeshError("degenerate closed contour (zero area)")
        return 1.0 if area2 > 0.0 else -1.0

    @property
    def n_nodes(self) -> int:
        return self.nodes.shape[0]

    @property
    def n_elements(self) -> int:
        return self.elements.shape[0]

    @property
    def perimeter(self) -> float:
        return float(self.lengths.sum())

    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.nodes[self.elements[:, 0]] + self.nodes[self.elements[:, 1]])

    def point(self, element: int, t) -> np.ndarray:
        """Map local coordinate(s) t in [0, 1] on an element to the plane."""
        a = self.nodes[self.elements[element, 0]]
        b = self.nodes[self.elements[element, 1]]
        t = np.asarray(t, dtype=float)
        return a + np.multiply.outer(t, b - a)


@dataclass(frozen=True)
class DofSpace:
    """Degrees of freedom of a scalar field on a contour.

    kind is "P1_nodal" (continuous piecewise linear, one DOF per node) or
    "P0_elementwise" (piecewise constant, one DOF per element).  For open
    contours every P1 space carries its two endpoint DOFs in `constrained`;
    they are pinned to zero when systems are assembled.
    """

    kind: str
    count: int
    constrained: frozenset = frozenset()

    def __post_init__(self):
        if self.kind not in ("P1_nodal", "P0_elementwise"):
            raise UsageError(f"unknown DOF space kind {self.kind!r}")
        if self.count <= 0:
            raise UsageError("empty DOF space")
        bad = [i for i in self.constrained if not (0 <= i < self.count)]
        if bad:
            raise UsageError(f"constrained DOF out of range: {bad}")


def dof_space(kind: str, contour: Contour) -> DofSpace:
    if kind == "P1_nodal":
        if contour.closed:
            return DofSpace(kind, contour.n_nodes)
        ends = frozenset({0, contour.n_nodes - 1})
        return DofSpace(kind, contour.n_nodes, ends)
    if kind == "P0_elementwise":
        return DofSpace(kind, contour.n_elements)
    raise UsageError(f"unknown DOF space kind {kind!r}")


def mesh_circle(radius: float, n_elements: int) -> Contour:
    """Closed regular polygon inscribed in the circle of given radius.

    Node j sits at angle 2 pi j / N, so refining N -> 2N keeps every old
    node at an even index (nested meshes for convergence studies).
    """
    if radius <= 0.0:
        raise UsageError("radius must be positive")
    if n_elements < _MIN_ELEMENTS:
        raise MeshError(
            f"mesh too coarse: n_elements = {n_elements} < {_MIN_ELEMENTS}"
        )
    ang = 2.0 * np.pi * np.arange(n_elements) / n_elements
    nodes = radius * np.stack([np.cos(ang), np.sin(ang)], axis=1)
    elems = np.stack(
        [np.arange(n_elements), (np.arange(n_elements) + 1) % n_elements], axis=1
    )
    return Contour(nodes=nodes, elements=elems, closed=True)


def mesh_plate(length: float, n_elements: int) -> Contour:
    """Open straight strip on the x axis, centered on the origin.

    Tangents are +x, normals +y (the illuminated side); the two endpoint
    nodes are flagged as constrained by dof_space for every P1 field.
    """
    if length <= 0.0:
        raise UsageError("length must be positive")
    if n_elements < _MIN_ELEMENTS:
        raise MeshError(
            f"mesh too coarse: n_elements = {n_elements} < {_MIN_ELEMENTS}"
        )
    x = np.linspace(-0.5 * length, 0.5 * length, n_elements + 1)
    nodes = np.stack([x, np.zeros_like(x)], axis=1)
    elems = np.stack([np.arange(n_elements), np.arange(n_elements) + 1], axis=1)
    return Contour(nodes=nodes, elements=elems, closed=False)


def element_dofs(space: DofSpace, contour: Contour, element: int) -> tuple:
    """Global DOF indices supported on one element."""
    if space.kind == "P1_nodal":
        e = contour.elements[element]
        return (int(e[0]), int(e[1]))
    return (int(element),)


def basis_eval(space: DofSpace, contour: Contour, element: int, t):
    """Values and arc-length derivatives of the local basis at t in [0, 1].

    Returns (dofs, values, dvalues); values/dvalues have one row per local
    DOF and trailing shape of t.
    """
    if not 0 <= element < contour.n_elements:
        raise UsageError(f"element index {element} out of range")
    t = np.asarray(t, dtype=float)
    h = contour.lengths[element]
    dofs = element_dofs(space, contour, element)
    if space.kind == "P1_nodal":
        vals = np.stack([1.0 - t, t + 0.0 * t])
        dvals = np.stack([np.full_like(t, -1.0 / h), np.full_like(t, 1.0 / h)])
        return dofs, vals, dvals
    return dofs, np.ones((1,) + t.shape), np.zeros((1,) + t.shape)


def contour_hash(contour: Contour) -> str:
    """Stable fingerprint of the mesh (logged with every solve)."""
    m = hashlib.sha256()
    m.update(b"closed" if contour.closed else b"open")
    m.update(contour.nodes.tobytes())
    m.update(contour.elements.astype(np.int64).tobytes())
    return m.hexdigest()[:16]


def dump_csv(contour: Contour) -> str:
    """Nodes and connectivity as CSV text (debug aid)."""
    buf = io.StringIO()
    buf.write(f"# contour closed={int(contour.closed)} nodes={contour.n_nodes}"
              f" elements={contour.n_elements} hash={contour_hash(contour)}\n")
    buf.write("# section,index,x_or_first,y_or_second\n")
    for i, (x, y) in enumerate(contour.nodes):
        buf.write(f"node,{i},{float(x)!r},{float(y)!r}\n")
    for e, (i, j) in enumerate(contour.elements):
        buf.write(f"element,{e},{i},{j}\n")
    return buf.getvalue()
