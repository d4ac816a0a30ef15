"""Tensor space-time slab meshes over (0, T) x (x_left, x_right).

Coordinates are ordered (t, x). Element ids run slab-major: id = slab * num_cells + cell.
Orientation conventions:

* the face between slabs n - 1 and n belongs to the upper element with n+ = (-1, 0);
  its minus side is the lower element, or INITIAL below the first slab
* an interior space face at x_j belongs to the cell on its left with n+ = (0, +1)
* the boundary faces at x_left / x_right belong to the first / last cell with
  n+ = (0, -1) / (0, +1) and minus side BOUNDARY
* the faces above the last slab belong to the last slab with n+ = (+1, 0) and minus
  side TERMINAL; they are the only time_top faces
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Sequence, Tuple

import numpy as np

from app.element.AffineMap import AffineMap

logger = logging.getLogger(__name__)

BOUNDARY = -1
INITIAL = -2
TERMINAL = -3

DEFAULT_QUASI_UNIFORM_BOUND = 4.0


class FaceKind(Enum):
    TIME_BOTTOM = "time_bottom"
    SPACE_INTERIOR = "space_interior"
    SPACE_BOUNDARY = "space_boundary"
    TIME_TOP = "time_top"


@dataclass(frozen=True)
class Face:
    index: int
    kind: FaceKind
    normal: Tuple[float, float]
    owner_plus: int
    neighbor_minus: int
    start: Tuple[float, float]
    end: Tuple[float, float]

    @property
    def is_time_face(self) -> bool:
        return self.kind in (FaceKind.TIME_BOTTOM, FaceKind.TIME_TOP)

    @property
    def is_interior(self) -> bool:
        return self.neighbor_minus >= 0

    @property
    def length(self) -> float:
        return float(np.hypot(self.end[0] - self.start[0], self.end[1] - self.start[1]))

    def quadrature_points(self, s) -> np.ndarray:
        """Physical (t, x) points for parameters s in [0, 1] along the face."""
        s = np.asarray(s, dtype=float)[:, None]
        return (1.0 - s) * np.asarray(self.start) + s * np.asarray(self.end)


@dataclass(frozen=True)
class FaceView:
    """A face seen from one of its elements.

    side is +1 on the owner and -1 on the neighbor; side * face.normal is the outward
    normal of the element. local_side names the reference edge (bottom, top, left, right).
    """

    face: Face
    side: int
    local_side: str
    in_boundary_star: bool

    @property
    def outward_normal(self) -> np.ndarray:
        return self.side * np.asarray(self.face.normal, dtype=float)


@dataclass(frozen=True, eq=False)
class SpaceTimeMesh:
    time_levels: np.ndarray
    space_nodes: np.ndarray
    faces: List[Face]
    quasi_uniform_bound: float = DEFAULT_QUASI_UNIFORM_BOUND
    _element_faces: Tuple[Tuple[int, int, int, int], ...] = field(default=(), repr=False)

    @classmethod
    def from_levels(
        cls,
        time_levels: Sequence[float],
        space_nodes: Sequence[float],
        quasi_uniform_bound: float = DEFAULT_QUASI_UNIFORM_BOUND,
    ) -> "SpaceTimeMesh":
        t = np.asarray(time_levels, dtype=float)
        x = np.asarray(space_nodes, dtype=float)
        if t.size < 2 or x.size < 2:
            raise ValueError("a mesh needs at least two time levels and two space nodes")
        if x[0] >= x[-1]:
            raise ValueError(f"degenerate domain [{x[0]}, {x[-1]}]")
        if t[0] != 0.0:
            raise ValueError(f"time levels must start at 0, got {t[0]}")
        if np.any(np.diff(t) <= 0.0) or np.any(np.diff(x) <= 0.0):
            raise ValueError("time levels and space nodes must be strictly increasing")

        faces, element_faces = _connect(t, x)
        mesh = cls(t, x, faces, quasi_uniform_bound, element_faces)
        ratio = mesh.quasi_uniformity()
        if ratio > quasi_uniform_bound:
            raise ValueError(f"mesh is not quasi-uniform: max h_T / min h_T = {ratio:.4g} > {quasi_uniform_bound}")
        logger.debug(
            "mesh: %d slabs x %d cells, %d faces, h=%.4g", mesh.num_slabs, mesh.num_cells, len(faces), mesh.h
        )
        return mesh

    @property
    def num_slabs(self) -> int:
        return self.time_levels.size - 1

    @property
    def num_cells(self) -> int:
        return self.space_nodes.size - 1

    @property
    def num_elements(self) -> int:
        return self.num_slabs * self.num_cells

    @property
    def domain(self) -> Tuple[float, float]:
        return float(self.space_nodes[0]), float(self.space_nodes[-1])

    @property
    def T_final(self) -> float:
        return float(self.time_levels[-1])

    @property
    def dt(self) -> np.ndarray:
        return np.diff(self.time_levels)

    @property
    def dx(self) -> np.ndarray:
        return np.diff(self.space_nodes)

    @property
    def h_T(self) -> np.ndarray:
        """Element diameters, shape (num_slabs, num_cells)."""
        return np.hypot(self.dt[:, None], self.dx[None, :])

    @property
    def h(self) -> float:
        return float(self.h_T.max())

    def quasi_uniformity(self) -> float:
        h_T = self.h_T
        return float(h_T.max() / h_T.min())

    def element_id(self, slab: int, cell: int) -> int:
        if not (0 <= slab < self.num_slabs and 0 <= cell < self.num_cells):
            raise ValueError(f"no element at slab {slab}, cell {cell}")
        return slab * self.num_cells + cell

    def _check_element(self, element_id: int):
        if not 0 <= element_id < self.num_elements:
            raise ValueError(f"unknown element id {element_id}; mesh has {self.num_elements} elements")

    def element_slab(self, element_id: int) -> int:
        self._check_element(element_id)
        return element_id // self.num_cells

    def element_cell(self, element_id: int) -> int:
        self._check_element(element_id)
        return element_id % self.num_cells

    def element_bounds(self, element_id: int) -> Tuple[float, float, float, float]:
        """(t_n, t_{n+1}, x_i, x_{i+1})."""
        n, i = self.element_slab(element_id), self.element_cell(element_id)
        return (
            float(self.time_levels[n]),
            float(self.time_levels[n + 1]),
            float(self.space_nodes[i]),
            float(self.space_nodes[i + 1]),
        )

    def element_map(self, element_id: int) -> AffineMap:
        t0, t1, x0, x1 = self.element_bounds(element_id)
        return AffineMap.diagonal([t1 - t0, x1 - x0], [t0, x0])

    def element_faces(self, element_id: int) -> Tuple[int, int, int, int]:
        """Face indices (bottom, top, left, right)."""
        self._check_element(element_id)
        return self._element_faces[element_id]

    def faces_of_kind(self, kind: FaceKind) -> List[Face]:
        return [face for face in self.faces if face.kind is kind]


def _connect(t: np.ndarray, x: np.ndarray):
    num_slabs, num_cells = t.size - 1, x.size - 1
    faces: List[Face] = []
    bottom = np.empty((num_slabs + 1, num_cells), dtype=int)
    vertical = np.empty((num_slabs, num_cells + 1), dtype=int)

    def add(kind, normal, owner, neighbor, start, end) -> int:
        faces.append(Face(len(faces), kind, normal, owner, neighbor, start, end))
        return len(faces) - 1

    for n in range(num_slabs):
        for i in range(num_cells):
            owner = n * num_cells + i
            below = INITIAL if n == 0 else owner - num_cells
            bottom[n, i] = add(FaceKind.TIME_BOTTOM, (-1.0, 0.0), owner, below, (t[n], x[i]), (t[n], x[i + 1]))
        for j in range(num_cells + 1):
            start, end = (t[n], x[j]), (t[n + 1], x[j])
            if j == 0:
                vertical[n, j] = add(FaceKind.SPACE_BOUNDARY, (0.0, -1.0), n * num_cells, BOUNDARY, start, end)
            elif j == num_cells:
                owner = n * num_cells + num_cells - 1
                vertical[n, j] = add(FaceKind.SPACE_BOUNDARY, (0.0, 1.0), owner, BOUNDARY, start, end)
            else:
                owner = n * num_cells + j - 1
                vertical[n, j] = add(FaceKind.SPACE_INTERIOR, (0.0, 1.0), owner, owner + 1, start, end)
    n = num_slabs
    for i in range(num_cells):
        owner = (n - 1) * num_cells + i
        bottom[n, i] = add(FaceKind.TIME_TOP, (1.0, 0.0), owner, TERMINAL, (t[n], x[i]), (t[n], x[i + 1]))

    element_faces = tuple(
        (int(bottom[n, i]), int(bottom[n + 1, i]), int(vertical[n, i]), int(vertical[n, i + 1]))
        for n in range(num_slabs)
        for i in range(num_cells)
    )
    return faces, element_faces


def build_mesh(domain: Tuple[float, float], T_final: float, num_space_cells: int, num_slabs: int) -> SpaceTimeMesh:
    """Uniform tensor mesh with num_slabs slabs of num_space_cells cells each."""
    if num_space_cells < 1 or num_slabs < 1:
        raise ValueError(f"need at least one cell and one slab, got {num_space_cells} x {num_slabs}")
    x_left, x_right = domain
    if not x_left < x_right:
        raise ValueError(f"degenerate domain [{x_left}, {x_right}]")
    if not T_final > 0.0:
        raise ValueError(f"T_final must be positive, got {T_final}")
    return SpaceTimeMesh.from_levels(
        np.linspace(0.0, T_final, num_slabs + 1), np.linspace(x_left, x_right, num_space_cells + 1)
    )


def faces_of(mesh: SpaceTimeMesh, element_id: int) -> List[FaceView]:
    """The four faces of an element as (bottom, top, left, right) views."""
    bottom, top, left, right = mesh.element_faces(element_id)
    views = []
    for local_side, index in zip(("bottom", "top", "left", "right"), (bottom, top, left, right)):
        face = mesh.faces[index]
        side = 1 if face.owner_plus == element_id else -1
        views.append(FaceView(face, side, local_side, in_boundary_star=local_side != "top"))
    return views
