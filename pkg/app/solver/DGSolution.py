"""Piecewise polynomial space-time solution, one coefficient vector per element."""
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np

from app.element.ReferenceElement import ReferenceElement
from app.law.ConservationLaw import ConservationLaw
from app.law.ProblemData import ProblemData
from app.mesh.SpaceTimeMesh import SpaceTimeMesh

logger = logging.getLogger(__name__)

DUMP_HEADER = "# dgshock solution"


@dataclass(eq=False)
class DGSolution:
    mesh: SpaceTimeMesh
    ref: ReferenceElement
    law: Optional[ConservationLaw] = None
    problem: Optional[ProblemData] = None
    cfg: Optional[object] = None
    coeffs: np.ndarray = None
    solved: int = 0
    # frozen stabilization coefficients of the final Newton solve of each slab
    delta: Optional[np.ndarray] = None
    eps_hat: Optional[np.ndarray] = None
    reports: List[object] = field(default_factory=list)

    def __post_init__(self):
        shape = (self.mesh.num_slabs, self.mesh.num_cells, self.ref.n_dof)
        if self.coeffs is None:
            self.coeffs = np.zeros(shape)
        self.coeffs = np.asarray(self.coeffs, dtype=float)
        if self.coeffs.shape != shape:
            raise ValueError(f"coefficient array has shape {self.coeffs.shape}, mesh and element need {shape}")
        if not np.all(np.isfinite(self.coeffs)):
            raise ValueError("solution coefficients must be finite")
        if self.delta is None:
            self.delta = np.zeros((self.mesh.num_slabs, self.mesh.num_cells, self.ref.quad_weights.size))
        if self.eps_hat is None:
            self.eps_hat = np.zeros((self.mesh.num_slabs, self.mesh.num_cells))
        self._has_frozen = np.zeros(self.mesh.num_slabs, dtype=bool)

    @property
    def p(self) -> int:
        return self.ref.p

    def store_slab(self, slab: int, U: np.ndarray, delta: np.ndarray, eps_hat: np.ndarray):
        if not np.all(np.isfinite(U)):
            raise ValueError(f"slab {slab}: non-finite coefficients")
        self.coeffs[slab] = U
        self.delta[slab] = delta
        self.eps_hat[slab] = eps_hat
        self._has_frozen[slab] = True
        self.solved = max(self.solved, slab + 1)

    def has_frozen_coefficients(self, slab: int) -> bool:
        return bool(self._has_frozen[slab])

    def element_coefficients(self, element_id: int) -> np.ndarray:
        slab, cell = self.mesh.element_slab(element_id), self.mesh.element_cell(element_id)
        return self.coeffs[slab, cell]

    def nodal_power(self, q: int) -> np.ndarray:
        """Coefficients of the Lagrange interpolant of U^q."""
        return self.coeffs**q

    # traces on the spatial face rule; all have shape (num_cells, len(s))

    def _face_points(self, s):
        return self.ref.face_points_1d if s is None else np.asarray(s, dtype=float)

    def initial_nodal(self) -> np.ndarray:
        """u0 at the spatial Lagrange nodes of every cell, shape (num_cells, p + 1)."""
        z = self.ref.nodes[: self.p + 1, 1]
        x = self.mesh.space_nodes[:-1, None] + self.mesh.dx[:, None] * z[None, :]
        values = np.asarray(self.problem.u0(x), dtype=float) * np.ones_like(x)
        if not np.all(np.isfinite(values)):
            raise ValueError("initial datum is not finite at the interpolation nodes")
        return values

    def incoming_nodal(self, slab: int) -> np.ndarray:
        """The minus trace at t_slab on the spatial nodes: I u0 or the previous slab's top."""
        if slab == 0:
            return self.initial_nodal()
        z = self.ref.nodes[: self.p + 1, 1]
        points = np.column_stack([np.ones_like(z), z])
        return self.coeffs[slab - 1] @ self.ref.tabulate(points)[0]

    def incoming_trace(self, slab: int, s=None) -> np.ndarray:
        values_1d, _ = self.ref.tabulate_1d(self._face_points(s))
        return self.incoming_nodal(slab) @ values_1d

    def top_trace(self, slab: int, s=None) -> np.ndarray:
        s = self._face_points(s)
        return self.coeffs[slab] @ self.ref.tabulate(np.column_stack([np.ones_like(s), s]))[0]

    def bottom_trace(self, slab: int, s=None) -> np.ndarray:
        s = self._face_points(s)
        return self.coeffs[slab] @ self.ref.tabulate(np.column_stack([np.zeros_like(s), s]))[0]

    def locate(self, t, x, side: str = "below"):
        """Slab, cell and reference coordinates of (t, x); at a slab interface `side` picks the limit."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        x = np.atleast_1d(np.asarray(x, dtype=float))
        t, x = np.broadcast_arrays(t, x)
        levels, nodes = self.mesh.time_levels, self.mesh.space_nodes
        if np.any(t < levels[0]) or np.any(t > levels[-1]):
            raise ValueError(f"time outside [0, {levels[-1]}]")
        if np.any(x < nodes[0]) or np.any(x > nodes[-1]):
            raise ValueError(f"point outside [{nodes[0]}, {nodes[-1]}]")
        search = "left" if side == "below" else "right"
        slab = np.clip(np.searchsorted(levels, t, side=search) - 1, 0, self.mesh.num_slabs - 1)
        cell = np.clip(np.searchsorted(nodes, x, side="right") - 1, 0, self.mesh.num_cells - 1)
        t_hat = (t - levels[slab]) / self.mesh.dt[slab]
        x_hat = (x - nodes[cell]) / self.mesh.dx[cell]
        return slab, cell, np.column_stack([t_hat.ravel(), x_hat.ravel()]), t.shape

    def evaluate(self, t, x, side: str = "below") -> np.ndarray:
        slab, cell, ref_points, shape = self.locate(t, x, side)
        values, _ = self.ref.tabulate(ref_points)
        coeffs = self.coeffs[slab.ravel(), cell.ravel()]
        return np.einsum("pn,np->p", coeffs, values).reshape(shape)

    def time_slice(self, t: float, points, side: str = "below") -> np.ndarray:
        points = np.asarray(points, dtype=float)
        return self.evaluate(np.full_like(points, t), points, side)

    def dump(self, path) -> Path:
        """Plain-text record per element (slab, element id, coefficients), bit-exact via repr."""
        path = Path(path)
        lines = [
            f"{DUMP_HEADER} p={self.p} slabs={self.mesh.num_slabs} cells={self.mesh.num_cells} solved={self.solved}"
        ]
        for slab in range(self.mesh.num_slabs):
            for cell in range(self.mesh.num_cells):
                element = self.mesh.element_id(slab, cell)
                values = " ".join(repr(float(c)) for c in self.coeffs[slab, cell])
                lines.append(f"{slab} {element} {values}")
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        logger.debug("wrote %s (%d elements)", path, self.mesh.num_elements)
        return path

    @classmethod
    def load(cls, path, mesh: SpaceTimeMesh, ref: ReferenceElement, law=None, problem=None, cfg=None) -> "DGSolution":
        text = Path(path).read_text(encoding="utf-8").splitlines()
        if not text or not text[0].startswith(DUMP_HEADER):
            raise ValueError(f"{path}: not a solution dump")
        meta = dict(item.split("=") for item in text[0][len(DUMP_HEADER):].split())
        if int(meta["p"]) != ref.p or int(meta["slabs"]) != mesh.num_slabs or int(meta["cells"]) != mesh.num_cells:
            raise ValueError(f"{path}: dump for p={meta['p']} {meta['slabs']}x{meta['cells']} does not match the mesh")
        coeffs = np.zeros((mesh.num_slabs, mesh.num_cells, ref.n_dof))
        seen = 0
        for number, line in enumerate(text[1:], start=2):
            if not line.strip():
                continue
            fields = line.split()
            slab, element = int(fields[0]), int(fields[1])
            values = [float(v) for v in fields[2:]]
            if len(values) != ref.n_dof or mesh.element_slab(element) != slab:
                raise ValueError(f"{path}:{number}: malformed element record")
            coeffs[slab, mesh.element_cell(element)] = values
            seen += 1
        if seen != mesh.num_elements:
            raise ValueError(f"{path}: expected {mesh.num_elements} element records, found {seen}")
        return cls(mesh, ref, law, problem, cfg, coeffs=coeffs, solved=int(meta["solved"]))
