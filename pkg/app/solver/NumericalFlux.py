"""Monotone numerical fluxes F^ = {F(v)} . n + C_T [[v]] on space-time faces.

Time faces always use C_T = 1/2, which makes the flux the upwind value in time. On space
faces C_T is the Engquist-Osher integral or the Lax-Friedrichs supremum of |f'| between
the two traces; interior faces take half of it, boundary faces the full value.
"""
import logging
from enum import Enum
from typing import NamedTuple, Optional

import numpy as np

from app.law.ConservationLaw import ConservationLaw, space_time_flux

logger = logging.getLogger(__name__)


class FluxFamily(str, Enum):
    ENGQUIST_OSHER = "engquist_osher"
    LAX_FRIEDRICHS = "lax_friedrichs"


def flux_family(name) -> FluxFamily:
    try:
        return FluxFamily(name)
    except ValueError:
        choices = ", ".join(family.value for family in FluxFamily)
        raise ValueError(f"unknown flux family '{name}'; expected one of {choices}") from None


def signed_variation(law: ConservationLaw, upper, lower) -> np.ndarray:
    """int_lower^upper |f'(z)| dz, exact through the law's sonic points."""
    upper = np.asarray(upper, dtype=float)
    lower = np.broadcast_to(np.asarray(lower, dtype=float), upper.shape)
    lo, hi = np.minimum(upper, lower), np.maximum(upper, lower)
    breaks = [lo] + [np.clip(s, lo, hi) for s in law.sonic_points] + [hi]
    breaks = np.sort(np.stack(breaks), axis=0)
    total = np.abs(np.diff(law.flux(breaks), axis=0)).sum(axis=0)
    return np.sign(upper - lower) * total


def _speed_sup(law: ConservationLaw, a: np.ndarray, b: np.ndarray):
    """sup |f'| between a and b and which point attains it (+1 a, -1 b, 0 an interior extremum).

    Endpoints come first so that ties resolve to them.
    """
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    candidates = np.stack([b, a] + [np.clip(s, lo, hi) for s in law.speed_extrema])
    speeds = np.abs(law.speed(candidates))
    k = np.argmax(speeds, axis=0)
    where = np.where(k == 1, 1, np.where(k == 0, -1, 0))
    return np.take_along_axis(speeds, k[None], axis=0)[0], where


class FaceFluxTerms(NamedTuple):
    """Face integrand g = F^ - F(own) . n seen from the element owning `own`, with derivatives."""

    value: np.ndarray
    d_own: np.ndarray
    d_other: np.ndarray
    C: np.ndarray


def face_flux_terms(cfg, law: ConservationLaw, own, other, nx, boundary) -> FaceFluxTerms:
    """Vectorized space-face terms; nx is the x component of the element's outward normal.

    The coefficient is evaluated at the current traces and differentiated with them
    (one-sided where the Lax-Friedrichs supremum switches endpoints).
    """
    own = np.asarray(own, dtype=float)
    other = np.broadcast_to(np.asarray(other, dtype=float), own.shape)
    nx = np.broadcast_to(np.asarray(nx, dtype=float), own.shape)
    weight = np.where(np.broadcast_to(boundary, own.shape), 1.0, 0.5) * np.abs(nx)
    jump = own - other

    if cfg.flux_family is FluxFamily.ENGQUIST_OSHER:
        G = weight * signed_variation(law, own, other)
        dG_own = weight * np.abs(law.speed(own))
        dG_other = -weight * np.abs(law.speed(other))
        with np.errstate(divide="ignore", invalid="ignore"):
            C = np.where(jump != 0.0, G / jump, dG_own)
    else:
        sup, where = _speed_sup(law, own, other)
        C = weight * sup
        G = C * jump
        slope_own = weight * np.sign(law.speed(own)) * law.f_second(own) * (where == 1)
        slope_other = weight * np.sign(law.speed(other)) * law.f_second(other) * (where == -1)
        dG_own = C + jump * slope_own
        dG_other = -C + jump * slope_other

    cap = _cap(cfg, boundary, own.shape)
    if cap is not None:
        capped = C > cap
        if np.any(capped):
            logger.warning("flux coefficient capped on %d face points (largest %.4g)", int(capped.sum()), C.max())
            C = np.where(capped, cap, C)
            G = np.where(capped, C * jump, G)
            dG_own = np.where(capped, C, dG_own)
            dG_other = np.where(capped, -C, dG_other)

    value = 0.5 * (law.flux(other) - law.flux(own)) * nx + G
    d_own = -0.5 * law.speed(own) * nx + dG_own
    d_other = 0.5 * law.speed(other) * nx + dG_other
    return FaceFluxTerms(value, d_own, d_other, C)


def _cap(cfg, boundary, shape) -> Optional[np.ndarray]:
    interior_cap = getattr(cfg, "C0_interior", None)
    boundary_cap = getattr(cfg, "C0_boundary", None)
    if interior_cap is None and boundary_cap is None:
        return None
    interior_cap = np.inf if interior_cap is None else interior_cap
    boundary_cap = np.inf if boundary_cap is None else boundary_cap
    return np.where(np.broadcast_to(boundary, shape), boundary_cap, interior_cap)


def _check_normal(normal) -> np.ndarray:
    n = np.asarray(normal, dtype=float).ravel()
    if n.shape != (2,) or not np.isclose(np.hypot(*n), 1.0) or np.count_nonzero(n) != 1:
        raise ValueError(f"face normal must be one of (+-1, 0), (0, +-1), got {tuple(n)}")
    return n


def ct_coefficient(cfg, law: ConservationLaw, v_plus: float, v_minus: float, normal, is_boundary: bool) -> float:
    n = _check_normal(normal)
    if n[0] != 0.0:
        return 0.5
    terms = face_flux_terms(cfg, law, np.array([v_plus]), np.array([v_minus]), n[1], is_boundary)
    return float(terms.C[0])


def numerical_flux(cfg, law: ConservationLaw, v_plus: float, v_minus: float, normal, is_boundary: bool) -> float:
    """{F(v)} . n+ + C_T (v+ - v-)."""
    n = _check_normal(normal)
    C = ct_coefficient(cfg, law, v_plus, v_minus, n, is_boundary)
    average = 0.5 * (space_time_flux(law, v_plus) + space_time_flux(law, v_minus))
    return float(average @ n + C * (v_plus - v_minus))
