from app.element.AffineMap import AffineMap
from app.element.ReferenceElement import (
    ReferenceElement,
    build_reference,
    interpolate,
    interpolation_error,
    inverse_estimate_constant,
    stiffness_on_element,
)

__all__ = [
    "AffineMap",
    "ReferenceElement",
    "build_reference",
    "interpolate",
    "interpolation_error",
    "inverse_estimate_constant",
    "stiffness_on_element",
]
