"""Quaternionic spectral theory on finite-dimensional right Hilbert spaces."""

from .errors import QSpectralError
from .qmat import QMatrix, adjoint, complex_adjoint, normal_decompose, operator_norm, polar_decompose
from .quat import E1, E2, E3, Quaternion, SpherePoint, slice_decompose, sphere_distance
from .spectrum import (
    pseudo_resolvent,
    s_resolvent_left,
    s_resolvent_right,
    s_spectrum,
    spectral_radius,
)

__all__ = [
    "E1",
    "E2",
    "E3",
    "QMatrix",
    "QSpectralError",
    "Quaternion",
    "SpherePoint",
    "adjoint",
    "complex_adjoint",
    "normal_decompose",
    "operator_norm",
    "polar_decompose",
    "pseudo_resolvent",
    "s_resolvent_left",
    "s_resolvent_right",
    "s_spectrum",
    "slice_decompose",
    "spectral_radius",
    "sphere_distance",
]

__version__ = "0.1.0"
