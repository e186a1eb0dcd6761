"""Aperture sizing from a required radar cross section.

The RCS of a square RIS panel of side D with aperture efficiency eta is

    sigma = eta * (4*pi / lambda^2) * D^4 * cos(theta_in) * cos(theta_out)

which is bounded by the eta = 1 specular flat-plate value. Inverting for D
gives the panel size needed to close a link budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Direction, Frequency


class UnreachableGeometryError(ValueError):
    """Raised when the requested scatter geometry cannot produce the RCS."""


@dataclass(frozen=True)
class ApertureSpec:
    """Square RIS aperture: side length, unit-cell pitch, and efficiency.

    cell_pitch_m defaults to half a wavelength at the design frequency.
    """

    side_m: float
    design_freq: Frequency
    cell_pitch_m: float | None = None
    aperture_efficiency: float = 1.0

    def __post_init__(self):
        if self.cell_pitch_m is None:
            object.__setattr__(self, "cell_pitch_m", self.design_freq.wavelength_m / 2.0)
        if self.cell_pitch_m <= 0:
            raise ValueError("cell pitch must be positive")
        if not (0.0 < self.aperture_efficiency <= 1.0):
            raise ValueError("aperture efficiency must be in (0, 1]")
        if self.side_m < self.cell_pitch_m:
            raise ValueError("aperture side must be at least one cell pitch")

    @classmethod
    def from_element_grid(
        cls,
        n_per_side: int,
        design_freq: Frequency,
        cell_pitch_m: float | None = None,
        aperture_efficiency: float = 1.0,
    ) -> "ApertureSpec":
        """Aperture sized to hold exactly n_per_side x n_per_side cells."""
        if n_per_side < 1:
            raise ValueError("n_per_side must be >= 1")
        pitch = cell_pitch_m if cell_pitch_m is not None else design_freq.wavelength_m / 2.0
        return cls(n_per_side * pitch, design_freq, pitch, aperture_efficiency)

    @property
    def n_per_side(self) -> int:
        """Cells per axis of the populated grid (nearest integer to D/pitch)."""
        return max(1, int(round(self.side_m / self.cell_pitch_m)))


def rcs(a: ApertureSpec, incident: Direction, outgoing: Direction) -> float:
    """RIS radar cross section in square meters."""
    lam = a.design_freq.wavelength_m
    return (
        a.aperture_efficiency
        * (4.0 * math.pi / lam**2)
        * a.side_m**4
        * math.cos(incident.theta)
        * math.cos(outgoing.theta)
    )


def solve_aperture_size(
    required_sigma_m2: float,
    eta: float,
    incident: Direction,
    outgoing: Direction,
    f: Frequency,
) -> float:
    """Side length D (m) whose RCS equals required_sigma_m2.

    Raises UnreachableGeometryError at grazing incidence or reflection, where
    the cosine product collapses and no finite aperture closes the link.
    """
    if required_sigma_m2 <= 0:
        raise ValueError("required RCS must be positive")
    if not (0.0 < eta <= 1.0):
        raise ValueError("aperture efficiency must be in (0, 1]")
    cos_product = math.cos(incident.theta) * math.cos(outgoing.theta)
    if cos_product <= 1e-12:
        raise UnreachableGeometryError(
            "unreachable geometry: cos(theta_in)*cos(theta_out) is zero at grazing angles"
        )
    lam = f.wavelength_m
    quartic = required_sigma_m2 * lam**2 / (4.0 * math.pi * eta * cos_product)
    return quartic**0.25


def element_count(a: ApertureSpec, per_axis_floor: bool = False) -> int:
    """Number of unit cells on the populated grid.

    Default rounds the exact area ratio (D/pitch)^2 to the nearest integer;
    per_axis_floor=True instead floors the per-axis count and squares it,
    matching a physically realizable layout.
    """
    ratio = a.side_m / a.cell_pitch_m
    if per_axis_floor:
        return int(math.floor(ratio)) ** 2
    return int(round(ratio**2))


def pec_bound_check(a: ApertureSpec, incident: Direction, outgoing: Direction) -> bool:
    """True iff the RCS does not exceed the specular PEC flat-plate limit."""
    pec = ApertureSpec(a.side_m, a.design_freq, a.cell_pitch_m, 1.0)
    return rcs(a, incident, outgoing) <= rcs(pec, incident, outgoing) * (1.0 + 1e-12)


@dataclass(frozen=True)
class EfficiencyLedger:
    """Decomposition of the lumped aperture efficiency into its budget lines."""

    passive_aperture_eff: float = 0.5
    insertion_loss_db: float = 3.0

    def __post_init__(self):
        if not (0.0 < self.passive_aperture_eff <= 1.0):
            raise ValueError("passive aperture efficiency must be in (0, 1]")
        if self.insertion_loss_db < 0:
            raise ValueError("insertion loss must be >= 0 dB")

    @property
    def resulting_eff(self) -> float:
        return self.passive_aperture_eff * 10.0 ** (-self.insertion_loss_db / 10.0)


def element_coordinates(a: ApertureSpec) -> tuple[np.ndarray, np.ndarray]:
    """Centered per-axis element coordinates (x, y) of the populated grid."""
    n = a.n_per_side
    coords = (np.arange(n) - (n - 1) / 2.0) * a.cell_pitch_m
    return coords, coords.copy()
