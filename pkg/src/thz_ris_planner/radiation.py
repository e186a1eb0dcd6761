"""Far-field array-factor engine for programmed reflection profiles.

The radiated field of a profile with coefficients c_n at positions r_n is

    E(u) = EF(theta) * sum_n c_n * exp(j * k(f) * r_n . u)

with k(f) = 2*pi*f/c and the per-element field factor EF(theta) =
sqrt(cos(theta)), so element power falls as cos(theta). The programmed phases
inside c_n are fixed at the design frequency and frequency-flat; evaluating at
f != f0 is what produces beam squint.

Three evaluation routes are provided:

* array_factor_direct: exact summation, the reference oracle;
* array_factor_fft: zero-padded 2-D DFT on the (u, v) lattice, equal to the
  direct sum at lattice points;
* a tensor-grid evaluator used internally by the directivity quadrature.

Directivity integrates |E|^2 over the front hemisphere by the trapezoid rule
with the sin(theta) Jacobian on a grid refined around the main lobe. A closed
form for the same integral on a uniform lattice,

    P = sum_{n,m} c_n conj(c_m) * 2*pi*J1(k*d_nm)/(k*d_nm),

follows from integrating the cos(theta) element power pattern over the
hemisphere; it backs the fast squint sweep and serves as an independent
cross-check of the quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve
from scipy.special import j1

from .aperture import ApertureSpec
from .core import BROADSIDE, SPEED_OF_LIGHT, Direction, Frequency
from .surface import PhaseProfile, TaperSpec, UNIFORM_TAPER, quantize_profile, synthesize_profile

BEAMWIDTH_FACTOR = 0.886  # uniform-aperture 3 dB beamwidth in units of lambda/D


class GridResolutionError(ValueError):
    """Raised when the angular grid under-resolves the main lobe."""


class FrequencySpanError(ValueError):
    """Raised when a squint sweep band is too narrow to bracket the 3 dB region."""


@dataclass
class RadiationPattern:
    """Sampled far-field quantities on either a (u, v) or (theta, phi) grid.

    kind "uv": ax1/ax2 are direction cosines, field holds complex E (NaN in
    the invisible region). kind "sphere": ax1 is theta (rad), ax2 is phi
    (rad), directivity_dbi holds 4*pi*|E|^2 / total_power in dB.
    """

    frequency_hz: float
    kind: str
    ax1: np.ndarray
    ax2: np.ndarray
    field: np.ndarray | None = None
    directivity_dbi: np.ndarray | None = None
    total_power: float | None = None

    def peak_directivity(self) -> tuple[float, Direction]:
        """Peak directivity in dBi and its direction (sphere patterns only)."""
        if self.directivity_dbi is None:
            raise ValueError("pattern carries no directivity samples")
        flat = int(np.argmax(self.directivity_dbi))
        i, j = np.unravel_index(flat, self.directivity_dbi.shape)
        return float(self.directivity_dbi[i, j]), Direction(float(self.ax1[i]), float(self.ax2[j]))

    def peak_uv(self) -> tuple[float, float, float]:
        """(|E|, u, v) at the strongest visible lattice point (uv patterns only)."""
        if self.field is None:
            raise ValueError("pattern carries no field samples")
        mag = np.abs(self.field)
        mag = np.where(np.isnan(mag), -1.0, mag)
        flat = int(np.argmax(mag))
        i, j = np.unravel_index(flat, mag.shape)
        return float(mag[i, j]), float(self.ax1[i]), float(self.ax2[j])


@dataclass
class SquintReport:
    """Gain-vs-frequency trace at the design angle and the extracted 3 dB band."""

    design_freq_hz: float
    target: Direction
    freq_hz: np.ndarray
    gain_dbi: np.ndarray
    bw_3db_hz: float
    fractional_bw_pct: float
    saturated: bool = False


@dataclass
class QuantizationReport:
    """Peak directivity per quantization setting and the loss vs continuous."""

    bits: list[int]
    peak_dbi: list[float]
    continuous_dbi: float

    @property
    def losses_db(self) -> list[float]:
        return [self.continuous_dbi - p for p in self.peak_dbi]


def _element_factor(theta: np.ndarray) -> np.ndarray:
    return np.sqrt(np.maximum(np.cos(theta), 0.0))


def _wavenumber(f: Frequency) -> float:
    return 2.0 * math.pi * f.hertz / SPEED_OF_LIGHT


def array_factor_direct(
    p: PhaseProfile, f: Frequency, directions: list[Direction]
) -> np.ndarray:
    """Exact complex field at each direction by direct summation (the oracle).

    Summation order is fixed (C order over the element grid) so results are
    reproducible bit-for-bit.
    """
    k = _wavenumber(f)
    gx, gy = np.meshgrid(p.x_m, p.y_m, indexing="ij")
    out = np.empty(len(directions), dtype=complex)
    for idx, d in enumerate(directions):
        u, v = d.transverse()
        phase = k * (gx * u + gy * v)
        out[idx] = np.sum(p.coefficients * np.exp(1j * phase)) * math.sqrt(
            max(math.cos(d.theta), 0.0)
        )
    return out


def _check_uniform_lattice(p: PhaseProfile) -> None:
    for ax in (p.x_m, p.y_m):
        if ax.size > 1:
            steps = np.diff(ax)
            if not np.allclose(steps, p.cell_pitch_m, rtol=1e-9, atol=0.0):
                raise ValueError("FFT path requires uniform lattice")


def array_factor_fft(p: PhaseProfile, f: Frequency, uv_oversample: int = 4) -> RadiationPattern:
    """Complex field on the (u, v) lattice via a zero-padded 2-D DFT.

    The lattice spacing is lambda/(pitch * n * uv_oversample) per axis; at
    those points the result equals array_factor_direct to machine precision.
    Points outside the visible region u^2 + v^2 <= 1 are NaN.
    """
    if uv_oversample < 1:
        raise ValueError("uv_oversample must be >= 1")
    _check_uniform_lattice(p)
    nx, ny = p.rows, p.cols
    lx, ly = nx * uv_oversample, ny * uv_oversample

    spectrum = np.fft.ifft2(p.coefficients, s=(lx, ly)) * (lx * ly)
    spectrum = np.fft.fftshift(spectrum)
    alpha = np.fft.fftshift(np.fft.fftfreq(lx))  # pitch * u / lambda
    beta = np.fft.fftshift(np.fft.fftfreq(ly))

    lam = f.wavelength_m
    u = alpha * lam / p.cell_pitch_m
    v = beta * lam / p.cell_pitch_m

    # grid centering: x_i = (i - (nx-1)/2) * pitch
    centering = np.exp(-2j * math.pi * alpha * (nx - 1) / 2.0)[:, None] * np.exp(
        -2j * math.pi * beta * (ny - 1) / 2.0
    )[None, :]
    field = spectrum * centering

    uu, vv = np.meshgrid(u, v, indexing="ij")
    r2 = uu**2 + vv**2
    visible = r2 <= 1.0
    ef = np.zeros_like(r2)
    ef[visible] = (1.0 - r2[visible]) ** 0.25  # sqrt(cos(theta))
    field = np.where(visible, field * ef, np.nan + 0j)

    return RadiationPattern(frequency_hz=f.hertz, kind="uv", ax1=u, ax2=v, field=field)


def _field_on_sphere_grid(
    p: PhaseProfile, f: Frequency, theta: np.ndarray, phi: np.ndarray
) -> np.ndarray:
    """Complex field on the tensor grid theta x phi, element factor included."""
    k = _wavenumber(f)
    cos_phi = np.cos(phi)
    sin_phi = np.sin(phi)
    out = np.empty((theta.size, phi.size), dtype=complex)
    for it, th in enumerate(theta):
        st = math.sin(th)
        ax = np.exp(1j * k * np.outer(p.x_m, st * cos_phi))
        by = np.exp(1j * k * np.outer(p.y_m, st * sin_phi))
        out[it] = np.einsum("ip,ip->p", ax, p.coefficients @ by)
    return out * _element_factor(theta)[:, None]


def analytical_hpbw(p: PhaseProfile, f: Frequency) -> float:
    """Uniform-aperture 3 dB beamwidth estimate (rad) used as a grid guard."""
    span = max(p.rows, p.cols) * p.cell_pitch_m
    return BEAMWIDTH_FACTOR * f.wavelength_m / span


def directivity(
    p: PhaseProfile,
    f: Frequency | None = None,
    grid_resolution: float = math.radians(0.05),
    coarse_resolution: float = math.radians(0.5),
    window: float = math.radians(2.0),
) -> RadiationPattern:
    """Directivity over the front hemisphere, in dBi.

    The total radiated power is integrated by the trapezoid rule with the
    sin(theta) Jacobian on a (theta, phi) grid: coarse_resolution everywhere,
    grid_resolution inside a window around the main lobe. grid_resolution
    must resolve the analytical beamwidth (at most half of it).
    """
    if f is None:
        f = p.design_freq
    hpbw = analytical_hpbw(p, f)
    if grid_resolution > hpbw / 2.0:
        raise GridResolutionError(
            f"grid resolution {math.degrees(grid_resolution):.3f} deg under-resolves the "
            f"{math.degrees(hpbw):.3f} deg main lobe; use at most {math.degrees(hpbw / 2):.3f} deg"
        )
    window = max(window, 2.0 * hpbw)

    # locate the main lobe on an oversampled uv lattice
    _, upk, vpk = array_factor_fft(p, f, uv_oversample=4).peak_uv()
    r = min(math.hypot(upk, vpk), 1.0)
    theta_pk = math.asin(r)
    phi_pk = math.atan2(vpk, upk) % (2.0 * math.pi)

    eps = 1e-12
    theta_coarse = np.arange(0.0, math.pi / 2 + eps, coarse_resolution)
    theta_fine = np.arange(
        max(0.0, theta_pk - window), min(math.pi / 2, theta_pk + window) + eps, grid_resolution
    )
    theta = np.unique(np.concatenate([theta_coarse, [math.pi / 2], theta_fine]))

    phi_parts = [np.arange(0.0, 2.0 * math.pi + eps, coarse_resolution), np.array([2.0 * math.pi])]
    if theta_pk > window:
        phi_fine = np.arange(phi_pk - window, phi_pk + window + eps, grid_resolution)
        phi_parts.append(np.mod(phi_fine, 2.0 * math.pi))
    phi = np.unique(np.concatenate(phi_parts))

    e2 = np.abs(_field_on_sphere_grid(p, f, theta, phi)) ** 2
    inner = np.trapezoid(e2 * np.sin(theta)[:, None], x=phi, axis=1)
    total = float(np.trapezoid(inner, x=theta))

    with np.errstate(divide="ignore"):
        dbi = 10.0 * np.log10(4.0 * math.pi * e2 / total)
    return RadiationPattern(
        frequency_hz=f.hertz,
        kind="sphere",
        ax1=theta,
        ax2=phi,
        directivity_dbi=dbi,
        total_power=total,
    )


def hemisphere_power_exact(p: PhaseProfile, f: Frequency | None = None) -> float:
    """Closed-form hemisphere integral of |E|^2 for a uniform lattice."""
    if f is None:
        f = p.design_freq
    _check_uniform_lattice(p)
    corr, rho = _lattice_autocorrelation(p)
    return _power_from_autocorrelation(corr, rho, _wavenumber(f))


def _lattice_autocorrelation(p: PhaseProfile) -> tuple[np.ndarray, np.ndarray]:
    c = p.coefficients
    corr = fftconvolve(c, np.conj(c[::-1, ::-1]))
    dx = (np.arange(2 * p.rows - 1) - (p.rows - 1)) * p.cell_pitch_m
    dy = (np.arange(2 * p.cols - 1) - (p.cols - 1)) * p.cell_pitch_m
    rho = np.hypot(dx[:, None], dy[None, :])
    return corr, rho


def _power_from_autocorrelation(corr: np.ndarray, rho: np.ndarray, k: float) -> float:
    kr = k * rho
    kernel = np.full_like(rho, math.pi)
    mask = kr > 1e-12
    kernel[mask] = 2.0 * math.pi * j1(kr[mask]) / kr[mask]
    return float(np.real(np.sum(corr * kernel)))


def gain_at(p: PhaseProfile, f: Frequency, direction: Direction) -> float:
    """Directivity (dBi) at one direction, normalized by the exact power."""
    e = array_factor_direct(p, f, [direction])[0]
    power = hemisphere_power_exact(p, f)
    return 10.0 * math.log10(4.0 * math.pi * abs(e) ** 2 / power)


def principal_plane_cut(
    p: PhaseProfile,
    f: Frequency | None = None,
    phi: float = 0.0,
    theta_step: float = math.radians(0.1),
    total_power: float | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Directivity cut through the plane at azimuth phi.

    Returns (theta_deg, dbi) with signed theta: negative angles lie at
    phi + 180 deg. total_power defaults to the closed-form hemisphere
    integral.
    """
    if f is None:
        f = p.design_freq
    if total_power is None:
        total_power = hemisphere_power_exact(p, f)
    theta = np.arange(-math.pi / 2, math.pi / 2 + 1e-12, theta_step)
    dirs = [
        Direction(abs(t), phi if t >= 0 else phi + math.pi) for t in theta
    ]
    e = array_factor_direct(p, f, dirs)
    with np.errstate(divide="ignore"):
        dbi = 10.0 * np.log10(4.0 * math.pi * np.abs(e) ** 2 / total_power)
    return np.degrees(theta), dbi


def quantization_loss(
    a: ApertureSpec,
    outgoing: Direction,
    bits_list: list[int],
    taper: TaperSpec = UNIFORM_TAPER,
    incident: Direction = BROADSIDE,
    grid_resolution: float = math.radians(0.05),
) -> QuantizationReport:
    """Peak directivity per quantization setting plus the continuous reference."""
    continuous = synthesize_profile(a, incident, outgoing, taper)
    d_cont, _ = directivity(continuous, grid_resolution=grid_resolution).peak_directivity()
    peaks = []
    for bits in bits_list:
        quantized = quantize_profile(continuous, bits)
        d_b, _ = directivity(quantized, grid_resolution=grid_resolution).peak_directivity()
        peaks.append(d_b)
    return QuantizationReport(bits=list(bits_list), peak_dbi=peaks, continuous_dbi=d_cont)


def squint_sweep(
    a: ApertureSpec,
    incident: Direction,
    outgoing: Direction,
    taper: TaperSpec = UNIFORM_TAPER,
    bits: int | None = None,
    f_span_hz: float = 20e9,
    n_samples: int = 81,
) -> SquintReport:
    """Gain at the design angle versus frequency, with the 3 dB band extracted.

    The profile phases stay frozen at the design frequency; gain at each
    sample is the directivity toward the target, normalized by the exact
    hemisphere power at that frequency. Crossings of the -3 dB level are
    located by linear interpolation between samples.

    If the gain never falls 3 dB below its f0 value anywhere in the band
    (e.g. a frequency-flat broadside profile) the report saturates at
    f_span_hz. If only one crossing lies inside the band the sweep cannot
    bracket the region and FrequencySpanError asks for a larger span.
    """
    if n_samples < 11 or n_samples % 2 == 0:
        raise ValueError("n_samples must be odd and >= 11 so f0 lies on the grid")
    f0 = a.design_freq
    if not (0.0 < f_span_hz < f0.hertz):
        raise ValueError("f_span must be positive and below the design frequency")

    profile = synthesize_profile(a, incident, outgoing, taper)
    if bits is not None:
        profile = quantize_profile(profile, bits)

    freqs = f0.hertz + np.linspace(-f_span_hz / 2.0, f_span_hz / 2.0, n_samples)
    k_per_f = 2.0 * math.pi * freqs / SPEED_OF_LIGHT

    u_t, v_t = outgoing.transverse()
    gx, gy = np.meshgrid(profile.x_m, profile.y_m, indexing="ij")
    projection = gx * u_t + gy * v_t
    ef = math.sqrt(max(math.cos(outgoing.theta), 0.0))
    corr, rho = _lattice_autocorrelation(profile)

    gain = np.empty(n_samples)
    for i, k in enumerate(k_per_f):
        e = np.sum(profile.coefficients * np.exp(1j * k * projection)) * ef
        power = _power_from_autocorrelation(corr, rho, k)
        gain[i] = 10.0 * math.log10(4.0 * math.pi * abs(e) ** 2 / power)

    mid = n_samples // 2
    rel = gain - gain[mid]
    lo = mid
    while lo > 0 and rel[lo - 1] >= -3.0:
        lo -= 1
    hi = mid
    while hi < n_samples - 1 and rel[hi + 1] >= -3.0:
        hi += 1
    lo_crossed = lo > 0
    hi_crossed = hi < n_samples - 1

    if not lo_crossed and not hi_crossed:
        bw = f_span_hz
        saturated = True
    elif lo_crossed != hi_crossed:
        raise FrequencySpanError(
            "the -3 dB region extends past a band edge; increase f_span"
        )
    else:
        f_lo = _interp_crossing(freqs[lo - 1], freqs[lo], rel[lo - 1], rel[lo])
        f_hi = _interp_crossing(freqs[hi + 1], freqs[hi], rel[hi + 1], rel[hi])
        bw = f_hi - f_lo
        saturated = False

    return SquintReport(
        design_freq_hz=f0.hertz,
        target=outgoing,
        freq_hz=freqs,
        gain_dbi=gain,
        bw_3db_hz=bw,
        fractional_bw_pct=100.0 * bw / f0.hertz,
        saturated=saturated,
    )


def _interp_crossing(f_out: float, f_in: float, rel_out: float, rel_in: float) -> float:
    """Frequency where the relative gain crosses -3 dB between two samples."""
    if rel_in == rel_out:
        return f_in
    frac = (-3.0 - rel_out) / (rel_in - rel_out)
    return f_out + frac * (f_in - f_out)


def squint_vs_angle(
    a: ApertureSpec,
    incident: Direction,
    outgoing_list: list[Direction],
    taper: TaperSpec = UNIFORM_TAPER,
    bits: int | None = None,
    f_span_hz: float = 20e9,
    n_samples: int = 81,
) -> list[SquintReport]:
    """One squint sweep per outgoing direction (the bandwidth-vs-angle curve)."""
    return [
        squint_sweep(a, incident, outgoing, taper, bits, f_span_hz, n_samples)
        for outgoing in outgoing_list
    ]
