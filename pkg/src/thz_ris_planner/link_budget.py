"""Bistatic RIS link budget: received power, receiver sensitivity, and the
radar cross section required to close a link.

The receive/transmit power ratio in dB is

    P_rx - P_tx = G_BS + G_T + sigma_RIS + 10*log10( (4*pi)^-3 * (lambda/(d1*d2))^2 )

with sigma_RIS in dBsm. Sensitivity follows the standard chain

    P_min = -174 dBm/Hz + 10*log10(B) + NF + SNR_req

where SNR_req comes from inverting the Gray-coded square M-QAM BER curve at
the target BER (Nyquist signaling, symbol rate equal to bandwidth).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import erfcinv

from .core import BistaticGeometry, Frequency

THERMAL_NOISE_DBM_HZ = -174.0  # kT at 290 K


@dataclass(frozen=True)
class LinkScenario:
    """Geometry, gains, and transmit power of one BS-RIS-terminal link."""

    geometry: BistaticGeometry
    f: Frequency
    tx_power_dbm: float
    bs_gain_dbi: float
    terminal_gain_dbi: float

    def __post_init__(self):
        for name in ("tx_power_dbm", "bs_gain_dbi", "terminal_gain_dbi"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


@dataclass(frozen=True)
class ReceiverSpec:
    """Receiver noise bandwidth, noise figure, and modulation target.

    modulation_order is the M of M-QAM; supported orders are 2 (BPSK), 4
    (QPSK), and square constellations 16, 64, 256, ...
    """

    bandwidth_hz: float
    noise_figure_db: float
    modulation_order: int = 4
    target_ber: float = 1e-6
    implementation_loss_db: float = 0.0

    def __post_init__(self):
        if self.bandwidth_hz <= 0:
            raise ValueError("bandwidth must be positive")
        if not (0.0 < self.target_ber < 0.5):
            raise ValueError("target BER must be in (0, 0.5)")
        _check_modulation_order(self.modulation_order)


@dataclass(frozen=True)
class LinkReport:
    rx_power_dbm: float
    sensitivity_dbm: float
    spreading_term_db: float

    @property
    def margin_db(self) -> float:
        return self.rx_power_dbm - self.sensitivity_dbm


def _check_modulation_order(m: int) -> None:
    if m in (2, 4):
        return
    if m >= 16:
        root = math.isqrt(m)
        bits = m.bit_length() - 1
        if root * root == m and 2**bits == m:
            return
    raise ValueError(f"unsupported modulation order M={m}; use 2, 4, or square M-QAM (16, 64, ...)")


def _q_inverse(p: float) -> float:
    """Inverse of the Gaussian tail function Q."""
    return math.sqrt(2.0) * float(erfcinv(2.0 * p))


def required_snr_db(modulation_order: int, target_ber: float) -> float:
    """SNR (dB) needed for the target BER with Gray-coded M-QAM.

    BPSK/QPSK use the exact relation BER = Q(sqrt(2*Eb/N0)); higher square
    orders invert BER ~ (4/log2 M)(1 - 1/sqrt(M)) Q(sqrt(3*SNR/(M-1))).
    """
    _check_modulation_order(modulation_order)
    m = modulation_order
    bits = math.log2(m)
    if m in (2, 4):
        ebn0 = _q_inverse(target_ber) ** 2 / 2.0
        snr = ebn0 * bits
    else:
        arg = target_ber * bits / (4.0 * (1.0 - 1.0 / math.sqrt(m)))
        if arg >= 0.5:
            raise ValueError("target BER too loose for this modulation order")
        snr = (m - 1) / 3.0 * _q_inverse(arg) ** 2
    return 10.0 * math.log10(snr)


def noise_floor_dbm(bandwidth_hz: float, noise_figure_db: float = 0.0) -> float:
    """Receiver noise power: -174 dBm/Hz + 10*log10(B) + NF."""
    if bandwidth_hz <= 0:
        raise ValueError("bandwidth must be positive")
    return THERMAL_NOISE_DBM_HZ + 10.0 * math.log10(bandwidth_hz) + noise_figure_db


def sensitivity(r: ReceiverSpec) -> float:
    """Minimum received power (dBm) that sustains the target BER."""
    return (
        noise_floor_dbm(r.bandwidth_hz, r.noise_figure_db)
        + required_snr_db(r.modulation_order, r.target_ber)
        + r.implementation_loss_db
    )


def spreading_term(geometry: BistaticGeometry, f: Frequency) -> float:
    """Bistatic spreading factor 10*log10((4*pi)^-3 * (lambda/(d1*d2))^2) in dB."""
    lam = f.wavelength_m
    return 10.0 * math.log10(
        (1.0 / (4.0 * math.pi) ** 3) * (lam / (geometry.d1_m * geometry.d2_m)) ** 2
    )


def received_power(s: LinkScenario, sigma_ris_dbsm: float) -> float:
    """Received power (dBm) for a given RIS radar cross section in dBsm."""
    return (
        s.tx_power_dbm
        + s.bs_gain_dbi
        + s.terminal_gain_dbi
        + sigma_ris_dbsm
        + spreading_term(s.geometry, s.f)
    )


def required_rcs_for_target(s: LinkScenario, target_rx_dbm: float) -> float:
    """RCS (dBsm) that makes the received power equal target_rx_dbm."""
    return (
        target_rx_dbm
        - s.tx_power_dbm
        - s.bs_gain_dbi
        - s.terminal_gain_dbi
        - spreading_term(s.geometry, s.f)
    )


def required_rcs(s: LinkScenario, r: ReceiverSpec) -> float:
    """RCS (dBsm) that closes the link exactly at the receiver sensitivity."""
    return required_rcs_for_target(s, sensitivity(r))


def evaluate_link(s: LinkScenario, sensitivity_dbm: float, sigma_ris_dbsm: float) -> LinkReport:
    """Assemble the received power, sensitivity, and margin into one report."""
    return LinkReport(
        rx_power_dbm=received_power(s, sigma_ris_dbsm),
        sensitivity_dbm=sensitivity_dbm,
        spreading_term_db=spreading_term(s.geometry, s.f),
    )
