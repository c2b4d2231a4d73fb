"""Digital low-pass filters and numerical differentiation for position streams.

Three filter families are supported: a recursive (IIR) Butterworth low-pass,
a windowed-sinc FIR low-pass, and Savitzky-Golay polynomial smoothing.  Every
design passes DC exactly (unity gain for constant inputs).  Filters can be
applied causally (single forward pass, suitable for real-time use) or in
zero-phase mode (forward-backward for Butterworth/FIR, a single centered pass
for Savitzky-Golay, which is already phase-free).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "FilterConfig",
    "FilterCoefficients",
    "FilterDesignError",
    "design",
    "apply_causal",
    "apply_zero_phase",
    "apply_filter",
    "differentiate",
    "frequency_response",
]


class FilterDesignError(ValueError):
    """Raised when a filter cannot be designed for the requested rate."""


@dataclass(frozen=True)
class FilterConfig:
    """Parameters selecting one filter family and its operating point.

    cutoff_hz applies to the butterworth and fir kinds, order to butterworth,
    window_seconds and poly_degree to the fir/savgol window designs.  mode
    selects causal (forward-only) or zero_phase application.
    """

    kind: str = "butterworth"
    cutoff_hz: float = 1.0
    order: int = 1
    window_seconds: float = 0.5
    poly_degree: int = 2
    mode: str = "zero_phase"

    def __post_init__(self) -> None:
        if self.kind not in ("butterworth", "fir", "savgol"):
            raise ValueError(f"unknown filter kind {self.kind!r}")
        if self.mode not in ("causal", "zero_phase"):
            raise ValueError(f"unknown filter mode {self.mode!r}")
        if self.kind == "butterworth" and self.order < 1:
            raise ValueError("butterworth order must be >= 1")
        if self.kind in ("fir", "savgol") and self.window_seconds <= 0:
            raise ValueError("window_seconds must be > 0")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "cutoff_hz": self.cutoff_hz,
            "order": self.order,
            "window_seconds": self.window_seconds,
            "poly_degree": self.poly_degree,
            "mode": self.mode,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FilterConfig":
        known = {k: data[k] for k in
                 ("kind", "cutoff_hz", "order", "window_seconds", "poly_degree", "mode")
                 if k in data}
        return cls(**known)


@dataclass(frozen=True)
class FilterCoefficients:
    """Realized difference-equation weights for one designed filter.

    Higher-order recursive designs are kept as a cascade of first/second-order
    sections for numerical robustness; ``numerator``/``denominator`` expose the
    equivalent single transfer function.  ``centered`` marks a symmetric
    non-causal kernel (Savitzky-Golay in zero-phase mode) that is applied as
    one centered pass instead of forward-backward.
    """

    sections: tuple[tuple[np.ndarray, np.ndarray], ...]
    design_rate: float
    kind: str
    centered: bool = False

    @property
    def numerator(self) -> np.ndarray:
        num = np.array([1.0])
        for b, _ in self.sections:
            num = np.polymul(num, b)
        return num

    @property
    def denominator(self) -> np.ndarray:
        den = np.array([1.0])
        for _, a in self.sections:
            den = np.polymul(den, a)
        return den

    @property
    def dc_gain(self) -> float:
        gain = 1.0
        for b, a in self.sections:
            gain *= float(np.sum(b) / np.sum(a))
        return gain

    @property
    def filter_length(self) -> int:
        return max(len(self.numerator), len(self.denominator))


def _odd_tap_count(window_seconds: float, rate: float) -> int:
    """Odd tap count nearest to window_seconds * rate (ties round up)."""
    target = window_seconds * rate
    lower = int(math.floor(target))
    if lower % 2 == 0:
        lower -= 1
    upper = lower + 2
    n = lower if (target - lower) < (upper - target) else upper
    return max(n, 1)


def _butterworth_sections(cutoff_hz: float, order: int, rate: float) -> list[tuple[np.ndarray, np.ndarray]]:
    # Analog prototype poles on the unit circle, scaled to the pre-warped
    # corner frequency, then mapped to z by the bilinear transform.
    warped = 2.0 * rate * math.tan(math.pi * cutoff_hz / rate)
    k2 = 2.0 * rate
    sections = []
    poles = [
        warped * complex(math.cos(theta), math.sin(theta))
        for theta in (
            math.pi / 2 + (2 * k - 1) * math.pi / (2 * order)
            for k in range(1, order // 2 + 1)
        )
    ]
    for p in poles:  # conjugate pairs -> biquads
        re = p.real
        mag2 = abs(p) ** 2
        a0 = k2 * k2 - 2.0 * re * k2 + mag2
        a1 = 2.0 * mag2 - 2.0 * k2 * k2
        a2 = k2 * k2 + 2.0 * re * k2 + mag2
        b = mag2 * np.array([1.0, 2.0, 1.0]) / a0
        a = np.array([1.0, a1 / a0, a2 / a0])
        sections.append((b, a))
    if order % 2 == 1:  # remaining real pole at -warped
        a0 = k2 + warped
        b = warped * np.array([1.0, 1.0]) / a0
        a = np.array([1.0, (warped - k2) / a0])
        sections.append((b, a))
    return sections


def _fir_taps(cutoff_hz: float, window_seconds: float, rate: float) -> np.ndarray:
    n = _odd_tap_count(window_seconds, rate)
    m = (n - 1) // 2
    k = np.arange(n) - m
    taps = (2.0 * cutoff_hz / rate) * np.sinc(2.0 * cutoff_hz / rate * k)
    if n > 1:
        taps *= 0.54 - 0.46 * np.cos(2.0 * math.pi * np.arange(n) / (n - 1))
    return taps / taps.sum()


def _savgol_taps(window_seconds: float, poly_degree: int, rate: float, trailing: bool) -> np.ndarray:
    n = _odd_tap_count(window_seconds, rate)
    if n < poly_degree + 1:
        raise FilterDesignError(
            f"savgol window of {n} samples is shorter than poly_degree+1={poly_degree + 1}"
        )
    if trailing:
        offsets = np.arange(-(n - 1), 1, dtype=float)
    else:
        m = (n - 1) // 2
        offsets = np.arange(-m, m + 1, dtype=float)
    vander = np.vander(offsets, poly_degree + 1, increasing=True)
    # Least-squares polynomial fit evaluated at offset 0: row 0 of the
    # pseudoinverse gives the constant coefficient of the fitted polynomial.
    return np.linalg.pinv(vander)[0]


def design(config: FilterConfig, rate: float) -> FilterCoefficients:
    """Design filter coefficients for the given sampling rate."""
    if rate <= 0:
        raise FilterDesignError("sampling rate must be > 0")
    if config.kind in ("butterworth", "fir") and not config.cutoff_hz < rate / 2:
        raise FilterDesignError(
            f"cutoff {config.cutoff_hz} Hz must be below the Nyquist frequency {rate / 2} Hz"
        )
    if config.kind == "butterworth":
        sections = _butterworth_sections(config.cutoff_hz, config.order, rate)
        return FilterCoefficients(tuple(sections), rate, config.kind)
    if config.kind == "fir":
        taps = _fir_taps(config.cutoff_hz, config.window_seconds, rate)
        return FilterCoefficients(((taps, np.array([1.0])),), rate, config.kind)
    taps = _savgol_taps(config.window_seconds, config.poly_degree, rate,
                        trailing=config.mode == "causal")
    if config.mode == "causal":
        # Trailing-window weights are indexed by offsets -(n-1)..0; reverse
        # them into difference-equation order b[j] -> x[i-j].
        taps = taps[::-1].copy()
    return FilterCoefficients(((taps, np.array([1.0])),), rate, config.kind,
                              centered=config.mode == "zero_phase")


def _causal_section(b: np.ndarray, a: np.ndarray, x: np.ndarray) -> np.ndarray:
    # Step-matched initialization: the filter history is seeded as if the
    # input had been constant at x[0] forever, so constants pass unchanged
    # from the very first sample.
    nb, na = len(b), len(a)
    if na == 1:
        pad = np.full(nb - 1, x[0])
        return np.convolve(np.concatenate([pad, x]), b / a[0], mode="valid")
    y = np.empty_like(x)
    dc = float(np.sum(b) / np.sum(a))
    xh = [x[0]] * (nb - 1)  # x[n-1], x[n-2], ...
    yh = [x[0] * dc] * (na - 1)
    for i in range(len(x)):
        acc = b[0] * x[i]
        for j in range(1, nb):
            acc += b[j] * (x[i - j] if i - j >= 0 else xh[j - i - 1])
        for j in range(1, na):
            acc -= a[j] * (y[i - j] if i - j >= 0 else yh[j - i - 1])
        y[i] = acc / a[0]
    return y


def apply_causal(coeffs: FilterCoefficients, series: Sequence[float]) -> np.ndarray:
    """Single forward pass of the difference equation (real-time variant)."""
    x = np.asarray(series, dtype=float)
    if x.size == 0:
        raise ValueError("series must not be empty")
    for b, a in coeffs.sections:
        x = _causal_section(b, a, x)
    return x


def _mirror_pad(x: np.ndarray, pad: int) -> np.ndarray:
    front = 2.0 * x[0] - x[pad:0:-1]
    back = 2.0 * x[-1] - x[-2:-pad - 2:-1]
    return np.concatenate([front, x, back])


def apply_zero_phase(coeffs: FilterCoefficients, series: Sequence[float]) -> np.ndarray:
    """Phase-free filtering for post-analysis.

    Butterworth/FIR run forward, then backward over the result; the centered
    Savitzky-Golay kernel needs only one pass.  Edges are stabilized by
    odd (mirror) extension of three filter lengths.
    """
    x = np.asarray(series, dtype=float)
    pad = 3 * coeffs.filter_length
    if x.size <= pad:
        raise ValueError(
            f"series of length {x.size} is too short for zero-phase filtering; "
            f"need at least {pad + 1} samples"
        )
    ext = _mirror_pad(x, pad)
    if coeffs.centered:
        taps = coeffs.sections[0][0]
        out = np.convolve(ext, taps[::-1], mode="same")
    else:
        out = apply_causal(coeffs, ext)
        out = apply_causal(coeffs, out[::-1])[::-1]
    return out[pad:pad + x.size]


def apply_filter(coeffs: FilterCoefficients, series: Sequence[float], mode: str) -> np.ndarray:
    if mode == "causal":
        return apply_causal(coeffs, series)
    if mode == "zero_phase":
        return apply_zero_phase(coeffs, series)
    raise ValueError(f"unknown filter mode {mode!r}")


def differentiate(series: Sequence[float], rate: float) -> np.ndarray:
    """Time derivative: central differences inside, one-sided second-order at the edges."""
    x = np.asarray(series, dtype=float)
    if x.size < 3:
        raise ValueError("differentiate needs at least 3 samples")
    d = np.empty_like(x)
    d[1:-1] = (x[2:] - x[:-2]) * (rate / 2.0)
    d[0] = (-3.0 * x[0] + 4.0 * x[1] - x[2]) * (rate / 2.0)
    d[-1] = (3.0 * x[-1] - 4.0 * x[-2] + x[-3]) * (rate / 2.0)
    return d


def frequency_response(coeffs: FilterCoefficients, freq_hz: np.ndarray | float) -> np.ndarray:
    """Complex response of the designed (single-pass) filter at the given frequencies.

    For centered kernels the reported response is that of the causal-shifted
    kernel; magnitudes are identical.
    """
    w = 2.0 * math.pi * np.atleast_1d(np.asarray(freq_hz, dtype=float)) / coeffs.design_rate
    z = np.exp(-1j * w)
    resp = np.ones_like(z, dtype=complex)
    for b, a in coeffs.sections:
        resp *= np.polynomial.polynomial.polyval(z, b) / np.polynomial.polynomial.polyval(z, a)
    return resp
