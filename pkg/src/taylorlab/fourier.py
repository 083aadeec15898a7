"""Truncated Fourier calculus on the unit-period interval.

Everything downstream works with complex trigonometric polynomials

    f(x) = sum_{|n| <= M} c_n exp(2 pi i n x)

stored densely over the symmetric mode window [-M, M].  Series are immutable;
all operations are pure and return new instances.  Products are exact linear
convolutions, optionally truncated with an explicit tail diagnostic, so that
operator identities downstream can be verified to rounding accuracy.

Conventions:

* inner products conjugate the second argument: ``inner(f, g) = int f conj(g)``;
* the mean-removal projector P zeroes the n = 0 coefficient;
* ``antiderivative_zero_mean`` is the inverse vertical derivative P int P,
  acting as c_n / (2 pi i n) on n != 0 and sending the mean to zero.  It is
  anti-self-adjoint.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import AliasingWarning, TruncationMismatch

TWO_PI = 2.0 * np.pi

__all__ = [
    "FourierSeries",
    "multiply",
    "integrate_product",
    "multiplication_matrix",
    "collocation",
    "inverse_collocation",
    "allclose",
]


@dataclass(frozen=True, eq=False)
class FourierSeries:
    """Dense coefficients c_n over n in [-M, M]; ``coeffs[n + M]`` is c_n."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.array(self.coeffs, dtype=np.complex128)
        if arr.ndim != 1 or arr.size % 2 == 0:
            raise ValueError("coefficients must form a 1-d array of odd length")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------

    @classmethod
    def zeros(cls, truncation: int) -> "FourierSeries":
        return cls(np.zeros(2 * truncation + 1, dtype=np.complex128))

    @classmethod
    def constant(cls, value: complex, truncation: int = 0) -> "FourierSeries":
        c = np.zeros(2 * truncation + 1, dtype=np.complex128)
        c[truncation] = value
        return cls(c)

    @classmethod
    def exponential(cls, n: int, truncation: int, amplitude: complex = 1.0) -> "FourierSeries":
        """amplitude * exp(2 pi i n x)."""
        if abs(n) > truncation:
            raise ValueError(f"mode {n} outside window [-{truncation}, {truncation}]")
        c = np.zeros(2 * truncation + 1, dtype=np.complex128)
        c[n + truncation] = amplitude
        return cls(c)

    @classmethod
    def cosine(cls, n: int, truncation: int, amplitude: float = 1.0) -> "FourierSeries":
        """amplitude * cos(2 pi n x)."""
        if n == 0:
            return cls.constant(amplitude, truncation)
        if abs(n) > truncation:
            raise ValueError(f"mode {n} outside window [-{truncation}, {truncation}]")
        c = np.zeros(2 * truncation + 1, dtype=np.complex128)
        c[n + truncation] = 0.5 * amplitude
        c[-n + truncation] = 0.5 * amplitude
        return cls(c)

    @classmethod
    def sine(cls, n: int, truncation: int, amplitude: float = 1.0) -> "FourierSeries":
        """amplitude * sin(2 pi n x)."""
        if n == 0:
            return cls.zeros(truncation)
        if abs(n) > truncation:
            raise ValueError(f"mode {n} outside window [-{truncation}, {truncation}]")
        c = np.zeros(2 * truncation + 1, dtype=np.complex128)
        c[n + truncation] = -0.5j * amplitude
        c[-n + truncation] = 0.5j * amplitude
        return cls(c)

    @classmethod
    def from_triples(cls, triples, truncation: int | None = None) -> "FourierSeries":
        """Rebuild a series from ``[n, re, im]`` rows (see :meth:`to_triples`)."""
        triples = list(triples)
        if truncation is None:
            truncation = max((abs(int(t[0])) for t in triples), default=0)
        c = np.zeros(2 * truncation + 1, dtype=np.complex128)
        for n, re, im in triples:
            n = int(n)
            if abs(n) > truncation:
                raise ValueError(f"mode {n} outside window [-{truncation}, {truncation}]")
            c[n + truncation] += re + 1j * im
        return cls(c)

    # ------------------------------------------------------------------
    # basic queries
    # ------------------------------------------------------------------

    @property
    def truncation(self) -> int:
        return (self.coeffs.size - 1) // 2

    def modes(self) -> np.ndarray:
        m = self.truncation
        return np.arange(-m, m + 1)

    def coefficient(self, n: int) -> complex:
        m = self.truncation
        if abs(n) > m:
            return 0.0 + 0.0j
        return complex(self.coeffs[n + m])

    def mean(self) -> complex:
        """The integral of the series over one period (the n = 0 coefficient)."""
        return complex(self.coeffs[self.truncation])

    def norm(self) -> float:
        """L2 norm over one period (Parseval)."""
        return float(np.linalg.norm(self.coeffs))

    def is_real(self, tol: float = 1e-14) -> bool:
        """Whether the represented function is real valued: c_{-n} = conj(c_n)."""
        return bool(np.max(np.abs(self.coeffs[::-1] - np.conj(self.coeffs))) <= tol)

    def is_zero_mean(self, tol: float = 0.0) -> bool:
        return abs(self.mean()) <= tol

    # ------------------------------------------------------------------
    # algebra
    # ------------------------------------------------------------------

    def _require_same_window(self, other: "FourierSeries") -> None:
        if self.truncation != other.truncation:
            raise TruncationMismatch(
                f"mode windows differ ({self.truncation} vs {other.truncation}); "
                "resample() one operand explicitly"
            )

    def __add__(self, other: "FourierSeries") -> "FourierSeries":
        self._require_same_window(other)
        return FourierSeries(self.coeffs + other.coeffs)

    def __sub__(self, other: "FourierSeries") -> "FourierSeries":
        self._require_same_window(other)
        return FourierSeries(self.coeffs - other.coeffs)

    def __neg__(self) -> "FourierSeries":
        return FourierSeries(-self.coeffs)

    def __mul__(self, scalar) -> "FourierSeries":
        if isinstance(scalar, FourierSeries):
            raise TypeError("use multiply(f, g) for series products")
        return FourierSeries(self.coeffs * complex(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "FourierSeries":
        return FourierSeries(self.coeffs / complex(scalar))

    def derivative(self) -> "FourierSeries":
        return FourierSeries(self.coeffs * (TWO_PI * 1j * self.modes()))

    def antiderivative_zero_mean(self) -> "FourierSeries":
        """P int P: divide mode n != 0 by 2 pi i n, send the mean to zero."""
        n = self.modes().astype(np.complex128)
        n[self.truncation] = 1.0  # avoid 0/0; the slot is zeroed below
        out = self.coeffs / (TWO_PI * 1j * n)
        out[self.truncation] = 0.0
        return FourierSeries(out)

    def remove_mean(self) -> "FourierSeries":
        out = self.coeffs.copy()
        out[self.truncation] = 0.0
        return FourierSeries(out)

    def conj(self) -> "FourierSeries":
        """Series of the complex-conjugate function."""
        return FourierSeries(np.conj(self.coeffs[::-1]))

    def inner(self, other: "FourierSeries") -> complex:
        """<f, g> = int f conj(g) = sum_n c_n conj(d_n)."""
        self._require_same_window(other)
        return complex(np.vdot(other.coeffs, self.coeffs))

    def resample(self, truncation: int) -> "FourierSeries":
        """Pad with zeros or drop outer modes to reach the given window."""
        m = self.truncation
        if truncation == m:
            return self
        if truncation > m:
            pad = truncation - m
            return FourierSeries(np.pad(self.coeffs, (pad, pad)))
        cut = m - truncation
        return FourierSeries(self.coeffs[cut:-cut])

    def evaluate(self, x):
        """Evaluate the trigonometric polynomial at points x (scalar or array)."""
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        phases = np.exp(TWO_PI * 1j * np.outer(xs, self.modes()))
        vals = phases @ self.coeffs
        return vals[0] if np.isscalar(x) or np.asarray(x).ndim == 0 else vals

    def to_triples(self):
        """Serialize as ``[n, re, im]`` rows over the full window (deterministic)."""
        m = self.truncation
        return [
            [int(n), float(c.real), float(c.imag)]
            for n, c in zip(range(-m, m + 1), self.coeffs)
        ]


def multiply(
    f: FourierSeries,
    g: FourierSeries,
    out_truncation: int | None = None,
    with_tail: bool = False,
):
    """Exact product of two series by linear convolution.

    With ``out_truncation=None`` the product keeps its natural window
    M_f + M_g and no information is lost.  Otherwise the result is cut to the
    requested window; pass ``with_tail=True`` to also receive the L2 norm of
    the discarded coefficients.
    """
    full = np.convolve(f.coeffs, g.coeffs)
    natural = f.truncation + g.truncation
    if out_truncation is None or out_truncation == natural:
        prod = FourierSeries(full)
        return (prod, 0.0) if with_tail else prod
    if out_truncation > natural:
        pad = out_truncation - natural
        prod = FourierSeries(np.pad(full, (pad, pad)))
        return (prod, 0.0) if with_tail else prod
    cut = natural - out_truncation
    kept = full[cut:-cut]
    tail = float(np.sqrt(np.sum(np.abs(full[:cut]) ** 2) + np.sum(np.abs(full[-cut:]) ** 2)))
    prod = FourierSeries(kept)
    return (prod, tail) if with_tail else prod


def integrate_product(f: FourierSeries, g: FourierSeries) -> complex:
    """int f g dx (no conjugation) = sum_n c_n d_{-n}; windows may differ."""
    m = min(f.truncation, g.truncation)
    fc = f.resample(m).coeffs
    gc = g.resample(m).coeffs
    return complex(np.dot(fc, gc[::-1]))


def multiplication_matrix(g: FourierSeries, truncation: int) -> np.ndarray:
    """Dense matrix of f -> multiply(f, g, out_truncation=truncation).

    Toeplitz structure: entry (m, n) is the coefficient of g at mode m - n.
    """
    w = 2 * truncation + 1
    mat = np.zeros((w, w), dtype=np.complex128)
    for row in range(w):
        for col in range(w):
            mat[row, col] = g.coefficient((row - truncation) - (col - truncation))
    return mat


def collocation(f: FourierSeries, n_points: int) -> np.ndarray:
    """Sample f at the uniform grid x_j = j / n_points, j = 0 .. n_points - 1."""
    if n_points < 1:
        raise ValueError("n_points must be positive")
    if n_points < 2 * f.truncation + 2:
        warnings.warn(
            f"{n_points} points cannot round-trip a window of size {f.truncation}",
            AliasingWarning,
            stacklevel=2,
        )
    bins = np.zeros(n_points, dtype=np.complex128)
    np.add.at(bins, f.modes() % n_points, f.coeffs)
    return np.fft.ifft(bins) * n_points


def inverse_collocation(samples, truncation: int | None = None) -> FourierSeries:
    """Recover coefficients on [-M, M] from uniform samples by discrete transform.

    The default window is the largest alias-free one, M = (n_points - 2) // 2.
    """
    samples = np.asarray(samples, dtype=np.complex128)
    n = samples.size
    if truncation is None:
        truncation = max((n - 2) // 2, 0)
    if n < 2 * truncation + 2:
        warnings.warn(
            f"{n} samples alias a window of size {truncation}",
            AliasingWarning,
            stacklevel=2,
        )
    fhat = np.fft.fft(samples) / n
    modes = np.arange(-truncation, truncation + 1)
    return FourierSeries(fhat[modes % n])


def allclose(f: FourierSeries, g: FourierSeries, tol: float = 1e-12) -> bool:
    """Coefficientwise comparison after aligning windows."""
    m = max(f.truncation, g.truncation)
    return bool(np.max(np.abs(f.resample(m).coeffs - g.resample(m).coeffs)) <= tol)
