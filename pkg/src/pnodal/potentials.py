"""Coefficient functions q and r on [0, 1].

The eigenvalue pencil carries two coefficients: q enters at the
lambda^2 scale and r at the lambda scale.  Both live on the unit
interval and are consumed by the phase equation pointwise and by the
asymptotic formulas through definite integrals.  A small catalog of
closed forms (zero, constant, polynomial, cosine, bump) covers the
smoothness classes used in the test suites; measured data enters as a
sampled grid with piecewise-linear interpolation, loadable from CSV.

Definite integrals are exposed as antiderivative differences so that
integrate(a, c) == integrate(a, b) + integrate(b, c) holds to rounding.
"""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Potential",
    "ZeroPotential",
    "ConstantPotential",
    "PolynomialPotential",
    "CosinePotential",
    "BumpPotential",
    "SampledPotential",
    "CoefficientPair",
    "make_potential",
    "potential_from_csv",
    "eval_coefficient",
    "integrate_coefficient",
]

# coefficient encodings understood by the phase-integration kernels
KIND_ZERO = 0
KIND_CONSTANT = 1
KIND_POLYNOMIAL = 2
KIND_COSINE = 3
KIND_BUMP = 4
KIND_SAMPLED = 5

_EMPTY = np.zeros(0)


def _check_domain(x: np.ndarray) -> None:
    if np.any(x < 0.0) or np.any(x > 1.0):
        bad = x[(x < 0.0) | (x > 1.0)]
        raise ValueError(f"coefficient evaluated outside [0, 1]: x={bad.flat[0]!r}")


class Potential:
    """A coefficient function on the unit interval.

    Subclasses implement ``_values`` (vectorized evaluation) and
    ``_antiderivative`` (cumulative integral from 0, vectorized).
    """

    label = "potential"

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        _check_domain(arr)
        out = self._values(arr)
        return float(out) if arr.ndim == 0 else out

    def integrate(self, a: float, b: float) -> float:
        """Definite integral over [a, b] within the unit interval."""
        if b < a:
            raise ValueError(f"reversed integration bounds [{a}, {b}]")
        bounds = np.array([a, b], dtype=float)
        _check_domain(bounds)
        f = self._antiderivative(bounds)
        return float(f[1] - f[0])

    def _values(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _antiderivative(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def kernel_spec(self) -> tuple[int, np.ndarray, np.ndarray, np.ndarray]:
        """(kind, parameters, sample xs, sample ys) pack for the kernels."""
        raise NotImplementedError


class ZeroPotential(Potential):
    label = "zero"

    def _values(self, x):
        return np.zeros_like(x)

    def _antiderivative(self, x):
        return np.zeros_like(x)

    def kernel_spec(self):
        return KIND_ZERO, _EMPTY, _EMPTY, _EMPTY


@dataclass
class ConstantPotential(Potential):
    c: float
    label = "constant"

    def _values(self, x):
        return np.full_like(x, self.c)

    def _antiderivative(self, x):
        return self.c * x

    def kernel_spec(self):
        return KIND_CONSTANT, np.array([self.c], dtype=float), _EMPTY, _EMPTY


@dataclass
class PolynomialPotential(Potential):
    """c0 + c1*x + c2*x^2 + ... with coefficients in ascending order."""

    coeffs: tuple
    label = "polynomial"

    def __post_init__(self):
        self.coeffs = tuple(float(c) for c in self.coeffs)
        if not self.coeffs:
            raise ValueError("polynomial needs at least one coefficient")

    def _values(self, x):
        return np.polynomial.polynomial.polyval(x, self.coeffs)

    def _antiderivative(self, x):
        anti = [0.0] + [c / (k + 1) for k, c in enumerate(self.coeffs)]
        return np.polynomial.polynomial.polyval(x, anti)

    def kernel_spec(self):
        return KIND_POLYNOMIAL, np.asarray(self.coeffs, dtype=float), _EMPTY, _EMPTY


@dataclass
class CosinePotential(Potential):
    """a * cos(2*pi*k*x), integer k >= 1."""

    a: float = 1.0
    k: int = 1
    label = "cosine"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("cosine wavenumber k must be a positive integer")

    def _values(self, x):
        return self.a * np.cos(2.0 * math.pi * self.k * x)

    def _antiderivative(self, x):
        w = 2.0 * math.pi * self.k
        return (self.a / w) * np.sin(w * x)

    def kernel_spec(self):
        return KIND_COSINE, np.array([self.a, float(self.k)]), _EMPTY, _EMPTY


@dataclass
class BumpPotential(Potential):
    """Smooth compactly supported bump a*exp(1 - 1/(1 - y^2)), y scaled.

    Support is [center - width/2, center + width/2]; the peak value is a.
    The antiderivative has no closed form and is evaluated by panelled
    Gauss-Legendre over the support, which keeps integrate() additive.
    """

    a: float = 1.0
    center: float = 0.5
    width: float = 0.5
    label = "bump"
    _gauss: tuple = field(init=False, repr=False)

    def __post_init__(self):
        if not 0.0 < self.width:
            raise ValueError("bump width must be positive")
        if not (0.0 <= self.center - self.width / 2 and self.center + self.width / 2 <= 1.0):
            raise ValueError("bump support must sit inside [0, 1]")
        self._gauss = np.polynomial.legendre.leggauss(48)

    def _values(self, x):
        y = (x - self.center) / (0.5 * self.width)
        out = np.zeros_like(x)
        inside = np.abs(y) < 1.0
        yi = y[inside] if out.ndim else (y if inside else None)
        if out.ndim == 0:
            if inside:
                out = np.asarray(self.a * math.exp(1.0 - 1.0 / (1.0 - float(y) ** 2)))
            return out
        out[inside] = self.a * np.exp(1.0 - 1.0 / (1.0 - yi**2))
        return out

    def _antiderivative(self, x):
        lo = self.center - 0.5 * self.width
        hi = self.center + 0.5 * self.width
        nodes, weights = self._gauss
        x = np.atleast_1d(x)
        out = np.empty_like(x)
        for i, xi in enumerate(x):
            b = min(max(xi, lo), hi)
            if b <= lo:
                out[i] = 0.0
                continue
            # fixed 8-panel rule on [lo, b]; smooth integrand, so this is
            # exact to rounding and makes F a pure function of the bound
            breaks = np.linspace(lo, b, 9)
            half = 0.5 * np.diff(breaks)[:, None]
            mid = 0.5 * (breaks[:-1] + breaks[1:])[:, None]
            pts = mid + half * nodes[None, :]
            out[i] = float(np.sum(half[:, 0] * (self._values(pts) @ weights)))
        return out

    def kernel_spec(self):
        return (
            KIND_BUMP,
            np.array([self.a, self.center, 0.5 * self.width]),
            _EMPTY,
            _EMPTY,
        )


class SampledPotential(Potential):
    """Piecewise-linear interpolant of (x, value) samples spanning [0, 1]."""

    label = "sampled"

    def __init__(self, xs, ys):
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        if xs.ndim != 1 or xs.shape != ys.shape or xs.size < 2:
            raise ValueError("sampled potential needs matching 1-d arrays, >= 2 points")
        if np.any(np.diff(xs) <= 0.0):
            raise ValueError("sample abscissae must be strictly increasing")
        if abs(xs[0]) > 1e-12 or abs(xs[-1] - 1.0) > 1e-12:
            raise ValueError("sample abscissae must span [0, 1]")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
            raise ValueError("sampled potential contains non-finite data")
        xs = xs.copy()
        xs[0] = 0.0
        xs[-1] = 1.0
        self.xs = xs
        self.ys = ys
        # cumulative trapezoid makes integrate() exactly additive
        self._cum = np.concatenate(
            ([0.0], np.cumsum(0.5 * (ys[1:] + ys[:-1]) * np.diff(xs)))
        )

    def _values(self, x):
        return np.interp(x, self.xs, self.ys)

    def _antiderivative(self, x):
        x = np.atleast_1d(x)
        idx = np.clip(np.searchsorted(self.xs, x, side="right") - 1, 0, len(self.xs) - 2)
        x0 = self.xs[idx]
        y0 = self.ys[idx]
        slope = (self.ys[idx + 1] - y0) / (self.xs[idx + 1] - x0)
        dx = x - x0
        return self._cum[idx] + y0 * dx + 0.5 * slope * dx * dx

    def kernel_spec(self):
        return KIND_SAMPLED, _EMPTY, self.xs, self.ys


def potential_from_csv(path) -> SampledPotential:
    """Load a sampled potential from two-column CSV (x, value) with header."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 3:
        raise ValueError(f"{path}: need a header plus at least two data rows")
    data = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 2:
            raise ValueError(f"{path}:{lineno}: expected two columns, got {len(row)}")
        try:
            data.append((float(row[0]), float(row[1])))
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: {exc}") from None
    xs, ys = zip(*data)
    return SampledPotential(np.array(xs), np.array(ys))


_CATALOG_RE = re.compile(r"^\s*([a-zA-Z_]+)\s*(?:\((.*)\))?\s*$")


def make_potential(spec: str) -> Potential:
    """Build a potential from a descriptor string.

    Examples: ``zero``, ``constant(1.0)``, ``polynomial(0, 1, -1)``,
    ``cosine(k=2, a=0.5)``, ``bump(a=1, center=0.5, width=0.4)``,
    ``csv:data/q.csv``.
    """
    spec = spec.strip()
    if spec.startswith("csv:"):
        return potential_from_csv(spec[4:].strip())
    m = _CATALOG_RE.match(spec)
    if not m:
        raise ValueError(f"cannot parse potential descriptor {spec!r}")
    name = m.group(1).lower()
    raw = (m.group(2) or "").strip()
    args: list[float] = []
    kwargs: dict[str, float] = {}
    if raw:
        for part in raw.split(","):
            part = part.strip()
            if "=" in part:
                key, val = part.split("=", 1)
                kwargs[key.strip()] = float(val)
            else:
                args.append(float(part))
    try:
        if name == "zero":
            return ZeroPotential()
        if name == "constant":
            return ConstantPotential(*args, **kwargs)
        if name == "polynomial":
            return PolynomialPotential(tuple(args))
        if name == "cosine":
            kwargs = {k: (int(v) if k == "k" else v) for k, v in kwargs.items()}
            return CosinePotential(*args, **kwargs)
        if name == "bump":
            return BumpPotential(*args, **kwargs)
    except TypeError as exc:
        raise ValueError(f"bad arguments in potential descriptor {spec!r}: {exc}") from None
    raise ValueError(f"unknown potential catalog entry {name!r}")


@dataclass
class CoefficientPair:
    """The pencil coefficients q (lambda^2 scale) and r (lambda scale)."""

    q: Potential
    r: Potential
    integral_q: float = field(init=False)
    integral_r: float = field(init=False)

    def __post_init__(self):
        self.integral_q = self.q.integrate(0.0, 1.0)
        self.integral_r = self.r.integrate(0.0, 1.0)

    def which(self, name: str) -> Potential:
        if name == "q":
            return self.q
        if name == "r":
            return self.r
        raise ValueError(f"coefficient name must be 'q' or 'r', got {name!r}")


def eval_coefficient(pair: CoefficientPair, which: str, x):
    """Evaluate q or r of the pair at x in [0, 1]."""
    return pair.which(which)(x)


def integrate_coefficient(pair: CoefficientPair, which: str, a: float, b: float) -> float:
    """Definite integral of q or r over [a, b], additive to rounding."""
    return pair.which(which).integrate(a, b)
