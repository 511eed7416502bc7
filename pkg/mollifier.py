# mollifier.py - Vanishing-moment mollifier by Fourier synthesis, and the Gaussian kernel
"""
The vanishing-moment kernel phi is the inverse Fourier transform of a smooth
spectral profile chi with chi == 1 on |xi| <= r_in and chi == 0 on |xi| >= r_out
(frequencies in cycles per unit, phi_hat(xi) = int phi(x) e^{-2 pi i x xi} dx).
Since phi_hat is flat at the origin, int phi = 1 and every higher moment vanishes.

Tables of phi and its first nine derivatives are synthesized on a uniform grid
over [-R, R) and interpolated with cubic Hermite splines (table k+1 supplies the
slopes of table k).  Construction certifies the tail, the moments, Parseval and
the spectral consistency of the derivative tables.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass

import numpy as np
import pandas as pd
from numpy.polynomial import hermite_e
from scipy.interpolate import CubicHermiteSpline

from errors import MomentCertificationFailed, OrderTooHigh, TailBoundViolated
from quadrature import cell_rule, integrate_window
from smoothrep import EXP_CUTOFF, MAX_ORDER, Gaussian, SpectralProfile, smooth_step_jet

TABLE_ORDERS = MAX_ORDER + 2

# tail certificate: |phi| below this on |x| >= TAIL_FRACTION * R
TAIL_BOUND = 1e-12
TAIL_FRACTION = 0.95

MASS_TOL = 1e-8
MOMENT_TOL = 1e-6
PARSEVAL_TOL = 1e-6
SPECTRAL_TOL = 1e-8
MIN_COUNTEREXAMPLE = 1e-3


@dataclass(frozen=True)
class MollifierParams:
    dimension: int = 1
    r_in: float = 1.0
    r_out: float = 2.0
    fft_size: int = 65536
    radius: float = 40.0
    sharpness: float = 2.8
    skew: float = 1.0

    def build(self, skewed=False):
        """Build the default kernel, or the skewed variant with phase parameter ``skew``."""
        return build_vanishing_moment_mollifier(
            self.dimension, self.r_in, self.r_out, self.fft_size, self.radius,
            sharpness=self.sharpness, skew=self.skew if skewed else 0.0)


def profile_values(xi, r_in, r_out, sharpness):
    xi = np.asarray(xi, dtype=float)
    t = (r_out - np.abs(xi)) / (r_out - r_in)
    return smooth_step_jet(t.ravel(), 0.0, 0, sharpness)[0].reshape(xi.shape)


def spectrum(xi, r_in, r_out, sharpness, skew=0.0):
    """chi(xi) * exp(i skew xi (1 - chi(xi))); real when skew == 0."""
    chi = profile_values(xi, r_in, r_out, sharpness)
    if skew == 0:
        return chi
    return chi * np.exp(1j * skew * np.asarray(xi, dtype=float) * (1.0 - chi))


@dataclass(frozen=True)
class MomentRow:
    alpha: tuple
    moment: float
    expected: float
    tolerance: float
    tail_bound: float

    @property
    def passed(self):
        return abs(self.moment - self.expected) <= self.tolerance


@dataclass(frozen=True)
class MomentReport:
    kernel: str
    rows: tuple

    @property
    def passed(self):
        return all(r.passed for r in self.rows)

    @property
    def failures(self):
        return [r for r in self.rows if not r.passed]

    def to_frame(self):
        return pd.DataFrame([
            {
                "alpha": "".join(str(a) for a in r.alpha) if len(r.alpha) > 1 else r.alpha[0],
                "order": sum(r.alpha),
                "moment": r.moment,
                "expected": r.expected,
                "tolerance": r.tolerance,
                "tail_bound": r.tail_bound,
                "passed": r.passed,
            }
            for r in self.rows
        ])

    def to_dict(self):
        return {
            "kernel": self.kernel,
            "passed": self.passed,
            "rows": [
                {"alpha": list(r.alpha), "moment": r.moment, "expected": r.expected,
                 "tolerance": r.tolerance, "tail_bound": r.tail_bound, "passed": r.passed}
                for r in self.rows
            ],
        }


class Mollifier:
    """Tabulated vanishing-moment kernel (one axis; n-dimensional use is a tensor product)."""

    vanishing_moments = True

    def __init__(self, params: MollifierParams, x: np.ndarray, tables: np.ndarray):
        self.params = params
        self.skew = float(params.skew)
        self.dimension = params.dimension
        self.radius = float(params.radius)
        self.label = "phi" if self.skew == 0 else f"phi_skew{self.skew:g}"
        self.x = x
        self.tables = tables
        self._splines = [CubicHermiteSpline(x, tables[k], tables[k + 1], extrapolate=False)
                         for k in range(TABLE_ORDERS - 1)]
        self.certificate = {}

    # --- evaluation ---------------------------------------------------------

    def derivatives(self, x, m=0):
        """Array of shape (m + 1, len(x)): phi^(k)(x) for k <= m, exactly 0 for |x| >= R."""
        if m > MAX_ORDER:
            raise OrderTooHigh(f"kernel derivatives are tabulated up to order {MAX_ORDER}, asked {m}")
        x = np.atleast_1d(np.asarray(x, dtype=float))
        inside = (x >= self.x[0]) & (x <= self.x[-1])
        out = np.zeros((m + 1, x.size))
        flat = x.ravel()
        for k in range(m + 1):
            out[k, inside.ravel()] = self._splines[k](flat[inside.ravel()])
        return out

    def __call__(self, x):
        return self.derivatives(x, 0)[0]

    def hat(self, xi):
        return spectrum(xi, self.params.r_in, self.params.r_out, self.params.sharpness, self.skew)

    @property
    def profile(self):
        """|phi_hat| as an expression leaf (equal to phi_hat for the unskewed kernel)."""
        return SpectralProfile(self.params.r_in, self.params.r_out, self.params.sharpness)

    # --- integrals over the table ----------------------------------------------

    def _cell_integral(self, f, lo=None, hi=None):
        """Cell-aligned 5-point Gauss-Legendre over the spline; exact for x^k phi with k <= 6."""
        edges = self.x
        if lo is not None:
            edges = edges[(edges >= lo) & (edges <= hi)]
        nodes, weights = cell_rule(edges, 5)
        return float(np.sum(weights * f(nodes, self._splines[0](nodes))))

    def moment(self, k):
        return self._cell_integral(lambda x, p: x ** k * p)

    def square_moment(self, k):
        """int x^k phi(x)^2 dx."""
        return self._cell_integral(lambda x, p: x ** k * p * p)

    def tail_bound(self, k):
        """int |x^k phi| over the certified tail band."""
        start = TAIL_FRACTION * self.radius
        band = lambda x, p: np.abs(x) ** k * np.abs(p)
        return (self._cell_integral(band, -self.radius, -start)
                + self._cell_integral(band, start, self.radius))

    @property
    def axis_norm_sq(self):
        return self.square_moment(0)

    @property
    def axis_value_at_zero(self):
        return float(self._splines[0](0.0))

    @property
    def norm_sq(self):
        return self.axis_norm_sq ** self.dimension

    @property
    def value_at_zero(self):
        return self.axis_value_at_zero ** self.dimension

    @property
    def counterexample_constant(self):
        """||phi||_2^2 - conj(phi)(0); phi is real."""
        return self.norm_sq - self.value_at_zero

    def spectral_norm_sq(self):
        p = self.params
        return integrate_window(lambda xi: np.abs(self.hat(xi)) ** 2, p.r_out).value.real ** self.dimension

    # --- certification ----------------------------------------------------

    def certify(self):
        """Run every build-time certificate; raises on the first failure."""
        tail = np.abs(self.x) >= TAIL_FRACTION * self.radius
        tail_max = float(np.max(np.abs(self.tables[0][tail])))
        if tail_max > TAIL_BOUND:
            raise TailBoundViolated(
                f"|phi| reaches {tail_max:.3e} beyond {TAIL_FRACTION * self.radius:g} (bound {TAIL_BOUND:g})")

        report = check_moments(self, 6)
        if not report.passed:
            bad = ", ".join(f"alpha={r.alpha}: {r.moment:.3e}" for r in report.failures)
            raise MomentCertificationFailed(f"moment certification failed: {bad}")

        spatial = self.norm_sq
        spectral = self.spectral_norm_sq()
        parseval = abs(spatial - spectral) / spectral
        if parseval > PARSEVAL_TOL:
            raise MomentCertificationFailed(
                f"Parseval mismatch {parseval:.3e}: spatial {spatial:.12f} vs spectral {spectral:.12f}")

        spectral_error = self._spectral_consistency()
        if spectral_error > SPECTRAL_TOL:
            raise MomentCertificationFailed(f"derivative table inconsistent with its spectrum ({spectral_error:.3e})")

        constant = self.counterexample_constant
        if abs(constant) < MIN_COUNTEREXAMPLE:
            raise MomentCertificationFailed(f"||phi||^2 - phi(0) = {constant:.3e} is numerically zero")

        self.certificate = {
            "kernel": self.label,
            "tail_max": tail_max,
            "mass": report.rows[0].moment,
            "max_moment": max(abs(r.moment) for r in report.rows[1:]),
            "norm_sq_spatial": spatial,
            "norm_sq_spectral": spectral,
            "parseval_relative": parseval,
            "spectral_consistency": spectral_error,
            "value_at_zero": self.value_at_zero,
            "counterexample_constant": constant,
        }
        return self

    def _spectral_consistency(self):
        """Differentiate table 0 through its numerical spectrum and compare with table 1."""
        n = len(self.x)
        dx = self.x[1] - self.x[0]
        xi = np.fft.fftfreq(n, d=dx)
        derived = np.fft.ifft(2j * np.pi * xi * np.fft.fft(self.tables[0])).real
        scale = float(np.max(np.abs(self.tables[1])))
        return float(np.max(np.abs(derived - self.tables[1]))) / scale

    def __repr__(self):
        return f"Mollifier({self.label}, r_in={self.params.r_in:g}, r_out={self.params.r_out:g})"


def synthesize_tables(r_in, r_out, fft_size, radius, sharpness, skew=0.0):
    """Uniform grid on [-R, R) and the tables phi^(k), k = 0..9, by inverse FFT."""
    dx = 2.0 * radius / fft_size
    x = -radius + dx * np.arange(fft_size)
    xi = np.fft.fftfreq(fft_size, d=dx)
    # shift the grid origin to -R
    base = spectrum(xi, r_in, r_out, sharpness, skew) * np.exp(-2j * np.pi * xi * radius)
    tables = np.empty((TABLE_ORDERS, fft_size))
    imag = 0.0
    for k in range(TABLE_ORDERS):
        values = np.fft.ifft((2j * np.pi * xi) ** k * base) / dx
        imag = max(imag, float(np.max(np.abs(values.imag))) / max(float(np.max(np.abs(values.real))), 1e-300))
        tables[k] = values.real
    return x, tables, imag


def build_vanishing_moment_mollifier(n=1, r_in=1.0, r_out=2.0, fft_size=65536, radius=40.0,
                                     sharpness=2.8, skew=0.0) -> Mollifier:
    """Synthesize and certify phi; ``skew`` multiplies chi by exp(i skew xi (1 - chi))."""
    if not 0 < r_in < r_out:
        raise ValueError(f"need 0 < r_in < r_out, got {r_in}, {r_out}")
    if fft_size < 4096 or fft_size & (fft_size - 1):
        raise ValueError(f"fft_size must be a power of two >= 4096, got {fft_size}")
    if n not in (1, 2):
        raise ValueError(f"dimension must be 1 or 2, got {n}")

    params = MollifierParams(dimension=n, r_in=r_in, r_out=r_out, fft_size=fft_size, radius=radius,
                             sharpness=sharpness, skew=float(skew))
    x, tables, imag = synthesize_tables(r_in, r_out, fft_size, radius, sharpness, skew)
    kernel = Mollifier(params, x, tables).certify()
    kernel.certificate["imag_residual"] = imag
    return kernel


class GaussianKernel:
    """Normalized Gaussian rho(x) = (2 pi)^{-1/2} exp(-x^2/2) per axis; moments do not vanish."""

    vanishing_moments = False

    def __init__(self, dimension=1):
        self.dimension = dimension
        self.radius = math.sqrt(2.0 * EXP_CUTOFF)
        self.label = "rho"

    def derivatives(self, x, m=0):
        if m > MAX_ORDER:
            raise OrderTooHigh(f"kernel derivatives are available up to order {MAX_ORDER}, asked {m}")
        x = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
        base = np.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
        base[np.abs(x) >= self.radius] = 0.0
        out = np.empty((m + 1, x.size))
        for k in range(m + 1):
            coef = np.zeros(k + 1)
            coef[k] = 1.0
            out[k] = (-1) ** k * hermite_e.hermeval(x, coef) * base
        return out

    def __call__(self, x):
        return self.derivatives(x, 0)[0]

    def hat(self, xi):
        xi = np.asarray(xi, dtype=float)
        return np.exp(-2.0 * math.pi ** 2 * xi * xi)

    @property
    def profile(self):
        return Gaussian(2.0 * math.pi ** 2)

    def moment(self, k):
        return integrate_window(lambda x: x ** k * self(x), self.radius).value.real

    def square_moment(self, k):
        return integrate_window(lambda x: x ** k * self(x) ** 2, self.radius).value.real

    def tail_bound(self, k):
        return 0.0

    @property
    def norm_sq(self):
        return (0.5 / math.sqrt(math.pi)) ** self.dimension

    @property
    def value_at_zero(self):
        return (1.0 / math.sqrt(2.0 * math.pi)) ** self.dimension

    @property
    def counterexample_constant(self):
        return self.norm_sq - self.value_at_zero

    def __repr__(self):
        return f"GaussianKernel(n={self.dimension})"


def gaussian_rho(n=1) -> GaussianKernel:
    return GaussianKernel(n)


def check_moments(kernel, alpha_max=6) -> MomentReport:
    """Moments int y^alpha k(y) dy for |alpha| <= alpha_max (tensor kernels factorize per axis)."""
    axis = [kernel.moment(k) for k in range(alpha_max + 1)]
    tails = [kernel.tail_bound(k) for k in range(alpha_max + 1)]
    rows = []
    for total in range(alpha_max + 1):
        for alpha in itertools.product(range(total + 1), repeat=kernel.dimension):
            if sum(alpha) != total:
                continue
            value = math.prod(axis[a] for a in alpha)
            tail = max(tails[a] for a in alpha)
            expected = 1.0 if total == 0 else 0.0
            tol = MASS_TOL if total == 0 else MOMENT_TOL
            rows.append(MomentRow(tuple(alpha), value, expected, tol, tail))
    return MomentReport(kernel.label, tuple(rows))


def scaled_eval(kernel, eps, x, alpha=0):
    """d^alpha [eps^-n k(x / eps)] = eps^(-n - |alpha|) k^(alpha)(x / eps), per axis for tensor kernels."""
    if kernel.dimension == 1:
        alpha = int(alpha)
        x = np.asarray(x, dtype=float)
        vals = kernel.derivatives(x.ravel() / eps, alpha)[alpha].reshape(x.shape)
        return eps ** (-1 - alpha) * vals
    x = np.atleast_2d(np.asarray(x, dtype=float))
    alpha = tuple(alpha)
    out = np.ones(x.shape[0])
    for axis, a in enumerate(alpha):
        out = out * eps ** (-1 - a) * kernel.derivatives(x[:, axis] / eps, a)[a]
    return out


def export_table(kernel: Mollifier, path):
    """Text table: header with the build parameters, then one line per sample (x, phi, phi', ...)."""
    header = "\n".join([
        "colombeau-lab kernel table",
        "params=" + json.dumps(asdict(kernel.params), sort_keys=True),
        "columns=x," + ",".join(f"d{k}" for k in range(TABLE_ORDERS)),
    ])
    data = np.column_stack([kernel.x] + [kernel.tables[k] for k in range(TABLE_ORDERS)])
    np.savetxt(path, data, fmt="%.17e", header=header)


def load_table(path) -> Mollifier:
    """Read a table written by :func:`export_table` and re-run the certificates."""
    params = None
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            if not line.startswith("#"):
                break
            text = line.lstrip("#").strip()
            if text.startswith("params="):
                params = json.loads(text[len("params="):])
    if params is None:
        raise ValueError(f"{path}: missing params header")
    data = np.loadtxt(path)
    if data.ndim != 2 or data.shape[1] != TABLE_ORDERS + 1:
        raise ValueError(f"{path}: expected {TABLE_ORDERS + 1} columns")
    kernel = Mollifier(MollifierParams(**params), data[:, 0], data[:, 1:].T.copy())
    return kernel.certify()
