"""
Finite sections of D_(u,psi,n) in the orthonormal basis e_k = z^k / sqrt(k!)
of F_2, and the monomial ratio test for D on Fock-type spaces.

Column k of a section holds the e-coefficients of T e_(k + offset); rows
are indexed by degree starting from 0, so T e_d lands in row d - n when
u = 1 and psi(0) = 0.

Coefficients come from Cauchy integrals on circles, computed with the FFT.
Row j is read off a circle of radius close to sqrt(j): on that circle
|e_j| is near its maximum relative to the Gaussian weight, so the rounding
error of every entry stays at the level of the column norm instead of
growing like e^(r^2/2).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .functions import ExpPolyFunction
from .norms import FockTypeParams, Family, fock_norm, log_monomial_norm, monomial_norm_exact
from .symbols import OperatorSpec, symbol_structure

BUFFER = 64
TAIL_ROWS = 8
TAIL_TOL = 1e-8
BAND_RATIO = 1.1


class BufferTooSmall(ValueError):
    """The rows dropped below the section still carry too much mass."""


@dataclass
class FiniteSectionMatrix:
    N: int
    entries: np.ndarray  # N x N: rows degree 0..N-1, columns degree offset..offset+N-1
    offset: int
    tall: np.ndarray  # same columns, rows degree 0..N+offset+buffer-1
    tail: float  # largest relative norm of the last TAIL_ROWS rows of a column
    exact: bool = False
    flags: list = field(default_factory=list)

    @property
    def basis_note(self) -> str:
        return "e_k(z) = z^k / sqrt(k!); rows from degree 0, columns from degree offset"

    def column_norms(self) -> np.ndarray:
        return np.linalg.norm(self.tall, axis=0)

    def to_csv(self, fh=None, which: str = "entries") -> str:
        """Row-major CSV, one "re,im" cell per entry."""
        mat = self.entries if which == "entries" else self.tall
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        for row in mat:
            w.writerow([f"{float(z.real)!r},{float(z.imag)!r}" for z in row])
        text = buf.getvalue()
        if fh is not None:
            fh.write(text)
        return text


def _exact_columns(spec: OperatorSpec, degrees: np.ndarray, rows: int) -> np.ndarray | None:
    """Closed form when u is a constant and psi(z) = az: T e_d = u a^(d-n) sqrt(d!/(d-n)!) e_(d-n)."""
    u = spec.u
    if spec.psi.is_constant or spec.b != 0 or u.degree != 0 or u.expo[1] != 0 or u.expo[2] != 0:
        return None
    c = complex(u.poly[0]) * np.exp(u.expo[0])
    a, n = spec.a, spec.n
    out = np.zeros((rows, len(degrees)), dtype=complex)
    for col, d in enumerate(degrees):
        j = d - n
        if j < 0 or j >= rows:
            continue
        mag = 0.5 * (gammaln(d + 1) - gammaln(j + 1))
        out[j, col] = c * a**j * math.exp(mag)
    return out


def _bands(rows: int):
    """Row bands [lo, hi) sharing one circle radius."""
    edges = [0, 4]
    while edges[-1] < rows:
        edges.append(max(edges[-1] + 1, int(math.ceil(edges[-1] * BAND_RATIO))))
    edges[-1] = max(edges[-1], rows)
    out = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        hi = min(hi, rows)
        if lo >= hi:
            break
        rho2 = max(2.0, math.sqrt(max(lo, 1) * max(hi - 1, 1)))
        out.append((lo, hi, math.sqrt(rho2)))
    return out


def _fft_columns(spec: OperatorSpec, degrees: np.ndarray, rows: int) -> np.ndarray:
    u = spec.u
    a, b, n = spec.a, spec.b, spec.n
    a0, a1, a2 = u.expo
    poly = np.asarray(u.poly)
    out = np.zeros((rows, len(degrees)), dtype=complex)
    live = degrees >= n
    if not np.any(live):
        return out
    d = degrees[live].astype(float)
    logC = 0.5 * gammaln(d + 1) - gammaln(d - n + 1)
    power = d - n
    for lo, hi, rho in _bands(rows):
        M = 1 << max(6, int(math.ceil(math.log2(4 * rho * rho + 64))))
        th = 2 * np.pi * np.arange(M) / M
        z = rho * np.exp(1j * th)
        with np.errstate(divide="ignore", invalid="ignore"):
            log_u = np.log(np.polynomial.polynomial.polyval(z, poly)) + a0 + a1 * z + a2 * z * z
            log_w = np.log(a * z + b)
            V = log_u[None, :] + np.where(power[:, None] > 0, power[:, None] * log_w[None, :], 0) + logC[:, None]
        V = np.where(np.isnan(V), -np.inf, V)
        shift = np.max(V.real, axis=1)
        shift = np.where(np.isfinite(shift), shift, 0.0)
        vals = np.exp(V - shift[:, None])
        coef = np.fft.fft(vals, axis=1)[:, lo:hi] / M
        j = np.arange(lo, hi)
        logscale = shift[:, None] - j[None, :] * math.log(rho) + 0.5 * gammaln(j + 1)[None, :]
        with np.errstate(over="ignore", invalid="ignore"):
            block = coef * np.exp(np.minimum(logscale, 700.0))
        out[lo:hi, live] = block.T
    return out


def build_matrix(spec: OperatorSpec, N: int, offset: int = 0, buffer: int = BUFFER,
                 check_tail: bool = True) -> FiniteSectionMatrix:
    """Section of D_(u,psi,n) on span(e_offset, ..., e_(offset+N-1))."""
    if N < 1:
        raise ValueError("N must be positive")
    if N > 512:
        raise ValueError("sections are limited to N <= 512")
    rows = N + offset + buffer
    degrees = np.arange(offset, offset + N)
    flags = []
    st = symbol_structure(spec)
    bounded = spec.psi.is_constant or st.sup_finite
    if not bounded:
        flags.append("unbounded")
    tall = _exact_columns(spec, degrees, rows)
    exact = tall is not None
    if tall is None:
        tall = _fft_columns(spec, degrees, rows)
    norms = np.linalg.norm(tall, axis=0)
    tails = np.linalg.norm(tall[-TAIL_ROWS:], axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.where(norms > 0, tails / norms, 0.0)
    tail = float(np.max(rel)) if rel.size else 0.0
    if not np.all(np.isfinite(tall)):
        flags.append("overflow")
        tail = math.inf
    if check_tail and bounded and tail > TAIL_TOL:
        raise BufferTooSmall(f"tail rows hold {tail:.3g} of a column norm; increase the buffer "
                             f"(currently {buffer})")
    return FiniteSectionMatrix(N, tall[:N].copy(), offset, tall, tail, exact, flags)


def sigma_min(mat: FiniteSectionMatrix, mode: str = "column") -> float:
    """Smallest singular value.

    ``column`` (default) uses all computed rows, i.e. the infimum of ||T x|| / ||x||
    over x in the span of the section's columns; it can only decrease as N
    grows.  ``square`` uses the N x N block alone.
    """
    A = mat.tall if mode == "column" else mat.entries
    if mode not in ("column", "square"):
        raise ValueError("mode must be 'column' or 'square'")
    return float(np.linalg.svd(A, compute_uv=False)[-1])


def spectral_radius_estimate(mat, m_max: int) -> np.ndarray:
    """s_m = ||A^m||_2^(1/m) for m = 1..m_max, with the power renormalized each step."""
    if isinstance(mat, FiniteSectionMatrix) and mat.offset != 0:
        raise ValueError("powers need rows and columns on the same degrees; build with offset=0")
    A = mat.entries if isinstance(mat, FiniteSectionMatrix) else np.asarray(mat)
    if A.shape[0] != A.shape[1]:
        raise ValueError("square matrix required")
    out = np.zeros(m_max)
    P = np.eye(A.shape[0], dtype=complex)
    log_scale = 0.0
    for m in range(1, m_max + 1):
        P = A @ P
        nrm = float(np.linalg.norm(P, 2))
        if nrm == 0:
            out[m - 1:] = 0.0
            break
        log_scale += math.log(nrm)
        P /= nrm
        out[m - 1] = math.exp(log_scale / m)
    return out


# --------------------------------------------------------------------------
# ratio test


@dataclass
class RatioTest:
    k: np.ndarray
    log_ratio: np.ndarray
    exponent: float
    floor: float  # min ratio over the tail window
    method: str
    fit_range: tuple

    @property
    def ratio(self) -> np.ndarray:
        return np.exp(self.log_ratio)

    def rows(self):
        return list(zip(self.k.tolist(), self.ratio.tolist()))


def _log_norm(k: int, m: float, p: float, method: str) -> float:
    params = FockTypeParams(m, p)
    if method == "exact":
        return log_monomial_norm(k, params)
    if method == "asymptotic":
        return monomial_norm_exact(k, p, Family.FOCK_TYPE, m).log_value
    if method == "quadrature":
        res = fock_norm(ExpPolyFunction(np.eye(1, k + 1, k)[0]), params)
        if res.divergent:
            raise ArithmeticError(f"norm of z^{k} diverges")
        return res.log_value
    raise ValueError(f"unknown method {method!r}")


def ratio_test(m: float, p: float, q: float, k_max: int, method: str = "exact",
               fit_from: int | None = None) -> RatioTest:
    """k ||z^(k-1)||_(m,q) / ||z^k||_(m,p) for k = 1..k_max, and the power-law
    exponent fitted on k in [fit_from, k_max] (default: the upper half)."""
    ks = np.arange(1, k_max + 1)
    cache_q = {}
    cache_p = {}

    def nq(k):
        if k not in cache_q:
            cache_q[k] = _log_norm(k, m, q, method)
        return cache_q[k]

    def np_(k):
        if k not in cache_p:
            cache_p[k] = _log_norm(k, m, p, method)
        return cache_p[k]

    lr = np.array([math.log(k) + nq(k - 1) - np_(k) for k in ks])
    lo = fit_from if fit_from is not None else max(1, k_max // 2)
    sel = ks >= lo
    if sel.sum() >= 2:
        slope = float(np.polyfit(np.log(ks[sel]), lr[sel], 1)[0])
    else:
        slope = math.nan
    floor = float(np.exp(np.min(lr[sel]))) if sel.any() else math.nan
    return RatioTest(ks, lr, slope, floor, method, (int(lo), int(k_max)))
