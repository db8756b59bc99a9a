"""
Brute-force reference integrals.

The scheme here is deliberately unlike the one in ``norms``: level-wise
adaptive Simpson in r over doubling windows [R, 2R], a fixed 4096-point
angular trapezoid, and function values from plain ``polyval`` rather than the
shared evaluation helpers.  It is slow and that is fine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .functions import ExpPolyFunction, TaylorFunction

ANGLES = 4096
SCHEME = "adaptive-simpson-r x trapezoid-theta(4096)"


@dataclass(frozen=True)
class OracleResult:
    value: float
    error_estimate: float
    scheme: str
    evaluations: int
    log_value: float = 0.0
    divergent: bool = False
    radius: float = 0.0


def _poly(coeffs, z):
    coeffs = np.asarray(coeffs)
    nz = np.flatnonzero(coeffs)
    if 0 < nz.size <= 4:
        # sparse: sum the few terms directly
        return sum(coeffs[k] * z ** int(k) for k in nz)
    return npoly.polyval(z, coeffs)


def _log_abs(f, z):
    """log|f(z)| straight from the stored coefficients."""
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        if isinstance(f, TaylorFunction):
            return np.log(np.abs(_poly(f.coeffs, z)))
        a0, a1, a2 = f.expo
        return np.log(np.abs(_poly(f.poly, z))) + np.real(a0 + a1 * z + a2 * z**2)


class _RadialProfile:
    """r -> 2 pi r * angular mean of exp(log_fn), each value carried as (mantissa, log scale)."""

    def __init__(self, log_fn):
        self.log_fn = log_fn
        self.theta = 2 * np.pi * np.arange(ANGLES) / ANGLES
        self.unit = np.exp(1j * self.theta)
        self.count = 0

    def log_values(self, r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        if r.size > 256:
            return np.concatenate([self.log_values(r[i:i + 256]) for i in range(0, r.size, 256)])
        self.count += r.size * ANGLES
        lv = self.log_fn(r[:, None] * self.unit[None, :])
        lv = np.where(np.isnan(lv), -np.inf, lv)
        top = np.max(lv, axis=1)
        safe = np.where(np.isfinite(top), top, 0.0)
        mean = np.mean(np.exp(lv - safe[:, None]), axis=1)
        with np.errstate(divide="ignore"):
            out = np.log(2 * np.pi * r) + np.log(mean) + safe
        return np.where(np.isfinite(top), out, -np.inf)


def _simpson_segment(prof: _RadialProfile, a: float, b: float, shift: float, rtol: float,
                     floor: float = 0.0):
    """Adaptive Simpson of exp(log profile - shift) on [a, b]; returns (integral, error).

    The tolerance is rtol times the larger of the segment integral and ``floor``.
    """

    def g(r):
        return np.exp(prof.log_values(r) - shift)

    x = np.linspace(a, b, 17)
    fx = g(x)
    # each interval: a, b, f(a), f(mid), f(b)
    A, B = x[:-1:2], x[2::2]
    FA, FM, FB = fx[:-1:2], fx[1::2], fx[2::2]
    total, err = 0.0, 0.0
    scale = None
    for level in range(40):
        if A.size == 0:
            break
        h = B - A
        whole = h / 6 * (FA + 4 * FM + FB)
        if scale is None:
            scale = max(float(np.sum(whole)), floor, 1e-300)
        q1, q3 = A + h / 4, A + 3 * h / 4
        fq = g(np.concatenate([q1, q3]))
        F1, F3 = fq[: A.size], fq[A.size:]
        M = (A + B) / 2
        left = h / 12 * (FA + 4 * F1 + FM)
        right = h / 12 * (FM + 4 * F3 + FB)
        diff = left + right - whole
        done = (np.abs(diff) <= 15 * rtol * scale * h / (b - a)) | (level == 39) | (A.size > 50000)
        total += float(np.sum((left + right + diff / 15)[done]))
        err += float(np.sum(np.abs(diff[done]) / 15))
        keep = ~done
        A = np.concatenate([A[keep], M[keep]])
        B = np.concatenate([M[keep], B[keep]])
        FA, FM, FB = (np.concatenate([FA[keep], FM[keep]]),
                      np.concatenate([F1[keep], F3[keep]]),
                      np.concatenate([FM[keep], FB[keep]]))
    return total, err


def _integrate_plane(log_fn, rtol: float = 1e-11, tail_tol: float = 1e-12, max_doublings: int = 30):
    """log of integral over C of exp(log_fn) dA, windowed on [0, 4], [4, 8], [8, 16], ..."""
    prof = _RadialProfile(log_fn)
    logs, errs = [], []
    edges = [0.0, 4.0]
    rising = 0
    prev_inc = -np.inf
    while True:
        a, b = edges[-2], edges[-1]
        sample = prof.log_values(np.linspace(a, b, 129)[1:])
        shift = float(np.max(sample))
        if shift == -np.inf:
            inc_log = -np.inf
        else:
            head = _logsumexp(logs) if logs else -np.inf
            floor = math.exp(min(head - shift, 700)) if head > -np.inf else 0.0
            val, er = _simpson_segment(prof, a, b, shift, rtol, floor)
            inc_log = math.log(val) + shift if val > 0 else -np.inf
            errs.append((er, shift))
        logs.append(inc_log)
        head = _logsumexp(logs)
        if len(logs) > 1 and inc_log <= math.log(tail_tol) + head:
            break
        rising = rising + 1 if inc_log >= prev_inc else 0
        prev_inc = inc_log
        if rising >= 12 or len(edges) > max_doublings:
            return OracleResult(math.inf, math.inf, SCHEME, prof.count, math.inf, True, b)
        edges.append(2 * b)
    head = _logsumexp(logs)
    rel_err = sum(er * math.exp(s - head) for er, s in errs) if head > -np.inf else 0.0
    # the last window bounds what lies beyond it (the windows were shrinking geometrically)
    rel_err += math.exp(logs[-1] - head) if head > -np.inf else 0.0
    return head, rel_err, prof.count, edges[-1]


def _logsumexp(xs):
    xs = np.asarray(xs, dtype=float)
    top = np.max(xs)
    if top == -np.inf:
        return -np.inf
    return float(top + np.log(np.sum(np.exp(xs - top))))


def _finish(out, p: float, log_const: float) -> OracleResult:
    if isinstance(out, OracleResult):
        return out
    head, rel_err, count, R = out
    if head == -np.inf:
        return OracleResult(0.0, 0.0, SCHEME, count, -np.inf, False, R)
    lv = (head + log_const) / p
    v = math.exp(lv) if lv < 709 else math.inf
    return OracleResult(v, v * rel_err / p, SCHEME, count, lv, False, R)


def brute_force_norm(f, params) -> OracleResult:
    """||f|| for p < inf in either family, by the reference scheme."""
    p, m = params.p, params.m
    if not math.isfinite(p):
        raise ValueError("brute_force_norm needs p < inf; use brute_force_sup")
    classical = params.family.value == "classical"
    c = 0.5 if classical else 1.0

    def log_fn(z):
        return p * _log_abs(f, z) - p * c * np.abs(z) ** m

    log_const = math.log(p / (2 * math.pi)) if classical else 0.0
    return _finish(_integrate_plane(log_fn), p, log_const)


def log_L(spec, z):
    """log of |u| |psi|^n exp((|psi|^2 - |z|^2)/2), independently evaluated."""
    z = np.asarray(z, dtype=complex)
    a = 0j if spec.psi.is_constant else complex(spec.psi.a)
    b = complex(spec.psi.b)
    w = a * z + b
    with np.errstate(divide="ignore"):
        lpsi = spec.n * np.log(np.abs(w)) if spec.n else 0.0
    # |az + b|^2 - |z|^2 expanded, so that |a| = 1 does not cancel two huge numbers
    gap = (abs(a) ** 2 - 1) * np.abs(z) ** 2 + 2 * np.real(a * np.conj(b) * z) + abs(b) ** 2
    return _log_abs(spec.u, z) + lpsi + 0.5 * gap


def brute_force_Lq_integral(spec, q: float) -> OracleResult:
    """Integral over C of L^q dA."""
    if not math.isfinite(q):
        raise ValueError("q must be finite")
    out = _integrate_plane(lambda z: q * log_L(spec, z))
    return _finish(out, 1.0, 0.0)


def brute_force_sup(log_fn, radius: float = 40.0, levels: int = 6) -> tuple:
    """sup of log_fn over |z| <= radius: dense Cartesian grid, then repeated local zooms."""
    n = 801
    xs = np.linspace(-radius, radius, n)
    Z = xs[None, :] + 1j * xs[:, None]
    V = np.where(np.abs(Z) <= radius, log_fn(Z), -np.inf)
    V = np.where(np.isnan(V), -np.inf, V)
    i = np.unravel_index(int(np.argmax(V)), V.shape)
    best, z0 = float(V[i]), complex(Z[i])
    h = xs[1] - xs[0]
    for _ in range(levels):
        loc = np.linspace(-2 * h, 2 * h, 41)
        Zl = z0 + loc[None, :] + 1j * loc[:, None]
        Vl = log_fn(Zl)
        Vl = np.where(np.isnan(Vl), -np.inf, Vl)
        j = np.unravel_index(int(np.argmax(Vl)), Vl.shape)
        if Vl[j] >= best:
            best, z0 = float(Vl[j]), complex(Zl[j])
        h = loc[1] - loc[0]
    return best, z0
