"""
Norms on Fock and Fock-type spaces.

All integrals are over the plane in polar coordinates: composite
Gauss-Legendre panels in r, the trapezoid rule in theta (spectrally accurate
for smooth periodic integrands).  Integrands are handled through their logs,
so functions whose values overflow double precision are still fine as long
as the integral itself is representable on a log scale.

Every result carries an analytic tail bound for the part of the plane beyond
the cutoff radius, plus a quadrature error estimate (angular halving and a
lower-order radial rule).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict
from enum import Enum
from typing import Callable

import numpy as np
from scipy import special
from scipy.optimize import minimize

from .functions import (
    EntireFunction,
    ExpPolyFunction,
    TaylorFunction,
    differentiate,
    evaluate,
)
from .quadform import FormKind, QuadForm, analyze

INF = math.inf


class Family(str, Enum):
    FOCK_TYPE = "focktype"  # weight exp(-p |z|^m), plain area measure
    CLASSICAL = "classical"  # weight exp(-p |z|^2 / 2), measure p/(2 pi) dA


@dataclass(frozen=True)
class FockTypeParams:
    m: float = 2.0
    p: float = 2.0
    family: Family = Family.FOCK_TYPE

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.family is Family.CLASSICAL:
            object.__setattr__(self, "m", 2.0)
        if not self.m > 0:
            raise ValueError("m must be positive")
        if not (1 <= self.p <= INF):
            raise ValueError("p must lie in [1, inf]")

    @classmethod
    def classical(cls, p: float) -> "FockTypeParams":
        return cls(2.0, p, Family.CLASSICAL)

    @property
    def weight_coeff(self) -> float:
        """c with weight exp(-c |z|^m) for p = 1."""
        return 0.5 if self.family is Family.CLASSICAL else 1.0


@dataclass(frozen=True)
class QuadratureConfig:
    radial_nodes: int = 20  # Gauss-Legendre nodes per panel
    angular_nodes: int = 256  # starting trapezoid size, doubled on demand
    R_cut: float | None = None  # None: chosen from the tail bound
    tail_tol: float = 1e-14  # tail bound relative to the head
    angular_tol: float = 1e-13
    max_angular_nodes: int = 2048
    max_panels: int = 1200


DEFAULT = QuadratureConfig()


@dataclass
class NormResult:
    value: float
    log_value: float
    tail_bound: float
    error_estimate: float
    family: str
    p: float
    m: float
    divergent: bool = False
    R_cut: float = 0.0
    flags: list = field(default_factory=list)

    def __float__(self):
        return self.value

    def to_dict(self):
        d = asdict(self)
        for k in ("value", "log_value", "tail_bound", "error_estimate", "p", "m", "R_cut"):
            d[k] = _jsonable(d[k])
        return d


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    return x


# --------------------------------------------------------------------------
# growth bounds and tails


@dataclass(frozen=True)
class Bound:
    """log integrand <= logS + s log r + c1 r + c2 r^2 - w r^m for r >= 1."""

    logS: float
    s: float
    c1: float
    c2: float
    w: float
    m: float

    def normalized(self) -> "Bound":
        c1, c2, w, m = self.c1, self.c2, self.w, self.m
        if w and m == 2:
            c2, w = c2 - w, 0.0
        elif w and m == 1:
            c1, w = c1 - w, 0.0
        return Bound(self.logS, max(self.s, 0.0), c1, c2, w, m)

    def G(self, r):
        r = np.asarray(r, dtype=float)
        return math.log(2 * math.pi) + self.logS + (self.s + 1) * np.log(r) + self.c1 * r + self.c2 * r * r - self.w * r**self.m

    def dG(self, r):
        return (self.s + 1) / r + self.c1 + 2 * self.c2 * r - self.w * self.m * r ** (self.m - 1)

    def d2G(self, r):
        return -(self.s + 1) / r**2 + 2 * self.c2 - self.w * self.m * (self.m - 1) * r ** (self.m - 2)

    @property
    def divergent(self) -> bool:
        b = self.normalized()
        if b.w > 0:
            if b.m > 2:
                return False
            if b.c2 > 0:
                return True
            if b.c2 < 0 or b.m > 1:
                return False
            return b.c1 > 0
        return not (b.c2 < 0 or (b.c2 == 0 and b.c1 < 0))

    def log_tail(self, R: float) -> float:
        """log of an upper bound for the integral of 2 pi r exp(bound) over r > R."""
        if self.logS == -INF:
            return -INF
        b = self.normalized()
        if b.divergent:
            return INF
        R = max(R, 1.0)
        if b.w > 0 and b.c1 == 0 and b.c2 == 0:
            a = (b.s + 2) / b.m
            x = b.w * R**b.m
            return (math.log(2 * math.pi) + b.logS + _log_upper_gamma(a, x)
                    - math.log(b.m) - a * math.log(b.w))
        grid = R * np.geomspace(1, 1e4, 200)
        if np.all(b.d2G(grid) < 0) and b.dG(R) < 0:
            return float(b.G(R)) - math.log(-b.dG(R))
        if b.w > 0 and (b.c1 < 0 or b.c2 < 0):
            return Bound(b.logS, b.s, b.c1, b.c2, 0.0, b.m).log_tail(R)
        return INF


def _log_upper_gamma(a: float, x: float) -> float:
    """log Gamma(a, x), stable for large arguments."""
    q = special.gammaincc(a, x)
    if q > 1e-300:
        return math.log(q) + special.gammaln(a)
    # asymptotic: Gamma(a, x) ~ x^(a-1) e^-x (1 + (a-1)/x + ...), bounded by the first terms
    return (a - 1) * math.log(x) - x + math.log(1 + max(a - 1, 0) / max(x - a, 1e-300) + 1)


def function_bound(f: EntireFunction) -> tuple:
    return f.growth_bound()


# --------------------------------------------------------------------------
# plane integration


@dataclass
class PlaneIntegral:
    log_value: float
    log_tail: float
    rel_error: float
    R_cut: float
    angular_nodes: int
    divergent: bool = False

    @property
    def value(self) -> float:
        return math.exp(self.log_value) if self.log_value < 709 else INF

    @property
    def tail_rel(self) -> float:
        if self.log_tail == -INF:
            return 0.0
        return math.exp(min(self.log_tail - self.log_value, 700))


def _grid(r, M):
    th = 2 * np.pi * np.arange(M) / M
    return r[:, None] * np.exp(1j * th)[None, :]


def _safe(vals):
    vals = np.asarray(vals, dtype=float)
    return np.where(np.isnan(vals), -INF, vals)


def integrate_plane(log_integrand: Callable, bound: Bound, cfg: QuadratureConfig = DEFAULT,
                    radius_hint: float = 0.0, kinks=()) -> PlaneIntegral:
    """Integral over C of exp(log_integrand(z)) dA(z).

    ``bound`` must dominate the log integrand for |z| >= 1; it fixes the cutoff
    radius and the analytic tail.  ``radius_hint`` is a radius the integrand
    is known to be concentrated near (used to seed the scan).  ``kinks`` are
    radii where the integrand is not smooth (zeros of f when p is not an even
    integer); panels are graded toward them.
    """
    if bound.divergent:
        return PlaneIntegral(INF, INF, INF, INF, 0, divergent=True)
    M = cfg.angular_nodes

    # scan outward until the bound is far below what has been seen
    R_scan = max(4.0, 2 * radius_hint)
    while True:
        rs = np.linspace(0, R_scan, 1025)[1:]
        prof = np.log(2 * np.pi * rs) + np.max(_safe(log_integrand(_grid(rs, M))), axis=1)
        best = float(np.max(prof))
        if best == -INF:
            return PlaneIntegral(-INF, -INF, 0.0, R_scan, M)
        if R_scan >= 1 and bound.dG(R_scan) < 0 and bound.G(R_scan) < best - 60:
            break
        if R_scan > 1e7:
            return PlaneIntegral(INF, INF, INF, INF, M, divergent=True)
        R_scan *= 2

    head = prof >= best - 46
    idx = np.flatnonzero(head)
    dr = rs[1] - rs[0]
    r_lo = max(0.0, rs[idx[0]] - 2 * dr)
    r_hi = rs[idx[-1]] + 2 * dr

    # panel width from the curvature of the profile inside the head
    core = prof - np.log(rs)
    # measured on the bulk only; the graded panels take care of small r
    bulk = np.flatnonzero(prof >= best - 12)
    if bulk.size > 4:
        d2 = np.diff(core, 2)[np.clip(bulk[1:-1] - 1, 0, len(core) - 3)] / dr**2
        curv = float(np.max(-d2[np.isfinite(d2)], initial=0.0))
    else:
        curv = 0.0
    span = r_hi - r_lo
    h = 2.0 / math.sqrt(curv) if curv > 0 else span
    h = min(max(h, span / cfg.max_panels), span / 8 if span > 0 else 1.0)

    def rule(n_nodes, edges):
        x, w = np.polynomial.legendre.leggauss(n_nodes)
        a, b = edges[:-1, None], edges[1:, None]
        r = ((b - a) / 2 * x[None, :] + (a + b) / 2).ravel()
        wt = ((b - a) / 2 * w[None, :]).ravel()
        return r, wt

    log_I_est = best
    R_cut = cfg.R_cut
    for _ in range(8):
        if R_cut is None or cfg.R_cut is None:
            R_cut = max(r_hi, 1.0)
            while bound.log_tail(R_cut) > math.log(cfg.tail_tol) + log_I_est:
                R_cut *= 1.1
                if R_cut > 1e7:
                    return PlaneIntegral(INF, INF, INF, INF, M, divergent=True)
        inner = np.arange(r_lo, min(r_hi, R_cut), h)
        edges = np.concatenate([[0.0] if r_lo > 0 else [], inner, [min(r_hi, R_cut)]])
        if R_cut > r_hi:
            edges = np.concatenate([edges, np.linspace(r_hi, R_cut, 9)[1:]])
        # geometric grading toward the origin absorbs r^alpha type behaviour
        first = edges[edges > 0][0] if np.any(edges > 0) else 1.0
        extra = [first * 0.5 ** np.arange(1, 25)]
        for k in kinks:
            if 0 < k < R_cut:
                g = 0.5 ** np.arange(0, 4)
                extra.append(np.clip(k - 0.5 * g, 0, None))
                extra.append(k + 0.5 * g)
                extra.append([k])
        edges = np.unique(np.concatenate([edges] + extra))
        edges = edges[edges <= R_cut]

        M = cfg.angular_nodes
        while True:
            r, wt = rule(cfg.radial_nodes, edges)
            vals = _safe(log_integrand(_grid(r, M)))
            shift = float(np.max(vals))
            if shift == -INF:
                return PlaneIntegral(-INF, -INF, 0.0, R_cut, M)
            e = np.exp(vals - shift)
            full = float(np.sum(wt * r * e.sum(axis=1))) * 2 * np.pi / M
            half = float(np.sum(wt * r * e[:, ::2].sum(axis=1))) * 4 * np.pi / M
            ang_err = abs(full - half) / full if full > 0 else 0.0
            if ang_err < cfg.angular_tol or M >= cfg.max_angular_nodes:
                break
            M *= 2
        r2, wt2 = rule(max(cfg.radial_nodes // 2, 4), edges)
        e2 = np.exp(_safe(log_integrand(_grid(r2, M))) - shift)
        low = float(np.sum(wt2 * r2 * e2.sum(axis=1))) * 2 * np.pi / M
        rad_err = abs(full - low) / full if full > 0 else 0.0
        log_I = shift + math.log(full) if full > 0 else -INF
        log_tail = bound.log_tail(R_cut)
        if cfg.R_cut is not None or log_tail <= math.log(cfg.tail_tol) + log_I + 1e-9:
            break
        log_I_est = log_I
    return PlaneIntegral(log_I, log_tail, ang_err + rad_err, R_cut, M)


def _finite_neg(log_fn):
    """-log_fn at a point given as (x, y), with zeros of f mapped to a large finite value."""

    def neg(v):
        x = float(log_fn(complex(v[0], v[1])))
        return -x if math.isfinite(x) else 1e300

    return neg


def sup_plane(log_fn: Callable, bound_fn: Callable, cfg: QuadratureConfig = DEFAULT,
              radius_hint: float = 0.0, rtol: float = 1e-9):
    """sup over C of log_fn, with its location.

    ``bound_fn(r)`` is an upper bound of log_fn on |z| = r that eventually
    decreases; the scan stops once it is below the current best.
    """
    M = 512
    R = max(4.0, 2 * radius_hint)
    while True:
        rs = np.linspace(0, R, 513)
        vals = _safe(log_fn(_grid(rs, M)))
        best = float(np.max(vals))
        far = np.geomspace(R, R * 1e3, 64)
        if np.all(bound_fn(far) <= best + 1e-12 * max(1.0, abs(best))) or R > 1e6:
            break
        R *= 2
    flat = np.argsort(vals, axis=None)[::-1][:4]
    Z = _grid(rs, M).ravel()
    prev = None
    cand_best, cand_z = best, Z[flat[0]]
    for n_grid in (513, 1025):
        if prev is not None:
            rs = np.linspace(0, R, n_grid)
            vals = _safe(log_fn(_grid(rs, 2 * M)))
            Z = _grid(rs, 2 * M).ravel()
            flat = np.argsort(vals, axis=None)[::-1][:4]
        for i in flat:
            z0 = Z[i]
            res = minimize(_finite_neg(log_fn), [z0.real, z0.imag],
                           method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 4000})
            if -res.fun > cand_best:
                cand_best, cand_z = -float(res.fun), complex(res.x[0], res.x[1])
            if vals.ravel()[i] > cand_best:
                cand_best, cand_z = float(vals.ravel()[i]), z0
        if prev is not None and abs(cand_best - prev) <= rtol * max(1.0, abs(cand_best)):
            break
        prev = cand_best
    return cand_best, cand_z


# --------------------------------------------------------------------------
# membership


def diverges(f: EntireFunction, params: FockTypeParams) -> bool:
    """True when f is not in the space (growth beats the weight)."""
    if isinstance(f, TaylorFunction) or f.is_zero or f.is_polynomial:
        return False
    _, a1, a2 = f.expo
    const_poly = f.degree == 0
    m, p = params.m, params.p
    if params.family is Family.CLASSICAL or (m == 2 and a2 != 0):
        s = params.weight_coeff
        kind = analyze(QuadForm.from_exponent(a1, a2, s)).kind
        if kind is FormKind.NEGDEF:
            return False
        if kind is FormKind.UNBOUNDED:
            return True
        return not (p == INF and const_poly)
    if a2 != 0:
        return m < 2
    if m > 1:
        return False
    if m < 1:
        return True
    if abs(a1) < 1:
        return False
    if abs(a1) > 1:
        return True
    return not (p == INF and const_poly)


# --------------------------------------------------------------------------
# norms


def _weight_exponent(params: FockTypeParams):
    return params.weight_coeff, params.m


def _lp_result(pi: PlaneIntegral, log_const: float, params: FockTypeParams, flags=None) -> NormResult:
    p = params.p
    flags = list(flags or [])
    if pi.divergent:
        flags.append("divergent")
        return NormResult(INF, INF, INF, INF, params.family.value, p, params.m, True, INF, flags)
    if pi.log_value == -INF:
        return NormResult(0.0, -INF, 0.0, 0.0, params.family.value, p, params.m, False, pi.R_cut, flags)
    logv = (pi.log_value + log_const) / p
    v = math.exp(logv) if logv < 709 else INF
    tail = v * ((1 + pi.tail_rel) ** (1 / p) - 1) if math.isfinite(v) else INF
    err = v * pi.rel_error / p if math.isfinite(v) else INF
    return NormResult(v, logv, tail, err, params.family.value, p, params.m, False, pi.R_cut, flags)


def _weighted_lp(g: EntireFunction, params: FockTypeParams, cfg: QuadratureConfig,
                 extra_log_weight: Callable | None = None, extra_power: float = 0.0,
                 log_const: float = 0.0, flags=None, member: EntireFunction | None = None) -> NormResult:
    """(const * integral |g|^p exp(-p c |z|^m) * extra dA)^(1/p).

    ``extra_power`` bounds the extra weight by (2r)^extra_power for r >= 1.
    """
    p = params.p
    c, m = _weight_exponent(params)
    if diverges(member if member is not None else g, params):
        return _lp_result(PlaneIntegral(INF, INF, INF, INF, 0, True), 0.0, params, flags)
    logS, d, c1, c2 = g.growth_bound()
    ex = max(extra_power, 0.0)
    bound = Bound(p * logS + ex * math.log(2), p * d + ex, p * c1, p * c2, p * c, m)

    def log_integrand(z):
        r = np.abs(z)
        out = p * g.log_modulus(z) - p * c * r**m
        if extra_log_weight is not None:
            out = out + extra_log_weight(r)
        return out

    hint = _radius_hint(g, params)
    pi = integrate_plane(log_integrand, bound, cfg, radius_hint=hint, kinks=_zero_radii(g, p))
    return _lp_result(pi, log_const, params, flags)


def _zero_radii(g: EntireFunction, p: float) -> tuple:
    """Moduli of the zeros of g when |g|^p is not smooth there."""
    if p % 2 == 0:
        return ()
    c = np.asarray(g.poly if isinstance(g, ExpPolyFunction) else g.coeffs)
    nz = np.flatnonzero(c)
    if nz.size < 2 or nz[-1] > 60:
        return ()
    roots = np.roots(c[: nz[-1] + 1][::-1])
    return tuple(sorted(set(np.round(np.abs(roots[np.abs(roots) > 1e-12]), 14))))


def _radius_hint(g: EntireFunction, params: FockTypeParams) -> float:
    d = g.degree
    if isinstance(g, ExpPolyFunction) and g.expo[1] != 0:
        return abs(g.expo[1]) * (2 if params.family is Family.CLASSICAL else 1) + math.sqrt(max(d, 0))
    return (max(d, 0) / (params.m * params.weight_coeff)) ** (1 / params.m)


def _sup_result(log_fn, bound_fn, params: FockTypeParams, log_const: float = 0.0, hint: float = 0.0,
                flags=None) -> NormResult:
    val, where = sup_plane(log_fn, bound_fn, radius_hint=hint)
    flags = list(flags or [])
    logv = val + log_const
    v = math.exp(logv) if logv < 709 else INF
    return NormResult(v, logv, 0.0, 1e-9 * v, params.family.value, INF, params.m, False, 0.0, flags)


def _divergent(params: FockTypeParams, flags=None) -> NormResult:
    return NormResult(INF, INF, INF, INF, params.family.value, params.p, params.m, True, INF,
                      list(flags or []) + ["divergent"])


def _sup_bound(g: EntireFunction, c: float, m: float, extra: float = 0.0):
    logS, d, c1, c2 = g.growth_bound()

    def bound(r):
        r = np.maximum(np.asarray(r, dtype=float), 1.0)
        return logS + (d + extra) * np.log(r) + extra * math.log(2) + c1 * r + c2 * r * r - c * r**m

    return bound


def inner_product(f: EntireFunction, g: EntireFunction, panels: int = 64, nodes: int = 20,
                  angles: int = 256) -> complex:
    """<f, g> in the Hilbert Fock space: (1/pi) int f conj(g) exp(-|z|^2) dA."""
    R = 8.0
    while True:
        edge = _grid(np.array([R]), angles)
        top = float(np.max(_safe(f.log_modulus(edge) + g.log_modulus(edge)))) - R * R
        if top < -40 or R > 1e3:
            break
        R *= 1.5
    x, w = np.polynomial.legendre.leggauss(nodes)
    edges = np.linspace(0, R, panels + 1)
    a, b = edges[:-1, None], edges[1:, None]
    r = ((b - a) / 2 * x[None, :] + (a + b) / 2).ravel()
    wt = ((b - a) / 2 * w[None, :]).ravel()
    Z = _grid(r, angles)
    vals = evaluate(f, Z) * np.conj(evaluate(g, Z)) * np.exp(-np.abs(Z) ** 2)
    return complex(np.sum(wt * r * vals.sum(axis=1)) * 2 * np.pi / angles / np.pi)



def fock_norm(f: EntireFunction, params: FockTypeParams, cfg: QuadratureConfig = DEFAULT) -> NormResult:
    """||f|| in F_(m,p) (Fock-type) or F_p (classical, with the p/(2 pi) factor)."""
    p = params.p
    c, m = _weight_exponent(params)
    if p == INF:
        if diverges(f, params):
            return _divergent(params)
        return _sup_result(lambda z: f.log_modulus(z) - c * np.abs(z) ** m, _sup_bound(f, c, m), params,
                           hint=_radius_hint(f, params))
    log_const = math.log(p / (2 * math.pi)) if params.family is Family.CLASSICAL else 0.0
    return _weighted_lp(f, params, cfg, log_const=log_const)


def log_monomial_norm(k: int, params: FockTypeParams) -> float:
    """Exact log ||z^k|| from Gamma-function closed forms."""
    p, m = params.p, params.m
    if params.family is Family.CLASSICAL:
        if p == INF:
            return 0.0 if k == 0 else 0.5 * k * (math.log(k) - 1)
        return ((k * p / 2) * math.log(2 / p) + special.gammaln(k * p / 2 + 1)) / p
    if p == INF:
        return 0.0 if k == 0 else (k / m) * (math.log(k / m) - 1)
    a = (k * p + 2) / m
    return (math.log(2 * math.pi / m) + special.gammaln(a) - a * math.log(p)) / p


@dataclass(frozen=True)
class MonomialNorm:
    value: float
    log_value: float
    asymptotic: bool
    note: str = ""


# The closed form printed alongside Stirling's estimate carries (1/p)^(kp/2);
# direct evaluation of p * int r^(kp+1) exp(-p r^2/2) dr gives (2/p)^(kp/2).
GAMMA_NOTE = ("closed form ||z^k||_p^p = (2/p)^(kp/2) Gamma(kp/2 + 1); "
              "the variant (1/p)^(kp/2) Gamma((kp+2)/2) differs by 2^(kp/2) and is not used")


def monomial_norm_exact(k: int, p: float, family: Family | str = Family.CLASSICAL, m: float = 2.0) -> MonomialNorm:
    """||z^k|| by closed form (classical) or by the growth estimate (Fock-type).

    Fock-type values are the asymptotic estimate (k/(m e))^(k/m + 2/(mp) - 1/(2p))
    (p < inf) or (k/(m e))^(k/m) (p = inf), equivalent to the true norm only
    up to a k-independent factor; they are flagged ``asymptotic``.
    """
    family = Family(family)
    if k < 0:
        raise ValueError("k must be nonnegative")
    if family is Family.CLASSICAL:
        lv = log_monomial_norm(k, FockTypeParams.classical(p))
        return MonomialNorm(math.exp(lv) if lv < 709 else INF, lv, False, GAMMA_NOTE)
    if k == 0:
        return MonomialNorm(1.0, 0.0, True)
    base = math.log(k / (m * math.e))
    expo = k / m if p == INF else k / m + 2 / (m * p) - 1 / (2 * p)
    lv = expo * base
    return MonomialNorm(math.exp(lv) if lv < 709 else INF, lv, True)


def stirling_estimate_log(k: int, p: float) -> float:
    """log of the classical growth estimate ((k/e)^(kp/2) sqrt(k))^(1/p)."""
    if k == 0:
        return 0.0
    if p == INF:
        return 0.5 * k * (math.log(k) - 1)
    return 0.5 * k * (math.log(k) - 1) + math.log(k) / (2 * p)


def paley_norm(f: EntireFunction, m: float, p: float, cfg: QuadratureConfig = DEFAULT) -> NormResult:
    """Derivative-side equivalent norm of F_(m,p):

        (|f(0)|^p + int |f'|^p exp(-p|z|^m) (1+|z|)^(-p(m-1)) dA)^(1/p)
        |f(0)| + sup |f'| exp(-|z|^m) / (1+|z|)^(m-1)          (p = inf)
    """
    params = FockTypeParams(m, p)
    df = differentiate(f, 1)
    f0 = abs(evaluate(f, 0))
    flags = ["paley"]
    if p == INF:
        if diverges(f, params):
            return _divergent(params, flags)
        s = _sup_result(lambda z: df.log_modulus(z) - np.abs(z) ** m - (m - 1) * np.log1p(np.abs(z)),
                        _sup_bound(df, 1.0, m, max(1 - m, 0.0)), params, hint=_radius_hint(df, params), flags=flags)
        s.value, s.log_value = f0 + s.value, math.log(f0 + s.value) if f0 + s.value > 0 else -INF
        return s
    res = _weighted_lp(df, params, cfg, extra_log_weight=lambda r: -p * (m - 1) * np.log1p(r),
                       extra_power=p * (1 - m), flags=flags, member=f)
    return _add_point_term(res, f0 ** p, p)


def _add_point_term(res: NormResult, point_p: float, p: float) -> NormResult:
    if res.divergent or point_p == 0:
        return res
    total_p = math.exp(p * res.log_value) + point_p if res.log_value < 700 / p else INF
    if not math.isfinite(total_p):
        return res
    v = total_p ** (1 / p)
    scale = v / res.value if res.value > 0 else 1.0
    res.tail_bound /= scale ** (p - 1) if res.value > 0 else 1.0
    res.value, res.log_value = v, math.log(v)
    return res


def hu_norm(f: EntireFunction, p: float, n: int, cfg: QuadratureConfig = DEFAULT) -> NormResult:
    """n-th derivative equivalent norm of the classical F_p:

        sum_{j<n} |f^(j)(0)| + (int |f^(n)|^p (1+|z|)^(-np) exp(-p|z|^2/2) dA)^(1/p)

    (sup form for p = inf).  There is no p/(2 pi) factor.
    """
    params = FockTypeParams.classical(p)
    dn = differentiate(f, n)
    point = sum(abs(evaluate(differentiate(f, j), 0)) for j in range(n))
    flags = [f"hu(n={n})"]
    if p == INF:
        if diverges(f, params):
            return _divergent(params, flags)
        s = _sup_result(lambda z: dn.log_modulus(z) - 0.5 * np.abs(z) ** 2 - n * np.log1p(np.abs(z)),
                        _sup_bound(dn, 0.5, 2.0), params, hint=_radius_hint(dn, params), flags=flags)
    else:
        s = _weighted_lp(dn, params, cfg, extra_log_weight=lambda r: -n * p * np.log1p(r), flags=flags,
                         member=f)
    if s.divergent:
        return s
    s.value += point
    s.log_value = math.log(s.value) if s.value > 0 else -INF
    return s


# --------------------------------------------------------------------------
# pointwise estimates


@dataclass
class PointwiseReport:
    norm: float
    max_ratio_value: float  # max of |f| e^{-|z|^2/2} / ||f||
    max_ratio_derivative: float  # max of |f^(n)| / (n! e^{3/2} (1+|z|)^n e^{|z|^2/2} ||f||)
    argmax_value: complex
    argmax_derivative: complex
    holds: bool
    counterexample: complex | None = None

    @property
    def slack(self) -> float:
        return 1.0 - max(self.max_ratio_value, self.max_ratio_derivative)


def pointwise_bound_check(f: EntireFunction, p: float, n: int = 1, radius: float = 6.0,
                          norm: float | None = None, tol: float = 1e-6) -> PointwiseReport:
    """Check |f(z)| <= e^{|z|^2/2} ||f||_p and the derivative estimate
    |f^(n)(z)| <= n! e^{3/2} (1+|z|)^n e^{|z|^2/2} ||f||_p on |z| <= radius."""
    if norm is None:
        norm = fock_norm(f, FockTypeParams.classical(p)).value
    rs = np.linspace(0, radius, 241)
    z = _grid(rs, 360).ravel()
    r = np.abs(z)
    lognorm = math.log(norm) if norm > 0 else -INF
    lv = f.log_modulus(z) - 0.5 * r * r - lognorm
    dn = differentiate(f, n)
    ld = (dn.log_modulus(z) - special.gammaln(n + 1) - 1.5 - n * np.log1p(r) - 0.5 * r * r - lognorm)
    lv, ld = _safe(lv), _safe(ld)
    iv, idd = int(np.argmax(lv)), int(np.argmax(ld))
    rv, rd = math.exp(min(lv[iv], 700)), math.exp(min(ld[idd], 700))
    holds = rv <= 1 + tol and rd <= 1 + tol
    ce = None
    if not holds:
        ce = complex(z[iv] if rv > 1 + tol else z[idd])
    return PointwiseReport(norm, rv, rd, complex(z[iv]), complex(z[idd]), holds, ce)
