"""
Entire functions used throughout the package.

Two representations are provided:

    ExpPolyFunction   exactly P(z) * exp(a0 + a1 z + a2 z^2)
    TaylorFunction    a truncated power series c_0 + c_1 z + ... + c_N z^N

Both are immutable.  The module-level functions (evaluate, differentiate,
compose_affine, ...) dispatch on the representation and always return a new
object of the same family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

TAYLOR_CAP = 256
LOG_OVERFLOW = 700.0


class TruncationOverflow(ValueError):
    """Raised when a Taylor product would exceed the truncation cap."""


class PreimageError(ValueError):
    """Raised when a preimage cannot be formed (constant symbol, zero of u)."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


def _as_coeffs(values) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(values, dtype=complex)).copy()
    if arr.size == 0:
        arr = np.zeros(1, dtype=complex)
    arr.flags.writeable = False
    return arr


def _trim(coeffs: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(coeffs)
    if nz.size == 0:
        return coeffs[:1] * 0
    return coeffs[: nz[-1] + 1]


def _horner(coeffs: np.ndarray, z):
    z = np.asarray(z, dtype=complex)
    out = np.zeros_like(z) + coeffs[-1]
    for c in coeffs[-2::-1]:
        out = out * z + c
    return out


def _log_abs_poly(coeffs: np.ndarray, z):
    """log|p(z)| without overflow: outside the unit disk p(z) = z^d q(1/z)."""
    z = np.asarray(z, dtype=complex)
    coeffs = _trim(np.asarray(coeffs))
    d = len(coeffs) - 1
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if d == 0:
            return np.zeros(z.shape) + np.log(np.abs(coeffs[0]))
        if np.count_nonzero(coeffs) == 1:
            return d * np.log(np.abs(z)) + np.log(np.abs(coeffs[d]))
        outer = np.abs(z) > 1
        zi = np.where(outer, 1 / np.where(outer, z, 1), 0)
        far = np.log(np.abs(_horner(coeffs[::-1], zi))) + d * np.log(np.abs(np.where(outer, z, 1)))
        near = np.log(np.abs(_horner(coeffs, np.where(outer, 0, z))))
        return np.where(outer, far, near)


def _poly_compose_affine(coeffs: np.ndarray, a: complex, b: complex) -> np.ndarray:
    """Coefficients of p(a z + b), by Horner in polynomial arithmetic."""
    out = np.array([coeffs[-1]], dtype=complex)
    lin = np.array([b, a], dtype=complex)
    for c in coeffs[-2::-1]:
        out = np.convolve(out, lin)
        out[0] += c
    return out


@dataclass(frozen=True)
class AffineSymbol:
    """psi(z) = a z + b.  ``is_constant`` marks psi identically equal to b."""

    a: complex
    b: complex = 0j
    is_constant: bool = False

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))
        if self.a == 0:
            object.__setattr__(self, "is_constant", True)
        if self.is_constant:
            object.__setattr__(self, "a", 0j)

    def __call__(self, z):
        return self.a * np.asarray(z, dtype=complex) + self.b

    def inverse(self) -> "AffineSymbol":
        if self.is_constant:
            raise ValueError("a constant symbol has no inverse")
        return AffineSymbol(1 / self.a, -self.b / self.a)

    def to_dict(self):
        return {"a": _cpair(self.a), "b": _cpair(self.b), "is_constant": self.is_constant}

    @classmethod
    def from_dict(cls, d):
        return cls(_from_cpair(d["a"]), _from_cpair(d.get("b", [0, 0])), bool(d.get("is_constant", False)))


@dataclass(frozen=True)
class ExpPolyFunction:
    """P(z) * exp(a0 + a1 z + a2 z^2), with P given by ascending coefficients."""

    poly: np.ndarray = field(default_factory=lambda: np.ones(1, dtype=complex))
    expo: tuple = (0j, 0j, 0j)

    def __post_init__(self):
        object.__setattr__(self, "poly", _as_coeffs(_trim(np.asarray(self.poly, dtype=complex))))
        e = tuple(complex(x) for x in self.expo)
        if len(e) != 3:
            raise ValueError("expo must be a triple (a0, a1, a2)")
        object.__setattr__(self, "expo", e)

    @property
    def is_zero(self) -> bool:
        return not np.any(self.poly)

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    @property
    def is_polynomial(self) -> bool:
        return self.expo[1] == 0 and self.expo[2] == 0

    def __call__(self, z):
        return evaluate(self, z)

    def log_modulus(self, z):
        z = np.asarray(z, dtype=complex)
        a0, a1, a2 = self.expo
        logp = _log_abs_poly(self.poly, z)
        return logp + (a0 + a1 * z + a2 * z * z).real

    def growth_bound(self):
        """(logS, d, c1, c2): log|f(z)| <= logS + d log r + c1 r + c2 r^2 for r >= 1."""
        s = float(np.sum(np.abs(self.poly)))
        logs = math.log(s) if s > 0 else -math.inf
        a0, a1, a2 = self.expo
        return logs + a0.real, self.degree, abs(a1), abs(a2)

    def __eq__(self, other):
        if not isinstance(other, ExpPolyFunction):
            return NotImplemented
        return self.expo == other.expo and np.array_equal(self.poly, other.poly)

    def __hash__(self):
        return hash((tuple(self.poly), self.expo))

    def to_dict(self):
        return {
            "kind": "exppoly",
            "poly": [_cpair(c) for c in self.poly],
            "expo": [_cpair(c) for c in self.expo],
        }


@dataclass(frozen=True)
class TaylorFunction:
    """Truncated power series with coefficients c_0 .. c_N."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_coeffs(self.coeffs))

    @property
    def truncation_degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    @property
    def degree(self) -> int:
        return len(_trim(np.asarray(self.coeffs))) - 1

    def __call__(self, z):
        return evaluate(self, z)

    def log_modulus(self, z):
        return _log_abs_poly(self.coeffs, z)

    def growth_bound(self):
        s = float(np.sum(np.abs(self.coeffs)))
        logs = math.log(s) if s > 0 else -math.inf
        return logs, self.degree, 0.0, 0.0

    def tail_estimate(self, r: float) -> float:
        """Geometric estimate of the discarded tail sum_{k>N} |c_k| r^k."""
        c = np.abs(self.coeffs)
        n = len(c) - 1
        if n < 1 or c[n] == 0:
            return 0.0
        if c[n - 1] == 0:
            return math.inf
        q = c[n] / c[n - 1] * r
        if q >= 1:
            return math.inf
        return float(c[n] * r**n * q / (1 - q))

    def __eq__(self, other):
        if not isinstance(other, TaylorFunction):
            return NotImplemented
        return np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def to_dict(self):
        return {
            "kind": "taylor",
            "coeffs": [_cpair(c) for c in self.coeffs],
            "truncation_degree": self.truncation_degree,
        }


EntireFunction = Union[ExpPolyFunction, TaylorFunction]


def kernel(w: complex) -> ExpPolyFunction:
    """Reproducing kernel K_w(z) = exp(conj(w) z) of the Hilbert Fock space."""
    return ExpPolyFunction([1], (0, np.conj(w), 0))


def normalized_kernel(w: complex) -> ExpPolyFunction:
    """k_w(z) = exp(conj(w) z - |w|^2 / 2)."""
    return ExpPolyFunction([1], (-abs(w) ** 2 / 2, np.conj(w), 0))


def monomial(k: int, family: str = "taylor") -> EntireFunction:
    c = np.zeros(k + 1, dtype=complex)
    c[k] = 1
    if family == "taylor":
        return TaylorFunction(c)
    return ExpPolyFunction(c)


# --------------------------------------------------------------------------
# evaluation


def evaluate(f: EntireFunction, z):
    """Value of f at z (scalar or array).

    ExpPoly values whose exponent has real part beyond +/-700 are formed from
    the log-modulus, so overflow shows up as an infinite magnitude rather than
    nan.  Use ``log_modulus`` for the finite log-scale value.
    """
    scalar = np.ndim(z) == 0
    z = np.asarray(z, dtype=complex)
    if isinstance(f, TaylorFunction):
        out = _horner(f.coeffs, z)
    else:
        a0, a1, a2 = f.expo
        q = a0 + a1 * z + a2 * z * z
        p = _horner(f.poly, z)
        big = np.abs(q.real) > LOG_OVERFLOW
        if np.any(big):
            with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
                mag = np.exp(np.log(np.abs(p)) + q.real)
                phase = np.angle(p) + q.imag
                cos, sin = np.cos(phase), np.sin(phase)
                far = np.where(cos == 0, 0, mag * cos) + 1j * np.where(sin == 0, 0, mag * sin)
                out = np.where(big, far, p * np.exp(np.where(big, 0, q)))
        else:
            out = p * np.exp(q)
    return complex(out) if scalar else out


def log_modulus(f: EntireFunction, z):
    """log|f(z)|; -inf at zeros.  Finite even where the value overflows."""
    out = f.log_modulus(z)
    return float(out) if np.ndim(z) == 0 else out


# --------------------------------------------------------------------------
# algebra


def differentiate(f: EntireFunction, n: int = 1) -> EntireFunction:
    if n < 0:
        raise ValueError("derivative order must be nonnegative")
    if isinstance(f, TaylorFunction):
        c = np.asarray(f.coeffs)
        for _ in range(n):
            if len(c) == 1:
                c = np.zeros(1, dtype=complex)
                continue
            c = c[1:] * np.arange(1, len(c))
        return TaylorFunction(c)
    poly = np.asarray(f.poly)
    _, a1, a2 = f.expo
    dq = np.array([a1, 2 * a2], dtype=complex)
    for _ in range(n):
        dp = poly[1:] * np.arange(1, len(poly)) if len(poly) > 1 else np.zeros(1, dtype=complex)
        prod = np.convolve(poly, dq)
        prod[: len(dp)] += dp
        poly = _trim(prod)
    return ExpPolyFunction(poly, f.expo)


def compose_affine(f: EntireFunction, psi: AffineSymbol) -> EntireFunction:
    """f o psi."""
    a, b = psi.a, psi.b
    if isinstance(f, TaylorFunction):
        return TaylorFunction(_poly_compose_affine(np.asarray(f.coeffs), a, b)[: len(f.coeffs)])
    a0, a1, a2 = f.expo
    poly = _poly_compose_affine(np.asarray(f.poly), a, b)
    expo = (a0 + a1 * b + a2 * b * b, a1 * a + 2 * a2 * a * b, a2 * a * a)
    return ExpPolyFunction(poly, expo)


def multiply(f: EntireFunction, g: EntireFunction, cap: int = TAYLOR_CAP) -> EntireFunction:
    if isinstance(f, ExpPolyFunction) and isinstance(g, ExpPolyFunction):
        expo = tuple(x + y for x, y in zip(f.expo, g.expo))
        return ExpPolyFunction(np.convolve(f.poly, g.poly), expo)
    if isinstance(f, TaylorFunction) and isinstance(g, TaylorFunction):
        deg = f.truncation_degree + g.truncation_degree
        if deg > cap:
            raise TruncationOverflow(f"product degree {deg} exceeds cap {cap}")
        return TaylorFunction(np.convolve(f.coeffs, g.coeffs))
    t, e = (f, g) if isinstance(f, TaylorFunction) else (g, f)
    n = t.truncation_degree
    return TaylorFunction(np.convolve(t.coeffs, to_taylor(e, n).coeffs)[: n + 1])


def antiderivative(f: TaylorFunction, cap: int = TAYLOR_CAP) -> TaylorFunction:
    """z -> integral_0^z f, degree raised by one."""
    if f.truncation_degree >= cap:
        raise TruncationOverflow(f"degree {f.truncation_degree} already at cap {cap}")
    c = np.asarray(f.coeffs)
    out = np.zeros(len(c) + 1, dtype=complex)
    out[1:] = c / np.arange(1, len(c) + 1)
    return TaylorFunction(out)


def exp_series(expo, n: int) -> np.ndarray:
    """Taylor coefficients of exp(a0 + a1 z + a2 z^2) up to degree n."""
    a0, a1, a2 = (complex(x) for x in expo)
    g = np.zeros(n + 1, dtype=complex)
    g[0] = 1
    for k in range(n):
        acc = a1 * g[k]
        if k >= 1:
            acc += 2 * a2 * g[k - 1]
        g[k + 1] = acc / (k + 1)
    return g * np.exp(a0)


def to_taylor(f: EntireFunction, n: int) -> TaylorFunction:
    if isinstance(f, TaylorFunction):
        c = np.zeros(n + 1, dtype=complex)
        m = min(n + 1, len(f.coeffs))
        c[:m] = f.coeffs[:m]
        return TaylorFunction(c)
    series = np.convolve(exp_series(f.expo, n), f.poly)[: n + 1]
    c = np.zeros(n + 1, dtype=complex)
    c[: len(series)] = series
    return TaylorFunction(c)


# --------------------------------------------------------------------------
# growth


@dataclass(frozen=True)
class MaxModulus:
    value: float
    log_value: float
    theta: float


def max_modulus(f: EntireFunction, r: float, min_points: int = 1024, rtol: float = 1e-10) -> MaxModulus:
    """M_f(r) = max |f| on |z| = r, with its log and the maximizing angle."""
    if r <= 0:
        raise ValueError("radius must be positive")
    from scipy.optimize import minimize_scalar

    def neg(theta):
        return -float(f.log_modulus(r * np.exp(1j * theta)))

    m = min_points
    prev = None
    while True:
        theta = np.linspace(0, 2 * np.pi, m, endpoint=False)
        lm = f.log_modulus(r * np.exp(1j * theta))
        i = int(np.argmax(lm))
        h = 2 * np.pi / m
        res = minimize_scalar(neg, bounds=(theta[i] - h, theta[i] + h), method="bounded",
                              options={"xatol": 1e-14})
        best, th = (float(lm[i]), float(theta[i]))
        if -res.fun > best:
            best, th = -float(res.fun), float(res.x) % (2 * np.pi)
        if prev is not None and abs(best - prev) <= rtol * max(1.0, abs(best)):
            break
        if m >= 1 << 16:
            break
        prev = best
        m *= 2
    value = math.exp(best) if best < LOG_OVERFLOW else math.inf
    return MaxModulus(value, best, th)


@dataclass(frozen=True)
class GrowthOrder:
    estimate: float
    symbolic: float | None
    degenerate: bool
    heuristic: bool = True


def symbolic_order(f: EntireFunction) -> float:
    if isinstance(f, TaylorFunction) or f.is_zero:
        return 0.0
    if f.expo[2] != 0:
        return 2.0
    if f.expo[1] != 0:
        return 1.0
    return 0.0


def order_of_growth(f: EntireFunction, r_min: float = 10.0, r_max: float = 1e3, points: int = 40) -> GrowthOrder:
    """Least-squares slope of log log M_f(r) against log r.

    The limsup defining the order has no known convergence rate, so the
    estimate is flagged heuristic.  Polynomials return 0 and are flagged
    degenerate.
    """
    sym = symbolic_order(f) if isinstance(f, ExpPolyFunction) else None
    if isinstance(f, TaylorFunction) or f.is_polynomial or f.is_zero:
        return GrowthOrder(0.0, sym, True)
    rs = np.geomspace(r_min, r_max, points)
    logm = np.array([max_modulus(f, r, min_points=1024, rtol=1e-8).log_value for r in rs])
    ok = logm > 1.0
    if ok.sum() < 5:
        return GrowthOrder(0.0, sym, True)
    slope = np.polyfit(np.log(rs[ok]), np.log(logm[ok]), 1)[0]
    return GrowthOrder(float(slope), sym, False)


# --------------------------------------------------------------------------
# preimages


@dataclass(frozen=True)
class Preimage:
    function: TaylorFunction
    residual: float
    radius: float


def _series_divide(num: np.ndarray, den: np.ndarray, n: int) -> np.ndarray:
    q = np.zeros(n + 1, dtype=complex)
    d0 = den[0]
    for k in range(n + 1):
        acc = num[k] if k < len(num) else 0
        for j in range(1, min(k, len(den) - 1) + 1):
            acc -= den[j] * q[k - j]
        q[k] = acc / d0
    return q


def solve_preimage(h: ExpPolyFunction, spec, N: int, radius: float = 3.0) -> Preimage:
    """Find f with u * f^(n)(psi) = h, as a degree N + n Taylor polynomial.

    (h / u) o psi^{-1} is expanded to degree N and integrated n times from 0.
    The sup of the residual |u f^(n)(psi) - h| on |z| <= radius is reported.
    """
    u, psi, n = spec.u, spec.psi, spec.n
    if psi.is_constant:
        raise PreimageError("psi is constant; the range is one-dimensional")
    if u.is_zero:
        raise PreimageError("u vanishes identically", location=0j)
    if u.degree > 0:
        roots = np.roots(np.asarray(u.poly)[::-1])
        inside = roots[np.abs(roots) <= radius]
        if inside.size:
            raise PreimageError(f"u has a zero at {inside[0]:.6g} inside |z| <= {radius}",
                                location=complex(inside[0]))
    inv = psi.inverse()
    hh = compose_affine(h, inv)
    uu = compose_affine(u, inv)
    if uu.poly[0] == 0:
        raise PreimageError("u vanishes at psi^{-1}(0)", location=complex(inv(0)))
    ratio_exp = ExpPolyFunction(hh.poly, tuple(x - y for x, y in zip(hh.expo, uu.expo)))
    num = to_taylor(ratio_exp, N).coeffs
    g = TaylorFunction(_series_divide(np.asarray(num), np.asarray(uu.poly), N))
    for _ in range(n):
        g = antiderivative(g, cap=max(TAYLOR_CAP, N + n))
    rr = np.linspace(0, radius, 33)
    th = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    z = (rr[:, None] * np.exp(1j * th[None, :])).ravel()
    lhs = evaluate(u, z) * evaluate(differentiate(g, n), psi(z))
    resid = float(np.max(np.abs(lhs - evaluate(h, z))))
    return Preimage(g, resid, radius)


# --------------------------------------------------------------------------
# serialization


def _cpair(c) -> list:
    c = complex(c)
    return [c.real, c.imag]


def _from_cpair(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    return complex(v[0], v[1])


def function_from_dict(d) -> EntireFunction:
    kind = d.get("kind", "exppoly")
    if kind == "taylor":
        return TaylorFunction([_from_cpair(c) for c in d["coeffs"]])
    if kind == "exppoly":
        poly = [_from_cpair(c) for c in d.get("poly", [[1, 0]])]
        expo = [_from_cpair(c) for c in d.get("expo", [[0, 0]] * 3)]
        return ExpPolyFunction(poly, tuple(expo))
    raise ValueError(f"unknown function kind {kind!r}")
