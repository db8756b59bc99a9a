"""
Real quadratic forms q(x, y) = v^T A v + b.v + c on the plane, v = (x, y).

Logs of |exp(a0 + a1 z + a2 z^2)| times Gaussian weights are exactly of this
shape, so boundedness, decay and integrability questions reduce to the sign
structure of A and whether b lies in its range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

EQ_TOL = 1e-12
WARN_TOL = 1e-9


class FormKind(str, Enum):
    NEGDEF = "negative_definite"  # q -> -inf in every direction
    LINE = "bounded_on_line"  # semidefinite, rank 1, constant along a line
    FLAT = "constant"  # A = 0 and b = 0
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class QuadForm:
    A: np.ndarray
    b: np.ndarray
    c: float = 0.0

    @classmethod
    def from_exponent(cls, a1: complex, a2: complex, s: float, a0: complex = 0j) -> "QuadForm":
        """Re(a0 + a1 z + a2 z^2) - s |z|^2 as a form in (x, y)."""
        al, be = a2.real, a2.imag
        A = np.array([[al - s, -be], [-be, -al - s]], dtype=float)
        b = np.array([a1.real, -a1.imag], dtype=float)
        return cls(A, b, float(complex(a0).real))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        x, y = z.real, z.imag
        A = self.A
        return A[0, 0] * x * x + 2 * A[0, 1] * x * y + A[1, 1] * y * y + self.b[0] * x + self.b[1] * y + self.c

    def scaled(self, t: float) -> "QuadForm":
        return QuadForm(self.A * t, self.b * t, self.c * t)


@dataclass(frozen=True)
class FormAnalysis:
    kind: FormKind
    eigenvalues: tuple
    null_direction: complex | None  # unit vector along which q is constant (LINE)
    decay_direction: complex  # unit vector of the most negative eigenvalue
    near_boundary: bool
    sup: float  # sup of q (inf when unbounded)
    argmax: complex | None


def analyze(form: QuadForm, tol: float = EQ_TOL) -> FormAnalysis:
    A, b = form.A, form.b
    lam, vec = np.linalg.eigh(A)
    scale = max(1.0, float(np.max(np.abs(lam))), float(np.max(np.abs(b))))
    lo, hi = float(lam[0]), float(lam[1])
    v_lo = complex(vec[0, 0], vec[1, 0])
    v_hi = complex(vec[0, 1], vec[1, 1])
    near = abs(hi) <= WARN_TOL * scale and abs(hi) > tol * scale
    if hi < -tol * scale:
        x = -0.5 * np.linalg.solve(A, b)
        sup = form.c + 0.5 * float(b @ x)
        return FormAnalysis(FormKind.NEGDEF, (lo, hi), None, v_lo, near, sup, complex(x[0], x[1]))
    if hi > tol * scale:
        return FormAnalysis(FormKind.UNBOUNDED, (lo, hi), None, v_lo, near, math.inf, None)
    bv = abs(b[0] * v_hi.real + b[1] * v_hi.imag)
    near = near or (tol * scale < bv <= WARN_TOL * scale)
    if bv > tol * scale:
        return FormAnalysis(FormKind.UNBOUNDED, (lo, hi), v_hi, v_lo, near, math.inf, None)
    if lo < -tol * scale:
        # maximize over the range of A (spanned by v_lo)
        t = -(b[0] * v_lo.real + b[1] * v_lo.imag) / (2 * lo)
        sup = form.c + lo * t * t + t * (b[0] * v_lo.real + b[1] * v_lo.imag)
        return FormAnalysis(FormKind.LINE, (lo, hi), v_hi, v_lo, near, float(sup), t * v_lo)
    if float(np.hypot(*b)) > tol * scale:
        return FormAnalysis(FormKind.UNBOUNDED, (lo, hi), None, v_lo, near, math.inf, None)
    return FormAnalysis(FormKind.FLAT, (lo, hi), None, v_lo, near, form.c, 0j)


def gaussian_integral(form: QuadForm) -> float:
    """Integral of exp(q) over the plane; inf unless A is negative definite."""
    an = analyze(form)
    if an.kind is not FormKind.NEGDEF:
        return math.inf
    A, b = form.A, form.b
    det = float(np.linalg.det(-A))
    return math.pi / math.sqrt(det) * math.exp(form.c - 0.25 * float(b @ np.linalg.solve(A, b)))


def log_gaussian_integral(form: QuadForm) -> float:
    an = analyze(form)
    if an.kind is not FormKind.NEGDEF:
        return math.inf
    A, b = form.A, form.b
    det = float(np.linalg.det(-A))
    return math.log(math.pi) - 0.5 * math.log(det) + form.c - 0.25 * float(b @ np.linalg.solve(A, b))
