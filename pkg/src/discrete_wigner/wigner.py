"""Discrete Wigner functions from Weyl-ordered moments.

For a model of dimension N+1 the Wigner matrix of the stationary state |n>
is the unique (N+1)x(N+1) table W with

    sum_{k,l} W[k, l] p_k**a q_l**b = <n| G_ab |n>,   0 <= a, b <= N,

where ``G_ab`` is the Weyl-ordered operator of ``p**a q**b``.  Stacking the
right-hand sides in the moment matrix Z gives ``Z = Vp^T W Vq`` with
Vandermonde matrices on the spectra, so ``W = Vp^-T Z Vq^-1``.
"""

from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .exceptions import CostGuardError, NormalizationError, RealnessError
from .linalg import poly_matrix_power, power_walk, vandermonde_inverse, vandermonde_residual
from .model import (
    ModelDescriptor,
    momentum_wavefunctions,
    position_wavefunctions,
    spectral_cross_weights,
    spectral_weights,
)
from .scalars import Backend, GaussianRational, Surd

__all__ = [
    "MomentIndex",
    "MomentMatrix",
    "WignerMatrix",
    "CrossWignerMatrix",
    "PropertyCheck",
    "PropertyReport",
    "weyl_operator",
    "weyl_operator_bruteforce",
    "moment_matrix",
    "cross_moment_matrix",
    "wigner_matrix",
    "cross_wigner",
    "superposition_wigner",
    "verify_properties",
    "BRUTEFORCE_MAX_DEGREE",
]

BRUTEFORCE_MAX_DEGREE = 12

_cache_lock = threading.RLock()


class MomentIndex(NamedTuple):
    """Exponents of the monomial ``p**a q**b``."""

    a: int
    b: int


def _check_index(model: ModelDescriptor, a: int, b: int) -> MomentIndex:
    if not (0 <= a <= model.N and 0 <= b <= model.N):
        raise IndexError(f"moment index ({a}, {b}) outside 0..{model.N}")
    return MomentIndex(int(a), int(b))


def _check_state(model: ModelDescriptor, n: int) -> int:
    if not 0 <= n <= model.N:
        raise IndexError(f"state index {n} outside 0..{model.N}")
    return int(n)


# -- Weyl operators --------------------------------------------------------------------

class _WeylTable:
    """Every G_ab with 0 <= a, b <= N, from one walk over the powers of
    ``λp + μq`` up to degree 2N.  Exact entries stay as integer numerators
    over a shared denominator until someone asks for them."""

    def __init__(self, model: ModelDescriptor):
        self.model = model
        N = model.N
        self.raw: dict[tuple[int, int], object] = {}
        for r, coefficient_of in power_walk(model.momentum_matrix, model.position_matrix,
                                            2 * N, model.backend):
            for a in range(max(0, r - N), min(r, N) + 1):
                block = coefficient_of(a)
                binom = math.comb(r, a)
                if model.backend.exact:
                    re, im, denom = block
                    self.raw[(a, r - a)] = (re, im, denom * binom)
                else:
                    self.raw[(a, r - a)] = block / binom

    def element(self, a: int, b: int, i: int, k: int):
        block = self.raw[(a, b)]
        if self.model.backend.exact:
            re, im, denom = block
            return GaussianRational._new(Fraction(re[i, k], denom), Fraction(im[i, k], denom))
        return block[i, k]

    def operator(self, a: int, b: int) -> np.ndarray:
        d = self.model.dimension
        if not self.model.backend.exact:
            return self.raw[(a, b)].copy()
        out = np.empty((d, d), dtype=object)
        for i in range(d):
            for k in range(d):
                out[i, k] = self.element(a, b, i, k)
        return out

    def moments(self, n_prime: int, n: int) -> np.ndarray:
        d = self.model.dimension
        out = np.empty((d, d), dtype=object if self.model.backend.exact else complex)
        for a in range(d):
            for b in range(d):
                out[a, b] = self.element(a, b, n_prime, n)
        return out


def _cached(model: ModelDescriptor, key, build):
    cache = model._cache
    with _cache_lock:
        if key not in cache:
            cache[key] = build()
        return cache[key]


def _weyl_table(model: ModelDescriptor) -> _WeylTable:
    return _cached(model, "weyl", lambda: _WeylTable(model))


def weyl_operator(model: ModelDescriptor, idx) -> np.ndarray:
    """Weyl-ordered operator of ``p**a q**b`` in the model's basis.

    It is the coefficient of ``λ**a μ**b`` in ``(λp + μq)**(a+b)`` divided by
    ``binom(a+b, a)``.  Any ``a, b >= 0`` is allowed.  For gauged (rationalized) models the result is in the
    gauged basis; :meth:`ModelDescriptor.to_physical` undoes that.
    """
    a, b = int(idx[0]), int(idx[1])
    if a < 0 or b < 0:
        raise IndexError(f"exponents must be non-negative, got ({a}, {b})")
    if a <= model.N and b <= model.N and "weyl" in model._cache:
        return model._cache["weyl"].operator(a, b)
    power = poly_matrix_power(model.momentum_matrix, model.position_matrix, a + b, model.backend)
    coeff = power.coefficient(a, b)
    binom = math.comb(a + b, a)
    if model.backend.exact:
        return np.vectorize(lambda z: z / binom, otypes=[object])(coeff)
    return coeff / binom


def weyl_operator_bruteforce(model: ModelDescriptor, idx) -> np.ndarray:
    """Average of all ``binom(a+b, a)`` distinct words with a factors p and
    b factors q.  Exponential cost; guarded at ``a + b <= 12``."""
    a, b = int(idx[0]), int(idx[1])
    if a < 0 or b < 0:
        raise IndexError("exponents must be non-negative")
    if a + b > BRUTEFORCE_MAX_DEGREE:
        raise CostGuardError(f"a+b={a + b} exceeds the brute-force limit {BRUTEFORCE_MAX_DEGREE}")
    P, Q = model.momentum_matrix, model.position_matrix
    total = model.backend.zeros((model.dimension, model.dimension))
    count = 0
    for p_slots in itertools.combinations(range(a + b), a):
        word = model.backend.eye(model.dimension)
        slots = set(p_slots)
        for pos in range(a + b):
            word = word @ (P if pos in slots else Q)
        total = total + word
        count += 1
    if model.backend.exact:
        return np.vectorize(lambda z: z / count, otypes=[object])(total)
    return total / count


# -- moment and Wigner matrices ------------------------------------------------------------

@dataclass(frozen=True)
class MomentMatrix:
    """``entries[a, b] = <n|G_ab|n>``; real by Hermiticity of G_ab."""

    n: int
    entries: np.ndarray
    imag_residual: float = 0.0


def cross_moment_matrix(model: ModelDescriptor, n_prime: int, n: int) -> np.ndarray:
    """``<n'|G_ab|n>`` for all a, b, as stored in the model basis.

    For gauged models the physical matrix is this one times
    ``model.gauge_ratio(n_prime, n)``.
    """
    n_prime, n = _check_state(model, n_prime), _check_state(model, n)
    return _weyl_table(model).moments(n_prime, n)


def moment_matrix(model: ModelDescriptor, n: int) -> MomentMatrix:
    """Moment matrix of the stationary state |n>."""
    n = _check_state(model, n)
    Z = cross_moment_matrix(model, n, n)
    if model.backend.exact:
        bad = [z for z in Z.ravel() if z.imag]
        if bad:
            raise RealnessError(f"moment matrix of |{n}> has imaginary entries, e.g. {bad[0]}")
        entries = np.vectorize(lambda z: z.real, otypes=[object])(Z)
        return MomentMatrix(n, entries)
    residual = float(np.max(np.abs(Z.imag))) if Z.size else 0.0
    return MomentMatrix(n, Z.real.copy(), residual)


@dataclass(frozen=True)
class _Inverses:
    p_inv: np.ndarray
    q_inv: np.ndarray
    residual: float


def _inverses(model: ModelDescriptor) -> _Inverses:
    def build():
        p_inv = vandermonde_inverse(model.momentum_spectrum, model.backend)
        q_inv = vandermonde_inverse(model.position_spectrum, model.backend)
        if model.backend.exact:
            residual = 0.0
        else:
            residual = max(vandermonde_residual(model.momentum_spectrum, p_inv),
                           vandermonde_residual(model.position_spectrum, q_inv))
        return _Inverses(p_inv, q_inv, residual)

    return _cached(model, "vandermonde", build)


def _recover(model: ModelDescriptor, Z: np.ndarray) -> np.ndarray:
    """``Vp^-T Z Vq^-1``."""
    inv = _inverses(model)
    return inv.p_inv.T @ Z @ inv.q_inv


@dataclass(frozen=True)
class WignerMatrix:
    """Discrete Wigner function: ``entries[k, l] = W(p_k, q_l)``.

    ``n`` is the stationary-state index, or None for a superposition whose
    coefficients are in ``state``.  Exact entries are Fractions (or
    :class:`Surd` for superpositions with irrational values).
    """

    n: int | None
    entries: np.ndarray
    backend: Backend
    p_values: tuple
    q_values: tuple
    imag_residual: float = 0.0
    vandermonde_residual: float = 0.0
    state: tuple | None = None

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def total(self):
        return _sum(self.entries.ravel(), self.backend)

    def column_sums(self) -> list:
        """Sum over momentum index k, one value per q_l."""
        return [_sum(self.entries[:, l], self.backend) for l in range(self.shape[1])]

    def row_sums(self) -> list:
        """Sum over position index l, one value per p_k."""
        return [_sum(self.entries[k, :], self.backend) for k in range(self.shape[0])]

    def value(self, p, q):
        """Entry at the spectral point (p, q)."""
        return self.entries[self.p_values.index(p), self.q_values.index(q)]

    def as_float(self) -> np.ndarray:
        if self.entries.dtype == object:
            return np.array([[float(v) for v in row] for row in self.entries], dtype=float)
        return np.asarray(self.entries, dtype=float)


def _sum(values, backend: Backend):
    if backend.exact:
        total = Fraction(0)
        for v in values:
            total = total + v
        return total
    return sum(values)


def wigner_matrix(model: ModelDescriptor, n: int) -> WignerMatrix:
    """Wigner matrix of the stationary state |n>.

    Raises
    ------
    RealnessError
        The moment matrix is not real (exactly, or beyond the float
        tolerance after recovery), which means the model is broken.
    """
    n = _check_state(model, n)

    def build():
        Z = cross_moment_matrix(model, n, n)
        inv = _inverses(model)
        if model.backend.exact:
            bad = [z for z in Z.ravel() if z.imag]
            if bad:
                raise RealnessError(f"moment matrix of |{n}> has imaginary entries, e.g. {bad[0]}")
            Zr = np.vectorize(lambda z: z.real, otypes=[object])(Z)
            return WignerMatrix(n, _recover(model, Zr), model.backend,
                                model.momentum_spectrum, model.position_spectrum)
        W = _recover(model, Z)
        imag = float(np.max(np.abs(W.imag)))
        if imag > model.backend.tol:
            raise RealnessError(f"W({n}) has imaginary parts up to {imag:.3g}")
        return WignerMatrix(n, W.real.copy(), model.backend, model.momentum_spectrum,
                            model.position_spectrum, imag, inv.residual)

    return _cached(model, ("wigner", n), build)


@dataclass(frozen=True)
class CrossWignerMatrix:
    """``entries[k, l] = W(n', n; p_k, q_l)`` (physical values).

    Exact entries are :class:`Surd`: for gauged models the physical cross
    moments are a square-root multiple of rational ones.
    """

    n_prime: int
    n: int
    entries: np.ndarray
    backend: Backend

    def total(self):
        if self.backend.exact:
            return sum(self.entries.ravel(), Surd())
        return complex(np.sum(self.entries))

    def column_sums(self) -> list:
        if self.backend.exact:
            return [sum(self.entries[:, l], Surd()) for l in range(self.entries.shape[1])]
        return list(np.sum(self.entries, axis=0))

    def row_sums(self) -> list:
        if self.backend.exact:
            return [sum(self.entries[k, :], Surd()) for k in range(self.entries.shape[0])]
        return list(np.sum(self.entries, axis=1))


def cross_wigner(model: ModelDescriptor, n_prime: int, n: int) -> CrossWignerMatrix:
    """Cross Wigner matrix ``Vp^-T Z(n', n) Vq^-1`` with
    ``Z(n', n)[a, b] = <n'|G_ab|n>``."""
    n_prime, n = _check_state(model, n_prime), _check_state(model, n)

    def build():
        W = _recover(model, cross_moment_matrix(model, n_prime, n))
        ratio = model.gauge_ratio(n_prime, n)
        if model.backend.exact:
            out = np.empty(W.shape, dtype=object)
            for idx, v in np.ndenumerate(W):
                out[idx] = Surd.coerce(v) * ratio if v else Surd()
            return CrossWignerMatrix(n_prime, n, out, model.backend)
        return CrossWignerMatrix(n_prime, n, W * ratio, model.backend)

    return _cached(model, ("cross", n_prime, n), build)


def _normalize_coefficients(model: ModelDescriptor, coefficients: Sequence) -> tuple:
    if len(coefficients) != model.dimension:
        raise ValueError(f"{len(coefficients)} coefficients for a {model.dimension}-dimensional model")
    if model.backend.exact:
        cs = tuple(Surd.coerce(c) for c in coefficients)
        norm = sum((c * c.conjugate() for c in cs), Surd())
        if norm != 1:
            raise NormalizationError(f"state norm squared is {norm}, expected exactly 1")
        return cs
    cs = tuple(complex(c) for c in coefficients)
    norm = sum(abs(c) ** 2 for c in cs)
    if abs(norm - 1) > model.backend.tol:
        raise NormalizationError(f"state norm squared is {norm!r}, expected 1")
    return cs


def superposition_wigner(model: ModelDescriptor, coefficients: Sequence) -> WignerMatrix:
    """Wigner matrix of ``sum_n c_n |n>``:
    ``sum_{n', n} conj(c_n') c_n W(n', n)``.

    Only pairs with both coefficients nonzero are evaluated; their cross
    Wigner matrices are cached on the model.
    """
    cs = _normalize_coefficients(model, coefficients)
    backend = model.backend
    support = [i for i, c in enumerate(cs) if c]
    d = model.dimension
    if backend.exact:
        acc = np.empty((d, d), dtype=object)
        acc.fill(Surd())
    else:
        acc = np.zeros((d, d), dtype=complex)
    for n_prime in support:
        for n in support:
            weight = cs[n_prime].conjugate() * cs[n]
            acc = acc + cross_wigner(model, n_prime, n).entries * weight
    if backend.exact:
        bad = [v for v in acc.ravel() if not v.is_real]
        if bad:
            raise RealnessError(f"superposition Wigner function has imaginary part, e.g. {bad[0]}")
        if all(v.is_rational for v in acc.ravel()):
            entries = np.vectorize(lambda v: v.to_gaussian().real, otypes=[object])(acc)
        else:
            entries = acc
        return WignerMatrix(None, entries, backend, model.momentum_spectrum,
                            model.position_spectrum, state=cs)
    imag = float(np.max(np.abs(acc.imag)))
    if imag > backend.tol:
        raise RealnessError(f"superposition Wigner function has imaginary parts up to {imag:.3g}")
    return WignerMatrix(None, acc.real.copy(), backend, model.momentum_spectrum,
                        model.position_spectrum, imag, _inverses(model).residual, state=cs)


# -- property verification ------------------------------------------------------------------

@dataclass(frozen=True)
class PropertyCheck:
    name: str
    status: str  # "pass" | "fail" | "skipped"
    residual: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status != "fail"


@dataclass
class PropertyReport:
    """Outcome of :func:`verify_properties` for one state."""

    n: int
    backend: str
    checks: list[PropertyCheck] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> PropertyCheck:
        return next(c for c in self.checks if c.name == name)

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            tail = f" ({c.detail})" if c.detail else ""
            out.append(f"n={self.n} {c.name:<22} {c.status.upper():<7} residual={c.residual:.3e}{tail}")
        out.extend(f"n={self.n} note: {note}" for note in self.notes)
        return out


def _diff(a, b, backend: Backend) -> tuple[bool, float]:
    """(equal, |a - b|) with exact equality or the float tolerance."""
    delta = a - b
    if backend.exact:
        if isinstance(delta, Surd):
            return (not delta, abs(complex(delta)))
        return (delta == 0, abs(float(delta)))
    mag = abs(delta)
    return (mag <= backend.tol, float(mag))


def _compare_all(pairs, backend: Backend) -> tuple[bool, float]:
    ok, worst = True, 0.0
    for a, b in pairs:
        eq, mag = _diff(a, b, backend)
        ok = ok and eq
        worst = max(worst, mag)
    return ok, worst


def _reference_probabilities(model: ModelDescriptor, which: str) -> np.ndarray:
    """|phi_n(q_l)|^2 (or |psi_n(p_k)|^2), indexed [n, l]."""
    if model.name == "su2" and model.two_j is not None:
        builder = position_wavefunctions if which == "position" else momentum_wavefunctions
        return builder(model.two_j, model.backend).probabilities()
    return spectral_weights(model, which)


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def verify_properties(model: ModelDescriptor, n: int) -> PropertyReport:
    """Check realness, normalization, both marginals and (when the model's
    spectra are symmetric and both operators tridiagonal with zero
    diagonal) the four-fold reflection symmetry of W(n).

    Failures become report entries; nothing is raised for them.
    """
    n = _check_state(model, n)
    backend = model.backend
    report = PropertyReport(n, backend.name)
    try:
        W = wigner_matrix(model, n)
    except RealnessError as exc:
        report.checks.append(PropertyCheck("realness", "fail", float("inf"), str(exc)))
        return report
    report.checks.append(PropertyCheck("realness", "pass", W.imag_residual))

    ok, res = _compare_all([(W.total(), 1)], backend)
    report.checks.append(PropertyCheck("normalization", _status(ok), res))

    pos = _reference_probabilities(model, "position")[n]
    ok, res = _compare_all(zip(W.column_sums(), pos), backend)
    report.checks.append(PropertyCheck("position marginal", _status(ok), res))

    mom = _reference_probabilities(model, "momentum")[n]
    ok, res = _compare_all(zip(W.row_sums(), mom), backend)
    report.checks.append(PropertyCheck("momentum marginal", _status(ok), res))

    hyp_sym = model.has_symmetric_spectra
    hyp_tri = model.is_tridiagonal_offdiagonal
    N = model.N
    E = W.entries
    reflections = {
        "symmetry p -> -p": lambda k, l: E[N - k, l],
        "symmetry q -> -q": lambda k, l: E[k, N - l],
        "symmetry (p,q) -> -(p,q)": lambda k, l: E[N - k, N - l],
    }
    if hyp_sym and hyp_tri:
        for name, mirror in reflections.items():
            ok, res = _compare_all(((E[k, l], mirror(k, l)) for k in range(N + 1)
                                    for l in range(N + 1)), backend)
            report.checks.append(PropertyCheck(name, _status(ok), res))
    else:
        missing = [label for label, flag in (("symmetric spectra", hyp_sym),
                                             ("tridiagonal operators", hyp_tri)) if not flag]
        for name in reflections:
            report.checks.append(PropertyCheck(name, "skipped", 0.0,
                                               "hypothesis not met: " + ", ".join(missing)))

    flat = W.as_float()
    k, l = np.unravel_index(int(np.argmin(flat)), flat.shape)
    lowest = E[k, l]
    negative = lowest < 0 if backend.exact and not isinstance(lowest, Surd) else flat[k, l] < 0
    if negative:
        report.notes.append(f"W takes negative values; minimum {lowest} at "
                            f"(p, q) = ({W.p_values[k]}, {W.q_values[l]})")
    if not backend.exact:
        report.notes.append(f"Vandermonde residual {W.vandermonde_residual:.3e}")
    return report
