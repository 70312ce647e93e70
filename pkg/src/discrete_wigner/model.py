"""Finite quantum systems: the model contract and the su(2) oscillator.

A :class:`ModelDescriptor` carries the matrices of the momentum and position
operators in the energy basis together with their (analytically known,
simple) spectra.  Nothing here diagonalizes a matrix; spectra are inputs and
are only *checked* against the matrices.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path

import numpy as np

from .exceptions import DegreeError, ModelError, SingularityError, ConditioningError
from .linalg import as_backend_matrix, check_nodes, determinant, max_abs
from .scalars import (
    EXACT,
    Backend,
    GaussianRational,
    Surd,
    float_backend,
    format_exact,
    get_backend,
    parse_gaussian,
)

__all__ = [
    "HalfInteger",
    "ModelDescriptor",
    "WavefunctionTable",
    "su2_model",
    "rationalized_su2_model",
    "su2",
    "krawtchouk",
    "position_wavefunctions",
    "momentum_wavefunctions",
    "spectral_weights",
    "spectral_cross_weights",
    "load_model",
    "model_to_dict",
]


@dataclass(frozen=True)
class HalfInteger:
    """Non-negative half-integer ``j`` stored as the integer ``2j``."""

    two_j: int

    def __post_init__(self):
        if not isinstance(self.two_j, (int, np.integer)) or self.two_j < 0:
            raise ValueError(f"2j must be a non-negative integer, got {self.two_j!r}")

    @classmethod
    def parse(cls, text: str) -> "HalfInteger":
        """Accepts ``"5/2"``, ``"3"`` or ``"2.5"``."""
        value = Fraction(text)
        if (2 * value).denominator != 1:
            raise ValueError(f"{text!r} is not a half-integer")
        return cls(int(2 * value))

    @property
    def j(self) -> Fraction:
        return Fraction(self.two_j, 2)

    @property
    def N(self) -> int:
        return self.two_j

    @property
    def dimension(self) -> int:
        return self.two_j + 1

    def __str__(self):
        return str(self.j)


def _two_j(size) -> int:
    """Plain integers are 2j; pass a :class:`HalfInteger` to be explicit."""
    if isinstance(size, HalfInteger):
        return size.two_j
    return HalfInteger(int(size)).two_j


@dataclass(frozen=True, eq=False)
class ModelDescriptor:
    """Operators, spectra and energies of a finite quantum system.

    The matrices are expressed in the basis of energy eigenstates |n>.  When
    ``gauge`` is given the stored matrices are a diagonal conjugate
    ``D M D^-1`` of the physical ones, with ``D = diag(sqrt(gauge))``; this
    leaves every diagonal matrix element of every operator word unchanged
    and lets irrational models be handled over the Gaussian rationals.
    """

    momentum_matrix: np.ndarray
    position_matrix: np.ndarray
    momentum_spectrum: tuple
    position_spectrum: tuple
    energies: tuple
    backend: Backend = EXACT
    name: str = "custom"
    two_j: int | None = None
    gauge: tuple | None = None
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        b = self.backend
        P = as_backend_matrix(self.momentum_matrix, b)
        Q = as_backend_matrix(self.position_matrix, b)
        for M in (P, Q):
            M.setflags(write=False)
        object.__setattr__(self, "momentum_matrix", P)
        object.__setattr__(self, "position_matrix", Q)
        object.__setattr__(self, "momentum_spectrum", tuple(b.real_scalar(x) for x in self.momentum_spectrum))
        object.__setattr__(self, "position_spectrum", tuple(b.real_scalar(x) for x in self.position_spectrum))
        object.__setattr__(self, "energies", tuple(b.real_scalar(x) for x in self.energies))
        if self.gauge is not None:
            object.__setattr__(self, "gauge", tuple(b.real_scalar(x) for x in self.gauge))
        if self.validate:
            self._check()

    @property
    def dimension(self) -> int:
        return self.position_matrix.shape[0]

    @property
    def N(self) -> int:
        return self.dimension - 1

    def _check(self):
        d = self.dimension
        P, Q = self.momentum_matrix, self.position_matrix
        if P.shape != (d, d) or Q.shape != (d, d):
            raise ModelError(f"operator matrices must both be {d}x{d}")
        for label, spec in (("momentum", self.momentum_spectrum), ("position", self.position_spectrum)):
            if len(spec) != d:
                raise ModelError(f"{label} spectrum has {len(spec)} values, expected {d}")
            try:
                check_nodes(spec, self.backend)
            except (SingularityError, ConditioningError) as exc:
                raise ModelError(f"{label} spectrum is not simple: {exc}") from exc
        if len(self.energies) != d:
            raise ModelError(f"{len(self.energies)} energies given, expected {d}")
        if self.gauge is not None:
            if len(self.gauge) != d or any(g <= 0 for g in self.gauge):
                raise ModelError("gauge weights must be positive, one per basis state")
        for label, M, spec in (("momentum", P, self.momentum_spectrum),
                               ("position", Q, self.position_spectrum)):
            residual = self.hermiticity_residual(M)
            if not self.backend.is_zero(residual) and residual > self.backend.tol:
                raise ModelError(f"{label} matrix is not Hermitian (residual {residual:.3g})")
            worst = self.eigenvalue_residual(M, spec)
            if worst > self.backend.tol or (self.backend.exact and worst):
                raise ModelError(f"{label} spectrum does not match its matrix (residual {worst:.3g})")

    def hermiticity_residual(self, M) -> float:
        """``max |M'_ik g_k - conj(M'_ki) g_i|``, i.e. Hermiticity of the
        physical operator behind the (possibly gauged) matrix ``M'``."""
        g = self.gauge or (1,) * self.dimension
        worst = 0.0
        for i in range(self.dimension):
            for k in range(i, self.dimension):
                diff = M[i, k] * g[k] - M[k, i].conjugate() * g[i]
                worst = max(worst, self.backend.magnitude(diff))
        return worst

    def eigenvalue_residual(self, M, spectrum) -> float:
        """How far each listed eigenvalue is from being one of ``M``.

        Exact: ``|det(M - x I)|`` for every x, which vanishes for all N+1
        distinct x only if they are the full spectrum.  Float: smallest
        singular value of ``M - x I``.
        """
        eye = self.backend.eye(self.dimension)
        worst = 0.0
        for x in spectrum:
            shifted = M - eye * (GaussianRational(x) if self.backend.exact else x)
            if self.backend.exact:
                worst = max(worst, self.backend.magnitude(GaussianRational.coerce(determinant(shifted))))
            else:
                worst = max(worst, float(np.linalg.svd(shifted, compute_uv=False)[-1]))
        return worst

    def hamiltonian(self) -> np.ndarray:
        H = self.backend.zeros((self.dimension, self.dimension))
        for n, e in enumerate(self.energies):
            H[n, n] = self.backend.scalar(e)
        return H

    def gauge_ratio(self, n_prime: int, n: int):
        """Factor turning a stored element (n', n) into the physical one:
        ``sqrt(gauge[n] / gauge[n'])``."""
        if self.gauge is None or n == n_prime:
            return 1
        if self.backend.exact:
            return Surd.sqrt(Fraction(self.gauge[n]) / self.gauge[n_prime])
        return math.sqrt(self.gauge[n] / self.gauge[n_prime])

    def to_physical(self, M) -> np.ndarray:
        """Undo the gauge on a matrix expressed in this model's basis.

        Exact models return :class:`Surd` entries, since the physical
        elements may involve square roots.
        """
        M = np.asarray(M)
        d = self.dimension
        if self.backend.exact:
            out = np.empty((d, d), dtype=object)
            for i in range(d):
                for k in range(d):
                    out[i, k] = Surd.coerce(M[i, k]) * self.gauge_ratio(i, k) if M[i, k] else Surd()
            return out
        if self.gauge is None:
            return M.copy()
        g = np.sqrt(np.array(self.gauge, dtype=float))
        return M * g[None, :] / g[:, None]

    @cached_property
    def has_symmetric_spectra(self) -> bool:
        """Both spectra satisfy x_k = -x_{N-k}."""
        return all(spec[k] == -spec[self.N - k] if self.backend.exact
                   else abs(spec[k] + spec[self.N - k]) <= self.backend.tol
                   for spec in (self.momentum_spectrum, self.position_spectrum)
                   for k in range(self.dimension))

    @cached_property
    def is_tridiagonal_offdiagonal(self) -> bool:
        """Both operators connect |n> only to |n +- 1>."""
        for M in (self.momentum_matrix, self.position_matrix):
            for (i, k), v in np.ndenumerate(M):
                if abs(i - k) != 1 and not self.backend.is_zero(v):
                    return False
        return True

    @cached_property
    def _cache(self) -> dict:
        return {}


# -- su(2) oscillator -------------------------------------------------------------

def _ladder_squares(two_j: int) -> list[Fraction]:
    """``c_n**2`` with ``c_n = <n+1|q|n> = sqrt((n+1)(N-n))/2``."""
    N = two_j
    return [Fraction((n + 1) * (N - n), 4) for n in range(N)]


def _su2_spectrum(two_j: int) -> list[Fraction]:
    return [Fraction(2 * k - two_j, 2) for k in range(two_j + 1)]


def su2_model(two_j, tol: float | None = None) -> ModelDescriptor:
    """The su(2) finite oscillator in dimension 2j+1 (float backend).

    q = (J+ + J-)/2 and p = i(J+ - J-)/2 in the basis |n> = |j, n-j>, with
    spectra q_k = p_k = -j+k and energies n + 1/2.  Its entries are square
    roots, so this form is float-only; see :func:`rationalized_su2_model`.
    """
    two_j = _two_j(two_j)
    d = two_j + 1
    c = np.sqrt(np.array([float(x) for x in _ladder_squares(two_j)]))
    Q = np.zeros((d, d), dtype=complex)
    P = np.zeros((d, d), dtype=complex)
    for n in range(two_j):
        Q[n + 1, n] = Q[n, n + 1] = c[n]
        P[n + 1, n] = 1j * c[n]
        P[n, n + 1] = -1j * c[n]
    spectrum = [float(x) for x in _su2_spectrum(two_j)]
    return ModelDescriptor(P, Q, spectrum, spectrum, [n + 0.5 for n in range(d)],
                           backend=float_backend(tol), name="su2", two_j=two_j)


def rationalized_su2_model(two_j) -> ModelDescriptor:
    """su(2) oscillator conjugated by a diagonal matrix so that all entries
    are Gaussian rationals (exact backend).

    Superdiagonals become 1 (position) and -i (momentum); subdiagonals carry
    ``c_n**2 = (n+1)(N-n)/4`` and ``i c_n**2``.  Diagonal elements of every
    operator word, hence all moment and Wigner matrices, are unchanged.
    """
    two_j = _two_j(two_j)
    d = two_j + 1
    sq = _ladder_squares(two_j)
    zero = GaussianRational()
    Q = np.full((d, d), zero, dtype=object)
    P = np.full((d, d), zero, dtype=object)
    gauge = [Fraction(1)]
    for n in range(two_j):
        Q[n, n + 1] = GaussianRational(1)
        Q[n + 1, n] = GaussianRational(sq[n])
        P[n, n + 1] = GaussianRational(0, -1)
        P[n + 1, n] = GaussianRational(0, sq[n])
        gauge.append(gauge[-1] * sq[n])
    spectrum = _su2_spectrum(two_j)
    return ModelDescriptor(P, Q, spectrum, spectrum, [Fraction(2 * n + 1, 2) for n in range(d)],
                           backend=EXACT, name="su2", two_j=two_j, gauge=tuple(gauge))


_SU2_CACHE: dict = {}


def su2(two_j, backend: str | Backend = "exact", tol: float | None = None) -> ModelDescriptor:
    """su(2) model for the requested backend (cached; models are immutable)."""
    backend = get_backend(backend, tol)
    key = (_two_j(two_j), backend)
    if key not in _SU2_CACHE:
        _SU2_CACHE[key] = (rationalized_su2_model(key[0]) if backend.exact
                           else su2_model(key[0], tol=backend.tol))
    return _SU2_CACHE[key]


# -- Krawtchouk wavefunctions -------------------------------------------------------

def krawtchouk(n: int, x, p, N: int):
    """Krawtchouk polynomial K_n(x; p, N) as a terminating 2F1 sum.

    Exact when ``x`` and ``p`` are rational.  The sum stops as soon as a
    Pochhammer factor vanishes, so non-negative integer ``x`` only needs
    ``min(n, x)`` terms.
    """
    if not (isinstance(n, (int, np.integer)) and isinstance(N, (int, np.integer))):
        raise TypeError("n and N must be integers")
    if n < 0 or N < n:
        raise DegreeError(f"Krawtchouk degree n={n} must satisfy 0 <= n <= N={N}")
    exact = not isinstance(x, float) and not isinstance(p, float)
    if exact:
        x, p = Fraction(x), Fraction(p)
    if not 0 < p < 1:
        raise ValueError("Krawtchouk parameter p must lie in (0, 1)")
    inv_p = 1 / p
    term = Fraction(1) if exact else 1.0
    total = term
    for k in range(n):
        factor = (k - n) * (k - x)
        if factor == 0:
            break
        term = term * factor / ((k - N) * (k + 1)) * inv_p
        total += term
    return total


@dataclass(frozen=True)
class WavefunctionTable:
    """Amplitudes ``values[n, k]`` = <n|x_k> for x = position or momentum.

    Exact tables hold :class:`Surd` amplitudes; float tables hold complex.
    """

    kind: str
    values: np.ndarray
    spectrum: tuple
    exact: bool

    def probabilities(self) -> np.ndarray:
        """``|values|**2``: Fractions (exact) or floats."""
        if self.exact:
            out = np.empty(self.values.shape, dtype=object)
            for idx, v in np.ndenumerate(self.values):
                out[idx] = (v * v.conjugate()).to_gaussian().real
            return out
        return np.abs(self.values) ** 2

    def products(self, n_prime: int, n: int) -> np.ndarray:
        """``values[n', k] * conj(values[n, k])`` for every k."""
        row_a, row_b = self.values[n_prime], self.values[n]
        if self.exact:
            return np.array([a * b.conjugate() for a, b in zip(row_a, row_b)], dtype=object)
        return row_a * np.conj(row_b)

    def unitarity_residuals(self) -> tuple[float, float]:
        """Max deviation of ``T T^H`` and ``T^H T`` from the identity."""
        T = self.values
        if self.exact:
            conj = np.vectorize(lambda v: v.conjugate(), otypes=[object])(T)
            eye = np.eye(T.shape[0], dtype=int).astype(object)
            res_rows = T @ conj.T - eye
            res_cols = conj.T @ T - eye
            mag = lambda M: max((abs(complex(v)) for v in M.ravel()), default=0.0)
            zero = lambda M: all(not Surd.coerce(v) for v in M.ravel())
            return (0.0 if zero(res_rows) else mag(res_rows),
                    0.0 if zero(res_cols) else mag(res_cols))
        eye = np.eye(T.shape[0])
        return (float(np.max(np.abs(T @ T.conj().T - eye))),
                float(np.max(np.abs(T.conj().T @ T - eye))))


def _phi_table(two_j: int, exact: bool) -> np.ndarray:
    N = two_j
    out = np.empty((N + 1, N + 1), dtype=object if exact else float)
    for n in range(N + 1):
        for k in range(N + 1):
            K = krawtchouk(n, k, Fraction(1, 2), N)
            sign = -1 if n % 2 else 1
            if exact:
                out[n, k] = Surd.sqrt(Fraction(math.comb(N, n) * math.comb(N, k), 2 ** N)) * (sign * K)
            else:
                out[n, k] = sign * float(K) * math.sqrt(math.comb(N, n) * math.comb(N, k) / 2.0 ** N)
    return out


def position_wavefunctions(two_j, backend: str | Backend = "exact") -> WavefunctionTable:
    """su(2) position amplitudes phi_n(q_k): a (-1)^n-signed, binomially
    weighted symmetric Krawtchouk polynomial evaluated at j + q_k = k."""
    two_j = _two_j(two_j)
    backend = get_backend(backend)
    values = _phi_table(two_j, backend.exact)
    spectrum = tuple(backend.real_scalar(x) for x in _su2_spectrum(two_j))
    if not backend.exact:
        values = values.astype(complex)
    return WavefunctionTable("position", values, spectrum, backend.exact)


def _momentum_phase(n: int):
    # -i^(n+1)
    return [GaussianRational(0, -1), GaussianRational(1), GaussianRational(0, 1),
            GaussianRational(-1)][n % 4]


def momentum_wavefunctions(two_j, backend: str | Backend = "exact") -> WavefunctionTable:
    """su(2) momentum amplitudes psi_n(p_k) = -i^(n+1) phi_n(p_k)."""
    two_j = _two_j(two_j)
    backend = get_backend(backend)
    phi = _phi_table(two_j, backend.exact)
    values = np.empty(phi.shape, dtype=object if backend.exact else complex)
    for n in range(two_j + 1):
        phase = _momentum_phase(n)
        values[n] = phi[n] * (phase if backend.exact else complex(phase))
    spectrum = tuple(backend.real_scalar(x) for x in _su2_spectrum(two_j))
    return WavefunctionTable("momentum", values, spectrum, backend.exact)


# -- spectral projectors (model-generic marginal reference) ------------------------------

def _projected_columns(model: ModelDescriptor, which: str, n: int) -> list[np.ndarray]:
    """For each eigenvalue x_l, the vector ``Pi_l |n>`` in the model basis,
    with ``Pi_l = prod_{m != l} (M - x_m)/(x_l - x_m)`` the spectral projector."""
    if which not in ("position", "momentum"):
        raise ValueError("which must be 'position' or 'momentum'")
    M = model.position_matrix if which == "position" else model.momentum_matrix
    spec = model.position_spectrum if which == "position" else model.momentum_spectrum
    b = model.backend
    d = model.dimension
    columns = []
    for l, xl in enumerate(spec):
        v = b.zeros(d)
        v[n] = b.scalar(1)
        for m, xm in enumerate(spec):
            if m == l:
                continue
            scale = 1 / (xl - xm)
            shift = b.scalar(xm)
            v = (M @ v - v * shift) * (GaussianRational(scale) if b.exact else scale)
        columns.append(v)
    return columns


def spectral_weights(model: ModelDescriptor, which: str = "position") -> np.ndarray:
    """``|<n|x_l>|**2`` for every n, l, from spectral projectors.

    Works for any model without eigenvectors: the diagonal element of the
    projector onto x_l.  Entry ``[n, l]``; Fractions in exact mode.
    """
    d = model.dimension
    out = np.empty((d, d), dtype=object if model.backend.exact else float)
    for n in range(d):
        for l, v in enumerate(_projected_columns(model, which, n)):
            out[n, l] = model.backend.real_scalar(v[n]) if model.backend.exact else v[n].real
    return out


def spectral_cross_weights(model: ModelDescriptor, which: str, n_prime: int, n: int) -> np.ndarray:
    """``<n'|x_l><x_l|n>`` for every l (physical, gauge removed)."""
    ratio = model.gauge_ratio(n_prime, n)
    cols = _projected_columns(model, which, n)
    if model.backend.exact:
        return np.array([Surd.coerce(v[n_prime]) * ratio for v in cols], dtype=object)
    return np.array([v[n_prime] * ratio for v in cols], dtype=complex)


# -- JSON ingestion ----------------------------------------------------------------------

def _has_float(obj) -> bool:
    if isinstance(obj, float):
        return True
    if isinstance(obj, (list, tuple)):
        return any(_has_float(x) for x in obj)
    return False


def _parse_entry(v, exact: bool):
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ModelError(f"complex entries must be [re, im] pairs, got {v!r}")
        re_part, im_part = (_parse_entry(x, exact) for x in v)
        if exact:
            return GaussianRational(re_part.real, im_part.real) if not (re_part.imag or im_part.imag) \
                else re_part + im_part * GaussianRational(0, 1)
        return complex(re_part) + 1j * complex(im_part)
    if isinstance(v, bool):
        raise ModelError("booleans are not numbers")
    if isinstance(v, str):
        z = parse_gaussian(v)
        return z if exact else complex(z)
    if isinstance(v, int):
        return GaussianRational(v) if exact else complex(v)
    if isinstance(v, float):
        return complex(v)
    raise ModelError(f"cannot parse matrix entry {v!r}")


def _parse_real(v, exact: bool):
    z = _parse_entry(v, exact)
    if exact:
        if z.imag:
            raise ModelError(f"{v!r} is not real")
        return z.real
    if abs(z.imag) > 0:
        raise ModelError(f"{v!r} is not real")
    return z.real


def load_model(source, tol: float | None = None) -> ModelDescriptor:
    """Build a model from a JSON document (dict, JSON text, or file path).

    Keys: ``dimension``, ``position_matrix``, ``momentum_matrix``,
    ``position_spectrum``, ``momentum_spectrum``, ``energies``; optional
    ``name`` and ``gauge``.  Entries are numbers, rational strings such as
    ``"1/2"`` or ``"1/2-3i"``, or ``[re, im]`` pairs.  The document is exact
    unless it contains a JSON float anywhere.
    """
    if isinstance(source, dict):
        doc = source
    elif isinstance(source, (str, os.PathLike)) and Path(source).exists():
        doc = json.loads(Path(source).read_text())
    else:
        doc = json.loads(source)
    required = ("dimension", "position_matrix", "momentum_matrix",
                "position_spectrum", "momentum_spectrum", "energies")
    missing = [k for k in required if k not in doc]
    if missing:
        raise ModelError(f"model document lacks {', '.join(missing)}")
    exact = not any(_has_float(doc[k]) for k in required[1:] + ("gauge",) if k in doc)
    backend = EXACT if exact else float_backend(tol)
    d = int(doc["dimension"])

    def matrix(key):
        rows = doc[key]
        if len(rows) != d or any(len(r) != d for r in rows):
            raise ModelError(f"{key} must be {d}x{d}")
        out = np.empty((d, d), dtype=object if exact else complex)
        for i, row in enumerate(rows):
            for k, v in enumerate(row):
                out[i, k] = _parse_entry(v, exact)
        return out

    gauge = doc.get("gauge")
    return ModelDescriptor(
        momentum_matrix=matrix("momentum_matrix"),
        position_matrix=matrix("position_matrix"),
        momentum_spectrum=[_parse_real(v, exact) for v in doc["momentum_spectrum"]],
        position_spectrum=[_parse_real(v, exact) for v in doc["position_spectrum"]],
        energies=[_parse_real(v, exact) for v in doc["energies"]],
        backend=backend,
        name=str(doc.get("name", "custom")),
        gauge=None if gauge is None else [_parse_real(v, exact) for v in gauge],
    )


def model_to_dict(model: ModelDescriptor) -> dict:
    """JSON-ready document that :func:`load_model` reads back."""
    def entry(v):
        if model.backend.exact:
            return format_exact(v)
        return [float(v.real), float(v.imag)]

    def real(v):
        return format_exact(v) if model.backend.exact else float(v)

    doc = {
        "name": model.name,
        "dimension": model.dimension,
        "position_matrix": [[entry(v) for v in row] for row in model.position_matrix],
        "momentum_matrix": [[entry(v) for v in row] for row in model.momentum_matrix],
        "position_spectrum": [real(v) for v in model.position_spectrum],
        "momentum_spectrum": [real(v) for v in model.momentum_spectrum],
        "energies": [real(v) for v in model.energies],
    }
    if model.gauge is not None:
        doc["gauge"] = [real(v) for v in model.gauge]
    return doc
