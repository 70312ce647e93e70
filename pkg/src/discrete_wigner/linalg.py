"""Dense linear algebra over the exact and float scalar backends.

Matrices are plain numpy arrays: ``dtype=object`` holding
:class:`~discrete_wigner.scalars.GaussianRational` / ``Fraction`` entries for
the exact backend, ``complex128`` / ``float64`` for the float backend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .exceptions import ConditioningError, DegreeError, DimensionError, SingularityError
from .scalars import EXACT, Backend, GaussianRational, float_backend, get_backend

__all__ = [
    "elementary_symmetric",
    "elementary_symmetric_all",
    "check_nodes",
    "vandermonde_matrix",
    "vandermonde_inverse",
    "vandermonde_residual",
    "gauss_jordan_inverse",
    "determinant",
    "infer_backend",
    "as_backend_matrix",
    "max_abs",
    "PolyMatrix",
    "poly_matrix_power",
]


def _is_exact_value(x) -> bool:
    return isinstance(x, (int, Fraction, GaussianRational, np.integer)) and not isinstance(x, bool)


def infer_backend(values) -> Backend:
    """Exact if every entry is an exact number, float otherwise."""
    flat = np.asarray(values, dtype=object).ravel()
    if all(_is_exact_value(v) for v in flat):
        return EXACT
    return float_backend()


def as_backend_matrix(M, backend: Backend) -> np.ndarray:
    """Copy ``M`` into a complex matrix over ``backend``."""
    M = np.asarray(M, dtype=object if backend.exact else complex)
    if M.ndim != 2:
        raise DimensionError(f"expected a matrix, got shape {M.shape}")
    if not backend.exact:
        return M.astype(complex)
    out = np.empty(M.shape, dtype=object)
    for idx, v in np.ndenumerate(M):
        if isinstance(v, np.integer):
            v = int(v)
        out[idx] = backend.scalar(v)
    return out


def max_abs(M) -> float:
    """Largest entry magnitude, as a float (exact entries are converted)."""
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    if M.dtype == object:
        return max(EXACT.magnitude(v) if not isinstance(v, (int, Fraction)) else abs(float(v))
                   for v in M.ravel())
    return float(np.max(np.abs(M)))


# -- elementary symmetric functions -----------------------------------------

def elementary_symmetric_all(values: Sequence) -> list:
    """All of e_0 .. e_m of ``values`` via the product recurrence.

    Multiplying the generating polynomial by ``(1 + x t)`` one value at a
    time costs O(m) per value, so no subset is ever enumerated.
    """
    e = [1] + [0] * len(values)
    for count, x in enumerate(values, start=1):
        for k in range(count, 0, -1):
            e[k] = e[k] + x * e[k - 1]
    return e


def elementary_symmetric(values: Sequence, r: int, omit: int | None = None):
    """r-th elementary symmetric function of ``values``, optionally with the
    entry at index ``omit`` left out.

    >>> elementary_symmetric([1, 2, 3], 2, omit=2)
    2
    """
    values = list(values)
    if omit is not None:
        if not 0 <= omit < len(values):
            raise IndexError(f"omit={omit} out of range for {len(values)} values")
        values = values[:omit] + values[omit + 1:]
    if not 0 <= r <= len(values):
        raise DegreeError(f"degree {r} outside 0..{len(values)}")
    e = [1] + [0] * r
    for count, x in enumerate(values, start=1):
        for k in range(min(count, r), 0, -1):
            e[k] = e[k] + x * e[k - 1]
    return e[r]


# -- Vandermonde matrices -----------------------------------------------------

def check_nodes(nodes: Sequence, backend: Backend | None = None) -> tuple:
    """Validate Vandermonde nodes and convert them to the backend's reals.

    Raises
    ------
    SingularityError
        Two nodes coincide.
    ConditioningError
        Float nodes closer together than the backend tolerance.
    """
    backend = infer_backend(list(nodes)) if backend is None else get_backend(backend)
    if len(nodes) == 0:
        raise DimensionError("at least one node is required")
    xs = tuple(backend.real_scalar(x) for x in nodes)
    if len(set(xs)) != len(xs):
        raise SingularityError(f"repeated Vandermonde nodes: {xs}")
    if not backend.exact and len(xs) > 1:
        ordered = sorted(xs)
        gap = min(b - a for a, b in zip(ordered, ordered[1:]))
        if gap <= backend.tol:
            raise ConditioningError(f"node separation {gap:g} below tolerance {backend.tol:g}")
    return xs


def vandermonde_matrix(nodes: Sequence, backend: Backend | None = None) -> np.ndarray:
    """Matrix with entry (r, s) equal to ``nodes[r] ** s``."""
    backend = infer_backend(list(nodes)) if backend is None else get_backend(backend)
    xs = check_nodes(nodes, backend)
    size = len(xs)
    if backend.exact:
        out = np.empty((size, size), dtype=object)
        for r, x in enumerate(xs):
            power = Fraction(1)
            for s in range(size):
                out[r, s] = power
                power *= x
        return out
    return np.vander(np.array(xs, dtype=float), size, increasing=True)


def vandermonde_inverse(nodes: Sequence, backend: Backend | None = None,
                        check_residual: bool = False) -> np.ndarray:
    """Closed-form inverse of the Vandermonde matrix on ``nodes``.

    Entry (k, j) is ``(-1)**(N-k) * e_{N-k}(nodes without j)`` divided by
    ``prod_{l != j} (x_j - x_l)``.

    In float mode, ``check_residual=True`` raises :class:`ConditioningError`
    when ``max|V V^-1 - I|`` exceeds the backend tolerance.
    """
    backend = infer_backend(list(nodes)) if backend is None else get_backend(backend)
    xs = check_nodes(nodes, backend)
    N = len(xs) - 1
    if backend.exact:
        out = np.empty((N + 1, N + 1), dtype=object)
    else:
        out = np.empty((N + 1, N + 1), dtype=float)
    for j, xj in enumerate(xs):
        others = xs[:j] + xs[j + 1:]
        e = elementary_symmetric_all(others)
        denom = Fraction(1) if backend.exact else 1.0
        for xl in others:
            denom *= xj - xl
        for k in range(N + 1):
            value = e[N - k] / denom
            out[k, j] = -value if (N - k) % 2 else value
    if check_residual and not backend.exact:
        residual = vandermonde_residual(xs, out)
        if residual > backend.tol:
            raise ConditioningError(f"Vandermonde residual {residual:.3g} exceeds {backend.tol:g}")
    return out


def vandermonde_residual(nodes: Sequence, inverse: np.ndarray) -> float:
    """``max|V(nodes) @ inverse - I|`` evaluated in the inverse's arithmetic."""
    if inverse.dtype == object:
        V = vandermonde_matrix(nodes, EXACT)
        eye = np.eye(len(nodes), dtype=int).astype(object)
    else:
        V = np.vander(np.array(nodes, dtype=float), len(nodes), increasing=True)
        eye = np.eye(len(nodes))
    return max_abs(V @ inverse - eye)


# -- exact elimination ---------------------------------------------------------

def _pivot_row(A: np.ndarray, col: int, start: int, exact: bool) -> int | None:
    rows = range(start, A.shape[0])
    if exact:
        for r in rows:
            if A[r, col]:
                return r
        return None
    best = max(rows, key=lambda r: abs(A[r, col]))
    return best if abs(A[best, col]) > 0 else None


def gauss_jordan_inverse(A) -> np.ndarray:
    """Inverse by Gauss-Jordan elimination on ``[A | I]``.

    Exact (object) input stays exact; float input uses partial pivoting.
    This is deliberately independent of :func:`vandermonde_inverse`.
    """
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"square matrix required, got {A.shape}")
    n = A.shape[0]
    exact = A.dtype == object
    if exact:
        aug = np.empty((n, 2 * n), dtype=object)
        for i in range(n):
            for k in range(n):
                v = A[i, k]
                aug[i, k] = Fraction(v) if isinstance(v, (int, np.integer)) else v
                aug[i, n + k] = Fraction(int(i == k))
    else:
        aug = np.hstack([A.astype(complex if np.iscomplexobj(A) else float), np.eye(n)])
    for col in range(n):
        piv = _pivot_row(aug, col, col, exact)
        if piv is None:
            raise SingularityError("matrix is singular")
        if piv != col:
            aug[[col, piv]] = aug[[piv, col]]
        pivot = aug[col, col]
        aug[col] = aug[col] / pivot
        for r in range(n):
            if r != col:
                factor = aug[r, col]
                if (factor if exact else factor != 0):
                    aug[r] = aug[r] - factor * aug[col]
    return aug[:, n:]


def determinant(A):
    """Determinant by fraction-exact Gaussian elimination (exact input) or
    numpy (float input)."""
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"square matrix required, got {A.shape}")
    if A.dtype != object:
        return np.linalg.det(A)
    M = [list(row) for row in A]
    n = len(M)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        pivot = M[col][col]
        det = det * pivot
        inv = 1 / pivot if not isinstance(pivot, GaussianRational) else pivot.reciprocal()
        for r in range(col + 1, n):
            if M[r][col]:
                factor = M[r][col] * inv
                row_c, row_r = M[col], M[r]
                M[r] = [row_r[k] - factor * row_c[k] if k > col else 0 for k in range(n)]
    return det


# -- matrices of bivariate homogeneous polynomials ------------------------------

@dataclass(frozen=True)
class PolyMatrix:
    """Square matrix whose entries are homogeneous polynomials in (λ, μ).

    ``coeffs[a]`` is the matrix multiplying ``λ**a * μ**(degree - a)``, so
    every stored term has total degree ``degree`` by construction.
    """

    degree: int
    coeffs: np.ndarray

    def __post_init__(self):
        if self.coeffs.ndim != 3 or self.coeffs.shape[0] != self.degree + 1:
            raise DimensionError(f"coefficient stack of shape {self.coeffs.shape} "
                                 f"does not match degree {self.degree}")

    @property
    def size(self) -> int:
        return self.coeffs.shape[1]

    def coefficient(self, a: int, b: int) -> np.ndarray:
        """Matrix coefficient of ``λ**a μ**b`` (zero unless ``a + b == degree``)."""
        if a < 0 or b < 0:
            raise DegreeError("exponents must be non-negative")
        if a + b != self.degree:
            if self.coeffs.dtype == object:
                return np.full(self.coeffs.shape[1:], GaussianRational(), dtype=object)
            return np.zeros(self.coeffs.shape[1:], dtype=complex)
        return self.coeffs[a]

    def entry(self, i: int, k: int) -> dict:
        """Polynomial at (i, k) as ``{(a, b): coefficient}`` without zeros."""
        if not (0 <= i < self.size and 0 <= k < self.size):
            raise IndexError(f"entry ({i}, {k}) out of range for size {self.size}")
        return {(a, self.degree - a): c
                for a, c in enumerate(self.coeffs[:, i, k]) if c != 0}

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.size != other.size:
            raise DimensionError("polynomial matrices of different sizes")
        exact = self.coeffs.dtype == object
        deg = self.degree + other.degree
        if exact:
            out = np.empty((deg + 1, self.size, self.size), dtype=object)
            out.fill(GaussianRational())
        else:
            out = np.zeros((deg + 1, self.size, self.size), dtype=complex)
        for a in range(self.degree + 1):
            for c in range(other.degree + 1):
                out[a + c] = out[a + c] + self.coeffs[a] @ other.coeffs[c]
        return PolyMatrix(deg, out)


def _gauss_parts(x) -> tuple[Fraction, Fraction]:
    if isinstance(x, GaussianRational):
        return x.real, x.imag
    return Fraction(x), Fraction(0)


class _ExactPowerWalk:
    """Successive powers of ``λP + μQ`` over the Gaussian integers.

    All denominators of P and Q are cleared by a common multiple ``scale``;
    the walk then multiplies integer coefficient stacks column by column
    through the nonzero entries only, and the true coefficients of the r-th
    power are ``(re + i*im) / scale**r``.
    """

    def __init__(self, P: np.ndarray, Q: np.ndarray):
        n = P.shape[0]
        self.size = n
        denominators = [part.denominator for M in (P, Q) for x in M.ravel()
                        for part in _gauss_parts(x)]
        self.scale = math.lcm(*denominators) if denominators else 1
        self.p_entries = self._sparse(P)
        self.q_entries = self._sparse(Q)

    def _sparse(self, M):
        entries = []
        for (i, k), x in np.ndenumerate(M):
            re, im = _gauss_parts(x)
            vr, vi = int(re * self.scale), int(im * self.scale)
            if vr or vi:
                entries.append((i, k, vr, vi))
        return entries

    def powers(self, rmax: int) -> Iterator[tuple[int, np.ndarray, np.ndarray]]:
        n = self.size
        re = np.zeros((1, n, n), dtype=object)
        im = np.zeros((1, n, n), dtype=object)
        for i in range(n):
            re[0, i, i] = 1
        for r in range(rmax + 1):
            yield r, re, im
            if r == rmax:
                return
            new_re = np.zeros((r + 2, n, n), dtype=object)
            new_im = np.zeros((r + 2, n, n), dtype=object)
            # λP raises the λ-exponent by one; μQ keeps it.
            for entries, dst in ((self.p_entries, slice(1, None)), (self.q_entries, slice(0, r + 1))):
                for i, k, vr, vi in entries:
                    src_re, src_im = re[:, :, i], im[:, :, i]
                    if vr:
                        new_re[dst, :, k] += src_re * vr
                        new_im[dst, :, k] += src_im * vr
                    if vi:
                        new_re[dst, :, k] -= src_im * vi
                        new_im[dst, :, k] += src_re * vi
            re, im = new_re, new_im


def _float_powers(P: np.ndarray, Q: np.ndarray, rmax: int) -> Iterator[tuple[int, np.ndarray]]:
    n = P.shape[0]
    A = np.eye(n, dtype=complex)[None, :, :]
    for r in range(rmax + 1):
        yield r, A
        if r == rmax:
            return
        B = np.zeros((r + 2, n, n), dtype=complex)
        B[1:] += A @ P
        B[:-1] += A @ Q
        A = B


def _check_pair(P, Q, backend):
    P = as_backend_matrix(P, backend)
    Q = as_backend_matrix(Q, backend)
    if P.shape[0] != P.shape[1] or P.shape != Q.shape:
        raise DimensionError(f"P {P.shape} and Q {Q.shape} must be square and equal in size")
    return P, Q


def _exact_coefficients(re: np.ndarray, im: np.ndarray, denom: int) -> np.ndarray:
    out = np.empty(re.shape, dtype=object)
    for idx in np.ndindex(re.shape):
        out[idx] = GaussianRational._new(Fraction(re[idx], denom), Fraction(im[idx], denom))
    return out


def poly_matrix_power(P, Q, r: int, backend: Backend | None = None) -> PolyMatrix:
    """``(λP + μQ)**r`` as a :class:`PolyMatrix`.

    >>> poly_matrix_power([[1]], [[2]], 2).entry(0, 0)
    {(0, 2): GaussianRational('4'), (1, 1): GaussianRational('4'), (2, 0): GaussianRational('1')}
    """
    if r < 0:
        raise DegreeError("exponent must be non-negative")
    backend = infer_backend([P, Q]) if backend is None else get_backend(backend)
    P, Q = _check_pair(P, Q, backend)
    if backend.exact:
        walk = _ExactPowerWalk(P, Q)
        for step, re, im in walk.powers(r):
            pass
        return PolyMatrix(r, _exact_coefficients(re, im, walk.scale ** r))
    for step, A in _float_powers(P, Q, r):
        pass
    return PolyMatrix(r, A.copy())


def power_walk(P, Q, rmax: int, backend: Backend):
    """Iterate ``(r, coefficient_of)`` for r = 0..rmax.

    ``coefficient_of(a)`` gives the λ^a μ^(r-a) coefficient of
    ``(λP+μQ)**r``: a complex array in float mode, and in exact mode the
    triple ``(re, im, denom)`` of integer arrays and common denominator, so
    callers convert only the entries they need.
    """
    P, Q = _check_pair(P, Q, backend)
    if backend.exact:
        walk = _ExactPowerWalk(P, Q)
        for r, re, im in walk.powers(rmax):
            denom = walk.scale ** r

            def coefficient_of(a, re=re, im=im, denom=denom):
                return re[a], im[a], denom

            yield r, coefficient_of
    else:
        for r, A in _float_powers(P, Q, rmax):
            yield r, (lambda a, A=A: A[a])
