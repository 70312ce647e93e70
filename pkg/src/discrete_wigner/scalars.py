"""Scalar fields used by every matrix in the package.

Two realizations share one interface:

* ``exact``: entries are :class:`GaussianRational` (or plain
  :class:`fractions.Fraction` for real tables) held in ``dtype=object``
  numpy arrays.  Arithmetic never rounds.
* ``float``: entries are ``complex128`` (or ``float64`` for real tables);
  every comparison against zero goes through an absolute tolerance.

Quantities that are square roots of rationals (wavefunction amplitudes,
the un-conjugated su(2) matrices) are represented exactly by :class:`Surd`.
"""

from __future__ import annotations

import math
import numbers
import os
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = [
    "GaussianRational",
    "Surd",
    "Backend",
    "EXACT",
    "float_backend",
    "get_backend",
    "default_tolerance",
    "set_default_tolerance",
    "parse_exact",
    "format_exact",
    "squarefree_split",
]


def _env_tolerance() -> float:
    raw = os.environ.get("WIGNER_TOL")
    if raw is None:
        return 1e-10
    tol = float(raw)
    if not tol > 0:
        raise ValueError(f"WIGNER_TOL must be positive, got {raw!r}")
    return tol


_default_tol = _env_tolerance()


def default_tolerance() -> float:
    """Absolute tolerance used by float backends created without one."""
    return _default_tol


def set_default_tolerance(tol: float) -> None:
    global _default_tol
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    _default_tol = float(tol)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, numbers.Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


class GaussianRational:
    """Complex number with rational real and imaginary parts.

    Instances are treated as immutable; both parts are kept as reduced
    :class:`~fractions.Fraction` objects, so the representation is canonical.
    """

    __slots__ = ("real", "imag")

    def __init__(self, real=0, imag=0):
        if isinstance(real, GaussianRational):
            if imag:
                raise TypeError("imag must be omitted when real is a GaussianRational")
            self.real, self.imag = real.real, real.imag
            return
        self.real = _as_fraction(real)
        self.imag = _as_fraction(imag)

    @classmethod
    def _new(cls, real: Fraction, imag: Fraction) -> "GaussianRational":
        obj = object.__new__(cls)
        obj.real = real
        obj.imag = imag
        return obj

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction, numbers.Rational)):
            return cls._new(Fraction(x), Fraction(0))
        if isinstance(x, str):
            return parse_gaussian(x)
        raise TypeError(f"cannot convert {type(x).__name__} to GaussianRational")

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational._new(self.real + other.real, self.imag + other.imag)
        if isinstance(other, (int, Fraction)):
            return GaussianRational._new(self.real + other, self.imag)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational._new(self.real - other.real, self.imag - other.imag)
        if isinstance(other, (int, Fraction)):
            return GaussianRational._new(self.real - other, self.imag)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussianRational._new(other - self.real, -self.imag)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            a, b, c, d = self.real, self.imag, other.real, other.imag
            if not b:
                return GaussianRational._new(a * c, a * d)
            if not d:
                return GaussianRational._new(a * c, b * c)
            return GaussianRational._new(a * c - b * d, a * d + b * c)
        if isinstance(other, (int, Fraction)):
            return GaussianRational._new(self.real * other, self.imag * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return GaussianRational._new(self.real / other, self.imag / other)
        if isinstance(other, GaussianRational):
            if not other.imag:
                return self / other.real
            return self * other.reciprocal()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.reciprocal() * other
        return NotImplemented

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.reciprocal() ** (-exponent)
        result = GaussianRational._new(Fraction(1), Fraction(0))
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def reciprocal(self) -> "GaussianRational":
        norm = self.abs2()
        if not norm:
            raise ZeroDivisionError("division by zero")
        return GaussianRational._new(self.real / norm, -self.imag / norm)

    def __neg__(self):
        return GaussianRational._new(-self.real, -self.imag)

    def __pos__(self):
        return self

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._new(self.real, -self.imag)

    def abs2(self) -> Fraction:
        return self.real * self.real + self.imag * self.imag

    @property
    def is_real(self) -> bool:
        return not self.imag

    # comparisons and conversions ----------------------------------------
    def __bool__(self):
        return bool(self.real) or bool(self.imag)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.real == other.real and self.imag == other.imag
        if isinstance(other, (int, Fraction)):
            return not self.imag and self.real == other
        if isinstance(other, Surd):
            return other == self
        return NotImplemented

    def __hash__(self):
        if not self.imag:
            return hash(self.real)
        return hash((self.real, self.imag))

    def __complex__(self):
        return complex(float(self.real), float(self.imag))

    def __float__(self):
        if self.imag:
            raise TypeError(f"{self} is not real")
        return float(self.real)

    def __str__(self):
        return format_gaussian(self)

    def __repr__(self):
        return f"GaussianRational('{self}')"


def format_gaussian(z: GaussianRational) -> str:
    """Canonical text form: ``a/b``, ``c/di``, ``a/b+c/di``; unit imaginary
    coefficients print as ``i`` / ``-i``."""
    re_part, im_part = z.real, z.imag
    if not im_part:
        return str(re_part)
    if im_part == 1:
        im_txt = "i"
    elif im_part == -1:
        im_txt = "-i"
    else:
        im_txt = f"{im_part}i"
    if not re_part:
        return im_txt
    sign = "" if im_txt.startswith("-") else "+"
    return f"{re_part}{sign}{im_txt}"


def parse_gaussian(text: str) -> GaussianRational:
    """Inverse of :func:`format_gaussian`; also accepts ``1i``, ``+i``,
    ``1/2*i`` and decimal literals such as ``0.25``."""
    s = text.strip().replace(" ", "").replace("*i", "i")
    if not s:
        raise ValueError("empty number")
    if not s.endswith(("i", "j")):
        return GaussianRational._new(Fraction(s), Fraction(0))
    body = s[:-1]
    split = None
    for pos in range(len(body) - 1, 0, -1):
        if body[pos] in "+-" and body[pos - 1] not in "eE":
            split = pos
            break
    if split is None:
        re_txt, im_txt = "", body
    else:
        re_txt, im_txt = body[:split], body[split:]
    if im_txt in ("", "+"):
        im = Fraction(1)
    elif im_txt == "-":
        im = Fraction(-1)
    else:
        im = Fraction(im_txt)
    re_val = Fraction(re_txt) if re_txt else Fraction(0)
    return GaussianRational._new(re_val, im)


def squarefree_split(n: int) -> tuple[int, int]:
    """Write a positive integer as ``k**2 * m`` with ``m`` squarefree.

    Trial division runs only up to the cube root of the shrinking remainder;
    what is left then has at most two prime factors, so it is either a
    perfect square or already squarefree.
    """
    if n <= 0:
        raise ValueError("squarefree_split needs a positive integer")
    outside, inside = 1, 1
    d = 2
    while d * d * d <= n:
        if n % d == 0:
            count = 0
            while n % d == 0:
                n //= d
                count += 1
            outside *= d ** (count // 2)
            if count % 2:
                inside *= d
        d += 1 if d == 2 else 2
    root = math.isqrt(n)
    if root * root == n:
        outside *= root
    else:
        inside *= n
    return outside, inside


class Surd:
    """Exact element of Q(i)[sqrt(2), sqrt(3), ...].

    Stored as ``{m: c}`` meaning ``sum(c * sqrt(m))`` with squarefree
    positive integers ``m`` and nonzero :class:`GaussianRational` ``c``.
    Square roots of distinct squarefree integers are linearly independent
    over Q(i), so equality and zero tests are exact.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: dict | None = None):
        clean: dict = {}
        for m, c in (terms or {}).items():
            if int(m) <= 0:
                raise ValueError(f"radicand must be a positive integer, got {m!r}")
            k, m = squarefree_split(int(m))
            c = GaussianRational.coerce(c) * k
            clean[m] = clean.get(m, GaussianRational()) + c
        self._terms = {m: c for m, c in clean.items() if c}

    @classmethod
    def _raw(cls, terms: dict) -> "Surd":
        obj = object.__new__(cls)
        obj._terms = terms
        return obj

    @classmethod
    def sqrt(cls, value) -> "Surd":
        """Exact square root of a non-negative rational."""
        value = _as_fraction(value)
        if value < 0:
            raise ValueError("square root of a negative rational")
        if not value:
            return cls._raw({})
        kp, mp = squarefree_split(value.numerator)
        kq, mq = squarefree_split(value.denominator)
        g = math.gcd(mp, mq)
        coeff = Fraction(kp * kq * g, value.denominator)
        return cls._raw({(mp // g) * (mq // g): GaussianRational._new(coeff, Fraction(0))})

    @classmethod
    def coerce(cls, x) -> "Surd":
        if isinstance(x, Surd):
            return x
        return cls._raw({1: GaussianRational.coerce(x)} if x else {})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        try:
            other = Surd.coerce(other)
        except TypeError:
            return NotImplemented
        terms = dict(self._terms)
        for m, c in other._terms.items():
            total = terms.get(m)
            total = c if total is None else total + c
            if total:
                terms[m] = total
            else:
                terms.pop(m, None)
        return Surd._raw(terms)

    __radd__ = __add__

    def __neg__(self):
        return Surd._raw({m: -c for m, c in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            other = Surd.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Surd.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            if not other:
                return Surd._raw({})
            return Surd._raw({m: c * other for m, c in self._terms.items()})
        if not isinstance(other, Surd):
            return NotImplemented
        terms: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                g = math.gcd(m1, m2)
                m = (m1 // g) * (m2 // g)
                c = c1 * c2 * g
                total = terms.get(m)
                terms[m] = c if total is None else total + c
        return Surd._raw({m: c for m, c in terms.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            inv = GaussianRational.coerce(other).reciprocal()
            return Surd._raw({m: c * inv for m, c in self._terms.items()})
        if isinstance(other, Surd):
            if len(other._terms) != 1:
                raise ArithmeticError("can only divide by a single-term surd")
            ((m, c),) = other._terms.items()
            # 1 / (c sqrt(m)) = sqrt(m) / (c m)
            return self * Surd._raw({m: (c * m).reciprocal()})
        return NotImplemented

    def conjugate(self) -> "Surd":
        return Surd._raw({m: c.conjugate() for m, c in self._terms.items()})

    def abs2(self) -> "Surd":
        return self * self.conjugate()

    # inspection ---------------------------------------------------------
    @property
    def is_rational(self) -> bool:
        return all(m == 1 for m in self._terms)

    @property
    def is_real(self) -> bool:
        return all(not c.imag for c in self._terms.values())

    @property
    def real(self) -> "Surd":
        return Surd._raw({m: GaussianRational._new(c.real, Fraction(0))
                          for m, c in self._terms.items() if c.real})

    @property
    def imag(self) -> "Surd":
        return Surd._raw({m: GaussianRational._new(c.imag, Fraction(0))
                          for m, c in self._terms.items() if c.imag})

    def to_gaussian(self) -> GaussianRational:
        if not self.is_rational:
            raise ArithmeticError(f"{self} is irrational")
        return self._terms.get(1, GaussianRational._new(Fraction(0), Fraction(0)))

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        try:
            other = Surd.coerce(other)
        except TypeError:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self.is_rational:
            return hash(self.to_gaussian())
        return hash(frozenset(self._terms.items()))

    def __complex__(self):
        return sum((complex(c) * math.sqrt(m) for m, c in self._terms.items()), 0j)

    def __float__(self):
        if not self.is_real:
            raise TypeError(f"{self} is not real")
        return sum((float(c.real) * math.sqrt(m) for m, c in self._terms.items()), 0.0)

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for m in sorted(self._terms):
            c = self._terms[m]
            txt = format_gaussian(c)
            if m != 1:
                if c.real and c.imag:
                    txt = f"({txt})"
                txt = f"{txt}*sqrt({m})"
            parts.append(txt)
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def __repr__(self):
        return f"Surd('{self}')"


_SURD_TERM = re.compile(r"([+-]?)(?:(\([^)]*\)|[0-9./ij]+)\*?)?(?:sqrt\((\d+)\))?(\*?i)?")


def parse_surd(text: str) -> Surd:
    """Parse the text form produced by ``str(Surd)``; a trailing ``i``
    after a radical (``1/2*sqrt(2)i``) is also accepted."""
    s = text.strip().replace(" ", "")
    if "sqrt" not in s:
        return Surd.coerce(parse_gaussian(s))
    terms: dict = {}
    pos = 0
    while pos < len(s):
        match = _SURD_TERM.match(s, pos)
        if not match or match.end() == pos:
            raise ValueError(f"cannot parse surd {text!r}")
        sign, coeff, radicand, unit = match.groups()
        if coeff is None and radicand is None and unit is None:
            raise ValueError(f"cannot parse surd {text!r}")
        coeff = parse_gaussian(coeff.strip("()")) if coeff else GaussianRational._new(Fraction(1), Fraction(0))
        if unit:
            coeff = coeff * GaussianRational._new(Fraction(0), Fraction(1))
        if sign == "-":
            coeff = -coeff
        m = int(radicand) if radicand else 1
        terms[m] = terms.get(m, GaussianRational()) + coeff
        pos = match.end()
    return Surd(terms)


def parse_exact(text: str):
    """Parse an exact scalar; rationals come back as :class:`Fraction`."""
    if "sqrt" in text:
        value = parse_surd(text)
        return value.to_gaussian().real if value.is_rational and value.is_real else value
    z = parse_gaussian(text)
    return z.real if not z.imag else z


def format_exact(x) -> str:
    if isinstance(x, (int, Fraction)):
        return str(Fraction(x))
    if isinstance(x, Surd) and x.is_rational:
        x = x.to_gaussian()
    return str(x)


@dataclass(frozen=True)
class Backend:
    """Which scalar field a computation runs over.

    ``tol`` is the absolute zero-test tolerance; it is ignored by the exact
    backend, whose zero test is literal equality.
    """

    name: str
    tol: float = 0.0

    def __post_init__(self):
        if self.name not in ("exact", "float"):
            raise ValueError(f"unknown backend {self.name!r}")

    @property
    def exact(self) -> bool:
        return self.name == "exact"

    def scalar(self, x):
        if self.exact:
            if isinstance(x, float):
                raise TypeError("float value passed to the exact backend")
            z = GaussianRational.coerce(x)
            return z
        return complex(x)

    def real_scalar(self, x):
        if self.exact:
            if isinstance(x, GaussianRational):
                if x.imag:
                    raise ValueError(f"{x} is not real")
                return x.real
            return _as_fraction(x)
        return float(x)

    def matrix(self, rows) -> np.ndarray:
        """Complex matrix over this backend."""
        rows = [list(r) for r in rows]
        if self.exact:
            out = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
            for i, row in enumerate(rows):
                for k, v in enumerate(row):
                    out[i, k] = self.scalar(v)
            return out
        return np.array(rows, dtype=complex)

    def real_vector(self, values) -> np.ndarray:
        if self.exact:
            out = np.empty(len(values), dtype=object)
            for i, v in enumerate(values):
                out[i] = self.real_scalar(v)
            return out
        return np.array([float(v) for v in values], dtype=float)

    def eye(self, n: int) -> np.ndarray:
        if self.exact:
            one = GaussianRational._new(Fraction(1), Fraction(0))
            zero = GaussianRational._new(Fraction(0), Fraction(0))
            out = np.full((n, n), zero, dtype=object)
            for i in range(n):
                out[i, i] = one
            return out
        return np.eye(n, dtype=complex)

    def zeros(self, shape) -> np.ndarray:
        if self.exact:
            return np.full(shape, GaussianRational._new(Fraction(0), Fraction(0)), dtype=object)
        return np.zeros(shape, dtype=complex)

    def is_zero(self, x) -> bool:
        if self.exact:
            return not x
        return abs(x) <= self.tol

    def magnitude(self, x) -> float:
        """``|x|`` as a float, for residual reporting."""
        if isinstance(x, GaussianRational):
            return math.sqrt(float(x.abs2()))
        if isinstance(x, Surd):
            return abs(complex(x))
        return abs(x)


EXACT = Backend("exact")


def float_backend(tol: float | None = None) -> Backend:
    return Backend("float", default_tolerance() if tol is None else float(tol))


def get_backend(backend: str | Backend | None = "exact", tol: float | None = None) -> Backend:
    if isinstance(backend, Backend):
        if tol is not None and not backend.exact:
            return Backend("float", float(tol))
        return backend
    if backend in (None, "exact"):
        return EXACT
    if backend == "float":
        return float_backend(tol)
    raise ValueError(f"unknown backend {backend!r}")
