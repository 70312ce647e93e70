"""Continuous Wigner functions of the canonical harmonic oscillator (hbar = 1),
sampled on rectangular grids for side-by-side comparison with the discrete
ones."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .export import GridExport

__all__ = ["GridSpec", "laguerre", "canonical_wigner", "sample_canonical_grid",
           "trapezoid_integral"]


def laguerre(n: int, x):
    """Laguerre polynomial L_n(x) by the three-term recurrence
    ``(k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}``; vectorized over ``x``."""
    if n < 0:
        raise ValueError("Laguerre degree must be non-negative")
    x = np.asarray(x, dtype=float)
    prev, cur = np.ones_like(x), 1.0 - x
    if n == 0:
        return prev if prev.ndim else float(prev)
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
    return cur if cur.ndim else float(cur)


def canonical_wigner(n: int, p, q):
    """``(-1)**n / pi * exp(-p**2 - q**2) * L_n(2 p**2 + 2 q**2)``."""
    if n < 0:
        raise ValueError("state index must be non-negative")
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    rho = p * p + q * q
    out = (-1) ** n / np.pi * np.exp(-rho) * laguerre(n, 2 * rho)
    return out if np.ndim(out) else float(out)


@dataclass(frozen=True)
class GridSpec:
    """Rectangular sampling window; defaults mirror a (-4, 4)^2 plot."""

    p_min: float = -4.0
    p_max: float = 4.0
    q_min: float = -4.0
    q_max: float = 4.0
    samples_per_axis: int = 101

    def __post_init__(self):
        if not (self.p_min < self.p_max and self.q_min < self.q_max):
            raise ValueError("grid bounds must satisfy min < max on both axes")
        if self.samples_per_axis < 2:
            raise ValueError("need at least two samples per axis")

    @property
    def p_values(self) -> np.ndarray:
        return np.linspace(self.p_min, self.p_max, self.samples_per_axis)

    @property
    def q_values(self) -> np.ndarray:
        return np.linspace(self.q_min, self.q_max, self.samples_per_axis)


def sample_canonical_grid(n: int, spec: GridSpec = GridSpec()) -> GridExport:
    """Dense table of W_n with rows over p and columns over q."""
    p, q = spec.p_values, spec.q_values
    w = canonical_wigner(n, p[:, None], q[None, :])
    return GridExport(
        model="canonical-oscillator",
        two_j=None,
        n=n,
        backend="float",
        p_values=[float(v) for v in p],
        q_values=[float(v) for v in q],
        w=[[float(v) for v in row] for row in w],
        metadata={"grid": asdict(spec)},
    )


def trapezoid_integral(grid: GridExport) -> float:
    """Iterated trapezoidal rule over a sampled grid."""
    w = np.asarray(grid.w, dtype=float)
    inner = np.trapezoid(w, x=np.asarray(grid.q_values, dtype=float), axis=1)
    return float(np.trapezoid(inner, x=np.asarray(grid.p_values, dtype=float)))
