"""Phase-space grid serialization: JSON, CSV and plain PGM.

Exact values travel as strings (``"num/den"``, or ``"a+b*sqrt(m)"`` for
surds) so that JSON files round-trip losslessly; floats are written with
Python's shortest round-trip repr.

PGM images are "P2" (ASCII) with maxval 255.  Gray levels are relative:
``floor(255 * (w - min) / (max - min) + 1/2)``, or 128 everywhere when the
grid is constant.  Image row 0 is the largest p; columns run over ascending q.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .scalars import Surd, format_exact, parse_exact

__all__ = ["GridExport", "pgm_levels", "FORMATS"]

FORMATS = ("json", "csv", "pgm")


def _encode(value, exact: bool):
    if exact:
        return format_exact(value)
    return float(value)


def _decode(value, exact: bool):
    if exact:
        return parse_exact(value) if isinstance(value, str) else Fraction(value)
    return float(value)


def _encode_coefficient(c, exact: bool):
    if exact:
        return format_exact(c)
    c = complex(c)
    return [c.real, c.imag]


def _decode_coefficient(c, exact: bool):
    if exact:
        return parse_exact(c)
    return complex(c[0], c[1])


@dataclass
class GridExport:
    """A W table on a (p, q) grid plus what produced it.

    ``w[k][l]`` is the value at ``(p_values[k], q_values[l])``.
    """

    model: str
    two_j: int | None
    n: int | None
    backend: str
    p_values: list
    q_values: list
    w: list
    coefficients: list | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.w) != len(self.p_values) or any(len(row) != len(self.q_values) for row in self.w):
            raise ValueError("table shape does not match the p/q axes")

    @property
    def exact(self) -> bool:
        return self.backend == "exact"

    @classmethod
    def from_wigner(cls, W, model_name: str, two_j: int | None = None) -> "GridExport":
        """Wrap a :class:`~discrete_wigner.wigner.WignerMatrix`."""
        meta = {"imag_residual": W.imag_residual,
                "vandermonde_residual": W.vandermonde_residual}
        return cls(
            model=model_name,
            two_j=two_j,
            n=W.n,
            backend=W.backend.name,
            p_values=list(W.p_values),
            q_values=list(W.q_values),
            w=[list(row) for row in W.entries],
            coefficients=None if W.state is None else list(W.state),
            metadata=meta,
        )

    # -- JSON -------------------------------------------------------------
    def to_dict(self) -> dict:
        ex = self.exact
        return {
            "model": self.model,
            "two_j": self.two_j,
            "n": self.n,
            "coefficients": None if self.coefficients is None
            else [_encode_coefficient(c, ex) for c in self.coefficients],
            "backend": self.backend,
            "p_values": [_encode(v, ex) for v in self.p_values],
            "q_values": [_encode(v, ex) for v in self.q_values],
            "w": [[_encode(v, ex) for v in row] for row in self.w],
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "GridExport":
        ex = doc["backend"] == "exact"
        coeffs = doc.get("coefficients")
        return cls(
            model=doc["model"],
            two_j=doc.get("two_j"),
            n=doc.get("n"),
            backend=doc["backend"],
            p_values=[_decode(v, ex) for v in doc["p_values"]],
            q_values=[_decode(v, ex) for v in doc["q_values"]],
            w=[[_decode(v, ex) for v in row] for row in doc["w"]],
            coefficients=None if coeffs is None else [_decode_coefficient(c, ex) for c in coeffs],
            metadata=dict(doc.get("metadata", {})),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "GridExport":
        return cls.from_dict(json.loads(text))

    @classmethod
    def read_json(cls, path) -> "GridExport":
        return cls.from_json(Path(path).read_text())

    # -- CSV --------------------------------------------------------------
    def to_csv(self) -> str:
        """Long format, header ``p,q,w``; one row per grid point, p-major."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["p", "q", "w"])
        ex = self.exact
        for p, row in zip(self.p_values, self.w):
            for q, v in zip(self.q_values, row):
                writer.writerow([_encode(p, ex), _encode(q, ex), _encode(v, ex)])
        return buf.getvalue()

    # -- PGM --------------------------------------------------------------
    def to_pgm(self) -> str:
        levels = pgm_levels(self.w)
        rows = sorted(range(len(self.p_values)), key=lambda k: self.p_values[k], reverse=True)
        cols = sorted(range(len(self.q_values)), key=lambda l: self.q_values[l])
        lines = ["P2", f"{len(cols)} {len(rows)}", "255"]
        lines += [" ".join(str(levels[k][l]) for l in cols) for k in rows]
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        if fmt == "pgm":
            return self.to_pgm()
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")

    def write(self, path, fmt: str | None = None) -> Path:
        path = Path(path)
        fmt = fmt or path.suffix.lstrip(".")
        text = self.render(fmt)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            fh.write(text)
        return path


def _orderable(v):
    if isinstance(v, Surd):
        return float(v)
    return v


def pgm_levels(w) -> list[list[int]]:
    """Relative gray levels 0..255 of a table (exact rationals stay exact)."""
    flat = [_orderable(v) for row in w for v in row]
    if not flat:
        raise ValueError("cannot render an empty grid")
    lo, hi = min(flat), max(flat)
    if lo == hi:
        return [[128 for _ in row] for row in w]
    span = hi - lo
    half = Fraction(1, 2) if isinstance(span, Fraction) else 0.5
    return [[int(math.floor(255 * (_orderable(v) - lo) / span + half)) for v in row] for row in w]
