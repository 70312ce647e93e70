"""Acceptance criteria 1-11.

Each test records one PASS/FAIL line (see ``conftest.record``); the lines
are repeated in the terminal summary.  Run directly with
``python -m pytest tests/test_acceptance.py -v``.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from fractions import Fraction as Fr
from pathlib import Path

import numpy as np
import pytest

from discrete_wigner import (GaussianRational, Surd, cross_wigner, moment_matrix, su2,
                             superposition_wigner, verify_properties, weyl_operator,
                             wigner_matrix)
from discrete_wigner.canonical import GridSpec, canonical_wigner, sample_canonical_grid, trapezoid_integral
from discrete_wigner.cli import main
from discrete_wigner.export import GridExport
from discrete_wigner.linalg import gauss_jordan_inverse, vandermonde_inverse, vandermonde_matrix
from discrete_wigner.model import (momentum_wavefunctions, position_wavefunctions,
                                   rationalized_su2_model)
from discrete_wigner.wigner import weyl_operator_bruteforce

GOLDEN = Path(__file__).parent / "golden"
PROPERTY_J = (1, 2, 3, 4, 5, 8, 16, 24)


def _frac_matrix(rows):
    return [[Fr(x) for x in row] for row in rows]


def _same(A, B) -> bool:
    A = np.asarray(A, dtype=object)
    return A.shape == np.shape(B) and all(a == b for a, b in zip(A.ravel(), np.asarray(B, dtype=object).ravel()))


# -- 1 ---------------------------------------------------------------------------

def _expected_weyl_j1():
    r = Surd.sqrt(Fr(1, 2))          # 1/sqrt(2)
    i = GaussianRational(0, 1)
    z = Surd()

    def tri(up, down):
        return [[z, up, z], [down, z, up], [z, down, z]]

    h, s = Fr(1, 2), Fr(1, 6)
    return {
        (0, 0): [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        (1, 0): tri(r * -i, r * i),
        (0, 1): tri(r, r),
        (2, 0): [[h, 0, -h], [0, 1, 0], [-h, 0, h]],
        (1, 1): [[0, 0, -i * h], [0, 0, 0], [i * h, 0, 0]],
        (0, 2): [[h, 0, h], [0, 1, 0], [h, 0, h]],
        (2, 1): tri(r / 3, r / 3),
        (1, 2): tri(r * (-i / 3), r * (i / 3)),
        (2, 2): [[s, 0, 0], [0, Fr(1, 3), 0], [0, 0, s]],
    }


def test_criterion_1_j1_golden(record):
    start = time.perf_counter()
    model = rationalized_su2_model(2)          # uncached: time the full pipeline
    bad = []
    for (a, b), expected in _expected_weyl_j1().items():
        got = model.to_physical(weyl_operator(model, (a, b)))
        if not all(Surd.coerce(got[i, k]) == Surd.coerce(expected[i][k])
                   for i in range(3) for k in range(3)):
            bad.append(f"G_{a}{b}")
    Z = {0: [[1, 0, "1/2"], [0, 0, 0], ["1/2", 0, "1/6"]],
         1: [[1, 0, 1], [0, 0, 0], [1, 0, "1/3"]]}
    W = {0: [["1/24", "1/6", "1/24"], ["1/6", "1/6", "1/6"], ["1/24", "1/6", "1/24"]],
         1: [["1/12", "1/3", "1/12"], ["1/3", "-2/3", "1/3"], ["1/12", "1/3", "1/12"]]}
    for n in (0, 1):
        if not _same(moment_matrix(model, n).entries, _frac_matrix(Z[n])):
            bad.append(f"Z({n})")
        if not _same(wigner_matrix(model, n).entries, _frac_matrix(W[n])):
            bad.append(f"W({n})")
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 1.0
    record(1, ok, f"9 Weyl operators, Z(0), Z(1), W(0), W(1) exact; {elapsed:.3f} s"
           + (f"; mismatches {bad}" if bad else ""))
    assert ok


# -- 2 ---------------------------------------------------------------------------

def _exact_prop2(two_j: int) -> list[str]:
    model = su2(two_j)
    phi = position_wavefunctions(two_j).probabilities()
    psi = momentum_wavefunctions(two_j).probabilities()
    bad = []
    for n in range(two_j + 1):
        W = wigner_matrix(model, n)
        if not all(isinstance(x, Fr) for x in W.entries.ravel()):
            bad.append(f"2j={two_j} n={n} real")
        if W.total() != 1:
            bad.append(f"2j={two_j} n={n} total")
        if list(W.column_sums()) != list(phi[n]):
            bad.append(f"2j={two_j} n={n} position")
        if list(W.row_sums()) != list(psi[n]):
            bad.append(f"2j={two_j} n={n} momentum")
    return bad


def test_criterion_2_exact(record):
    bad, times = [], {}
    for two_j in PROPERTY_J:
        start = time.perf_counter()
        bad += _exact_prop2(two_j)
        times[two_j] = time.perf_counter() - start
    ok = not bad and times[24] < 60
    record("2 exact", ok, f"realness, sum=1, both marginals equal Krawtchouk |amplitude|^2 for "
           f"2j in {PROPERTY_J}, all n; 2j=24 sweep {times[24]:.1f} s"
           + (f"; failures {bad[:5]}" if bad else ""))
    assert ok


def test_criterion_2_float(record):
    """Same suite in double precision against float wavefunctions, tol 1e-8.

    The model is built with a loose realness gate so that the size of every
    residual is measured rather than cut short by an exception.
    """
    tol = 1e-8
    worst: dict[int, dict[str, float]] = {}
    for two_j in PROPERTY_J:
        model = su2(two_j, "float", tol=0.1)
        phi = position_wavefunctions(two_j, "float").probabilities()
        psi = momentum_wavefunctions(two_j, "float").probabilities()
        res = dict.fromkeys(("imag", "total", "position", "momentum"), 0.0)
        for n in range(two_j + 1):
            W = wigner_matrix(model, n)
            res["imag"] = max(res["imag"], W.imag_residual)
            res["total"] = max(res["total"], abs(W.total() - 1))
            res["position"] = max(res["position"], float(np.max(np.abs(np.array(W.column_sums()) - phi[n]))))
            res["momentum"] = max(res["momentum"], float(np.max(np.abs(np.array(W.row_sums()) - psi[n]))))
        worst[two_j] = res
    failing = {k: max(v, key=v.get) for k, v in worst.items() if max(v.values()) > tol}
    ok = not failing
    summary = ", ".join(f"2j={k}: {max(v.values()):.2e}" for k, v in worst.items())
    detail = "; ".join(f"2j={k} worst {name} {worst[k][name]:.2e}" for k, name in failing.items())
    record("2 float", ok, f"max residual per 2j (tol 1e-8): {summary}"
           + (f"; exceeds tolerance: {detail} (double-precision conditioning of the "
              "Vandermonde recovery)" if failing else ""))
    assert ok


# -- 3 ---------------------------------------------------------------------------

def test_criterion_3_symmetry(record):
    bad = []
    for two_j in PROPERTY_J:
        model = su2(two_j)
        if not (model.has_symmetric_spectra and model.is_tridiagonal_offdiagonal):
            bad.append(f"2j={two_j} hypotheses")
            continue
        N = two_j
        for n in range(N + 1):
            E = wigner_matrix(model, n).entries
            for k, l in itertools.product(range(N + 1), repeat=2):
                v = E[k, l]
                if not (v == E[N - k, l] == E[k, N - l] == E[N - k, N - l]):
                    bad.append(f"2j={two_j} n={n} ({k},{l})")
                    break
    record(3, not bad, f"hypotheses machine-checked and W(n) four-fold symmetric, exact, "
           f"2j in {PROPERTY_J}" + (f"; failures {bad[:5]}" if bad else ""))
    assert not bad


# -- 4 ---------------------------------------------------------------------------

def test_criterion_4_moment_round_trip(record):
    bad = []
    for two_j in range(0, 9):
        model = su2(two_j)
        p, q = model.momentum_spectrum, model.position_spectrum
        N = two_j
        for n in range(N + 1):
            W = wigner_matrix(model, n).entries
            Z = moment_matrix(model, n).entries
            for a, b in itertools.product(range(N + 1), repeat=2):
                s = sum(W[k, l] * p[k] ** a * q[l] ** b
                        for k in range(N + 1) for l in range(N + 1))
                if s != Z[a, b]:
                    bad.append((two_j, n, a, b))
    record(4, not bad, "sum_kl W p^a q^b == Z_ab exactly, all a,b <= N, all n, 2j <= 8"
           + (f"; failures {bad[:5]}" if bad else ""))
    assert not bad


# -- 5 ---------------------------------------------------------------------------

def test_criterion_5_weyl_oracle(record):
    bad, count = [], 0
    for two_j in range(0, 5):
        model = su2(two_j)
        for a in range(9):
            for b in range(9 - a):
                count += 1
                if not _same(weyl_operator(model, (a, b)), weyl_operator_bruteforce(model, (a, b))):
                    bad.append((two_j, a, b))
    record(5, not bad, f"coefficient extraction == word average on {count} (2j, a, b) cases, "
           "a+b <= 8, 2j <= 4" + (f"; failures {bad[:5]}" if bad else ""))
    assert not bad


# -- 6 ---------------------------------------------------------------------------

def test_criterion_6_vandermonde_oracle(record):
    rng = random.Random(20240601)
    bad, sets = [], 0
    for trial in range(20):
        size = rng.randint(1, 8)
        nodes = set()
        while len(nodes) < size:
            nodes.add(Fr(rng.randint(-50, 50), rng.randint(1, 12)))
        nodes = list(nodes)
        sets += 1
        if not _same(vandermonde_inverse(nodes), gauss_jordan_inverse(vandermonde_matrix(nodes))):
            bad.append(("random", nodes))
    for two_j in range(0, 25):
        nodes = [Fr(2 * k - two_j, 2) for k in range(two_j + 1)]
        sets += 1
        if not _same(vandermonde_inverse(nodes), gauss_jordan_inverse(vandermonde_matrix(nodes))):
            bad.append(("equispaced", two_j))
    record(6, not bad, f"closed-form inverse == Gauss-Jordan inverse on {sets} node sets "
           "(20 random rational, equispaced 2j=0..24)" + (f"; failures {bad[:3]}" if bad else ""))
    assert not bad


# -- 7 ---------------------------------------------------------------------------

def test_criterion_7_negativity(record):
    model = su2(5)
    W = wigner_matrix(model, 0)
    corner = W.value(Fr(5, 2), Fr(5, 2))
    ok = isinstance(corner, Fr) and corner < 0
    record(7, ok, f"W(0; 5/2, 5/2) = {corner} (exact rational) < 0")
    assert ok


# -- 8 ---------------------------------------------------------------------------

def test_criterion_8_cross_sum_rules(record):
    bad, pairs = [], 0
    for two_j in range(0, 7):
        model = su2(two_j)
        for n_prime, n in itertools.product(range(two_j + 1), repeat=2):
            pairs += 1
            total = cross_wigner(model, n_prime, n).total()
            if Surd.coerce(total) != Surd.coerce(1 if n == n_prime else 0):
                bad.append((two_j, n_prime, n, str(total)))
        c = [1] + [0] * two_j
        if not _same(superposition_wigner(model, c).entries, wigner_matrix(model, 0).entries):
            bad.append((two_j, "superposition"))
    record(8, not bad, f"sum W(n',n) = delta exactly on {pairs} pairs (2j <= 6); "
           "c=(1,0,...) reproduces W(0)" + (f"; failures {bad[:3]}" if bad else ""))
    assert not bad


# -- 9 ---------------------------------------------------------------------------

def test_criterion_9_canonical(record):
    origin = abs(canonical_wigner(0, 0.0, 0.0) - 1 / math.pi)
    spec = GridSpec(-6, 6, -6, 6, 241)
    norms = [trapezoid_integral(sample_canonical_grid(n, spec)) for n in range(6)]
    worst = max(abs(x - 1) for x in norms)
    w0_min = float(np.min(sample_canonical_grid(0, spec).w))
    default_min = float(np.min(sample_canonical_grid(0).w))
    ok = origin <= 1e-12 and worst <= 1e-6 and w0_min >= 0 and default_min >= 0
    record(9, ok, f"|W_0(0,0) - 1/pi| = {origin:.1e}; max |trapezoid - 1| over n<=5 = {worst:.1e}; "
           f"min W_0 on grids = {min(w0_min, default_min):.2e}")
    assert ok


# -- 10 --------------------------------------------------------------------------

def test_criterion_10_grid_data(record, tmp_path):
    rc = main(["compare", "--two-j", "24", "--n", "0", "--n", "1", "--n", "2", "--out", str(tmp_path)])
    problems = [] if rc == 0 else [f"compare exit {rc}"]
    for n in (0, 1, 2):
        grid = GridExport.read_json(tmp_path / f"su2_2j24_n{n}_exact_discrete.json")
        canon = GridExport.read_json(tmp_path / f"canonical_n{n}.json")
        if np.shape(grid.w) != (25, 25):
            problems.append(f"discrete n={n} shape {np.shape(grid.w)}")
        if np.shape(canon.w) != (101, 101) or (canon.p_values[0], canon.p_values[-1]) != (-4.0, 4.0):
            problems.append(f"canonical n={n} grid")
        report = verify_properties(su2(24), n)
        if not report.passed:
            problems.append(f"properties n={n}")
    rc = main(["compare", "--two-j", "24", "--n", "2", "--format", "pgm", "--out", str(tmp_path)])
    pgm = (tmp_path / "su2_2j24_n2_exact_discrete.pgm").read_text().split("\n")
    if rc != 0 or pgm[:3] != ["P2", "25 25", "255"]:
        problems.append("pgm header")
    rc = main(["compute", "--two-j", "2", "--n", "0", "--n", "1", "--format", "pgm", "--out", str(tmp_path)])
    for n in (0, 1):
        if (tmp_path / f"su2_2j2_n{n}_exact.pgm").read_bytes() != (GOLDEN / f"su2_2j2_n{n}.pgm").read_bytes():
            problems.append(f"j=1 golden PGM n={n}")
    record(10, not problems, "compare --two-j 24: 25x25 discrete grids pass marginals, symmetry, "
           "normalization; canonical 101x101 over (-4,4)^2; j=1 PGM goldens byte-identical"
           + (f"; problems {problems}" if problems else ""))
    assert not problems


# -- 11 --------------------------------------------------------------------------

def test_criterion_11_backend_agreement(record):
    worst, residuals = {}, {}
    for two_j in range(0, 17):
        exact, flt = su2(two_j), su2(two_j, "float")
        err = 0.0
        for n in range(two_j + 1):
            Wf = wigner_matrix(flt, n)
            We = wigner_matrix(exact, n).as_float()
            err = max(err, float(np.max(np.abs(Wf.entries - We))))
            residuals[two_j] = Wf.vandermonde_residual
        worst[two_j] = err
    grows = residuals[16] > residuals[2]
    ok = max(worst.values()) <= 1e-6 and grows
    record(11, ok, f"max |W_float - W_exact| over 2j <= 16 = {max(worst.values()):.1e}; "
           f"Vandermonde residual in metadata {residuals[2]:.1e} (2j=2) -> {residuals[16]:.1e} (2j=16)")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
