"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Run with ``pytest -s tests/test_acceptance.py`` to see the lines, or execute
this file directly.
"""
import itertools
import json
import math
import subprocess
import sys
import time

import numpy as np

from divcurl.commutators import (SymbolFunction, check_decomposition_2p, check_pairing_identity,
                                 commutator_projection_paths)
from divcurl.exterior import (BiGradedForm, Form, basis, d_x, d_y, exterior_derivative,
                              wedge, wedge_bigraded)
from divcurl.fields import VectorField
from divcurl.harness import ExperimentConfig, build_e1, build_e2, run_experiment, scaling_scan
from divcurl.leray import divergence_residual, leray_project_x
from divcurl.multipliers import riesz_block
from divcurl.norms import bmo_norm_1p, rect_bmo_norm
from divcurl.torus import ScalarField, TorusGrid, dft

from conftest import clean_field


#: lines echoed again in the terminal summary (see conftest.py)
RESULTS: list[str] = []


def report(number, ok, detail):
    line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, detail


def spawn(seed, count):
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


# --- 1: multiplier algebra -----------------------------------------------------

def sum_of_squares_residual(f, block):
    d = f.grid.block_dim(block)
    total = ScalarField.zeros(f.grid)
    for j in range(d):
        total = total + riesz_block(block, j, riesz_block(block, j, f))
    return (total + f).max_abs() / f.max_abs()


def test_criterion_1_multiplier_algebra():
    start = time.perf_counter()
    worst = 0.0
    for n, N in itertools.product((1, 2, 3), (8, 16)):
        cube = TorusGrid.cube(n, N)
        px, py = TorusGrid.product(n, 1, N), TorusGrid.product(1, n, N)
        for rng in spawn(1000 * n + N, 100):
            worst = max(worst, sum_of_squares_residual(clean_field(cube, rng), "full"))
            worst = max(worst, sum_of_squares_residual(clean_field(px, rng, ("x",)), "x"))
            worst = max(worst, sum_of_squares_residual(clean_field(py, rng, ("y",)), "y"))
    elapsed = time.perf_counter() - start
    report(1, worst <= 1e-10 and elapsed < 10,
           f"sum R_j^2 = -I (full, x, y blocks), worst relative residual {worst:.2e}, {elapsed:.1f}s")


# --- 2: Leray projection ----------------------------------------------------------

def test_criterion_2_leray_projection():
    start = time.perf_counter()
    grid = TorusGrid.product(2, 2, 16)
    idem = div = dual = 0.0
    for rng in spawn(2, 50):
        F = VectorField.from_components([clean_field(grid, rng) for _ in range(2)])
        b = SymbolFunction.normalized(ScalarField(grid, rng.standard_normal(grid.shape)))
        P = leray_project_x(F)
        idem = max(idem, (leray_project_x(P) - P).max_abs() / P.max_abs())
        div = max(div, divergence_residual(P, "x"))
        dual = max(dual, commutator_projection_paths(b, F, "x")[2])
    elapsed = time.perf_counter() - start
    ok = max(idem, div, dual) <= 1e-10 and elapsed < 30
    report(2, ok, f"P_x idempotence {idem:.2e}, divergence {div:.2e}, "
                  f"[b,P_x] dual paths {dual:.2e}, {elapsed:.1f}s")


# --- 3: two-parameter decomposition --------------------------------------------

def test_criterion_3_decomposition():
    start = time.perf_counter()
    config = ExperimentConfig(experiment="E2", n=2, m=2, nx=8, ny=8)
    worst = {"main": 0.0, "mixed": 0.0, "x_cancel": 0.0, "y_cancel": 0.0}
    for rng in spawn(3, 20):
        data = build_e2(config, rng)
        res = check_decomposition_2p(data["E"], data["B"], data["phi"])
        worst = {k: max(worst[k], res[k]) for k in worst}
    elapsed = time.perf_counter() - start
    ok = max(worst.values()) <= 1e-10 and elapsed < 60
    detail = ", ".join(f"{k} {v:.2e}" for k, v in worst.items())
    report(3, ok, f"E.B expansion and cancellations: {detail}, {elapsed:.1f}s")


# --- 4: pairing identities -----------------------------------------------------

def test_criterion_4_pairing():
    start = time.perf_counter()
    c1 = ExperimentConfig(experiment="E1", n=2, nx=16)
    c2 = ExperimentConfig(experiment="E2", n=2, m=2, nx=8, ny=8)
    one = two = 0.0
    for rng in spawn(41, 20):
        d = build_e1(c1, rng)
        b = SymbolFunction.normalized(clean_field(c1.grid(), rng))
        one = max(one, check_pairing_identity(d["E"], d["B"], d["phi"], b))
    for rng in spawn(42, 20):
        d = build_e2(c2, rng)
        b = SymbolFunction.normalized(clean_field(c2.grid(), rng), "bmo_product")
        two = max(two, check_pairing_identity(d["E"], d["B"], d["phi"], b))
    elapsed = time.perf_counter() - start
    report(4, max(one, two) <= 1e-10 and elapsed < 60,
           f"one-parameter {one:.2e}, iterated-commutator {two:.2e}, {elapsed:.1f}s")


# --- 5: inequalities monitored ------------------------------------------------

def test_criterion_5_monitoring():
    start = time.perf_counter()
    parts, ok = [], True
    for exp, kw in (("E1", dict(n=2)), ("E2", dict(n=2, m=2)), ("E3", dict(n=2, m=2))):
        config = ExperimentConfig(experiment=exp, p=2.0, trials=3, family_size=0, seed=5, **kw)
        table = scaling_scan(config, [8, 16, 32])
        growth = table["growth_factor"]
        # max_ratio is finite only if every trial's ratio is finite
        ok &= all(math.isfinite(r["max_ratio"]) for r in table["rows"])
        ok &= all(r["holder_ok"] is True for r in table["rows"])
        ok &= growth is not None and growth <= 2.0 and not table["flag"]
        parts.append(f"{exp} growth {growth:.3f}")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 300
    report(5, ok, f"{', '.join(parts)}; finite ratios and Hölder on every trial, {elapsed:.1f}s")


# --- 6: exterior calculus ------------------------------------------------------

def band_limited(grid, rng):
    spec = np.fft.fftn(rng.standard_normal(grid.shape))
    keep = np.ones(grid.shape, bool)
    for axis, N in enumerate(grid.shape):
        keep &= np.abs(np.broadcast_to(grid.frequencies[axis], grid.shape)) < N // 4
    return ScalarField(grid, np.fft.ifftn(np.where(keep, spec, 0)).real)


def shuffle_sign(I, J):
    seq = list(I) + list(J)
    if len(set(seq)) < len(seq):
        return 0
    target = sorted(seq)
    for perm in itertools.permutations(range(len(seq))):
        if [seq[p] for p in perm] == target:
            return int(round(np.linalg.det(np.eye(len(seq))[list(perm)])))


def test_criterion_6_exterior():
    start = time.perf_counter()
    g1 = TorusGrid.cube(3, 8)
    g2 = TorusGrid.product(3, 3, 8)
    d2 = sign = leib = 0.0
    for i, rng in enumerate(spawn(6, 50)):
        k, l = i % 3, (i // 3) % 3
        if k + l > 3:
            l = 3 - k
        u = Form(g1, k, {I: band_limited(g1, rng) for I in basis(3, k)})
        v = Form(g1, l, {I: band_limited(g1, rng) for I in basis(3, l)})
        d2 = max(d2, exterior_derivative(exterior_derivative(u)).max_abs() / u.max_abs())
        uv = wedge(u, v)
        sign = max(sign, (uv - wedge(v, u) * (-1) ** (k * l)).max_abs() / max(uv.max_abs(), 1e-300))
        if k + l < 3:
            lhs = exterior_derivative(uv)
            rhs = wedge(exterior_derivative(u), v) + wedge(u, exterior_derivative(v)) * (-1) ** k
            leib = max(leib, (lhs - rhs).max_abs() / max(lhs.max_abs(), 1e-300))
        # per-block d^2 on a bi-graded form with one random coefficient
        r, s = rng.integers(0, 2, 2)
        I, J = basis(3, int(r))[rng.integers(len(basis(3, int(r))))], \
            basis(3, int(s))[rng.integers(len(basis(3, int(s))))]
        w = BiGradedForm(g2, (int(r), int(s)), {(I, J): band_limited(g2, rng)})
        d2 = max(d2, d_x(d_x(w)).max_abs() / w.max_abs(), d_y(d_y(w)).max_abs() / w.max_abs())
    one = ScalarField.constant(TorusGrid.product(3, 3, 4), 1.0)
    subsets = [I for k in range(4) for I in basis(3, k)]
    mismatches = 0
    for I, J, I2, J2 in itertools.product(subsets, repeat=4):
        if len(I) + len(I2) > 3 or len(J) + len(J2) > 3:
            continue
        out = wedge_bigraded(BiGradedForm(one.grid, (len(I), len(J)), {(I, J): one}),
                             BiGradedForm(one.grid, (len(I2), len(J2)), {(I2, J2): one}))
        expect = shuffle_sign(I, I2) * shuffle_sign(J, J2)
        got = 0 if not out.coeffs else int(next(iter(out.coeffs.values())).values.flat[0])
        mismatches += got != expect
    elapsed = time.perf_counter() - start
    ok = max(d2, sign, leib) <= 1e-10 and mismatches == 0 and elapsed < 60
    report(6, ok, f"d^2 {d2:.2e}, graded sign {sign:.2e}, Leibniz {leib:.2e}, "
                  f"bi-graded basis mismatches {mismatches}, {elapsed:.1f}s")


# --- 7: closed forms -----------------------------------------------------------

def test_criterion_7_closed_forms():
    start = time.perf_counter()
    hyp, ratios = 0.0, []
    for config in (ExperimentConfig(experiment="E4", n=2, m=2, nx=8, ny=8, trials=10, degree=1),
                   ExperimentConfig(experiment="E5", n=2, m=2, nx=8, ny=8, trials=10,
                                    bidegree=(1, 1))):
        rep = run_experiment(config)
        hyp = max(hyp, rep["summary"]["max_hypothesis_residual"])
        ratios += [t["ratio"] for t in rep["trials"]]
    elapsed = time.perf_counter() - start
    ok = hyp <= 1e-10 and all(math.isfinite(r) and r > 0 for r in ratios) and elapsed < 120
    report(7, ok, f"closure residual {hyp:.2e}, {len(ratios)} finite ratios "
                  f"(max {max(ratios):.3f}), {elapsed:.1f}s")


# --- 8: oracle equivalence -----------------------------------------------------

def direct_dft(values):
    shape = values.shape
    x = np.stack(np.meshgrid(*[np.arange(N) for N in shape], indexing="ij"), -1).reshape(-1, len(shape))
    inv = 1.0 / np.array(shape)
    flat = values.ravel()
    out = np.empty(len(x), dtype=complex)
    for start in range(0, len(x), 256):
        xi = x[start:start + 256]
        phase = (xi * inv) @ x.T
        out[start:start + 256] = np.exp(-2j * np.pi * phase) @ flat
    return out.reshape(shape)


def oscillation_sup(values, windows):
    best = 0.0
    for window in windows:
        offsets = list(itertools.product(*[range(w) for w in window]))
        for start in itertools.product(*[range(N) for N in values.shape]):
            cells = [values[tuple((s + o) % N for s, o, N in zip(start, off, values.shape))]
                     for off in offsets]
            mean = sum(cells) / len(cells)
            best = max(best, sum(abs(c - mean) for c in cells) / len(cells))
    return best


def test_criterion_8_oracles():
    start = time.perf_counter()
    rng = np.random.default_rng(8)
    dft_err = 0.0
    for dims in (((8,), None), ((8, 8), None), ((8, 8), (8, 8))):
        g = TorusGrid(*dims)
        f = ScalarField(g, rng.standard_normal(g.shape))
        fast, slow = dft(f).coeffs, direct_dft(f.values)
        dft_err = max(dft_err, np.abs(fast - slow).max() / np.abs(slow).max())
    sides = [2, 4, 8]
    exact = True
    spike = np.zeros(8)
    spike[0] = 1.0
    for v in (spike, rng.integers(-5, 6, 8).astype(float)):
        exact &= bmo_norm_1p(ScalarField(TorusGrid.cube(1, 8), v)) == \
            oscillation_sup(v, [(s,) for s in sides])
    v = rng.integers(-5, 6, (8, 8)).astype(float)
    rects = [(a, b) for a in [1] + sides for b in [1] + sides if (a, b) != (1, 1)]
    exact &= rect_bmo_norm(ScalarField(TorusGrid.product(1, 1, 8), v)) == oscillation_sup(v, rects)
    elapsed = time.perf_counter() - start
    report(8, dft_err <= 1e-12 and exact and elapsed < 30,
           f"dft vs direct summation {dft_err:.2e}, BMO/rectangle enumeration exact: {exact}, "
           f"{elapsed:.1f}s")


# --- 9: determinism ------------------------------------------------------------

def test_criterion_9_determinism(tmp_path):
    args = ["run", "--experiment", "E2", "--n", "2", "--m", "2", "--nx", "8", "--ny", "8",
            "--p", "2", "--trials", "6", "--seed", "42", "--alpha", "1.5"]
    blobs = []
    for i, workers in enumerate((1, 1, 4)):
        out = tmp_path / f"r{i}.json"
        proc = subprocess.run([sys.executable, "-m", "divcurl.cli", *args,
                               "--workers", str(workers), "--out", str(out)],
                              capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        blobs.append(out.read_bytes())
    same = blobs[0] == blobs[1] == blobs[2]
    json.loads(blobs[0])
    report(9, same, f"three `divcurl run` reports (workers 1, 1, 4) byte-identical: {same}")


if __name__ == "__main__":
    import pytest
    sys.exit(pytest.main(["-q", "-s", __file__]))
