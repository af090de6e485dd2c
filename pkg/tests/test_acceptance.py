"""Acceptance gate: ten end-to-end criteria, one pass/fail line each.

Run with ``pytest -s tests/test_acceptance.py`` to see the per-criterion
lines; each criterion also asserts, so the suite fails loudly if any
measured quantity leaves its stated tolerance or time budget.
"""

import math
import time

import numpy as np
import pytest

from rieszmax.experiments import (decomposition_diagnostics,
                                  default_truncation_grid,
                                  factorization_residual, norm_ratio_sweep,
                                  numerical_inequality_check, poisson_suite,
                                  rotation_check)
from rieszmax.fields import GridSpec, SpatialField, l2_norm
from rieszmax.multiplier import (check_derivative, check_large_arg,
                                 check_small_arg, m_eval)
from rieszmax.operators import MultiplierSymbol, square_function
from rieszmax.specfun import bessel_envelope, bessel_j

DIMS = (4, 6, 8, 12, 16)
SEED = 42


def _verdict(number, name, ok, detail, elapsed, budget):
    status = "PASS" if ok and elapsed < budget else "FAIL"
    print(f"criterion {number:2d} [{name}]: {status} "
          f"({detail}; {elapsed:.1f}s / budget {budget:.0f}s)")
    assert ok, f"criterion {number} ({name}): {detail}"
    assert elapsed < budget, \
        f"criterion {number} ({name}): {elapsed:.1f}s over budget {budget}s"


def test_criterion_01_multiplier_identity():
    start = time.monotonic()
    gaps = [abs(m_eval(d, 0.0).value - 1.0) for d in DIMS]
    _verdict(1, "m(0) = 1", max(gaps) <= 1e-8,
             f"max |m(0) - 1| = {max(gaps):.2e}",
             time.monotonic() - start, 5.0)


def test_criterion_02_lemma_suite():
    start = time.monotonic()
    xs = np.geomspace(1e-3, 1e3, 200)
    failures = 0
    total = 0
    for d in DIMS:
        sq = math.sqrt(d)
        for x in xs:
            x = float(x)
            if x <= sq:
                total += 1
                failures += not check_small_arg(d, x).holds
            if x >= sq:
                total += 1
                failures += not check_large_arg(d, x).holds
            total += 1
            failures += not check_derivative(d, x).holds
    _verdict(2, "three multiplier bounds", failures == 0,
             f"{failures} failures out of {total} checks",
             time.monotonic() - start, 120.0)


def test_criterion_03_bessel_envelope():
    start = time.monotonic()
    failures = 0
    for nu in (2, 3, 5, 10):
        for t in np.linspace(0.0, 100.0, 200):
            val = abs(bessel_j(float(nu), float(t)))
            failures += not (val <= bessel_envelope(float(nu), float(t))
                             and val <= 1.0)
    _verdict(3, "Bessel envelope", failures == 0,
             f"{failures} failures out of 800 points",
             time.monotonic() - start, 60.0)


def test_criterion_04_factorization_discretization():
    start = time.monotonic()
    rep = factorization_residual(4, 16, [0.15], 3.0, trials=4, seed=SEED)
    worst = max(rep.values("residual_t=0.15"))
    # d = 2 refinement: a large image radius keeps the kernel-periodization
    # error well below the sampling error whose decay is being measured
    coarse = max(factorization_residual(2, 64, [0.15], 3.0, 1, seed=SEED,
                                        image_radius=16)
                 .values("residual_t=0.15"))
    fine = max(factorization_residual(2, 128, [0.15], 3.0, 1, seed=SEED,
                                      image_radius=16)
               .values("residual_t=0.15"))
    ok = worst <= 0.1 and fine < coarse
    _verdict(4, "spatial vs spectral", ok,
             f"d=4 residual {worst:.3e} (<=0.1); "
             f"d=2 N=128 {fine:.3e} < N=64 {coarse:.3e}",
             time.monotonic() - start, 120.0)


def test_criterion_05_spectral_identities():
    start = time.monotonic()
    from rieszmax.fields import random_band_limited
    from rieszmax.operators import apply_symbol, poisson_projection_sum
    spec = GridSpec(4, 16)
    f = random_band_limited(spec, 3.0, seed=SEED)

    total = sum(l2_norm(apply_symbol(f, MultiplierSymbol.riesz(j))) ** 2
                for j in range(1, 5))
    isometry_gap = abs(total - l2_norm(f) ** 2) / l2_norm(f) ** 2

    t = 0.25
    combined = MultiplierSymbol.truncated_riesz(1, t).values(spec)
    product = MultiplierSymbol.factor_m(t).values(spec) \
        * MultiplierSymbol.riesz(1).values(spec)
    factor_gap = float(np.max(np.abs(combined - product)))

    riesz = MultiplierSymbol.riesz(2).values(spec)
    lap = -4.0 * math.pi ** 2 * spec.freq_radius() ** 2
    xi2 = spec.freq_component(2)
    laplace_gap = float(np.max(np.abs(riesz * riesz * lap
                                      - 4.0 * math.pi ** 2 * xi2 ** 2)))

    rec = poisson_projection_sum(f, -20, 20)
    telescope = l2_norm(SpatialField(spec, f.samples - rec.samples)) \
        / l2_norm(f)

    ok = (isometry_gap <= 1e-12 and factor_gap <= 1e-12
          and laplace_gap <= 1e-12 and telescope <= 1e-6)
    _verdict(5, "spectral identities", ok,
             f"isometry {isometry_gap:.1e}, factorization {factor_gap:.1e}, "
             f"Laplacian {laplace_gap:.1e} (<=1e-12); "
             f"telescoping {telescope:.1e} (<=1e-6)",
             time.monotonic() - start, 120.0)


def test_criterion_06_poisson_suite():
    start = time.monotonic()
    rep = poisson_suite(4, 16, 3.0, trials=8, seed=SEED)
    max_ratio = max(rep.values("poisson_max_ratio"))
    g_max = max(rep.values("g_ratio"))
    sn_max = max(rep.values("sn_square_ratio"))
    ceiling = 1.0 / math.sqrt(2.0) + 0.05

    spec = GridSpec(4, 16)
    x = np.arange(16) / 16.0
    grids = np.meshgrid(*([x] * 4), indexing="ij")
    mode = np.exp(2j * math.pi * grids[0])
    single = SpatialField(spec, mode)
    g_single = l2_norm(square_function(single,
                                       np.geomspace(1e-4, 1e3, 2000))) \
        / l2_norm(single)
    ok = (max_ratio <= 4.0 and g_max <= ceiling and sn_max <= ceiling
          and abs(g_single - 0.5) <= 1e-2)
    _verdict(6, "Poisson suite", ok,
             f"P* {max_ratio:.3f} (<=4), g {g_max:.3f}, S_n {sn_max:.3f} "
             f"(<= {ceiling:.3f}), single-mode g {g_single:.4f} (0.5 +- 0.01)",
             time.monotonic() - start, 120.0)


@pytest.fixture(scope="module")
def dimension_sweep():
    start = time.monotonic()
    rep = norm_ratio_sweep([4, 6, 8, 10], {4: 16, 6: 10, 8: 6, 10: 4},
                           default_truncation_grid(), 3.0, trials=8,
                           seed=SEED)
    return rep, time.monotonic() - start


def test_criterion_07_dimension_sweep(dimension_sweep):
    rep, elapsed = dimension_sweep
    worst = max(max(rep.values(name)) for name in ("r1", "r2", "r3", "r4"))
    medians = []
    for d in (4, 6, 8, 10):
        vals = [r["value"] for r in rep.rows
                if r["quantity"] == "r1" and r["d"] == d]
        medians.append(float(np.median(vals)))
    spread = (max(medians) - min(medians)) / min(medians)
    ok = worst <= 10.0 and spread < 0.25
    _verdict(7, "dimension sweep", ok,
             f"max ratio {worst:.3f} (<=10), "
             f"median r1 spread {100 * spread:.1f}% (<25%)",
             elapsed, 600.0)


def test_criterion_08_decomposition():
    start = time.monotonic()
    rep = decomposition_diagnostics(4, 16, default_truncation_grid(), 3.0,
                                    trials=8, seed=SEED)
    slack = min(rep.values("triangle_slack"))
    a_max = max(rep.values("a"))
    b_max = max(rep.values("b"))
    ok = slack >= -1e-12 and a_max <= 1.3e5 and b_max <= 1.7e8
    _verdict(8, "decomposition bounds", ok,
             f"min(a + b - r1) = {slack:.2e} (>=0), a <= {a_max:.3f} "
             f"(bound 1.3e5), b <= {b_max:.3f} (bound 1.7e8)",
             time.monotonic() - start, 600.0)


def test_criterion_09_numerical_inequality():
    start = time.monotonic()
    rep = numerical_inequality_check(lambda t: t, 0, 10, label="identity")
    vals = {r["quantity"]: r["value"] for r in rep.rows}
    lhs_lin, rhs_lin = vals["lhs"], vals["rhs_L=10"]
    rep2 = numerical_inequality_check(
        lambda t: math.sin(8.0 * math.pi * t), 0, 10, label="sin8pi")
    vals2 = {r["quantity"]: r["value"] for r in rep2.rows}
    ok = (abs(lhs_lin - 1.0) <= 1e-12 and 4.7 <= rhs_lin <= 4.9
          and vals2["lhs"] <= vals2["rhs_L=10"])
    _verdict(9, "dyadic variation inequality", ok,
             f"g(t)=t: LHS {lhs_lin:.6f}, RHS(10) {rhs_lin:.4f} in [4.7,4.9]; "
             f"sin: LHS {vals2['lhs']:.3f} <= RHS(10) {vals2['rhs_L=10']:.3f}",
             time.monotonic() - start, 10.0)


def test_criterion_10_rotations():
    start = time.monotonic()
    rep = rotation_check(2, 64, 0.1, 256, 28.0, seed=SEED, doublings=1)
    err_256 = rep.values("rot_error_angles=256")[0]
    err_512 = rep.values("rot_error_angles=512")[0]
    ratio = err_512 / err_256
    gaps = [r["value"] for r in rep.rows
            if r["quantity"].startswith("sphere_moment_gap")]
    ok = (err_256 <= 1e-2 and 0.25 <= ratio <= 0.75 and max(gaps) <= 1e-10)
    _verdict(10, "method of rotations", ok,
             f"error(256) = {err_256:.2e} (<=1e-2), doubling ratio "
             f"{ratio:.2f} in [0.25, 0.75], sphere moments {max(gaps):.1e}",
             time.monotonic() - start, 120.0)
