"""Seeded experiment drivers producing reproducible reports.

Each driver measures the quantities behind one of the verified statements:
the factorization of truncated Riesz transforms, dimension sweeps of
maximal-operator norm ratios, the dyadic-plus-variation decomposition of
the maximal multiplier operator, the Poisson maximal/square/projection
suite, the dyadic numerical inequality, and the method of rotations.

Reports carry plain (d, N, trial, quantity, value) rows; identical
(experiment_id, seed, parameters) triples reproduce identical rows.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import operators as op
from .errors import DomainError, IntegrityError
from .fields import GridSpec, SpatialField, l2_norm, random_band_limited
from .multiplier import check_derivative, check_large_arg, check_small_arg
from .operators import (MultiplierSymbol, TruncationGrid, apply_symbol,
                        maximal_over, poisson_projection,
                        poisson_projection_sum, radial_bundle,
                        rotation_reconstruct, sphere_moment, square_function,
                        truncated_riesz_spatial, vector_maximal)
from .specfun import QuadratureConfig, bessel_envelope, bessel_j

__all__ = [
    "ExperimentReport",
    "default_truncation_grid",
    "factorization_residual",
    "norm_ratio_sweep",
    "decomposition_diagnostics",
    "poisson_suite",
    "numerical_inequality_check",
    "rotation_check",
    "multiplier_bound_suite",
    "specfun_bound_suite",
    "merge_reports",
    "read_rows",
]

CSV_COLUMNS = ("experiment_id", "seed", "d", "N", "trial", "quantity", "value")


def default_truncation_grid() -> TruncationGrid:
    """Dyadic range covering the transition band t |xi| ~ sqrt(d) for every
    experiment configuration, with binary refinement depth 4."""
    return TruncationGrid(n_min=-8, n_max=4, depth=4)


@dataclass
class ExperimentReport:
    """Rows of measured quantities plus the configuration that produced them."""

    experiment_id: str
    seed: int
    parameters: dict
    rows: list = field(default_factory=list)
    created_at: str = ""

    def __post_init__(self):
        if not self.created_at:
            self.created_at = datetime.now(timezone.utc).isoformat()

    def add(self, d, n, trial, quantity, value) -> None:
        self.rows.append({"d": int(d), "N": int(n), "trial": int(trial),
                          "quantity": str(quantity), "value": float(value)})

    def sort_rows(self) -> None:
        self.rows.sort(key=lambda r: (r["d"], r["N"], r["trial"], r["quantity"]))

    def values(self, quantity: str) -> list[float]:
        return [r["value"] for r in self.rows if r["quantity"] == quantity]

    def to_csv(self, path) -> None:
        self.sort_rows()
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for r in self.rows:
                writer.writerow([self.experiment_id, self.seed, r["d"], r["N"],
                                 r["trial"], r["quantity"], repr(r["value"])])

    def to_json(self, path) -> None:
        self.sort_rows()
        payload = {"experiment_id": self.experiment_id, "seed": self.seed,
                   "parameters": self.parameters, "created_at": self.created_at,
                   "rows": self.rows}
        Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True))


def _trial_field(spec: GridSpec, band: float, seed: int, trial: int) -> SpatialField:
    return random_band_limited(spec, band, seed=seed * 100_003 + trial)


def _capped_band(band: float, spec: GridSpec) -> float:
    nyquist = spec.points_per_axis / (2.0 * spec.period)
    return min(band, 0.98 * nyquist)


# ---------------------------------------------------------------------------


def factorization_residual(d: int, n: int, t_list, band: float, trials: int,
                           seed: int, image_radius: int = 1) -> ExperimentReport:
    """Relative L2 residual between the spatial (periodized kernel) and
    spectral (factorized symbol) truncated Riesz transform, axis 1."""
    spec = GridSpec(d, n)
    band = _capped_band(band, spec)
    report = ExperimentReport(
        "factorization", seed,
        {"d": d, "N": n, "t_list": list(map(float, t_list)), "band": band,
         "trials": trials, "image_radius": image_radius})
    for trial in range(trials):
        f = _trial_field(spec, band, seed, trial)
        norm_f = l2_norm(f)
        for t in t_list:
            spatial = truncated_riesz_spatial(f, 1, float(t), image_radius)
            spectral = apply_symbol(f, MultiplierSymbol.truncated_riesz(1, float(t)))
            diff = SpatialField(spec, spatial.samples - spectral.samples)
            report.add(d, n, trial, f"residual_t={float(t):g}",
                       l2_norm(diff) / norm_f)
    report.sort_rows()
    return report


def norm_ratio_sweep(dims, n_of_d: dict, grid: TruncationGrid, band: float,
                     trials: int, seed: int) -> ExperimentReport:
    """Norm ratios of the four maximal operators per dimension:

        r1 = ||sup_t |M^t f|||_2 / ||f||_2
        r2 = ||sup_t |R_1^t f|||_2 / ||R_1 f||_2
        r3 = ||sup_t (sum_j |R_j^t f|^2)^(1/2)||_2 / ||f||_2
        r4 = ||sup_t |Q_t^1 * f|||_2 / ||R_1 f||_2
    """
    report = ExperimentReport(
        "norm_sweep", seed,
        {"dims": list(dims), "N_of_d": {str(k): v for k, v in n_of_d.items()},
         "grid": [grid.n_min, grid.n_max, grid.depth], "band": band,
         "trials": trials})
    for d in dims:
        spec = GridSpec(d, n_of_d[d])
        band_d = _capped_band(band, spec)
        for trial in range(trials):
            f = _trial_field(spec, band_d, seed, trial)
            norm_f = l2_norm(f)
            riesz1 = apply_symbol(f, MultiplierSymbol.riesz(1))
            norm_r = l2_norm(riesz1)
            report.add(d, spec.points_per_axis, trial, "r1",
                       l2_norm(maximal_over(f, "factor_m", grid)) / norm_f)
            report.add(d, spec.points_per_axis, trial, "r2",
                       l2_norm(maximal_over(f, "truncated_riesz", grid, j=1))
                       / norm_r)
            report.add(d, spec.points_per_axis, trial, "r3",
                       l2_norm(vector_maximal(f, grid)) / norm_f)
            report.add(d, spec.points_per_axis, trial, "r4",
                       l2_norm(maximal_over(f, "conjugate_poisson", grid, j=1))
                       / norm_r)
    report.sort_rows()
    return report


def decomposition_diagnostics(d: int, n: int, grid: TruncationGrid, band: float,
                              trials: int, seed: int) -> ExperimentReport:
    """Split of the maximal multiplier operator into its dyadic supremum and
    local-variation parts:

        a = ||sup_n |M^(2^n) f|||_2 / ||f||_2
        b = ||(sum_n sup_{t in [2^n, 2^(n+1)]} |M^t f - M^(2^n) f|^2)^(1/2)||_2
            / ||f||_2
        c = ||sup_n |M^(2^n) f - P_(2^n) f|||_2 / ||f||_2

    together with r1 over the full grid and the triangle check r1 <= a + b.
    """
    spec = GridSpec(d, n)
    band = _capped_band(band, spec)
    q = QuadratureConfig()
    report = ExperimentReport(
        "decomposition", seed,
        {"d": d, "N": n, "grid": [grid.n_min, grid.n_max, grid.depth],
         "band": band, "trials": trials})
    dyadic = grid.dyadic_values()
    for trial in range(trials):
        f = _trial_field(spec, band, seed, trial)
        norm_f = l2_norm(f)
        bundle = radial_bundle(f)
        radii = bundle.radii

        prof_dyadic = op._profile_matrix(d, radii, dyadic, "factor_m", q)
        a_sup = bundle.sup_abs(prof_dyadic)
        a = math.sqrt(np.sum(a_sup ** 2) * spec.cell_volume) / norm_f

        sq_acc = np.zeros(spec.n_samples)
        sum_mp_sq = 0.0
        for idx, t_dyad in enumerate(dyadic[:-1] if len(dyadic) > 1 else dyadic):
            n_exp = grid.n_min + idx
            ts = grid.octave_values(n_exp)
            prof = op._profile_matrix(d, radii, ts, "factor_m", q) \
                - op._profile_matrix(d, radii, np.array([t_dyad]), "factor_m", q)
            sq_acc += bundle.sup_abs_sq(prof)
        b_field = np.sqrt(sq_acc)
        b = math.sqrt(np.sum(b_field ** 2) * spec.cell_volume) / norm_f

        poisson_prof = np.exp(-np.outer(radii, dyadic) / math.sqrt(d))
        c_sup = bundle.sup_abs(prof_dyadic - poisson_prof)
        c = math.sqrt(np.sum(c_sup ** 2) * spec.cell_volume) / norm_f
        for t_dyad in dyadic:
            diff_prof = (op._profile_matrix(d, radii, np.array([t_dyad]),
                                            "factor_m", q)[:, 0]
                         - np.exp(-radii * t_dyad / math.sqrt(d)))
            diff_field = bundle.combine(diff_prof)
            sum_mp_sq += np.sum(np.abs(diff_field) ** 2) * spec.cell_volume

        r1 = l2_norm(maximal_over(f, "factor_m", grid)) / norm_f
        report.add(d, n, trial, "a", a)
        report.add(d, n, trial, "b", b)
        report.add(d, n, trial, "c", c)
        report.add(d, n, trial, "r1", r1)
        report.add(d, n, trial, "sum_dyadic_poisson_gap_sq",
                   sum_mp_sq / norm_f ** 2)
        report.add(d, n, trial, "triangle_slack", a + b - r1)
    report.sort_rows()
    return report


def poisson_suite(d: int, n: int, band: float, trials: int, seed: int,
                  t_nodes=None, n_range=(-20, 20)) -> ExperimentReport:
    """Poisson maximal function, discretized square function, projection
    square function, and the telescoping reconstruction residual."""
    spec = GridSpec(d, n)
    band = _capped_band(band, spec)
    if t_nodes is None:
        t_nodes = np.geomspace(1e-3, 1e2, 400)
    grid = TruncationGrid(n_min=-10, n_max=7, depth=2)
    report = ExperimentReport(
        "poisson", seed,
        {"d": d, "N": n, "band": band, "trials": trials,
         "t_nodes": [float(t_nodes[0]), float(t_nodes[-1]), len(t_nodes)],
         "n_range": list(n_range)})
    n_min, n_max = n_range
    for trial in range(trials):
        f = _trial_field(spec, band, seed, trial)
        norm_f = l2_norm(f)
        report.add(d, n, trial, "poisson_max_ratio",
                   l2_norm(maximal_over(f, "poisson", grid)) / norm_f)
        report.add(d, n, trial, "g_ratio",
                   l2_norm(square_function(f, t_nodes)) / norm_f)
        acc = np.zeros(spec.shape)
        for proj_n in range(n_min, n_max + 1):
            acc += np.abs(poisson_projection(f, proj_n).samples) ** 2
        sn_field = SpatialField(spec, np.sqrt(acc).astype(complex))
        report.add(d, n, trial, "sn_square_ratio", l2_norm(sn_field) / norm_f)
        rec = poisson_projection_sum(f, n_min, n_max)
        diff = SpatialField(spec, f.samples - rec.samples)
        report.add(d, n, trial, "telescope_residual", l2_norm(diff) / norm_f)
    report.sort_rows()
    return report


def numerical_inequality_check(g, n: int, l_max: int,
                               n_samples: int = 4096,
                               label: str = "g") -> ExperimentReport:
    """Dyadic-variation inequality on [2^n, 2^(n+1)]:

        sup_t |g(t) - g(2^n)|
            <= sqrt(2) sum_l (sum_m |g-increments at level l|^2)^(1/2).

    Reports the dense-sample LHS, the cumulative RHS(L) per level, and a
    Lipschitz-based estimate of the truncated tail.
    """
    lo, hi = 2.0 ** n, 2.0 ** (n + 1)
    dense = np.linspace(lo, hi, n_samples + 1)
    g_dense = np.array([g(t) for t in dense], dtype=complex)
    lhs = float(np.max(np.abs(g_dense - g_dense[0])))
    lipschitz = float(np.max(np.abs(np.diff(g_dense))) / (dense[1] - dense[0]))

    report = ExperimentReport(
        "ineq", 0, {"g": label, "n": n, "l_max": l_max, "n_samples": n_samples})
    report.add(0, 0, 0, "lhs", lhs)
    report.add(0, 0, 0, "lipschitz", lipschitz)
    rhs = 0.0
    for level in range(l_max + 1):
        knots = lo + (hi - lo) * np.arange(2 ** level + 1) / 2 ** level
        g_knots = np.array([g(t) for t in knots], dtype=complex)
        increments = np.abs(np.diff(g_knots))
        rhs += math.sqrt(2.0) * float(np.sqrt(np.sum(increments ** 2)))
        report.add(0, 0, 0, f"rhs_L={level}", rhs)
    # levels beyond l_max: increments <= Lip * 2^(n - l), so the level-l term
    # is at most Lip 2^n 2^(-l/2); geometric tail
    tail = math.sqrt(2.0) * lipschitz * 2.0 ** n \
        * 2.0 ** (-(l_max + 1) / 2.0) / (1.0 - 2.0 ** -0.5)
    report.add(0, 0, 0, "tail_estimate", tail)
    report.add(0, 0, 0, "holds", float(lhs <= rhs + tail))
    report.sort_rows()
    return report


def rotation_check(d: int, n: int, t: float, n_angles: int, band: float,
                   seed: int, j: int = 1,
                   doublings: int = 2) -> ExperimentReport:
    """Relative L2 error of the rotation-method reconstruction against the
    spectral truncated Riesz transform, for successive angle doublings,
    plus sphere-moment consistency checks."""
    spec = GridSpec(d, n)
    band = _capped_band(band, spec)
    f = random_band_limited(spec, band, seed=seed)
    reference = apply_symbol(f, MultiplierSymbol.truncated_riesz(j, t))
    norm_ref = l2_norm(reference)
    report = ExperimentReport(
        "rotation", seed,
        {"d": d, "N": n, "t": t, "n_angles": n_angles, "band": band, "j": j})
    angles = n_angles
    for _ in range(doublings + 1):
        approx = rotation_reconstruct(f, j, t, angles)
        diff = SpatialField(spec, approx.samples - reference.samples)
        report.add(d, n, 0, f"rot_error_angles={angles}",
                   l2_norm(diff) / norm_ref)
        angles *= 2
    for dim in range(2, 17):
        area = sphere_moment(2.0, dim) * dim
        expected = 2.0 * math.pi ** (dim / 2.0) / math.gamma(dim / 2.0)
        report.add(dim, 0, 0, f"sphere_moment_gap_d={dim}",
                   abs(area - expected) / expected)
    report.sort_rows()
    return report


def multiplier_bound_suite(d_list, x_grid) -> ExperimentReport:
    """Margins of the three quantitative multiplier bounds over a grid."""
    report = ExperimentReport(
        "multiplier_bounds", 0,
        {"d_list": list(d_list),
         "x_grid": [float(x_grid[0]), float(x_grid[-1]), len(x_grid)]})
    for d in d_list:
        sq = math.sqrt(d)
        for x in x_grid:
            x = float(x)
            if x <= sq:
                chk = check_small_arg(d, x)
                report.add(d, 0, 0, f"small_margin_x={x:.6g}", chk.margin)
            if x >= sq:
                chk = check_large_arg(d, x)
                report.add(d, 0, 0, f"large_margin_x={x:.6g}", chk.margin)
            chk = check_derivative(d, x) if x > 0 else None
            if chk is not None:
                report.add(d, 0, 0, f"deriv_margin_x={x:.6g}", chk.margin)
    report.sort_rows()
    return report


def specfun_bound_suite(nu_list=(2, 3, 5, 10), t_max: float = 100.0,
                        n_points: int = 200) -> ExperimentReport:
    """Envelope and unit-bound margins for the Bessel function."""
    report = ExperimentReport(
        "specfun_bounds", 0,
        {"nu_list": list(nu_list), "t_max": t_max, "n_points": n_points})
    ts = np.linspace(0.0, t_max, n_points)
    for nu in nu_list:
        for t in ts:
            val = bessel_j(float(nu), float(t))
            env = bessel_envelope(float(nu), float(t))
            report.add(nu, 0, 0, f"envelope_margin_t={t:.6g}", env - abs(val))
            report.add(nu, 0, 0, f"unit_margin_t={t:.6g}", 1.0 - abs(val))
    report.sort_rows()
    return report


# ---------------------------------------------------------------------------
# report merging


def read_rows(path) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != CSV_COLUMNS:
            raise DomainError(f"{path}: unexpected CSV columns {reader.fieldnames}")
        return [dict(r) for r in reader]


def merge_reports(paths) -> list[dict]:
    """Concatenate report CSVs; identical keys must carry identical values."""
    seen: dict[tuple, str] = {}
    merged = []
    for path in paths:
        for row in read_rows(path):
            key = (row["experiment_id"], row["seed"], row["d"], row["N"],
                   row["trial"], row["quantity"])
            if key in seen:
                if seen[key] != row["value"]:
                    raise IntegrityError(
                        f"conflicting values for {key}: "
                        f"{seen[key]} vs {row['value']}")
                continue
            seen[key] = row["value"]
            merged.append(row)
    merged.sort(key=lambda r: (r["experiment_id"], int(r["d"]), int(r["N"]),
                               int(r["trial"]), r["quantity"]))
    return merged
