"""Size-effect harness for the cohesive bar.

A base problem posed on a unit-order domain is dilated by a factor h
with boundary data amplified by h^alpha.  Pulled back to the fixed
domain, the dilation only changes the laws and the energy weights
(:func:`cohesivefrac.laws.rescale_laws`); the physical large domain is
never meshed.  Sweeping h then probes which limit the normalized
evolutions approach:

* alpha = 1/2: totals approach the brittle (griffith) evolution;
* alpha < 1/2: the normalized bulk approaches the elastic minimum with
  free openings on the saturated initial crack;
* alpha > 1/2: immediate rupture, with a hard per-h bound on the
  initial gradient.

Classification never asserts beyond tolerances: convergence holds in
the limit, with no rate, so gaps are checked for monotonicity within
noise plus a final-gap threshold.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from cohesivefrac.bar1d import CrackState, Domain1D
from cohesivefrac.evolution import EvolutionTrace, LoadProgram, evolve
from cohesivefrac.laws import CohesiveLaw, RescaledLaws, plain_laws, rescale_laws
from cohesivefrac.solver1d import DEFAULT_CONFIG, SolverConfig

__all__ = [
    "BarProblem",
    "ScaledProblem",
    "RegimeRow",
    "ScalingReport",
    "Regime",
    "build_scaled_problem",
    "size_effect_sweep",
    "classify_regime",
    "half_saturation_opening",
    "uniform_bound_constant",
    "total_variation_constant",
    "piecewise_constant_minimum",
    "trace_jump_counts",
]


@dataclass(frozen=True)
class BarProblem:
    """Unit-order bar, cohesive law, and boundary program to be dilated."""

    domain: Domain1D
    law: CohesiveLaw
    g_left: Callable[[float], float]
    g_right: Callable[[float], float]
    horizon: float

    def __post_init__(self):
        if self.horizon <= 0.0:
            raise ValueError("horizon must be positive")

    def program(self, delta: float) -> LoadProgram:
        return LoadProgram.sampled(self.g_left, self.g_right, self.horizon, delta)

    @staticmethod
    def tearing(domain: Domain1D, law: CohesiveLaw, horizon: float = 2.0) -> "BarProblem":
        return BarProblem(domain, law, lambda t: 0.0, lambda t: t, horizon)


@dataclass(frozen=True)
class ScaledProblem:
    """Base problem dilated by h, pulled back to the fixed domain."""

    base: BarProblem
    h: float
    alpha: float
    laws: RescaledLaws
    normalization: float

    def program(self, delta: float) -> LoadProgram:
        return self.base.program(delta)


def build_scaled_problem(base: BarProblem, h: float, alpha: float) -> ScaledProblem:
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    laws = rescale_laws(base.law, base.law.a, h, alpha)
    # reported energies divide the physical ones by this power of h
    # (trivial above alpha = 1/2 in one dimension)
    normalization = 1.0 if alpha >= 0.5 else h ** (2.0 * alpha - 1.0)
    return ScaledProblem(base, float(h), float(alpha), laws, normalization)


@dataclass(frozen=True)
class RegimeRow:
    """One h of the sweep: the full trace plus its regime diagnostics."""

    h: float
    delta: float
    trace: EvolutionTrace
    gap_sup: float
    bulk_gap_sup: float
    initial_grad_l1: float
    rupture_bound: float
    max_total: float
    max_tv: float

    def __post_init__(self):
        for name in ("gap_sup", "bulk_gap_sup", "initial_grad_l1", "rupture_bound", "max_total", "max_tv"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0.0):
                raise ValueError(f"{name} must be finite and nonnegative, got {value}")


@dataclass(frozen=True)
class ScalingReport:
    alpha: float
    rows: tuple[RegimeRow, ...]
    reference_times: np.ndarray
    reference_totals: np.ndarray
    gap_monotone: bool


class Regime(enum.Enum):
    BRITTLE_LIMIT = "brittle_limit"
    ELASTIC_LIMIT = "elastic_limit"
    RUPTURE = "rupture"
    INCONCLUSIVE = "inconclusive"


def _pc_interp(times: np.ndarray, values: np.ndarray, query: np.ndarray) -> np.ndarray:
    # right-continuous step interpolation, the in-time reading of a trace
    idx = np.clip(np.searchsorted(times, query, side="right") - 1, 0, values.size - 1)
    return values[idx]


def _sup_gap(t1, v1, t2, v2) -> float:
    union = np.union1d(t1, t2)
    return float(np.max(np.abs(_pc_interp(t1, v1, union) - _pc_interp(t2, v2, union))))


def _total_variation(trace: EvolutionTrace) -> float:
    domain = trace.domain
    interior = set(range(1, domain.n_elements))
    best = 0.0
    for r in trace.records:
        u = r.displacement
        tv = float(np.sum(domain.element_lengths * np.abs(u.slopes)))
        tv += sum(abs(v) for s, v in u.jumps.items() if s in interior)
        best = max(best, tv)
    return best


def trace_jump_counts(trace: EvolutionTrace, tol: float = 1e-12) -> np.ndarray:
    return np.array(
        [sum(1 for v in r.displacement.jumps.values() if abs(v) > tol) for r in trace.records]
    )


def size_effect_sweep(
    base: BarProblem,
    alpha: float,
    h_list,
    delta_list=None,
    cfg: SolverConfig = DEFAULT_CONFIG,
    threads: int = 1,
) -> ScalingReport:
    """Run the rescaled evolutions over increasing h and collect diagnostics.

    ``delta_list`` pairs a time step with each h (default 1/h).  The
    brittle reference runs once on the base problem at the finest step;
    gaps are sups of step-interpolated energies on the union grid.
    Cells are independent, so ``threads > 1`` maps them onto a thread
    pool; the row order (and hence the report) stays deterministic.
    """
    h_list = [float(h) for h in h_list]
    if any(b <= a for a, b in zip(h_list, h_list[1:])):
        raise ValueError("h_list must be increasing")
    if delta_list is None:
        delta_list = [1.0 / h for h in h_list]
    delta_list = [float(d) for d in delta_list]
    if len(delta_list) != len(h_list):
        raise ValueError("delta_list must match h_list")

    initial = base.domain.initial_crack_state()
    reference = evolve(
        base.domain,
        initial,
        base.program(min(delta_list)),
        plain_laws(base.law),
        "griffith",
        cfg,
    )
    ref_times = reference.times()
    ref_totals = reference.totals()

    # free openings on the saturated initial crack drain the elastic
    # limit completely; without one the datum stretches the whole bar
    cracked = bool(initial.sites)
    L = base.domain.length

    def elastic_reference(times: np.ndarray) -> np.ndarray:
        if cracked:
            return np.zeros_like(times)
        deltas = np.array([base.g_right(t) - base.g_left(t) for t in times])
        return deltas**2 / L

    n_boundary_sites = len(base.domain.dirichlet)
    n_crack_sites = len(initial.sites)

    def one_row(pair) -> RegimeRow:
        h, delta = pair
        scaled = build_scaled_problem(base, h, alpha)
        trace = evolve(base.domain, initial, scaled.program(delta), scaled.laws, "cohesive", cfg)
        times = trace.times()
        totals = trace.totals()
        bulks = np.array([r.energy.bulk for r in trace.records])

        union = np.union1d(times, ref_times)
        gap_sup = float(
            np.max(np.abs(_pc_interp(times, totals, union) - _pc_interp(ref_times, ref_totals, union)))
        )
        bulk_gap_sup = float(
            np.max(np.abs(_pc_interp(times, bulks, union) - elastic_reference(union)))
        )
        u0 = trace.records[0].displacement
        grad_l1 = float(np.sum(base.domain.element_lengths * np.abs(u0.slopes)))
        bound = (n_crack_sites + n_boundary_sites + 1) / (base.law.a * h**alpha)
        return RegimeRow(
            h=h,
            delta=delta,
            trace=trace,
            gap_sup=gap_sup,
            bulk_gap_sup=bulk_gap_sup,
            initial_grad_l1=grad_l1,
            rupture_bound=bound,
            max_total=float(np.max(totals)),
            max_tv=_total_variation(trace),
        )

    pairs = list(zip(h_list, delta_list))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(one_row, pairs))
    else:
        rows = [one_row(p) for p in pairs]

    gaps = [r.gap_sup for r in rows]
    monotone = all(b <= a + 1e-6 for a, b in zip(gaps, gaps[1:]))
    return ScalingReport(float(alpha), tuple(rows), ref_times, ref_totals, monotone)


def classify_regime(
    report: ScalingReport,
    gap_tol: float = 0.05,
    bulk_tol: float = 0.1,
    bound_slack: float = 1e-9,
) -> Regime:
    """Read the regime off the sweep diagnostics, within tolerances only."""
    if not report.rows:
        return Regime.INCONCLUSIVE
    last = report.rows[-1]
    if report.alpha == 0.5:
        if last.gap_sup < gap_tol:
            return Regime.BRITTLE_LIMIT
        return Regime.INCONCLUSIVE
    if report.alpha < 0.5:
        bulk_gaps = [r.bulk_gap_sup for r in report.rows]
        if last.bulk_gap_sup < bulk_tol and all(
            b <= a + 1e-6 for a, b in zip(bulk_gaps, bulk_gaps[1:])
        ):
            return Regime.ELASTIC_LIMIT
        return Regime.INCONCLUSIVE
    if all(r.initial_grad_l1 <= r.rupture_bound + bound_slack for r in report.rows):
        return Regime.RUPTURE
    return Regime.INCONCLUSIVE


def half_saturation_opening(law: CohesiveLaw) -> float:
    """Opening where the surface density crosses 1/2, by bisection."""
    hi = 1.0 / law.a
    while float(law(hi)) < 0.5:
        hi *= 2.0
    lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if float(law(mid)) < 0.5:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def uniform_bound_constant(base: BarProblem, delta: float = 1e-3) -> float:
    """Energy bound C' from the data: the evolutions stay below it at every h.

    C' = |grad g(0)|^2 + #initial sites + 2 max|grad g| TV(grad g) + 1,
    with the affine lifting of the boundary pair as the data gradient.
    """
    program = base.program(delta)
    grads = program.deltas() / base.domain.length
    tv = float(np.sum(np.abs(np.diff(grads))))
    gmax = float(np.max(np.abs(grads)))
    n_sites = len(base.domain.initial_crack_state().sites)
    return float(grads[0] ** 2) + n_sites + 2.0 * gmax * tv + 1.0


def total_variation_constant(base: BarProblem, delta: float = 1e-3) -> float:
    """Total-variation bound C'' for the evolutions, from C' and the law.

    Splits |Dv| into gradient, small openings (below the half-saturation
    opening, each worth at most (s/phi(s)) phi <= 2 s-bar per unit of
    surface energy) and large openings (at most C' of them, each bounded
    through the sup norm by the data).
    """
    c_prime = uniform_bound_constant(base, delta)
    s_bar = half_saturation_opening(base.law)
    a_bar = 2.0 * s_bar
    program = base.program(delta)
    c_g = max(float(np.max(np.abs(program.left))), float(np.max(np.abs(program.right))))
    L = base.domain.length
    return (c_prime + L) + (a_bar + 4.0 * c_g) * c_prime + c_prime / base.law.a


def piecewise_constant_minimum(domain: Domain1D, g) -> int:
    """Fewest jump sites over piecewise-constant states matching the data.

    Enumerates every mesh-representable partition with at most two jump
    sites; a candidate is feasible when its openings can absorb the full
    datum difference (always true for a nonempty site set).
    """
    from cohesivefrac.bar1d import LEFT, RIGHT

    if not (LEFT in domain.dirichlet and RIGHT in domain.dirichlet):
        return 0
    delta = float(g[1]) - float(g[0])
    sites = domain.jump_sites()
    best = None
    for count in (0, 1, 2):
        if count == 0:
            feasible = delta == 0.0
        elif count == 1:
            feasible = len(sites) >= 1
        else:
            feasible = len(sites) >= 2
        if feasible:
            best = count
            break
    if best is None:
        raise ValueError("no representable partition matches the data")
    return best
