"""Planar tearing on the unit square with a straight cohesive interface.

The domain is (0,1)^2 meshed by ``n`` square cells per side (``n`` even),
and the only admissible jump set is the horizontal line ``y = 1/2``: the
node row there is duplicated into a bottom lip and a top lip, and each of
the ``n`` crack edges carries a signed jump and an irreversibility
memory ``psi >= 0``.  Dirichlet data acts on the whole top and bottom
edges; the default program is tearing, ``+t`` on top and ``-t`` below,
whose solutions are antisymmetric about the crack line.

The bulk quadrature is the five-point one: ``sum w * (u_p - u_q)^2``
over nearest-neighbour edges, with ``w = 1/2`` on edges lying in the
outer boundary rows/columns or in a lip row.  With every lip pair tied
the two half weights of the duplicated row recombine and the uncracked
grid is recovered exactly; the form is exact on affine fields.

Three operations are exposed.  ``solve_elastic`` minimizes the quadratic
form with a prescribed set of open crack edges (a closed edge ties the
lip values at both its endpoints).  ``prefix_crack_sweep`` scans the
crack lengths ``l = k/n`` and returns the energy-optimal prefix, the
global check for monotone patterns.  ``alternate_minimize`` relaxes
field and jumps in turn for a cohesive surface cost; each half-step is
an exact partial minimization, so the energy trace is nonincreasing, but
the stationary point is a local statement and is not certified global.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.linalg import splu

from cohesivefrac.laws import CohesiveLaw, LawKind, RescaledLaws, rescale_laws
from cohesivefrac.search import line_search

__all__ = [
    "Grid2D",
    "Field2D",
    "SweepResult",
    "AMResult",
    "TearingStep",
    "PlanarNumericError",
    "PlanarNonconvergence",
    "solve_elastic",
    "prefix_crack_sweep",
    "alternate_minimize",
    "evolve_tearing",
    "cellwise_bulk",
    "tearing_gap_ladder",
    "write_field",
]

RESIDUAL_TOL = 1e-10


class PlanarNumericError(RuntimeError):
    """Linear solve failed to reach the required residual."""


class PlanarNonconvergence(RuntimeError):
    """Alternate minimization hit ``max_iters``; carries the last energy."""

    def __init__(self, last_energy: float, iterations: int):
        super().__init__(
            f"alternate minimization not converged after {iterations} "
            f"iterations, last energy {last_energy:.12g}"
        )
        self.last_energy = last_energy
        self.iterations = iterations


@dataclass(frozen=True, eq=False)
class Grid2D:
    """Square grid with a duplicated crack row at ``y = 1/2``.

    ``n`` is the number of cells per side (even, at least 8) and ``psi``
    the per-crack-edge memory, one value for each of the ``n`` edges of
    the interface.
    """

    n: int
    psi: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.n < 8 or self.n % 2:
            raise ValueError(f"need an even number of cells >= 8, got {self.n}")
        psi = np.zeros(self.n) if self.psi is None else np.asarray(self.psi, dtype=float)
        if psi.shape != (self.n,):
            raise ValueError(f"psi must have one entry per crack edge, got shape {psi.shape}")
        if np.any(psi < 0.0):
            raise ValueError("memory values must be nonnegative")
        object.__setattr__(self, "psi", psi)

    @property
    def spacing(self) -> float:
        return 1.0 / self.n

    def with_psi(self, psi) -> "Grid2D":
        return Grid2D(self.n, np.asarray(psi, dtype=float).copy())


@dataclass(frozen=True, eq=False)
class Field2D:
    """Nodal values on the duplicated mesh, split at the crack row.

    ``lower`` has rows ``y = 0 .. 1/2`` (last row is the bottom lip) and
    ``upper`` rows ``y = 1/2 .. 1`` (first row is the top lip); both have
    shape ``(n/2 + 1, n + 1)``.
    """

    grid: Grid2D
    lower: np.ndarray
    upper: np.ndarray

    def nodal_jumps(self) -> np.ndarray:
        return self.upper[0] - self.lower[-1]

    def edge_jumps(self) -> np.ndarray:
        j = self.nodal_jumps()
        return 0.5 * (j[:-1] + j[1:])

    def edge_bulk(self) -> float:
        mesh = _mesh(self.grid.n)
        u = np.concatenate([self.lower.ravel(), self.upper.ravel()])
        d = u[mesh.edge_p] - u[mesh.edge_q]
        return float(np.dot(mesh.edge_w, d * d))

    def to_text(self) -> str:
        stacked = np.vstack([self.upper[::-1], self.lower[::-1]])
        lines = (" ".join(f"{v:.12g}" for v in row) for row in stacked)
        return "\n".join(lines) + "\n"


def write_field(f: Field2D, path) -> None:
    with open(path, "w") as fh:
        fh.write(f.to_text())


@dataclass(frozen=True, eq=False)
class _Mesh:
    n: int
    m: int
    total: int
    edge_p: np.ndarray
    edge_q: np.ndarray
    edge_w: np.ndarray
    bottom: np.ndarray
    top: np.ndarray
    blip: np.ndarray
    tlip: np.ndarray
    lip_index: np.ndarray


@lru_cache(maxsize=8)
def _mesh(n: int) -> _Mesh:
    m = n // 2
    cols = n + 1
    n_low = (m + 1) * cols

    jj = np.arange(m + 1)[:, None]
    i_edge = np.arange(n)[None, :]
    i_node = np.arange(cols)[None, :]
    col_w = np.where((np.arange(cols) == 0) | (np.arange(cols) == n), 0.5, 1.0)

    # Lower block: rows y = 0 .. 1/2, last row is the bottom lip.
    p_lh = (jj * cols + i_edge).ravel()
    w_lh = np.broadcast_to(np.where((jj == 0) | (jj == m), 0.5, 1.0), (m + 1, n)).ravel()
    jv = np.arange(m)[:, None]
    p_lv = (jv * cols + i_node).ravel()
    w_lv = np.broadcast_to(col_w, (m, cols)).ravel()

    # Upper block: rows y = 1/2 .. 1, first row is the top lip.
    p_uh = (n_low + jj * cols + i_edge).ravel()
    w_uh = w_lh
    p_uv = (n_low + jv * cols + i_node).ravel()
    w_uv = w_lv

    edge_p = np.concatenate([p_lh, p_lv, p_uh, p_uv])
    edge_q = np.concatenate([p_lh + 1, p_lv + cols, p_uh + 1, p_uv + cols])
    edge_w = np.concatenate([w_lh, w_lv, w_uh, w_uv])

    blip = m * cols + np.arange(cols)
    tlip = n_low + np.arange(cols)
    lip_index = np.full(2 * n_low, -1)
    lip_index[tlip] = np.arange(cols)
    return _Mesh(
        n=n,
        m=m,
        total=2 * n_low,
        edge_p=edge_p,
        edge_q=edge_q,
        edge_w=edge_w,
        bottom=np.arange(cols),
        top=n_low + (n - m) * cols + np.arange(cols),
        blip=blip,
        tlip=tlip,
        lip_index=lip_index,
    )


@dataclass(eq=False)
class _System:
    mesh: _Mesh
    index: np.ndarray    # node -> unknown id, -1 where Dirichlet (via representative)
    fsign: np.ndarray    # node -> Dirichlet sign (+1 top, -1 bottom, 0 free)
    rep: np.ndarray
    matrix: object
    n_unknowns: int
    # per-edge reduced data
    ip: np.ndarray
    iq: np.ndarray
    sp: np.ndarray
    sq: np.ndarray
    jp: np.ndarray
    jq: np.ndarray
    lu: object = None


@lru_cache(maxsize=96)
def _system(n: int, tied: tuple) -> _System:
    """Reduced SPD system for a tie pattern over the lip pairs.

    ``tied[i]`` merges the lip pair at node ``i`` into one unknown; the
    AM path uses the all-tied pattern and reintroduces the jump as a
    right-hand-side offset through ``jp``/``jq``.
    """
    mesh = _mesh(n)
    rep = np.arange(mesh.total)
    tied_arr = np.asarray(tied, dtype=bool)
    rep[mesh.tlip[tied_arr]] = mesh.blip[tied_arr]

    fsign = np.zeros(mesh.total)
    fsign[mesh.bottom] = -1.0
    fsign[mesh.top] = 1.0

    free = (rep == np.arange(mesh.total)) & (fsign == 0.0)
    index = np.full(mesh.total, -1)
    index[free] = np.arange(int(free.sum()))

    rp = rep[mesh.edge_p]
    rq = rep[mesh.edge_q]
    ip, iq = index[rp], index[rq]
    sp, sq = fsign[rp], fsign[rq]
    w = mesh.edge_w

    both = (ip >= 0) & (iq >= 0)
    pu = (ip >= 0) & (iq < 0)
    qu = (ip < 0) & (iq >= 0)
    rows = np.concatenate([ip[both], iq[both], ip[both], iq[both], ip[pu], iq[qu]])
    cols_ = np.concatenate([ip[both], iq[both], iq[both], ip[both], ip[pu], iq[qu]])
    vals = np.concatenate([w[both], w[both], -w[both], -w[both], w[pu], w[qu]])
    k = int(free.sum())
    matrix = coo_matrix((vals, (rows, cols_)), shape=(k, k)).tocsc()

    return _System(
        mesh=mesh,
        index=index,
        fsign=fsign,
        rep=rep,
        matrix=matrix,
        n_unknowns=k,
        ip=ip,
        iq=iq,
        sp=sp,
        sq=sq,
        jp=mesh.lip_index[mesh.edge_p],
        jq=mesh.lip_index[mesh.edge_q],
        lu=None,
    )


def _solve_system(
    sys_: _System,
    t: float,
    offsets: np.ndarray | None,
    lip_rhs: np.ndarray | None = None,
) -> np.ndarray:
    """Solve the reduced system; returns values on every (duplicated) node.

    ``offsets`` are nodal jump values when lip pairs are tied with a
    prescribed jump (the AM elastic half-step); ``None`` means plain ties.
    ``lip_rhs`` adds an antisymmetric nodal load on untied lip pairs
    (pulled off the top lip, pushed onto the bottom one), which is how a
    linear surface-slope term enters the stationarity system.
    """
    mesh, w = sys_.mesh, sys_.mesh.edge_w
    if offsets is None:
        o = np.zeros(len(w))
    else:
        o = np.where(sys_.jp >= 0, offsets[sys_.jp], 0.0) - np.where(
            sys_.jq >= 0, offsets[sys_.jq], 0.0
        )

    rhs = np.zeros(sys_.n_unknowns)
    both = (sys_.ip >= 0) & (sys_.iq >= 0)
    pu = (sys_.ip >= 0) & (sys_.iq < 0)
    qu = (sys_.ip < 0) & (sys_.iq >= 0)
    np.add.at(rhs, sys_.ip[both], -(w * o)[both])
    np.add.at(rhs, sys_.iq[both], (w * o)[both])
    np.add.at(rhs, sys_.ip[pu], (w * (sys_.sq * t - o))[pu])
    np.add.at(rhs, sys_.iq[qu], (w * (sys_.sp * t + o))[qu])
    if lip_rhs is not None:
        top_ids = sys_.index[sys_.rep[mesh.tlip]]
        bot_ids = sys_.index[sys_.rep[mesh.blip]]
        mask = top_ids >= 0
        np.add.at(rhs, top_ids[mask], -lip_rhs[mask])
        mask = bot_ids >= 0
        np.add.at(rhs, bot_ids[mask], lip_rhs[mask])

    if sys_.lu is None:
        sys_.lu = splu(sys_.matrix)
    x = sys_.lu.solve(rhs)
    scale = max(1.0, abs(t), float(np.abs(rhs).max(initial=0.0)))
    r = rhs - sys_.matrix @ x
    if float(np.abs(r).max(initial=0.0)) > 1e-13 * scale:
        x = x + sys_.lu.solve(r)
        r = rhs - sys_.matrix @ x
    if float(np.abs(r).max(initial=0.0)) > RESIDUAL_TOL * scale:
        raise PlanarNumericError(
            f"linear solve residual {np.abs(r).max():.3g} exceeds {RESIDUAL_TOL:g}"
        )

    vals = sys_.fsign * t
    red = sys_.index[sys_.rep]
    mask = red >= 0
    vals[mask] = x[red[mask]]
    if offsets is not None:
        vals[mesh.tlip] = vals[mesh.blip] + offsets
    return vals


def _split(mesh: _Mesh, vals: np.ndarray):
    cols = mesh.n + 1
    n_low = (mesh.m + 1) * cols
    lower = vals[:n_low].reshape(mesh.m + 1, cols)
    upper = vals[n_low:].reshape(mesh.m + 1, cols)
    return lower, upper


def solve_elastic(grid: Grid2D, open_edges, t: float) -> Field2D:
    """Minimize the quadratic form with the given crack edges open.

    A closed edge ties the lip values at both its endpoints, so a lip
    node jumps only when every incident crack edge is open.  The reduced
    system is SPD and solved directly, with one refinement pass; the
    residual must come out below ``1e-10``.
    """
    n = grid.n
    open_set = frozenset(int(e) for e in open_edges)
    if any(e < 0 or e >= n for e in open_set):
        raise ValueError(f"crack edges must lie in [0, {n}), got {sorted(open_set)}")
    tied = np.zeros(n + 1, dtype=bool)
    for e in range(n):
        if e not in open_set:
            tied[e] = True
            tied[e + 1] = True
    sys_ = _system(n, tuple(tied.tolist()))
    vals = _solve_system(sys_, t, None)
    lower, upper = _split(sys_.mesh, vals)
    return Field2D(grid=grid, lower=lower.copy(), upper=upper.copy())


def cellwise_bulk(f: Field2D, density=None) -> float:
    """Cell-quadrature bulk integral of ``density(|grad u|)``.

    The gradient is averaged from the four cell edges; ``density=None``
    means the plain Dirichlet integrand ``|grad u|^2``.  Used for the
    size-rescaled reporting, with the same quadrature applied to both
    the cohesive state and its elastic reference so gaps are comparable.
    """
    h = f.grid.spacing
    total = 0.0
    for block in (f.lower, f.upper):
        dx = np.diff(block, axis=1)
        gx = 0.5 * (dx[:-1, :] + dx[1:, :]) / h
        dy = np.diff(block, axis=0)
        gy = 0.5 * (dy[:, :-1] + dy[:, 1:]) / h
        norm = np.hypot(gx, gy)
        vals = norm * norm if density is None else density(norm)
        total += float(np.sum(vals)) * h * h
    return total


@dataclass(frozen=True)
class SweepResult:
    best_length: float
    best_index: int
    lengths: np.ndarray
    bulk: np.ndarray
    surface: np.ndarray
    total: np.ndarray


def prefix_crack_sweep(grid: Grid2D, t: float, laws: RescaledLaws, mode: str = "cohesive") -> SweepResult:
    """Scan prefix cracks ``l = k/n`` and return the optimal one.

    For each length the bulk is the tied elastic optimum, so it is
    exactly nonincreasing in ``l`` (open sets nest).  Griffith surface
    counts fresh edge length only; the cohesive one pays
    ``phi(opening v psi)`` per edge.  Ties resolve to the smaller crack.
    """
    if mode not in ("cohesive", "griffith"):
        raise ValueError(f"unknown mode {mode!r}")
    n = grid.n
    delta = grid.spacing
    lengths = np.arange(n + 1) * delta
    bulk = np.empty(n + 1)
    surface = np.empty(n + 1)
    for k in range(n + 1):
        f = solve_elastic(grid, range(k), t)
        bulk[k] = laws.bulk_weight * f.edge_bulk()
        if mode == "griffith":
            fresh = int(np.sum(grid.psi[:k] == 0.0))
            surface[k] = laws.surface_weight * delta * fresh
        else:
            opening = np.zeros(n)
            opening[:k] = np.abs(f.edge_jumps()[:k])
            surface[k] = laws.surface_weight * delta * float(
                np.sum(laws.phi(np.maximum(opening, grid.psi)))
            )
    total = bulk + surface
    best = 0
    for k in range(1, n + 1):
        if total[k] < total[best] - 1e-12:
            best = k
    return SweepResult(
        best_length=float(lengths[best]),
        best_index=best,
        lengths=lengths,
        bulk=bulk,
        surface=surface,
        total=total,
    )


def _am_total(grid: Grid2D, psi: np.ndarray, laws: RescaledLaws, lower, upper) -> float:
    mesh = _mesh(grid.n)
    u = np.concatenate([lower.ravel(), upper.ravel()])
    d = u[mesh.edge_p] - u[mesh.edge_q]
    bulk = laws.bulk_weight * float(np.dot(mesh.edge_w, d * d))
    j = upper[0] - lower[-1]
    opening = 0.5 * (np.abs(j[:-1]) + np.abs(j[1:]))
    surf = laws.surface_weight * grid.spacing * float(
        np.sum(laws.phi(np.maximum(opening, psi)))
    )
    return bulk + surf


def _sweep_jumps(grid, psi, laws, lower, upper, jumps, t):
    """One Gauss-Seidel pass of exact per-node jump updates.

    At node ``i`` the pair (bottom lip, top lip) is minimized jointly:
    for fixed jump the quadratic part has a closed-form optimum, leaving
    a one-dimensional piecewise-smooth problem in the jump that the
    shared line search solves.  The current jump is always a candidate,
    so each update is nonincreasing.
    """
    n = grid.n
    delta = grid.spacing
    sw = laws.surface_weight
    phi = laws.phi
    sat = phi.saturation_opening
    brow, trow = lower[-1], upper[0]
    below, above = lower[-2], upper[1]

    for i in range(n + 1):
        wcol = 0.5 if i in (0, n) else 1.0
        wsum = wcol + 0.5 * (i > 0) + 0.5 * (i < n)
        vb = wcol * below[i]
        vt = wcol * above[i]
        if i > 0:
            vb += 0.5 * brow[i - 1]
            vt += 0.5 * trow[i - 1]
        if i < n:
            vb += 0.5 * brow[i + 1]
            vt += 0.5 * trow[i + 1]
        vb /= wsum
        vt /= wsum
        kappa = 0.5 * wsum  # w_b*w_t/(w_b+w_t) with equal sums
        d = vt - vb

        j_left = abs(jumps[i - 1]) if i > 0 else 0.0
        j_right = abs(jumps[i + 1]) if i < n else 0.0
        psi_left = psi[i - 1] if i > 0 else 0.0
        psi_right = psi[i] if i < n else 0.0

        def local(x, d=d, j_left=j_left, j_right=j_right,
                  psi_left=psi_left, psi_right=psi_right, has_l=i > 0, has_r=i < n):
            s = np.zeros_like(x)
            if has_l:
                s = s + phi(np.maximum(0.5 * (np.abs(x) + j_left), psi_left))
            if has_r:
                s = s + phi(np.maximum(0.5 * (np.abs(x) + j_right), psi_right))
            return kappa * (x - d) ** 2 + sw * delta * s

        extras = [0.0, float(jumps[i]), d]
        for other, mem in ((j_left, psi_left), (j_right, psi_right)):
            if sat is not None:
                extras.extend([2.0 * sat - other, other - 2.0 * sat])
            if mem > 0.0:
                extras.extend([2.0 * mem - other, other - 2.0 * mem])
        radius = max(2.0 * abs(t), abs(d), abs(jumps[i])) + 1.0
        x_star, _ = line_search(local, -radius, radius, extras, n_grid=65)

        jumps[i] = x_star
        b = vb + 0.5 * (d - x_star)  # = (w_b*vb + w_t*(vt - x)) / (w_b + w_t)
        brow[i] = b
        trow[i] = b + x_star


def _phi_slopes(phi: CohesiveLaw, s: np.ndarray) -> np.ndarray:
    # one-sided from above at the Dugdale kink, so a saturated edge
    # contributes no restoring force
    if phi.kind is LawKind.DUGDALE:
        return np.where(s < phi.saturation_opening, phi.a, 0.0)
    return phi.a * np.exp(-phi.a * s)


def _pattern_step(grid, psi, laws, t, jumps):
    """Joint field/jump optimum of the current smooth branch, one solve.

    With the open/closed pattern and the jump signs frozen, the surface
    term is linear in the jumps (exactly so for the piecewise-linear
    law), so the stationary state solves the untied system with the
    slope loads on the lip pairs.  Gauss-Seidel alone crawls along these
    flat directions at a rate that degrades like 1/n^2; the caller
    adopts the trial only when it lowers the energy, which keeps the
    descent property regardless of how crude the frozen pattern is.
    """
    sign = np.sign(jumps)
    tied = sign == 0.0
    if tied.all():
        return None
    opening = 0.5 * (np.abs(jumps[:-1]) + np.abs(jumps[1:]))
    slopes = np.where(opening > psi, _phi_slopes(laws.phi, opening), 0.0)
    g = np.zeros(grid.n + 1)
    g[:-1] += 0.5 * slopes
    g[1:] += 0.5 * slopes
    g *= laws.surface_weight * grid.spacing * sign
    sys_ = _system(grid.n, tuple(tied.tolist()))
    vals = _solve_system(sys_, t, None, lip_rhs=g / (2.0 * laws.bulk_weight))
    lower, upper = _split(sys_.mesh, vals)
    return lower.copy(), upper.copy(), (upper[0] - lower[-1]).copy()


@dataclass(frozen=True, eq=False)
class AMResult:
    field: Field2D
    jumps: np.ndarray          # signed per-edge (midpoint) jumps
    nodal_jumps: np.ndarray
    energies: np.ndarray       # after every half-step, nonincreasing
    iterations: int


def alternate_minimize(
    grid: Grid2D,
    psi: np.ndarray | None,
    t: float,
    laws: RescaledLaws,
    start_jumps: np.ndarray | None = None,
    max_iters: int = 200,
    tol: float = 1e-10,
    target_energy: float | None = None,
) -> AMResult:
    """Relax field and interface jumps in turn until the energy settles.

    Both half-steps are exact partial minimizations (a tied SPD solve
    with jump offsets, then per-node joint lip updates), so the recorded
    energies are nonincreasing.  The result is stationary but not
    certified global; use the prefix sweep as an independent check when
    the expected pattern is monotone.  ``target_energy`` lets a caller
    that already holds a competitor value stop a descent early once it
    is matched; crack fronts advance one node per sweep, so runs racing
    a known optimum would otherwise burn hundreds of sweeps.
    """
    n = grid.n
    psi = grid.psi if psi is None else np.asarray(psi, dtype=float)
    if psi.shape != (n,) or np.any(psi < 0.0):
        raise ValueError("psi must be a nonnegative per-edge array")
    jumps = np.zeros(n + 1) if start_jumps is None else np.asarray(start_jumps, dtype=float).copy()
    if jumps.shape != (n + 1,):
        raise ValueError("start_jumps must give one value per lip node")

    sys_ = _system(n, tuple([True] * (n + 1)))
    energies = []
    prev = np.inf
    for it in range(max_iters):
        lower, upper = _split(sys_.mesh, _solve_system(sys_, t, jumps))
        lower, upper = lower.copy(), upper.copy()
        energies.append(_am_total(grid, psi, laws, lower, upper))
        _sweep_jumps(grid, psi, laws, lower, upper, jumps, t)
        e = _am_total(grid, psi, laws, lower, upper)
        energies.append(e)
        trial = _pattern_step(grid, psi, laws, t, jumps)
        if trial is not None:
            t_lower, t_upper, t_jumps = trial
            e_acc = _am_total(grid, psi, laws, t_lower, t_upper)
            if e_acc < e:
                jumps[:] = t_jumps
                e = e_acc
                energies.append(e)
        matched = target_energy is not None and (
            e <= target_energy + max(10.0 * tol, 1e-8 * (1.0 + abs(target_energy)))
        )
        if prev - e < tol or matched:
            lower, upper = _split(sys_.mesh, _solve_system(sys_, t, jumps))
            energies.append(_am_total(grid, psi, laws, lower, upper))
            f = Field2D(grid=grid, lower=lower.copy(), upper=upper.copy())
            jn = f.nodal_jumps()
            return AMResult(
                field=f,
                jumps=0.5 * (jn[:-1] + jn[1:]),
                nodal_jumps=jn,
                energies=np.asarray(energies),
                iterations=it + 1,
            )
        prev = e
    raise PlanarNonconvergence(last_energy=energies[-1], iterations=max_iters)


@dataclass(frozen=True, eq=False)
class TearingStep:
    time: float
    field: Field2D
    jumps: np.ndarray
    psi: np.ndarray
    energy: float


def evolve_tearing(
    grid: Grid2D,
    times,
    laws: RescaledLaws,
    psi0: np.ndarray | None = None,
    max_iters: int = 400,
    tol: float = 1e-10,
) -> list[TearingStep]:
    """Incremental tearing evolution driven by alternate minimization.

    Each step restarts AM from the fully torn state, from the elastic
    solution with the memory edges open, from the previous jumps, and
    from zero, keeping the lowest energy; the memory then absorbs the
    new edge openings.  This is the honest local scheme: no global
    certificate, but competing starts catch the coarse branch switches.
    A start that stalls against the sweep budget is dropped as long as
    another one converged: crack fronts move one node per sweep, so a
    run racing an already-found optimum can legitimately time out.
    """
    psi = (grid.psi if psi0 is None else np.asarray(psi0, dtype=float)).copy()
    prev = None
    steps: list[TearingStep] = []
    for t in times:
        starts = [np.full(grid.n + 1, 2.0 * t)]
        mem = np.flatnonzero(psi > 0.0)
        if mem.size:
            starts.append(solve_elastic(grid, mem.tolist(), t).nodal_jumps())
        if prev is not None:
            starts.append(prev)
        starts.append(np.zeros(grid.n + 1))
        best = None
        stalled = None
        for s in starts:
            tgt = None if best is None else float(best.energies[-1])
            try:
                res = alternate_minimize(grid, psi, t, laws, start_jumps=s,
                                         max_iters=max_iters, tol=tol,
                                         target_energy=tgt)
            except PlanarNonconvergence as exc:
                stalled = exc
                continue
            if best is None or res.energies[-1] < best.energies[-1] - 1e-12:
                best = res
        if best is None:
            raise stalled
        jn = best.nodal_jumps
        opening = 0.5 * (np.abs(jn[:-1]) + np.abs(jn[1:]))
        psi = np.maximum(psi, opening)
        prev = jn
        steps.append(TearingStep(time=float(t), field=best.field, jumps=best.jumps,
                                 psi=psi.copy(), energy=float(best.energies[-1])))
    return steps


def tearing_gap_ladder(
    base_law,
    alpha: float,
    h_list,
    n: int,
    crack_length: float,
    gamma: float,
    times,
) -> np.ndarray:
    """Normalized bulk gap to the cracked elastic reference, per size.

    The initial crack is the prefix of the given length with uniform
    memory ``gamma``.  For each ``h`` the tearing evolution runs with
    the rescaled laws and the reported bulk is the cell quadrature of
    the rescaled density; the reference is the elastic solve with the
    memory edges open, same quadrature, which scales as ``t^2``.
    """
    h_list = [float(h) for h in h_list]
    k = int(round(crack_length * n))
    psi0 = np.zeros(n)
    psi0[:k] = gamma
    grid = Grid2D(n, psi0)
    ref1 = cellwise_bulk(solve_elastic(grid, range(k), 1.0))
    gaps = np.empty(len(h_list))
    for row, h in enumerate(h_list):
        laws = rescale_laws(base_law, base_law.a, h, alpha)
        steps = evolve_tearing(grid, times, laws)
        gap = 0.0
        for st in steps:
            reported = laws.bulk_weight * cellwise_bulk(st.field, laws.bulk)
            gap = max(gap, abs(reported - st.time**2 * ref1))
        gaps[row] = gap
    return gaps
