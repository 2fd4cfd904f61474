"""Cohesive laws, the relaxed bulk density, and their size rescalings.

A cohesive law ``phi`` maps an opening ``s >= 0`` to a surface energy
density in ``[0, 1]``.  Admissible laws are increasing and concave with
``phi(0) = 0``, finite initial slope ``a = phi'(0)`` and ``sup phi = 1``;
concavity gives ``phi(s) <= a*s``.  Two families are provided:

* Dugdale:      ``phi(s) = min(a*s, 1)``
* Exponential:  ``phi(s) = 1 - exp(-a*s)``

The matching bulk density ``f`` is quadratic up to ``|xi| = a/2`` and
affine with slope ``a`` beyond; it is the convex relaxation of
``min(|xi|^2, a*|xi|)``-type competition between elastic strain and
diffuse micro-jumps, and satisfies ``f(xi) <= |xi|^2`` and
``f(xi) >= a*|xi| - a^2/4``.

``rescale_laws`` produces the laws seen on a unit reference body after a
domain of diameter ``h`` with boundary-datum exponent ``alpha`` is pulled
back to it.  Both families are closed under that rescaling: the opening
dilation ``s -> h**alpha * s`` turns a law of slope ``a`` into the same
kind of law with slope ``a * h**alpha``, and the bulk density keeps its
shape with slope ``a * h**(1-alpha)``.  The weights attached to the bulk,
surface and Cantor terms depend on where ``alpha`` sits relative to the
critical exponent 1/2.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "LawKind",
    "CohesiveLaw",
    "BulkDensity",
    "RescaledLaws",
    "phi_eval",
    "bulk_eval",
    "rescale_laws",
    "relax_bulk_oracle",
]


class LawKind(enum.Enum):
    DUGDALE = "dugdale"
    EXPONENTIAL = "exponential"


def _as_checked_opening(s):
    arr = np.asarray(s, dtype=float)
    if np.any(arr < 0.0):
        raise ValueError("opening must be nonnegative")
    return arr


@dataclass(frozen=True)
class CohesiveLaw:
    """Surface energy density of a single cohesive interface.

    ``a`` is the initial slope phi'(0); it must be positive and finite.
    Instances are immutable and evaluate vectorized.
    """

    kind: LawKind
    a: float

    def __post_init__(self):
        # accept the enum value string; anything else must not fall
        # through to one branch of the kind dispatch silently
        if not isinstance(self.kind, LawKind):
            object.__setattr__(self, "kind", LawKind(self.kind))
        if not (self.a > 0.0 and math.isfinite(self.a)):
            raise ValueError(f"initial slope must be positive and finite, got {self.a}")

    def __call__(self, s):
        arr = _as_checked_opening(s)
        if self.kind is LawKind.DUGDALE:
            out = np.minimum(self.a * arr, 1.0)
        else:
            # expm1 keeps precision near s = 0
            out = -np.expm1(-self.a * arr)
        return out if out.ndim else float(out)

    @property
    def saturation_opening(self) -> float | None:
        """Opening past which phi is exactly 1, or None if never reached."""
        if self.kind is LawKind.DUGDALE:
            return 1.0 / self.a
        return None

    def kink_openings(self) -> tuple[float, ...]:
        # candidate breakpoints for 1d line searches over an opening
        if self.kind is LawKind.DUGDALE:
            return (1.0 / self.a,)
        return ()


@dataclass(frozen=True)
class BulkDensity:
    """Relaxed bulk energy density: quadratic core, affine tails of slope ``a``."""

    a: float

    def __post_init__(self):
        if not (self.a > 0.0 and math.isfinite(self.a)):
            raise ValueError(f"slope must be positive and finite, got {self.a}")

    @property
    def threshold(self) -> float:
        return 0.5 * self.a

    def __call__(self, xi):
        arr = np.abs(np.asarray(xi, dtype=float))
        thr = self.threshold
        out = np.where(arr <= thr, arr * arr, thr * thr + self.a * (arr - thr))
        return out if out.ndim else float(out)

    def deriv(self, xi):
        """f'(xi); the two branches match at the threshold, so f is C1."""
        arr = np.asarray(xi, dtype=float)
        out = np.clip(2.0 * arr, -self.a, self.a)
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class RescaledLaws:
    """Laws and term weights of a size-``h`` problem pulled back to the unit body.

    ``phi`` and ``bulk`` are already rescaled.  The energy of a pulled-back
    displacement field is::

        bulk_weight * integral f_h(grad v)
      + surface_weight * integral phi_h(|[v]| v psi)
      + cantor_weight * |D^c v|

    where the last term vanishes for the piecewise representations used by
    the discrete solvers but is reported for completeness.
    """

    h: float
    alpha: float
    base: CohesiveLaw
    phi: CohesiveLaw
    bulk: BulkDensity
    bulk_weight: float
    surface_weight: float
    cantor_weight: float


def phi_eval(law: CohesiveLaw, s):
    """Evaluate a cohesive law at opening(s) ``s`` (vectorized)."""
    return law(s)


def bulk_eval(f: BulkDensity, xi):
    """Evaluate the relaxed bulk density at strain(s) ``xi`` (vectorized)."""
    return f(xi)


def rescale_laws(law: CohesiveLaw, a: float, h: float, alpha: float) -> RescaledLaws:
    """Pull the laws of a body of diameter ``h`` back to the unit body.

    ``a`` is the initial slope of ``law`` (passed explicitly because it also
    sets the bulk slope and the Cantor weight).  ``h >= 1`` is the size ratio
    and ``alpha`` in (0, 2) the boundary-datum scaling exponent.  ``h = 1``
    returns identity weights regardless of ``alpha``.
    """
    if h < 1.0:
        raise ValueError(f"size ratio must satisfy h >= 1, got {h}")
    if not (0.0 < alpha < 2.0):
        raise ValueError(f"scaling exponent must lie in (0, 2), got {alpha}")
    phi_h = CohesiveLaw(law.kind, a * h**alpha)
    bulk_h = BulkDensity(a * h ** (1.0 - alpha))
    if alpha < 0.5:
        bw, sw, cw = 1.0, h ** (1.0 - 2.0 * alpha), a * h ** (1.0 - alpha)
    elif alpha == 0.5:
        bw, sw, cw = 1.0, 1.0, a * math.sqrt(h)
    else:
        bw, sw, cw = h ** (2.0 * alpha - 1.0), 1.0, a * h**alpha
    return RescaledLaws(
        h=h,
        alpha=alpha,
        base=law,
        phi=phi_h,
        bulk=bulk_h,
        bulk_weight=bw,
        surface_weight=sw,
        cantor_weight=cw,
    )


def plain_laws(law: CohesiveLaw) -> RescaledLaws:
    """Unit-size laws: all weights 1, Cantor weight equal to the law slope."""
    return rescale_laws(law, law.a, 1.0, 0.5)


def relax_bulk_oracle(
    base: Callable[[np.ndarray], np.ndarray],
    a: float,
    xi: float,
    grid_step: float = 1e-4,
) -> float:
    """Grid-search value of the infimal convolution of ``base`` with ``a*|.|``.

    Computes ``inf { base(x1) + a*|xi - x1| }`` by exhaustive search of
    ``x1`` over ``[-|xi|-a, |xi|+a]``.  For ``base(x) = x**2`` the result
    must agree with :class:`BulkDensity` up to O(grid_step * a); the grid
    search is kept deliberately independent of that closed form so it can
    certify it.
    """
    if grid_step <= 0.0:
        raise ValueError("grid_step must be positive")
    half = abs(xi) + a
    n = int(math.ceil(2.0 * half / grid_step)) + 1
    best = math.inf
    # chunked scan keeps memory flat for very fine grids
    chunk = 1_000_000
    for start in range(0, n, chunk):
        stop = min(start + chunk, n)
        x1 = -half + grid_step * np.arange(start, stop)
        vals = np.asarray(base(x1)) + a * np.abs(xi - x1)
        m = float(np.min(vals))
        if m < best:
            best = m
    return best
