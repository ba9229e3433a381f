"""De Branges-Rovnyak kernel of a self-map and estimation of its supremum.

For a holomorphic self-map phi of the disc, the kernel is

    k(z, w) = (1 - phi(z) conj(phi(w))) / (1 - z conj(w)).

Whether sup |k| over the bidisc is finite is the hypothesis the composition
bound needs.  The search works on the distinguished boundary: |k| is the
modulus of a function holomorphic in z and anti-holomorphic in w, so its
supremum over the closed bidisc is attained on the torus times torus part of
the boundary.  That reduction is a documented mathematical assumption of the
search; a random interior sample guards it.

On the boundary diagonal z = w = zeta the raw quotient is 0/0 whenever
|phi(zeta)| = 1; there the radial limit

    k(r zeta, r zeta) = (1 - |phi(r zeta)|^2) / (1 - r^2)  ->  |phi'(zeta)|

is used instead (the limit exists and equals the angular-derivative modulus
for C^1 self-maps with boundary contact).  Where there is no contact the
diagonal limit is genuinely infinite; the search approaches it through
off-diagonal grid points and reports divergence once the running maximum
blows past the threshold with sustained growth.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, ParamError, SingularKernelError, SymbolError
from .symbols import BoundaryPoint, Polynomial, Symbol, contact_indicator

TWO_PI = 2.0 * np.pi

#: |1 - z conj(w)| below this is treated as "on the boundary diagonal"
MIN_DENOMINATOR = 1e-13


@dataclass(frozen=True)
class KernelEvaluator:
    """Callable wrapper binding a verified symbol to its kernel."""

    symbol: Symbol

    def __post_init__(self):
        if isinstance(self.symbol, Polynomial) and not self.symbol.verified:
            raise SymbolError("kernel evaluation needs a verified polynomial symbol")

    def __call__(self, z, w):
        return eval_kernel(self.symbol, z, w)


def eval_kernel(symbol: Symbol, z, w, min_denominator: float = MIN_DENOMINATOR):
    """k(z, w) for points of the closed bidisc off the boundary diagonal."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    den = 1.0 - z * np.conj(w)
    if np.any(np.abs(den) <= min_denominator):
        raise SingularKernelError(
            "kernel evaluation too close to the boundary diagonal (|1 - z conj(w)| underflow)"
        )
    out = (1.0 - symbol.value(z) * np.conj(symbol.value(w))) / den
    return out if out.shape else complex(out)


def _neville_to_zero(hs, table):
    """Polynomial extrapolation of table(h) to h = 0 along axis 0.

    Returns (limit, last_correction) per trailing index.
    """
    tab = [np.asarray(row, dtype=float) for row in table]
    for m in range(1, len(tab)):
        for i in range(len(tab) - 1, m - 1, -1):
            tab[i] = tab[i] + (tab[i] - tab[i - 1]) * hs[i] / (hs[i - m] - hs[i])
    return tab[-1], np.abs(tab[-1] - tab[-2])


_DEFAULT_EXTRAP_H = 0.2 * 0.5 ** np.arange(9)


def _diag_values_batch(symbol: Symbol, angles, stab_tol=1e-8):
    """Radial-limit extrapolation of k(r zeta, r zeta) for a batch of angles.

    Returns (values, ok) where ok flags angles whose extrapolation stabilized
    and (for exact-contact angles) agrees with |phi'(zeta)|.  Where the
    cross-check confirms the angular-derivative closed form, that exact value
    replaces the extrapolant (it has no h -> 0 amplification noise).
    """
    angles = np.atleast_1d(np.asarray(angles, dtype=float))
    zeta = np.exp(1j * angles)
    hs = _DEFAULT_EXTRAP_H
    rs = 1.0 - hs
    rows = [
        (1.0 - np.abs(symbol.value(r * zeta)) ** 2) / (1.0 - r * r) for r in rs
    ]
    limit, corr = _neville_to_zero(hs, rows)
    scale = np.maximum(1.0, np.abs(limit))
    ok = corr <= stab_tol * scale
    exact_contact = 1.0 - np.abs(symbol.value(zeta)) <= 1e-12
    dmod = np.abs(symbol.deriv(zeta))
    confirmed = exact_contact & (np.abs(limit - dmod) <= 1e-6 * np.maximum(1.0, dmod))
    ok &= ~exact_contact | confirmed
    return np.where(confirmed, dmod, limit), ok


def diagonal_boundary_value(
    symbol: Symbol,
    point: BoundaryPoint,
    radii=None,
    contact_tol: float = 1e-6,
    stab_tol: float = 1e-8,
) -> float:
    """Radial limit of k(r zeta, r zeta) at a boundary-contact point.

    The sequence (1-|phi(r zeta)|^2)/(1-r^2) is extrapolated to r = 1; for a
    contact point of a C^1 symbol the limit equals |phi'(zeta)|, and that
    closed form is used as a cross-check.  Raises ConvergenceError when the
    radial sequence does not stabilize (in particular when zeta is not an
    actual contact point, where the limit is infinite).
    """
    angle = point.angle if isinstance(point, BoundaryPoint) else float(point)
    zeta = np.exp(1j * angle)
    gap = float(1.0 - np.abs(symbol.value(np.asarray(zeta))))
    if gap > contact_tol:
        raise ParamError(
            f"angle {angle:.6g} is not a boundary-contact candidate (1 - |phi| = {gap:.3e})"
        )
    if radii is None:
        limit, ok = _diag_values_batch(symbol, [angle], stab_tol=stab_tol)
        if not ok[0]:
            raise ConvergenceError(
                f"radial diagonal extrapolation did not stabilize at angle {angle:.6g}",
                partial=float(limit[0]),
            )
        return float(limit[0])
    radii = np.asarray(radii, dtype=float)
    if radii.ndim != 1 or len(radii) < 3 or np.any(np.diff(radii) <= 0) or radii[-1] >= 1:
        raise ParamError("radii must be an increasing sequence of length >= 3 inside (0, 1)")
    hs = 1.0 - radii[::-1]
    rows = [
        np.atleast_1d((1.0 - np.abs(symbol.value(r * zeta)) ** 2) / (1.0 - r * r))
        for r in radii[::-1]
    ]
    limit, corr = _neville_to_zero(hs, rows)
    if corr[0] > stab_tol * max(1.0, abs(limit[0])):
        raise ConvergenceError(
            f"radial diagonal extrapolation did not stabilize at angle {angle:.6g}",
            partial=float(limit[0]),
        )
    return float(limit[0])


def closed_form_sup(symbol: Symbol) -> float:
    """Exact sup |k| for the catalog subset with a closed form.

    Identity and rotations give 1; a disc automorphism with parameter a gives
    (1+|a|)/(1-|a|); z^k factors the kernel into a geometric sum of k terms
    with supremum k.
    """
    from .symbols import Identity, MobiusAuto, Monomial, Rotation

    if isinstance(symbol, (Identity, Rotation)):
        return 1.0
    if isinstance(symbol, MobiusAuto):
        return (1.0 + abs(symbol.a)) / (1.0 - abs(symbol.a))
    if isinstance(symbol, Monomial):
        return float(symbol.k)
    raise ParamError(f"no closed-form supremum for {symbol.describe()}")


class Verdict(enum.Enum):
    BOUNDED = "Bounded"
    UNBOUNDED = "Unbounded"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class SupSearchSettings:
    """Grid search parameters for the kernel supremum estimate."""

    initial_grid: int = 256
    local_grid: int = 33  # odd, so refinement windows keep their center
    max_refinements: int = 12
    divergence_threshold: float = 1e6
    growth_factor: float = 2.0
    stabilization_rel_tol: float = 1e-8
    contact_tol: float = 1e-6
    interior_samples: int = 1000
    interior_rel_margin: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if self.initial_grid < 16:
            raise ParamError("initial grid too small")
        if self.local_grid < 5 or self.local_grid % 2 == 0:
            raise ParamError("local grid must be odd and >= 5")
        if self.growth_factor <= 1.0:
            raise ParamError("growth factor must exceed 1")


DEFAULT_SUP_SETTINGS = SupSearchSettings()


@dataclass(frozen=True)
class SupEstimate:
    """Result of the supremum search.

    ``value`` is +inf for an Unbounded verdict; ``boundary_max`` is the last
    finite running maximum either way.  ``trace`` lists (effective grid size,
    running max) per refinement and is nondecreasing in the max.
    """

    value: float
    argmax: tuple  # (BoundaryPoint, BoundaryPoint)
    trace: tuple  # ((grid, running_max), ...)
    verdict: Verdict
    boundary_max: float
    interior_max: float | None = None


def _kernel_grid(symbol: Symbol, alphas, gammas, contact_tol):
    """|k| over the outer product of boundary angle vectors.

    Numerator and denominator share the complex-difference float path, so
    structurally equal symbols (the identity) give exactly 1.  Exact-diagonal
    cells are replaced by the radial extrapolation at contact angles and
    skipped elsewhere (their neighbors carry the blow-up).
    """
    za = np.exp(1j * alphas)
    zg = np.exp(1j * gammas)
    pa = symbol.value(za)
    pg = symbol.value(zg)
    num = np.abs(1.0 - pa[:, None] * np.conj(pg)[None, :])
    den = np.abs(1.0 - za[:, None] * np.conj(zg)[None, :])
    on_diag = den < MIN_DENOMINATOR
    vals = np.zeros_like(num)
    np.divide(num, den, out=vals, where=~on_diag)
    if on_diag.any():
        ii, jj = np.nonzero(on_diag)
        diag_angles = alphas[ii]
        contact = contact_indicator(symbol, diag_angles, contact_tol)
        if contact.any():
            limits, ok = _diag_values_batch(symbol, diag_angles[contact])
            fill = np.where(ok, limits, 0.0)
            vals[ii[contact], jj[contact]] = fill
    return vals


def estimate_sup(symbol: Symbol, settings: SupSearchSettings = DEFAULT_SUP_SETTINGS) -> SupEstimate:
    """Estimate sup |k| over the bidisc by boundary grid search with local zoom.

    A uniform grid on the two boundary angles is followed by repeated zooms
    around the running argmax (window = one grid spacing, regridded).  The
    running maximum is nondecreasing by construction.  Verdicts:

    * Bounded: the running maximum stabilized (successive relative change
      within stabilization_rel_tol) and no interior sample beats it beyond
      the interior margin.
    * Unbounded: the running maximum exceeds divergence_threshold and still
      grew by at least growth_factor in the last zoom.
    * Inconclusive: neither rule fired within max_refinements, or the
      interior sanity check failed.
    """
    n0 = settings.initial_grid
    alphas = TWO_PI * np.arange(n0) / n0
    vals = _kernel_grid(symbol, alphas, alphas, settings.contact_tol)
    flat = int(np.argmax(vals))
    i, j = np.unravel_index(flat, vals.shape)
    best = float(vals[i, j])
    arg = (float(alphas[i]), float(alphas[j]))
    spacing = TWO_PI / n0
    trace = [(n0, best)]
    verdict = Verdict.INCONCLUSIVE

    for _ in range(settings.max_refinements):
        a0, g0 = arg
        local_a = np.linspace(a0 - spacing, a0 + spacing, settings.local_grid)
        local_g = np.linspace(g0 - spacing, g0 + spacing, settings.local_grid)
        lv = _kernel_grid(symbol, local_a, local_g, settings.contact_tol)
        flat = int(np.argmax(lv))
        li, lj = np.unravel_index(flat, lv.shape)
        prev = best
        if float(lv[li, lj]) > best:
            best = float(lv[li, lj])
            arg = (float(local_a[li]), float(local_g[lj]))
        spacing = 2.0 * spacing / (settings.local_grid - 1)
        trace.append((int(round(TWO_PI / spacing)), best))
        if (
            best > settings.divergence_threshold
            and prev > 0
            and best / prev >= settings.growth_factor
        ):
            verdict = Verdict.UNBOUNDED
            break
        if prev > 0 and (best - prev) / prev <= settings.stabilization_rel_tol:
            verdict = Verdict.BOUNDED
            break

    interior_max = None
    if verdict is Verdict.BOUNDED:
        rng = np.random.default_rng(settings.seed)
        z = _sample_disc(rng, settings.interior_samples)
        w = _sample_disc(rng, settings.interior_samples)
        interior = np.abs(
            (1.0 - symbol.value(z) * np.conj(symbol.value(w))) / (1.0 - z * np.conj(w))
        )
        interior_max = float(np.max(interior))
        if interior_max > best * (1.0 + settings.interior_rel_margin):
            verdict = Verdict.INCONCLUSIVE

    return SupEstimate(
        value=float("inf") if verdict is Verdict.UNBOUNDED else best,
        argmax=(BoundaryPoint(arg[0]), BoundaryPoint(arg[1])),
        trace=tuple(trace),
        verdict=verdict,
        boundary_max=best,
        interior_max=interior_max,
    )


def _sample_disc(rng, count, max_radius=0.999):
    radius = max_radius * np.sqrt(rng.uniform(0.0, 1.0, size=count))
    angle = rng.uniform(0.0, TWO_PI, size=count)
    return radius * np.exp(1j * angle)


def pointwise_kernel_identity_check(symbol: Symbol, sample_count: int = 10000, seed: int = 0):
    """Max deviation of |1 - phi(z) conj(phi(w))| from |k| |1 - z conj(w)|.

    The identity is algebraically exact; the returned maximum over random
    interior pairs is pure round-off.
    """
    rng = np.random.default_rng(seed)
    z = _sample_disc(rng, sample_count)
    w = _sample_disc(rng, sample_count)
    den = 1.0 - z * np.conj(w)
    num = 1.0 - symbol.value(z) * np.conj(symbol.value(w))
    k = num / den
    return float(np.max(np.abs(np.abs(num) - np.abs(k) * np.abs(den))))
