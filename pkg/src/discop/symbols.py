"""Catalog of holomorphic self-maps of the unit disc.

Every variant carries a closed-form derivative and is C^1 on the closed
disc.  All variants except Polynomial are self-maps by construction; the
inner ones (identity, rotations, disc automorphisms, monomials, finite
Blaschke products) are unimodular on the whole unit circle, which the
boundary-contact machinery exploits.  Polynomial symbols must pass
:func:`verify_self_map` before they may be evaluated.

Evaluation is vectorized: ``value`` and ``deriv`` accept scalars or numpy
arrays of points in the closed disc.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ParamError, SymbolError

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class BoundaryPoint:
    """A point e^{i angle} on the unit circle; the angle is reduced mod 2*pi."""

    angle: float

    def __post_init__(self):
        object.__setattr__(self, "angle", float(self.angle) % TWO_PI)

    def to_complex(self) -> complex:
        return complex(np.exp(1j * self.angle))


class Symbol:
    """Base class; subclasses implement value/deriv and the inner flag."""

    #: True when |phi| == 1 identically on the unit circle (by construction).
    boundary_unimodular = False

    def value(self, z):
        raise NotImplementedError

    def deriv(self, z):
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Identity(Symbol):
    boundary_unimodular = True

    def value(self, z):
        return np.asarray(z, dtype=complex)

    def deriv(self, z):
        return np.ones_like(np.asarray(z, dtype=complex))

    def describe(self):
        return "identity"


@dataclass(frozen=True)
class Rotation(Symbol):
    """z -> e^{i angle} z."""

    angle: float
    boundary_unimodular = True

    def value(self, z):
        return np.exp(1j * self.angle) * np.asarray(z, dtype=complex)

    def deriv(self, z):
        z = np.asarray(z, dtype=complex)
        return np.full_like(z, np.exp(1j * self.angle))

    def describe(self):
        return f"rotation({self.angle:g})"


@dataclass(frozen=True)
class MobiusAuto(Symbol):
    """Disc automorphism z -> e^{i post_rotation} (a - z)/(1 - conj(a) z), |a| < 1."""

    a: complex
    post_rotation: float = 0.0
    boundary_unimodular = True

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        if abs(self.a) >= 1.0:
            raise ParamError(f"Mobius parameter must satisfy |a| < 1, got |a| = {abs(self.a):g}")

    def value(self, z):
        z = np.asarray(z, dtype=complex)
        return np.exp(1j * self.post_rotation) * (self.a - z) / (1.0 - np.conj(self.a) * z)

    def deriv(self, z):
        z = np.asarray(z, dtype=complex)
        return (
            np.exp(1j * self.post_rotation)
            * (abs(self.a) ** 2 - 1.0)
            / (1.0 - np.conj(self.a) * z) ** 2
        )

    def describe(self):
        return f"mobius(a={self.a:g}, rot={self.post_rotation:g})"


@dataclass(frozen=True)
class Monomial(Symbol):
    """z -> z^k, k >= 1."""

    k: int
    boundary_unimodular = True

    def __post_init__(self):
        if self.k < 1:
            raise ParamError("monomial symbol degree must be >= 1")

    def value(self, z):
        return np.asarray(z, dtype=complex) ** self.k

    def deriv(self, z):
        z = np.asarray(z, dtype=complex)
        return self.k * z ** (self.k - 1)

    def describe(self):
        return f"z^{self.k}"


@dataclass(frozen=True)
class FiniteBlaschke(Symbol):
    """Product of automorphism factors (a_j - z)/(1 - conj(a_j) z), all |a_j| < 1."""

    zeros: tuple
    post_rotation: float = 0.0
    boundary_unimodular = True

    def __post_init__(self):
        zeros = tuple(complex(a) for a in self.zeros)
        if not zeros:
            raise ParamError("a Blaschke product needs at least one factor")
        if any(abs(a) >= 1.0 for a in zeros):
            raise ParamError("all Blaschke zeros must satisfy |a| < 1")
        object.__setattr__(self, "zeros", zeros)

    def value(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.full_like(z, np.exp(1j * self.post_rotation))
        for a in self.zeros:
            out = out * (a - z) / (1.0 - np.conj(a) * z)
        return out

    def deriv(self, z):
        # product rule over the factors; each factor derivative is
        # (|a|^2 - 1)/(1 - conj(a) z)^2
        z = np.asarray(z, dtype=complex)
        factors = [(a - z) / (1.0 - np.conj(a) * z) for a in self.zeros]
        out = np.zeros_like(z)
        for j, a in enumerate(self.zeros):
            dj = (abs(a) ** 2 - 1.0) / (1.0 - np.conj(a) * z) ** 2
            rest = np.full_like(z, 1.0 + 0.0j)
            for m, f in enumerate(factors):
                if m != j:
                    rest = rest * f
            out = out + dj * rest
        return np.exp(1j * self.post_rotation) * out

    def describe(self):
        zs = ",".join(f"{a:g}" for a in self.zeros)
        return f"blaschke([{zs}], rot={self.post_rotation:g})"


def _horner(coeffs, z):
    z = np.asarray(z, dtype=complex)
    acc = np.full(z.shape, coeffs[-1], dtype=complex)
    for c in coeffs[-2::-1]:
        acc = acc * z + c
    return acc


@dataclass(frozen=True)
class Polynomial(Symbol):
    """Polynomial symbol; only usable after verify_self_map has set ``verified``."""

    coeffs: tuple
    verified: bool = False

    def __post_init__(self):
        coeffs = tuple(complex(c) for c in self.coeffs)
        if not coeffs:
            raise ParamError("a polynomial symbol needs at least one coefficient")
        object.__setattr__(self, "coeffs", coeffs)

    def value(self, z):
        if not self.verified:
            raise SymbolError("polynomial symbol was not verified as a self-map")
        return _horner(self.coeffs, z)

    def deriv(self, z):
        if not self.verified:
            raise SymbolError("polynomial symbol was not verified as a self-map")
        if len(self.coeffs) == 1:
            return np.zeros_like(np.asarray(z, dtype=complex))
        dcoeffs = tuple((n + 1) * c for n, c in enumerate(self.coeffs[1:]))
        return _horner(dcoeffs, z)

    def describe(self):
        cs = ",".join(f"{c:g}" for c in self.coeffs)
        return f"poly([{cs}])"


def eval_symbol(symbol: Symbol, z):
    """phi(z); raises SymbolError for unverified polynomial symbols."""
    return symbol.value(z)


def eval_symbol_deriv(symbol: Symbol, z):
    """phi'(z) from the closed form of the variant."""
    return symbol.deriv(z)


@dataclass(frozen=True)
class SelfMapCheck:
    """Outcome of a boundary scan of |phi|.

    ``symbol`` is the (verified) symbol to use downstream; ``boundary_contact``
    flags max |phi| >= 1 - tol, i.e. the symbol (nearly) touches the circle.
    """

    symbol: Symbol
    max_modulus: float
    worst_angle: BoundaryPoint
    boundary_contact: bool
    grid_size: int
    tol: float


def verify_self_map(symbol: Symbol, grid_size: int = 1024, tol: float = 1e-6) -> SelfMapCheck:
    """Check max_T |phi| <= 1 + tol on a uniform boundary grid.

    By the maximum principle the boundary grid bounds the modulus on the whole
    disc.  Raises SymbolError (with the offending angle) when the scan exceeds
    1 + tol; for polynomial symbols a passing scan returns a copy with the
    verified flag set.
    """
    if grid_size < 256:
        raise ParamError("self-map verification needs grid_size >= 256")
    theta = TWO_PI * np.arange(grid_size) / grid_size
    zeta = np.exp(1j * theta)
    if isinstance(symbol, Polynomial):
        mods = np.abs(_horner(symbol.coeffs, zeta))
    else:
        mods = np.abs(symbol.value(zeta))
    worst = int(np.argmax(mods))
    max_mod = float(mods[worst])
    if max_mod > 1.0 + tol:
        raise SymbolError(
            f"{symbol.describe()} is not a self-map: |phi| = {max_mod:.6g} at angle {theta[worst]:.6g}",
            angle=float(theta[worst]),
        )
    verified = replace(symbol, verified=True) if isinstance(symbol, Polynomial) else symbol
    return SelfMapCheck(
        symbol=verified,
        max_modulus=max_mod,
        worst_angle=BoundaryPoint(theta[worst]),
        boundary_contact=bool(max_mod >= 1.0 - tol),
        grid_size=grid_size,
        tol=tol,
    )


def contact_indicator(symbol: Symbol, angles, contact_tol: float = 1e-6):
    """Boolean mask of boundary angles where 1 - |phi| <= contact_tol."""
    if symbol.boundary_unimodular:
        return np.ones(np.shape(np.asarray(angles)), dtype=bool)
    zeta = np.exp(1j * np.asarray(angles, dtype=float))
    return 1.0 - np.abs(symbol.value(zeta)) <= contact_tol


# --- structured text form (used by the CLI config format) -----------------


def _complex_from_obj(obj, where):
    if isinstance(obj, (int, float)):
        return complex(obj)
    if isinstance(obj, dict) and set(obj) <= {"re", "im"}:
        return complex(float(obj.get("re", 0.0)), float(obj.get("im", 0.0)))
    raise ParamError(f"{where}: complex values must be numbers or {{'re':..,'im':..}} objects")


def symbol_from_spec(spec: dict) -> Symbol:
    """Build a symbol from its structured text form (field ``type`` selects the variant)."""
    if not isinstance(spec, dict) or "type" not in spec:
        raise ParamError("symbol spec must be an object with a 'type' field")
    kind = spec["type"]
    if kind == "identity":
        return Identity()
    if kind == "rotation":
        return Rotation(angle=float(spec["angle"]))
    if kind == "mobius":
        return MobiusAuto(
            a=_complex_from_obj(spec["a"], "symbol.a"),
            post_rotation=float(spec.get("post_rotation", 0.0)),
        )
    if kind == "monomial":
        return Monomial(k=int(spec["k"]))
    if kind == "blaschke":
        return FiniteBlaschke(
            zeros=tuple(_complex_from_obj(a, "symbol.zeros") for a in spec["zeros"]),
            post_rotation=float(spec.get("post_rotation", 0.0)),
        )
    if kind == "poly":
        return Polynomial(
            coeffs=tuple(_complex_from_obj(c, "symbol.coeffs") for c in spec["coeffs"])
        )
    raise ParamError(f"unknown symbol type {kind!r}")


def symbol_to_spec(symbol: Symbol) -> dict:
    """Inverse of symbol_from_spec (complex numbers as {'re','im'} objects)."""

    def c2d(c):
        return {"re": c.real, "im": c.imag}

    if isinstance(symbol, Identity):
        return {"type": "identity"}
    if isinstance(symbol, Rotation):
        return {"type": "rotation", "angle": symbol.angle}
    if isinstance(symbol, MobiusAuto):
        return {"type": "mobius", "a": c2d(symbol.a), "post_rotation": symbol.post_rotation}
    if isinstance(symbol, Monomial):
        return {"type": "monomial", "k": symbol.k}
    if isinstance(symbol, FiniteBlaschke):
        return {
            "type": "blaschke",
            "zeros": [c2d(a) for a in symbol.zeros],
            "post_rotation": symbol.post_rotation,
        }
    if isinstance(symbol, Polynomial):
        return {"type": "poly", "coeffs": [c2d(c) for c in symbol.coeffs]}
    raise ParamError(f"cannot serialize symbol {symbol!r}")
