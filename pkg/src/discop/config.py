"""Run configuration: parsing, validation, and family expansion.

A config is a single JSON object.  Complex numbers are written as
``{"re": x, "im": y}`` (plain numbers are accepted as reals).  Symbols use
the ``type`` field with variant-specific entries (see symbols module).
Function families are either an explicit list of coefficient lists, a
shorthand string such as ``"monomials:1..8"``, or an object naming one of
the shipped families:

* ``monomials``: z^n for n in start..stop,
* ``mobius-monomials``: powers of a disc automorphism (series extracted by
  circle sampling; exercises boundary contact),
* ``geometric``: partial geometric sums 1 + z + ... + z^k (slow coefficient
  decay).

Parameters are validated before any computation starts: the general window
when ``tau`` is given, the strict equal-weight window otherwise.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace

from .errors import ConfigError, ParamError
from .kernels import SupSearchSettings
from .norms import WeightParams, validate_main_theorem_params, validate_params
from .quadrature import QuadratureSettings
from .series import TruncatedPowerSeries, coefficients_of
from .symbols import MobiusAuto, Symbol, symbol_from_spec

COMMANDS = ("norm", "kernel-sup", "rank-check", "equivalence", "bound-check", "selfmap-check")

_NEEDS_SYMBOL = {"kernel-sup", "rank-check", "bound-check", "selfmap-check"}
_NEEDS_FAMILY = {"norm", "equivalence", "bound-check"}
_NEEDS_PARAMS = {"norm", "equivalence", "bound-check"}


@dataclass(frozen=True)
class RunConfig:
    """Validated inputs of one experiment run."""

    command: str
    symbol: Symbol | None = None
    family: tuple = ()  # ((label, TruncatedPowerSeries), ...)
    params: WeightParams | None = None
    quadrature: QuadratureSettings = field(default_factory=QuadratureSettings)
    sup_search: SupSearchSettings = field(default_factory=SupSearchSettings)
    selfmap_grid: int = 1024
    selfmap_tol: float = 1e-6
    stability_rel_tol: float = 0.02
    seed: int = 0
    out_dir: str | None = None


_FAMILY_RANGE = re.compile(r"^(?P<name>[a-z-]+):(?P<start>\d+)\.\.(?P<stop>\d+)$")


def _expand_named_family(name, start, stop, a=0.5 + 0.0j, order=48):
    if stop < start:
        raise ConfigError("family range is empty", field="family")
    if name == "monomials":
        return tuple(
            (f"z^{n}", TruncatedPowerSeries.monomial(n)) for n in range(start, stop + 1)
        )
    if name == "geometric":
        return tuple(
            (f"geom:{k}", TruncatedPowerSeries.geometric_sum(k)) for k in range(start, stop + 1)
        )
    if name == "mobius-monomials":
        mob = MobiusAuto(a=a)
        out = []
        for n in range(start, stop + 1):
            series = coefficients_of(lambda z, n=n: mob.value(z) ** n, order)
            out.append((f"mobius({a:g})^{n}", series))
        return tuple(out)
    raise ConfigError(f"unknown family name {name!r}", field="family")


def _parse_family(obj):
    if isinstance(obj, str):
        m = _FAMILY_RANGE.match(obj)
        if not m:
            raise ConfigError(
                f"family string must look like 'monomials:1..8', got {obj!r}", field="family"
            )
        return _expand_named_family(m["name"], int(m["start"]), int(m["stop"]))
    if isinstance(obj, dict):
        name = obj.get("name")
        if name is None:
            raise ConfigError("family object needs a 'name'", field="family.name")
        kwargs = {}
        if "a" in obj:
            kwargs["a"] = _complex_value(obj["a"], "family.a")
        if "order" in obj:
            kwargs["order"] = int(obj["order"])
        return _expand_named_family(
            name, int(obj.get("start", 1)), int(obj.get("stop", 8)), **kwargs
        )
    if isinstance(obj, list):
        out = []
        for i, entry in enumerate(obj):
            if not isinstance(entry, dict) or "coeffs" not in entry:
                raise ConfigError(
                    "explicit family entries need a 'coeffs' list", field=f"family[{i}]"
                )
            coeffs = tuple(
                _complex_value(c, f"family[{i}].coeffs") for c in entry["coeffs"]
            )
            label = entry.get("label", f"f{i}")
            out.append((str(label), TruncatedPowerSeries(coeffs)))
        return tuple(out)
    raise ConfigError("family must be a string, object, or list", field="family")


def _complex_value(obj, where):
    if isinstance(obj, (int, float)):
        return complex(obj)
    if isinstance(obj, dict) and set(obj) <= {"re", "im"}:
        return complex(float(obj.get("re", 0.0)), float(obj.get("im", 0.0)))
    raise ConfigError(
        f"complex values must be numbers or {{'re':..,'im':..}} objects", field=where
    )


def _parse_params(obj, command):
    if not isinstance(obj, dict):
        raise ConfigError("params must be an object", field="params")
    try:
        sigma = float(obj["sigma"])
        beta = float(obj["beta"])
    except KeyError as exc:
        raise ConfigError(f"params missing {exc.args[0]!r}", field="params") from None
    if command == "bound-check":
        if "tau" in obj and float(obj["tau"]) != sigma:
            raise ConfigError(
                "bound-check runs in the equal-weight window; omit tau or set it to sigma",
                field="params.tau",
            )
        return validate_main_theorem_params(sigma, beta)
    if "tau" in obj:
        return validate_params(sigma, float(obj["tau"]), beta)
    return validate_main_theorem_params(sigma, beta)


def _settings_from(obj, cls, where):
    if obj is None:
        return cls()
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be an object", field=where)
    allowed = set(cls.__dataclass_fields__)
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(
            f"unknown {where} fields: {sorted(unknown)}", field=where
        )
    try:
        return cls(**obj)
    except TypeError as exc:
        raise ConfigError(f"bad {where}: {exc}", field=where) from None


def parse_config(obj, command: str | None = None) -> RunConfig:
    """Build a validated RunConfig from a dict (or JSON text).

    ``command`` (from the CLI) must agree with the config's own ``command``
    field when both are present.  All referenced parameters are validated
    here, before any computation starts.
    """
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}", field="<root>") from None
    if not isinstance(obj, dict):
        raise ConfigError("config must be a single JSON object", field="<root>")

    cfg_command = obj.get("command", command)
    if cfg_command is None:
        raise ConfigError("no command given (config field or CLI)", field="command")
    if command is not None and cfg_command != command:
        raise ConfigError(
            f"config command {cfg_command!r} conflicts with CLI command {command!r}",
            field="command",
        )
    if cfg_command not in COMMANDS:
        raise ConfigError(
            f"unknown command {cfg_command!r}; expected one of {COMMANDS}", field="command"
        )

    known = {
        "command", "symbol", "family", "params", "quadrature", "sup_search",
        "selfmap_grid", "selfmap_tol", "stability_rel_tol", "seed", "out_dir",
    }
    unknown = set(obj) - known
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}", field="<root>")

    symbol = None
    if cfg_command in _NEEDS_SYMBOL:
        if "symbol" not in obj:
            raise ConfigError(f"{cfg_command} needs a symbol", field="symbol")
        try:
            symbol = symbol_from_spec(obj["symbol"])
        except ParamError as exc:
            raise ConfigError(str(exc), field="symbol") from None
    elif "symbol" in obj:
        symbol = symbol_from_spec(obj["symbol"])

    family = ()
    if cfg_command in _NEEDS_FAMILY:
        if "family" not in obj:
            raise ConfigError(f"{cfg_command} needs a family", field="family")
        family = _parse_family(obj["family"])
        if not family:
            raise ConfigError("family is empty", field="family")

    params = None
    if cfg_command in _NEEDS_PARAMS:
        if "params" not in obj:
            raise ConfigError(f"{cfg_command} needs params", field="params")
        params = _parse_params(obj["params"], cfg_command)

    seed = int(obj.get("seed", 0))
    sup_search = _settings_from(obj.get("sup_search"), SupSearchSettings, "sup_search")
    if "seed" not in (obj.get("sup_search") or {}):
        sup_search = replace(sup_search, seed=seed)

    return RunConfig(
        command=cfg_command,
        symbol=symbol,
        family=family,
        params=params,
        quadrature=_settings_from(obj.get("quadrature"), QuadratureSettings, "quadrature"),
        sup_search=sup_search,
        selfmap_grid=int(obj.get("selfmap_grid", 1024)),
        selfmap_tol=float(obj.get("selfmap_tol", 1e-6)),
        stability_rel_tol=float(obj.get("stability_rel_tol", 0.02)),
        seed=seed,
        out_dir=obj.get("out_dir"),
    )


def apply_overrides(config: RunConfig, out_dir=None, refine=None, seed=None) -> RunConfig:
    """CLI-level overrides: output directory, pre-refinement steps, RNG seed.

    ``refine`` multiplies the base quadrature counts by refinement_factor^k
    (the sup-search grid is left alone; it refines itself).
    """
    if out_dir is not None:
        config = replace(config, out_dir=str(out_dir))
    if refine:
        q = config.quadrature
        scale = q.refinement_factor**int(refine)
        config = replace(
            config,
            quadrature=replace(
                q,
                radial_count=q.radial_count * scale,
                angular_count=q.angular_count * scale,
            ),
        )
    if seed is not None:
        config = replace(
            config,
            seed=int(seed),
            sup_search=replace(config.sup_search, seed=int(seed)),
        )
    return config
