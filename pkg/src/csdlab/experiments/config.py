"""Strict flat key=value experiment configs.

Format: one ``key = value`` pair per line, sections expressed with dots
(``grid.L = 16``), full-line or trailing ``#`` comments, blank lines
ignored.  Parsing is strict: any key outside the schema for the declared
scenario fails with its line number before any computation starts.  Lists
are comma-separated; booleans are ``true``/``false``.

Every tolerance a scenario asserts against lives in the config (the
defaults below), so a checked-in config fully reproduces a run.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

from ..lattice import DataSpec, GridSpec, make_grid

__all__ = ["ConfigError", "ExperimentConfig", "SCENARIOS", "parse_config", "parse_config_text"]


class ConfigError(ValueError):
    """Config syntax or schema violation; message carries line/key context."""


# Scenario-specific parameter schemas: name -> (type, default).  A default of
# REQUIRED means the config must set the key.
REQUIRED = object()

_PROBE_COMMON = {
    "ensemble": ("int", 100),
}

SCENARIOS: dict[str, dict] = {
    "run": {
        "write_states": ("bool", False),
    },
    "transport": {
        "tol": ("float", 1e-12),
    },
    "convergence": {
        "N_list": ("int_list", [256, 512, 1024]),
        "order_min": ("float", 1.8),
        "order_max": ("float", 2.2),
        "assert_orders": ("bool", True),
    },
    "charge": {
        "N_list": ("int_list", [256, 512, 1024]),
        "order_min": ("float", 1.8),
        "order_max": ("float", 2.2),
        "drift_max": ("float", 1e-5),
    },
    "scaling": {
        "lam": ("int", 2),
        "N_list": ("int_list", [256, 512, 1024]),
        "order_min": ("float", 1.8),
    },
    "delgado": {
        "mode": ("choice:modulus,split", REQUIRED),
        "tol": ("float", 1e-12),
        "N_list": ("int_list", [256, 512]),
        "order_min": ("float", 1.8),
    },
    "constraint": {
        "N_list": ("int_list", [512, 1024]),
        "t_eval": ("float", 1.0),
        "order_min": ("float", 1.8),
        "residual_max": ("float", 1e-3),
    },
    "picard": {
        "K": ("int", 6),
        "rho_max": ("float", 0.5),
        "dist_max": ("float", 1e-4),
    },
    "global_bound": {
        "r": ("float", -0.25),
        "C_max": ("float", 3.0),
        "drift_max": ("float", 1e-3),
        "check_bilinearity": ("bool", False),
        "bilinearity_tol": ("float", 0.15),
        "bilinearity_time": ("float", 0.5),
    },
    "norm_oracles": {
        "count": ("int", 20),
        "tol": ("float", 1e-10),
        "block_M": ("int", 64),
        "block_N": ("int", 64),
        "block_L": ("float", 4.0),
    },
    "y_embed": {
        "count": ("int", 50),
        "tol": ("float", 1e-8),
        "block_M": ("int", 32),
    },
    "probe_product": {
        **_PROBE_COMMON,
        "stable_exponents": ("float_list", [1.0, 1.0, 1.0]),
        "witness_exponents": ("float_list", [0.0, 0.0, 0.0]),
        "stability_tol": ("float", 0.10),
        "growth_min": ("float", 0.30),
        "trichotomy_tol": ("float", 1e-10),
        "trichotomy_count": ("int", 5),
    },
    "probe_besov": {
        **_PROBE_COMMON,
        "s": ("float", 0.3),
        "stability_tol": ("float", 0.10),
        "trichotomy_tol": ("float", 1e-10),
    },
    "probe_dilation": {
        **_PROBE_COMMON,
        "s_list": ("float_list", [-0.4, 0.0, 0.4]),
        "T_list": ("float_list", [1.0, 0.5, 0.25, 0.125, 0.0625]),
        "spread_max": ("float", 0.20),
    },
    "probe_bilinear": {
        **_PROBE_COMMON,
        "kind": ("choice:Y_est,Z_est", "Y_est"),
        "s": ("float", 0.0),
        "s1": ("float", 0.0),
        "b1": ("float", 0.6),
        "s2": ("float", 0.0),
        "b2": ("float", 0.6),
        "b": ("float", None),
        "a0": ("float", 0.0),
        "b0": ("float", 0.0),
        "block_steps": ("int", 64),
        "contrast_min": ("float", 2.0),
    },
    "probe_energy": {
        "ensemble": ("int", 30),
        "s": ("float", -0.3),
        "b": ("float", 0.6),
        "sign": ("int", 1),
        "T_window": ("float", 1.0),
        "time_span": ("float", 4.0),
        "stability_tol": ("float", 0.25),
        "check_resonance": ("bool", True),
    },
}

_DATA_FIELDS = ("f_plus", "f_minus", "a_plus", "a_minus")

_DATA_KIND_KEYS = {
    "zero": {},
    "gaussian": {"center": "float", "width": "float", "amplitude": "float"},
    "plane_wave": {"k": "int", "amplitude": "float"},
    "random_sobolev": {"s": "float", "seed": "int", "target_norm": "float", "hermitian": "bool"},
    "file": {"path": "str"},
}

_RUN_KEYS = {
    "T": ("float", 1.0),
    "scheme": ("choice:pc2,exact_phase", "pc2"),
    "record_every": ("int", 1),
    "hr": ("float", None),
}


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: str
    grid: GridSpec
    m: float
    data: dict            # field name -> DataSpec
    T: float
    scheme: str
    record_every: int
    hr: float | None
    seed: int
    out_dir: str
    params: dict          # scenario-specific parameters, defaults filled in

    def with_overrides(self, seed: int | None = None, out_dir: str | None = None) -> "ExperimentConfig":
        return replace(self,
                       seed=self.seed if seed is None else seed,
                       out_dir=self.out_dir if out_dir is None else out_dir)


def _convert(raw: str, typ: str, key: str, lineno: int):
    raw = raw.strip()
    try:
        if typ == "int":
            return int(raw)
        if typ == "float":
            return float(raw)
        if typ == "str":
            return raw
        if typ == "bool":
            if raw.lower() in ("true", "false"):
                return raw.lower() == "true"
            raise ValueError(f"expected true/false, got {raw!r}")
        if typ == "int_list":
            return [int(p) for p in raw.split(",") if p.strip()]
        if typ == "float_list":
            return [float(p) for p in raw.split(",") if p.strip()]
        if typ.startswith("choice:"):
            choices = typ.split(":", 1)[1].split(",")
            if raw not in choices:
                raise ValueError(f"expected one of {choices}, got {raw!r}")
            return raw
    except ValueError as exc:
        raise ConfigError(f"line {lineno}: key {key!r}: {exc}") from exc
    raise AssertionError(typ)


def _parse_pairs(text: str):
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {lineno}: expected key = value, got {line.strip()!r}")
        key, raw = body.split("=", 1)
        yield lineno, key.strip(), raw.strip()


def _build_dataspec(fieldname: str, entries: dict, lineno_of: dict) -> DataSpec:
    if not entries:
        return DataSpec.zero()
    if "kind" not in entries:
        first = min(lineno_of.values())
        raise ConfigError(f"line {first}: data.{fieldname} is missing 'kind'")
    kind = entries.pop("kind")
    if kind not in _DATA_KIND_KEYS:
        raise ConfigError(f"line {lineno_of['kind']}: data.{fieldname}.kind: "
                          f"unknown kind {kind!r} (expected one of {sorted(_DATA_KIND_KEYS)})")
    allowed = _DATA_KIND_KEYS[kind]
    kwargs = {}
    for param, raw in entries.items():
        if param not in allowed:
            raise ConfigError(f"line {lineno_of[param]}: data.{fieldname}.{param} "
                              f"is not a parameter of kind {kind!r} (allowed: {sorted(allowed)})")
        kwargs[param] = _convert(raw, allowed[param], f"data.{fieldname}.{param}", lineno_of[param])
    return DataSpec(kind=kind, **kwargs)


def parse_config_text(text: str, source: str = "<config>") -> ExperimentConfig:
    scenario = None
    scenario_line = None
    grid_vals: dict = {}
    run_vals: dict = {}
    top: dict = {}
    data_raw: dict = {f: {} for f in _DATA_FIELDS}
    data_lines: dict = {f: {} for f in _DATA_FIELDS}
    scen_raw: dict = {}

    for lineno, key, raw in _parse_pairs(text):
        parts = key.split(".")
        if key == "scenario":
            if raw not in SCENARIOS:
                raise ConfigError(f"{source}:{lineno}: unknown scenario {raw!r} "
                                  f"(expected one of {sorted(SCENARIOS)})")
            scenario, scenario_line = raw, lineno
        elif key == "seed":
            top["seed"] = _convert(raw, "int", key, lineno)
        elif key == "output.dir":
            top["out_dir"] = raw
        elif key == "grid.L":
            grid_vals["L"] = _convert(raw, "float", key, lineno)
        elif key == "grid.N":
            grid_vals["N"] = _convert(raw, "int", key, lineno)
        elif key == "physics.m":
            top["m"] = _convert(raw, "float", key, lineno)
        elif parts[0] == "run" and len(parts) == 2 and parts[1] in _RUN_KEYS:
            run_vals[(parts[1], lineno)] = raw
        elif parts[0] == "data" and len(parts) == 3 and parts[1] in _DATA_FIELDS:
            data_raw[parts[1]][parts[2]] = raw
            data_lines[parts[1]][parts[2]] = lineno
        elif scenario is not None and parts[0] == scenario and len(parts) == 2:
            scen_raw[(parts[1], lineno)] = raw
        else:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}"
                              + ("" if scenario else " (note: scenario must be declared "
                                 "before scenario-specific keys)"))

    if scenario is None:
        raise ConfigError(f"{source}: missing required key 'scenario'")
    if "L" not in grid_vals or "N" not in grid_vals:
        raise ConfigError(f"{source}: grid.L and grid.N are required")

    run_parsed = {}
    for (name, lineno), raw in run_vals.items():
        typ, _ = _RUN_KEYS[name]
        run_parsed[name] = _convert(raw, typ, f"run.{name}", lineno)
    for name, (typ, default) in _RUN_KEYS.items():
        run_parsed.setdefault(name, default)

    schema = SCENARIOS[scenario]
    params = {}
    for (name, lineno), raw in scen_raw.items():
        if name not in schema:
            raise ConfigError(f"{source}:{lineno}: unknown key {scenario}.{name!r} "
                              f"(allowed: {sorted(schema)})")
        typ, _ = schema[name]
        params[name] = _convert(raw, typ, f"{scenario}.{name}", lineno)
    for name, (typ, default) in schema.items():
        if name not in params:
            if default is REQUIRED:
                raise ConfigError(f"{source}: scenario {scenario!r} requires key {scenario}.{name}")
            params[name] = default

    data = {f: _build_dataspec(f, dict(data_raw[f]), data_lines[f]) for f in _DATA_FIELDS}

    if run_parsed["scheme"] == "exact_phase" and top.get("m", 0.0) != 0.0:
        raise ConfigError(f"{source}: scheme exact_phase requires physics.m = 0 "
                          f"(line {scenario_line})")

    return ExperimentConfig(
        scenario=scenario,
        grid=make_grid(grid_vals["L"], grid_vals["N"]),
        m=top.get("m", 0.0),
        data=data,
        T=run_parsed["T"],
        scheme=run_parsed["scheme"],
        record_every=run_parsed["record_every"],
        hr=run_parsed["hr"],
        seed=top.get("seed", 0),
        out_dir=top.get("out_dir", "out"),
        params=params,
    )


def parse_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text, source=str(path))
