"""Command-line front end: config files, grid and sweep commands, and the check suite.

    hhgstates wigner  [--config FILE] [--key value ...]
    hhgstates entropy [--config FILE] [--key value ...]
    hhgstates state   [--config FILE] [--key value ...]
    hhgstates verify  [--only GROUP[,GROUP]] [--tol X]

Config files hold flat ``key = value`` lines with ``#`` comments; later
lines win, and ``--key value`` flags win over the file.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import conditioning, entanglement, hhg, verify
from .errors import ConfigError, DegenerateDepletion, HHGStateError
from .hhg import HHGConfig, Scheme
from .wigner import GridSpec, grid_integral, negativity_volume, wigner_grid

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_DEGENERATE = 3

STATES = ("fundamental_cat", "harmonic_cat", "amplified_harmonic_cat",
          "harmonic_bundle", "pair_state", "two_color_ecs")
WIGNER_STATES = STATES[:3]


@dataclass(frozen=True)
class Key:
    kind: type
    default: object
    help: str = ""


KEYS: dict[str, Key] = {
    "scheme": Key(str, "single_color", "single_color or two_color"),
    "cutoff_N": Key(int, 11, "harmonic cutoff N"),
    "delta_alpha_re": Key(float, -0.2, "single-color depletion, real part"),
    "delta_alpha_im": Key(float, 0.0),
    "delta_alpha_1_re": Key(float, -1.0, "two-color omega depletion"),
    "delta_alpha_1_im": Key(float, 0.0),
    "delta_alpha_2_re": Key(float, -1.0, "two-color 2-omega depletion"),
    "delta_alpha_2_im": Key(float, 0.0),
    "harmonic_phase": Key(float, 0.0, "common phase of the harmonic amplitudes"),
    "alpha_frame_re": Key(float, 0.0, "drive amplitude alpha (display frame only)"),
    "alpha_frame_im": Key(float, 0.0),
    "alpha_frame_2_re": Key(float, 0.0),
    "alpha_frame_2_im": Key(float, 0.0),
    "re_min": Key(float, -2.0),
    "re_max": Key(float, 2.0),
    "im_min": Key(float, -2.0),
    "im_max": Key(float, 2.0),
    "n_re": Key(int, 201),
    "n_im": Key(int, 201),
    "x_start": Key(float, 0.01, "first |delta_alpha| of a sweep"),
    "x_stop": Key(float, 4.0),
    "x_count": Key(int, 200),
    "output_path": Key(str, "", "CSV path; empty writes to stdout"),
    "state": Key(str, "harmonic_cat", "|".join(STATES)),
    "partition": Key(str, "fundamental", "fundamental|nq|two_color"),
    "q": Key(int, 0, "harmonic order; 0 means the cutoff"),
    "n": Key(int, 1, "number of harmonic labels for partition nq"),
    "qi": Key(int, 1),
    "qj": Key(int, 3),
    "chi_prime_re": Key(float, 0.0),
    "chi_prime_im": Key(float, 2.0),
    "r": Key(float, 1.0, "two-color depletion ratio |da2|^2/|da1|^2"),
    "workers": Key(int, 1, "threads; 0 means all CPUs"),
}
# values written into metadata sidecars; accepted on re-ingestion and ignored
RESULT_KEYS = ("min_w", "negativity_volume", "grid_integral")


def format_float(x: float) -> str:
    """Shortest round-trip decimal in scientific notation, lowercase e."""
    return np.format_float_scientific(float(x), unique=True, trim="-")


def _convert(key: str, raw: str):
    kind = KEYS[key].kind
    try:
        value = kind(raw)
    except ValueError as exc:
        raise ConfigError(f"{key}: cannot parse {raw!r} as {kind.__name__}") from exc
    if kind is float and not math.isfinite(value):
        raise ConfigError(f"{key}: value must be finite")
    return value


def parse_config_text(text: str) -> dict[str, str]:
    """Raw key -> value strings from config-file syntax; later keys win."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        raw[key] = value
    return raw


def resolve(raw: dict[str, str]) -> dict[str, object]:
    """Typed config with defaults filled in; unknown keys are an error."""
    unknown = sorted(k for k in raw if k not in KEYS and k not in RESULT_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    config = {k: spec.default for k, spec in KEYS.items()}
    config.update({k: _convert(k, v) for k, v in raw.items() if k in KEYS})
    return config


def dump_config(config: dict[str, object]) -> str:
    lines = []
    for key in KEYS:
        value = config[key]
        lines.append(f"{key} = {format_float(value) if isinstance(value, float) else value}")
    return "\n".join(lines) + "\n"


def _complex(config, prefix: str) -> complex:
    return complex(config[f"{prefix}_re"], config[f"{prefix}_im"])


def hhg_config(config: dict[str, object]) -> HHGConfig:
    try:
        scheme = Scheme(config["scheme"])
    except ValueError as exc:
        raise ConfigError(f"scheme must be one of {[s.value for s in Scheme]}") from exc
    common = dict(
        cutoff_N=config["cutoff_N"],
        harmonic_phase=config["harmonic_phase"],
        alpha_frame=_complex(config, "alpha_frame"),
        alpha_frame_2=_complex(config, "alpha_frame_2"),
    )
    try:
        if scheme is Scheme.TWO_COLOR:
            return HHGConfig(scheme=scheme, delta_alpha_1=_complex(config, "delta_alpha_1"),
                             delta_alpha_2=_complex(config, "delta_alpha_2"), **common)
        return HHGConfig(scheme=scheme, delta_alpha=_complex(config, "delta_alpha"), **common)
    except DegenerateDepletion:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def _workers(config) -> int:
    w = config["workers"]
    if w < 0:
        raise ConfigError("workers must be >= 0")
    return w or (os.cpu_count() or 1)


def build_named_state(config):
    """(state, report) for the constructor named by the `state` key."""
    cfg = hhg_config(config)
    name = config["state"]
    q = config["q"] or cfg.cutoff_N
    if name == "fundamental_cat":
        return conditioning.fundamental_cat(cfg)
    if name == "harmonic_cat":
        return conditioning.harmonic_cat(cfg, q)
    if name == "amplified_harmonic_cat":
        return conditioning.amplified_harmonic_cat(cfg, q, _complex(config, "chi_prime"))
    if name == "harmonic_bundle":
        return conditioning.harmonic_bundle(cfg)
    if name == "pair_state":
        return conditioning.pair_state(cfg, config["qi"], config["qj"])
    if name == "two_color_ecs":
        return conditioning.two_color_ecs(cfg)
    raise ConfigError(f"state must be one of {STATES}, got {name!r}")


def _write(path: str, text: str) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def wigner_csv(config) -> tuple[str, dict[str, float]]:
    if config["state"] not in WIGNER_STATES:
        raise ConfigError(f"wigner needs state in {WIGNER_STATES}")
    state, _ = build_named_state(config)
    try:
        spec = GridSpec(config["re_min"], config["re_max"], config["im_min"], config["im_max"],
                        config["n_re"], config["n_im"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    offset = _complex(config, "alpha_frame") if config["state"] == "fundamental_cat" else 0j
    grid = wigner_grid(state, spec, frame_offset=offset, workers=_workers(config))
    re = [format_float(x) for x in spec.re_axis]
    lines = ["re_beta,im_beta,w"]
    for i, y in enumerate(spec.im_axis):
        fy = format_float(y)
        row = grid.values[i]
        lines.extend(f"{re[j]},{fy},{format_float(row[j])}" for j in range(spec.n_re))
    stats = {
        "min_w": float(grid.values.min()),
        "negativity_volume": negativity_volume(grid),
        "grid_integral": grid_integral(grid),
    }
    return "\n".join(lines) + "\n", stats


def cmd_wigner(config) -> int:
    text, stats = wigner_csv(config)
    _write(config["output_path"], text)
    if config["output_path"]:
        meta = dump_config(config) + "".join(f"{k} = {format_float(v)}\n" for k, v in stats.items())
        Path(config["output_path"] + ".meta").write_text(meta, encoding="utf-8")
    return EXIT_OK


def entropy_csv(config) -> str:
    partition = config["partition"]
    if partition not in entanglement.PARTITIONS:
        raise ConfigError(f"partition must be one of {entanglement.PARTITIONS}")
    if partition == "two_color":
        config = {**config, "scheme": Scheme.TWO_COLOR.value}
    elif config["scheme"] != Scheme.SINGLE_COLOR.value:
        raise ConfigError(f"partition {partition!r} needs scheme single_color")
    template = hhg_config(config)
    if config["x_count"] < 1:
        raise ConfigError("x_count must be >= 1")
    xs = np.linspace(config["x_start"], config["x_stop"], config["x_count"])
    if partition == "nq" and not 1 <= config["n"] <= template.cutoff_N - 1:
        raise ConfigError(f"n must lie in [1, {template.cutoff_N - 1}]")
    try:
        curve = entanglement.entropy_sweep(template, partition, xs, n=config["n"],
                                           r=config["r"] if partition == "two_color" else None,
                                           workers=_workers(config))
    except DegenerateDepletion:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    lines = [f"{curve.parameter_name},s_lin"]
    lines.extend(f"{format_float(x)},{format_float(s)}" for x, s in curve.samples)
    return "\n".join(lines) + "\n"


def cmd_entropy(config) -> int:
    _write(config["output_path"], entropy_csv(config))
    return EXIT_OK


def _g(x) -> str:
    x = complex(x)
    if x.imag == 0:
        return f"{x.real:.12g}"
    return f"{x.real:.12g}{x.imag:+.12g}j"


def state_report(config) -> str:
    state, report = build_named_state(config)
    lines = [f"state: {config['state']}", f"modes: {list(state.modes)}",
             f"c1: {_g(state.c1)}", f"c2: {_g(state.c2)}"]
    for label, branch in (("branch1", state.branch1), ("branch2", state.branch2)):
        lines.append(f"{label}: " + ", ".join(f"{m}: {_g(a)}" for m, a in branch.items()))
    lines += [
        f"omega: {_g(report.omega)}",
        f"omega_prime: {_g(report.omega_prime)}",
        f"gamma: {_g(report.gamma)}",
        f"delta_cap: {_g(report.delta_cap)}",
        f"norm_sq: {_g(report.norm_sq)}",
        f"coeff_ratio: {_g(report.coeff_ratio)}",
        f"frame_phase: {_g(report.frame_phase)}",
        f"phi_prime: {_g(report.phi_prime)}",
    ]
    for key, value in report.closed_form.items():
        lines.append(f"closed_form.{key}: {_g(value)}")
    for key, (mine, closed) in report.discrepancies.items():
        lines.append(f"discrepancy.{key}: pipeline={_g(mine)} closed_form={_g(closed)}")
    return "\n".join(lines) + "\n"


def cmd_state(config) -> int:
    _write(config["output_path"], state_report(config))
    return EXIT_OK


def cmd_verify(only=None, tol=None, out=None) -> int:
    out = out or sys.stdout
    try:
        results = verify.run_checks(only, tol)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    for result in results:
        print(result.line(), file=out)
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed", file=out)
    return EXIT_VERIFY_FAILED if failed else EXIT_OK


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hhgstates", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("wigner", "entropy", "state"):
        p = sub.add_parser(name)
        p.add_argument("--config", help="flat key = value config file")
    v = sub.add_parser("verify")
    v.add_argument("--only", help="comma-separated check groups: " + ",".join(verify.GROUPS))
    v.add_argument("--tol", type=float, help="replace every check tolerance")
    return parser


def _overrides(extra: list[str]) -> dict[str, str]:
    raw: dict[str, str] = {}
    i = 0
    while i < len(extra):
        flag = extra[i]
        if not flag.startswith("--"):
            raise ConfigError(f"unexpected argument {flag!r}")
        if "=" in flag:
            key, value = flag[2:].split("=", 1)
            i += 1
        else:
            if i + 1 >= len(extra):
                raise ConfigError(f"{flag} needs a value")
            key, value = flag[2:], extra[i + 1]
            i += 2
        raw[key] = value
    return raw


def load_config(path: str | None, extra: list[str]) -> dict[str, object]:
    raw = {}
    if path:
        try:
            raw.update(parse_config_text(Path(path).read_text(encoding="utf-8")))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
    raw.update(_overrides(extra))
    return resolve(raw)


COMMANDS = {"wigner": cmd_wigner, "entropy": cmd_entropy, "state": cmd_state}


def main(argv=None) -> int:
    parser = _parser()
    args, extra = parser.parse_known_args(argv)
    try:
        if args.command == "verify":
            if extra:
                raise ConfigError(f"unknown arguments: {' '.join(extra)}")
            only = args.only.split(",") if args.only else None
            return cmd_verify(only, args.tol)
        return COMMANDS[args.command](load_config(args.config, extra))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DegenerateDepletion as exc:
        print(f"degenerate depletion: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (HHGStateError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
