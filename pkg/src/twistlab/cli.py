"""Experiment runner.

Subcommands mirror the experiment kinds: cocycle-check, zd-search,
torsion-construct, folner-dim, gabor-gram, and pipeline (Gram witness ->
kernel search -> dimension series on one configuration).  Configuration
comes from a JSON file, from flags, or both; flags win on conflict.
Machine output is byte-stable across re-runs: keys are sorted, supports are
sorted, and complex numbers serialize as [re, im] pairs.

Exit statuses: 0 success, 2 malformed or invalid config, 3 numerical
inconclusiveness (a witness or certificate failed to clear its tolerance).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .cocycles import Cocycle, cocycle_check, cocycle_from_dict, random_triples
from .dimension import dimension_series
from .gabor import (
    CERTIFIED_INDEPENDENT,
    GramResult,
    TFPoint,
    UnitGaussian,
    gram_matrix,
    independence_witness,
    lattice_points,
)
from .groups import GroupDescriptor, GroupPoint
from .ring import RingElement, ToleranceConfig, convolve
from .zerodivisor import element_order, search_zero_divisor, torsion_zero_divisor

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INCONCLUSIVE = 3

KINDS = (
    "cocycle-check",
    "zd-search",
    "torsion-construct",
    "folner-dim",
    "gabor-gram",
    "pipeline",
)


class ConfigError(ValueError):
    """Malformed configuration; the message carries the offending field path."""


@dataclass
class Report:
    kind: str
    payload: dict
    table: str
    status: int
    csv: str | None = None


def _fail(path: str, message: str) -> ConfigError:
    return ConfigError(f"{path}: {message}")


def _require(cfg: dict, key: str, path: str) -> Any:
    if key not in cfg:
        raise _fail(f"{path}{key}", "missing required field")
    return cfg[key]


def _json_safe(value):
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (np.floating, np.integer)):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _parse_group(cfg: dict, path: str = "") -> GroupDescriptor:
    doc = _require(cfg, "group", path)
    try:
        return GroupDescriptor.from_dict(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise _fail(f"{path}group", str(exc)) from exc


def _parse_cocycle(cfg: dict, group: GroupDescriptor, path: str = "") -> Cocycle:
    doc = cfg.get("cocycle", {"family": "trivial", "params": {}})
    try:
        return cocycle_from_dict(group, doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise _fail(f"{path}cocycle", str(exc)) from exc


def _parse_element(cfg: dict, group: GroupDescriptor, path: str = "") -> RingElement:
    records = _require(cfg, "element", path)
    try:
        element = RingElement.from_records(group, records)
    except (KeyError, TypeError, ValueError) as exc:
        raise _fail(f"{path}element", str(exc)) from exc
    if not element.terms:
        raise _fail(f"{path}element", "element must be nonzero")
    return element


def _parse_radii(cfg: dict, path: str = "") -> list[int]:
    if "radii" in cfg:
        radii = cfg["radii"]
        if not isinstance(radii, list) or not radii:
            raise _fail(f"{path}radii", "expected a nonempty list of integers")
        out = [int(r) for r in radii]
    else:
        max_radius = int(cfg.get("max_radius", 6))
        out = list(range(1, max_radius + 1))
    if any(r < 1 for r in out):
        raise _fail(f"{path}radii", "radii must be positive")
    return out


def _parse_tolerances(cfg: dict, path: str = "") -> ToleranceConfig:
    doc = cfg.get("tolerances", {})
    zero_tol = float(doc.get("zero_tol", cfg.get("tol", 1e-10)))
    rank_tol_factor = float(doc.get("rank_tol_factor", 1e-8))
    if zero_tol < 0 or rank_tol_factor < 0:
        raise _fail(f"{path}tolerances", "tolerances must be nonnegative")
    return ToleranceConfig(zero_tol=zero_tol, rank_tol_factor=rank_tol_factor)


def _parse_tf_points(cfg: dict, path: str = "") -> list[TFPoint]:
    if "points" in cfg:
        raw = cfg["points"]
        if not isinstance(raw, list) or not raw:
            raise _fail(f"{path}points", "expected a nonempty list of [x, xi] pairs")
        pts = []
        for i, pair in enumerate(raw):
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise _fail(f"{path}points[{i}]", "expected an [x, xi] pair")
            pts.append(TFPoint(float(pair[0]), float(pair[1])))
        return pts
    if "lattice_basis" in cfg:
        rng = cfg.get("coefficient_range", 1)
        try:
            return lattice_points(cfg["lattice_basis"], rng)
        except (TypeError, ValueError) as exc:
            raise _fail(f"{path}lattice_basis", str(exc)) from exc
    raise _fail(f"{path}points", "need either points or lattice_basis")


def _format_rows(rows: list[tuple], header: tuple[str, ...]) -> str:
    cols = [header] + [tuple(str(c) for c in row) for row in rows]
    widths = [max(len(r[i]) for r in cols) for i in range(len(header))]
    lines = []
    for r in cols:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# experiment runners


def run_cocycle_check(cfg: dict) -> Report:
    group = _parse_group(cfg)
    sigma = _parse_cocycle(cfg, group)
    samples = int(cfg.get("samples", 1000))
    seed = int(cfg.get("seed", 0))
    coord_range = int(cfg.get("coord_range", 6))
    tol = float(cfg.get("tol", 1e-10))
    rng = np.random.default_rng(seed)
    triples = random_triples(group, samples, rng, coord_range)
    report = cocycle_check(sigma, triples, tol)
    payload = {
        "experiment": "cocycle-check",
        "group": group.to_dict(),
        "cocycle": sigma.to_dict(),
        "samples": samples,
        "seed": seed,
        "max_deviation": report.max_deviation,
        "identity_one": report.identity_one,
        "tolerance": tol,
        "passed": report.passed,
    }
    table = _format_rows(
        [
            ("group", group.name),
            ("cocycle", sigma.to_dict()["family"]),
            ("samples", samples),
            ("max deviation", f"{report.max_deviation:.3e}"),
            ("sigma(e,e)=1", report.identity_one),
            ("passed", report.passed),
        ],
        ("field", "value"),
    )
    status = EXIT_OK if report.passed else EXIT_INCONCLUSIVE
    return Report("cocycle-check", payload, table, status)


def run_torsion_construct(cfg: dict) -> Report:
    group = _parse_group(cfg)
    sigma = _parse_cocycle(cfg, group)
    gamma_doc = _require(cfg, "gamma", "")
    coords = gamma_doc["coords"] if isinstance(gamma_doc, dict) else gamma_doc
    try:
        gamma = GroupPoint(group, tuple(int(c) for c in coords))
    except (TypeError, ValueError) as exc:
        raise _fail("gamma", str(exc)) from exc
    tol = float(cfg.get("tol", 1e-10))
    left, right = torsion_zero_divisor(gamma, sigma)
    product = convolve(left, right, sigma)
    residual = product.max_abs()
    payload = {
        "experiment": "torsion-construct",
        "group": group.to_dict(),
        "cocycle": sigma.to_dict(),
        "gamma": list(gamma.coords),
        "order": element_order(gamma),
        "left": left.to_records(),
        "right": right.to_records(),
        "residual": residual,
        "exactly_zero": not product.terms,
        "tolerance": tol,
    }
    table = _format_rows(
        [
            ("group", group.name),
            ("gamma", gamma.coords),
            ("order", element_order(gamma)),
            ("left support", len(left.terms)),
            ("right support", len(right.terms)),
            ("residual", f"{residual:.3e}"),
            ("exactly zero", not product.terms),
        ],
        ("field", "value"),
    )
    status = EXIT_OK if residual <= tol else EXIT_INCONCLUSIVE
    return Report("torsion-construct", payload, table, status)


def run_zd_search(cfg: dict) -> Report:
    group = _parse_group(cfg)
    sigma = _parse_cocycle(cfg, group)
    element = _parse_element(cfg, group)
    radii = _parse_radii(cfg)
    tol = _parse_tolerances(cfg)
    result = search_zero_divisor(element, sigma, max(radii), tol)
    payload = {
        "experiment": "zd-search",
        "group": group.to_dict(),
        "cocycle": sigma.to_dict(),
        "element": element.to_records(),
        "max_radius": max(radii),
        "found": result.found,
        "radius_found": result.radius_found,
        "message": result.message,
        "nullities": [[n, v] for n, v in result.nullities],
        "cofactor": result.cofactor.to_records() if result.cofactor else [],
        "kernel": result.report.to_dict() if result.report else None,
    }
    rows = [(n, v) for n, v in result.nullities]
    table = (
        _format_rows(rows, ("radius", "nullity")) + "\n" + result.message
    )
    return Report("zd-search", payload, table, EXIT_OK)


def run_folner_dim(cfg: dict) -> Report:
    group = _parse_group(cfg)
    sigma = _parse_cocycle(cfg, group)
    element = _parse_element(cfg, group)
    radii = _parse_radii(cfg)
    tol = _parse_tolerances(cfg)
    series = dimension_series(element, sigma, radii, tol)
    rows = [
        {
            "n": e.radius,
            "window": e.window_size,
            "interior": e.interior_size,
            "ratio": e.interior_ratio,
            "nullity": e.nullity,
            "estimate": e.value,
        }
        for e in series
    ]
    payload = {
        "experiment": "folner-dim",
        "group": group.to_dict(),
        "cocycle": sigma.to_dict(),
        "element": element.to_records(),
        "series": rows,
    }
    csv_lines = ["n,|F_n|,|int|,ratio,nullity,estimate"]
    for e in series:
        csv_lines.append(
            f"{e.radius},{e.window_size},{e.interior_size},"
            f"{e.interior_ratio!r},{e.nullity},{e.value!r}"
        )
    table = _format_rows(
        [
            (e.radius, e.window_size, e.interior_size, f"{e.interior_ratio:.6f}", e.nullity, f"{e.value:.6f}")
            for e in series
        ],
        ("n", "|F_n|", "|int|", "ratio", "nullity", "estimate"),
    )
    return Report("folner-dim", payload, table, EXIT_OK, csv="\n".join(csv_lines) + "\n")


def _gram_payload(result: GramResult, pts: list[TFPoint], verdict: str, tol: float) -> dict:
    return {
        "points": [[p.x, p.xi] for p in pts],
        "method": result.method,
        "eigenvalues": list(result.eigenvalues),
        "min_eigenvalue": result.min_eigenvalue,
        "condition_number": result.condition_number,
        "tolerance": tol,
        "verdict": verdict,
    }


def run_gabor_gram(cfg: dict) -> Report:
    pts = _parse_tf_points(cfg)
    tol = float(cfg.get("tol", 1e-6))
    try:
        result = gram_matrix(UnitGaussian(), pts)
    except ValueError as exc:
        raise _fail("points", str(exc)) from exc
    verdict = independence_witness(result, tol)
    payload = {"experiment": "gabor-gram", **_gram_payload(result, pts, verdict, tol)}
    spectrum = sorted(result.eigenvalues, reverse=True)
    csv_lines = ["index,eigenvalue"]
    csv_lines += [f"{i},{v!r}" for i, v in enumerate(spectrum)]
    table = _format_rows(
        [
            ("points", len(pts)),
            ("min eigenvalue", f"{result.min_eigenvalue:.8f}"),
            ("condition number", f"{result.condition_number:.6g}"),
            ("verdict", verdict),
        ],
        ("field", "value"),
    )
    status = EXIT_OK if verdict == CERTIFIED_INDEPENDENT else EXIT_INCONCLUSIVE
    return Report("gabor-gram", payload, table, status, csv="\n".join(csv_lines) + "\n")


def run_pipeline(cfg: dict) -> Report:
    gabor_cfg = _require(cfg, "gabor", "")
    gram_report = run_gabor_gram(gabor_cfg)
    zd_report = run_zd_search(cfg)
    dim_report = run_folner_dim(cfg)
    payload = {
        "experiment": "pipeline",
        "stages": {
            "gram": gram_report.payload,
            "zd_search": zd_report.payload,
            "dimension": dim_report.payload,
        },
    }
    table = "\n\n".join(
        [
            "[gram]\n" + gram_report.table,
            "[zd-search]\n" + zd_report.table,
            "[folner-dim]\n" + dim_report.table,
        ]
    )
    status = max(gram_report.status, zd_report.status, dim_report.status)
    return Report("pipeline", payload, table, status)


_RUNNERS = {
    "cocycle-check": run_cocycle_check,
    "zd-search": run_zd_search,
    "torsion-construct": run_torsion_construct,
    "folner-dim": run_folner_dim,
    "gabor-gram": run_gabor_gram,
    "pipeline": run_pipeline,
}


def run(kind: str, cfg: dict) -> Report:
    """Dispatch one experiment configuration to its runner."""
    if kind not in _RUNNERS:
        raise ConfigError(f"kind: unknown experiment {kind!r}")
    return _RUNNERS[kind](cfg)


def emit(report: Report, fmt: str, out_path: str | None) -> str:
    """Render the machine document and write it to out_path when given.

    Returns the rendered text; ordering is bit-stable for a fixed config.
    """
    if fmt == "json":
        text = json.dumps(_json_safe(report.payload), sort_keys=True, indent=2) + "\n"
    elif fmt == "csv":
        if report.csv is not None:
            text = report.csv
        else:
            flat = _json_safe(report.payload)
            lines = ["key,value"]
            for key in sorted(flat):
                lines.append(f"{key},{json.dumps(flat[key], sort_keys=True)}")
            text = "\n".join(lines) + "\n"
    else:
        raise ConfigError(f"format: unknown output format {fmt!r}")
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


# ---------------------------------------------------------------------------
# argument parsing

_JSON_FLAGS = {
    "group": "group",
    "cocycle": "cocycle",
    "element": "element",
    "gamma": "gamma",
    "points": "points",
    "lattice_basis": "lattice_basis",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twistlab",
        description="twisted group ring and time-frequency experiment runner",
    )
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind in KINDS:
        p = sub.add_parser(kind, help=f"run a {kind} experiment")
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--out", help="write machine output to this path")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--radius", type=int, help="max window radius (overrides config)")
        p.add_argument("--tol", type=float, help="primary tolerance (overrides config)")
        p.add_argument("--samples", type=int, help="sample count (cocycle-check)")
        p.add_argument("--seed", type=int, help="RNG seed (cocycle-check)")
        p.add_argument(
            "--coeff-range", type=int, dest="coefficient_range",
            help="lattice coefficient range (gabor-gram)",
        )
        for flag in _JSON_FLAGS:
            p.add_argument(
                f"--{flag.replace('_', '-')}",
                dest=flag,
                help=f"inline JSON for the config field {flag!r}",
            )
    return parser


def _merge_config(args: argparse.Namespace) -> dict:
    cfg: dict = {}
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                cfg = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config: invalid JSON ({exc})") from exc
        if not isinstance(cfg, dict):
            raise ConfigError("config: top-level document must be an object")
    for flag, key in _JSON_FLAGS.items():
        raw = getattr(args, flag, None)
        if raw is not None:
            try:
                cfg[key] = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"--{flag}: invalid JSON ({exc})") from exc
    if args.radius is not None:
        cfg["max_radius"] = args.radius
        cfg.pop("radii", None)
    if args.tol is not None:
        cfg["tol"] = args.tol
        cfg.setdefault("tolerances", {})
        if isinstance(cfg["tolerances"], dict):
            cfg["tolerances"]["zero_tol"] = args.tol
    for name in ("samples", "seed", "coefficient_range"):
        value = getattr(args, name, None)
        if value is not None:
            cfg[name] = value
    if "kind" in cfg and cfg["kind"] != args.kind:
        raise ConfigError(
            f"kind: config says {cfg['kind']!r} but subcommand is {args.kind!r}"
        )
    return cfg


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _merge_config(args)
        report = run(args.kind, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = emit(report, args.format, args.out)
    if args.out:
        print(report.table)
    else:
        sys.stdout.write(text)
    return report.status


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
