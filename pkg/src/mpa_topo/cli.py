"""Command-line entry point: ``mpa-topo predict|generate|analyze|compare``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 acceptance-threshold
failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, replace
from fractions import Fraction
from pathlib import Path

from . import analytic, generator, ingest, report
from .analytic import InvalidParams, MpaParams

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_THRESHOLD = 0, 1, 2, 3

log = logging.getLogger("mpa_topo")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _rate(text: str) -> float:
    """Accept decimals and exact ratios such as ``7/3``."""
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    p = Path(path)
    try:
        raw = p.read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read config {p}: {exc}") from exc
    if p.suffix == ".toml":
        try:
            import tomllib
        except ModuleNotFoundError:  # Python < 3.11
            import tomli as tomllib
        data = tomllib.loads(raw.decode("utf-8"))
    else:
        data = json.loads(raw)
    if not isinstance(data, dict):
        raise UsageError("config must be a key/value mapping")
    return data


_PARAM_FLAGS = ("rho", "nu", "c", "m", "mu")


def _add_param_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON or TOML file of key/value settings")
    for name in _PARAM_FLAGS:
        p.add_argument(f"--{name}", type=_rate, default=None)
    p.add_argument(
        "--peering-fraction",
        type=_rate,
        default=None,
        help="derive c so that this share of links is peering",
    )


def _collect(args: argparse.Namespace) -> dict:
    """Config file values overridden by explicit flags."""
    data = _load_config(args.config)
    for name in _PARAM_FLAGS:
        value = getattr(args, name)
        if value is not None:
            data[name] = value
    for key in ("target_isps", "target_non_isps", "seed", "max_resample"):
        value = getattr(args, key, None)
        if value is not None:
            data[key] = value
    fraction = args.peering_fraction if args.peering_fraction is not None else data.pop("peering_fraction", None)
    if fraction is not None:
        data.pop("peering_fraction", None)
        defaults = MpaParams()
        m = data.get("m", data.get("m_nonisp", defaults.m))
        data["c"] = analytic.derive_peering_rate(
            float(fraction),
            float(data.get("nu", defaults.nu)),
            float(Fraction(str(m))),
            float(Fraction(str(data.get("rho", defaults.rho)))),
        )
    return data


def _out_dir(args: argparse.Namespace) -> Path:
    return Path(args.out_dir or os.environ.get("MPA_OUT_DIR") or "mpa-out")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# -- commands --------------------------------------------------------------


def cmd_predict(args: argparse.Namespace) -> int:
    cfg = generator.config_from_mapping(
        {k: v for k, v in _collect(args).items() if k in (*_PARAM_FLAGS, "m_nonisp")}
    )
    prediction = analytic.predict(cfg.params)
    out = prediction.to_dict()
    out["params"] = cfg.params.to_dict()
    sys.stdout.write(_dump(out))
    return EXIT_OK


def _run_one(config: generator.GeneratorConfig, out_dir: Path) -> dict:
    result = generator.run(config)
    out_dir.mkdir(parents=True, exist_ok=True)
    graph_path, side_path = ingest.save_graph(result.graph, out_dir / "graph.as-rel.txt")
    manifest = {
        "params": config.params.to_dict(),
        "seed": config.rng_seed,
        "target_isps": config.target_isps,
        "target_non_isps": config.target_non_isps,
        "max_resample": config.max_resample,
        "nodes": result.graph.n_nodes,
        "links": result.graph.n_links,
        "event_counts": asdict(result.counts),
        "files": {"graph": graph_path.name, "classes": side_path.name},
        "wall_time_s": round(result.wall_time_s, 3),
    }
    (out_dir / "manifest.json").write_text(_dump(manifest), encoding="utf-8")
    return manifest


def cmd_generate(args: argparse.Namespace) -> int:
    config = generator.config_from_mapping(_collect(args))
    out_dir = _out_dir(args)
    if args.ensemble <= 1:
        manifest = _run_one(config, out_dir)
        log.info("wrote %d nodes / %d links to %s", manifest["nodes"], manifest["links"], out_dir)
        return EXIT_OK
    jobs = [
        (replace(config, rng_seed=config.rng_seed + i), out_dir / f"run-{i:03d}")
        for i in range(args.ensemble)
    ]
    with ProcessPoolExecutor(max_workers=min(args.ensemble, os.cpu_count() or 1)) as pool:
        for manifest in pool.map(_run_one, *zip(*jobs)):
            log.info("seed %d: %d nodes / %d links", manifest["seed"], manifest["nodes"], manifest["links"])
    return EXIT_OK


def _taxonomy(args: argparse.Namespace) -> ingest.Taxonomy | None:
    if not args.taxonomy:
        return None
    with open(args.taxonomy, encoding="utf-8") as fp:
        return ingest.parse_taxonomy(fp, delimiter=args.taxonomy_delimiter or None)


def _load(path: str, args: argparse.Namespace, taxonomy: ingest.Taxonomy | None = None):
    code_map = ingest.CodeMap.named(args.code_map, args.drop_siblings)
    graph, _ = ingest.load_graph(path, code_map, taxonomy)
    return graph


def cmd_analyze(args: argparse.Namespace) -> int:
    graph = _load(args.graph, args, _taxonomy(args))
    analysis = report.analyze(graph)
    out_dir = _out_dir(args)
    report.write_analysis(analysis, out_dir)
    summary = analysis.summary()
    (out_dir / "summary.json").write_text(_dump(summary), encoding="utf-8")
    sys.stdout.write(_dump(summary))
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    synthetic = _load(args.synthetic, args)
    taxonomy = _taxonomy(args)
    observed_path = Path(args.observed)
    if taxonomy is None and not ingest.sidecar_path(observed_path).exists():
        log.warning("no taxonomy for %s; classes inferred from relationships", observed_path)
    observed = _load(args.observed, args, taxonomy)
    thresholds = _load_config(args.thresholds) if args.thresholds else None
    manifest_path = Path(args.synthetic).with_name("manifest.json")
    params = seed = None
    if manifest_path.exists():
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        params, seed = manifest.get("params"), manifest.get("seed")
    result = report.compare(report.analyze(synthetic), report.analyze(observed), thresholds, params, seed)
    out_dir = _out_dir(args)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "compare.json").write_text(_dump(result.to_dict()), encoding="utf-8")
    brief = {name: fit["delta"] for name, fit in result.fits.items()}
    sys.stdout.write(_dump({"exponent_deltas": brief, "mean_degree": result.mean_degree,
                            "violations": result.violations}))
    return EXIT_THRESHOLD if result.violations else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mpa-topo", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("predict", help="closed-form exponents and mean degree")
    _add_param_flags(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("generate", help="grow a synthetic annotated topology")
    _add_param_flags(p)
    p.add_argument("--target-isps", type=int)
    p.add_argument("--target-non-isps", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--max-resample", type=int)
    p.add_argument("--ensemble", type=int, default=1, help="runs with seeds seed..seed+N-1")
    p.add_argument("--out-dir", help="defaults to $MPA_OUT_DIR or ./mpa-out")
    p.set_defaults(func=cmd_generate)

    def add_input_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--code-map", default="provider-first", choices=("provider-first", "customer-first"))
        p.add_argument("--drop-siblings", action="store_true")
        p.add_argument("--taxonomy", help="AS classification file")
        p.add_argument("--taxonomy-delimiter", default="|", help="empty string splits on whitespace")
        p.add_argument("--out-dir", help="defaults to $MPA_OUT_DIR or ./mpa-out")

    p = sub.add_parser("analyze", help="write the metric battery for one graph")
    p.add_argument("graph")
    add_input_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("compare", help="compare a synthetic graph with an observed one")
    p.add_argument("synthetic")
    p.add_argument("observed")
    add_input_flags(p)
    p.add_argument("--thresholds", help="JSON/TOML overriding max_dd_delta / observed_dd_range")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (UsageError, InvalidParams, generator.InvalidConfig) as exc:
        parser.print_usage(sys.stderr)
        print(f"mpa-topo: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError, KeyError, ingest.ConflictingDuplicate) as exc:
        print(f"mpa-topo: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
