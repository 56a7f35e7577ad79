"""Command-line entry point: ``oranstorm run|compare|sweep|list``.

Exit codes: 0 success, 2 configuration or usage error, 3 simulation error.
Diagnostics go to stderr; data goes to files under ``--out`` and to stdout.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from pathlib import Path

from .config import Config, ConfigError, ExperimentKind
from .experiments import SWEEP_PARAMETERS, ExperimentResult, compare_results, run_experiment, sweep

log = logging.getLogger("oranstorm")

EXIT_OK, EXIT_CONFIG, EXIT_SIM = 0, 2, 3


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _write_result(result: ExperimentResult, out: Path) -> None:
    write_atomic(out / f"{result.name}.trace.csv", result.to_csv())
    write_atomic(out / f"{result.name}.summary.json", dump_json(result.to_json()))


def _emit(fmt: str, payload, csv_text: str | None = None) -> None:
    if fmt == "csv" and csv_text is not None:
        sys.stdout.write(csv_text)
    else:
        sys.stdout.write(dump_json(payload))


def cmd_run(config_path, experiment_name, out_dir, fmt="json") -> int:
    config = Config.load(config_path)
    result = run_experiment(config, experiment_name)
    _write_result(result, Path(out_dir))
    _emit(fmt, result.summary, result.to_csv())
    return EXIT_OK


def cmd_compare(config_path, names, out_dir, fmt="json") -> int:
    if not names:
        raise ConfigError("compare needs at least one experiment name")
    config = Config.load(config_path)
    for name in names:
        if config.kind(name) is not ExperimentKind.CUSTOM:
            raise ConfigError(f"{name!r} is a {config.kind(name).value} experiment; compare needs simulations")
    results = [run_experiment(config, n) for n in names]
    out = Path(out_dir)
    for r in results:
        _write_result(r, out)
    ranking = compare_results(results)
    doc = {"ranking": ranking, "reports": {r.name: r.summary["resilience"] for r in results}}
    write_atomic(out / "comparison.json", dump_json(doc))
    csv_text = "name,p\n" + "".join(f"{r['name']},{r['p']:.12g}\n" for r in ranking)
    _emit(fmt, doc, csv_text)
    return EXIT_OK


def cmd_sweep(config_path, parameter, values, out_dir, experiment=None, arch=None, fmt="json") -> int:
    config = Config.load(config_path)
    doc = config.effective(experiment)
    if arch is not None:
        doc["architecture"] = arch
    result = sweep(doc, parameter, values)
    out = Path(out_dir)
    write_atomic(out / "sweep.csv", result.to_csv())
    write_atomic(out / "sweep.summary.json", dump_json(result.to_json()))
    _emit(fmt, result.summary, result.to_csv())
    return EXIT_OK


def cmd_list(config_path, fmt="json") -> int:
    config = Config.load(config_path)
    items = [{"name": n, "kind": e["kind"]} for n, e in sorted(config.experiments.items())]
    if fmt == "csv":
        sys.stdout.write("name,kind\n" + "".join(f"{i['name']},{i['kind']}\n" for i in items))
    else:
        sys.stdout.write(dump_json(items))
    return EXIT_OK


def _values(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON experiment config (defaults built in)")
    common.add_argument("--format", choices=("csv", "json"), default="json", help="stdout rendering")

    outp = argparse.ArgumentParser(add_help=False)
    outp.add_argument("--out", default="out", help="output directory")

    p = argparse.ArgumentParser(prog="oranstorm", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", parents=[common, outp], help="run one named experiment")
    r.add_argument("experiment")

    c = sub.add_parser("compare", parents=[common, outp], help="rank simulation experiments by resilience")
    c.add_argument("experiments", nargs="*")

    s = sub.add_parser("sweep", parents=[common, outp], help="vary one parameter")
    s.add_argument("parameter", choices=SWEEP_PARAMETERS)
    s.add_argument("values", type=_values, help="comma-separated values, e.g. 0.1,0.5,0.9")
    s.add_argument("--experiment", help="base experiment whose overrides apply")
    s.add_argument("--arch", choices=("monolithic", "open_ran"))

    sub.add_parser("list", parents=[common], help="list experiments")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        if args.command == "run":
            return cmd_run(args.config, args.experiment, args.out, args.format)
        if args.command == "compare":
            return cmd_compare(args.config, args.experiments, args.out, args.format)
        if args.command == "sweep":
            return cmd_sweep(args.config, args.parameter, args.values, args.out, args.experiment,
                             args.arch, args.format)
        return cmd_list(args.config, args.format)
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    except (ValueError, ArithmeticError, IndexError) as exc:
        log.error("simulation error: %s", exc)
        return EXIT_SIM


if __name__ == "__main__":
    sys.exit(main())
