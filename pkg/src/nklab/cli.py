"""Command-line front end: ``nklab verify``, ``nklab catalog list`` and ``nklab catalog dump``."""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import catalog
from .config import SUITE_CHOICES, RunConfig, apply, load_file, parse_assignment
from .errors import ConfigError
from .report import build_report, write_report
from .suites import run_suite

OUT_ENV = "NKLAB_OUT"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nklab", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run verification suites and write a report")
    v.add_argument("suite", choices=SUITE_CHOICES)
    v.add_argument("--seed", type=int, default=None)
    v.add_argument("--nodes", type=int, default=None, help="Gauss–Legendre nodes per direction")
    v.add_argument("--tol-tier", action="append", default=[], metavar="TIER=VALUE")
    v.add_argument("--catalog", action="append", default=[], metavar="ID",
                   help="restrict catalog-driven checks to these entries (repeatable or comma separated)")
    v.add_argument("--config", default=None, help="key=value configuration file")
    v.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="extra config override")
    v.add_argument("--out", default=None, help=f"output directory (default ${OUT_ENV} or ./nklab-report)")
    v.add_argument("--parallel", action="store_true", help="run suites in worker processes")
    v.add_argument("-q", "--quiet", action="store_true")

    c = sub.add_parser("catalog", help="inspect the shipped catalog")
    csub = c.add_subparsers(dest="catalog_command", required=True)
    csub.add_parser("list")
    d = csub.add_parser("dump")
    d.add_argument("id")
    return p


def config_from_args(args) -> RunConfig:
    cfg = RunConfig(suite=args.suite, output_path=os.environ.get(OUT_ENV, "nklab-report"))
    if args.config:
        cfg = load_file(args.config, cfg)
    for item in args.set:
        cfg = apply(cfg, *parse_assignment(item))
    if args.seed is not None:
        cfg = apply(cfg, "seed", str(args.seed))
    if args.nodes is not None:
        cfg = apply(cfg, "nodes", str(args.nodes))
    for item in args.tol_tier:
        k, v = parse_assignment(item)
        cfg = apply(cfg, f"tol.{k}", v)
    if args.catalog:
        cfg = apply(cfg, "catalog", ",".join(args.catalog))
    if args.out:
        cfg = apply(cfg, "out", args.out)
    if args.parallel:
        cfg = apply(cfg, "parallel", "true")
    return cfg.validate()


def run(cfg: RunConfig) -> dict:
    names = cfg.suites
    if cfg.parallel and len(names) > 1:
        with ProcessPoolExecutor(max_workers=min(len(names), os.cpu_count() or 1)) as pool:
            reports = list(pool.map(run_suite, names, [cfg] * len(names)))
    else:
        reports = [run_suite(n, cfg) for n in names]
    return build_report(cfg.to_dict(), reports)


def _print_summary(doc: dict, stream) -> None:
    for name, body in doc["suites"].items():
        s = body["summary"]
        print(f"{name:14s} passed {s['passed']}/{s['total']}  failed {s['failed']}  vacuous {s['vacuous']}",
              file=stream)
        if body["error"]:
            print(f"  error: {body['error'].strip().splitlines()[-1]}", file=stream)
        for r in body["records"]:
            if r["status"] != "pass":
                where = f"[{r['entry']}] " if r["entry"] else ""
                print(f"  FAIL {where}{r['name']}: {r['anchor']} (value {r['value']}, tol {r['tolerance']})",
                      file=stream)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "catalog":
        if args.catalog_command == "list":
            print(catalog.list_catalog())
            return 0
        try:
            print(json.dumps(catalog.get(args.id).summary(), indent=2, ensure_ascii=False))
        except ConfigError as exc:
            print(f"nklab: error: {exc}", file=sys.stderr)
            return 2
        return 0
    try:
        cfg = config_from_args(args)
    except ConfigError as exc:
        print(f"nklab: error: {exc}", file=sys.stderr)
        return 2
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO, format="%(name)s: %(message)s")
    doc = run(cfg)
    jpath, _ = write_report(cfg.output_path, doc)
    if not args.quiet:
        _print_summary(doc, sys.stdout)
        s = doc["summary"]
        print(f"total: passed {s['passed']}/{s['total']}, failed {s['failed']}, vacuous {s['vacuous']} -> {jpath}")
    return 0 if doc["summary"]["failed"] == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
