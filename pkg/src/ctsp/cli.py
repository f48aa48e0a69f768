"""Command line client.  Work runs in-process unless ``--server URL`` points
at a running ``ctsp serve`` instance."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import service as svc

EXIT_OK, EXIT_USAGE, EXIT_INPUT = 0, 1, 2

ROUTES = {
    "generate": (svc.generate, "/generate", svc.GenerateResponse),
    "solve": (svc.solve, "/solve", svc.SolveResponse),
    "batch": (svc.batch, "/batch", svc.BatchResponse),
    "exact": (svc.exact, "/exact", svc.ExactResponse),
    "best-ff": (svc.best_ff, "/best-ff", svc.BestFFResponse),
    "export-cp": (svc.export_cp, "/export-cp", svc.ExportResponse),
    "validate": (svc.check_schedule, "/validate", svc.ValidateResponse),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def call(op: str, req, server: str | None):
    local, path, model = ROUTES[op]
    if server is None:
        return local(req)
    import httpx

    try:
        resp = httpx.post(server.rstrip("/") + path, json=req.model_dump(), timeout=None)
    except httpx.HTTPError as exc:
        raise svc.InputError(f"cannot reach {server}: {exc}") from None
    if resp.status_code >= 400:
        raise svc.InputError(resp.json().get("detail", resp.text))
    return model.model_validate(resp.json())


def read_instance(path: str) -> svc.InstanceText:
    p = Path(path)
    try:
        return svc.InstanceText(name=p.stem, text=p.read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError) as exc:
        return svc.InstanceText(name=p.stem, error=f"cannot read {path}: {exc}")


def parse_overrides(items: list[str] | None) -> dict[str, str]:
    out = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise UsageError(f"--override expects key=value, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def parse_seeds(text: str) -> list[int]:
    seeds: list[int] = []
    try:
        for part in text.split(","):
            lo, sep, hi = part.partition("-")
            seeds.extend(range(int(lo), int(hi) + 1) if sep else [int(lo)])
    except ValueError:
        raise UsageError(f"bad seed list {text!r}; use e.g. 1-10 or 1,4,7") from None
    return seeds


def read_text(path: str | None) -> str | None:
    if path is None:
        return None
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise svc.InputError(f"cannot read {path}: {exc}") from None


def write_or_print(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _stop_args(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--time-limit", type=float, default=10.0, help="seconds per run (default 10)")
    sp.add_argument("--max-iterations", type=int, default=None)
    sp.add_argument("--params", help="key = value parameter file")
    sp.add_argument("--override", action="append", metavar="KEY=VALUE", help="override one parameter")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ctsp", description="Coupled-task scheduling with exact delays.")
    ap.add_argument("--server", metavar="URL", help="send work to a running service instead of solving locally")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    variants = ["r", "r-s", "r-ls", "r-s-ls"]

    g = sub.add_parser("generate", help="generate random instances")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--category", default="S", choices=["S", "M", "L", "s", "m", "l"])
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--out-dir", default=".")

    s = sub.add_parser("solve", help="run one BRKGA variant on one instance")
    s.add_argument("instance")
    s.add_argument("--variant", choices=variants, default="r-s-ls")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--target", type=int, default=None, help="stop once this makespan is reached")
    _stop_args(s)
    s.add_argument("--emit-schedule", nargs="?", const="-", metavar="PATH",
                   help="print the schedule (or write it to PATH)")
    s.add_argument("--out", help="write the run record as CSV")

    b = sub.add_parser("batch", help="run instances x variants x seeds")
    b.add_argument("instances", nargs="+")
    b.add_argument("--variant", dest="variants", action="append", choices=variants)
    b.add_argument("--seeds", default="0", help="e.g. 1-10 or 1,3,5")
    _stop_args(b)
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--out", help="CSV path (default stdout)")
    b.add_argument("--summary", help="summary CSV path (default <out>.summary.csv)")

    e = sub.add_parser("exact", help="exact optimum for a tiny instance")
    e.add_argument("instance")
    e.add_argument("--max-n", type=int, default=svc.EXACT_MAX_N)
    e.add_argument("--time-limit", type=float, default=None)

    f = sub.add_parser("best-ff", help="best decoder makespan over all job orders")
    f.add_argument("instance")
    f.add_argument("--max-n", type=int, default=svc.BEST_FF_MAX_N)

    x = sub.add_parser("export-cp", help="write the MiniZinc model")
    x.add_argument("instance")
    x.add_argument("-o", "--output", help="model path (default stdout)")

    v = sub.add_parser("validate", help="check a schedule dump against an instance")
    v.add_argument("instance")
    v.add_argument("schedule")

    sv = sub.add_parser("serve", help="run the HTTP service")
    sv.add_argument("--host", default="127.0.0.1")
    sv.add_argument("--port", type=int, default=8000)
    return ap


def _instance_arg(path: str) -> svc.InstanceText:
    item = read_instance(path)
    if item.error:
        raise svc.InputError(item.error)
    return item


def execute(args) -> int:
    server = args.server
    cmd = args.command
    if cmd == "serve":
        import uvicorn

        uvicorn.run("ctsp.app:app", host=args.host, port=args.port)
        return EXIT_OK
    if cmd == "generate":
        res = call(cmd, svc.GenerateRequest(n=args.n, category=args.category, seed=args.seed, count=args.count), server)
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for item in res.instances:
            path = out / f"{item.name}.txt"
            path.write_text(item.text, encoding="utf-8")
            print(path)
        return EXIT_OK
    if cmd == "solve":
        overrides = parse_overrides(args.override)
        req = svc.SolveRequest(instance=_instance_arg(args.instance), variant=args.variant, seed=args.seed,
                               time_limit=args.time_limit, max_iterations=args.max_iterations,
                               target=args.target, params_text=read_text(args.params),
                               overrides=overrides)
        res = call(cmd, req, server)
        r = res.record
        print(f"makespan {res.makespan}")
        print(f"variant {r['variant']} seed {r['seed']} iterations {r['iterations']} "
              f"time_to_best_s {r['time_to_best_s']} total_time_s {r['total_time_s']}")
        if args.emit_schedule:
            write_or_print(res.schedule, args.emit_schedule)
        if args.out:
            from .harness import RunRecord, records_csv

            Path(args.out).write_text(records_csv([RunRecord(**r)]), encoding="utf-8")
        return EXIT_OK
    if cmd == "batch":
        extra, seeds = parse_overrides(args.override), parse_seeds(args.seeds)
        overrides = svc.params_overrides(read_text(args.params)) if args.params else {}
        overrides.update(extra)
        req = svc.BatchRequest(instances=[read_instance(p) for p in args.instances],
                               variants=args.variants or ["r-s-ls"], seeds=seeds,
                               time_limit=args.time_limit, max_iterations=args.max_iterations,
                               overrides=overrides, workers=args.workers)
        res = call(cmd, req, server)
        write_or_print(res.csv, args.out)
        summary = args.summary or (str(Path(args.out).with_suffix(".summary.csv")) if args.out else None)
        if summary:
            Path(summary).write_text(res.summary_csv, encoding="utf-8")
        else:
            sys.stdout.write("\n" + res.summary_csv)
        failed = {r["instance"]: r["error"] for r in res.records if r.get("error")}
        for name, err in failed.items():
            print(f"warning: {name}: {err}", file=sys.stderr)
        return EXIT_OK
    if cmd == "exact":
        res = call(cmd, svc.ExactRequest(instance=_instance_arg(args.instance), max_n=args.max_n,
                                         time_limit=args.time_limit), server)
        print(f"{'optimal' if res.optimal else 'best-found'} {res.makespan}")
        sys.stdout.write(res.schedule)
        return EXIT_OK
    if cmd == "best-ff":
        res = call(cmd, svc.BestFFRequest(instance=_instance_arg(args.instance), max_n=args.max_n), server)
        print(f"best-ff {res.makespan} {' '.join(map(str, res.sequence))}")
        return EXIT_OK
    if cmd == "export-cp":
        res = call(cmd, svc.ExportRequest(instance=_instance_arg(args.instance)), server)
        write_or_print(res.model, args.output)
        return EXIT_OK
    if cmd == "validate":
        req = svc.ValidateRequest(instance=_instance_arg(args.instance), schedule=read_text(args.schedule))
        res = call(cmd, req, server)
        if res.ok:
            print(f"ok makespan {res.makespan}")
            return EXIT_OK
        for v in res.violations:
            print(v)
        return EXIT_INPUT
    raise UsageError(f"unknown command {cmd!r}")


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return execute(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except svc.InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
