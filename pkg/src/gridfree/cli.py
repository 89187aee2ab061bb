"""Command line entry point: ``gridfree <subcommand> ...``.

Exit codes: 0 success or certified absent, 1 pattern found or a check
failed, 2 search budget exhausted, 3 usage error.  Results go to stdout
(or ``--out``), progress to stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import cb, hyper
from .construct import MODELS, TIE_RULES, ConstructionParams, build
from .errors import ChecksFailed, GridFreeError, InstanceTooLarge, ParseError
from .ff import make_field, nonsquares
from .geom import HORIZONTAL, VERTICAL, ProjPoint, enumerate_lines
from .hyper import dump_json
from .patterns import BudgetExhausted, KINDS, PatternSpec, exhaustive_certify, find_embedding
from .pipeline import Cell, RunConfig, format_table, sweep, verify_hypergraph

log = logging.getLogger("gridfree")

EXIT_OK, EXIT_FOUND, EXIT_BUDGET, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()]


def _holes(text: str) -> list[tuple[int, int]]:
    # "0,0;1,2" -> [(0, 0), (1, 2)]
    out = []
    for cell in filter(None, text.replace(" ", "").split(";")):
        i, j = cell.split(",")
        out.append((int(i), int(j)))
    return out


def _field(args):
    return make_field(args.p, args.k)


def _emit(args, doc: dict) -> None:
    text = dump_json(doc)
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
        log.info("wrote %s", args.out)
    else:
        sys.stdout.write(text)


def _config(args, name: str) -> RunConfig:
    flags = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "cmd", "verbose")}
    return RunConfig(name, flags, seed=getattr(args, "seed", 0) or 0,
                     out_dir=str(Path(args.out).parent) if getattr(args, "out", None) else ".",
                     format=getattr(args, "format", "json"))


# --- subcommands -------------------------------------------------------------

def cmd_field_info(args) -> int:
    F = _field(args)
    ns = nonsquares(F, (F.q - 1) // 2)
    _emit(args, {
        "run_config": _config(args, "field-info").to_json(),
        "field": F.to_json(),
        "q": F.q,
        "nonsquares": [a.value for a in ns],
        "generator": getattr(F, "generator", None),
        "lines": sum(1 for _ in enumerate_lines(F)),
    })
    return EXIT_OK


def cmd_construct(args) -> int:
    F = _field(args)
    alphas = [F.from_index(i) for i in args.alphas] if args.alphas else None
    dirn = args.direction
    if dirn not in (HORIZONTAL, VERTICAL):
        X, Y = _ints(dirn)
        dirn = ProjPoint.normalized(F.from_index(X), F.from_index(Y), F.zero)
    h = build(ConstructionParams(args.r, F, args.model, alphas, args.tie, dirn))
    log.info("built %r", h)
    text = hyper.dumps(h, _config(args, "construct").to_json())
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        h = hyper.load(args.file)
    except OSError as exc:
        raise UsageError(str(exc)) from exc
    rep = verify_hypergraph(h)
    doc = {"run_config": _config(args, "verify").to_json(), "report": rep.to_json()}
    if args.format == "table":
        for c in rep.checks:
            print(f"{'ok  ' if c.ok else 'FAIL'}  {c.name}  {c.detail}")
        print(f"E = {rep.edges}" + (f" vs formula {rep.expected_edges}" if rep.expected_edges is not None else ""))
    else:
        _emit(args, doc)
    if not rep.ok:
        raise ChecksFailed(rep)
    return EXIT_OK


def _pattern(args) -> PatternSpec:
    r = args.r
    if args.pattern == "grid":
        return PatternSpec.grid(r)
    if args.pattern == "wicket":
        return PatternSpec.wicket(r)
    if args.holes is not None:
        return PatternSpec.punctured(r, holes=_holes(args.holes))
    if args.t is None:
        raise UsageError("punctured search needs --t or --holes")
    return PatternSpec.punctured(r, t=args.t)


def cmd_search(args) -> int:
    try:
        h = hyper.load(args.input)
    except OSError as exc:
        raise UsageError(str(exc)) from exc
    if args.r is None:
        args.r = h.r
    spec = _pattern(args)
    doc = {"run_config": _config(args, "search").to_json(), "pattern": spec.to_json()}
    if args.all or args.transverse_only:
        cert = exhaustive_certify(h, spec, transverse_only=args.transverse_only, budget=args.budget)
        status, found = cert.status, cert.found
        doc.update(status=status, nodes=cert.nodes, found=len(found), excluded=len(cert.excluded))
        embeddings = [e.to_json() for e in found]
        if args.transverse_only:
            doc["excluded_embeddings"] = [e.to_json() for e in cert.excluded[:10]]
    else:
        res = find_embedding(h, spec, budget=args.budget)
        if isinstance(res, BudgetExhausted):
            status, embeddings = "budget-exhausted", []
            doc["nodes"] = res.nodes
        else:
            status = "absent" if res is None else "found"
            embeddings = [] if res is None else [res.to_json()]
        doc["status"] = status
    doc["embeddings"] = embeddings
    log.info("search %s: %s", spec.kind, status)
    if args.emit_embeddings:
        Path(args.emit_embeddings).write_text(dump_json({"run_config": doc["run_config"], "embeddings": embeddings}))
    _emit(args, doc)
    return {"absent": EXIT_OK, "found": EXIT_FOUND, "budget-exhausted": EXIT_BUDGET}[status]


def _cb_lemma(args, F, rng):
    r = args.r
    degrees = [args.d] if args.d is not None else list(range(1, 2 * r - 2))
    passes, bad, checks = 0, [], 0
    for trial in range(args.trials):
        _, _, X = cb.random_transverse_family(F, r, rng)
        ok = True
        for d in degrees:
            res = cb.cb_check(X, d, falsify=args.falsify)
            checks += 1
            if not res.passed:
                ok = False
                bad.append({"trial": trial, "d": d, **res.counterexample.to_json()})
        passes += ok
    return passes, bad, False, {"degrees": degrees, "checks": checks}


def _cb_budget(args, F, rng):
    r, t = args.r, args.t if args.t is not None else 1
    d = args.d if args.d is not None else 2 * r - 2 - t
    passes, bad, prob = 0, [], False
    for trial in range(args.trials):
        _, _, X = cb.random_transverse_family(F, r, rng)
        missed = set(rng.choice(len(X), size=t, replace=False).tolist())
        S = [x for i, x in enumerate(X) if i not in missed]
        res = cb.degree_budget_check(X, S, d, falsify=args.falsify, rng=rng)
        prob |= res.probabilistic
        if res.passed:
            passes += 1
        else:
            bad.append({"trial": trial, "missed": sorted(missed), "witness": list(res.witness), "method": res.method})
    return passes, bad, prob, {"t": t, "d": d}


def _cb_alon_furedi(args, F, rng):
    passes, bad, total = 0, [], 0
    for sets in cb.alon_furedi_configurations(F, max_points=args.max_points):
        limit = sum(len(A) - 1 for A in sets) - 1
        degrees = [args.d] if args.d is not None else list(range(0, limit + 1))
        for D in degrees:
            if D > limit and not args.falsify:
                continue
            total += 1
            res = cb.alon_furedi_check(F, sets, D, falsify=args.falsify)
            if res.passed:
                passes += 1
            else:
                bad.append({"sets": [list(A) for A in sets], "D": D, **res.counterexample.to_json()})
    return passes, bad, False, {"configurations": total}


def _cb_grid_cert(args, F, rng):
    r = args.r
    h = build(ConstructionParams(r, F, args.model))
    outcomes = {"unsatisfiable": 0, "consistent": 0, "contradiction": 0}
    traces = []
    for trial in range(args.trials):
        if args.model == "hrq":
            rows, cols = cb.synthetic_conic_family(h, rng)
        else:
            rows, cols, _ = cb.random_transverse_family(F, r, rng)
        try:
            tr = cb.grid_certificate(h, rows, cols)
        except GridFreeError as exc:
            outcomes["unsatisfiable"] += 1
            log.debug("trial %d: %s", trial, exc)
            continue
        outcomes["contradiction" if tr.contradiction else "consistent"] += 1
        if len(traces) < 3:
            traces.append(tr.to_json())
    passes = outcomes["unsatisfiable"] + outcomes["consistent"]
    return passes, [], False, {"outcomes": outcomes, "sample_traces": traces, "model": args.model}


def cmd_cb(args) -> int:
    F = _field(args)
    rng = np.random.default_rng(args.seed)
    mode = {"lemma": _cb_lemma, "budget": _cb_budget, "alon-furedi": _cb_alon_furedi, "grid-cert": _cb_grid_cert}
    passes, bad, prob, extra = mode[args.mode](args, F, rng)
    trials = extra.get("configurations", args.trials)
    doc = {
        "run_config": _config(args, "cb").to_json(),
        "mode": args.mode,
        "params": {"r": args.r, "p": args.p, "k": args.k, "d": args.d, "t": args.t, "falsify": args.falsify, **extra},
        "trials": trials,
        "passes": passes,
        "counterexamples": bad,
        "probabilistic": prob,
    }
    _emit(args, doc)
    if args.falsify:
        return EXIT_OK
    return EXIT_OK if not bad and passes == trials else EXIT_FOUND


def cmd_sweep(args) -> int:
    cells = [Cell(m, r, q) for m in args.models for r in args.r for q in args.q]
    rows = sweep(cells, args.checks, workers=args.workers, budget=args.budget)
    if args.format == "table":
        text = format_table(rows, timings=args.timings)
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
    else:
        _emit(args, {"run_config": _config(args, "sweep").to_json(),
                     "rows": [r.to_json(args.timings) for r in rows]})
    return EXIT_OK if all(r.error is None and all(v in ("pass", "absent") for v in r.checks.values())
                          for r in rows) else EXIT_FOUND


# --- parser -------------------------------------------------------------------

def _csv(kind):
    def parse(text):
        return [kind(x) for x in text.replace(",", " ").split()]
    return parse


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="gridfree", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="count", default=0, help="more progress on stderr")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def field_args(p, required=True):
        p.add_argument("--p", type=int, required=required, help="odd prime characteristic")
        p.add_argument("--k", type=int, default=1, help="extension degree")

    p = sub.add_parser("field-info", help="describe GF(p^k)")
    field_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_field_info)

    p = sub.add_parser("construct", help="build a hypergraph and write its JSON")
    p.add_argument("--model", choices=MODELS, default="hrq")
    p.add_argument("--r", type=int, required=True)
    field_args(p)
    p.add_argument("--alphas", type=_csv(int), help="nonsquare layers as canonical element indices")
    p.add_argument("--tie", choices=TIE_RULES, default="min-x")
    p.add_argument("--direction", default=HORIZONTAL, help="horizontal, vertical, or 'X,Y' at infinity")
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="audit a hypergraph JSON file")
    p.add_argument("file")
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="look for a grid, punctured grid or wicket")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--pattern", choices=KINDS, default="grid")
    p.add_argument("--r", type=int, help="pattern size (default: the hypergraph's r)")
    p.add_argument("--t", type=int)
    p.add_argument("--holes", help="explicit 0-based holes, e.g. '0,0;1,2'")
    p.add_argument("--transverse-only", action="store_true")
    p.add_argument("--all", action="store_true", help="enumerate every copy instead of stopping at the first")
    p.add_argument("--budget", type=int, help="node cap (default: GRIDFREE_MAX_NODES or 1e8)")
    p.add_argument("--emit-embeddings")
    p.add_argument("--out")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("cb", help="randomized Cayley-Bacharach style checks")
    p.add_argument("--mode", choices=("lemma", "budget", "alon-furedi", "grid-cert"), required=True)
    p.add_argument("--r", type=int, default=3)
    field_args(p)
    p.add_argument("--d", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--falsify", action="store_true", help="allow degrees past the admissible budget")
    p.add_argument("--model", choices=("hrq", "parallel"), default="hrq", help="grid-cert model")
    p.add_argument("--max-points", type=int, default=64, help="alon-furedi grid size cap")
    p.add_argument("--out")
    p.set_defaults(func=cmd_cb)

    p = sub.add_parser("sweep", help="construct and check a grid of instances")
    p.add_argument("--models", type=_csv(str), default=["hrq"])
    p.add_argument("--r", type=_csv(int), default=[3])
    p.add_argument("--q", type=_csv(int), default=[])
    p.add_argument("--checks", type=_csv(str), default=["verify"])
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--budget", type=int)
    p.add_argument("--format", choices=("json", "table"), default="table")
    p.add_argument("--timings", action="store_true", help="include runtimes (JSON output then varies run to run)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.cmd == "cb" and args.mode == "grid-cert" and args.model not in ("hrq", "parallel"):
        ap.error("grid-cert supports hrq and parallel")
    if args.cmd == "sweep":
        for m in args.models:
            if m not in MODELS:
                ap.error(f"unknown model {m!r}")
        for c in args.checks:
            if c not in ("verify", "grid"):
                ap.error(f"unknown check {c!r}")
    try:
        return args.func(args)
    except ChecksFailed as exc:
        print(f"checks failed: {exc}", file=sys.stderr)
        return EXIT_FOUND
    except ParseError as exc:
        print(f"cannot parse input: {exc}", file=sys.stderr)
        return EXIT_FOUND
    except InstanceTooLarge as exc:
        print(f"instance too large: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, GridFreeError, ValueError) as exc:
        print(f"{ap.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
