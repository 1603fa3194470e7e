"""``phylo`` command line.

Exit codes are shared by all commands: 0 satisfiable/valid/ok,
1 unsatisfiable/invalid, 2 input error, 3 clause class error (not tame).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .connectivity import BACKENDS
from .errors import CapExceeded, GraphViolation, NotTame, ParseError, PhyloError, UnmappedVariable
from .formula import EarlyUnsat, classify, normalize, parse_formula
from .hardness import closure_tests, parse_split_instance, parse_templates, reduce_split_to_phylogeny, split_formula
from .instances import incidence_girth, load_catalog, load_graph, phi_k, random_satisfiable_tame
from .solver import Satisfiable, solve, verify_unsat_witness
from .tree import oracle_satisfiable, parse_newick, to_newick, verify_solution

EXIT_OK, EXIT_NO, EXIT_INPUT, EXIT_CLASS = 0, 1, 2, 3


class InputError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    digest: str = ""
    verdict: str = ""
    witness: str = ""
    timings: dict[str, float] = field(default_factory=dict)
    backend: str = "-"
    extra: dict[str, object] = field(default_factory=dict)

    def as_dict(self):
        out = {
            "command": self.command,
            "digest": self.digest,
            "verdict": self.verdict,
            "witness": self.witness,
            "timings": {k: round(v, 3) for k, v in self.timings.items()},
            "backend": self.backend,
        }
        out.update(self.extra)
        return out

    def to_text(self, prefix=""):
        lines = []
        for key, value in self.as_dict().items():
            if key == "timings":
                for phase, ms in value.items():
                    lines.append(f"{phase}_ms: {ms}")
            elif isinstance(value, (list, tuple)):
                lines.append(f"{key}: {' '.join(map(str, value))}")
            elif key != "formula":
                lines.append(f"{key}: {value}")
        return "".join(prefix + line + "\n" for line in lines)


class _Clock:
    def __init__(self, report):
        self.report = report

    def __call__(self, phase):
        report = self.report

        class _Phase:
            def __enter__(self):
                self.t = time.perf_counter()

            def __exit__(self, *exc):
                report.timings[phase] = report.timings.get(phase, 0.0) + (time.perf_counter() - self.t) * 1e3

        return _Phase()


def _read(path) -> tuple[str, str]:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError:
        raise InputError(f"{path} is not UTF-8") from None
    return text, "sha256:" + hashlib.sha256(data).hexdigest()


def _emit(report: RunReport, args, code: int, body: str = "") -> int:
    if args.json:
        print(json.dumps(report.as_dict(), indent=2, sort_keys=False))
    else:
        if body:
            sys.stdout.write(body)
            sys.stdout.write(report.to_text(prefix="# "))
        else:
            sys.stdout.write(report.to_text())
    return code


def _witness_vars(formula, variables):
    return " ".join(formula.names[v] for v in sorted(variables))


def cmd_solve(args) -> int:
    report = RunReport("solve", backend=args.connectivity)
    clock = _Clock(report)
    text, report.digest = _read(args.path)
    with clock("parse"):
        formula = parse_formula(text)
    with clock("solve"):
        norm = normalize(formula)
        if not isinstance(norm, EarlyUnsat):
            cls = classify(norm)
            bad = cls.first_non_tame()
            if bad is not None:
                report.verdict = "not-tame"
                report.witness = f"clause {bad}: {formula.clause_text(formula.clauses[bad])}"
                report.extra["clause"] = bad
                return _emit(report, args, EXIT_CLASS)
        result = solve(formula, backend=args.connectivity)
    with clock("verify"):
        if isinstance(result, Satisfiable):
            ok = verify_solution(formula, result.tree, result.alpha).valid
        else:
            ok = verify_unsat_witness(formula, result)
    if not ok:
        raise PhyloError("internal error: witness failed verification")
    if isinstance(result, Satisfiable):
        report.verdict = "satisfiable"
        report.witness = to_newick(result.tree)
        return _emit(report, args, EXIT_OK)
    report.verdict = "unsatisfiable"
    report.witness = "{" + ",".join(formula.names[v] for v in sorted(result.variables)) + "}"
    report.extra["witness_clauses"] = list(result.clauses)
    return _emit(report, args, EXIT_NO)


def cmd_verify(args) -> int:
    report = RunReport("verify")
    clock = _Clock(report)
    text, report.digest = _read(args.formula)
    newick, _ = _read(args.tree)
    with clock("parse"):
        formula = parse_formula(text)
        tree = parse_newick(newick)
    with clock("verify"):
        alpha = tree.identity_assignment(formula)
        res = verify_solution(formula, tree, alpha)
    report.witness = to_newick(tree)
    if res.valid:
        report.verdict = "valid"
        return _emit(report, args, EXIT_OK)
    report.verdict = "invalid"
    i = res.first_failed_clause
    report.extra["failed_clause"] = i
    report.extra["failed_text"] = formula.clause_text(formula.clauses[i])
    return _emit(report, args, EXIT_NO)


def cmd_classify(args) -> int:
    report = RunReport("classify")
    text, report.digest = _read(args.path)
    formula = parse_formula(text)
    res = classify(formula)
    report.verdict = str(res.verdict)
    for i, f in enumerate(res.flags):
        tags = [name for name, on in (("degenerate-unsat", f.degenerate_unsat), ("trivial", f.trivial), ("tame", f.tame)) if on]
        report.extra[f"clause_{i}"] = ",".join(tags) or "non-tame"
    return _emit(report, args, EXIT_OK)


def cmd_split(args) -> int:
    report = RunReport("split")
    text, report.digest = _read(args.path)
    formula = parse_formula(text)
    for i, c in enumerate(formula.clauses):
        f = split_formula(c, formula.names)
        flags = closure_tests(f)
        report.extra[f"split_{i}"] = str(f)
        report.extra[f"closure_{i}"] = " ".join(f"{k}={int(v)}" for k, v in flags.as_dict().items())
    report.verdict = "ok"
    return _emit(report, args, EXIT_OK)


def cmd_reduce(args) -> int:
    report = RunReport("reduce")
    tpl_text, _ = _read(args.templates)
    inst_text, report.digest = _read(args.instance)
    templates = parse_templates(tpl_text)
    inst = parse_split_instance(inst_text, templates)
    formula = reduce_split_to_phylogeny(inst)
    report.verdict = "ok"
    report.extra.update(variables=formula.n, clauses=len(formula.clauses), formula=formula.to_text())
    return _emit(report, args, EXIT_OK, body=formula.to_text())


def _find_graph(name):
    catalog = load_catalog()
    for key, g in catalog.items():
        if key.lower() == name.lower():
            return g
    if Path(name).exists():
        return load_graph(name)
    raise InputError(f"unknown graph {name!r}; catalog has {', '.join(catalog)}")


def cmd_genhard(args) -> int:
    report = RunReport("genhard", backend=args.connectivity)
    g = _find_graph(args.graph)
    report.digest = "sha256:" + hashlib.sha256(g.to_text().encode()).hexdigest()
    inst = phi_k(g, args.variant)
    result = solve(inst.formula, backend=args.connectivity)
    report.verdict = "satisfiable" if result.satisfiable else "unsatisfiable"
    ig = incidence_girth(inst.formula)
    report.extra.update(
        graph=g.name, vertices=g.n, girth=inst.k, incidence_girth=str(ig),
        clauses=len(inst.formula.clauses), formula=inst.formula.to_text(),
    )
    return _emit(report, args, EXIT_OK, body=inst.formula.to_text())


def cmd_oracle(args) -> int:
    report = RunReport("oracle")
    clock = _Clock(report)
    text, report.digest = _read(args.path)
    with clock("parse"):
        formula = parse_formula(text)
    with clock("solve"):
        res = oracle_satisfiable(formula)
    if res.satisfiable:
        report.verdict = "satisfiable"
        report.witness = to_newick(res.tree)
        return _emit(report, args, EXIT_OK)
    report.verdict = "unsatisfiable"
    return _emit(report, args, EXIT_NO)


def cmd_bench(args) -> int:
    seed = args.seed
    env = os.environ.get("PHYLO_SEED")
    if env is not None:
        try:
            seed = int(env)
        except ValueError:
            raise InputError(f"PHYLO_SEED must be an integer, got {env!r}") from None
    report = RunReport("bench", backend=args.connectivity)
    report.digest = f"random n={args.n} m={args.m} seed={seed}"
    clock = _Clock(report)
    with clock("generate"):
        formula = random_satisfiable_tame(args.n, args.m, seed)
    runs = []
    for _ in range(args.repeat):
        t = time.perf_counter()
        result = solve(formula, backend=args.connectivity)
        runs.append((time.perf_counter() - t) * 1e3)
    report.timings["solve"] = min(runs)
    with clock("verify"):
        ok = isinstance(result, Satisfiable) and verify_solution(formula, result.tree, result.alpha).valid
    report.verdict = "satisfiable" if ok else "error"
    report.extra.update(n=args.n, m=formula.m, seed=seed, solve_runs_ms=[round(r, 3) for r in runs])
    return _emit(report, args, EXIT_OK if ok else EXIT_NO)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the report as JSON")
    backend = argparse.ArgumentParser(add_help=False)
    backend.add_argument("--connectivity", choices=BACKENDS, default="hdt", help="connectivity backend (default hdt)")

    p = argparse.ArgumentParser(prog="phylo", description="Rooted triple formula toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common, backend], help="decide a tame formula")
    s.add_argument("path")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("verify", parents=[common], help="check a Newick tree against a formula")
    s.add_argument("formula")
    s.add_argument("tree")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("classify", parents=[common], help="P / NP-complete verdict for the clause class")
    s.add_argument("path")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("split", parents=[common], help="split formulas and closure flags per clause")
    s.add_argument("path")
    s.set_defaults(func=cmd_split)

    s = sub.add_parser("reduce", parents=[common], help="reduce a split instance to a phylogeny formula")
    s.add_argument("instance")
    s.add_argument("templates")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("genhard", parents=[common, backend], help="unsatisfiable instance from a cubic graph")
    s.add_argument("graph", help="catalog name (e.g. K4, Heawood) or graph file")
    s.add_argument("--variant", choices=("edge", "pred-succ"), default="edge")
    s.set_defaults(func=cmd_genhard)

    s = sub.add_parser("oracle", parents=[common], help="brute-force satisfiability (small n)")
    s.add_argument("path")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("bench", parents=[common, backend], help="time the solver on random satisfiable instances")
    s.add_argument("--n", type=int, default=100000)
    s.add_argument("--m", type=int, default=100000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--repeat", type=int, default=1)
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NotTame as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CLASS
    except (InputError, ParseError, UnmappedVariable, CapExceeded, GraphViolation, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
