"""Command-line front end: ``bracelab check|transfer|gauge <file>`` and ``bracelab free-sb <expr>``."""

from __future__ import annotations

import argparse
import itertools
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import gauge as gauge_mod
from .braces import check_nonsym_brace_axiom, check_sym_brace_axiom, multimap_oracle
from .graded import GradedSpace, MultiMap, OperatorSeries
from .modelfile import ModelError, ModelFile, Task, format_model, parse_model
from .report import CheckReport
from .structures import a_infinity_defect, defect_report, l_infinity_defect
from .transfer import Contraction, ContractionError, transfer_a_infinity, transfer_l_infinity
from .trees import parse_expression

DEFAULT_N = 4

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    pass


@dataclass
class TaskResult:
    task: Task
    N: int
    reports: list
    seconds: float = 0.0
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.reports)


@dataclass
class Report:
    command: str
    results: list

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def human(self) -> str:
        out = []
        for i, res in enumerate(self.results, 1):
            out.append(f"task {i}: {res.task.text()[5:]}  [N={res.N}]")
            for r in res.reports:
                out.append("  " + r.line())
            for note in res.notes:
                out.append("  " + note)
            out.append(f"  time {res.seconds:.3f}s")
        out.append(f"status: {'pass' if self.ok else 'fail'}")
        return "\n".join(out) + "\n"

    def machine(self) -> str:
        # no timing here, so two runs on the same file give identical bytes
        out = [f"command={self.command}", f"tasks={len(self.results)}"]
        for i, res in enumerate(self.results, 1):
            p = f"task.{i}"
            out += [f"{p}.spec={res.task.text()}", f"{p}.N={res.N}",
                    f"{p}.status={'pass' if res.ok else 'fail'}", f"{p}.results={len(res.reports)}"]
            for j, r in enumerate(res.reports, 1):
                q = f"{p}.result.{j}"
                out += [f"{q}.name={r.name}", f"{q}.status={'pass' if r.ok else 'fail'}", f"{q}.cases={r.cases}"]
                if r.detail:
                    out.append(f"{q}.detail={r.detail}")
                if r.counterexample:
                    out.append(f"{q}.counterexample={r.counterexample}")
            for k, note in enumerate(res.notes, 1):
                out.append(f"{p}.note.{k}={note}")
        out.append(f"status={'pass' if self.ok else 'fail'}")
        return "\n".join(out) + "\n"


# resolving names in a model

def _fail(task: Task, msg: str):
    raise ModelError(msg, task.line)


def _structure(model: ModelFile, name: str, task: Task, N: int, antisym: bool) -> OperatorSeries:
    if name not in model.structures:
        _fail(task, f"unknown structure {name!r}")
    maps = [model.maps[m] for m in model.structures[name]]
    if antisym and not all(m.antisym for m in maps):
        _fail(task, f"structure {name!r} must consist of antisym maps for an L-infinity task")
    if not antisym:
        maps = [m.as_plain() if m.antisym else m for m in maps]
    spaces = {(m.source, m.target) for m in maps}
    if len(spaces) != 1 or maps[0].source != maps[0].target:
        _fail(task, f"structure {name!r} mixes spaces")
    s_values = {m.b_degree for m in maps if not m.is_zero()}
    if len(s_values) > 1:
        _fail(task, f"structure {name!r} mixes B-degrees {sorted(s_values)}")
    s = s_values.pop() if s_values else -1
    if len({m.arity for m in maps}) != len(maps):
        _fail(task, f"structure {name!r} has two maps of the same arity")
    comps = {m.arity: m for m in maps if m.arity <= N}
    return OperatorSeries(maps[0].source, s, N, comps, antisym=antisym)


def _contraction(model: ModelFile, name: str, task: Task) -> Contraction:
    if name not in model.contractions:
        _fail(task, f"unknown contraction {name!r}")
    d = model.contractions[name]
    get = lambda k: model.maps[k].as_plain()
    dV, dW, f, g, h = get(d.dV), get(d.dW), get(d.f), get(d.g), get(d.h)
    try:
        return Contraction(dV.source, dW.source, dV, dW, f, g, h)
    except ContractionError as e:
        _fail(task, f"contraction {name}: {e}")


def _n_of(task: Task, override: int | None) -> int:
    if override is not None:
        return override
    return int(task.param("N", DEFAULT_N))


def _expect_args(task: Task, count: int, usage: str):
    if len(task.args) != count:
        _fail(task, f"usage: task {usage}")


# the commands

def run_check_task(model: ModelFile, task: Task, N: int) -> TaskResult:
    if task.kind in ("a-infinity", "l-infinity"):
        _expect_args(task, 1, f"check {task.kind} STRUCTURE [N=..]")
        sym = task.kind == "l-infinity"
        series = _structure(model, task.args[0], task, N, sym)
        if series.b_degree != -1:
            _fail(task, f"structure {task.args[0]!r} has B-degree {series.b_degree}, need -1")
        defect = l_infinity_defect(series, N) if sym else a_infinity_defect(series, N)
        return TaskResult(task, N, [defect_report(task.kind, defect)])
    # brace-axiom
    if not task.args:
        _fail(task, "usage: task check brace-axiom MAP [MAP ...] [depth=2]")
    for a in task.args:
        if a not in model.maps:
            _fail(task, f"unknown map {a!r}")
    maps = [model.maps[a] for a in task.args]
    if len({m.source for m in maps}) != 1 or any(m.source != m.target for m in maps):
        _fail(task, "brace-axiom maps must all be endomorphism maps of one space")
    sym = all(m.antisym for m in maps)
    depth = int(task.param("depth", 2))
    alg = multimap_oracle(sym=sym)
    check = check_sym_brace_axiom if sym else check_nonsym_brace_axiom
    reports = []
    for total in range(0, depth + 1):
        for m in range(0, total + 1):
            n = total - m
            cases, bad = 0, None
            for x in maps:
                for xs in itertools.product(maps, repeat=m):
                    for ys in itertools.product(maps, repeat=n):
                        arity = x.arity + sum(z.arity - 1 for z in xs + ys)
                        if arity > N:
                            continue
                        cases += 1
                        r = check(alg, x, xs, ys)
                        if not r.ok and bad is None:
                            bad = r
            kind = "sym" if sym else "nonsym"
            name = f"{kind}-brace-axiom m={m} n={n}"
            reports.append(CheckReport(name, bad is None, cases,
                                       counterexample=bad.counterexample if bad else None))
    return TaskResult(task, N, reports)


def run_transfer_task(model: ModelFile, task: Task, N: int) -> tuple[TaskResult, ModelFile]:
    _expect_args(task, 2, f"transfer {task.kind} STRUCTURE CONTRACTION [N=..] [out=NAME]")
    sym = task.kind == "l-infinity"
    series = _structure(model, task.args[0], task, N, sym)
    c = _contraction(model, task.args[1], task)
    if series.b_degree != -1:
        _fail(task, "only B-degree -1 structures can be transferred")
    if series[1] != c.dV:
        _fail(task, f"arity-1 part of {task.args[0]!r} must be the contraction's dV")
    out = transfer_l_infinity(series, c, N) if sym else transfer_a_infinity(series, c, N)
    name = task.param("out", "nu" if not sym else "k")
    result = _emit(model, c.W, name, out, task.kind, N)
    defect = l_infinity_defect(out, N) if sym else a_infinity_defect(out, N)
    return TaskResult(task, N, [defect_report(f"transferred {task.kind}", defect)]), result


def _emit(model: ModelFile, W: GradedSpace, name: str, series: OperatorSeries, kind: str, N: int) -> ModelFile:
    wname = model.space_name(W)
    out = ModelFile(spaces={wname: W})
    parts = []
    for k in range(1, N + 1):
        m = series[k]
        if k > 1 and m.is_zero():
            continue
        key = f"{name}{k}"
        out.maps[key] = m
        parts.append(key)
    out.structures[name] = tuple(parts)
    out.tasks.append(Task("check", kind, (name,), {"N": str(N)}))
    return out


def run_gauge_task(model: ModelFile, task: Task, N: int) -> TaskResult:
    _expect_args(task, 1, "gauge SPACE [nabla=S] [upsilon=S] [N=..] [sweep=2]")
    if task.args[0] not in model.spaces:
        _fail(task, f"unknown space {task.args[0]!r}")
    try:
        G = gauge_mod.GaugeSpace.from_space(model.spaces[task.args[0]])
    except ValueError as e:
        _fail(task, str(e))

    def series(key):
        sname = task.param(key)
        if sname is None:
            return []
        if sname not in model.structures:
            _fail(task, f"unknown structure {sname!r}")
        return [model.maps[m] for m in model.structures[sname]]

    try:
        nab = gauge_mod.nabla_map(G, series("nabla"), N)
        ups = gauge_mod.upsilon_map(G, series("upsilon"), N)
    except (gauge_mod.GaugeConstraintError, ValueError) as e:
        _fail(task, str(e))
    sweep = int(task.param("sweep", 2))
    defects = [("nabla<nabla> + nabla<upsilon>", gauge_mod.bbvd_defect(nab, ups, N)),
               ("upsilon<nabla> + upsilon<upsilon>", gauge_mod.jacobi_defect(nab, ups, N))]
    notes = []
    for label, d in defects:
        table = ", ".join(f"{k}:{len(list(d[k].stored_items()))}" for k in range(1, N + 1))
        notes.append(f"{label} nonzero entries by arity: {table}")
    reports = [
        *(defect_report(label, d) for label, d in defects),
        gauge_mod.check_decomposition(G, nab, ups, N),
        gauge_mod.jacobi_sweep(G, nab, ups, sweep),
    ]
    try:
        l = gauge_mod.assemble_l_infinity(nab, ups, N)
        reports.append(defect_report("assembled l-infinity", l_infinity_defect(l, N)))
    except gauge_mod.GaugeAssemblyError as e:
        reports.append(CheckReport(f"assembled l-infinity N={N}", False, 0, detail="not assembled",
                                   counterexample=str(e)))
    return TaskResult(task, N, reports, notes=notes)


def load(path: str) -> ModelFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    return parse_model(text)


def _tasks(model: ModelFile, command: str) -> list:
    tasks = [t for t in model.tasks if t.command == command]
    if not tasks:
        raise InputError(f"no 'task {command} ...' line in the file")
    return tasks


def cmd_check(path: str, N: int | None = None) -> Report:
    model = load(path)
    results = []
    for t in _tasks(model, "check"):
        t0 = time.perf_counter()
        res = run_check_task(model, t, _n_of(t, N))
        res.seconds = time.perf_counter() - t0
        results.append(res)
    return Report("check", results)


def cmd_transfer(path: str, N: int | None = None) -> tuple[Report, ModelFile]:
    model = load(path)
    results, emitted = [], None
    tasks = _tasks(model, "transfer")
    if len(tasks) > 1:
        raise ModelError("only one transfer task per file", tasks[1].line)
    for t in tasks:
        t0 = time.perf_counter()
        res, emitted = run_transfer_task(model, t, _n_of(t, N))
        res.seconds = time.perf_counter() - t0
        results.append(res)
    return Report("transfer", results), emitted


def cmd_gauge(path: str, N: int | None = None) -> Report:
    model = load(path)
    results = []
    for t in _tasks(model, "gauge"):
        t0 = time.perf_counter()
        res = run_gauge_task(model, t, _n_of(t, N))
        res.seconds = time.perf_counter() - t0
        results.append(res)
    return Report("gauge", results)


def cmd_free_sb(expr: str) -> str:
    return str(parse_expression(expr))


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bracelab", description="Exact brace-algebra computations.")
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-arity", type=int, default=None, metavar="N",
                        help=f"truncation arity (overrides the task's N; default {DEFAULT_N})")
    common.add_argument("--report", metavar="PATH", help="also write the report to PATH")
    common.add_argument("--machine", action="store_true", help="key=value report instead of the table")
    for name, helptext in (("check", "run check tasks"), ("gauge", "run gauge tasks")):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("file")
    sp = sub.add_parser("transfer", parents=[common], help="transfer a structure along a contraction")
    sp.add_argument("file")
    sp.add_argument("-o", "--output", metavar="OUT", help="write the transferred model here")
    sp = sub.add_parser("free-sb", help="evaluate a free symmetric brace expression")
    sp.add_argument("expr")
    return p


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "free-sb":
            print(cmd_free_sb(args.expr))
            return EXIT_OK
        if args.max_arity is not None and args.max_arity < 1:
            raise InputError("--max-arity must be at least 1")
        emitted = None
        if args.command == "check":
            report = cmd_check(args.file, args.max_arity)
        elif args.command == "gauge":
            report = cmd_gauge(args.file, args.max_arity)
        else:
            report, emitted = cmd_transfer(args.file, args.max_arity)
    except (ValueError, InputError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    text = report.machine() if args.machine else report.human()
    sys.stdout.write(text)
    if args.report:
        Path(args.report).write_text(text, encoding="utf-8")
    if emitted is not None:
        if args.output:
            Path(args.output).write_text(format_model(emitted), encoding="utf-8")
        else:
            sys.stdout.write(format_model(emitted))
    return EXIT_OK if report.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
