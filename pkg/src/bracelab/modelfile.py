"""Plain-text model files: spaces, maps, structures, contractions and tasks.

A file is a sequence of lines; ``#`` starts a comment.

    space V = x:0, y:0, z:1
    map d : V -> V degree -1
    d(z) = y
    map mu2 : V^2 -> V degree 0
    mu2(x, x) = y + 1/2*z
    structure mu = d + mu2
    contraction C dV=d dW=dW f=f g=g h=h
    task check a-infinity mu N=4

Map entries may appear anywhere after their declaration.  An ``antisym``
suffix on a map declaration stores it as an antisymmetric map.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .graded import GradedSpace, MultiMap, format_coeffs

TASK_KINDS = {
    "check": ("a-infinity", "l-infinity", "brace-axiom"),
    "transfer": ("a-infinity", "l-infinity"),
    "gauge": ("gauge",),
}


class ModelError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class Task:
    command: str
    kind: str
    args: tuple[str, ...] = ()
    params: dict = field(default_factory=dict)
    line: int | None = field(default=None, compare=False)

    def param(self, key: str, default=None):
        return self.params.get(key, default)

    def text(self) -> str:
        parts = ["task", self.command]
        if self.command != "gauge":
            parts.append(self.kind)
        parts += list(self.args)
        parts += [f"{k}={v}" for k, v in self.params.items()]
        return " ".join(parts)


@dataclass
class ContractionDecl:
    name: str
    dV: str
    dW: str
    f: str
    g: str
    h: str


@dataclass
class ModelFile:
    spaces: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    structures: dict = field(default_factory=dict)
    contractions: dict = field(default_factory=dict)
    tasks: list = field(default_factory=list)

    def space_name(self, space: GradedSpace) -> str:
        for name, s in self.spaces.items():
            if s == space:
                return name
        raise KeyError("space not declared")


_NAME = r"[A-Za-z_][A-Za-z0-9_']*"
_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*\*\s*)?(" + _NAME + r")\s*")


def parse_vector(text: str, space: GradedSpace, line: int | None = None) -> dict:
    text = text.strip()
    if text == "0":
        return {}
    out: dict = {}
    pos = 0
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos or (not first and not m.group(1)):
            raise ModelError(f"cannot parse vector {text!r}", line)
        sign, coeff, name = m.groups()
        if name not in space.names:
            raise ModelError(f"unknown basis element {name!r}", line)
        c = Fraction(coeff) if coeff else Fraction(1)
        if sign == "-":
            c = -c
        i = space.index(name)
        out[i] = out.get(i, 0) + c
        if not out[i]:
            del out[i]
        pos = m.end()
        first = False
    return out


def _split_params(tokens):
    args, params = [], {}
    for t in tokens:
        if "=" in t:
            k, v = t.split("=", 1)
            params[k] = v
        else:
            args.append(t)
    return args, params


_SPACE = re.compile(r"space\s+(" + _NAME + r")\s*=\s*(.*)$")
_MAP = re.compile(r"map\s+(" + _NAME + r")\s*:\s*(" + _NAME + r")(?:\s*\^\s*(\d+))?\s*->\s*(" + _NAME
                  + r")\s+degree\s+(-?\d+)(\s+antisym)?\s*$")
_STRUCT = re.compile(r"structure\s+(" + _NAME + r")\s*=\s*(.*)$")
_ENTRY = re.compile(r"(" + _NAME + r")\s*\(([^)]*)\)\s*=\s*(.*)$")


def parse_model(text: str) -> ModelFile:
    model = ModelFile()
    pending: dict = {}  # map name -> (decl, entries, line)
    order: list = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split()[0]
        if head == "space":
            _parse_space(model, line, lineno)
        elif head == "map":
            m = _MAP.match(line)
            if not m:
                raise ModelError("expected 'map NAME : SRC[^k] -> TGT degree P [antisym]'", lineno)
            name, src, k, tgt, deg, anti = m.groups()
            if name in pending or name in model.structures:
                raise ModelError(f"{name!r} declared twice", lineno)
            for s in (src, tgt):
                if s not in model.spaces:
                    raise ModelError(f"unknown space {s!r}", lineno)
            pending[name] = ((src, int(k or 1), tgt, int(deg), bool(anti)), {}, lineno)
            order.append(name)
        elif head == "structure":
            m = _STRUCT.match(line)
            if not m:
                raise ModelError("expected 'structure NAME = map + map + ...'", lineno)
            name, body = m.groups()
            parts = [p.strip() for p in body.split("+")]
            for p in parts:
                if p not in pending:
                    raise ModelError(f"unknown map {p!r}", lineno)
            if name in model.structures or name in pending:
                raise ModelError(f"{name!r} declared twice", lineno)
            model.structures[name] = tuple(parts)
        elif head == "contraction":
            args, params = _split_params(line.split()[1:])
            if len(args) != 1 or set(params) != {"dV", "dW", "f", "g", "h"}:
                raise ModelError("expected 'contraction NAME dV=.. dW=.. f=.. g=.. h=..'", lineno)
            for v in params.values():
                if v not in pending:
                    raise ModelError(f"unknown map {v!r}", lineno)
            model.contractions[args[0]] = ContractionDecl(args[0], **params)
        elif head == "task":
            model.tasks.append(_parse_task(line, lineno))
        else:
            m = _ENTRY.match(line)
            if not m or m.group(1) not in pending:
                raise ModelError(f"cannot parse line {line!r}", lineno)
            name, argtext, rhs = m.groups()
            (src, k, tgt, _, _), entries, _ = pending[name]
            S, T = model.spaces[src], model.spaces[tgt]
            args = [a.strip() for a in argtext.split(",")] if argtext.strip() else []
            if len(args) != k:
                raise ModelError(f"{name} takes {k} inputs, got {len(args)}", lineno)
            for a in args:
                if a not in S.names:
                    raise ModelError(f"unknown basis element {a!r}", lineno)
            tup = tuple(S.index(a) for a in args)
            if tup in entries:
                raise ModelError(f"{name}{argtext and '(' + argtext + ')'} given twice", lineno)
            entries[tup] = (parse_vector(rhs, T, lineno), lineno)
    for name in order:
        (src, k, tgt, deg, anti), entries, lineno = pending[name]
        model.maps[name] = _build_map(name, model.spaces[src], k, model.spaces[tgt], deg, anti, entries, lineno)
    return model


def _parse_space(model: ModelFile, line: str, lineno: int):
    m = _SPACE.match(line)
    if not m:
        raise ModelError("expected 'space NAME = b:deg, ...'", lineno)
    name, body = m.groups()
    if name in model.spaces:
        raise ModelError(f"space {name!r} declared twice", lineno)
    pairs = []
    if body.strip():
        for item in body.split(","):
            bits = item.split(":")
            if len(bits) != 2 or not re.fullmatch(_NAME, bits[0].strip()):
                raise ModelError(f"bad basis element {item.strip()!r}", lineno)
            try:
                pairs.append((bits[0].strip(), int(bits[1])))
            except ValueError:
                raise ModelError(f"bad degree in {item.strip()!r}", lineno) from None
    try:
        model.spaces[name] = GradedSpace.from_pairs(pairs)
    except ValueError as e:
        raise ModelError(str(e), lineno) from None


def _build_map(name, S, k, T, deg, anti, entries, lineno) -> MultiMap:
    data = {}
    for tup, (val, eline) in entries.items():
        try:
            MultiMap(S, k, deg, {tup: val}, anti, T)
        except ValueError as e:
            raise ModelError(f"{name}: {e}", eline) from None
        data[tup] = val
    try:
        return MultiMap(S, k, deg, data, anti, T)
    except ValueError as e:
        raise ModelError(f"{name}: {e}", lineno) from None


def _parse_task(line: str, lineno: int) -> Task:
    tokens = line.split()[1:]
    if not tokens:
        raise ModelError("empty task", lineno)
    command = tokens[0]
    if command not in TASK_KINDS:
        raise ModelError(f"unknown task {command!r}", lineno)
    rest = tokens[1:]
    if command == "gauge":
        kind = "gauge"
    else:
        if not rest or rest[0] not in TASK_KINDS[command]:
            raise ModelError(f"task {command} needs one of {', '.join(TASK_KINDS[command])}", lineno)
        kind, rest = rest[0], rest[1:]
    args, params = _split_params(rest)
    if "N" in params and not params["N"].isdigit():
        raise ModelError("N must be a positive integer", lineno)
    return Task(command, kind, tuple(args), params, lineno)


def format_map(name: str, m: MultiMap, model: ModelFile) -> list[str]:
    src, tgt = model.space_name(m.source), model.space_name(m.target)
    power = f"^{m.arity}" if m.arity > 1 else ""
    lines = [f"map {name} : {src}{power} -> {tgt} degree {m.degree}" + (" antisym" if m.antisym else "")]
    for tup, val in sorted(m.stored_items()):
        args = ", ".join(m.source.names[i] for i in tup)
        lines.append(f"{name}({args}) = {format_coeffs(val, m.target.names)}")
    return lines


def format_model(model: ModelFile) -> str:
    out = []
    for name, s in model.spaces.items():
        body = ", ".join(f"{n}:{d}" for n, d in zip(s.names, s.degrees))
        out.append(f"space {name} = {body}")
    for name, m in model.maps.items():
        out += format_map(name, m, model)
    for name, parts in model.structures.items():
        out.append(f"structure {name} = {' + '.join(parts)}")
    for c in model.contractions.values():
        out.append(f"contraction {c.name} dV={c.dV} dW={c.dW} f={c.f} g={c.g} h={c.h}")
    for t in model.tasks:
        out.append(t.text())
    return "\n".join(out) + "\n"


def models_equal(a: ModelFile, b: ModelFile) -> bool:
    if a.spaces != b.spaces or a.structures != b.structures or a.contractions != b.contractions:
        return False
    if a.tasks != b.tasks or list(a.maps) != list(b.maps):
        return False
    for name, m in a.maps.items():
        n = b.maps[name]
        if (m.source, m.target, m.arity, m.degree, m.antisym) != (n.source, n.target, n.arity, n.degree, n.antisym):
            return False
        if dict(m.stored_items()) != dict(n.stored_items()):
            return False
    return True
