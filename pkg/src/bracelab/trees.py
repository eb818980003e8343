"""Decorated rooted trees, grafting, and the free symmetric brace algebra SB(X).

Everything here is ungraded, so no signs appear.  Vertices are addressed by
paths: the root is ``()`` and ``path + (i,)`` is the i-th child in canonical order.
"""

from __future__ import annotations

import itertools
import re
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .graded import format_scalar, to_scalar
from .report import CheckReport


class DecoratedTree:
    """A rooted tree with a label on every vertex, children kept in canonical order."""

    __slots__ = ("label", "children", "size", "_key")

    def __init__(self, label: str, children: Iterable["DecoratedTree"] = ()):
        self.label = str(label)
        self.children = tuple(sorted(children, key=lambda t: t.key))
        self.size = 1 + sum(c.size for c in self.children)
        self._key = (self.size, self.label, tuple(c.key for c in self.children))

    @property
    def key(self):
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, DecoratedTree) and self._key == other._key

    def __lt__(self, other: "DecoratedTree") -> bool:
        return self._key < other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"DecoratedTree({self})"

    def __str__(self) -> str:
        if not self.children:
            return self.label
        return self.label + "(" + ",".join(str(c) for c in self.children) + ")"

    def vertices(self) -> list[tuple[int, ...]]:
        """All vertex paths in preorder."""
        out = [()]
        for i, c in enumerate(self.children):
            out.extend((i,) + p for p in c.vertices())
        return out

    def at(self, path: Sequence[int]) -> "DecoratedTree":
        t = self
        for i in path:
            t = t.children[i]
        return t

    def labels(self) -> list[str]:
        return [self.at(p).label for p in self.vertices()]

    def edges(self) -> int:
        return self.size - 1

    def shape(self) -> "DecoratedTree":
        """The underlying undecorated tree (every label replaced by '*')."""
        return DecoratedTree("*", [c.shape() for c in self.children])

    def relabel(self, fn: Callable[[tuple, str], str], _path: tuple = ()) -> "DecoratedTree":
        """Relabel vertex by vertex; ``fn`` sees the path in this tree and the old label."""
        return DecoratedTree(fn(_path, self.label),
                             [c.relabel(fn, _path + (i,)) for i, c in enumerate(self.children)])


def RootedTree(children: Iterable[DecoratedTree] = ()) -> DecoratedTree:
    """An undecorated rooted tree; all vertices carry the placeholder label '*'."""
    return DecoratedTree("*", children)


def singleton(label: str) -> DecoratedTree:
    return DecoratedTree(label)


def graft(S: DecoratedTree, attach: Sequence[DecoratedTree], v: Sequence[tuple[int, ...]]) -> DecoratedTree:
    """Connect the root of attach[i] to the vertex v[i] of S."""
    if len(attach) != len(v):
        raise ValueError("one target vertex is needed per attached tree")
    verts = set(S.vertices())
    for p in v:
        if tuple(p) not in verts:
            raise ValueError(f"vertex {tuple(p)} is not in the host tree")
    by_vertex: dict = {}
    for t, p in zip(attach, v):
        by_vertex.setdefault(tuple(p), []).append(t)
    return _graft(S, by_vertex, ())


def _graft(S: DecoratedTree, by_vertex: dict, path: tuple) -> DecoratedTree:
    kids = [_graft(c, by_vertex, path + (i,)) for i, c in enumerate(S.children)]
    kids.extend(by_vertex.get(path, ()))
    return DecoratedTree(S.label, kids)


def vertex_assignments(S: DecoratedTree, n: int):
    return itertools.product(S.vertices(), repeat=n)


class TreeLC:
    """A finite linear combination of decorated trees with rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[DecoratedTree, object] | None = None):
        self.terms = {t: to_scalar(c) for t, c in (terms or {}).items() if c}

    @classmethod
    def of(cls, tree: DecoratedTree | str, coeff=1) -> "TreeLC":
        if isinstance(tree, str):
            tree = parse_tree(tree)
        return cls({tree: coeff})

    def _combine(self, other: "TreeLC", c) -> "TreeLC":
        out = dict(self.terms)
        for t, x in other.terms.items():
            y = out.get(t, 0) + c * x
            if y:
                out[t] = y
            else:
                out.pop(t, None)
        return TreeLC(out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "TreeLC":
        c = to_scalar(c)
        return TreeLC({t: c * x for t, x in self.terms.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other) -> bool:
        return isinstance(other, TreeLC) and self.terms == other.terms

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> list[DecoratedTree]:
        return sorted(self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = ""
        for i, t in enumerate(sorted(self.terms)):
            c = self.terms[t]
            mag = abs(c)
            body = str(t) if mag == 1 else f"{format_scalar(mag)}*{t}"
            if i == 0:
                out = ("-" if c < 0 else "") + body
            else:
                out += (" - " if c < 0 else " + ") + body
        return out

    def __repr__(self) -> str:
        return f"TreeLC({self})"


def free_brace(x: TreeLC, args: Sequence[TreeLC]) -> TreeLC:
    """x<x_1..x_n> in SB(X): sum over all ways to graft the roots of the x_i onto vertices of x."""
    args = list(args)
    if not args:
        return x
    out: dict = {}
    for S, c in x.terms.items():
        for combo in itertools.product(*[list(a.terms.items()) for a in args]):
            coeff = c
            trees = []
            for t, ct in combo:
                coeff *= ct
                trees.append(t)
            for v in vertex_assignments(S, len(trees)):
                g = graft(S, trees, v)
                out[g] = out.get(g, 0) + coeff
    return TreeLC(out)


def free_pre_lie(x: TreeLC, y: TreeLC) -> TreeLC:
    return free_brace(x, [y])


def eval_tree(T: DecoratedTree, b, alg, _path: tuple = ()):
    """T(b) := b(r)<T_1(b_1), ..., T_m(b_m)>.

    ``b`` is a mapping from labels to elements or a callable ``(path, label) -> element``.
    """
    root = b(_path, T.label) if callable(b) else b[T.label]
    if not T.children:
        return root
    return alg.brace(root, [eval_tree(c, b, alg, _path + (i,)) for i, c in enumerate(T.children)])


def universal_map(phi: Mapping[str, object], alg, zero=None) -> Callable[[TreeLC], object]:
    """The brace morphism SB(X) -> B extending phi on generators."""

    def run(x: TreeLC):
        acc = zero
        for T in sorted(x.terms):
            term = eval_tree(T, phi, alg).scale(x.terms[T])
            acc = term if acc is None else acc + term
        if acc is None:
            raise ValueError("image of the zero combination needs an explicit zero element")
        return acc

    return run


def _unique_labels(S: DecoratedTree, attach: Sequence[DecoratedTree]):
    """Relabel every vertex of S and the attached trees with a fresh name; return the map back."""
    back: dict = {}
    counter = itertools.count()

    def fresh(tag):
        def fn(path, label):
            name = f"{tag}{next(counter)}"
            back[name] = label
            return name
        return fn

    S2 = S.relabel(fresh("s"))
    att2 = [t.relabel(fresh(f"t{i}_")) for i, t in enumerate(attach)]
    return S2, att2, back


def check_graft_expansion(S: DecoratedTree, attach: Sequence[DecoratedTree], decoration: Mapping,
                          alg) -> CheckReport:
    """S(c)<S_1(c_1), ..., S_n(c_n)> against the sum over vertex assignments of grafted trees.

    Vertices are renamed apart first, so the decoration may reuse labels freely.
    """
    S2, att2, back = _unique_labels(S, attach)
    c = {name: decoration[label] for name, label in back.items()}
    lhs = alg.brace(eval_tree(S2, c, alg), [eval_tree(t, c, alg) for t in att2])
    rhs = None
    for v in vertex_assignments(S2, len(att2)):
        term = eval_tree(graft(S2, att2, v), c, alg)
        rhs = term if rhs is None else rhs + term
    ok = alg.equal(lhs, rhs)
    return CheckReport(f"graft expansion |S|={S.size} n={len(attach)}", ok, 1,
                       counterexample=None if ok else alg.difference(lhs, rhs))


def count_labeled_trees(n: int) -> int:
    """Number of decorated trees whose n vertices carry n distinct labels, built via free braces.

    Every such tree with n >= 2 has a leaf; removing it and grafting it back
    is one term of T<leaf>, so growing leaves from smaller trees reaches all of them.
    """
    if n < 1:
        raise ValueError("n must be positive")
    labels = [str(i) for i in range(1, n + 1)]
    layer: dict = {frozenset([l]): {singleton(l)} for l in labels}
    for size in range(2, n + 1):
        nxt: dict = {}
        for subset in itertools.combinations(labels, size):
            fs = frozenset(subset)
            trees = set()
            for j in subset:
                leaf = TreeLC.of(singleton(j))
                for T in layer[fs - {j}]:
                    trees.update(free_brace(TreeLC.of(T), [leaf]).terms)
            nxt[fs] = trees
        layer = nxt
    return len(layer[frozenset(labels)])


def tree_brace_oracle():
    from .braces import BraceAlgebraOracle
    return BraceAlgebraOracle(brace=free_brace, degree=lambda x: 0,
                              describe=lambda a, b: f"{a} != {b}")


# text notation

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z0-9_']*)|(.))")


class ParseError(ValueError):
    pass


class _Tokens:
    def __init__(self, text: str):
        self.toks = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                break
            num, name, sym = m.groups()
            if num:
                self.toks.append(("num", num))
            elif name:
                self.toks.append(("name", name))
            elif sym and not sym.isspace():
                self.toks.append(("sym", sym))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind or "token"
            raise ParseError(f"expected {want!r}, found {tok[1]!r}")
        self.i += 1
        return tok

    def at_end(self) -> bool:
        return self.i >= len(self.toks)


def _parse_tree(tk: _Tokens) -> DecoratedTree:
    _, label = tk.take("name")
    kids = []
    if tk.peek() == ("sym", "("):
        tk.take()
        kids.append(_parse_tree(tk))
        while tk.peek() == ("sym", ","):
            tk.take()
            kids.append(_parse_tree(tk))
        tk.take("sym", ")")
    return DecoratedTree(label, kids)


def parse_tree(text: str) -> DecoratedTree:
    """Parse ``a(b,c(d))``."""
    tk = _Tokens(text)
    t = _parse_tree(tk)
    if not tk.at_end():
        raise ParseError(f"trailing input after tree: {tk.peek()[1]!r}")
    return t


def _parse_atom(tk: _Tokens) -> TreeLC:
    if tk.peek() == ("sym", "["):
        tk.take()
        x = _parse_sum(tk)
        tk.take("sym", "]")
    else:
        x = TreeLC.of(_parse_tree(tk))
    while tk.peek() == ("sym", "<"):
        tk.take()
        args = []
        if tk.peek() != ("sym", ">"):
            args.append(_parse_sum(tk))
            while tk.peek() == ("sym", ","):
                tk.take()
                args.append(_parse_sum(tk))
        tk.take("sym", ">")
        x = free_brace(x, args)
    return x


def _parse_term(tk: _Tokens) -> TreeLC:
    coeff = Fraction(1)
    if tk.peek()[0] == "num":
        coeff = Fraction(tk.take()[1])
        tk.take("sym", "*")
    return _parse_atom(tk).scale(coeff)


def _parse_sum(tk: _Tokens) -> TreeLC:
    sign = 1
    if tk.peek() == ("sym", "-"):
        tk.take()
        sign = -1
    x = _parse_term(tk).scale(sign)
    while tk.peek() in (("sym", "+"), ("sym", "-")):
        s = tk.take()[1]
        t = _parse_term(tk)
        x = x + t if s == "+" else x - t
    return x


def parse_expression(text: str) -> TreeLC:
    """Evaluate a free-brace expression such as ``a(b)<c>`` or ``2*a<b,c> - [a + b]<c>``."""
    tk = _Tokens(text)
    if tk.at_end():
        raise ParseError("empty expression")
    x = _parse_sum(tk)
    if not tk.at_end():
        raise ParseError(f"unexpected {tk.peek()[1]!r}")
    return x


def parse_lc(text: str) -> TreeLC:
    """Parse a printed linear combination; inverse of ``str(TreeLC)``."""
    if text.strip() == "0":
        return TreeLC()
    return parse_expression(text)
