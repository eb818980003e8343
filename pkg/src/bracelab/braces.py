"""Nonsymmetric and symmetric braces on Hom-spaces, and generic brace-axiom checkers."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from .graded import MultiMap, OperatorSeries, add_into, antisymmetrize, is_antisymmetric
from .report import CheckReport, map_difference
from .signs import (antisym_koszul_sign, block_unshuffles0, brace_insertion_sequences,
                    iter_permutations, koszul_sign, unshuffles)


def _check_targets(f: MultiMap, gs: Sequence[MultiMap]):
    for g in gs:
        if g.source != f.source or g.target != f.source:
            raise ValueError("braces need maps on a single graded space")


def _zero_result(f: MultiMap, gs: Sequence[MultiMap], antisym: bool) -> MultiMap:
    r = sum(g.arity for g in gs) + f.arity - len(gs)
    return MultiMap.zero(f.source, r, f.degree + sum(g.degree for g in gs), antisym, f.target)


def nonsym_brace(f: MultiMap, gs: Sequence[MultiMap]) -> MultiMap:
    """f{g_1, ..., g_n}: order-preserving insertion of the g_j into distinct inputs of f.

    With slots s_1 < ... < s_n and N_j raw inputs preceding g_j, the term carries
    the sign exponent  sum_j (k - s_j) q_j + (q_j + a_j + 1) N_j + q_j D_j,
    where D_j is the total degree of those N_j inputs.  This is the convention
    for which antisymmetrization is a morphism onto the symmetric braces.
    """
    gs = list(gs)
    if not gs:
        return f
    _check_targets(f, gs)
    k, n = f.arity, len(gs)
    if n > k:
        return _zero_result(f, gs, False)
    a = [g.arity for g in gs]
    q = [g.degree for g in gs]
    r = sum(a) + k - n
    degs = f.source.degrees

    layouts = []
    for slots in itertools.combinations(range(1, k + 1), n):
        # plan entries: (j, start) for g_j, (None, start) for a raw input
        plan, pos, j = [], 0, 0
        const, starts = 0, []
        for slot in range(1, k + 1):
            if j < n and slots[j] == slot:
                N = slot - (j + 1) + sum(a[:j])
                const += (k - slot) * q[j] + (q[j] + a[j] + 1) * N
                starts.append((j, N))
                plan.append((j, pos))
                pos += a[j]
                j += 1
            else:
                plan.append((None, pos))
                pos += 1
        layouts.append((plan, const, starts))

    def fn(tup):
        prefix = [0]
        for x in tup:
            prefix.append(prefix[-1] + degs[x])
        acc: dict = {}
        for plan, const, starts in layouts:
            e = const + sum(q[j] * prefix[N] for j, N in starts)
            args = []
            for j, pos in plan:
                if j is None:
                    args.append({tup[pos]: 1})
                else:
                    v = gs[j].value(tup[pos:pos + a[j]])
                    if not v:
                        break
                    args.append(v)
            else:
                add_into(acc, f.eval_vectors(args), -1 if e % 2 else 1)
        return acc

    return MultiMap.from_function(f.source, r, f.degree + sum(q), fn, antisym=False, target=f.target)


def _require_antisym(m: MultiMap) -> MultiMap:
    if m.antisym:
        return m
    if not is_antisymmetric(m):
        raise ValueError("symmetric braces are defined on antisymmetric maps only")
    return m.as_antisym()


def _sym_delta(k: int, a: Sequence[int], q: Sequence[int]) -> int:
    n = len(a)
    d = sum((k - j + sum(a[:j - 1])) * q[j - 1] for j in range(1, n + 1))
    d += sum(a[i] * a[j] for i in range(n) for j in range(i + 1, n))
    d += sum((n - j) * a[j - 1] for j in range(1, n))
    return d


def _sym_brace_fn(f: MultiMap, gs: Sequence[MultiMap]):
    k, n = f.arity, len(gs)
    a = [g.arity for g in gs]
    q = [g.degree for g in gs]
    degs = f.source.degrees
    delta_sign = -1 if _sym_delta(k, a, q) % 2 else 1
    layouts = [(tuple(i for b in blocks for i in b), blocks)
               for blocks in block_unshuffles0(tuple(a) + (k - n,))]

    def fn(tup):
        ds = [degs[x] for x in tup]
        acc: dict = {}
        for perm, blocks in layouts:
            e = passed = 0
            args = []
            for j in range(n):
                blk = tuple(tup[i] for i in blocks[j])
                e += q[j] * passed
                v = gs[j].value(blk)
                if not v:
                    break
                args.append(v)
                passed += sum(degs[x] for x in blk)
            else:
                args.extend({tup[i]: 1} for i in blocks[n])
                sign = delta_sign * antisym_koszul_sign(perm, ds) * (-1 if e % 2 else 1)
                add_into(acc, f.eval_vectors(args), sign)
        return acc

    return fn


def sym_brace_hom(f: MultiMap, gs: Sequence[MultiMap]) -> MultiMap:
    """f<g_1, ..., g_n> on antisymmetric maps, summed over unshuffles with sign (-1)^delta chi."""
    gs = list(gs)
    f = _require_antisym(f)
    gs = [_require_antisym(g) for g in gs]
    if not gs:
        return f
    _check_targets(f, gs)
    if len(gs) > f.arity:
        return _zero_result(f, gs, True)
    r = sum(g.arity for g in gs) + f.arity - len(gs)
    return MultiMap.from_function(f.source, r, f.degree + sum(g.degree for g in gs),
                                  _sym_brace_fn(f, gs), antisym=True, target=f.target)


def sym_brace_values(f: MultiMap, gs: Sequence[MultiMap]) -> MultiMap:
    """Same formula as :func:`sym_brace_hom` but tabulated on every input tuple.

    Used to confirm that the formula really produces an antisymmetric map.
    """
    gs = [_require_antisym(g) for g in gs]
    f = _require_antisym(f)
    if not gs:
        return f.as_plain()
    if len(gs) > f.arity:
        return _zero_result(f, gs, False)
    r = sum(g.arity for g in gs) + f.arity - len(gs)
    return MultiMap.from_function(f.source, r, f.degree + sum(g.degree for g in gs),
                                  _sym_brace_fn(f, gs), antisym=False, target=f.target)


def _sum(terms, zero=None):
    acc = zero
    for t in terms:
        acc = t if acc is None else acc + t
    return acc


def symmetrize(f, gs: Sequence, nonsym: Callable = nonsym_brace, degree: Callable = None):
    """f<g_1..g_n> := sum over sigma of epsilon(sigma; |g|) f{g_sigma(1), ..., g_sigma(n)}."""
    gs = list(gs)
    degree = degree or (lambda g: g.b_degree)
    if not gs:
        return f
    ds = [degree(g) for g in gs]
    terms = []
    for perm in iter_permutations(len(gs)):
        t = nonsym(f, [gs[i] for i in perm])
        terms.append(t.scale(koszul_sign(perm, ds)))
    return _sum(terms)


def verify_as_compatibility(f: MultiMap, gs: Sequence[MultiMap], max_arity: int | None = None) -> CheckReport:
    """Check sum_sigma epsilon as(f{g_sigma}) = as(f)<as(g_1), ..., as(g_n)>."""
    gs = list(gs)
    r = sum(g.arity for g in gs) + f.arity - len(gs)
    if max_arity is not None and r > max_arity:
        raise ValueError(f"result arity {r} exceeds the enumeration bound {max_arity}")
    lhs = antisymmetrize(symmetrize(f, gs)) if gs else antisymmetrize(f)
    rhs = sym_brace_hom(antisymmetrize(f), [antisymmetrize(g) for g in gs])
    diff = map_difference(lhs, rhs) if lhs != rhs else None
    name = f"as-compatibility k={f.arity} a={[g.arity for g in gs]}"
    return CheckReport(name, diff is None, 1, counterexample=diff)


def pre_lie(x, y, brace: Callable = sym_brace_hom):
    """x o y := x<y>."""
    return brace(x, [y])


def commutator(x, y, brace: Callable = sym_brace_hom, degree: Callable = None):
    """[x, y] := x o y - (-1)^{|x||y|} y o x."""
    degree = degree or (lambda m: m.b_degree)
    sign = -1 if degree(x) * degree(y) % 2 else 1
    return pre_lie(x, y, brace) - pre_lie(y, x, brace).scale(sign)


def oudom_guin_brace(prelie: Callable, x, args: Sequence, degree: Callable, split: int | None = None):
    """Higher brace x<x_1..x_n> rebuilt from the binary product x<y> alone.

    Solves the brace axiom for x<x_1..x_m><x_{m+1}..x_n> for its top term;
    ``split`` is m (default n-1).  Elements must support ``+`` and ``.scale``.
    """
    args = list(args)
    n = len(args)
    if n == 0:
        return x
    if n == 1:
        return prelie(x, args[0])
    m = n - 1 if split is None else split
    if not 1 <= m <= n - 1:
        raise ValueError(f"split {m} out of range for {n} arguments")
    xs, ys = args[:m], args[m:]

    def og(z, zs):
        return oudom_guin_brace(prelie, z, zs, degree)

    total = og(og(x, xs), ys)
    ds = [degree(z) for z in xs + ys]
    for blocks in unshuffles(len(ys), m + 1, allow_empty=True):
        if len(blocks[m]) == len(ys):
            continue  # the top term being solved for
        order = []
        inner = []
        for i in range(m):
            order.append(i)
            order.extend(m + j - 1 for j in blocks[i])
            inner.append(og(xs[i], [ys[j - 1] for j in blocks[i]]))
        order.extend(m + j - 1 for j in blocks[m])
        inner.extend(ys[j - 1] for j in blocks[m])
        eps = koszul_sign(order, ds)
        total = total - og(x, inner).scale(eps)
    return total


@dataclass
class BraceAlgebraOracle:
    """A concrete brace algebra: brace operation, degree function and equality."""

    brace: Callable[[Any, list], Any]
    degree: Callable[[Any], int]
    equal: Callable[[Any, Any], bool] = lambda a, b: a == b
    samples: list = field(default_factory=list)
    describe: Callable[[Any, Any], str] | None = None

    def __post_init__(self):
        for s in self.samples:
            if not self.equal(self.brace(s, []), s):
                raise ValueError("x<> = x fails on a sample element")

    def difference(self, lhs, rhs) -> str:
        if self.describe is not None:
            return self.describe(lhs, rhs)
        return f"{lhs!r} != {rhs!r}"


def multimap_oracle(sym: bool = True, samples=()) -> BraceAlgebraOracle:
    return BraceAlgebraOracle(
        brace=sym_brace_hom if sym else nonsym_brace,
        degree=lambda m: m.b_degree,
        samples=list(samples),
        describe=lambda a, b: map_difference(a, b) or "maps differ",
    )


def check_sym_brace_axiom(alg: BraceAlgebraOracle, x, xs: Sequence, ys: Sequence) -> CheckReport:
    """x<xs><ys> against the unshuffle sum of the symmetric brace axiom."""
    xs, ys = list(xs), list(ys)
    m, n = len(xs), len(ys)
    lhs = alg.brace(alg.brace(x, xs), ys)
    ds = [alg.degree(z) for z in xs + ys]
    terms = []
    for blocks in unshuffles(n, m + 1, allow_empty=True):
        order, inner = [], []
        for i in range(m):
            order.append(i)
            order.extend(m + j - 1 for j in blocks[i])
            inner.append(alg.brace(xs[i], [ys[j - 1] for j in blocks[i]]))
        order.extend(m + j - 1 for j in blocks[m])
        inner.extend(ys[j - 1] for j in blocks[m])
        terms.append(alg.brace(x, inner).scale(koszul_sign(order, ds)))
    rhs = _sum(terms)
    ok = alg.equal(lhs, rhs)
    return CheckReport(f"sym-brace-axiom m={m} n={n}", ok, 1,
                       counterexample=None if ok else alg.difference(lhs, rhs))


def check_nonsym_brace_axiom(alg: BraceAlgebraOracle, x, xs: Sequence, ys: Sequence) -> CheckReport:
    """x{xs}{ys} against the insertion-sequence sum of the nonsymmetric brace axiom."""
    xs, ys = list(xs), list(ys)
    m, n = len(xs), len(ys)
    lhs = alg.brace(alg.brace(x, xs), ys)
    ds = [alg.degree(z) for z in xs + ys]
    if m == 0:
        rhs = alg.brace(x, ys)
    else:
        terms = []
        for seq in brace_insertion_sequences(m, n):
            order, inner, prev = [], [], 0
            for t in range(m):
                i, j = seq[2 * t], seq[2 * t + 1]
                order.extend(m + c for c in range(prev, i))
                inner.extend(ys[prev:i])
                order.append(t)
                order.extend(m + c for c in range(i, j))
                inner.append(alg.brace(xs[t], ys[i:j]))
                prev = j
            order.extend(m + c for c in range(prev, n))
            inner.extend(ys[prev:])
            terms.append(alg.brace(x, inner).scale(koszul_sign(order, ds)))
        rhs = _sum(terms)
    ok = alg.equal(lhs, rhs)
    return CheckReport(f"nonsym-brace-axiom m={m} n={n}", ok, 1,
                       counterexample=None if ok else alg.difference(lhs, rhs))


# braces on truncated series

def _arity_choices(k_range, n: int, g_arities: Sequence[Sequence[int]], N: int):
    for k in k_range:
        if k < n:
            continue
        for combo in itertools.product(*g_arities):
            if sum(combo) + k - n <= N:
                yield k, combo


def series_brace(F: OperatorSeries, Gs: Sequence[OperatorSeries], sym: bool = True,
                 N: int | None = None) -> OperatorSeries:
    """F<G_1..G_n> (or F{..}) summed over component arities, truncated at N."""
    Gs = list(Gs)
    N = N if N is not None else min([F.max_arity] + [G.max_arity for G in Gs])
    brace = sym_brace_hom if sym else nonsym_brace
    bd = F.b_degree + sum(G.b_degree for G in Gs)
    if not Gs:
        return F.truncated(N)
    comps: dict = {}
    for k, combo in _arity_choices(F.arities(), len(Gs), [G.arities() for G in Gs], N):
        term = brace(F[k], [G[a] for G, a in zip(Gs, combo)])
        r = term.arity
        comps[r] = comps[r] + term if r in comps else term
    return OperatorSeries(F.source, bd, N, comps, F.target, sym)
