"""Homotopy transfer of A-infinity and L-infinity structures along a contraction."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .braces import nonsym_brace, series_brace, sym_brace_hom
from .graded import GradedSpace, MultiMap, OperatorSeries, add_into, compose, compose_in_slot
from .report import CheckReport, combine, map_difference
from .structures import a_infinity_defect, hom_differential, l_infinity_defect


class ContractionError(ValueError):
    pass


@dataclass
class Contraction:
    """Chain maps f: V -> W, g: W -> V and a homotopy h with dV h + h dV = id - g f."""

    V: GradedSpace
    W: GradedSpace
    dV: MultiMap
    dW: MultiMap
    f: MultiMap
    g: MultiMap
    h: MultiMap

    def __post_init__(self):
        self._check_shapes()
        for name, d, X in (("dV", self.dV, self.V), ("dW", self.dW, self.W)):
            if not compose(d, d).is_zero():
                raise ContractionError(f"{name} does not square to zero")
        if compose(self.f, self.dV) != compose(self.dW, self.f):
            raise ContractionError("f is not a chain map")
        if compose(self.g, self.dW) != compose(self.dV, self.g):
            raise ContractionError("g is not a chain map")
        dh = compose(self.dV, self.h) + compose(self.h, self.dV)
        target = MultiMap.identity(self.V).as_plain() - self.gf.as_plain()
        if dh != target:
            raise ContractionError("dV h + h dV != id - g f " + (map_difference(dh, target) or ""))

    def _check_shapes(self):
        spec = [("dV", self.dV, self.V, self.V, -1), ("dW", self.dW, self.W, self.W, -1),
                ("f", self.f, self.V, self.W, 0), ("g", self.g, self.W, self.V, 0),
                ("h", self.h, self.V, self.V, 1)]
        for name, m, src, tgt, deg in spec:
            if m.arity != 1 or m.source != src or m.target != tgt:
                raise ContractionError(f"{name} has the wrong source, target or arity")
            if m.degree != deg and not m.is_zero():
                raise ContractionError(f"{name} must have degree {deg}")

    @property
    def gf(self) -> MultiMap:
        return compose(self.g, self.f)

    @property
    def inner_homotopy(self) -> MultiMap:
        """The homotopy as it enters the kernel recursions: -h, so that dV k + k dV = gf - id.

        With dV h + h dV = id - gf and the master equation read as dp + p{p} = 0,
        the recursion closes up only with this sign.
        """
        return -self.h

    @classmethod
    def identity(cls, V: GradedSpace, dV: MultiMap) -> "Contraction":
        one = MultiMap.identity(V)
        return cls(V, V, dV, dV, one, one, MultiMap.zero(V, 1, 1))


def phi(c: Contraction, u: MultiMap) -> MultiMap:
    """Φ(u) = f ∘ u ∘ g^{⊗n}."""
    if u.source != c.V or u.target != c.V:
        raise ValueError("phi expects a map on V")
    gvals = [c.g.value((i,)) for i in range(c.W.dim)]

    def fn(tup):
        inner = u.eval_vectors([gvals[i] for i in tup])
        return c.f.eval_vectors([inner]) if inner else {}

    return MultiMap.from_function(c.W, u.arity, u.degree, fn, antisym=u.antisym)


def phi_series(c: Contraction, s: OperatorSeries) -> OperatorSeries:
    return OperatorSeries(c.W, s.b_degree, s.max_arity,
                          {k: phi(c, m) for k, m in s.components.items()}, antisym=s.antisym)


def post(c_map: MultiMap, s: OperatorSeries) -> OperatorSeries:
    """Componentwise post-composition with an arity-1 map."""
    comps = {k: compose(c_map, m) for k, m in s.components.items()}
    return OperatorSeries(s.source, s.b_degree + c_map.degree, s.max_arity, comps, s.target, s.antisym)


def _bar(mu: OperatorSeries, c: Contraction) -> OperatorSeries:
    if mu.source != c.V:
        raise ValueError("structure does not live on V")
    d = mu[1]
    if d.as_plain() != c.dV.as_plain():
        raise ValueError("the arity-1 component must equal dV")
    return OperatorSeries(mu.source, mu.b_degree, mu.max_arity,
                          {k: m for k, m in mu.components.items() if k >= 2}, antisym=mu.antisym)


def _insertions(n: int, k: int, hp_arities):
    """Tuples (r_1..r_j), j >= 1, of available arities >= 2 with k + sum(r_i - 1) = n."""
    for j in range(1, k + 1):
        for rs in itertools.product(hp_arities, repeat=j):
            if k + sum(r - 1 for r in rs) == n:
                yield rs


def p_kernel_nonsym(mu: OperatorSeries, c: Contraction, N: int | None = None) -> OperatorSeries:
    """p = μ̄ + μ̄{kp} + μ̄{kp, kp} + ..., k = -h, solved arity by arity."""
    N = N if N is not None else mu.max_arity
    mubar = _bar(mu, c)
    p: dict = {}
    hp: dict = {}
    for n in range(2, N + 1):
        acc = mubar[n]
        for k in mubar.arities():
            if k >= n:
                continue
            for rs in _insertions(n, k, sorted(hp)):
                acc = acc + nonsym_brace(mubar[k], [hp[r] for r in rs])
        p[n] = acc
        hp[n] = compose(c.inner_homotopy, acc)
    return OperatorSeries(c.V, -1, N, p)


def p_kernel_sym(l: OperatorSeries, c: Contraction, N: int | None = None) -> OperatorSeries:
    """p = l̄<exp(k∘p)>, k = -h, solved arity by arity."""
    N = N if N is not None else l.max_arity
    lbar = _bar(l, c)
    p: dict = {}
    hp: dict = {}
    for n in range(2, N + 1):
        acc = lbar[n]
        for k in lbar.arities():
            if k >= n:
                continue
            for rs in _insertions(n, k, sorted(hp)):
                term = sym_brace_hom(lbar[k], [hp[r] for r in rs])
                acc = acc + term.scale(Fraction(1, factorial(len(rs))))
        p[n] = acc
        hp[n] = compose(c.inner_homotopy, acc)
    return OperatorSeries(c.V, -1, N, p, antisym=True)


def _with_differential(d: MultiMap, bar: OperatorSeries, antisym: bool) -> OperatorSeries:
    comps = dict(bar.components)
    comps[1] = d
    return OperatorSeries(d.source, -1, bar.max_arity, comps, antisym=antisym)


def transfer_a_infinity(mu: OperatorSeries, c: Contraction, N: int | None = None) -> OperatorSeries:
    """ν with ν_1 = dW and ν̄ = Φ(p)."""
    p = p_kernel_nonsym(mu, c, N)
    return _with_differential(c.dW, phi_series(c, p), False)


def transfer_l_infinity(l: OperatorSeries, c: Contraction, N: int | None = None) -> OperatorSeries:
    """k with k_1 = dW and k̄ = Φ(p)."""
    p = p_kernel_sym(l, c, N)
    return _with_differential(c.dW, phi_series(c, p), True)


# the explicit signed sum and its identities, in the sign convention where they were first stated

def tensor_twist(s: OperatorSeries) -> OperatorSeries:
    """Multiply the arity-k component by (-1)^{k(k-1)/2}.

    This converts between the brace convention used here and the convention
    in which the explicit ϑ-signed formula and its differential identity are written.
    """
    comps = {k: (m if (k * (k - 1) // 2) % 2 == 0 else -m) for k, m in s.components.items()}
    return OperatorSeries(s.source, s.b_degree, s.max_arity, comps, s.target, s.antisym)


def theta(rs) -> int:
    return sum(rs[a] * (rs[b] + 1) for a in range(len(rs)) for b in range(a + 1, len(rs)))


def compose_tensor(f: MultiMap, gs) -> MultiMap:
    """f ∘ (g_1 ⊗ ... ⊗ g_k), each g_j passing the inputs of the earlier blocks with a Koszul sign."""
    if len(gs) != f.arity:
        raise ValueError("need one map per input")
    out = f
    # insert from the right so that earlier slot numbers stay valid
    for j in range(len(gs) - 1, -1, -1):
        out = compose_in_slot(out, gs[j], j + 1)
    return out


def p_kernel_explicit(mu: OperatorSeries, c: Contraction, N: int | None = None) -> OperatorSeries:
    """p_n = sum over k >= 2 and r_1 + .. + r_k = n of (-1)^ϑ(r) μ_k(kp_{r_1} ⊗ ... ⊗ kp_{r_k}), kp_1 = id, k = -h.

    Evaluated literally on ``mu``; see :func:`tensor_twist` for the convention.
    """
    N = N if N is not None else mu.max_arity
    mubar = _bar(mu, c)
    one = MultiMap.identity(c.V).as_plain()
    hp: dict = {1: one}
    p: dict = {}
    for n in range(2, N + 1):
        acc = MultiMap.zero(c.V, n, n - 2)
        for k in mubar.arities():
            if k > n:
                continue
            for rs in itertools.product(range(1, n - k + 2), repeat=k):
                if sum(rs) != n or any(r not in hp for r in rs):
                    continue
                term = compose_tensor(mubar[k], [hp[r] for r in rs])
                acc = acc - term if theta(rs) % 2 else acc + term
        p[n] = acc
        hp[n] = compose(c.inner_homotopy, acc)
    return OperatorSeries(c.V, -1, N, p)


def check_explicit_matches_recursion(mu: OperatorSeries, c: Contraction, N: int = 4) -> CheckReport:
    rec = p_kernel_nonsym(mu, c, N)
    expl = tensor_twist(p_kernel_explicit(tensor_twist(mu), c, N))
    return _series_report(f"explicit-vs-recursive N={N}", expl, rec)


def check_kernel_differential(mu: OperatorSeries, c: Contraction, N: int = 4) -> CheckReport:
    """∂p_n = sum over k + l = n + 1, 1 <= i <= k of (-1)^{i(l+1)+n} p_k(1^{i-1} ⊗ gf p_l ⊗ 1^{k-i})."""
    p = tensor_twist(p_kernel_nonsym(tensor_twist(mu), c, N))
    # p is now the kernel in the convention of the explicit formula
    gf = c.gf
    reports = []
    for n in range(2, N + 1):
        lhs = hom_differential(c.dV, p[n])
        rhs = MultiMap.zero(c.V, n, n - 3)
        for k in range(2, n):
            l = n + 1 - k
            inner = compose(gf, p[l])
            for i in range(1, k + 1):
                term = compose_in_slot(p[k], inner, i)
                rhs = rhs - term if (i * (l + 1) + n) % 2 else rhs + term
        reports.append(_map_report(f"kernel differential n={n}", lhs, rhs))
    return combine(f"p-kernel differential identity N={N}", reports)


def check_nonsym_kernel_identity(mu: OperatorSeries, c: Contraction, N: int = 4) -> CheckReport:
    """∂p + p{gf∘p} = 0 for the nonsymmetric kernel."""
    p = p_kernel_nonsym(mu, c, N)
    return _kernel_identity(p, c, N, sym=False)


def check_sym_kernel_identity(l: OperatorSeries, c: Contraction, N: int = 4) -> CheckReport:
    """∂p + p<gf∘p> = 0 for the symmetric kernel."""
    p = p_kernel_sym(l, c, N)
    return _kernel_identity(p, c, N, sym=True)


def _kernel_identity(p: OperatorSeries, c: Contraction, N: int, sym: bool) -> CheckReport:
    dp = OperatorSeries(c.V, -2, N, {k: hom_differential(c.dV, m, sym) for k, m in p.components.items()})
    gfp = post(c.gf, p)
    total = dp + series_brace(p, [gfp], sym=sym, N=N)
    name = ("symmetric" if sym else "nonsymmetric") + f" kernel identity N={N}"
    bad = total.nonzero_arities()
    if not bad:
        return CheckReport(name, True, N)
    m = total[bad[0]]
    return CheckReport(name, False, N, detail=f"nonzero at arity {bad[0]}",
                       counterexample=map_difference(m, MultiMap.zero(m.source, m.arity, m.degree)))


def check_master_a(mu: OperatorSeries, c: Contraction, N: int = 4) -> CheckReport:
    nu = transfer_a_infinity(mu, c, N)
    return _zero_series_report(f"transferred A-infinity master equation N={N}", a_infinity_defect(nu, N))


def check_master_l(l: OperatorSeries, c: Contraction, N: int = 4) -> CheckReport:
    k = transfer_l_infinity(l, c, N)
    return _zero_series_report(f"transferred L-infinity master equation N={N}", l_infinity_defect(k, N))


def check_phi_compatibility(c: Contraction, u: MultiMap, us) -> CheckReport:
    """Φ(u){Φ(u_1)..Φ(u_n)} = Φ(u{gf∘u_1, .., gf∘u_n})."""
    us = list(us)
    lhs = nonsym_brace(phi(c, u), [phi(c, v) for v in us])
    rhs = phi(c, nonsym_brace(u, [compose(c.gf, v) for v in us]))
    return _map_report("phi compatibility", lhs, rhs)


# braces against exp c

def brace_with_exp(a: OperatorSeries, fixed, c: OperatorSeries, N: int) -> OperatorSeries:
    """a<fixed..., exp c> = sum_j (1/j!) a<fixed..., c, ..., c>, truncated at arity N."""
    if c.b_degree != 0 and not c.is_zero():
        raise ValueError("exp c needs c of B-degree 0, so that every term has the same degree")
    fixed = list(fixed)
    total = series_brace(a, fixed, sym=True, N=N)
    top = max(a.arities() or [0])
    for j in range(1, top - len(fixed) + 1):
        term = series_brace(a, fixed + [c] * j, sym=True, N=N)
        total = total + term.scale(Fraction(1, factorial(j)))
    return total


def check_exp_brace_identities(a: OperatorSeries, b: OperatorSeries, c: OperatorSeries, N: int = 4) -> CheckReport:
    """a<exp c><b> = a<c<b>, exp c> + a<b, exp c>  and  a<b><exp c> = a<b<exp c>, exp c>."""
    lhs13 = series_brace(brace_with_exp(a, [], c, N), [b], sym=True, N=N)
    cb = series_brace(c, [b], sym=True, N=N)
    rhs13 = brace_with_exp(a, [cb], c, N) + brace_with_exp(a, [b], c, N)
    ab = series_brace(a, [b], sym=True, N=N)
    lhs14 = brace_with_exp(ab, [], c, N)
    rhs14 = brace_with_exp(a, [brace_with_exp(b, [], c, N)], c, N)
    return combine(f"exp brace identities N={N}", [_series_report("exp c then b", lhs13, rhs13),
                                                  _series_report("b then exp c", lhs14, rhs14)])


def _map_report(name: str, lhs: MultiMap, rhs: MultiMap) -> CheckReport:
    diff = map_difference(lhs, rhs) if lhs != rhs else None
    return CheckReport(name, diff is None, 1, counterexample=diff)


def _series_report(name: str, lhs: OperatorSeries, rhs: OperatorSeries) -> CheckReport:
    N = min(lhs.max_arity, rhs.max_arity)
    for k in range(1, N + 1):
        a, b = lhs[k], rhs[k]
        if a != b:
            return CheckReport(name, False, N, detail=f"arity {k}", counterexample=map_difference(a, b))
    return CheckReport(name, True, N)


def _zero_series_report(name: str, s: OperatorSeries) -> CheckReport:
    zero = OperatorSeries(s.source, s.b_degree, s.max_arity, {}, s.target)
    return _series_report(name, s, zero)
