"""Gauge algebras: the ∇/Υ data on 𝕃 = Ξ ⊕ Φ, its bracket, and the resulting L-infinity structure.

Ξ sits in degree 0 and Φ in degree -1.  ∇ is Φ-valued with exactly one Ξ
input, Υ is Ξ-valued with exactly two; both are antisymmetric of B-degree -1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .braces import series_brace, sym_brace_hom
from .graded import GradedSpace, MultiMap, OperatorSeries
from .report import CheckReport, map_difference


@dataclass(frozen=True)
class GaugeSpace:
    xi: tuple[str, ...]
    phi: tuple[str, ...]

    @property
    def L(self) -> GradedSpace:
        return GradedSpace(self.xi + self.phi, (0,) * len(self.xi) + (-1,) * len(self.phi))

    @property
    def xi_indices(self) -> range:
        return range(len(self.xi))

    @property
    def phi_indices(self) -> range:
        return range(len(self.xi), len(self.xi) + len(self.phi))

    def is_xi(self, i: int) -> bool:
        return i < len(self.xi)

    def xi_count(self, tup) -> int:
        return sum(1 for i in tup if self.is_xi(i))

    @classmethod
    def from_space(cls, L: GradedSpace) -> "GaugeSpace":
        xi = tuple(n for n, d in zip(L.names, L.degrees) if d == 0)
        phi = tuple(n for n, d in zip(L.names, L.degrees) if d == -1)
        if len(xi) + len(phi) != L.dim or L.names != xi + phi:
            raise ValueError("a gauge space lists its degree-0 basis first, then degree -1, nothing else")
        return cls(xi, phi)


class GaugeConstraintError(ValueError):
    pass


def _validate(G: GaugeSpace, m: MultiMap, xi_inputs: int, xi_output: bool, name: str):
    if m.source != G.L or m.target != G.L:
        raise GaugeConstraintError(f"{name} must be a map on the gauge space")
    if m.b_degree != -1 and not m.is_zero():
        raise GaugeConstraintError(f"{name}_{m.arity} must have B-degree -1")
    for tup, val in m.stored_items():
        if G.xi_count(tup) != xi_inputs:
            raise GaugeConstraintError(
                f"{name}_{m.arity} is nonzero on {m.describe_tuple(tup)}, which has "
                f"{G.xi_count(tup)} inputs from Xi (needs {xi_inputs})")
        for o in val:
            if G.is_xi(o) != xi_output:
                raise GaugeConstraintError(
                    f"{name}_{m.arity} must take values in {'Xi' if xi_output else 'Phi'}")


def _series(G: GaugeSpace, maps: Sequence[MultiMap], N: int) -> OperatorSeries:
    comps: dict = {}
    for m in maps:
        if m.b_degree != -1 and not m.is_zero():
            raise GaugeConstraintError(f"component of arity {m.arity} must have B-degree -1, has {m.b_degree}")
        m = m if m.antisym else m.as_antisym()
        comps[m.arity] = comps[m.arity] + m if m.arity in comps else m
    return OperatorSeries(G.L, -1, N, comps, antisym=True)


def nabla_map(G: GaugeSpace, maps: Sequence[MultiMap], N: int = 4) -> OperatorSeries:
    """∇ as a series; refuses any component violating the one-Ξ-input, Φ-valued constraint."""
    s = _series(G, maps, N)
    for m in s.components.values():
        _validate(G, m, 1, False, "nabla")
    return s


def upsilon_map(G: GaugeSpace, maps: Sequence[MultiMap], N: int = 4) -> OperatorSeries:
    """Υ as a series; refuses any component violating the two-Ξ-input, Ξ-valued constraint."""
    s = _series(G, maps, N)
    for m in s.components.values():
        _validate(G, m, 2, True, "upsilon")
    return s


def _max_arity(s: OperatorSeries) -> int:
    return max(s.arities() or [1])


def as_series(G: GaugeSpace, x) -> OperatorSeries:
    if isinstance(x, OperatorSeries):
        return x
    return OperatorSeries(G.L, x.b_degree, x.arity, {x.arity: x}, antisym=True)


def gauge_bracket(G: GaugeSpace, nabla: OperatorSeries, upsilon: OperatorSeries, alpha, beta,
                  N: int | None = None) -> OperatorSeries:
    """[α, β] = α<∇<β>> + (-1)^{|α||β|} β<∇<α>> + Υ<α, β>, exact unless N truncates it."""
    return _Bracket(G, nabla, upsilon, N)(alpha, beta)


class _Bracket:
    """The gauge bracket with ∇<x> memoized per operand (keyed by caller-supplied ids)."""

    def __init__(self, G, nabla, upsilon, N=None):
        self.G, self.nabla, self.upsilon, self.N = G, nabla, upsilon, N
        self.top = max(_max_arity(nabla), _max_arity(upsilon))
        self._nab: dict = {}

    def _nabla_of(self, x, N, key):
        if key is None or (key, N) not in self._nab:
            val = series_brace(_widen(self.nabla, N), [x], N=N)
            if key is None:
                return val
            self._nab[(key, N)] = val
        return self._nab[(key, N)]

    def __call__(self, alpha, beta, ka=None, kb=None) -> OperatorSeries:
        a, b = as_series(self.G, alpha), as_series(self.G, beta)
        N = self.N if self.N is not None else _max_arity(a) + _max_arity(b) + self.top
        sign = -1 if a.b_degree * b.b_degree % 2 else 1
        a, b = _widen(a, N), _widen(b, N)
        t1 = series_brace(a, [self._nabla_of(b, N, kb)], N=N)
        t2 = series_brace(b, [self._nabla_of(a, N, ka)], N=N)
        t3 = series_brace(_widen(self.upsilon, N), [a, b], N=N)
        return t1 + t2.scale(sign) + t3


def _widen(s: OperatorSeries, N: int) -> OperatorSeries:
    return OperatorSeries(s.source, s.b_degree, N, s.components, s.target, s.antisym)


def bbvd_defect(nabla: OperatorSeries, upsilon: OperatorSeries, N: int = 4) -> OperatorSeries:
    """∇<∇> + ∇<Υ>, truncated at arity N."""
    return series_brace(nabla, [nabla], N=N) + series_brace(nabla, [upsilon], N=N)


def jacobi_defect(nabla: OperatorSeries, upsilon: OperatorSeries, N: int = 4) -> OperatorSeries:
    """Υ<∇> + Υ<Υ>, truncated at arity N."""
    return series_brace(upsilon, [nabla], N=N) + series_brace(upsilon, [upsilon], N=N)


def jacobiator(G: GaugeSpace, nabla, upsilon, alpha, beta, gamma) -> OperatorSeries:
    """[α,[β,γ]] + [β,[γ,α]] + [γ,[α,β]]."""
    br = lambda x, y: gauge_bracket(G, nabla, upsilon, x, y)
    return br(alpha, br(beta, gamma)) + br(beta, br(gamma, alpha)) + br(gamma, br(alpha, beta))


def test_function_basis(G: GaugeSpace, max_arity: int) -> list[MultiMap]:
    """Elementary antisymmetric maps Φ^{⊗k} -> Ξ, k = 1..max_arity."""
    L = G.L
    out = []
    for k in range(1, max_arity + 1):
        for tup in itertools.combinations_with_replacement(G.phi_indices, k):
            for o in G.xi_indices:
                out.append(MultiMap(L, k, k, {tup: {o: 1}}, antisym=True))
    return out


def in_phi_to_xi(G: GaugeSpace, s: OperatorSeries) -> bool:
    """True if every component only sees Φ inputs and lands in Ξ."""
    for m in s.components.values():
        for tup, val in m.stored_items():
            if G.xi_count(tup) or any(not G.is_xi(o) for o in val):
                return False
    return True


def _describe(G: GaugeSpace, m: MultiMap) -> str:
    body = ", ".join(f"{m.describe_tuple(t)}->{G.L.format_vector(v)}" for t, v in sorted(m.stored_items()))
    return f"[{body}]"


def jacobi_sweep(G: GaugeSpace, nabla, upsilon, max_arity: int = 2) -> CheckReport:
    """Exhaustive sweep of the jacobiator over triples of distinct test functions.

    The jacobiator is alternating in its arguments, so triples i < j < k suffice.
    """
    basis = test_function_basis(G, max_arity)
    series = [as_series(G, x) for x in basis]
    br = _Bracket(G, nabla, upsilon)
    pair: dict = {}

    def bracket_pair(i, j):
        if (i, j) not in pair:
            pair[(i, j)] = br(series[i], series[j], i, j)
        return pair[(i, j)]

    def outer(i, j, k):
        return br(series[i], bracket_pair(j, k), i, (j, k))

    count = 0
    name = f"jacobiator sweep (test arity <= {max_arity}, {len(basis)} test functions)"
    for i, j, k in itertools.combinations(range(len(basis)), 3):
        count += 1
        total = outer(i, j, k) + outer(j, k, i) + outer(k, i, j)
        bad = total.nonzero_arities()
        if bad:
            m = total[bad[0]]
            witness = (f"alpha={_describe(G, basis[i])} beta={_describe(G, basis[j])} "
                       f"gamma={_describe(G, basis[k])}; arity {bad[0]} "
                       + (map_difference(m, MultiMap.zero(m.source, m.arity, m.degree)) or ""))
            return CheckReport(name, False, count, detail="nonzero jacobiator", counterexample=witness)
    return CheckReport(name, True, count)


def project(G: GaugeSpace, s: OperatorSeries, onto: str) -> OperatorSeries:
    """Keep only the Ξ-valued ("xi") or Φ-valued ("phi") part of each component."""
    keep = G.is_xi if onto == "xi" else (lambda i: not G.is_xi(i))
    comps = {}
    for k, m in s.components.items():
        data = {}
        for tup, val in m.stored_items():
            v = {o: c for o, c in val.items() if keep(o)}
            if v:
                data[tup] = v
        comps[k] = MultiMap(m.source, k, m.degree, data, m.antisym, m.target, check=False)
    return OperatorSeries(s.source, s.b_degree, s.max_arity, comps, s.target, s.antisym)


class GaugeAssemblyError(ValueError):
    pass


def assemble_l_infinity(nabla: OperatorSeries, upsilon: OperatorSeries, N: int = 4) -> OperatorSeries:
    """l = ∇ + Υ, after confirming both defects vanish up to arity N."""
    for label, defect in (("nabla<nabla> + nabla<upsilon>", bbvd_defect(nabla, upsilon, N)),
                          ("upsilon<nabla> + upsilon<upsilon>", jacobi_defect(nabla, upsilon, N))):
        bad = defect.nonzero_arities()
        if bad:
            raise GaugeAssemblyError(f"{label} is nonzero at arity {bad[0]}")
    return (nabla + upsilon).truncated(N)


def check_decomposition(G: GaugeSpace, nabla, upsilon, N: int = 4) -> CheckReport:
    """l<l> = (∇<∇> + ∇<Υ>) + (Υ<∇> + Υ<Υ>), and the two parts are its Φ- and Ξ-valued pieces."""
    l = (nabla + upsilon).truncated(N)
    ll = series_brace(l, [l], N=N)
    p52, p53 = bbvd_defect(nabla, upsilon, N), jacobi_defect(nabla, upsilon, N)
    ok = ll == p52 + p53 and project(G, ll, "phi") == p52 and project(G, ll, "xi") == p53
    return CheckReport(f"l<l> decomposition N={N}", ok, N,
                       counterexample=None if ok else "l<l> does not split as expected")


def check_cancellation(nabla_k: MultiMap, nabla_m: MultiMap, beta: MultiMap, gamma: MultiMap) -> CheckReport:
    """∇<∇><β,γ> = ∇<∇<β>,γ> - ∇<∇<γ>,β> for Ξ-valued β, γ of B-degree 1."""
    lhs = sym_brace_hom(sym_brace_hom(nabla_k, [nabla_m]), [beta, gamma])
    rhs = (sym_brace_hom(nabla_k, [sym_brace_hom(nabla_m, [beta]), gamma])
           - sym_brace_hom(nabla_k, [sym_brace_hom(nabla_m, [gamma]), beta]))
    diff = map_difference(lhs, rhs) if lhs != rhs else None
    return CheckReport("nabla cancellation", diff is None, 1, counterexample=diff)
