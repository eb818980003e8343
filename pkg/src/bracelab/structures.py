"""A-infinity and L-infinity predicates, the Chevalley-Eilenberg differential and bracket."""

from __future__ import annotations

from dataclasses import dataclass

from .braces import nonsym_brace, series_brace, sym_brace_hom
from .graded import GradedSpace, MultiMap, OperatorSeries, antisymmetrize, compose_in_slot
from .report import CheckReport, map_difference


def _require_b_degree(series: OperatorSeries, s: int, what: str):
    if series.b_degree != s and not series.is_zero():
        raise ValueError(f"{what} must have B-degree {s}, got {series.b_degree}")


def a_infinity_defect(mu: OperatorSeries, N: int | None = None) -> OperatorSeries:
    """mu{mu} truncated at arity N; zero iff mu is A-infinity up to N."""
    _require_b_degree(mu, -1, "mu")
    return series_brace(mu, [mu], sym=False, N=N)


def l_infinity_defect(l: OperatorSeries, N: int | None = None) -> OperatorSeries:
    """l<l> truncated at arity N; zero iff l is L-infinity up to N."""
    _require_b_degree(l, -1, "l")
    return series_brace(l, [l], sym=True, N=N)


def keller_stasheff_defect(mu: OperatorSeries, N: int | None = None) -> OperatorSeries:
    """Stasheff identities written out directly.

    Arity n component: sum over r+s+t = n of (-1)^{r+st} mu_{r+1+t}(1^r ⊗ mu_s ⊗ 1^t),
    the tensor product applied with the Koszul rule.  Independent of the brace code.
    """
    _require_b_degree(mu, -1, "mu")
    N = N if N is not None else mu.max_arity
    comps: dict = {}
    for n in range(1, N + 1):
        acc = None
        for s in mu.arities():
            for r in range(0, n - s + 1):
                t = n - s - r
                outer = r + 1 + t
                if outer not in mu.components:
                    continue
                term = compose_in_slot(mu[outer], mu[s], r + 1)
                if (r + s * t) % 2:
                    term = -term
                acc = term if acc is None else acc + term
        if acc is not None:
            comps[n] = acc
    return OperatorSeries(mu.source, -2, N, comps)


def hom_differential(d: MultiMap, u: MultiMap, sym: bool = False) -> MultiMap:
    """∂u = d{u} - (-1)^{|u|} u{d} (or the symmetric-brace analogue), |u| the B-degree."""
    brace = sym_brace_hom if sym else nonsym_brace
    if sym:
        d = antisymmetrize(d) if not d.antisym else d
    left = brace(d, [u])
    right = brace(u, [d])
    return left - right if u.b_degree % 2 == 0 else left + right


def series_differential(d: MultiMap, u: OperatorSeries, sym: bool = False) -> OperatorSeries:
    comps = {k: hom_differential(d, u[k], sym) for k in u.arities()}
    return OperatorSeries(u.source, u.b_degree - 1, u.max_arity, comps, u.target, sym)


def _check_lie(l2: MultiMap):
    if l2.arity != 2 or l2.degree != 0:
        raise ValueError("l2 must be a bilinear map of degree 0")
    jac = sym_brace_hom(l2, [l2])
    if not jac.is_zero():
        raise ValueError("l2<l2> != 0: not a Lie structure, refusing to build the CE differential")


def ce_differential(l2: MultiMap, f: MultiMap) -> MultiMap:
    """∂f := l<f> - (-1)^{|f|} f<l> for a Lie bracket l."""
    _check_lie(l2)
    return hom_differential(l2, f, sym=True)


def ce_bracket(l2: MultiMap, f: MultiMap, g: MultiMap) -> MultiMap:
    """{f, g} := l<f, g>."""
    _check_lie(l2)
    return sym_brace_hom(l2, [f, g])


def nullhomotopy_rhs(l2: MultiMap, f: MultiMap, g: MultiMap) -> MultiMap:
    """∂f∘g + (-1)^{|f|} f∘∂g - ∂(f∘g), with x∘y = x<y>."""
    def circ(x, y):
        return sym_brace_hom(x, [y])

    d = lambda u: ce_differential(l2, u)
    middle = circ(f, d(g))
    if f.b_degree % 2:
        middle = -middle
    return circ(d(f), g) + middle - d(circ(f, g))


def check_nullhomotopy(l2: MultiMap, f: MultiMap, g: MultiMap) -> CheckReport:
    lhs = ce_bracket(l2, f, g)
    rhs = nullhomotopy_rhs(l2, f, g)
    diff = map_difference(lhs, rhs) if lhs != rhs else None
    return CheckReport(f"nullhomotopy k=({f.arity},{g.arity})", diff is None, 1, counterexample=diff)


def as_of_a_infinity(mu: OperatorSeries) -> OperatorSeries:
    """l := as(mu), componentwise."""
    return OperatorSeries(mu.source, mu.b_degree, mu.max_arity,
                          {k: antisymmetrize(m) for k, m in mu.components.items()},
                          mu.target, antisym=True)


def flip_space(V: GradedSpace) -> GradedSpace:
    return V.flipped()


def flip_map(f: MultiMap) -> MultiMap:
    """Move a map to the flipped grading V_k -> V_{-k}; its internal degree changes sign."""
    src = f.source.flipped()
    tgt = src if f.target == f.source else f.target.flipped()
    return MultiMap(src, f.arity, -f.degree, dict(f.stored_items()), f.antisym, tgt, check=False)


@dataclass
class AInfinity:
    mu: OperatorSeries

    @property
    def max_arity(self) -> int:
        return self.mu.max_arity

    def defect(self) -> OperatorSeries:
        return a_infinity_defect(self.mu)

    def check(self) -> CheckReport:
        return defect_report("a-infinity", self.defect())


@dataclass
class LInfinity:
    l: OperatorSeries

    @property
    def max_arity(self) -> int:
        return self.l.max_arity

    def defect(self) -> OperatorSeries:
        return l_infinity_defect(self.l)

    def check(self) -> CheckReport:
        return defect_report("l-infinity", self.defect())


def defect_report(name: str, defect: OperatorSeries) -> CheckReport:
    bad = defect.nonzero_arities()
    if not bad:
        return CheckReport(f"{name} N={defect.max_arity}", True, defect.max_arity)
    k = bad[0]
    m = defect[k]
    zero = MultiMap.zero(m.source, k, m.degree, False, m.target)
    return CheckReport(f"{name} N={defect.max_arity}", False, defect.max_arity,
                       detail=f"defect nonzero at arity {k}",
                       counterexample=map_difference(m, zero))
