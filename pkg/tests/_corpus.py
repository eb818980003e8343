"""Shared model builders and generators for the test suite."""

from __future__ import annotations

import itertools
import random

from bracelab.graded import GradedSpace, MultiMap, OperatorSeries, random_map
from bracelab.gauge import GaugeSpace, nabla_map, upsilon_map
from bracelab.transfer import Contraction

COEFFS = (1, 2, -1, 3, -2, 1, -3, 2)


def full_map(V: GradedSpace, arity: int, s: int, antisym: bool = True, shift: int = 0) -> MultiMap:
    """Every admissible entry filled with a fixed coefficient pattern; arity k, B-degree s."""
    p = s + arity - 1
    tuples = V.canonical_tuples(arity) if antisym else V.tuples(arity)
    entries = {}
    n = shift
    for tup in tuples:
        want = sum(V.degrees[i] for i in tup) + p
        outs = [o for o in range(V.dim) if V.degrees[o] == want]
        if outs:
            entries[tup] = {o: COEFFS[(n + j) % len(COEFFS)] for j, o in enumerate(outs)}
            n += 1
    return MultiMap(V, arity, p, entries, antisym)


def structured_generators(V: GradedSpace, max_arity: int = 3, b_degrees=(-1, 0, 1), antisym=True):
    out = []
    for k in range(1, max_arity + 1):
        for s in b_degrees:
            m = full_map(V, k, s, antisym)
            if not m.is_zero():
                out.append(m)
    return out


def nonzero_random(rng: random.Random, V: GradedSpace, arity: int, s: int, antisym=True, tries=20):
    for _ in range(tries):
        m = random_map(rng, V, arity, s + arity - 1, antisym=antisym)
        if not m.is_zero():
            return m
    return m


DIM2 = (GradedSpace(("x", "y"), (0, 1)), GradedSpace(("x", "y"), (-1, 0)), GradedSpace(("x", "y"), (1, 2)))


# Lie algebras

def lie_abelian():
    V = GradedSpace(("a", "b"), (0, 0))
    return V, MultiMap(V, 2, 0, {}, antisym=True)


def lie_affine():
    V = GradedSpace(("a", "b"), (0, 0))
    return V, MultiMap(V, 2, 0, {(0, 1): {1: 1}}, antisym=True)


def lie_sl2():
    V = GradedSpace(("e", "f", "h"), (0, 0, 0))
    return V, MultiMap(V, 2, 0, {(0, 1): {2: 1}, (2, 0): {0: 2}, (2, 1): {1: -2}}, antisym=True)


LIE_CORPUS = {"abelian": lie_abelian, "affine": lie_affine, "sl2": lie_sl2}


# contractions

def _m(V, k, p, e, anti=False, T=None):
    return MultiMap(V, k, p, e, anti, T)


def unital3():
    """x unit, y idempotent, z with dz = y; contracts onto span{x}."""
    V = GradedSpace(("x", "y", "z"), (0, 0, 1))
    W = GradedSpace(("x",), (0,))
    dV = _m(V, 1, -1, {(2,): {1: 1}})
    table = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (0, 2): {2: 1}, (2, 0): {2: 1},
             (1, 1): {1: 1}, (1, 2): {2: 1}, (2, 1): {2: 1}}
    mu = OperatorSeries.of([dV, _m(V, 2, 0, table)], 4)
    c = Contraction(V, W, dV, _m(W, 1, -1, {}), _m(V, 1, 0, {(0,): {0: 1}}, T=W),
                    _m(W, 1, 0, {(0,): {0: 1}}, T=V), _m(V, 1, 1, {(1,): {2: 1}}))
    return mu, c


def _massey_contraction(degs):
    V = GradedSpace(("x", "y", "z", "w"), degs)
    W = GradedSpace(("x", "w"), (degs[0], degs[3]))
    dV = _m(V, 1, -1, {(2,): {1: 1}})
    c = Contraction(V, W, dV, _m(W, 1, -1, {}), _m(V, 1, 0, {(0,): {0: 1}, (3,): {1: 1}}, T=W),
                    _m(W, 1, 0, {(0,): {0: 1}, (1,): {3: 1}}, T=V), _m(V, 1, 1, {(1,): {2: 1}}))
    return V, dV, c


def massey():
    V, dV, c = _massey_contraction((0, 0, 1, 1))
    mu = OperatorSeries.of([dV, _m(V, 2, 0, {(0, 0): {1: 1}, (2, 0): {3: 1}})], 4)
    return mu, c


def odd():
    V, dV, c = _massey_contraction((1, 2, 3, 4))
    mu = OperatorSeries.of([dV, _m(V, 2, 0, {(0, 0): {1: 1}, (2, 0): {3: 1}})], 4)
    return mu, c


def acyclic():
    """V = span{y, z}, dz = y: everything contracts away, W = 0."""
    V = GradedSpace(("y", "z"), (0, 1))
    W = GradedSpace((), ())
    dV = _m(V, 1, -1, {(1,): {0: 1}})
    mu = OperatorSeries.of([dV, _m(V, 2, 0, {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}})], 4)
    c = Contraction(V, W, dV, _m(W, 1, -1, {}), _m(V, 1, 0, {}, T=W), _m(W, 1, 0, {}, T=V),
                    _m(V, 1, 1, {(0,): {1: 1}}))
    return mu, c


def matrix():
    """End(C) for C = c0 <- c1, contracted onto span{E00 + 2 E11, E01}, which is not a subalgebra.

    The transferred product is not associative, so every master-equation arity is a real test.
    """
    V = GradedSpace(("E00", "E11", "E01", "E10"), (0, 0, -1, 1))
    dV = _m(V, 1, -1, {(0,): {2: -1}, (1,): {2: 1}, (3,): {0: 1, 1: 1}})
    unit = {"E00": (0, 0), "E11": (1, 1), "E01": (0, 1), "E10": (1, 0)}
    table = {}
    for i, a in enumerate(V.names):
        for j, b in enumerate(V.names):
            (r1, c1), (r2, c2) = unit[a], unit[b]
            if c1 == r2:
                table[(i, j)] = {V.names.index(next(n for n in V.names if unit[n] == (r1, c2))): 1}
    mu = OperatorSeries.of([dV, _m(V, 2, 0, table)], 4)
    W = GradedSpace(("s", "t"), (0, -1))
    c = Contraction(V, W, dV, _m(W, 1, -1, {(0,): {1: 1}}), _m(V, 1, 0, {(0,): {0: -1}, (1,): {0: 1}, (2,): {1: 1}}, T=W),
                    _m(W, 1, 0, {(0,): {0: 1, 1: 2}, (1,): {2: 1}}, T=V), _m(V, 1, 1, {(0,): {3: 2}, (1,): {3: -1}}))
    return mu, c


def identity_of(builder):
    mu, c = builder()
    return mu, Contraction.identity(c.V, c.dV)


CONTRACTIONS = {"unital3": unital3, "massey": massey, "odd": odd, "acyclic": acyclic, "matrix": matrix}


def as_l(mu: OperatorSeries) -> OperatorSeries:
    from bracelab.structures import as_of_a_infinity
    return as_of_a_infinity(mu)


# gauge models

G22 = GaugeSpace(("Xa", "Xb"), ("Fa", "Fb"))


def gauge_valid():
    """[a, b] = b tensored with span{1, e}, e^2 = 0, differential 1 -> ad_a e."""
    L = G22.L
    n1 = MultiMap(L, 1, -1, {(1,): {3: 1}}, True)
    n2 = MultiMap(L, 2, 0, {(0, 3): {3: 1}, (1, 2): {3: -1}}, True)
    u2 = MultiMap(L, 2, 0, {(0, 1): {1: 1}}, True)
    return G22, nabla_map(G22, [n1, n2]), upsilon_map(G22, [u2])


def gauge_abelian():
    """One gauge parameter, one field, ∇_1 = id and nothing else."""
    G = GaugeSpace(("X",), ("F",))
    return G, nabla_map(G, [MultiMap(G.L, 1, -1, {(0,): {1: 1}}, True)]), upsilon_map(G, [])


def gauge_bad_bbvd():
    """The valid model without ∇_1 and with Υ's sign flipped."""
    L = G22.L
    n2 = MultiMap(L, 2, 0, {(0, 3): {3: 1}, (1, 2): {3: -1}}, True)
    u2 = MultiMap(L, 2, 0, {(0, 1): {1: -1}}, True)
    return G22, nabla_map(G22, [n2]), upsilon_map(G22, [u2])


def gauge_bad_bbvd_arity2():
    """The valid model with ∇_2's sign flipped; breaks the first equation already at arity 2."""
    L = G22.L
    n1 = MultiMap(L, 1, -1, {(1,): {3: 1}}, True)
    n2 = MultiMap(L, 2, 0, {(0, 3): {3: -1}, (1, 2): {3: 1}}, True)
    u2 = MultiMap(L, 2, 0, {(0, 1): {1: 1}}, True)
    return G22, nabla_map(G22, [n1, n2]), upsilon_map(G22, [u2])


def gauge_bad_jacobi():
    """Υ_2 failing Jacobi on three gauge parameters; ∇ = 0."""
    G = GaugeSpace(("Xa", "Xb", "Xc"), ("F",))
    u2 = MultiMap(G.L, 2, 0, {(0, 1): {0: 1}, (1, 2): {1: 1}}, True)
    return G, nabla_map(G, []), upsilon_map(G, [u2])


def all_upsilons_dim2():
    """Every Υ_2 on the 2+2 gauge space with entries in {-1, 0, 1}."""
    L = G22.L
    for a, b in itertools.product((-1, 0, 1), repeat=2):
        entries = {(0, 1): {o: c for o, c in ((0, a), (1, b)) if c}}
        yield upsilon_map(G22, [MultiMap(L, 2, 0, entries, True)])
