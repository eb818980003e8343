import itertools
import random

import pytest

from bracelab.braces import check_sym_brace_axiom, multimap_oracle, oudom_guin_brace, sym_brace_hom
from bracelab.graded import GradedSpace, random_map
from bracelab.trees import (DecoratedTree, ParseError, RootedTree, TreeLC, check_graft_expansion,
                            count_labeled_trees, eval_tree, free_brace, free_pre_lie, graft, parse_expression,
                            parse_lc, parse_tree, singleton, tree_brace_oracle, universal_map)

E = GradedSpace(("a", "b", "c", "d"), (0, 1, 2, 3))


def lc(text):
    return parse_expression(text)


def random_tree(rng, size, labels="pqr"):
    t = singleton(rng.choice(labels))
    for _ in range(size - 1):
        v = rng.choice(t.vertices())
        t = graft(t, [singleton(rng.choice(labels))], [v])
    return t


def even_map(rng, arity):
    """B-degree 0, so the symmetric brace on Hom carries no signs."""
    while True:
        m = random_map(rng, E, arity, arity - 1, antisym=True)
        if not m.is_zero():
            return m


def test_canonical_children():
    assert parse_tree("a(c,b)") == parse_tree("a(b,c)")
    assert str(parse_tree("a(c(d),b)")) == "a(b,c(d))"
    t = parse_tree("a(b,c(d))")
    assert t.size == 4 and t.edges() == 3
    assert t.vertices() == [(), (0,), (1,), (1, 0)]
    assert t.labels() == ["a", "b", "c", "d"]
    assert t.shape() == RootedTree([RootedTree(), RootedTree([RootedTree()])])


def test_graft_examples():
    S = parse_tree("a(b)")
    assert graft(S, [singleton("c")], [()]) == parse_tree("a(b,c)")
    assert graft(S, [singleton("c")], [(0,)]) == parse_tree("a(b(c))")
    assert graft(S, [parse_tree("c(d)"), singleton("e")], [(0,), (0,)]) == parse_tree("a(b(c(d),e))")
    with pytest.raises(ValueError):
        graft(S, [singleton("c")], [(3,)])
    with pytest.raises(ValueError):
        graft(S, [singleton("c")], [])


def test_graft_order_independent():
    rng = random.Random(0)
    for _ in range(50):
        S = random_tree(rng, rng.randint(1, 4))
        att = [random_tree(rng, rng.randint(1, 3)) for _ in range(2)]
        v = [rng.choice(S.vertices()) for _ in att]
        assert graft(S, att, v) == graft(S, att[::-1], v[::-1])
        assert graft(S, att, v).size == S.size + sum(t.size for t in att)


def test_free_brace_examples():
    assert free_brace(lc("a"), []) == lc("a")
    assert str(lc("a<b>")) == "a(b)"
    assert str(lc("a(b)<c>")) == "a(b,c) + a(b(c))"
    assert lc("a<b,c>") == lc("a(b,c)")
    # two leaves of a(b) each receive one of the inputs, or share
    assert lc("a(b)<c,d>") == lc("a(b,c,d) + a(b(c),d) + a(b(d),c) + a(b(c,d))")
    assert lc("a<b,b>") == TreeLC.of("a(b,b)", 1)
    assert lc("a<b><c>") - lc("a<b<c>>") == lc("a<b,c>")
    assert free_pre_lie(lc("a"), lc("b")) == lc("a(b)")


def test_linear_combinations():
    x = lc("2*a - 1/2*b")
    assert str(x) == "2*a - 1/2*b"
    assert (x - x).is_zero()
    assert lc("[a + b]<c>") == lc("a(c) + b(c)")
    assert free_brace(lc("a"), [lc("b + c")]) == lc("a(b) + a(c)")


def test_free_brace_satisfies_symmetric_axiom():
    alg = tree_brace_oracle()
    gens = [lc(s) for s in ("a", "b(c)", "d + e(f)", "g(h,i)")]
    count = 0
    for x in gens:
        for m in range(0, 3):
            for n in range(0, 3):
                for xs in itertools.product(gens, repeat=m):
                    for ys in itertools.product(gens[:2], repeat=n):
                        assert check_sym_brace_axiom(alg, x, xs, ys).ok
                        count += 1
    assert count > 100


def test_eval_tree_small_shapes():
    rng = random.Random(1)
    f, g, h = even_map(rng, 2), even_map(rng, 1), even_map(rng, 2)
    dec = {"f": f, "g": g, "h": h}
    alg = multimap_oracle()
    assert eval_tree(singleton("f"), dec, alg) == f
    assert eval_tree(parse_tree("f(g)"), dec, alg) == sym_brace_hom(f, [g])
    assert eval_tree(parse_tree("f(g,h)"), dec, alg) == sym_brace_hom(f, [g, h])
    assert eval_tree(parse_tree("f(g(h))"), dec, alg) == sym_brace_hom(f, [sym_brace_hom(g, [h])])


def test_eval_tree_callable_decoration():
    seen = []
    alg = tree_brace_oracle()

    def b(path, label):
        seen.append(path)
        return lc(label.upper())

    # evaluating a tree in SB(X) with b = the generator map gives the tree back
    assert eval_tree(parse_tree("p(q,r(s))"), b, alg) == lc("P(Q,R(S))")
    assert sorted(seen) == [(), (0,), (1,), (1, 0)]


def test_graft_expansion_hom_algebra():
    rng = random.Random(2)
    alg = multimap_oracle()
    count = 0
    for _ in range(100):
        S = random_tree(rng, rng.randint(1, 3))
        attach = [random_tree(rng, rng.randint(1, 2)) for _ in range(rng.randint(1, 2))]
        dec = {"p": even_map(rng, 1), "q": even_map(rng, 2), "r": even_map(rng, 1)}
        rep = check_graft_expansion(S, attach, dec, alg)
        assert rep.ok, rep.counterexample
        count += 1
    assert count == 100


def test_graft_expansion_in_free_algebra():
    rng = random.Random(3)
    alg = tree_brace_oracle()
    dec = {"p": lc("u"), "q": lc("v(w)"), "r": lc("u + v")}
    for _ in range(30):
        S = random_tree(rng, rng.randint(1, 3))
        attach = [random_tree(rng, 2) for _ in range(rng.randint(1, 2))]
        assert check_graft_expansion(S, attach, dec, alg).ok


def test_universal_map_is_brace_morphism():
    rng = random.Random(4)
    alg = multimap_oracle()
    phi = {"a": even_map(rng, 2), "b": even_map(rng, 1), "c": even_map(rng, 1)}
    Phi = universal_map(phi, alg)
    for x, ys in [("a", ["b"]), ("a(b)", ["c"]), ("a", ["b", "c"]), ("b(c)", ["a(b)"]), ("2*b - c", ["a"])]:
        lhs = Phi(free_brace(lc(x), [lc(y) for y in ys]))
        rhs = sym_brace_hom(Phi(lc(x)), [Phi(lc(y)) for y in ys])
        assert lhs == rhs
    for g in phi:
        assert Phi(lc(g)) == phi[g]
    with pytest.raises(ValueError):
        Phi(TreeLC())


def test_universal_map_uniqueness():
    """Changing the value on a single tree breaks the morphism property."""
    rng = random.Random(5)
    alg = multimap_oracle()
    phi = {"a": even_map(rng, 2), "b": even_map(rng, 1)}
    Phi = universal_map(phi, alg)
    target = parse_tree("a(b)")
    bump = even_map(rng, 2)

    def Psi(x):
        out = Phi(x)
        c = x.terms.get(target, 0)
        return out + bump.scale(c) if c else out

    assert Psi(lc("a")) == phi["a"] and Psi(lc("b")) == phi["b"]
    assert Psi(free_brace(lc("a"), [lc("b")])) != sym_brace_hom(Psi(lc("a")), [Psi(lc("b"))])


def _rooted_labeled_trees_by_parents(n):
    """Count parent functions on {1..n} with one root and no cycles."""
    total = 0
    for root in range(n):
        others = [v for v in range(n) if v != root]
        for parents in itertools.product(range(n), repeat=len(others)):
            par = dict(zip(others, parents))
            if any(par[v] == v for v in others):
                continue
            ok = True
            for v in others:
                seen, w = set(), v
                while w != root:
                    if w in seen:
                        ok = False
                        break
                    seen.add(w)
                    w = par[w]
                if not ok:
                    break
            total += ok
    return total


def test_count_labeled_trees():
    assert [count_labeled_trees(n) for n in range(1, 7)] == [1, 2, 9, 64, 625, 7776]
    for n in range(1, 6):
        assert count_labeled_trees(n) == _rooted_labeled_trees_by_parents(n)
    with pytest.raises(ValueError):
        count_labeled_trees(0)


def test_parser_round_trip():
    rng = random.Random(6)
    for _ in range(50):
        x = TreeLC()
        for _ in range(rng.randint(0, 3)):
            x = x + TreeLC.of(random_tree(rng, rng.randint(1, 4)), rng.choice([1, -1, 2, "1/3"]))
        assert parse_lc(str(x)) == x
        for t in x.support():
            assert parse_tree(str(t)) == t


@pytest.mark.parametrize("bad", ["", "a(", "a<b", "a)b", "2*", "a(b,)"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_expression(bad)


def test_oudom_guin_in_free_algebra():
    deg = lambda x: 0
    gens = [lc(s) for s in ("a", "b(c)", "d + e", "f(g,h)")]
    for x in gens:
        for n in range(0, 4):
            for args in itertools.product(gens, repeat=n):
                direct = free_brace(x, list(args))
                assert oudom_guin_brace(free_pre_lie, x, list(args), deg) == direct
                if n >= 2:
                    assert oudom_guin_brace(free_pre_lie, x, list(args), deg, split=1) == direct


def test_decorated_tree_hashing():
    a, b = parse_tree("x(y,z)"), parse_tree("x(z,y)")
    assert a == b and hash(a) == hash(b)
    assert len({a, b, parse_tree("x(y(z))")}) == 2
    assert DecoratedTree("x", [singleton("y")]) == parse_tree("x(y)")
