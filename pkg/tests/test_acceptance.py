"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line.

Also runnable directly: ``python tests/test_acceptance.py``.
"""

import itertools
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from _corpus import (CONTRACTIONS, DIM2, LIE_CORPUS, all_upsilons_dim2, as_l, gauge_bad_bbvd,  # noqa: E402
                     gauge_bad_bbvd_arity2, gauge_bad_jacobi, gauge_valid, nonzero_random, structured_generators)
from bracelab import gauge  # noqa: E402
from bracelab.braces import (check_sym_brace_axiom, multimap_oracle, oudom_guin_brace, pre_lie,  # noqa: E402
                             sym_brace_hom, verify_as_compatibility)
from bracelab.cli import cmd_check, cmd_gauge, cmd_transfer  # noqa: E402
from bracelab.graded import GradedSpace, MultiMap, OperatorSeries, random_map  # noqa: E402
from bracelab.modelfile import format_model, models_equal, parse_model  # noqa: E402
from bracelab.structures import ce_differential, check_nullhomotopy, l_infinity_defect  # noqa: E402
from bracelab.transfer import (check_exp_brace_identities, check_explicit_matches_recursion,  # noqa: E402
                               check_kernel_differential, check_master_a, check_master_l,
                               check_nonsym_kernel_identity, check_sym_kernel_identity)
from bracelab.trees import (check_graft_expansion, count_labeled_trees, graft,  # noqa: E402
                            singleton)

MODELS = Path(__file__).resolve().parent.parent / "models"


def basis_maps(V, max_arity, antisym=False, min_arity=1):
    """Every elementary map e_tuple -> e_o (one nonzero entry, coefficient 1)."""
    out = []
    for k in range(min_arity, max_arity + 1):
        tuples = V.canonical_tuples(k) if antisym else V.tuples(k)
        for tup in tuples:
            for o in range(V.dim):
                deg = V.degrees[o] - sum(V.degrees[i] for i in tup)
                m = MultiMap(V, k, deg, {tup: {o: 1}}, antisym)
                if not m.is_zero():
                    out.append(m)
    return out


def _outcome(number, ok, detail):
    return number, ok, f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"


def criterion_1():
    t0 = time.perf_counter()
    alg = multimap_oracle(True)
    cases = bad = 0
    first = None
    for V in DIM2:
        gens = structured_generators(V)
        for x in gens:
            for total in range(0, 5):
                for m in range(0, min(total, x.arity) + 1):
                    for xs in itertools.combinations_with_replacement(gens, m):
                        for ys in itertools.combinations_with_replacement(gens, total - m):
                            if x.arity + sum(g.arity - 1 for g in xs + ys) > 4:
                                continue
                            cases += 1
                            rep = check_sym_brace_axiom(alg, x, xs, ys)
                            if not rep.ok:
                                bad += 1
                                first = first or rep.counterexample
    rng = random.Random(2024)
    for _ in range(200):
        V = rng.choice(DIM2)
        x = nonzero_random(rng, V, rng.randint(1, 3), rng.randint(-1, 1))
        m = rng.randint(0, min(2, x.arity))
        n = rng.randint(0, 4 - m)
        xs = [nonzero_random(rng, V, rng.randint(1, 2), rng.randint(-1, 1)) for _ in range(m)]
        ys = [nonzero_random(rng, V, rng.randint(1, 2), rng.randint(-1, 1)) for _ in range(n)]
        cases += 1
        rep = check_sym_brace_axiom(alg, x, xs, ys)
        if not rep.ok:
            bad += 1
            first = first or rep.counterexample
    secs = time.perf_counter() - t0
    ok = bad == 0 and secs < 60
    return _outcome(1, ok, f"symmetric brace axiom, {cases} instances (m+n <= 4, incl. 200 random), "
                           f"{bad} failures, {secs:.1f}s" + (f" [{first}]" if first else ""))


def criterion_2():
    cases = bad = 0
    for V in DIM2 + (GradedSpace(("x", "y"), (0, 0)),):
        F, G = basis_maps(V, 3), basis_maps(V, 2)
        for f in F:
            for n in range(0, 3):
                for gs in itertools.product(G, repeat=n):
                    cases += 1
                    bad += not verify_as_compatibility(f, list(gs)).ok
    return _outcome(2, bad == 0, f"as-compatibility of the two braces, exhaustive basis maps "
                                 f"(f arity <= 3, g arity <= 2, n <= 2, dim 2): {cases} cases, {bad} failures")


def criterion_3():
    deg = lambda m: m.b_degree
    cases = bad = 0
    for V in DIM2:
        gens = structured_generators(V)
        for x in gens:
            for n in range(0, 4):
                for args in itertools.combinations_with_replacement(gens, n):
                    if x.arity + sum(g.arity - 1 for g in args) > 4:
                        continue
                    args = list(args)
                    direct = sym_brace_hom(x, args)
                    cases += 1
                    ok = oudom_guin_brace(pre_lie, x, args, deg) == direct
                    if n == 3:
                        ok = ok and oudom_guin_brace(pre_lie, x, args, deg, split=1) == direct
                    bad += not ok
    return _outcome(3, bad == 0, f"pre-Lie reconstruction of braces, n <= 3, both n=3 routes: "
                                 f"{cases} cases, {bad} failures")


def criterion_4():
    cases = bad = 0
    names = []
    for name, build in LIE_CORPUS.items():
        V, l2 = build()
        names.append(f"{name}(dim {V.dim})")
        maps = basis_maps(V, 2, antisym=True)
        for f in maps:
            cases += 1
            bad += not ce_differential(l2, ce_differential(l2, f)).is_zero()
        for f, g in itertools.product(maps, repeat=2):
            cases += 1
            bad += not check_nullhomotopy(l2, f, g).ok
    return _outcome(4, bad == 0, f"d^2 = 0 and nullhomotopy on {', '.join(names)}, "
                                 f"basis cochains of arity <= 2: {cases} cases, {bad} failures")


def _parent_function_count(n):
    total = 0
    for root in range(n):
        others = [v for v in range(n) if v != root]
        for parents in itertools.product(range(n), repeat=len(others)):
            par = dict(zip(others, parents))
            good = True
            for v in others:
                seen, w = set(), v
                while w != root and good:
                    if w in seen or par[w] == w:
                        good = False
                    seen.add(w)
                    w = par[w]
            total += good
    return total


def _random_tree(rng, size):
    t = singleton(rng.choice("pqr"))
    for _ in range(size - 1):
        t = graft(t, [singleton(rng.choice("pqr"))], [rng.choice(t.vertices())])
    return t


def criterion_5():
    counts = [count_labeled_trees(n) for n in range(1, 6)]
    brute = [_parent_function_count(n) for n in range(1, 6)]
    ok_counts = counts == [1, 2, 9, 64, 625] == brute
    rng = random.Random(5)
    E = GradedSpace(("a", "b", "c", "d"), (0, 1, 2, 3))

    def even(k):
        while True:
            m = random_map(rng, E, k, k - 1, antisym=True)
            if not m.is_zero():
                return m

    alg = multimap_oracle()
    bad = 0
    for _ in range(100):
        S = _random_tree(rng, rng.randint(1, 3))
        attach = [_random_tree(rng, rng.randint(1, 2)) for _ in range(rng.randint(1, 2))]
        bad += not check_graft_expansion(S, attach, {"p": even(1), "q": even(2), "r": even(1)}, alg).ok
    return _outcome(5, ok_counts and bad == 0,
                    f"labeled tree counts {counts} (parent-function enumeration {brute}); "
                    f"graft expansion in Hom on 100 random instances, {bad} failures")


def _exp_triples(rng, count, N):
    V = GradedSpace(("x", "y", "z"), (0, 1, 2))

    def series(s, top):
        return OperatorSeries(V, s, N, {k: random_map(rng, V, k, s + k - 1, antisym=True)
                                        for k in range(1, top + 1)}, antisym=True)

    for _ in range(count):
        yield series(rng.choice([-1, 0, 1]), 3), series(rng.choice([-1, 0, 1]), 2), series(0, 2)


def criterion_6():
    t0 = time.perf_counter()
    N = 4
    failures = []
    for name, build in CONTRACTIONS.items():
        mu, c = build()
        l = as_l(mu)
        for rep in (check_kernel_differential(mu, c, N), check_nonsym_kernel_identity(mu, c, N),
                    check_sym_kernel_identity(l, c, N), check_master_a(mu, c, N), check_master_l(l, c, N),
                    check_explicit_matches_recursion(mu, c, N)):
            if not rep.ok:
                failures.append(f"{name}: {rep.line()}")
    rng = random.Random(6)
    exp_bad = sum(not check_exp_brace_identities(a, b, c, N).ok for a, b, c in _exp_triples(rng, 100, N))
    if exp_bad:
        failures.append(f"exp brace identities: {exp_bad} of 100 triples")
    secs = time.perf_counter() - t0
    ok = not failures and secs < 300
    detail = (f"transfer suite on {len(CONTRACTIONS)} contractions ({', '.join(CONTRACTIONS)}), N={N}: kernel "
              f"identities, master equations, explicit = recursion; exp identities on 100 triples; {secs:.1f}s")
    return _outcome(6, ok, detail + (f" [{failures[0]}]" if failures else ""))


def criterion_7():
    parts = []
    ok = True
    G, nab, ups = gauge_valid()
    sweep = gauge.jacobi_sweep(G, nab, ups, 3)
    ok &= sweep.ok
    parts.append(f"valid 2+2 model: {sweep.cases} triples up to test arity 3 {'all zero' if sweep.ok else 'FAILED'}")
    for label, build in (("(nabla) 2+2", gauge_bad_bbvd), ("(nabla, arity 2) 2+2", gauge_bad_bbvd_arity2),
                         ("(upsilon) 3+1", gauge_bad_jacobi)):
        Gb, nb, ub = build()
        rep = gauge.jacobi_sweep(Gb, nb, ub, 2)
        ok &= not rep.ok
        parts.append(f"violation {label}: {'witness found' if not rep.ok else 'NO WITNESS'}")
    vacuous = all(gauge.jacobi_defect(nab, u, 4).is_zero() for u in all_upsilons_dim2())
    ok &= vacuous
    parts.append("the upsilon condition cannot fail at dim Xi = 2" if vacuous else "dim-2 upsilon failure found")
    l = gauge.assemble_l_infinity(nab, ups, 4)
    assembled = l_infinity_defect(l, 4).is_zero()
    ok &= assembled
    parts.append(f"assembled l = nabla + upsilon defect {'zero' if assembled else 'NONZERO'} at N=4")
    decomp = all(gauge.check_decomposition(*b(), 4).ok
                 for b in (gauge_valid, gauge_bad_bbvd, gauge_bad_bbvd_arity2, gauge_bad_jacobi))
    ok &= decomp
    parts.append("l<l> splits into the two conditions" if decomp else "decomposition FAILED")
    return _outcome(7, ok, "; ".join(parts))


def criterion_8():
    files = sorted(MODELS.glob("*.model"))
    bad = []
    for path in files:
        text = path.read_text(encoding="utf-8")
        model = parse_model(text)
        printed = format_model(model)
        if not models_equal(model, parse_model(printed)) or format_model(parse_model(printed)) != printed:
            bad.append(f"round-trip {path.name}")
        commands = {t.command for t in model.tasks}
        runners = {"check": cmd_check, "gauge": cmd_gauge, "transfer": lambda p: cmd_transfer(p)[0]}
        for cmd in sorted(commands):
            a = runners[cmd](str(path)).machine()
            b = runners[cmd](str(path)).machine()
            if a != b:
                bad.append(f"nondeterministic {cmd} {path.name}")
    return _outcome(8, not bad and bool(files),
                    f"parse/print round-trip and byte-identical machine reports on {len(files)} model files"
                    + (f" [{bad[0]}]" if bad else ""))


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8]


def _run(capsys, fn):
    number, ok, line = fn()
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


def test_criterion_1(capsys):
    _run(capsys, criterion_1)


def test_criterion_2(capsys):
    _run(capsys, criterion_2)


def test_criterion_3(capsys):
    _run(capsys, criterion_3)


def test_criterion_4(capsys):
    _run(capsys, criterion_4)


def test_criterion_5(capsys):
    _run(capsys, criterion_5)


def test_criterion_6(capsys):
    _run(capsys, criterion_6)


def test_criterion_7(capsys):
    _run(capsys, criterion_7)


def test_criterion_8(capsys):
    _run(capsys, criterion_8)


if __name__ == "__main__":
    results = [fn() for fn in CRITERIA]
    for _, _, line in results:
        print(line)
    sys.exit(0 if all(ok for _, ok, _ in results) else 1)
