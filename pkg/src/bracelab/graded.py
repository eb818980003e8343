"""Graded vector spaces over the rationals and sparse graded multilinear maps."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

from .signs import antisym_koszul_sign, iter_permutations

Scalar = Fraction
Coeffs = dict  # basis index -> Fraction


def to_scalar(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def add_into(acc: dict, other: Mapping, c=1) -> None:
    """acc += c * other, dropping zeros."""
    for i, x in other.items():
        y = acc.get(i, 0) + c * x
        if y:
            acc[i] = y
        else:
            acc.pop(i, None)


def scaled(v: Mapping, c) -> dict:
    if not c:
        return {}
    return {i: c * x for i, x in v.items()}


@dataclass(frozen=True)
class GradedSpace:
    """Finite graded vector space; basis order is declaration order."""

    names: tuple[str, ...]
    degrees: tuple[int, ...]

    def __post_init__(self):
        if len(self.names) != len(self.degrees):
            raise ValueError("names and degrees differ in length")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate basis names in {self.names}")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, int]]) -> "GradedSpace":
        pairs = list(pairs)
        return cls(tuple(n for n, _ in pairs), tuple(int(d) for _, d in pairs))

    @property
    def dim(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no basis element {name!r}") from None

    def degs(self, tup: Sequence[int]) -> tuple[int, ...]:
        return tuple(self.degrees[i] for i in tup)

    def basis_of_degree(self, d: int) -> list[int]:
        return [i for i, e in enumerate(self.degrees) if e == d]

    def tuples(self, k: int):
        return itertools.product(range(self.dim), repeat=k)

    def canonical_tuples(self, k: int) -> list[tuple[int, ...]]:
        """Nondecreasing k-tuples that are not forced to vanish by antisymmetry."""
        return _canonical_tuples(self.degrees, k)

    def canonical(self, tup: tuple[int, ...]):
        """(sign, sorted) with f(tup) = sign * f(sorted) for antisymmetric f, or None if forced zero."""
        return _canonical(self.degrees, tup)

    def vector(self, coeffs: Mapping) -> "Vector":
        return Vector(self, coeffs)

    def basis_vector(self, i) -> "Vector":
        if isinstance(i, str):
            i = self.index(i)
        return Vector(self, {i: Fraction(1)})

    def flipped(self) -> "GradedSpace":
        """The same basis with V_k moved to V_{-k}."""
        return GradedSpace(self.names, tuple(-d for d in self.degrees))

    def format_vector(self, coeffs: Mapping) -> str:
        return format_coeffs(coeffs, self.names)


@lru_cache(maxsize=None)
def _canonical(degrees: tuple[int, ...], tup: tuple[int, ...]):
    order = sorted(range(len(tup)), key=lambda i: tup[i])
    srt = tuple(tup[i] for i in order)
    for a, b in zip(srt, srt[1:]):
        if a == b and degrees[a] % 2 == 0:
            return None
    sign = antisym_koszul_sign(order, [degrees[i] for i in tup])
    return sign, srt


@lru_cache(maxsize=None)
def _canonical_tuples(degrees: tuple[int, ...], k: int) -> list[tuple[int, ...]]:
    out = []
    for tup in itertools.combinations_with_replacement(range(len(degrees)), k):
        if all(not (a == b and degrees[a] % 2 == 0) for a, b in zip(tup, tup[1:])):
            out.append(tup)
    return out


def format_scalar(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_coeffs(coeffs: Mapping, names: Sequence[str]) -> str:
    if not coeffs:
        return "0"
    parts = []
    for i in sorted(coeffs):
        c = coeffs[i]
        if c == 1:
            term = names[i]
        elif c == -1:
            term = "-" + names[i]
        else:
            term = f"{format_scalar(c)}*{names[i]}"
        parts.append(term)
    out = parts[0]
    for t in parts[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out


class Vector:
    """Sparse vector in a graded space."""

    __slots__ = ("space", "coeffs")

    def __init__(self, space: GradedSpace, coeffs: Mapping | None = None):
        self.space = space
        self.coeffs = {int(i): to_scalar(c) for i, c in (coeffs or {}).items() if c}

    def degree(self) -> int | None:
        """The common degree, None for zero; raises if inhomogeneous."""
        ds = {self.space.degrees[i] for i in self.coeffs}
        if len(ds) > 1:
            raise ValueError(f"inhomogeneous vector {self}")
        return ds.pop() if ds else None

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "Vector") -> "Vector":
        acc = dict(self.coeffs)
        add_into(acc, other.coeffs)
        return Vector(self.space, acc)

    def __sub__(self, other: "Vector") -> "Vector":
        acc = dict(self.coeffs)
        add_into(acc, other.coeffs, -1)
        return Vector(self.space, acc)

    def __neg__(self) -> "Vector":
        return Vector(self.space, scaled(self.coeffs, -1))

    def __rmul__(self, c) -> "Vector":
        return Vector(self.space, scaled(self.coeffs, to_scalar(c)))

    def __eq__(self, other) -> bool:
        return isinstance(other, Vector) and self.space == other.space and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        return f"Vector({self.space.format_vector(self.coeffs)})"


class MultiMap:
    """A graded multilinear map source^{⊗k} -> target of internal degree p.

    Values are stored sparsely as ``tuple of basis indices -> {index: Fraction}``.
    Antisymmetric maps store only canonical (nondecreasing) tuples; other
    tuples are resolved through the antisymmetric Koszul sign.
    """

    __slots__ = ("source", "target", "arity", "degree", "antisym", "_data")

    def __init__(self, source: GradedSpace, arity: int, degree: int,
                 entries: Mapping | None = None, antisym: bool = False,
                 target: GradedSpace | None = None, check: bool = True):
        if arity < 1:
            raise ValueError("arity must be at least 1")
        self.source = source
        self.target = target if target is not None else source
        self.arity = arity
        self.degree = int(degree)
        self.antisym = bool(antisym)
        data: dict = {}
        for tup, val in (entries or {}).items():
            tup = tuple(tup)
            if isinstance(val, Vector):
                val = val.coeffs
            val = {i: to_scalar(c) for i, c in val.items() if c}
            if not val:
                continue
            if check:
                self._check_entry(tup, val)
            if antisym:
                can = source.canonical(tup)
                if can is None:
                    raise ValueError(f"entry {tup} must vanish by antisymmetry")
                sign, tup = can
                val = scaled(val, sign)
                if tup in data:
                    raise ValueError(f"antisymmetric entry {tup} given twice")
            if tup in data:
                add_into(data[tup], val)
                if not data[tup]:
                    del data[tup]
            else:
                data[tup] = val
        self._data = data

    def _check_entry(self, tup, val):
        if len(tup) != self.arity:
            raise ValueError(f"entry {tup} has wrong arity (expected {self.arity})")
        if any(not 0 <= i < self.source.dim for i in tup):
            raise ValueError(f"entry {tup} out of range")
        want = sum(self.source.degrees[i] for i in tup) + self.degree
        for o in val:
            if self.target.degrees[o] != want:
                raise ValueError(
                    f"entry {tup} -> {self.target.names[o]} breaks degree (need degree {want})")

    # construction helpers

    @classmethod
    def zero(cls, source, arity, degree, antisym=False, target=None) -> "MultiMap":
        return cls(source, arity, degree, {}, antisym, target)

    @classmethod
    def identity(cls, space: GradedSpace) -> "MultiMap":
        return cls(space, 1, 0, {(i,): {i: 1} for i in range(space.dim)}, antisym=True)

    @classmethod
    def from_function(cls, source, arity, degree, fn: Callable[[tuple], Mapping],
                      antisym=False, target=None) -> "MultiMap":
        """Tabulate ``fn`` on every tuple (canonical tuples only if antisym)."""
        tuples = source.canonical_tuples(arity) if antisym else source.tuples(arity)
        entries = {}
        for tup in tuples:
            v = fn(tup)
            if v:
                entries[tup] = v
        return cls(source, arity, degree, entries, antisym, target, check=False)

    # evaluation

    def value(self, tup: tuple[int, ...]) -> dict:
        """f(e_{i1}, ..., e_{ik}) as a coefficient dict (do not mutate)."""
        if not self.antisym:
            return self._data.get(tup, _EMPTY)
        can = self.source.canonical(tup)
        if can is None:
            return _EMPTY
        sign, srt = can
        v = self._data.get(srt, _EMPTY)
        return v if sign == 1 or not v else scaled(v, -1)

    def stored_items(self):
        return self._data.items()

    def full_items(self):
        """All nonzero (tuple, value) pairs, expanding antisymmetric storage."""
        if not self.antisym:
            yield from self._data.items()
            return
        for tup in self.source.tuples(self.arity):
            v = self.value(tup)
            if v:
                yield tup, v

    def eval_vectors(self, args: Sequence[Mapping]) -> dict:
        """Multilinear evaluation on coefficient dicts; no Koszul signs (scalars are even)."""
        acc: dict = {}
        if any(not a for a in args):
            return acc
        for combo in itertools.product(*[tuple(a.items()) for a in args]):
            c = 1
            for _, x in combo:
                c *= x
            v = self.value(tuple(i for i, _ in combo))
            if v:
                add_into(acc, v, c)
        return acc

    def is_zero(self) -> bool:
        return not self._data

    @property
    def b_degree(self) -> int:
        return self.degree - self.arity + 1

    @property
    def space(self) -> GradedSpace:
        return self.source

    # arithmetic

    def _compatible(self, other: "MultiMap"):
        if (self.source, self.target, self.arity) != (other.source, other.target, other.arity):
            raise ValueError("maps live in different Hom-spaces")
        if self.degree != other.degree and not (self.is_zero() or other.is_zero()):
            raise ValueError(f"adding maps of degrees {self.degree} and {other.degree}")

    def _combine(self, other: "MultiMap", c) -> "MultiMap":
        self._compatible(other)
        deg = self.degree if not self.is_zero() or other.is_zero() else other.degree
        if self.antisym == other.antisym:
            data = {t: dict(v) for t, v in self._data.items()}
            for t, v in other._data.items():
                d = data.setdefault(t, {})
                add_into(d, v, c)
                if not d:
                    del data[t]
            return MultiMap(self.source, self.arity, deg, data, self.antisym, self.target, check=False)
        data = {}
        for t in self.source.tuples(self.arity):
            v = dict(self.value(t))
            add_into(v, other.value(t), c)
            if v:
                data[t] = v
        return MultiMap(self.source, self.arity, deg, data, False, self.target, check=False)

    def __add__(self, other: "MultiMap") -> "MultiMap":
        return self._combine(other, 1)

    def __sub__(self, other: "MultiMap") -> "MultiMap":
        return self._combine(other, -1)

    def __neg__(self) -> "MultiMap":
        return self.scale(-1)

    def scale(self, c) -> "MultiMap":
        c = to_scalar(c)
        data = {t: scaled(v, c) for t, v in self._data.items()} if c else {}
        return MultiMap(self.source, self.arity, self.degree, data, self.antisym, self.target, check=False)

    def __rmul__(self, c) -> "MultiMap":
        return self.scale(c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiMap):
            return NotImplemented
        if (self.source, self.target, self.arity) != (other.source, other.target, other.arity):
            return False
        if self.is_zero() and other.is_zero():
            return True
        if self.degree != other.degree:
            return False
        if self.antisym == other.antisym:
            return self._data == other._data
        return dict(self.full_items()) == dict(other.full_items())

    __hash__ = None

    def as_plain(self) -> "MultiMap":
        """The same map with unconstrained storage."""
        if not self.antisym:
            return self
        return MultiMap(self.source, self.arity, self.degree, dict(self.full_items()), False,
                        self.target, check=False)

    def as_antisym(self) -> "MultiMap":
        """Reinterpret an antisymmetric-valued map with canonical storage; raises if not antisymmetric."""
        if self.antisym:
            return self
        if not is_antisymmetric(self):
            raise ValueError("map is not antisymmetric")
        data = {t: self.value(t) for t in self.source.canonical_tuples(self.arity)}
        return MultiMap(self.source, self.arity, self.degree, {t: v for t, v in data.items() if v},
                        True, self.target, check=False)

    def first_difference(self, other: "MultiMap"):
        """First tuple (lexicographic) where the two maps disagree, with both values."""
        for t in self.source.tuples(self.arity):
            a, b = self.value(t), other.value(t)
            if a != b:
                return t, a, b
        return None

    def describe_tuple(self, tup) -> str:
        return "(" + ", ".join(self.source.names[i] for i in tup) + ")"

    def __repr__(self) -> str:
        items = sorted(self._data.items())
        body = ", ".join(f"{self.describe_tuple(t)}: {self.target.format_vector(v)}" for t, v in items[:6])
        more = ", ..." if len(items) > 6 else ""
        tag = " as" if self.antisym else ""
        return f"MultiMap(k={self.arity}, p={self.degree}{tag}; {body}{more})"


_EMPTY: dict = {}


def apply(f: MultiMap, args: Sequence[Vector]) -> Vector:
    """Evaluate f on homogeneous vectors; output degree is the sum of input degrees plus p."""
    if len(args) != f.arity:
        raise ValueError(f"map of arity {f.arity} applied to {len(args)} arguments")
    for a in args:
        a.degree()
    out = Vector(f.target, f.eval_vectors([a.coeffs for a in args]))
    out.degree()
    return out


def b_degree(f: MultiMap) -> int:
    return f.degree - f.arity + 1


def is_antisymmetric(f: MultiMap) -> bool:
    """Check f(.., v_i, v_{i+1}, ..) = -(-1)^{|v_i||v_{i+1}|} f(.., v_{i+1}, v_i, ..) for basis tuples."""
    if f.antisym:
        return True
    degs = f.source.degrees
    for t in f.source.tuples(f.arity):
        v = f.value(t)
        for i in range(f.arity - 1):
            s = list(t)
            s[i], s[i + 1] = s[i + 1], s[i]
            w = f.value(tuple(s))
            sign = 1 if degs[t[i]] * degs[t[i + 1]] % 2 else -1
            expect = scaled(w, sign)
            if v != expect:
                return False
    return True


def antisymmetrize(f: MultiMap) -> MultiMap:
    """as(f)(v_1..v_k) = sum over sigma of chi(sigma; v) f(v_sigma(1), .., v_sigma(k))."""
    perms = list(iter_permutations(f.arity))
    degs = f.source.degrees

    def fn(tup):
        acc: dict = {}
        ds = [degs[i] for i in tup]
        for perm in perms:
            v = f.value(tuple(tup[i] for i in perm))
            if v:
                add_into(acc, v, antisym_koszul_sign(perm, ds))
        return acc

    return MultiMap.from_function(f.source, f.arity, f.degree, fn, antisym=True, target=f.target)


def compose_in_slot(f: MultiMap, g: MultiMap, slot: int) -> MultiMap:
    """f with g inserted at input ``slot`` (1-based), with the Koszul sign of g passing earlier inputs."""
    if not 1 <= slot <= f.arity:
        raise ValueError(f"slot {slot} out of range for arity {f.arity}")
    if g.target != f.source:
        raise ValueError("g does not land in the source of f")
    k, a = f.arity, g.arity
    degs = g.source.degrees
    i = slot - 1

    def fn(tup):
        left, mid, right = tup[:i], tup[i:i + a], tup[i + a:]
        inner = g.value(mid)
        if not inner:
            return {}
        sign = -1 if g.degree * sum(degs[x] for x in left) % 2 else 1
        args = [{x: 1} for x in left] + [inner] + [{x: 1} for x in right]
        return scaled(f.eval_vectors(args), sign)

    if f.source != g.source and k > 1:
        raise ValueError("mixed source spaces need arity-1 outer map")
    antisym = k == 1 and g.antisym
    return MultiMap.from_function(g.source, k + a - 1, f.degree + g.degree, fn,
                                  antisym=antisym, target=f.target)


def compose(f: MultiMap, g: MultiMap) -> MultiMap:
    """Ordinary composition f∘g of an arity-1 map with any map."""
    if f.arity != 1:
        raise ValueError("compose needs an arity-1 outer map")
    return compose_in_slot(f, g, 1)


def tensor_apply(maps: Sequence[MultiMap], tup: tuple[int, ...]) -> dict:
    """(g_1 ⊗ ... ⊗ g_n)(e_tup) for arity-1 maps, as {output tuple: coefficient} with Koszul signs."""
    out = {(): Fraction(1)}
    passed = 0
    for g, x in zip(maps, tup):
        v = g.value((x,))
        sign = -1 if g.degree * passed % 2 else 1
        new = {}
        for t, c in out.items():
            for o, y in v.items():
                new[t + (o,)] = new.get(t + (o,), 0) + sign * c * y
        out = {t: c for t, c in new.items() if c}
        passed += g.source.degrees[x]
    return out


def random_map(rng, source: GradedSpace, arity: int, degree: int, density: float = 0.6,
               antisym: bool = False, coeff_range: int = 3, target: GradedSpace | None = None) -> MultiMap:
    """Random sparse map with small integer coefficients (for tests and sweeps)."""
    target = target or source
    tuples = source.canonical_tuples(arity) if antisym else list(source.tuples(arity))
    entries = {}
    for tup in tuples:
        want = sum(source.degrees[i] for i in tup) + degree
        val = {}
        for o in target.basis_of_degree(want):
            if rng.random() < density:
                c = rng.randint(-coeff_range, coeff_range)
                if c:
                    val[o] = Fraction(c)
        if val:
            entries[tup] = val
    return MultiMap(source, arity, degree, entries, antisym, target, check=False)


@dataclass
class OperatorSeries:
    """Arity-indexed family {F_k} of one B-degree, truncated at max_arity."""

    source: GradedSpace
    b_degree: int
    max_arity: int
    components: dict = field(default_factory=dict)
    target: GradedSpace | None = None
    antisym: bool = False

    def __post_init__(self):
        if self.target is None:
            self.target = self.source
        comps = {}
        for k, m in self.components.items():
            if k > self.max_arity:
                continue
            if m.arity != k:
                raise ValueError(f"component {k} has arity {m.arity}")
            if not m.is_zero() and m.b_degree != self.b_degree:
                raise ValueError(
                    f"component {k} has B-degree {m.b_degree}, series has {self.b_degree}")
            if not m.is_zero():
                comps[k] = m
        self.components = comps

    def degree_at(self, k: int) -> int:
        return self.b_degree + k - 1

    def component(self, k: int) -> MultiMap:
        m = self.components.get(k)
        if m is None:
            return MultiMap.zero(self.source, k, self.degree_at(k), self.antisym, self.target)
        return m

    def __getitem__(self, k: int) -> MultiMap:
        return self.component(k)

    def arities(self) -> list[int]:
        return sorted(self.components)

    def is_zero(self) -> bool:
        return not self.components

    def nonzero_arities(self) -> list[int]:
        return [k for k in self.arities() if not self.components[k].is_zero()]

    def _combine(self, other: "OperatorSeries", c) -> "OperatorSeries":
        if self.b_degree != other.b_degree and not (self.is_zero() or other.is_zero()):
            raise ValueError("adding series of different B-degrees")
        N = min(self.max_arity, other.max_arity)
        comps = {}
        for k in set(self.components) | set(other.components):
            if k <= N:
                comps[k] = self.component(k) + other.component(k).scale(c)
        bd = self.b_degree if not self.is_zero() else other.b_degree
        return OperatorSeries(self.source, bd, N, comps, self.target, self.antisym and other.antisym)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, c) -> "OperatorSeries":
        return OperatorSeries(self.source, self.b_degree, self.max_arity,
                              {k: m.scale(c) for k, m in self.components.items()},
                              self.target, self.antisym)

    def __neg__(self):
        return self.scale(-1)

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OperatorSeries):
            return NotImplemented
        N = min(self.max_arity, other.max_arity)
        ks = {k for k in set(self.components) | set(other.components) if k <= N}
        return all(self.component(k) == other.component(k) for k in ks)

    __hash__ = None

    def truncated(self, N: int) -> "OperatorSeries":
        return OperatorSeries(self.source, self.b_degree, N,
                              {k: m for k, m in self.components.items() if k <= N},
                              self.target, self.antisym)

    @classmethod
    def of(cls, maps: Iterable[MultiMap], max_arity: int, b_degree: int | None = None) -> "OperatorSeries":
        maps = list(maps)
        if not maps:
            raise ValueError("need at least one component, or use OperatorSeries(...) directly")
        bd = b_degree if b_degree is not None else maps[0].b_degree
        comps: dict = {}
        for m in maps:
            comps[m.arity] = comps[m.arity] + m if m.arity in comps else m
        return cls(maps[0].source, bd, max_arity, comps, maps[0].target,
                   all(m.antisym for m in maps))


def factorial(n: int) -> int:
    return math.factorial(n)
