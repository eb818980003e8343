"""Permutations, Koszul signs and unshuffle enumeration.

Permutations are written by their images on 1..n, so ``Permutation((2, 3, 1))``
reorders a sequence ``(x1, x2, x3)`` into ``(x2, x3, x1)``.  All degrees are
integers in the homological ``|-|`` grading; only their parity matters.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterator, Sequence


class Permutation:
    """A bijection of {1..n} given by its images."""

    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation of 1..{len(images)}: {images}")
        self.images = images

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(1, n + 1))

    @classmethod
    def from_zero_based(cls, images: Sequence[int]) -> "Permutation":
        return cls([i + 1 for i in images])

    def __len__(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Permutation({self.images})"

    def zero_based(self) -> tuple[int, ...]:
        return tuple(i - 1 for i in self.images)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for pos, img in enumerate(self.images, start=1):
            inv[img - 1] = pos
        return Permutation(inv)

    def __mul__(self, other: "Permutation") -> "Permutation":
        # reordering by ``s * t`` means: reorder by t, then reorder the result by s
        if len(self) != len(other):
            raise ValueError("permutations of different lengths")
        return Permutation([other.images[i - 1] for i in self.images])

    def act(self, seq: Sequence) -> tuple:
        """The reordered sequence ``(seq[s(1)], ..., seq[s(n)])``."""
        if len(seq) != len(self.images):
            raise ValueError("length mismatch")
        return tuple(seq[i - 1] for i in self.images)

    def sign(self) -> int:
        return -1 if _inversions(self.zero_based()) % 2 else 1


def _as_zero_based(sigma) -> tuple[int, ...]:
    if isinstance(sigma, Permutation):
        return sigma.zero_based()
    return tuple(sigma)


def _inversions(perm: Sequence[int]) -> int:
    n = len(perm)
    return sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])


def koszul_exponent(perm: Sequence[int], degs: Sequence[int]) -> int:
    """Parity exponent of the Koszul sign; ``perm`` is zero-based images."""
    n = len(perm)
    if n != len(degs):
        raise ValueError(f"permutation of length {n} paired with {len(degs)} degrees")
    e = 0
    # an inverted pair is one whose relative order changes under the reordering
    for i in range(n):
        pi = perm[i]
        di = degs[pi]
        if di % 2 == 0:
            continue
        for j in range(i + 1, n):
            pj = perm[j]
            if pj < pi and degs[pj] % 2:
                e += 1
    return e


def koszul_sign(sigma, degs: Sequence[int]) -> int:
    """Koszul sign of reordering graded elements of the given degrees by ``sigma``.

    ``sigma`` is a :class:`Permutation` (1-based) or a zero-based image tuple.
    """
    return _koszul_cached(_as_zero_based(sigma), tuple(d % 2 for d in degs))


def antisym_koszul_sign(sigma, degs: Sequence[int]) -> int:
    """chi = sgn * epsilon."""
    return _chi_cached(_as_zero_based(sigma), tuple(d % 2 for d in degs))


@lru_cache(maxsize=1 << 16)
def _koszul_cached(perm: tuple[int, ...], parities: tuple[int, ...]) -> int:
    return -1 if koszul_exponent(perm, parities) % 2 else 1


@lru_cache(maxsize=1 << 16)
def _chi_cached(perm: tuple[int, ...], parities: tuple[int, ...]) -> int:
    e = koszul_exponent(perm, parities) + _inversions(perm)
    return -1 if e % 2 else 1


def unshuffles(n: int, num_blocks: int, allow_empty: bool = True) -> list[tuple[tuple[int, ...], ...]]:
    """Ordered partitions of {1..n} into ``num_blocks`` increasing blocks.

    Deterministic order: by the tuple of block sizes, then by block contents.
    """
    if num_blocks < 1:
        raise ValueError("need at least one block")
    out = []
    for blocks in _unshuffles_cached(n, num_blocks):
        if not allow_empty and any(not b for b in blocks):
            continue
        out.append(tuple(tuple(i + 1 for i in b) for b in blocks))
    return out


@lru_cache(maxsize=None)
def _unshuffles_cached(n: int, num_blocks: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    result = []
    for assign in itertools.product(range(num_blocks - 1, -1, -1), repeat=n):
        blocks = tuple(tuple(i for i in range(n) if assign[i] == b) for b in range(num_blocks))
        result.append(blocks)
    result.sort(key=lambda bl: (tuple(len(b) for b in bl), bl))
    return tuple(result)


def block_unshuffles(block_sizes: Sequence[int]) -> list[tuple[tuple[int, ...], ...]]:
    """Unshuffles of {1..sum(sizes)} with prescribed block sizes (1-based)."""
    return [tuple(tuple(i + 1 for i in b) for b in bl) for bl in block_unshuffles0(tuple(block_sizes))]


@lru_cache(maxsize=None)
def block_unshuffles0(sizes: tuple[int, ...]) -> tuple[tuple[tuple[int, ...], ...], ...]:
    if any(s < 0 for s in sizes):
        raise ValueError("negative block size")
    out: list[tuple[tuple[int, ...], ...]] = []

    def rec(remaining: tuple[int, ...], k: int, acc: list):
        if k == len(sizes):
            out.append(tuple(acc))
            return
        for chosen in itertools.combinations(remaining, sizes[k]):
            rest = tuple(x for x in remaining if x not in chosen)
            rec(rest, k + 1, acc + [chosen])

    rec(tuple(range(sum(sizes))), 0, [])
    return tuple(out)


def brace_insertion_sequences(m: int, n: int) -> list[tuple[int, ...]]:
    """All ``(i1, j1, ..., im, jm)`` with ``0 <= i1 <= j1 <= ... <= im <= jm <= n``."""
    if m < 1:
        raise ValueError("m must be at least 1")
    return list(itertools.combinations_with_replacement(range(n + 1), 2 * m))


def iter_permutations(n: int) -> Iterator[tuple[int, ...]]:
    """Zero-based permutations of range(n) in lexicographic order."""
    return itertools.permutations(range(n))
