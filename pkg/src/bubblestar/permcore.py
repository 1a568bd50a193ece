"""Permutation arithmetic for transposition Cayley graphs.

Permutations are written in one-line notation with 1-based labels, e.g.
``4321``.  Composing with a transposition ``<i, j>`` swaps the entries at
POSITIONS ``i`` and ``j`` (not the values ``i`` and ``j``)::

    compose(123, <2,3>) == 132

Value relabeling (applying a permutation to every entry) commutes with
position swaps; that is what makes relabeling an automorphism of every
transposition Cayley graph, see :func:`bubblestar.cayley.relabel_automorphism`.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Iterable, Iterator, Sequence


class PermutationError(ValueError):
    """Raised for malformed permutations, transpositions or ranks."""


@dataclass(frozen=True, order=True)
class Permutation:
    """A bijection on ``[1, n]`` in one-line notation."""

    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        entries = tuple(int(x) for x in self.entries)
        if sorted(entries) != list(range(1, len(entries) + 1)):
            raise PermutationError(f"not a permutation of [1, {len(entries)}]: {entries}")
        object.__setattr__(self, "entries", entries)

    @property
    def n(self) -> int:
        return len(self.entries)

    @classmethod
    def identity(cls, n: int) -> Permutation:
        if n < 1:
            raise PermutationError("n must be >= 1")
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def parse(cls, text: str) -> Permutation:
        return cls(parse_entries(text))

    def __str__(self) -> str:
        return format_entries(self.entries)

    def __repr__(self) -> str:
        return f"Permutation({self})"

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def __getitem__(self, position: int) -> int:
        """Entry at 1-based ``position``."""
        if not 1 <= position <= self.n:
            raise PermutationError(f"position {position} outside [1, {self.n}]")
        return self.entries[position - 1]

    @property
    def last(self) -> int:
        return self.entries[-1]


@dataclass(frozen=True, order=True)
class Transposition:
    """The position swap ``<i, j>`` with ``1 <= i < j``."""

    i: int
    j: int

    def __post_init__(self) -> None:
        i, j = int(self.i), int(self.j)
        if i == j:
            raise PermutationError(f"degenerate transposition <{i},{j}>")
        if i > j:
            i, j = j, i
        if i < 1:
            raise PermutationError(f"transposition position {i} < 1")
        object.__setattr__(self, "i", i)
        object.__setattr__(self, "j", j)

    def __str__(self) -> str:
        return f"<{self.i},{self.j}>"

    def check(self, n: int) -> None:
        if self.j > n:
            raise PermutationError(f"transposition {self} out of range for n={n}")


def parse_entries(text: str) -> tuple[int, ...]:
    """Parse ``"4321"`` (n <= 9) or ``"10 2 3 ..."`` (space separated)."""
    text = text.strip()
    if not text:
        raise PermutationError("empty permutation literal")
    if any(ch.isspace() for ch in text) or "," in text:
        parts = text.replace(",", " ").split()
    else:
        parts = list(text)
    try:
        entries = tuple(int(p) for p in parts)
    except ValueError as exc:
        raise PermutationError(f"bad permutation literal {text!r}") from exc
    if sorted(entries) != list(range(1, len(entries) + 1)):
        raise PermutationError(f"not a permutation of [1, {len(entries)}]: {text!r}")
    return entries


def format_entries(entries: Sequence[int]) -> str:
    if len(entries) <= 9:
        return "".join(str(x) for x in entries)
    return " ".join(str(x) for x in entries)


def swap(entries: tuple[int, ...], i: int, j: int) -> tuple[int, ...]:
    """Swap 1-based positions ``i`` and ``j`` of a raw entry tuple."""
    out = list(entries)
    out[i - 1], out[j - 1] = out[j - 1], out[i - 1]
    return tuple(out)


def compose(p: Permutation, t: Transposition) -> Permutation:
    """Return ``p o t``: ``p`` with the entries at positions ``t.i``, ``t.j`` exchanged."""
    t.check(p.n)
    return Permutation(swap(p.entries, t.i, t.j))


def inversions(entries: Sequence[int]) -> int:
    n = len(entries)
    return sum(1 for a in range(n) for b in range(a + 1, n) if entries[a] > entries[b])


def parity(p: Permutation | Sequence[int]) -> str:
    """``"even"`` or ``"odd"``, by inversion count."""
    entries = p.entries if isinstance(p, Permutation) else p
    return "odd" if inversions(entries) % 2 else "even"


def parity_bit(entries: Sequence[int]) -> int:
    """0 for even, 1 for odd; O(n) via cycle count."""
    n = len(entries)
    seen = [False] * n
    cycles = 0
    for start in range(n):
        if not seen[start]:
            cycles += 1
            k = start
            while not seen[k]:
                seen[k] = True
                k = entries[k] - 1
    return (n - cycles) & 1


def rank_entries(entries: Sequence[int]) -> int:
    """Lexicographic rank via the factorial number system (Lehmer code)."""
    n = len(entries)
    remaining = list(range(1, n + 1))
    r = 0
    for pos, x in enumerate(entries):
        k = remaining.index(x)
        r += k * factorial(n - 1 - pos)
        del remaining[k]
    return r


def unrank_entries(r: int, n: int) -> tuple[int, ...]:
    if n < 1:
        raise PermutationError("n must be >= 1")
    if not 0 <= r < factorial(n):
        raise PermutationError(f"rank {r} outside [0, {n}!)")
    remaining = list(range(1, n + 1))
    out = []
    for pos in range(n - 1, -1, -1):
        k, r = divmod(r, factorial(pos))
        out.append(remaining.pop(k))
    return tuple(out)


def rank(p: Permutation) -> int:
    return rank_entries(p.entries)


def unrank(r: int, n: int) -> Permutation:
    return Permutation(unrank_entries(r, n))


def all_permutations(n: int) -> Iterable[tuple[int, ...]]:
    """Raw entry tuples of ``S_n`` in lexicographic (rank) order."""
    from itertools import permutations

    return permutations(range(1, n + 1))


def relabel(sigma: Sequence[int], entries: Sequence[int]) -> tuple[int, ...]:
    """Apply the value map ``x -> sigma[x]`` to every entry."""
    return tuple(sigma[x - 1] for x in entries)
