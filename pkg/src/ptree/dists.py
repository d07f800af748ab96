"""Successor distributions: finite tables and closed forms for infinite arity.

Every distribution answers three exact queries: the mass of child k, the
total mass of children below k (prefix mass), and the grand total. Closed
forms answer them symbolically so trees with infinitely many successors
never need enumeration.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import InfiniteLevel
from .paths import OMEGA

ONE = Fraction(1)
ZERO = Fraction(0)

FractionLike = Union[Fraction, int, str]


def as_fraction(value: FractionLike) -> Fraction:
    """Convert exactly; decimal strings become their exact rational value."""
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


class FiniteDist:
    """A distribution over a finite set of child indices.

    The index set need not be contiguous: restrictions of a family to a
    subtree keep the original child indices. Entries are not forced to sum
    to one here; family validation reports that separately.
    """

    __slots__ = ("_items", "_cells", "_total")

    def __init__(self, masses: Union[Sequence[FractionLike], Mapping[int, FractionLike]]):
        if isinstance(masses, Mapping):
            items = tuple((int(k), as_fraction(v)) for k, v in sorted(masses.items()))
        else:
            items = tuple((k, as_fraction(v)) for k, v in enumerate(masses))
        if any(k < 0 for k, _ in items):
            raise ValueError("negative child index")
        self._items = items
        cells = []
        run = ZERO
        for k, m in items:
            cells.append((k, run, run + m))
            run += m
        self._cells = tuple(cells)
        self._total = run

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(k for k, _ in self._items)

    @property
    def masses(self) -> tuple[Fraction, ...]:
        return tuple(m for _, m in self._items)

    @property
    def support(self):
        return self.indices

    def mass(self, k: int) -> Fraction:
        for j, m in self._items:
            if j == k:
                return m
        raise ValueError(f"child index {k} not in distribution support {self.indices}")

    def prefix_mass(self, k: int) -> Fraction:
        for j, before, _after in self._cells:
            if j >= k:
                return before
        return self._total

    def cells(self) -> tuple[tuple[int, Fraction, Fraction], ...]:
        """(index, cumulative mass before, cumulative mass after) per child."""
        return self._cells

    @property
    def total(self) -> Fraction:
        return self._total

    def positive_support(self) -> tuple[int, ...]:
        return tuple(j for j, m in self._items if m > 0)

    @property
    def everywhere_positive(self) -> bool:
        return all(m > 0 for _, m in self._items)

    @property
    def max_mass(self) -> Fraction:
        return max((m for _, m in self._items), default=ZERO)

    def restrict(self, indices: Iterable[int]) -> "FiniteDist":
        keep = set(indices)
        return FiniteDist({j: m for j, m in self._items if j in keep})

    def items(self) -> tuple[tuple[int, Fraction], ...]:
        return self._items

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteDist) and self._items == other._items

    def __hash__(self) -> int:
        return hash(self._items)

    def __repr__(self) -> str:
        body = ", ".join(f"{j}: {m}" for j, m in self._items)
        return f"FiniteDist({{{body}}})"


class Geometric:
    """Closed form over countably many children: child k has mass (1-r)·r^k."""

    __slots__ = ("ratio",)

    def __init__(self, ratio: FractionLike):
        r = as_fraction(ratio)
        if not 0 < r < 1:
            raise ValueError("geometric ratio must lie strictly between 0 and 1")
        self.ratio = r

    @property
    def support(self):
        return OMEGA

    def mass(self, k: int) -> Fraction:
        return (1 - self.ratio) * self.ratio**k

    def prefix_mass(self, k: int) -> Fraction:
        return 1 - self.ratio**k

    @property
    def total(self) -> Fraction:
        return ONE

    def positive_support(self):
        return OMEGA

    @property
    def everywhere_positive(self) -> bool:
        return True

    @property
    def max_mass(self) -> Fraction:
        return 1 - self.ratio

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Geometric) and self.ratio == other.ratio

    def __hash__(self) -> int:
        return hash(("geometric", self.ratio))

    def __repr__(self) -> str:
        return f"Geometric({self.ratio})"


class PointMass:
    """Closed form over countably many children: all mass on one child."""

    __slots__ = ("index",)

    def __init__(self, index: int):
        if index < 0:
            raise ValueError("negative child index")
        self.index = index

    @property
    def support(self):
        return OMEGA

    def mass(self, k: int) -> Fraction:
        return ONE if k == self.index else ZERO

    def prefix_mass(self, k: int) -> Fraction:
        return ONE if k > self.index else ZERO

    @property
    def total(self) -> Fraction:
        return ONE

    def positive_support(self) -> tuple[int, ...]:
        return (self.index,)

    @property
    def everywhere_positive(self) -> bool:
        return False

    @property
    def max_mass(self) -> Fraction:
        return ONE

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PointMass) and self.index == other.index

    def __hash__(self) -> int:
        return hash(("pointmass", self.index))

    def __repr__(self) -> str:
        return f"PointMass({self.index})"


Dist = Union[FiniteDist, Geometric, PointMass]


def positive_support_or_fail(dist: Dist) -> tuple[int, ...]:
    """Positive child indices, failing loudly when they are infinite."""
    support = dist.positive_support()
    if support is OMEGA:
        raise InfiniteLevel("distribution has infinitely many positive children")
    return support
