"""Exact integer arithmetic for singular-fiber types 1/r(1,a).

The Hirzebruch-Jung (minus) continued fraction

    r/a = b_1 - 1/(b_2 - 1/(... - 1/b_n))

is produced by the recursion ``a_{i-2} = a_{i-1} * b_i - a_i`` with
``0 <= a_i < a_{i-1}``, starting from ``a_{-1} = r`` and ``a_0 = a``.
Everything here stays in Python integers / :class:`fractions.Fraction`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence, Tuple, Union


class InvalidFiberTypeError(ValueError):
    """Raised for (r, a) pairs that do not describe a fiber type."""


class NonFaithfulRepresentationError(InvalidFiberTypeError):
    """gcd(r, a) != 1: the cyclic representation would not be faithful."""


class InvalidExpansionError(ValueError):
    """Raised for coefficient lists that are not HJ expansions."""


@dataclass(frozen=True)
class FiberType:
    """Type 1/r(1,a) of a fiber; ``r == 1`` is a regular fiber."""

    r: int
    a: int

    def __post_init__(self):
        if not isinstance(self.r, int) or not isinstance(self.a, int):
            raise InvalidFiberTypeError(f"r and a must be integers, got {self.r!r}, {self.a!r}")
        if self.r < 1 or self.a < 1:
            raise InvalidFiberTypeError(f"r and a must be positive, got ({self.r}, {self.a})")
        if gcd(self.r, self.a) != 1:
            raise NonFaithfulRepresentationError(
                f"gcd({self.r}, {self.a}) = {gcd(self.r, self.a)}; type 1/r(1,a) needs coprime r, a"
            )

    @property
    def is_regular(self) -> bool:
        return self.r == 1

    @property
    def is_canonical(self) -> bool:
        return (self.r == 1 and self.a == 1) or (self.r >= 2 and 1 <= self.a < self.r)

    def __str__(self) -> str:
        return f"1/{self.r}(1,{self.a})"


FiberLike = Union[FiberType, Tuple[int, int]]


def as_fiber(t: FiberLike) -> FiberType:
    if isinstance(t, FiberType):
        return t
    r, a = t
    return FiberType(int(r), int(a))


@dataclass(frozen=True)
class HJExpansion:
    """Coefficients ``b = (b_1..b_n)`` and remainders ``(a_{-1}=r, a_0=a, ..., a_n=0)``."""

    b: Tuple[int, ...]
    remainders: Tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.b)

    @property
    def r(self) -> int:
        return self.remainders[0]

    @property
    def a(self) -> int:
        return self.remainders[1]

    def remainder(self, i: int) -> int:
        """``a_i`` for ``-1 <= i <= n``."""
        if not -1 <= i <= self.n:
            raise IndexError(f"remainder index {i} outside [-1, {self.n}]")
        return self.remainders[i + 1]

    def __str__(self) -> str:
        return "[{}] remainders {}".format(
            ",".join(map(str, self.b)), ",".join(map(str, self.remainders))
        )


def canonicalize(r: int, a: int) -> FiberType:
    """Reduce ``a`` into ``[1, r)``; ``r == 1`` maps to the regular type (1, 1)."""
    if r < 1:
        raise InvalidFiberTypeError(f"r must be >= 1, got {r}")
    if gcd(r, a) != 1:
        raise NonFaithfulRepresentationError(
            f"gcd({r}, {a}) = {gcd(r, a)}; the Z_{r} representation is not faithful"
        )
    if r == 1:
        return FiberType(1, 1)
    return FiberType(r, a % r)


def hj_expand(t: FiberLike) -> HJExpansion:
    t = as_fiber(t)
    if not t.is_canonical:
        raise InvalidFiberTypeError(f"{t} is not canonical (need 1 <= a < r)")
    if t.is_regular:
        raise InvalidFiberTypeError("regular fiber (r = 1) has no expansion")
    prev, cur = t.r, t.a
    b = []
    rems = [prev, cur]
    while cur > 0:
        # ceil(prev / cur); the next remainder then lands in [0, cur)
        bi = -(-prev // cur)
        nxt = cur * bi - prev
        b.append(bi)
        rems.append(nxt)
        prev, cur = cur, nxt
    return HJExpansion(tuple(b), tuple(rems))


def hj_evaluate(coeffs: Sequence[int]) -> Fraction:
    """Evaluate ``[b_1, ..., b_n]`` as an exact fraction ``r/a`` in lowest terms."""
    coeffs = list(coeffs)
    if not coeffs:
        raise InvalidExpansionError("empty coefficient list")
    for c in coeffs:
        if not isinstance(c, int) or c < 2:
            raise InvalidExpansionError(f"coefficients must be integers >= 2, got {c!r}")
    value = Fraction(coeffs[-1])
    for c in reversed(coeffs[:-1]):
        value = c - 1 / value
    return value


def length(t: FiberLike) -> int:
    t = as_fiber(t)
    if t.is_regular:
        return 0
    return hj_expand(t).n


def dual_numerators(expansion: HJExpansion) -> Tuple[int, ...]:
    """Sequence ``beta_{-1}=0, beta_0=1, beta_i = b_i beta_{i-1} - beta_{i-2}``.

    ``beta_i`` is the numerator of ``[b_1..b_i]``; ``beta_n == r``.
    """
    beta = [0, 1]
    for bi in expansion.b:
        beta.append(bi * beta[-1] - beta[-2])
    return tuple(beta)
