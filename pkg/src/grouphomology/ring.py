"""Coefficient rings: the integers and localizations Z[1/l]."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod


def prime_factors(n: int) -> tuple[int, ...]:
    """Distinct prime divisors of ``|n|`` in increasing order."""
    n = abs(n)
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return tuple(out)


@dataclass(frozen=True)
class RingSpec:
    """Z (``l == 1``) or Z[1/l].

    ``l`` is stored as its radical, so ``RingSpec(12) == RingSpec(6)``.
    Elements are always carried as integers; the ring only changes which
    integers count as units.
    """

    l: int = 1
    primes: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.l < 1:
            raise ValueError(f"l must be a positive integer, got {self.l}")
        ps = prime_factors(self.l)
        object.__setattr__(self, "primes", ps)
        object.__setattr__(self, "l", prod(ps) if ps else 1)

    @classmethod
    def integers(cls) -> "RingSpec":
        return cls(1)

    @classmethod
    def inverted(cls, l: int) -> "RingSpec":
        if l < 2:
            raise ValueError("Z[1/l] needs l >= 2")
        return cls(l)

    @property
    def is_integers(self) -> bool:
        return self.l == 1

    def strip(self, x: int) -> int:
        """``|x|`` with every prime dividing ``l`` removed (0 stays 0)."""
        x = abs(int(x))
        if x == 0:
            return 0
        for p in self.primes:
            while x % p == 0:
                x //= p
        return x

    def unit_part(self, x: int) -> int:
        """The l-smooth part of ``|x|``, so that ``|x| == unit_part * strip``."""
        x = abs(int(x))
        return x // self.strip(x) if x else 0

    def is_unit(self, x: int) -> bool:
        return self.strip(x) == 1

    def inverts(self, n: int) -> bool:
        """True iff ``1/n`` lies in the ring."""
        return n != 0 and self.is_unit(n)

    def __str__(self):
        return "Z" if self.l == 1 else f"Z[1/{self.l}]"


ZZ = RingSpec(1)


def parse_ring(text: str) -> RingSpec:
    """Parse ``Z``, ``Z[1/6]`` or a bare ``6``."""
    t = text.strip().replace(" ", "")
    if t in ("Z", "ZZ", "1"):
        return ZZ
    if t.startswith("Z[1/") and t.endswith("]"):
        t = t[4:-1]
    try:
        return RingSpec(int(t))
    except ValueError:
        raise ValueError(f"cannot parse ring {text!r}") from None
