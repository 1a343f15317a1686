"""Supported coefficient rings and their text forms.

Four kinds are supported, all commutative with 1:

    Z          the integers
    Zmod:n     residues modulo n (n >= 2)
    Fp:p       the prime field with p elements
    Prod:2x3   a finite product of prime fields, elements are tuples
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator


class RingError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of ``n >= 1`` as ``{p: exponent}``."""
    out: dict[int, int] = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class RingSpec:
    kind: str  # "Z", "Zmod", "Fp" or "Prod"
    modulus: int = 0
    primes: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind == "Z":
            if self.modulus != 0 or self.primes:
                raise RingError("Z takes no parameters")
        elif self.kind == "Zmod":
            if self.modulus < 2:
                raise RingError(f"Zmod needs n >= 2, got {self.modulus}")
        elif self.kind == "Fp":
            if not is_prime(self.modulus):
                raise RingError(f"Fp needs a prime, got {self.modulus}")
        elif self.kind == "Prod":
            if not self.primes:
                raise RingError("Prod needs at least one factor")
            for p in self.primes:
                if not is_prime(p):
                    raise RingError(f"Prod factor {p} is not prime")
        else:
            raise RingError(f"unknown ring kind {self.kind!r}")

    # construction -------------------------------------------------------

    @classmethod
    def integers(cls) -> RingSpec:
        return cls("Z")

    @classmethod
    def integers_mod(cls, n: int) -> RingSpec:
        return cls("Zmod", modulus=n)

    @classmethod
    def prime_field(cls, p: int) -> RingSpec:
        return cls("Fp", modulus=p)

    @classmethod
    def product(cls, primes) -> RingSpec:
        return cls("Prod", primes=tuple(primes))

    @classmethod
    def parse(cls, text: str) -> RingSpec:
        """Parse ``Z``, ``Zmod:4``, ``Fp:5`` or ``Prod:2x3``."""
        text = text.strip()
        if text == "Z":
            return cls.integers()
        head, sep, rest = text.partition(":")
        if not sep:
            raise RingError(f"cannot parse ring {text!r}")
        try:
            if head == "Zmod":
                return cls.integers_mod(int(rest))
            if head == "Fp":
                return cls.prime_field(int(rest))
            if head == "Prod":
                return cls.product(int(p) for p in rest.split("x"))
        except ValueError as exc:
            if isinstance(exc, RingError):
                raise
            raise RingError(f"cannot parse ring {text!r}") from exc
        raise RingError(f"cannot parse ring {text!r}")

    def __str__(self) -> str:
        if self.kind == "Z":
            return "Z"
        if self.kind == "Prod":
            return "Prod:" + "x".join(map(str, self.primes))
        return f"{self.kind}:{self.modulus}"

    # structure ----------------------------------------------------------

    @property
    def is_product(self) -> bool:
        return self.kind == "Prod"

    @property
    def is_field(self) -> bool:
        return self.kind == "Fp" or (self.kind == "Prod" and len(self.primes) == 1)

    @property
    def is_finite(self) -> bool:
        return self.kind != "Z"

    @cached_property
    def factors(self) -> tuple[RingSpec, ...]:
        """Prime-field factors of a product ring."""
        if self.kind != "Prod":
            raise RingError(f"{self} is not a product ring")
        return tuple(RingSpec.prime_field(p) for p in self.primes)

    @property
    def order(self) -> int | None:
        if self.kind == "Z":
            return None
        if self.kind == "Prod":
            out = 1
            for p in self.primes:
                out *= p
            return out
        return self.modulus

    # arithmetic ---------------------------------------------------------

    @property
    def zero(self):
        if self.kind == "Prod":
            return (0,) * len(self.primes)
        return 0

    @property
    def one(self):
        if self.kind == "Prod":
            return (1,) * len(self.primes)
        return 1

    def __call__(self, x):
        """Canonical representative of ``x`` (an int, or a tuple for products)."""
        if self.kind == "Z":
            return int(x)
        if self.kind == "Prod":
            if isinstance(x, int):
                return tuple(x % p for p in self.primes)
            x = tuple(x)
            if len(x) != len(self.primes):
                raise RingError(f"{x} has the wrong length for {self}")
            return tuple(int(a) % p for a, p in zip(x, self.primes))
        return int(x) % self.modulus

    from_int = __call__

    def add(self, a, b):
        if self.kind == "Prod":
            return tuple((x + y) % p for x, y, p in zip(a, b, self.primes))
        if self.kind == "Z":
            return a + b
        return (a + b) % self.modulus

    def sub(self, a, b):
        if self.kind == "Prod":
            return tuple((x - y) % p for x, y, p in zip(a, b, self.primes))
        if self.kind == "Z":
            return a - b
        return (a - b) % self.modulus

    def neg(self, a):
        if self.kind == "Prod":
            return tuple(-x % p for x, p in zip(a, self.primes))
        if self.kind == "Z":
            return -a
        return -a % self.modulus

    def mul(self, a, b):
        if self.kind == "Prod":
            return tuple((x * y) % p for x, y, p in zip(a, b, self.primes))
        if self.kind == "Z":
            return a * b
        return (a * b) % self.modulus

    def is_zero(self, a) -> bool:
        if self.kind == "Prod":
            return not any(a)
        return a == 0

    def is_unit(self, a) -> bool:
        if self.kind == "Prod":
            return all(a)
        if self.kind == "Z":
            return a in (1, -1)
        from math import gcd

        return gcd(a, self.modulus) == 1

    def elements(self) -> Iterator:
        """All elements of a finite ring, in a fixed order."""
        if self.kind == "Z":
            raise RingError("Z is infinite")
        if self.kind == "Prod":
            from itertools import product

            yield from product(*(range(p) for p in self.primes))
        else:
            yield from range(self.modulus)

    @cached_property
    def nonunits(self) -> tuple:
        return tuple(a for a in self.elements() if not self.is_unit(a))

    def random_element(self, rng: random.Random, bound: int = 2, nonunit_bias: float = 0.0):
        """Uniform element; with probability ``nonunit_bias`` a uniform non-unit instead."""
        if nonunit_bias and rng.random() < nonunit_bias:
            if self.kind == "Z":
                return rng.choice([a for a in range(-bound, bound + 1) if a not in (1, -1)])
            return rng.choice(self.nonunits)
        if self.kind == "Z":
            return rng.randint(-bound, bound)
        if self.kind == "Prod":
            return tuple(rng.randrange(p) for p in self.primes)
        return rng.randrange(self.modulus)

    # additive structure -------------------------------------------------

    @cached_property
    def additive_generators(self) -> tuple:
        """Elements generating the ring as an abelian group."""
        if self.kind == "Prod":
            k = len(self.primes)
            return tuple(tuple(int(i == c) for i in range(k)) for c in range(k))
        return (1,)

    def additive_coords(self, a) -> tuple[int, ...]:
        """Integer coefficients of ``a`` on :attr:`additive_generators`."""
        if self.kind == "Prod":
            return tuple(a)
        return (a,)

    def additive_orders(self) -> tuple[int, ...]:
        """Additive order of each additive generator (0 means infinite)."""
        if self.kind == "Prod":
            return self.primes
        return (self.modulus,)
