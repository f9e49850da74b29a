"""Dense univariate polynomials over Z_p and root finding."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import AttackFailedError, InvalidModulusError
from .numtheory import default_rng, mod_inv

MAX_SPLIT_TRIES = 64


def _trim(coeffs: list[int]) -> tuple[int, ...]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class PolyZp:
    """Polynomial with coefficients in ascending degree order, reduced mod p.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    p: int
    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        if self.p < 2:
            raise InvalidModulusError(f"modulus must be >= 2, got {self.p}")
        object.__setattr__(self, "coeffs", _trim([c % self.p for c in self.coeffs]))

    @classmethod
    def from_roots(cls, p: int, roots: Iterable[int]) -> "PolyZp":
        f = cls(p, (1,))
        for r in roots:
            f = f * cls(p, (-r, 1))
        return f

    @classmethod
    def x(cls, p: int) -> "PolyZp":
        return cls(p, (0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.p
        return acc

    def _check(self, other: "PolyZp") -> None:
        if not isinstance(other, PolyZp):
            raise TypeError(f"expected PolyZp, got {type(other).__name__}")
        if other.p != self.p:
            raise InvalidModulusError(f"modulus mismatch: {self.p} vs {other.p}")

    def __add__(self, other: "PolyZp") -> "PolyZp":
        return poly_add(self, other)

    def __sub__(self, other: "PolyZp") -> "PolyZp":
        return poly_add(self, other.scale(-1))

    def __mul__(self, other: "PolyZp") -> "PolyZp":
        return poly_mul(self, other)

    def __divmod__(self, other: "PolyZp") -> tuple["PolyZp", "PolyZp"]:
        return poly_divmod(self, other)

    def __mod__(self, other: "PolyZp") -> "PolyZp":
        return poly_divmod(self, other)[1]

    def scale(self, c: int) -> "PolyZp":
        return PolyZp(self.p, [c * a for a in self.coeffs])

    def monic(self) -> "PolyZp":
        if self.is_zero():
            return self
        return self.scale(mod_inv(self.lead, self.p))

    def __repr__(self) -> str:
        return f"PolyZp(p={self.p}, coeffs={list(self.coeffs)})"


def poly_add(f: PolyZp, g: PolyZp) -> PolyZp:
    f._check(g)
    n = max(len(f.coeffs), len(g.coeffs))
    a = f.coeffs + (0,) * (n - len(f.coeffs))
    b = g.coeffs + (0,) * (n - len(g.coeffs))
    return PolyZp(f.p, [x + y for x, y in zip(a, b)])


def poly_mul(f: PolyZp, g: PolyZp) -> PolyZp:
    f._check(g)
    if f.is_zero() or g.is_zero():
        return PolyZp(f.p)
    out = [0] * (len(f.coeffs) + len(g.coeffs) - 1)
    for i, a in enumerate(f.coeffs):
        for j, b in enumerate(g.coeffs):
            out[i + j] += a * b
    return PolyZp(f.p, out)


def poly_divmod(f: PolyZp, g: PolyZp) -> tuple[PolyZp, PolyZp]:
    """Return (q, r) with f = q*g + r and deg r < deg g."""
    f._check(g)
    if g.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    p = f.p
    rem = list(f.coeffs)
    dg = g.degree
    if len(rem) - 1 < dg:
        return PolyZp(p), f
    inv_lead = mod_inv(g.lead, p)
    quot = [0] * (len(rem) - dg)
    for shift in range(len(rem) - 1 - dg, -1, -1):
        c = rem[shift + dg] * inv_lead % p
        quot[shift] = c
        if c:
            for j, b in enumerate(g.coeffs):
                rem[shift + j] = (rem[shift + j] - c * b) % p
    return PolyZp(p, quot), PolyZp(p, rem[:dg])


def poly_gcd(f: PolyZp, g: PolyZp) -> PolyZp:
    """Monic gcd (zero if both inputs are zero)."""
    f._check(g)
    while not g.is_zero():
        f, g = g, f % g
    return f.monic()


def poly_powmod(base: PolyZp, e: int, f: PolyZp) -> PolyZp:
    """base**e mod f by square-and-multiply."""
    result = PolyZp(f.p, (1,)) % f
    base = base % f
    while e:
        if e & 1:
            result = result * base % f
        base = base * base % f
        e >>= 1
    return result


def poly_powmod_x(p: int, f: PolyZp) -> PolyZp:
    """X**p mod f."""
    if f.p != p:
        raise InvalidModulusError(f"modulus mismatch: {f.p} vs {p}")
    if f.degree < 1:
        raise ValueError("modulus polynomial must have degree >= 1")
    return poly_powmod(PolyZp.x(p), p, f)


def _split(g: PolyZp, rng, out: set[int]) -> None:
    # g is monic and a product of distinct linear factors
    p = g.p
    if g.degree < 1:
        return
    if g.degree == 1:
        out.add(-g.coeffs[0] % p)
        return
    for _ in range(MAX_SPLIT_TRIES):
        delta = rng.randrange(p)
        h = poly_powmod(PolyZp(p, (delta, 1)), (p - 1) // 2, g) - PolyZp(p, (1,))
        h = poly_gcd(h, g)
        if 0 < h.degree < g.degree:
            _split(h, rng, out)
            _split(poly_divmod(g, h)[0].monic(), rng, out)
            return
    raise AttackFailedError(f"equal-degree splitting failed after {MAX_SPLIT_TRIES} tries")


def roots_mod_p(f: PolyZp, rng=None) -> set[int]:
    """All roots of a nonzero polynomial in Z_p, for odd prime p.

    Isolates the product of distinct linear factors as gcd(X^p - X, f) and
    splits it with random shifts (X + delta)^((p-1)/2) - 1.
    """
    if f.p == 2:
        raise InvalidModulusError("roots_mod_p needs an odd prime modulus")
    if f.is_zero():
        raise ValueError("the zero polynomial has every element as a root")
    if f.degree < 1:
        return set()
    if rng is None:
        rng = default_rng()
    f = f.monic()
    xp = poly_powmod_x(f.p, f)
    g = poly_gcd(xp - PolyZp.x(f.p), f)
    roots: set[int] = set()
    _split(g, rng, roots)
    return roots
