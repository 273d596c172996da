"""Finite-support adeles and ideles over an abstract point set.

Points are opaque ordered labels; only the projective-line layer attaches
coordinates to them.  An adele/idele is a finite exception map together
with a default component used at every unlisted point (the canonical
default is the constant series 1, matching integrality at almost all
points).  Valuation vectors and ramification profiles are the mod-p and
gcd images of the component valuations.
"""

from __future__ import annotations

from math import gcd

from . import laurent as ls
from .coeff_field import FieldCtx
from .errors import ZeroComponent

INF_LABEL = "∞"


class Point:
    """Opaque ordered point label; the infinity label sorts last."""

    __slots__ = ("label",)

    def __init__(self, label):
        self.label = str(label)

    @property
    def sort_key(self):
        return (1, "") if self.label == INF_LABEL else (0, self.label)

    def __eq__(self, other):
        return isinstance(other, Point) and self.label == other.label

    def __hash__(self):
        return hash(self.label)

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    def __le__(self, other):
        return self.sort_key <= other.sort_key

    def __repr__(self):
        return f"Point({self.label!r})"


INFINITY = Point(INF_LABEL)


class Adele:
    """Finite exception map plus a default component of valuation >= 0.

    Used as a parameter vector: the default must be nonzero, exceptions
    may be zero only when ``allow_zero`` is set.
    """

    __slots__ = ("exceptions", "default")

    def __init__(self, exceptions, default: ls.LaurentSeries, allow_zero=False):
        if default.is_zero or default.val < 0:
            raise ValueError("adele default must be nonzero with valuation >= 0")
        pruned = {}
        for pt, s in exceptions.items():
            if s.is_zero and not allow_zero:
                raise ZeroComponent(f"zero component at {pt.label}")
            if not s.is_zero and s.val == default.val and ls.matches(s, default):
                continue
            pruned[pt] = s
        self.exceptions = pruned
        self.default = default

    @property
    def ctx(self) -> FieldCtx:
        return self.default.ctx

    def component(self, pt: Point) -> ls.LaurentSeries:
        return self.exceptions.get(pt, self.default)

    def support(self) -> list[Point]:
        return sorted(self.exceptions)

    def __repr__(self):
        body = ", ".join(
            f"{pt.label}: {ls.to_text(s)}" for pt, s in sorted(self.exceptions.items())
        )
        return f"{type(self).__name__}({{{body}}}, default={ls.to_text(self.default)})"


class Idele(Adele):
    """Invertible adele: all components nonzero, default a unit."""

    def __init__(self, exceptions, default: ls.LaurentSeries):
        if default.is_zero or default.val != 0:
            raise ValueError("idele default must be a unit (valuation 0)")
        super().__init__(exceptions, default, allow_zero=False)


def unit_idele(ctx: FieldCtx, prec: int = ls.DEFAULT_PREC) -> Idele:
    return Idele({}, ls.one(ctx, prec))


class ValuationVector:
    """Finite-support vector in the direct sum of Z/(p) over points."""

    __slots__ = ("p", "support")

    def __init__(self, p: int, support: dict):
        self.p = p
        self.support = {pt: v % p for pt, v in support.items() if v % p != 0}

    def __eq__(self, other):
        return (
            isinstance(other, ValuationVector)
            and self.p == other.p
            and self.support == other.support
        )

    def __hash__(self):
        return hash((self.p, tuple(sorted((pt.label, v) for pt, v in self.support.items()))))

    def __repr__(self):
        body = ", ".join(f"{pt.label}: {v}" for pt, v in sorted(self.support.items()))
        return f"ValuationVector(p={self.p}, {{{body}}})"

    @property
    def is_trivial(self) -> bool:
        return not self.support

    def add(self, other: "ValuationVector") -> "ValuationVector":
        assert self.p == other.p
        merged = dict(self.support)
        for pt, v in other.support.items():
            merged[pt] = merged.get(pt, 0) + v
        return ValuationVector(self.p, merged)

    def neg(self) -> "ValuationVector":
        return ValuationVector(self.p, {pt: -v for pt, v in self.support.items()})

    def scale(self, b: int) -> "ValuationVector":
        return ValuationVector(self.p, {pt: b * v for pt, v in self.support.items()})

    def points(self) -> list[Point]:
        return sorted(self.support)

    def to_json(self) -> dict:
        return {pt.label: v for pt, v in sorted(self.support.items())}

    @classmethod
    def from_json(cls, p: int, data: dict) -> "ValuationVector":
        return cls(p, {Point(label): v for label, v in data.items()})


class RamProfile:
    """Ramification indices e_x > 1 at the finitely many ramified points."""

    __slots__ = ("n", "entries")

    def __init__(self, n: int, entries: dict):
        for pt, e in entries.items():
            if e <= 1 or n % e != 0:
                raise ValueError(f"bad ramification index {e} at {pt.label}")
        self.n = n
        self.entries = dict(entries)

    def __eq__(self, other):
        return (
            isinstance(other, RamProfile)
            and self.n == other.n
            and self.entries == other.entries
        )

    def __repr__(self):
        body = ", ".join(f"{pt.label}: {e}" for pt, e in sorted(self.entries.items()))
        return f"RamProfile(n={self.n}, {{{body}}})"

    def locus(self) -> list[Point]:
        return sorted(self.entries)


# ----------------------------------------------------------------------
# operations


def valuation_vector(t: Idele, p: int) -> ValuationVector:
    return ValuationVector(
        p, {pt: s.valuation() for pt, s in t.exceptions.items()}
    )


def ram_locus(t: Idele, p: int) -> list[Point]:
    return valuation_vector(t, p).points()


def ram_profile(t: Adele, n: int) -> RamProfile:
    """e_x = n / gcd(n, v_x(t_x)) at every point where that exceeds 1."""
    if any(s.is_zero for s in t.exceptions.values()):
        raise ZeroComponent("ramification profile needs nonzero components")
    if n // gcd(n, t.default.valuation()) != 1:
        raise ValueError("default component would ramify at infinitely many points")
    entries = {}
    for pt, s in t.exceptions.items():
        e = n // gcd(n, s.valuation())
        if e > 1:
            entries[pt] = e
    return RamProfile(n, entries)


def idele_mul(t1: Idele, t2: Idele) -> Idele:
    default = ls.mul(t1.default, t2.default)
    exceptions = {}
    for pt in set(t1.exceptions) | set(t2.exceptions):
        exceptions[pt] = ls.mul(t1.component(pt), t2.component(pt))
    return Idele(exceptions, default)


def idele_pow(t: Idele, k: int) -> Idele:
    return Idele(
        {pt: ls.power(s, k) for pt, s in t.exceptions.items()},
        ls.power(t.default, k),
    )


def idele_inv(t: Idele) -> Idele:
    return idele_pow(t, -1)


def is_pth_power(t: Idele, p: int) -> bool:
    """Kernel test: the valuation vector vanishes."""
    return valuation_vector(t, p).is_trivial


def pth_power_witness(t: Idele, p: int) -> Idele:
    """A componentwise p-th root (z-power division plus Hensel lifting);
    only meaningful when is_pth_power(t, p) holds."""
    return Idele(
        {pt: ls.pth_root_series(s, p) for pt, s in t.exceptions.items()},
        ls.hensel_pth_root(t.default, p),
    )


def idele_eq(t1: Idele, t2: Idele) -> bool:
    if not ls.matches(t1.default, t2.default):
        return False
    if set(t1.exceptions) != set(t2.exceptions):
        return False
    return all(ls.matches(s, t2.exceptions[pt]) for pt, s in t1.exceptions.items())


# ----------------------------------------------------------------------
# JSON forms


def idele_to_json(t: Idele, p: int | None = None) -> dict:
    data = {
        "default": ls.to_text(t.default),
        "points": {pt.label: ls.to_text(s) for pt, s in sorted(t.exceptions.items())},
    }
    if p is not None:
        data["p"] = p
    return data


def idele_from_json(ctx: FieldCtx, data: dict, prec: int = ls.DEFAULT_PREC) -> Idele:
    default = ls.from_text(ctx, data.get("default", "1"), prec)
    exceptions = {
        Point(label): ls.from_text(ctx, text, prec)
        for label, text in data.get("points", {}).items()
    }
    return Idele(exceptions, default)
