"""Function-field layer for the projective line.

Rational functions arrive in factored form, constant * prod (x - r_i)^v_i;
factorization over the tower is out of scope.  Local uniformizers are
fixed as z = x - r at finite points and z = 1/x at infinity.  Germ ideles
carry true series expansions at the divisor support; at other points the
stored component is the designated unit 1, with the exact unit germ
available on demand from ``germ``.

The superelliptic classifier reduces a degree-p cover y^p = f(x) to the
mod-p divisor of f, cross-checked against the full classification pipeline
over the germ idele.
"""

from __future__ import annotations

import warnings
from math import gcd

from . import adeles, global_galois as gg, harrison as hr, laurent as ls
from .adeles import Idele, INFINITY, Point
from .coeff_field import FieldCtx, FieldElem, elem_from_text, elem_to_text
from .errors import NotAdmissible, PthPower


class RationalFunction:
    """constant * prod (x - root)^exp with distinct roots, nonzero exps."""

    __slots__ = ("ctx", "constant", "factors")

    def __init__(self, ctx: FieldCtx, constant: FieldElem, factors: dict):
        if ctx.is_zero(constant):
            raise ValueError("constant must be nonzero")
        self.ctx = ctx
        self.constant = constant
        normalized = {}
        for root, exp in factors.items():
            if exp == 0:
                raise ValueError("factor exponents must be nonzero")
            key = ctx.project(root)
            if key in normalized:
                raise ValueError(f"repeated root {key!r}")
            normalized[key] = exp
        self.factors = normalized

    def degree(self) -> int:
        return sum(self.factors.values())

    def to_json(self) -> dict:
        return {
            "constant": elem_to_text(self.constant),
            "factors": [
                {"root": elem_to_text(r), "exp": e}
                for r, e in sorted(self.factors.items(), key=lambda kv: kv[0].coeffs)
            ],
        }

    @classmethod
    def from_json(cls, ctx: FieldCtx, data: dict) -> "RationalFunction":
        constant = elem_from_text(data["constant"])
        factors = {elem_from_text(f["root"]): f["exp"] for f in data["factors"]}
        return cls(ctx, constant, factors)


def point_for_root(ctx: FieldCtx, root: FieldElem) -> Point:
    root = ctx.project(root)
    if root.level == 0:
        return Point(str(root.coeffs[0]))
    return Point(elem_to_text(root))


def divisor(f: RationalFunction) -> dict:
    """Exponent at each root and -deg at infinity; entries sum to zero."""
    ctx = f.ctx
    div = {point_for_root(ctx, r): e for r, e in f.factors.items()}
    deg = f.degree()
    if deg:
        div[INFINITY] = -deg
    return div


def germ(f: RationalFunction, at, prec: int = ls.DEFAULT_PREC) -> ls.LaurentSeries:
    """Series expansion of f in the local uniformizer at a root, at
    infinity, or at any other finite point given by a field element."""
    ctx = f.ctx
    out = ls.constant(ctx, f.constant, prec)
    if at is INFINITY or (isinstance(at, Point) and at == INFINITY):
        # z = 1/x: (x - r) = z^-1 (1 - r z)
        out = ls.shift(out, -f.degree())
        for root, exp in f.factors.items():
            lin = ls.series(ctx, 0, [ctx.one(), ctx.neg(root)], prec=prec)
            out = ls.mul(out, ls.power(lin, exp))
        return out
    center = ctx.project(at)
    for root, exp in f.factors.items():
        offset = ctx.sub(center, root)
        if ctx.is_zero(offset):
            # z = x - root: the factor contributes z^exp exactly
            out = ls.shift(out, exp)
        else:
            lin = ls.series(ctx, 0, [offset, ctx.one()], prec=prec)
            out = ls.mul(out, ls.power(lin, exp))
    return out


def germ_idele(f: RationalFunction, prec: int = ls.DEFAULT_PREC) -> Idele:
    """True germs at the divisor support, the designated unit 1 elsewhere
    (exact unit germs at other points come from ``germ`` on demand)."""
    exceptions = {}
    for root in f.factors:
        exceptions[point_for_root(f.ctx, root)] = germ(f, root, prec)
    if f.degree():
        exceptions[INFINITY] = germ(f, INFINITY, prec)
    return Idele(exceptions, ls.one(f.ctx, prec))


class SuperellipticClassification:
    __slots__ = ("vec", "ram", "cls", "admissible", "warnings")

    def __init__(self, vec, ram, cls, admissible, warns):
        self.vec = vec
        self.ram = ram
        self.cls = cls
        self.admissible = admissible
        self.warnings = warns


def classify_superelliptic(
    f: RationalFunction, p: int, prec: int = ls.DEFAULT_PREC, strict: bool = True
) -> SuperellipticClassification:
    """Invariants of the degree-p cover y^p = f(x).

    Admissibility: every exponent in (0, p), exponent sum divisible by p
    (infinity unramified), gcd of exponents 1 (else the cover is reducible,
    reported as a warning).  The vector is the mod-p divisor, cross-checked
    against the classification of the germ idele under the standard action.
    """
    ctx = f.ctx
    if p != ctx.p:
        raise ValueError(f"cover degree {p} does not match the context rank {ctx.p}")
    exps = list(f.factors.values())
    if all(e % p == 0 for e in exps):
        raise PthPower("f is a p-th power; the cover splits completely")
    warns = []
    admissible = True
    bad = [e for e in exps if not 0 < e < p]
    if bad:
        admissible = False
        if strict:
            raise NotAdmissible(f"exponents outside (0, {p}): {sorted(bad)}")
    if f.degree() % p != 0:
        admissible = False
        if strict:
            raise NotAdmissible(
                f"exponent sum {f.degree()} is not divisible by {p}; infinity ramifies"
            )
    if exps:
        g = exps[0]
        for e in exps[1:]:
            g = gcd(g, e)
        if g != 1:
            warns.append(f"gcd of exponents is {g}: the cover is reducible")
            warnings.warn(warns[-1])
    direct = adeles.ValuationVector(
        p, {pt: v for pt, v in divisor(f).items()}
    )
    t = germ_idele(f, prec)
    G = gg.standard_kummer_subgroup(t, p)
    pipeline = hr.classify(t, G, gg.Character(1, p))
    assert pipeline.vec == direct, "divisor route and germ route disagree"
    return SuperellipticClassification(
        vec=direct,
        ram=direct.points(),
        cls=hr.valuation_class(pipeline),
        admissible=admissible,
        warns=warns,
    )
