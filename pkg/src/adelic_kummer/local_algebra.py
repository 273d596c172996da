"""Structure of the local algebras K_x[T]/(T^n - t_x).

For t_x of valuation v, put m = gcd(n, v) and e = n/m.  The algebra
splits into m copies of the degree-e cyclic extension obtained by
adjoining an e-th root of a chosen m-th root tau of t_x; for prime rank
this means either a split algebra of p copies of K_x (e = 1) or a field
(e = p).  The degree-p field is never materialized as a series ring:
its elements are tracked as pairs (T-exponent, K_x-coefficient) with
T^p rewritten to t_x, which is exact and suffices for the pairing and
eigenvector computations.

Coordinates in the split case are ordered by evaluation at
(tau, xi tau, ..., xi^(m-1) tau); changing tau or xi permutes them, so
only permutation-invariant statements are guaranteed about the ordering.
Local automorphisms act on T-polynomials by T -> zeta^a T at ramified
points and on coordinate vectors by position permutation at split points.
"""

from __future__ import annotations

import itertools
from math import gcd

from . import laurent as ls
from .coeff_field import FieldCtx, FieldElem
from .errors import (
    IncompatibleStructure,
    NonInvertible,
    UnramifiedPoint,
    ZeroParameter,
)

UNRAMIFIED = "unramified"
TOTALLY_RAMIFIED = "totally_ramified"
MIXED = "mixed"


class LocalStructure:
    """Splitting data of K_x[T]/(T^n - t_x): m copies of a degree-e extension."""

    __slots__ = ("n", "m", "e", "kind", "tau", "xi", "t_x")

    def __init__(self, n, m, e, kind, tau, xi, t_x):
        self.n = n
        self.m = m
        self.e = e
        self.kind = kind
        self.tau = tau  # chosen m-th root of t_x
        self.xi = xi  # primitive m-th root of unity
        self.t_x = t_x

    def evaluate(self, poly):
        """Split-case coordinates of a T-polynomial: (P(xi^i tau))_i.

        ``poly`` lists n series coefficients of 1, T, ..., T^(n-1); only
        valid when e = 1.
        """
        if self.e != 1:
            raise IncompatibleStructure("evaluation map needs the split case e = 1")
        ctx = self.t_x.ctx
        coords = []
        point = self.tau
        for i in range(self.n):
            acc = ls.zero(ctx)
            # Horner from the top coefficient
            for c in reversed(poly):
                acc = ls.mul(acc, point)
                if not c.is_zero:
                    acc = ls.add(acc, c)
            coords.append(acc)
            point = ls.scale(point, self.xi)
        return tuple(coords)


def local_structure(t_x: ls.LaurentSeries, n: int, ctx: FieldCtx) -> LocalStructure:
    if t_x.is_zero:
        raise ZeroParameter("local parameter must be nonzero")
    v = t_x.valuation()
    m = gcd(n, v)
    e = n // m
    kind = UNRAMIFIED if e == 1 else (TOTALLY_RAMIFIED if e == n else MIXED)
    tau = ls.nth_root_series(t_x, m)
    xi = ctx.ensure_root_of_unity(m)
    return LocalStructure(n, m, e, kind, tau, xi, t_x)


# ----------------------------------------------------------------------
# local automorphisms


def perm_order(sigma) -> int:
    """Order of a permutation in one-line form (1-based images)."""
    n = len(sigma)
    seen = [False] * n
    order = 1
    for start in range(n):
        if seen[start]:
            continue
        length, j = 0, start
        while not seen[j]:
            seen[j] = True
            j = sigma[j] - 1
            length += 1
        order = order * length // gcd(order, length)
    return order


def is_p_cycle(sigma) -> bool:
    return perm_order(sigma) == len(sigma)


def perm_compose(s_outer, s_inner):
    """Permutation of ``apply s_inner then s_outer`` on coordinate vectors.

    With the action (g v)_j = v_{sigma_g(j)}, applying h then g reads the
    index through sigma_g first: sigma_{g.h}(j) = sigma_h(sigma_g(j)).
    """
    return tuple(s_inner[s_outer[j] - 1] for j in range(len(s_outer)))


def perm_inverse(sigma):
    inv = [0] * len(sigma)
    for j, img in enumerate(sigma):
        inv[img - 1] = j + 1
    return tuple(inv)


def perm_power(sigma, k: int):
    n = len(sigma)
    if k < 0:
        return perm_power(perm_inverse(sigma), -k)
    result = tuple(range(1, n + 1))
    base = tuple(sigma)
    while k:
        if k & 1:
            result = perm_compose(result, base)
        base = perm_compose(base, base)
        k >>= 1
    return result


def identity_perm(p: int):
    return tuple(range(1, p + 1))


class LocalAutomorphism:
    """Either T -> zeta^a T on the ramified field, or a coordinate
    permutation of the split algebra (one-line form, 1-based)."""

    __slots__ = ("kind", "a", "sigma")

    def __init__(self, kind, a=None, sigma=None):
        if kind == "ram":
            self.kind = "ram"
            self.a = a
            self.sigma = None
        elif kind == "unram":
            if sorted(sigma) != list(range(1, len(sigma) + 1)):
                raise ValueError(f"not a permutation: {sigma}")
            self.kind = "unram"
            self.a = None
            self.sigma = tuple(sigma)
        else:
            raise ValueError(f"unknown automorphism kind {kind!r}")

    @classmethod
    def ram(cls, a: int, p: int) -> "LocalAutomorphism":
        return cls("ram", a=a % p)

    @classmethod
    def unram(cls, sigma) -> "LocalAutomorphism":
        return cls("unram", sigma=tuple(sigma))

    def __eq__(self, other):
        return (
            isinstance(other, LocalAutomorphism)
            and self.kind == other.kind
            and self.a == other.a
            and self.sigma == other.sigma
        )

    def __hash__(self):
        return hash((self.kind, self.a, self.sigma))

    def __repr__(self):
        if self.kind == "ram":
            return f"LocalAutomorphism.ram(a={self.a})"
        return f"LocalAutomorphism.unram({list(self.sigma)})"

    def order(self, p: int) -> int:
        if self.kind == "ram":
            return 1 if self.a == 0 else p
        return perm_order(self.sigma)

    def compose(self, other: "LocalAutomorphism", p: int) -> "LocalAutomorphism":
        """self after other (apply ``other`` first)."""
        if self.kind != other.kind:
            raise ValueError("cannot compose automorphisms of different kinds")
        if self.kind == "ram":
            return LocalAutomorphism.ram(self.a + other.a, p)
        return LocalAutomorphism.unram(perm_compose(self.sigma, other.sigma))

    def inverse(self, p: int) -> "LocalAutomorphism":
        if self.kind == "ram":
            return LocalAutomorphism.ram(-self.a, p)
        return LocalAutomorphism.unram(perm_inverse(self.sigma))

    def power(self, k: int, p: int) -> "LocalAutomorphism":
        if self.kind == "ram":
            return LocalAutomorphism.ram(self.a * k, p)
        return LocalAutomorphism.unram(perm_power(self.sigma, k))

    def apply_tpoly(self, coeffs, ctx: FieldCtx):
        """Action on T-polynomial coefficients at a ramified point."""
        assert self.kind == "ram"
        zeta = ctx.ensure_zeta()
        out = []
        for j, c in enumerate(coeffs):
            if c.is_zero:
                out.append(c)
            else:
                out.append(ls.scale(c, ctx.pow(zeta, self.a * j)))
        return tuple(out)

    def apply_coords(self, coords):
        """Action on split coordinates: (g v)_j = v_{sigma(j)}."""
        assert self.kind == "unram"
        return tuple(coords[self.sigma[j] - 1] for j in range(len(self.sigma)))

    def to_json(self) -> dict:
        if self.kind == "ram":
            return {"kind": "ram", "a": self.a}
        return {"kind": "unram", "sigma": list(self.sigma)}

    @classmethod
    def from_json(cls, data: dict, p: int) -> "LocalAutomorphism":
        if data["kind"] == "ram":
            return cls.ram(data["a"], p)
        return cls.unram(data["sigma"])


# ----------------------------------------------------------------------
# explicit local isomorphisms


class LocalIsomorphism:
    """Map descriptor T -> factor * T^c between two rank-p local algebras.

    ``integral`` records whether the map preserves the integral models
    (equal valuations, factor a unit).
    """

    __slots__ = ("c", "factor", "integral")

    def __init__(self, c, factor, integral):
        self.c = c
        self.factor = factor
        self.integral = integral

    def image_of_t(self, t2x: ls.LaurentSeries, p: int) -> ls.LaurentSeries:
        """(factor * T)^p ... evaluated: factor^p * t2^c, the image of T^p."""
        return ls.mul(ls.power(self.factor, p), ls.power(t2x, self.c))


def local_isom(
    t1x: ls.LaurentSeries, t2x: ls.LaurentSeries, p: int, ctx: FieldCtx
) -> LocalIsomorphism:
    """An explicit K_x-algebra isomorphism from T^p = t1 to T^p = t2.

    Equal valuations give the integral-model-preserving T -> tau T with
    tau^p = t1/t2 by Hensel lifting; equal ramification indices give a
    structural T -> factor * T^c.  Raises IncompatibleStructure when the
    indices differ.
    """
    if t1x.is_zero or t2x.is_zero:
        raise ZeroParameter("local parameters must be nonzero")
    v1, v2 = t1x.valuation(), t2x.valuation()
    e1 = 1 if v1 % p == 0 else p
    e2 = 1 if v2 % p == 0 else p
    if e1 != e2:
        raise IncompatibleStructure(f"ramification indices differ: {e1} != {e2}")
    if (v1 - v2) % p == 0:
        c = 1
        quotient = ls.divide(t1x, t2x)
    else:
        c = (v1 * pow(v2, -1, p)) % p
        quotient = ls.divide(t1x, ls.power(t2x, c))
    factor = ls.pth_root_series(quotient, p)
    phi = LocalIsomorphism(c, factor, integral=(v1 == v2))
    assert ls.matches(phi.image_of_t(t2x, p), ls.truncate(t1x, phi.factor.prec))
    return phi


# ----------------------------------------------------------------------
# the local Kummer pairing


def kummer_pair(a: int, lam_val: int, t_val: int, ctx: FieldCtx) -> FieldElem:
    """Closed form of the pairing of T -> zeta^a T against a class of
    valuation lam_val: the class equals t_x^c with c t_val = lam_val,
    and pairing against t_x itself gives zeta^a."""
    p = ctx.p
    if t_val % p == 0:
        raise UnramifiedPoint("pairing needs a ramified point: p divides v(t)")
    zeta = ctx.ensure_zeta()
    c = a * lam_val * pow(t_val, -1, p)
    return ctx.pow(zeta, c % p)


def oracle_pair(
    a: int, lam: ls.LaurentSeries, t_x: ls.LaurentSeries, ctx: FieldCtx
) -> FieldElem:
    """Brute-force pairing: adjoin the p-th root of lam explicitly and
    divide out the automorphism image.

    Writes lam = t_x^c * w^p exactly (root extraction may extend the
    tower), so lam^(1/p) = T^c w, applies T -> zeta^a T, and returns the
    quotient, which the arithmetic forces to be a constant in mu_p.
    """
    p = ctx.p
    if t_x.is_zero or lam.is_zero:
        raise ZeroParameter("pairing arguments must be nonzero")
    t_val = t_x.valuation()
    if t_val % p == 0:
        raise UnramifiedPoint("pairing needs a ramified point: p divides v(t)")
    c = (lam.valuation() * pow(t_val, -1, p)) % p
    mu = ls.divide(lam, ls.power(t_x, c)) if c else lam
    assert mu.valuation() % p == 0
    w = ls.pth_root_series(mu, p)
    assert ls.matches(ls.power(w, p), mu)
    zeta = ctx.ensure_zeta()
    g_image = ls.scale(w, ctx.pow(zeta, (a * c) % p))
    quotient = ls.mul(g_image, ls.invert(w))
    assert quotient.valuation() == 0
    assert all(ctx.is_zero(cf) for cf in quotient.coeffs[1:])
    return ctx.project(quotient.coeffs[0])


# ----------------------------------------------------------------------
# characteristic polynomials of local eigenvectors


class RamEigenvector:
    """unit * T^b at a ramified point."""

    __slots__ = ("b", "unit")

    def __init__(self, b: int, unit: ls.LaurentSeries):
        self.b = b
        self.unit = unit


class SplitEigenvector:
    """Coordinate vector at a split point."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        self.coords = tuple(coords)


def _pol_mul(ctx, f, g):
    out = [ls.zero(ctx)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a.is_zero:
            continue
        for j, b in enumerate(g):
            if b.is_zero:
                continue
            out[i + j] = ls.add(out[i + j], ls.mul(a, b))
    return out


def _pol_add(ctx, f, g):
    n = max(len(f), len(g))
    z = ls.zero(ctx)
    return [
        ls.add(f[i] if i < len(f) else z, g[i] if i < len(g) else z) for i in range(n)
    ]


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length, j = 0, start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def char_poly_primitive(alpha, t_x: ls.LaurentSeries, p: int, ctx: FieldCtx):
    """Characteristic polynomial of multiplication by a local eigenvector,
    as the Leibniz determinant of T*I - M over the p-dimensional algebra.

    Returns p+1 series coefficients, constant term first.
    """
    zero_s = ls.zero(ctx)
    if isinstance(alpha, RamEigenvector):
        if alpha.unit.is_zero:
            raise NonInvertible("eigenvector unit coefficient is zero")
        m = [[zero_s] * p for _ in range(p)]
        for j in range(p):
            k = alpha.b + j
            if k < p:
                m[k % p][j] = alpha.unit
            else:
                m[k % p][j] = ls.mul(alpha.unit, t_x)
    elif isinstance(alpha, SplitEigenvector):
        if len(alpha.coords) != p:
            raise ValueError("split eigenvector needs p coordinates")
        if any(c.is_zero for c in alpha.coords):
            raise NonInvertible("split eigenvector has a zero coordinate")
        m = [[zero_s] * p for _ in range(p)]
        for j in range(p):
            m[j][j] = alpha.coords[j]
    else:
        raise TypeError(f"unsupported eigenvector data {type(alpha).__name__}")

    # entries of T*I - M as linear polynomials in T
    prec = min(
        [c.prec for row in m for c in row if not c.is_zero] + [t_x.prec]
    )
    one_s = ls.one(ctx, prec)
    entry = [
        [[ls.neg(m[i][j])] + ([one_s] if i == j else []) for j in range(p)]
        for i in range(p)
    ]
    det = [zero_s]
    for perm in itertools.permutations(range(p)):
        term = [one_s]
        for i in range(p):
            term = _pol_mul(ctx, term, entry[i][perm[i]])
        if _perm_sign(perm) < 0:
            term = [ls.neg(c) for c in term]
        det = _pol_add(ctx, det, term)
    return det


def eigenvector_pth_power(alpha, t_x: ls.LaurentSeries, p: int, ctx: FieldCtx):
    """alpha^p as an element of the base: unit^p t^b, or the split diagonal."""
    if isinstance(alpha, RamEigenvector):
        return ls.mul(ls.power(alpha.unit, p), ls.power(t_x, alpha.b))
    first = ls.power(alpha.coords[0], p)
    for c in alpha.coords[1:]:
        assert ls.matches(ls.power(c, p), ls.truncate(first, min(first.prec, c.prec)))
    return first
