"""Arithmetic in a dynamically extending tower of finite fields.

The tower starts at the prime field F_ell and grows on demand: asking for
a primitive p-th root of unity, or for a p-th root of an element that is
not a p-th power anywhere in the current tower, appends one extension
step.  Elements remember the tower level they were created at; levels
embed upward, so values created before an extension stay valid.

Representation.  Level 0 elements are residues mod ell.  A step of degree
d over level i-1 turns level-i elements into polynomials of degree < d in
the step generator, with level-(i-1) coefficients; internally this is a
nested tuple, externally a FieldElem exposes the flat coordinate vector
over F_ell (tensor-product basis, lowest index first), whose length is
the absolute degree of the level.

Canonical choices.  Roots of unity and p-th roots are picked as the
lexicographically smallest candidate (on flat coordinates) at the minimal
sufficient level, which makes every construction reproducible.

Concurrency: a FieldCtx is append-only.  Tower extension must be
serialized by the caller (single writer); concurrent readers are safe on
a snapshot.  FieldElem values are immutable.
"""

from __future__ import annotations

import itertools
import random
from math import gcd

from .errors import NotARootOfUnity, ZeroInput


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    q = 2
    while q * q <= n:
        if n % q == 0:
            return False
        q += 1
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n, ascending."""
    out = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


def multiplicative_order(q: int, m: int) -> int:
    if gcd(q, m) != 1:
        raise ValueError(f"gcd({q}, {m}) != 1, no multiplicative order")
    k, acc = 1, q % m
    while acc != 1:
        acc = (acc * q) % m
        k += 1
    return k


class FieldElem:
    """Element of the tower at a fixed level.

    ``coeffs`` is the flat F_ell coordinate vector, lowest basis index
    first; its length equals the absolute degree of ``level``.
    """

    __slots__ = ("level", "coeffs")

    def __init__(self, level: int, coeffs):
        self.level = level
        self.coeffs = tuple(coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, FieldElem)
            and self.level == other.level
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.level, self.coeffs))

    def __repr__(self):
        return elem_to_text(self)


def elem_to_text(a: FieldElem) -> str:
    return "L%d:[%s]" % (a.level, ",".join(str(c) for c in a.coeffs))


def elem_from_text(text: str) -> FieldElem:
    text = text.strip()
    if not text.startswith("L") or ":[" not in text or not text.endswith("]"):
        raise ValueError(f"bad field element literal: {text!r}")
    head, body = text[1:-1].split(":[", 1)
    coeffs = tuple(int(c) for c in body.split(",")) if body else ()
    return FieldElem(int(head), coeffs)


class _TowerStep:
    """One extension step: a monic irreducible polynomial over the level below."""

    __slots__ = ("degree", "poly", "abs_degree")

    def __init__(self, degree, poly, abs_degree):
        self.degree = degree
        self.poly = poly  # tuple of degree+1 nested coefficients, monic
        self.abs_degree = abs_degree  # absolute degree of the new level


class FieldCtx:
    """A growing tower F_ell < F_ell^d1 < ... with distinguished mu_p and zeta."""

    def __init__(self, ell: int, p: int):
        if not is_prime(ell):
            raise ValueError(f"ell = {ell} is not prime")
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if ell == p:
            raise ValueError("the rank p must differ from the characteristic ell")
        self.ell = ell
        self.p = p
        self._steps: list[_TowerStep] = []
        self._unity_cache: dict[int, FieldElem] = {}
        self._sylow_cache: dict[tuple[int, int], tuple] = {}
        self._l0 = tuple(FieldElem(0, (x,)) for x in range(ell))
        self.zeta: FieldElem | None = None

    # ------------------------------------------------------------------
    # tower geometry

    @property
    def levels(self) -> int:
        """Number of levels currently in the tower (level indices 0..levels-1)."""
        return len(self._steps) + 1

    def abs_degree(self, level: int) -> int:
        return 1 if level == 0 else self._steps[level - 1].abs_degree

    def level_size(self, level: int) -> int:
        return self.ell ** self.abs_degree(level)

    def tower_polys(self) -> list[tuple[FieldElem, ...]]:
        """Step polynomials as FieldElem coefficient tuples (low degree first)."""
        out = []
        for i, step in enumerate(self._steps):
            out.append(
                tuple(FieldElem(i, self._flatten(i, c)) for c in step.poly)
            )
        return out

    # ------------------------------------------------------------------
    # nested representation plumbing

    def _nzero(self, level):
        if level == 0:
            return 0
        d = self._steps[level - 1].degree
        below = self._nzero(level - 1)
        return tuple(below for _ in range(d))

    def _none(self, level):
        if level == 0:
            return 1
        d = self._steps[level - 1].degree
        return (self._none(level - 1),) + tuple(
            self._nzero(level - 1) for _ in range(d - 1)
        )

    def _nis_zero(self, level, a):
        if level == 0:
            return a == 0
        return all(self._nis_zero(level - 1, c) for c in a)

    def _nadd(self, level, a, b):
        if level == 0:
            return (a + b) % self.ell
        return tuple(self._nadd(level - 1, x, y) for x, y in zip(a, b))

    def _nneg(self, level, a):
        if level == 0:
            return (-a) % self.ell
        return tuple(self._nneg(level - 1, x) for x in a)

    def _nmul(self, level, a, b):
        if level == 0:
            return a * b % self.ell
        d = self._steps[level - 1].degree
        below = level - 1
        zero = self._nzero(below)
        prod = [zero] * (2 * d - 1)
        for i, x in enumerate(a):
            if self._nis_zero(below, x):
                continue
            for j, y in enumerate(b):
                prod[i + j] = self._nadd(below, prod[i + j], self._nmul(below, x, y))
        # reduce modulo the monic step polynomial
        poly = self._steps[level - 1].poly
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if self._nis_zero(below, c):
                continue
            for j in range(d):
                prod[k - d + j] = self._nadd(
                    below, prod[k - d + j], self._nneg(below, self._nmul(below, c, poly[j]))
                )
            prod[k] = zero
        return tuple(prod[:d])

    def _npow(self, level, a, e: int):
        if level == 0:
            return pow(a, e, self.ell)
        if e < 0:
            return self._npow(level, self._ninv(level, a), -e)
        result = self._none(level)
        base = a
        while e:
            if e & 1:
                result = self._nmul(level, result, base)
            base = self._nmul(level, base, base)
            e >>= 1
        return result

    def _ninv(self, level, a):
        if self._nis_zero(level, a):
            raise ZeroDivisionError("inverse of zero in the coefficient tower")
        if level == 0:
            return pow(a, self.ell - 2, self.ell)
        below = level - 1
        # extended Euclid in (level-1)[X] between a (deg < d) and the step poly
        f = list(self._steps[level - 1].poly)
        g = self._ptrim(below, list(a))
        r0, r1 = f, g
        s0, s1 = [self._nzero(below)], [self._none(below)]
        while True:
            if len(r1) == 1:
                c_inv = self._ninv(below, r1[0])
                inv = [self._nmul(below, c_inv, c) for c in s1]
                break
            q, r = self._pdivmod(below, r0, r1)
            r0, r1 = r1, self._ptrim(below, r)
            s0, s1 = s1, self._ptrim(below, self._psub(below, s0, self._pmul(below, q, s1)))
        d = self._steps[level - 1].degree
        inv = inv + [self._nzero(below)] * (d - len(inv))
        return tuple(inv[:d])

    # polynomial helpers over nested level-j coefficients ----------------

    def _ptrim(self, j, f):
        while len(f) > 1 and self._nis_zero(j, f[-1]):
            f.pop()
        return f

    def _padd(self, j, f, g):
        n = max(len(f), len(g))
        z = self._nzero(j)
        return [
            self._nadd(j, f[i] if i < len(f) else z, g[i] if i < len(g) else z)
            for i in range(n)
        ]

    def _psub(self, j, f, g):
        return self._padd(j, f, [self._nneg(j, c) for c in g])

    def _pmul(self, j, f, g):
        z = self._nzero(j)
        out = [z] * (len(f) + len(g) - 1)
        for i, x in enumerate(f):
            if self._nis_zero(j, x):
                continue
            for k, y in enumerate(g):
                out[i + k] = self._nadd(j, out[i + k], self._nmul(j, x, y))
        return out

    def _pdivmod(self, j, f, g):
        g = self._ptrim(j, list(g))
        lead_inv = self._ninv(j, g[-1])
        rem = list(f)
        z = self._nzero(j)
        if len(rem) < len(g):
            return [z], rem
        quo = [z] * (len(rem) - len(g) + 1)
        for k in range(len(rem) - len(g), -1, -1):
            c = self._nmul(j, rem[k + len(g) - 1], lead_inv)
            if self._nis_zero(j, c):
                continue
            quo[k] = c
            for i, gc in enumerate(g):
                rem[k + i] = self._nadd(j, rem[k + i], self._nneg(j, self._nmul(j, c, gc)))
        return quo, self._ptrim(j, rem)

    def _pmod(self, j, f, g):
        return self._pdivmod(j, f, g)[1]

    def _pgcd(self, j, f, g):
        a, b = self._ptrim(j, list(f)), self._ptrim(j, list(g))
        while not (len(b) == 1 and self._nis_zero(j, b[0])):
            a, b = b, self._pmod(j, a, b)
        # make monic
        if not self._nis_zero(j, a[-1]):
            inv = self._ninv(j, a[-1])
            a = [self._nmul(j, inv, c) for c in a]
        return a

    def _ppowmod(self, j, base, e: int, mod):
        result = [self._none(j)]
        b = self._pmod(j, list(base), mod)
        while e:
            if e & 1:
                result = self._pmod(j, self._pmul(j, result, b), mod)
            b = self._pmod(j, self._pmul(j, b, b), mod)
            e >>= 1
        return result

    def poly_is_irreducible(self, level: int, poly) -> bool:
        """Rabin test for a monic polynomial with level-``level`` coefficients.

        Checks X^(q^d) = X mod f together with gcd(X^(q^(d/r)) - X, f) = 1
        for every prime r dividing d.
        """
        f = self._ptrim(level, list(poly))
        d = len(f) - 1
        if d <= 0:
            return False
        if d == 1:
            return True
        q = self.level_size(level)
        x = [self._nzero(level), self._none(level)]
        xq = self._ppowmod(level, x, q**d, f)
        if self._ptrim(level, self._psub(level, xq, x)) != [self._nzero(level)]:
            return False
        for r in prime_factors(d):
            h = self._ppowmod(level, x, q ** (d // r), f)
            h = self._ptrim(level, self._psub(level, h, x))
            g = self._pgcd(level, h, f)
            if len(g) != 1:
                return False
        return True

    # ------------------------------------------------------------------
    # flat <-> nested

    def _unflatten(self, level, flat):
        if level == 0:
            return flat[0] % self.ell
        d = self._steps[level - 1].degree
        sub = self.abs_degree(level - 1)
        return tuple(
            self._unflatten(level - 1, flat[k * sub : (k + 1) * sub]) for k in range(d)
        )

    def _flatten(self, level, nested):
        if level == 0:
            return (nested,)
        out = []
        for c in nested:
            out.extend(self._flatten(level - 1, c))
        return tuple(out)

    def _nested(self, a: FieldElem):
        if len(a.coeffs) != self.abs_degree(a.level):
            raise ValueError("coefficient vector does not match its level degree")
        return self._unflatten(a.level, a.coeffs)

    def _wrap(self, level, nested) -> FieldElem:
        return FieldElem(level, self._flatten(level, nested))

    def _lift_nested(self, from_level, to_level, nested):
        for lvl in range(from_level + 1, to_level + 1):
            d = self._steps[lvl - 1].degree
            nested = (nested,) + tuple(self._nzero(lvl - 1) for _ in range(d - 1))
        return nested

    def _common(self, a: FieldElem, b: FieldElem):
        lvl = max(a.level, b.level)
        na = self._lift_nested(a.level, lvl, self._nested(a))
        nb = self._lift_nested(b.level, lvl, self._nested(b))
        return lvl, na, nb

    # ------------------------------------------------------------------
    # public element arithmetic

    def elem(self, x: int) -> FieldElem:
        return self._l0[x % self.ell]

    def zero(self) -> FieldElem:
        return self._l0[0]

    def one(self) -> FieldElem:
        return self._l0[1]

    def is_zero(self, a: FieldElem) -> bool:
        return all(c == 0 for c in a.coeffs)

    def is_one(self, a: FieldElem) -> bool:
        return self.eq(a, self.one())

    def add(self, a: FieldElem, b: FieldElem) -> FieldElem:
        if a.level == 0 and b.level == 0:
            return self._l0[(a.coeffs[0] + b.coeffs[0]) % self.ell]
        lvl, na, nb = self._common(a, b)
        return self._wrap(lvl, self._nadd(lvl, na, nb))

    def sub(self, a: FieldElem, b: FieldElem) -> FieldElem:
        return self.add(a, self.neg(b))

    def neg(self, a: FieldElem) -> FieldElem:
        if a.level == 0:
            return self._l0[-a.coeffs[0] % self.ell]
        return self._wrap(a.level, self._nneg(a.level, self._nested(a)))

    def mul(self, a: FieldElem, b: FieldElem) -> FieldElem:
        if a.level == 0 and b.level == 0:
            return self._l0[a.coeffs[0] * b.coeffs[0] % self.ell]
        lvl, na, nb = self._common(a, b)
        return self._wrap(lvl, self._nmul(lvl, na, nb))

    def inv(self, a: FieldElem) -> FieldElem:
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero in the coefficient tower")
        if a.level == 0:
            return self._l0[pow(a.coeffs[0], self.ell - 2, self.ell)]
        return self._wrap(a.level, self._ninv(a.level, self._nested(a)))

    def div(self, a: FieldElem, b: FieldElem) -> FieldElem:
        return self.mul(a, self.inv(b))

    def pow(self, a: FieldElem, e: int) -> FieldElem:
        if a.level == 0:
            return self._l0[pow(a.coeffs[0], e, self.ell)]
        return self._wrap(a.level, self._npow(a.level, self._nested(a), e))

    def eq(self, a: FieldElem, b: FieldElem) -> bool:
        if a.level == b.level:
            return a.coeffs == b.coeffs
        lvl, na, nb = self._common(a, b)
        return na == nb

    def embed(self, a: FieldElem, level: int) -> FieldElem:
        if level < a.level:
            raise ValueError("cannot embed downward; use project")
        return self._wrap(level, self._lift_nested(a.level, level, self._nested(a)))

    def project(self, a: FieldElem) -> FieldElem:
        """Equal element at the lowest level that can represent it."""
        lvl = a.level
        nested = self._nested(a)
        while lvl > 0:
            below = lvl - 1
            if all(self._nis_zero(below, c) for c in nested[1:]):
                nested = nested[0]
                lvl = below
            else:
                break
        return self._wrap(lvl, nested)

    def inv_int(self, n: int) -> FieldElem:
        """1/n in F_ell; n must be prime to ell."""
        r = n % self.ell
        if r == 0:
            raise ZeroDivisionError(f"{n} is divisible by the characteristic {self.ell}")
        return FieldElem(0, (pow(r, self.ell - 2, self.ell),))

    # ------------------------------------------------------------------
    # enumeration and canonical choices

    def elements(self, level: int):
        """All elements of a level, in lexicographic order on flat coordinates."""
        for flat in itertools.product(range(self.ell), repeat=self.abs_degree(level)):
            yield FieldElem(level, flat)

    def _smallest(self, candidates):
        best = None
        for c in candidates:
            if best is None or c.coeffs < best.coeffs:
                best = c
        return best

    def _has_order(self, level, nested, m: int) -> bool:
        if self._nis_zero(level, nested):
            return False
        if self._npow(level, nested, m) != self._none(level):
            return False
        for r in prime_factors(m):
            if self._npow(level, nested, m // r) == self._none(level):
                return False
        return True

    def _random_irreducible(self, level: int, degree: int):
        """Monic irreducible step polynomial by seeded random trial."""
        rng = random.Random(f"tower:{self.ell}:{self.p}:{level}:{degree}")
        sub = self.abs_degree(level)
        while True:
            flat_coeffs = [
                tuple(rng.randrange(self.ell) for _ in range(sub)) for _ in range(degree)
            ]
            poly = [self._unflatten(level, fc) for fc in flat_coeffs]
            poly.append(self._none(level))
            if self._nis_zero(level, poly[0]):
                continue
            if self.poly_is_irreducible(level, poly):
                return tuple(poly)

    def _append_step(self, poly_nested):
        level = self.levels - 1
        degree = len(poly_nested) - 1
        self._steps.append(
            _TowerStep(degree, tuple(poly_nested), self.abs_degree(level) * degree)
        )
        return self.levels - 1

    def ensure_root_of_unity(self, m: int) -> FieldElem:
        """A cached element of exact multiplicative order m.

        Scans existing levels from the bottom for the first whose group
        order is divisible by m, extending the tower by one step when none
        qualifies; within that level, picks the lexicographically smallest
        element of order m.
        """
        if m == 1:
            return self.one()
        if m in self._unity_cache:
            return self._unity_cache[m]
        if m % self.ell == 0:
            raise ValueError(f"no elements of order {m} in characteristic {self.ell}")
        level = None
        for i in range(self.levels):
            if (self.level_size(i) - 1) % m == 0:
                level = i
                break
        if level is None:
            top = self.levels - 1
            deg = multiplicative_order(self.level_size(top), m)
            poly = self._random_irreducible(top, deg)
            level = self._append_step(poly)
        for cand in self.elements(level):
            if self._has_order(level, self._nested(cand), m):
                self._unity_cache[m] = cand
                return cand
        raise AssertionError("order-m element must exist once m | q - 1")

    def ensure_zeta(self) -> FieldElem:
        """The distinguished primitive p-th root of unity (cached, stable)."""
        if self.zeta is None:
            self.zeta = self.ensure_root_of_unity(self.p)
        return self.zeta

    def log_zeta(self, w: FieldElem) -> int:
        """Discrete logarithm base zeta on mu_p."""
        zeta = self.ensure_zeta()
        if not self.eq(self.pow(w, self.p), self.one()):
            raise NotARootOfUnity(f"{w!r}^{self.p} != 1")
        acc = self.one()
        for c in range(self.p):
            if self.eq(acc, w):
                return c
            acc = self.mul(acc, zeta)
        raise AssertionError("mu_p enumeration cannot miss a p-th root of unity")

    # ------------------------------------------------------------------
    # root extraction

    def _any_order_r_nested(self, level: int, r: int):
        """Some element of order r at this level (r prime, r | q - 1)."""
        return self._sylow_data(level, r)[1]

    def _sylow_data(self, level: int, r: int):
        """(eta, gamma, t, s) with q-1 = r^s t, eta of order r^s, gamma of order r."""
        key = (level, r)
        if key in self._sylow_cache:
            return self._sylow_cache[key]
        q = self.level_size(level)
        t, s = q - 1, 0
        while t % r == 0:
            t //= r
            s += 1
        rng = random.Random(f"amm:{self.ell}:{self.p}:{level}:{r}")
        sub = self.abs_degree(level)
        one = self._none(level)
        while True:
            flat = tuple(rng.randrange(self.ell) for _ in range(sub))
            rho = self._unflatten(level, flat)
            if self._nis_zero(level, rho):
                continue
            if self._npow(level, rho, (q - 1) // r) != one:
                eta = self._npow(level, rho, t)
                break
        gamma = self._npow(level, eta, r ** (s - 1))  # order r
        self._sylow_cache[key] = (eta, gamma, t, s)
        return eta, gamma, t, s

    def _prime_root_in_level(self, level: int, nested, r: int):
        """An r-th root of ``nested`` at ``level``; requires r | q-1 and the
        r-th-power test to have passed.  Adleman-Manders-Miller descent."""
        q = self.level_size(level)
        eta, gamma, t, s = self._sylow_data(level, r)
        one = self._none(level)
        # Pohlig-Hellman digits of c with eta^c = a^t
        u = self._npow(level, nested, t)
        c = 0
        for j in range(s):
            w = self._nmul(level, u, self._npow(level, eta, (-c) % (q - 1)))
            w = self._npow(level, w, r ** (s - 1 - j))
            acc = one
            for digit in range(r):
                if acc == w:
                    c += digit * r**j
                    break
                acc = self._nmul(level, acc, gamma)
            else:
                raise AssertionError("Pohlig-Hellman digit search failed")
        if c % r != 0:
            raise AssertionError("element is not an r-th power despite passing the test")
        v = self._npow(level, eta, c // r)
        e1 = pow(r, -1, t) if t > 1 else 0
        mte = (e1 * r - 1) // t
        root = self._nmul(
            level, self._npow(level, nested, e1), self._npow(level, v, (-mte) % (q - 1))
        )
        assert self._npow(level, root, r) == nested
        return root, gamma

    def nth_root(self, a: FieldElem, n: int) -> FieldElem:
        """Canonical n-th root, extending the tower when necessary.

        Factors n into primes and extracts one prime root at a time; each
        prime root is the lexicographically smallest candidate at the
        minimal sufficient level.
        """
        if self.is_zero(a):
            raise ZeroInput("0 has no canonical root here")
        result = a
        for r in prime_factors(n):
            k = n
            count = 0
            while k % r == 0:
                k //= r
                count += 1
            for _ in range(count):
                result = self._prime_root(result, r)
        return result

    def pth_root(self, a: FieldElem) -> FieldElem:
        """Canonical p-th root of a nonzero element (p = ctx.p)."""
        if self.is_zero(a):
            raise ZeroInput("0 has no canonical p-th root")
        return self._prime_root(a, self.p)

    def _prime_root(self, a: FieldElem, r: int):
        if r % self.ell == 0:
            raise ValueError("root order divisible by the characteristic")
        for level in range(a.level, self.levels):
            q = self.level_size(level)
            nested = self._lift_nested(a.level, level, self._nested(a))
            if (q - 1) % r != 0:
                # x -> x^r is a bijection; the unique root is a^(r^-1 mod q-1)
                return self._wrap(level, self._npow(level, nested, pow(r, -1, q - 1)))
            if self._npow(level, nested, (q - 1) // r) == self._none(level):
                root, gamma = self._prime_root_in_level(level, nested, r)
                cands = []
                w = self._none(level)
                for _ in range(r):
                    cands.append(self._wrap(level, self._nmul(level, root, w)))
                    w = self._nmul(level, w, gamma)
                return self._smallest(cands)
        # not an r-th power anywhere in the tower: X^r - a is irreducible
        # over the top level (r prime), so one degree-r step suffices
        top = self.levels - 1
        a_top = self._lift_nested(a.level, top, self._nested(a))
        poly = [self._nneg(top, a_top)]
        poly.extend(self._nzero(top) for _ in range(r - 1))
        poly.append(self._none(top))
        new_level = self._append_step(tuple(poly))
        gen = (self._nzero(top), self._none(top)) + tuple(
            self._nzero(top) for _ in range(r - 2)
        )
        w_top = self._any_order_r_nested(top, r)
        w = self._lift_nested(top, new_level, w_top)
        cands = []
        acc = self._none(new_level)
        for _ in range(r):
            cands.append(self._wrap(new_level, self._nmul(new_level, gen, acc)))
            acc = self._nmul(new_level, acc, w)
        return self._smallest(cands)

    # ------------------------------------------------------------------
    # serialization

    def to_json(self) -> dict:
        return {
            "ell": self.ell,
            "p": self.p,
            "tower": [
                [elem_to_text(c) for c in poly] for poly in self.tower_polys()
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FieldCtx":
        ctx = cls(data["ell"], data["p"])
        for i, poly_texts in enumerate(data["tower"]):
            coeffs = [elem_from_text(t) for t in poly_texts]
            nested = [ctx._nested(c) for c in coeffs]
            if not ctx.poly_is_irreducible(i, nested):
                raise ValueError(f"tower step {i} is not irreducible")
            ctx._append_step(tuple(nested))
        return ctx
