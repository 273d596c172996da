"""Pointwise transitivity, primitive elements, tuples, conjugations."""

import random

import pytest

from adelic_kummer import adeles, global_galois as gg, laurent as ls, local_algebra as la
from adelic_kummer.adeles import Idele, Point
from adelic_kummer.coeff_field import FieldCtx
from adelic_kummer.errors import NotEquivalent, NotGalois, NotTransitive


@pytest.fixture
def ctx():
    return FieldCtx(7, 3)


def mk_idele(ctx, spec, prec=12):
    return Idele(
        {Point(lbl): ls.from_text(ctx, txt, prec) for lbl, txt in spec.items()},
        ls.one(ctx, prec),
    )


def kummer_group(t, p, a_map=None):
    """Subgroup generated by exponent a at each ramified point (default 1)."""
    p_cycle = gg.standard_p_cycle(p)
    exceptions = {}
    for pt in adeles.ram_locus(t, p):
        a = (a_map or {}).get(pt.label, 1)
        exceptions[pt] = la.LocalAutomorphism.ram(a, p)
    return gg.CyclicSubgroup(gg.GlobalAutomorphism(p, exceptions, p_cycle), p)


def test_transitivity_examples(ctx):
    t = mk_idele(ctx, {"x0": "z"})
    good = kummer_group(t, 3)
    assert gg.is_pointwise_transitive(good, t)
    # identity component at a ramified point: a valid order-3 element,
    # but not transitive there
    bad = gg.GlobalAutomorphism(
        3, {Point("x0"): la.LocalAutomorphism.ram(0, 3)}, gg.standard_p_cycle(3)
    )
    assert not gg.is_pointwise_transitive(gg.CyclicSubgroup(bad, 3), t)
    # transposition default has order 2 != 3
    trans = gg.GlobalAutomorphism(
        3, {Point("x0"): la.LocalAutomorphism.ram(1, 3)}, (2, 1, 3)
    )
    with pytest.raises(ValueError):
        gg.CyclicSubgroup(trans, 3)


def test_transitivity_cross_validated_against_orbits(ctx):
    # order-p criterion agrees with brute-force orbit transitivity
    import itertools

    for p in (2, 3):
        perms = list(itertools.permutations(range(1, p + 1)))
        for sigma in perms:
            orbit = {1}
            j = 1
            for _ in range(p):
                j = sigma[j - 1]
                orbit.add(j)
            brute_transitive = orbit == set(range(1, p + 1))
            assert la.is_p_cycle(sigma) == brute_transitive


def test_is_galois_kummer_action(ctx):
    t = mk_idele(ctx, {"x0": "z", "x1": "z^2*(1 + 1*z)"})
    G = kummer_group(t, 3)
    assert gg.is_galois(t, G)
    assert gg.is_galois(adeles.unit_idele(ctx), gg.standard_kummer_subgroup(adeles.unit_idele(ctx), 3))


def test_strong_distinctness_at_split_idempotents(ctx):
    # transitive subgroup: distinct elements differ at every idempotent;
    # a non-transitive one fails at some idempotent
    p = 3
    one = ls.one(ctx, 4)
    zero = ls.zero(ctx)
    coords = [
        ls.constant(ctx, c, 4) for c in (ctx.elem(2), ctx.elem(3), ctx.elem(5))
    ]
    sample = gg.AlgebraElement(p, {}, gg.LocalPart("split", tuple(coords)))
    cyc = la.LocalAutomorphism.unram((2, 3, 1))
    for k1 in range(3):
        for k2 in range(k1 + 1, 3):
            g1, g2 = cyc.power(k1, p), cyc.power(k2, p)
            for j in range(3):  # idempotent e_j
                v1 = g1.apply_coords(sample.default.data)[j]
                v2 = g2.apply_coords(sample.default.data)[j]
                assert not ls.matches(v1, v2)
    # subgroup generated by a transposition fixes coordinate 3
    tr = la.LocalAutomorphism.unram((2, 1, 3))
    assert ls.matches(
        tr.apply_coords(sample.default.data)[2], sample.default.data[2]
    )


def test_primitive_element_kummer_action(ctx):
    t = mk_idele(ctx, {"x0": "z"})
    G = kummer_group(t, 3)
    alpha = gg.primitive_element(t, G, gg.Character(1, 3))
    assert alpha.ram_exponents == {Point("x0"): 1}  # alpha = T
    assert adeles.idele_eq(alpha.alpha_p, t)  # alpha^p = t


def test_primitive_element_inverse_exponent(ctx):
    t = mk_idele(ctx, {"x0": "z"})
    G = kummer_group(t, 3, {"x0": 2})
    alpha = gg.primitive_element(t, G, gg.Character(1, 3))
    assert alpha.ram_exponents[Point("x0")] == 2  # 2*2 = 1 mod 3


def test_primitive_element_split_pattern(ctx):
    t = adeles.unit_idele(ctx)
    G = gg.standard_kummer_subgroup(t, 3)
    alpha = gg.primitive_element(t, G, gg.Character(1, 3))
    assert alpha.default_pattern == (0, 1, 2)  # (1, zeta, zeta^2)
    assert adeles.valuation_vector(alpha.alpha_p, 3).is_trivial
    elem = alpha.as_algebra_element(t)
    cubed = gg._pointwise_mul(gg._pointwise_mul(elem, elem, t), elem, t)
    assert cubed.matches(gg.AlgebraElement.one(3, t))


def test_primitive_element_requires_galois(ctx):
    t = mk_idele(ctx, {"x0": "z"})
    g = gg.GlobalAutomorphism(
        3,
        {
            Point("x0"): la.LocalAutomorphism.ram(0, 3),
            Point("y"): la.LocalAutomorphism.unram((2, 3, 1)),
        },
        gg.standard_p_cycle(3),
    )
    with pytest.raises(NotGalois):
        gg.primitive_element(t, gg.CyclicSubgroup(g, 3), gg.Character(1, 3))


def test_primitive_element_eigen_property_random(ctx):
    rng = random.Random(31)
    for _ in range(25):
        t, G = random_instance(ctx, rng, 3)
        s = rng.randrange(1, 3)
        alpha = gg.primitive_element(t, G, gg.Character(s, 3))
        elem = alpha.as_algebra_element(t)
        image = elem.apply(G.generator, ctx)
        assert image.matches(elem.scale(ctx.pow(ctx.ensure_zeta(), s)))
        # Ram(alpha^p) = Ram(t)
        assert adeles.ram_locus(alpha.alpha_p, 3) == adeles.ram_locus(t, 3)


def random_instance(ctx, rng, p, n_ram=None, labels=("a", "b", "c", "d", "e")):
    n_ram = rng.randrange(0, 4) if n_ram is None else n_ram
    pts = rng.sample(labels, n_ram)
    exceptions = {}
    a_map = {}
    for lbl in pts:
        v = rng.choice([v for v in range(-5, 6) if v % p != 0])
        coeffs = [rng.randrange(1, ctx.ell)] + [rng.randrange(ctx.ell) for _ in range(9)]
        exceptions[Point(lbl)] = ls.series(ctx, v, coeffs)
        a_map[lbl] = rng.randrange(1, p)
    t = Idele(exceptions, ls.one(ctx, 10))
    return t, kummer_group(t, p, a_map)


def test_ram_tuple_examples(ctx):
    t = mk_idele(ctx, {"x0": "z", "x1": "z^1*(2)"})
    G = kummer_group(t, 3, {"x0": 1, "x1": 2})
    tup = gg.ram_tuple(G, t)
    assert tup.to_json() == {"x0": 1, "x1": 2}
    t2 = mk_idele(ctx, {"x0": "z", "x1": "z^2*(1)"})
    G2 = kummer_group(t2, 3, {"x0": 1, "x1": 1})
    assert gg.ram_tuple(G2, t2).to_json() == {"x0": 1, "x1": 2}  # 2^-1 = 2 mod 3
    t3 = mk_idele(ctx, {"x0": "z"})
    assert gg.ram_tuple(kummer_group(t3, 3), t3).to_json() == {"x0": 1}


def test_ram_tuple_generator_scaling(ctx):
    rng = random.Random(8)
    for _ in range(20):
        t, G = random_instance(ctx, rng, 3, n_ram=rng.randrange(1, 4))
        tup = gg.ram_tuple(G, t)
        for k in (1, 2):
            Gk = gg.CyclicSubgroup(G.generator.power(k), 3)
            assert gg.ram_tuple(Gk, t) == tup.scale(k)


def test_ram_tuple_requires_transitive(ctx):
    t = mk_idele(ctx, {"x0": "z"})
    g = gg.GlobalAutomorphism(
        3,
        {
            Point("x0"): la.LocalAutomorphism.ram(0, 3),
            Point("y"): la.LocalAutomorphism.unram((2, 3, 1)),
        },
        gg.standard_p_cycle(3),
    )
    with pytest.raises(NotTransitive):
        gg.ram_tuple(gg.CyclicSubgroup(g, 3), t)


def test_galois_equivalent_orbits(ctx):
    t = mk_idele(ctx, {"x0": "z", "x1": "z^1*(3)"})
    G12 = kummer_group(t, 3, {"x0": 1, "x1": 2})
    G21 = kummer_group(t, 3, {"x0": 2, "x1": 1})
    G11 = kummer_group(t, 3, {"x0": 1, "x1": 1})
    assert gg.galois_equivalent(G12, G21, t)  # b = 2
    assert not gg.galois_equivalent(G11, G12, t)
    # empty ramification: always equivalent
    u = adeles.unit_idele(ctx)
    Ga = gg.standard_kummer_subgroup(u, 3)
    gb = gg.GlobalAutomorphism(3, {}, (3, 1, 2))
    assert gg.galois_equivalent(Ga, gg.CyclicSubgroup(gb, 3), u)


def test_construct_conjugation_identity(ctx):
    t = mk_idele(ctx, {"x0": "z"})
    G = kummer_group(t, 3)
    phi = gg.construct_conjugation(G, G, t, gg.Character(1, 3))
    assert phi.k == 1
    assert not phi.u.exceptions
    assert phi.default_perm == (1, 2, 3)
    sample = random_algebra_element(ctx, t, 3, random.Random(1))
    assert gg.verify_conjugation(phi, G, G, t, [sample])


def test_construct_conjugation_twisted(ctx):
    t = mk_idele(ctx, {"x0": "z", "x1": "z^1*(5)"})
    G1 = kummer_group(t, 3, {"x0": 1, "x1": 1})
    G2 = gg.CyclicSubgroup(G1.generator.power(2), 3)
    phi = gg.construct_conjugation(G1, G2, t, gg.Character(1, 3))
    assert phi.k == 2  # tau precomposes with the inverse automorphism
    samples = [random_algebra_element(ctx, t, 3, random.Random(s)) for s in range(3)]
    assert gg.verify_conjugation(phi, G1, G2, t, samples)


def test_construct_conjugation_crossed_tuples(ctx):
    t = mk_idele(ctx, {"x0": "z", "x1": "z^1*(3)"})
    G12 = kummer_group(t, 3, {"x0": 1, "x1": 2})
    G21 = kummer_group(t, 3, {"x0": 2, "x1": 1})
    phi = gg.construct_conjugation(G12, G21, t, gg.Character(1, 3))
    samples = [random_algebra_element(ctx, t, 3, random.Random(s)) for s in range(3)]
    assert gg.verify_conjugation(phi, G12, G21, t, samples)


def test_construct_conjugation_rejects_inequivalent(ctx):
    t = mk_idele(ctx, {"x0": "z", "x1": "z^1*(3)"})
    G11 = kummer_group(t, 3, {"x0": 1, "x1": 1})
    G12 = kummer_group(t, 3, {"x0": 1, "x1": 2})
    with pytest.raises(NotEquivalent):
        gg.construct_conjugation(G11, G12, t, gg.Character(1, 3))


def random_algebra_element(ctx, t, p, rng, prec=6):
    parts = {}
    for pt in adeles.ram_locus(t, p):
        data = []
        for _ in range(p):
            if rng.random() < 0.2:
                data.append(ls.zero(ctx))
            else:
                data.append(
                    ls.series(
                        ctx,
                        rng.randrange(-2, 3),
                        [rng.randrange(1, ctx.ell)]
                        + [rng.randrange(ctx.ell) for _ in range(prec - 1)],
                    )
                )
        parts[pt] = gg.LocalPart("ram", tuple(data))
    default = gg.LocalPart(
        "split",
        tuple(
            ls.constant(ctx, ctx.elem(rng.randrange(1, ctx.ell)), prec)
            for _ in range(p)
        ),
    )
    return gg.AlgebraElement(p, parts, default)


def test_eigenproject_idempotent_and_eigen(ctx):
    rng = random.Random(17)
    t = mk_idele(ctx, {"x0": "z", "x1": "z^2*(3 + 1*z)"})
    G = kummer_group(t, 3, {"x0": 1, "x1": 2})
    chi = gg.Character(1, 3)
    for _ in range(10):
        sample = random_algebra_element(ctx, t, 3, rng)
        proj = gg.eigenproject(sample, G, chi, t)
        again = gg.eigenproject(proj, G, chi, t)
        assert proj.matches(again)
        assert gg.in_eigenspace(proj, G, chi, ctx)


def test_eigenproject_fixed_point_and_orthogonality(ctx):
    t = mk_idele(ctx, {"x0": "z"})
    G = kummer_group(t, 3)
    chi = gg.Character(1, 3)
    alpha = gg.primitive_element(t, G, chi).as_algebra_element(t)
    assert gg.eigenproject(alpha, G, chi, t).matches(alpha)
    one = gg.AlgebraElement.one(3, t)
    proj = gg.eigenproject(one, G, chi, t)
    # 1 lies in the trivial eigenspace, so the nontrivial projection kills it
    assert all(s.is_zero for s in proj.default.data)
    assert all(s.is_zero for part in proj.parts.values() for s in part.data)


def test_eigenproject_split_eigenline(ctx):
    rng = random.Random(4)
    t = adeles.unit_idele(ctx)
    G = gg.standard_kummer_subgroup(t, 3)
    chi = gg.Character(2, 3)
    sample = random_algebra_element(ctx, t, 3, rng)
    proj = gg.eigenproject(sample, G, chi, t)
    assert gg.in_eigenspace(proj, G, chi, ctx)


def test_valuation_formula_at_ramified_points(ctx):
    # v_x(alpha^p) = s * (tuple entry)^-1 at ramified x, 0 elsewhere
    rng = random.Random(99)
    for _ in range(20):
        t, G = random_instance(ctx, rng, 3, n_ram=rng.randrange(1, 4))
        s = rng.randrange(1, 3)
        alpha = gg.primitive_element(t, G, gg.Character(s, 3))
        tup = gg.ram_tuple(G, t)
        vec = adeles.valuation_vector(alpha.alpha_p, 3)
        for pt, entry in tup.entries.items():
            assert vec.support[pt] == (s * pow(entry, -1, 3)) % 3
        assert set(vec.support) == set(tup.entries)


def test_automorphism_json_roundtrip(ctx):
    g = gg.GlobalAutomorphism(
        3,
        {Point("0"): la.LocalAutomorphism.ram(1, 3)},
        (2, 3, 1),
    )
    data = g.to_json()
    assert data == {
        "default_sigma": [2, 3, 1],
        "exceptions": {"0": {"kind": "ram", "a": 1}},
    }
    assert gg.GlobalAutomorphism.from_json(data, 3) == g


def test_subgroup_rejects_bad_generators(ctx):
    with pytest.raises(ValueError):
        gg.CyclicSubgroup(gg.GlobalAutomorphism.identity(3), 3)
    g = gg.GlobalAutomorphism(3, {}, (2, 1, 3))  # order 2, p = 3
    with pytest.raises(ValueError):
        gg.CyclicSubgroup(g, 3)
