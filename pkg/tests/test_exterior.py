from itertools import product

import pytest

from char2forms.exterior import (ExteriorSpace, WrongDimension, ZeroVolume, alt_matrix,
                                 compound_matrix, exterior_form_gram, hodge,
                                 hodge_identities, pfaffian_gram, pq,
                                 wedge, wedge_coefficient)
from char2forms.forms import BilinearForm
from char2forms.linalg import Matrix, Vector
from char2forms.oracle import compound_by_expansion


def _random_matrix(field, n, rng, size=1):
    return Matrix(field, [[field.random_element(rng, size=size) for _ in range(n)]
                          for _ in range(n)])


def test_wedge_coefficient():
    assert wedge_coefficient((1, 2), (3, 4)) == 1
    assert wedge_coefficient((1, 2), (2, 3)) == 0
    assert wedge_coefficient((1, 3), (2, 4)) == 1


def test_index_sets_lex_and_complement():
    space = ExteriorSpace(4, 2)
    assert space.sets == ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))
    for s in space.sets:
        comp = space.complement(s)
        assert space.complement(comp) == s
        assert wedge_coefficient(s, comp) == 1


def test_compound_identity_and_diagonal(gf2, f2t):
    assert compound_matrix(Matrix.identity(gf2, 4), 2) == Matrix.identity(gf2, 6)
    a, b, c, d = (f2t.parse(s) for s in ("1+t", "t", "t^2", "1/t"))
    got = compound_matrix(Matrix.diagonal(f2t, [a, b, c, d]), 2)
    expected = Matrix.diagonal(f2t, [a * b, a * c, a * d, b * c, b * d, c * d])
    assert got == expected


def test_compound_functorial(gf4, rng):
    for _ in range(6):
        a = _random_matrix(gf4, 4, rng)
        b = _random_matrix(gf4, 4, rng)
        assert compound_matrix(a * b, 2) == compound_matrix(a, 2) * compound_matrix(b, 2)


def test_compound_matches_expansion_oracle(gf4, f2t, rng):
    for field in (gf4, f2t):
        for ell in (1, 2, 3):
            a = _random_matrix(field, 4, rng)
            assert compound_matrix(a, ell) == compound_by_expansion(a, ell)


def test_exterior_form_gram(gf2, f2t):
    assert exterior_form_gram(BilinearForm(Matrix.identity(gf2, 4)), 2) \
        == Matrix.identity(gf2, 6)
    c = [f2t.parse(s) for s in ("1", "t", "1+t", "t^2+t")]
    gram = exterior_form_gram(BilinearForm(Matrix.diagonal(f2t, c)), 2)
    pairs = [c[0] * c[1], c[0] * c[2], c[0] * c[3], c[1] * c[2], c[1] * c[3], c[2] * c[3]]
    assert gram == Matrix.diagonal(f2t, pairs)
    # non-diagonal block input: the (12),(12) entry is the 2x2 block determinant
    one, zero, t = f2t.one(), f2t.zero(), f2t.generator
    h = Matrix(f2t, [[zero, one, zero, zero],
                     [one, one, zero, zero],
                     [zero, zero, t, zero],
                     [zero, zero, zero, t * t + t]])
    lgram = exterior_form_gram(BilinearForm(h), 2)
    assert lgram[0, 0].is_one()


def test_pfaffian_gram(gf2, f2t):
    space = ExteriorSpace(4, 2)
    pf = pfaffian_gram(gf2, 4, 2, 1)
    assert pf[space.position((1, 2)), space.position((3, 4))].is_one()
    assert pf[space.position((1, 2)), space.position((1, 2))].is_zero()
    assert pf.is_symmetric()
    assert all(pf[i, i].is_zero() for i in range(6))  # alternating
    s = f2t.parse("t+1")
    assert pfaffian_gram(f2t, 4, 2, s) == pfaffian_gram(f2t, 4, 2, 1) * s
    # each row pairs an index set with exactly its complement
    for i in range(6):
        nonzero = [j for j in range(6) if not pf[i, j].is_zero()]
        assert nonzero == [space.position(space.complement(space.sets[i]))]
    with pytest.raises(ZeroVolume):
        pfaffian_gram(gf2, 4, 2, 0)


def test_hodge_identity_form(gf2):
    data = hodge(BilinearForm(Matrix.identity(gf2, 4)))
    assert data.delta.is_one()
    space = data.space
    for perm_s in space.sets:
        image = data.j_matrix * space.basis_vector(gf2, perm_s)
        assert image == space.basis_vector(gf2, space.complement(perm_s))


def test_hodge_delta_and_rescaling(f2t):
    m = f2t.generator
    form = BilinearForm(Matrix.diagonal(f2t, [m, f2t.one(), f2t.one(), f2t.one()]))
    data = hodge(form)
    assert data.delta == m
    s = f2t.parse("t+1")
    scaled = hodge(form, volume_scale=s)
    assert scaled.j_matrix == data.j_matrix * s.inverse()
    assert scaled.delta == data.delta * (s * s).inverse()


def test_hodge_closed_form_on_orthogonal_basis(f2t, rng):
    # J(v_S) = v_{S^c} * (prod of c_i over S) / b on an orthogonal basis
    for _ in range(5):
        c = []
        while len(c) < 4:
            v = f2t.random_element(rng, size=1)
            if not v.is_zero():
                c.append(v)
        scale = f2t.parse("t")
        data = hodge(BilinearForm(Matrix.diagonal(f2t, c)), volume_scale=scale)
        space = data.space
        for s in space.sets:
            image = data.j_matrix * space.basis_vector(f2t, s)
            coeff = scale.inverse()
            for i in s:
                coeff = coeff * c[i - 1]
            assert image == space.basis_vector(f2t, space.complement(s)).scale(coeff)


def test_hodge_identities_fixtures(gf2, gf4, f2t):
    from char2forms.groups import h_tilde_gram
    fixtures = [BilinearForm(Matrix.identity(gf2, 4)),
                BilinearForm(h_tilde_gram(gf2)),
                BilinearForm(Matrix.identity(gf4, 4)),
                BilinearForm(Matrix.diagonal(f2t, [f2t.parse(s)
                                                   for s in ("t", "1", "1+t", "t^2+t")]))]
    for form in fixtures:
        for name, ok, detail in hodge_identities(hodge(form)):
            assert ok, (name, detail)


def test_hodge_odd_dimension_rejected(gf2):
    with pytest.raises(WrongDimension):
        hodge(BilinearForm(Matrix.identity(gf2, 3)))


def test_pq_examples(gf2):
    space = ExteriorSpace(4, 2)
    e12 = space.basis_vector(gf2, (1, 2))
    assert pq(e12).is_zero()
    mixed = e12 + space.basis_vector(gf2, (3, 4))
    assert pq(mixed).is_one()
    with pytest.raises(WrongDimension):
        pq(Vector(gf2, [1, 0, 0]))


def test_pq_squared_is_det_gf2(gf2):
    for coords in product(range(2), repeat=6):
        x = Vector(gf2, coords)
        assert pq(x) * pq(x) == alt_matrix(x).det()


def test_pq_polar_form_is_pf(gf4, rng):
    pf = pfaffian_gram(gf4, 4, 2, 1)
    for _ in range(20):
        x = Vector(gf4, [gf4.random_element(rng) for _ in range(6)])
        y = Vector(gf4, [gf4.random_element(rng) for _ in range(6)])
        polar = pq(x + y) + pq(x) + pq(y)
        gy = pf * y
        total = gf4.zero()
        for a, b in zip(x, gy):
            total = total + a * b
        assert polar == total


def test_decomposable_vectors_lie_on_quadric(gf4, rng):
    for _ in range(10):
        v = Vector(gf4, [gf4.random_element(rng) for _ in range(4)])
        w = Vector(gf4, [gf4.random_element(rng) for _ in range(4)])
        assert pq(wedge(gf4, [v, w])).is_zero()


def test_wedge_coordinates(gf2):
    v = Vector(gf2, [1, 1, 0, 0])
    w = Vector(gf2, [0, 0, 0, 1])
    space = ExteriorSpace(4, 2)
    expected = space.basis_vector(gf2, (1, 4)) + space.basis_vector(gf2, (2, 4))
    assert wedge(gf2, [v, w]) == expected
