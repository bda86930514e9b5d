import random

import pytest

from wgen.coeff import K
from wgen.liealg import LieElem, Shape, basis_b, bracket, kappa_b
from wgen.pbw import AlgElem
from wgen.vertex import (VertexAlgebra, VState, check_associativity, check_commutator,
                         check_skew_symmetry, check_translation, emode, psimode, random_state)


@pytest.fixture(scope="module")
def v12():
    return VertexAlgebra(Shape(1, 2))


@pytest.fixture(scope="module")
def v22():
    return VertexAlgebra(Shape(2, 2))


def lie_to_state(alg, x):
    return sum((alg.even(i, j) * c for (i, j), c in x.coeffs.items()), VState())


def test_positive_mode_contracts_with_form(v22):
    s = v22.shape
    for x in basis_b(s):
        for y in basis_b(s):
            got = v22.mode_apply((0, 1) + x, v22.even(*y))
            want = kappa_b(LieElem.basis(*x, 4), LieElem.basis(*y, 4), s)
            assert got == VState.vacuum() * want


def test_zero_mode_acts_by_bracket(v12):
    assert v12.mode_apply(emode(1, 1, 0), v12.even(2, 1)) == -v12.even(2, 1)


def test_odd_modes_anticommute(v12):
    assert not v12.mode_apply(psimode(2, 1, 1), v12.odd(2, 1, 0))
    assert not v12.nth_product(v12.odd(2, 1), -1, v12.odd(2, 1))


def test_products_of_currents(v22):
    s, N = v22.shape, 4
    for x in basis_b(s):
        for y in basis_b(s):
            a, b = v22.even(*x), v22.even(*y)
            X, Y = LieElem.basis(*x, N), LieElem.basis(*y, N)
            assert v22.nth_product(a, 0, b) == lie_to_state(v22, bracket(X, Y))
            assert v22.nth_product(a, 1, b) == VState.vacuum() * kappa_b(X, Y, s)
            assert v22.nth_product(a, -1, b) == v22.monomial([(0, -1) + x, (0, -1) + y])
            assert not v22.nth_product(a, 2, b)


def test_quasi_associativity_instance(v22):
    # (a_(-1)b)_(-1)c - a_(-1)(b_(-1)c) = sum_j a_(-j-2) b_(j) c + sum_j b_(-j-2) a_(j) c
    rng = random.Random(5)
    gens = [v22.even(*x) for x in basis_b(v22.shape)]
    P = v22.nth_product
    for _ in range(40):
        a, b, c = (rng.choice(gens) for _ in range(3))
        lhs = P(P(a, -1, b), -1, c) - P(a, -1, P(b, -1, c))
        rhs = VState()
        for j in range(0, 3):
            rhs = rhs + P(a, -j - 2, P(b, j, c)) + P(b, -j - 2, P(a, j, c))
        assert lhs == rhs


def test_translation_examples(v22):
    D = v22.translate
    assert D(v22.even(1, 1)) == v22.even(1, 1, 2)
    assert not D(VState.vacuum())
    xy = v22.monomial([emode(1, 1, -1), emode(3, 1, -1)])
    want = v22.monomial([emode(1, 1, -2), emode(3, 1, -1)]) + v22.monomial([emode(1, 1, -1), emode(3, 1, -2)])
    assert D(xy) == want
    assert D(v22.odd(3, 1, 0)) == v22.odd(3, 1, -1)


def test_embed_alg(v12):
    a = AlgElem.mode(1, 1) * AlgElem.mode(2, 2)
    assert v12.embed_alg(a) == v12.monomial([emode(1, 1, -1), emode(2, 2, -1)])
    assert v12.embed_alg(AlgElem.one()) == VState.vacuum()
    assert v12.embed_alg(AlgElem.mode(2, 2, 2) * (K + 1)) == v12.even(2, 2, 2) * (K + 1)
    with pytest.raises(ValueError):
        v12.embed_alg(AlgElem.tau())
    assert v12.to_alg(v12.embed_alg(a)) == a


def test_mode_validation(v22):
    with pytest.raises(ValueError):
        v22.even(1, 3)
    with pytest.raises(ValueError):
        v22.odd(1, 1)


@pytest.mark.parametrize("shape", [Shape(1, 2), Shape(2, 2)])
def test_vacuum_axioms(shape):
    alg = VertexAlgebra(shape)
    rng = random.Random(2)
    vac = VState.vacuum()
    for _ in range(20):
        a = random_state(alg, rng, 4)
        assert alg.nth_product(vac, -1, a) == a
        assert alg.nth_product(a, -1, vac) == a
        for n in range(0, 3):
            assert not alg.nth_product(a, n, vac)


@pytest.mark.parametrize("shape", [Shape(1, 2), Shape(1, 3), Shape(2, 2)])
def test_axioms_random(shape):
    alg = VertexAlgebra(shape)
    rng = random.Random(17)
    for _ in range(40):
        a = random_state(alg, rng, 4, parity=rng.randint(0, 1))
        b = random_state(alg, rng, 4, parity=rng.randint(0, 1))
        c = random_state(alg, rng, 3)
        m, n = rng.randint(-2, 2), rng.randint(-2, 2)
        assert check_associativity(alg, a, b, c, m, n)
        assert check_skew_symmetry(alg, a, b, n)
        assert check_commutator(alg, a, b, c, abs(m), n)
        assert check_translation(alg, a, b, n)


def test_axiom_checks_detect_a_broken_product(v22):
    # doubling every first-order pole breaks the axioms; the checks must notice
    broken = VertexAlgebra(Shape(2, 2))
    true = v22.nth_product
    broken.nth_product = lambda x, n, y: true(x, n, y) * (2 if n == 1 else 1)
    rng = random.Random(8)
    caught = 0
    for _ in range(20):
        a, b, c = (random_state(v22, rng, 3, parity=0) for _ in range(3))
        caught += not check_commutator(broken, a, b, c, 1, -1)
        caught += not check_associativity(broken, a, b, c, -1, 1)
    assert caught > 0


def test_numeric_level_matches_specialization():
    sym = VertexAlgebra(Shape(2, 2))
    num = VertexAlgebra(Shape(2, 2), 3)
    from wgen.coeff import as_scalar, scalar_eval
    rng = random.Random(4)
    for _ in range(10):
        a = random_state(sym, rng, 3)
        b = random_state(sym, rng, 3)
        for n in (-1, 0, 1, 2):
            got = sym.nth_product(a, n, b).map_coeffs(lambda c: as_scalar(scalar_eval(c, 3)))
            assert got == num.nth_product(a, n, b)
