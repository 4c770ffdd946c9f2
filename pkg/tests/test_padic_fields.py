from fractions import Fraction

import pytest

from exceptions import InputError, NoConvergenceError, ObstructionError, PrecisionError, ValuationUndeterminedError
from groups import SubgroupSpec
from padic_fields import (construct_field, elem_arith, field_from_id, galois_apply, hensel_root,
                          least_primitive_polynomial, norm, partial_norm, primitive_root_of_unity, solve_h90,
                          solve_unit_norm, subfield_root_of_unity, teichmuller, to_integer, to_rational, trace)


@pytest.fixture
def q5():
    return construct_field(5, precision=20)


@pytest.fixture
def q25():
    return construct_field(5, 2, precision=20)


@pytest.fixture
def tame5():
    """Q_5(Y) with Y^4 = 5"""
    return construct_field(5, 1, "tame", e=4, precision=20)


@pytest.fixture
def cyclo5():
    return construct_field(5, 1, "cyclotomic", nu=1, precision=20)


def test_least_primitive_polynomial():
    assert least_primitive_polynomial(5, 1) == (1, 3)
    assert least_primitive_polynomial(7, 1) == (1, 4)
    f = least_primitive_polynomial(5, 2)
    assert len(f) == 3 and f[0] == 1 and f[-1] != 0


def test_field_construction_errors():
    with pytest.raises(InputError):
        construct_field(4)
    with pytest.raises(InputError):
        construct_field(5, 1, "tame", e=3)
    with pytest.raises(InputError):
        construct_field(2, 1, "cyclotomic", nu=1)
    with pytest.raises(InputError):
        construct_field(5, 1, "wild")


def test_generator_is_a_primitive_root_of_unity(q25):
    t = q25.generator()
    assert t ** 24 == 1
    assert t ** 12 == -1
    assert q25.frobenius(t) == t ** 5


def test_frobenius_is_an_automorphism(q25, rng):
    x = q25.random_element(rng)
    y = q25.random_element(rng)
    assert q25.frobenius(q25.frobenius(x)) == x
    assert q25.frobenius(x * y) == q25.frobenius(x) * q25.frobenius(y)
    assert q25.check_automorphisms()


def test_unit_inverse(q25, rng):
    x = q25.random_element(rng, unit=True)
    assert x * x.inverse() == 1
    assert (x / x) == 1


def test_tame_uniformizer(tame5):
    Y = tame5.uniformizer()
    assert Y ** 4 == 5
    assert Y.valuation() == Fraction(1, 4)
    assert Y * Y.inverse() == 1
    assert (Y ** 3 / Y ** 2) == Y
    assert tame5.check_automorphisms()


def test_tame_ramified_automorphism(tame5):
    Y = tame5.uniformizer()
    image = tame5.ramified_automorphism(Y)
    assert image ** 4 == 5
    assert (image / Y) ** 4 == 1
    assert image != Y
    assert tame5.ramified_automorphism(Y, 4) == Y


def test_cyclotomic_layer(cyclo5):
    zeta = cyclo5.one() + cyclo5.uniformizer()
    assert zeta ** 5 == 1
    assert zeta != 1
    assert cyclo5.uniformizer().valuation() == Fraction(1, 4)
    assert cyclo5.ramified_automorphism(zeta) == zeta ** 2
    assert cyclo5.check_automorphisms()


def test_valuation_of_zero_is_undetermined(q5):
    with pytest.raises(ValuationUndeterminedError):
        q5.zero().valuation()
    with pytest.raises(ValuationUndeterminedError):
        q5.zero().inverse()


def test_precision_is_tracked(q5):
    short = q5.one().truncated(3)
    assert short.absolute_precision == 3
    assert short.congruent(1, 3)
    with pytest.raises(PrecisionError):
        short.congruent(1, 10)
    assert not q5.from_integer(2).congruent(7, 2)
    assert q5.from_integer(2).congruent(7, 1)


def test_integers_and_rationals(q5):
    assert to_integer(q5.from_integer(7)) == 7
    assert to_integer(q5.from_integer(-1)) == 5 ** 20 - 1
    assert to_rational(q5.from_integer(5).inverse()) == Fraction(1, 5)
    with pytest.raises(InputError):
        to_integer(q5.from_integer(5).inverse())


def test_elem_arith(q5):
    x, y = q5.from_integer(3), q5.from_integer(4)
    assert elem_arith(x, y, "add") == 7
    assert elem_arith(x, y, "mul") == 12
    assert elem_arith(x, None, "pow", k=3) == 27
    with pytest.raises(InputError):
        elem_arith(x, y, "mod")


def test_teichmuller(q5):
    w = teichmuller(q5, 2)
    assert w ** 4 == 1
    assert w.residue() == (2,)
    with pytest.raises(InputError):
        teichmuller(q5, 5)


def test_teichmuller_lifts_of_small_residues(q5):
    assert primitive_root_of_unity(q5, 4) == teichmuller(q5, 2)
    assert teichmuller(q5, 2) ** 2 == teichmuller(q5, 4)
    assert teichmuller(q5, 4) == -1
    assert teichmuller(q5, 1) == 1
    assert primitive_root_of_unity(q5, 1) == 1
    q7 = construct_field(7, precision=20)
    w = teichmuller(q7, 3)
    assert w ** 6 == 1
    assert w ** 2 != 1 and w ** 3 != 1
    assert primitive_root_of_unity(q7, 6) == w
    assert q5.generator().residue() == (2,)
    assert q7.generator().residue() == (3,)
    assert hensel_root({4: 1, 0: -1}, q5.from_integer(2)) == teichmuller(q5, 2)


def test_hilbert_90_obstruction_on_a_teichmuller_lift(q25):
    with pytest.raises(ObstructionError):
        solve_h90(q25.galois_group.generator(0), teichmuller(q25, 2))


def test_hensel_square_root(q5):
    root = hensel_root({2: 1, 0: -6}, q5.from_integer(1))
    assert (root * root).congruent(6, 15)
    assert root.residue() == (1,)
    with pytest.raises(NoConvergenceError):
        hensel_root({2: 1, 0: -6}, q5.from_integer(2))


def test_hensel_lifting_past_the_working_precision(q5):
    with pytest.raises(PrecisionError):
        hensel_root({2: 1, 0: -6}, q5.from_integer(1), digits=q5.N + 5)


def test_subfield_root_of_unity(q25):
    zeta = subfield_root_of_unity(q25, 1, 4)
    assert zeta ** 4 == 1
    assert zeta ** 2 == -1
    assert q25.frobenius(zeta) == zeta
    with pytest.raises(InputError):
        subfield_root_of_unity(q25, 1, 3)
    with pytest.raises(InputError):
        subfield_root_of_unity(q25, 3, 2)


def test_norm_trace_and_partial_norm(q25):
    G = q25.galois_group
    s = G.generator(0)
    H = SubgroupSpec(G, (s,))
    t = q25.generator()
    assert norm(t, H) == t ** 6
    assert norm(t, H).in_base()
    assert trace(q25.one(), H) == 2
    assert partial_norm(s, 2, t) == norm(t, H)
    assert partial_norm(s, 0, t) == 1
    assert galois_apply(s, t) == t ** 5


def test_solve_unit_norm(q25):
    s = q25.galois_group.generator(0)
    H = SubgroupSpec(q25.galois_group, (s,))
    u = q25.from_integer(3)
    eta = solve_unit_norm(s, u)
    assert norm(eta, H) == u
    with pytest.raises(InputError):
        solve_unit_norm(s, q25.from_integer(5))


def test_unit_norm_on_a_truncated_unit(q25):
    s = q25.galois_group.generator(0)
    H = SubgroupSpec(q25.galois_group, (s,))
    u = q25.from_integer(3).truncated(5)
    eta = solve_unit_norm(s, u)
    assert norm(eta, H).congruent(u, 5)
    with pytest.raises(PrecisionError):
        solve_unit_norm(s, u, digits=10)


def test_hilbert_90(q25, rng):
    s = q25.galois_group.generator(0)
    y = q25.random_element(rng, unit=True)
    t = galois_apply(s, y) / y
    eta = solve_h90(s, t)
    assert (galois_apply(s, eta) / eta).congruent(t, 15)
    assert solve_h90(s, q25.one()) == 1


def test_hilbert_90_failures(q25):
    s = q25.galois_group.generator(0)
    with pytest.raises(ObstructionError):
        solve_h90(s, q25.from_integer(2))
    with pytest.raises(InputError):
        solve_h90(s, q25.from_integer(5))


def test_hilbert_90_on_a_truncated_input(q25, rng):
    s = q25.galois_group.generator(0)
    y = q25.random_element(rng, unit=True)
    t = (galois_apply(s, y) / y).truncated(4)
    eta = solve_h90(s, t)
    assert (galois_apply(s, eta) / eta).congruent(t, 4)
    with pytest.raises(PrecisionError):
        solve_h90(s, t, digits=10)


def test_field_ids_round_trip():
    F = construct_field(5, 2, "tame", e=4, unit=-1, precision=16)
    assert F.id == "p=5;d=2;tame e=4 u=-1;N=16"
    assert field_from_id(F.id) == F
    cyclo = construct_field(3, 1, "cyclotomic", nu=2, precision=12)
    assert field_from_id(cyclo.id) == cyclo
    with pytest.raises(InputError):
        field_from_id("garbage")
