import math

import pytest

from exceptions import ContractViolationError, H1NonzeroError, InputError, RestrictionNontrivialError
from groups import AbelianPresentation, QuotientGroup, SubgroupSpec
from zmod_cohomology import (Cochain, FiniteGModule, InducedModule, check_dimension_shift_sequence, coboundary,
                             cup_h2_hminus2, cyclic_chi, dim_shift_backward, dim_shift_forward, genchange_witness,
                             h1_bruteforce, h2_bruteforce, inflate, infres_b_via_dimshift, infres_invert,
                             is_cocycle, normalize_cocycle, random_cochain, random_cocycle, restrict,
                             solve_coboundary)


def cyclic(n):
    return AbelianPresentation((n,))


def test_module_validation():
    G = cyclic(4)
    assert FiniteGModule.cyclic(G, 8, [5]).order == 8
    with pytest.raises(InputError):
        FiniteGModule.cyclic(G, 7, [3])
    with pytest.raises(InputError):
        FiniteGModule.trivial(G, [-2])
    with pytest.raises(InputError):
        FiniteGModule(G, [0], [[[2]]])
    with pytest.raises(InputError):
        FiniteGModule(G, [4, 0], [[[1, 0], [1, 1]]])


@pytest.mark.parametrize("n,m,expected", [(6, 4, [2]), (2, 3, []), (4, 4, [4]), (3, 9, [3])])
def test_h2_of_cyclic_with_trivial_coefficients(n, m, expected):
    G = cyclic(n)
    descriptor = h2_bruteforce(G, FiniteGModule.trivial(G, [m]))
    assert descriptor.invariant_factors == expected
    assert descriptor.order == math.prod(expected)
    for rep in descriptor.representatives:
        assert is_cocycle(rep).ok


def test_h2_over_z_and_h1(c4, trivial_z):
    assert h2_bruteforce(c4, trivial_z).invariant_factors == [4]
    h1 = h1_bruteforce(c4, trivial_z)
    assert h1.is_trivial and h1.free_rank == 0
    assert h1_bruteforce(c4, FiniteGModule.trivial(c4, [4])).invariant_factors == [4]


def test_klein_four_with_f2(klein):
    descriptor = h2_bruteforce(klein, FiniteGModule.trivial(klein, [2]))
    assert descriptor.invariant_factors == [2, 2, 2]
    assert descriptor.elementary_divisors == [2, 2, 2]


def test_sign_module():
    G = cyclic(2)
    A = FiniteGModule.cyclic(G, 9, [8])
    assert h1_bruteforce(G, A).is_trivial
    assert h2_bruteforce(G, A).is_trivial


def test_coboundaries_are_cocycles(rng, klein):
    A = FiniteGModule(klein, [8], [[[7]], [[3]]])
    b = random_cochain(klein, A, 1, rng)
    c = coboundary(b)
    assert is_cocycle(c).ok
    solved = solve_coboundary(c)
    assert solved is not None
    assert coboundary(solved) == c


def test_non_cocycle_witness():
    G = cyclic(3)
    A = FiniteGModule.trivial(G, [5])
    values = {(g, h): (0,) for g in G.elements() for h in G.elements()}
    values[(G.generator(0), G.generator(0))] = (1,)
    check = is_cocycle(Cochain(G, A, 2, values))
    assert not check.ok
    assert check.witness is not None


def test_normalize(rng):
    G = cyclic(4)
    A = FiniteGModule.cyclic(G, 8, [3])
    c = random_cocycle(G, A, rng, normalized=False)
    e = G.identity()
    n = normalize_cocycle(c)
    assert n(e, e) == A.zero()
    assert solve_coboundary(c - n) is not None


def test_restrict_and_inflate(rng):
    G = cyclic(4)
    H = SubgroupSpec(G, (G.element([2]),))
    assert solve_coboundary(restrict(cyclic_chi(4), H)) is None
    Q = QuotientGroup(G, H)
    A = FiniteGModule.trivial(G, [2])
    u = random_cocycle(Q, A, rng)
    inflated = inflate(u)
    assert inflated.group == G
    assert is_cocycle(inflated).ok
    assert restrict(inflated, H).is_zero()


@pytest.mark.parametrize("n", range(1, 13))
def test_generator_change(n):
    chi = cyclic_chi(n)
    sigma = chi.group.generator(0)
    for k in range(1, n + 1):
        if math.gcd(k, n) != 1:
            continue
        b = genchange_witness(n, k)
        assert coboundary(b) == chi - cyclic_chi(n, k).scale(k)
        assert cup_h2_hminus2(chi, sigma ** k) == (k % n,)


def test_generator_change_needs_coprime_k():
    with pytest.raises(InputError):
        cyclic_chi(6, 2)


def test_induced_modules(rng, klein):
    A = FiniteGModule(klein, [9], [[[8]], [[1]]])
    assert InducedModule(A, "full").check_action_law(rng)
    assert InducedModule(A, "augmentation").check_action_law(rng)
    assert check_dimension_shift_sequence(A, rng)


DIMSHIFT_CASES = [
    ((2,), 8, [7]),
    ((4,), 8, [3]),
    ((2, 2), 8, [7, 3]),
    ((6,), 8, [7]),
    ((2,), 9, [8]),
    ((4,), 9, [8]),
    ((2, 2), 9, [8, 1]),
    ((6,), 9, [2]),
]


def _dimshift_sweep(orders, modulus, multipliers, rng, samples):
    G = AbelianPresentation(orders)
    A = FiniteGModule.cyclic(G, modulus, multipliers)
    descriptor = h2_bruteforce(G, A)
    for _ in range(samples):
        c2 = random_cocycle(G, A, rng, descriptor=descriptor)
        c1 = dim_shift_backward(c2)
        assert is_cocycle(c1).ok
        back = dim_shift_forward(c1)
        assert is_cocycle(back).ok
        assert back == c2


@pytest.mark.parametrize("orders,modulus,multipliers", DIMSHIFT_CASES)
def test_dimension_shift_inverts(orders, modulus, multipliers, rng):
    _dimshift_sweep(orders, modulus, multipliers, rng, samples=5)


@pytest.mark.slow
@pytest.mark.parametrize("orders,modulus,multipliers", DIMSHIFT_CASES)
def test_dimension_shift_inverts_hundred_samples(orders, modulus, multipliers, rng):
    _dimshift_sweep(orders, modulus, multipliers, rng, samples=100)


def test_dimension_shift_normalizes_its_input(c4):
    A = FiniteGModule.cyclic(c4, 8, [3])
    constant = Cochain.from_function(c4, A, 1, lambda g: (1,))
    c = coboundary(constant)
    assert is_cocycle(c).ok
    e = c4.identity()
    assert c(e, e) != A.zero()
    c1 = dim_shift_backward(c)
    assert is_cocycle(c1).ok
    assert dim_shift_forward(c1) == normalize_cocycle(c)
    assert dim_shift_forward(c1) != c


def test_dimension_shift_rejects_non_cocycles():
    G = cyclic(3)
    A = FiniteGModule.trivial(G, [5])
    values = {(g, h): (0,) for g in G.elements() for h in G.elements()}
    values[(G.generator(0), G.generator(0))] = (1,)
    with pytest.raises(ContractViolationError):
        dim_shift_backward(Cochain(G, A, 2, values))


def test_degree_zero_coboundary():
    G = cyclic(2)
    A = FiniteGModule.cyclic(G, 4, [3])
    b = Cochain.from_function(G, A, 0, lambda: (1,))
    assert b() == (1,)
    db = coboundary(b)
    assert db(G.identity()) == (0,)
    assert db(G.generator(0)) == (2,)


def test_infres_b_satisfies_the_coboundary_relation_on_h():
    G = cyclic(4)
    H = SubgroupSpec(G, (G.element([2]),))
    A = FiniteGModule.cyclic(G, 5, [2])
    c2 = coboundary(Cochain.from_function(G, A, 1, lambda g: (g.exponents[0] + 1,)))
    c = normalize_cocycle(c2)
    b = infres_b_via_dimshift(G, H, A, c2)
    assert b[G.identity()] == A.zero()
    for g in G.elements():
        for h in H.elements():
            assert c(g, h) == A.sub(A.add(b[g], A.act(g, b[h])), b[G.compose(g, h)])


INFRES_CASES = [
    ((6,), [3], 9, [1]),
    ((2, 3), [1, 0], 9, [1, 4]),
    ((4,), [2], 3, [1]),
    ((6,), [3], 7, [2]),
]


def _infres_sweep(orders, h, modulus, multipliers, rng, samples):
    G = AbelianPresentation(orders)
    H = SubgroupSpec(G, (G.element(h),))
    A = FiniteGModule.cyclic(G, modulus, multipliers)
    Q = QuotientGroup(G, H)
    descriptor = h2_bruteforce(Q, A)
    for _ in range(samples):
        w = random_cocycle(Q, A, rng, descriptor=descriptor)
        c2 = inflate(w) + coboundary(random_cochain(G, A, 1, rng))
        result = infres_invert(G, H, A, c2)
        assert is_cocycle(result.u).ok
        assert solve_coboundary(result.u - w) is not None
        b = infres_b_via_dimshift(G, H, A, c2)
        assert b[G.identity()] == A.zero()


@pytest.mark.parametrize("orders,h,modulus,multipliers", INFRES_CASES)
def test_infres_recovers_the_inflated_class(orders, h, modulus, multipliers, rng):
    _infres_sweep(orders, h, modulus, multipliers, rng, samples=3)


@pytest.mark.slow
@pytest.mark.parametrize("orders,h,modulus,multipliers", INFRES_CASES)
def test_infres_many_instances(orders, h, modulus, multipliers, rng):
    _infres_sweep(orders, h, modulus, multipliers, rng, samples=13)


def test_infres_hypotheses(c4):
    H = SubgroupSpec(c4, (c4.element([2]),))
    A = FiniteGModule.trivial(c4, [2])
    with pytest.raises(H1NonzeroError):
        infres_invert(c4, H, A, Cochain.zero(c4, A, 2))
    with pytest.raises(RestrictionNontrivialError):
        infres_invert(c4, H, FiniteGModule.trivial(c4, [0]), cyclic_chi(4))
