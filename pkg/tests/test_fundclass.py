from fractions import Fraction

import pytest

from exceptions import ConventionError, InputError, ValuationUndeterminedError
from fundclass import (EncodingTuple, ExtensionSpec, artin_evaluate, artin_table, cocycle_from_tuple, compute_b,
                       compute_c_prime, compute_etas, compute_gamma,
                       fundamental_tuple, invariant_cyclic_unramified, local_cup, norm_group_membership,
                       norm_quotient, norm_to_base, perturb_tuple, reciprocity_normalization, tame_spec_for,
                       tame_tuple, tower_setup, tuple_fingerprint, tuple_from_cocycle, unramified_cocycle,
                       verify_cocycle, verify_tuple)
from padic_fields import galois_apply, norm, subfield_root_of_unity, teichmuller


def random_in_L(F, rng):
    """Random element of a totally ramified L inside LM: only the t^0 column is used"""
    m = F.p ** (F.N - 1)
    return F.element([[rng.randrange(1, m)] for _ in range(F.R)])


class TestExtensionSpec:

    @pytest.mark.parametrize("spec", [
        ExtensionSpec(4, "tame", e=2),
        ExtensionSpec(5, "tame", e=3),
        ExtensionSpec(5, "tame", e=4, unit=10),
        ExtensionSpec(5, "wild"),
        ExtensionSpec(2, "cyclotomic", nu=1),
        ExtensionSpec(3, "cyclotomic", nu=0),
        ExtensionSpec(5, "unramified", n=0),
        ExtensionSpec(5, "unramified", n=2, precision=0),
    ])
    def test_rejects_bad_specs(self, spec):
        with pytest.raises(InputError):
            spec.validate()

    def test_normalization_and_degree(self):
        assert ExtensionSpec(5, "tame", e=1, f=3).normalized() == ExtensionSpec(5, "unramified", n=3)
        assert ExtensionSpec(5, "tame", e=4, f=2).degree == 8
        assert ExtensionSpec(3, "cyclotomic", nu=2).degree == 6
        assert ExtensionSpec(7, "unramified", n=5).degree == 5

    def test_dict_round_trip(self):
        spec = ExtensionSpec(5, "tame", e=4, f=2, precision=16, unit=2)
        assert spec.to_dict() == {"p": "5", "family": "tame", "precision": "16", "e": "4", "f": "2", "unit": "2"}
        assert ExtensionSpec.from_dict(spec.to_dict()) == spec
        with pytest.raises(InputError):
            ExtensionSpec.from_dict({"family": "tame"})

    def test_cyclotomic_of_level_one_is_tame(self):
        spec = ExtensionSpec(5, "cyclotomic", nu=1, precision=12)
        assert tame_spec_for(spec) == ExtensionSpec(5, "tame", e=4, f=1, unit=-1, precision=12)
        assert tame_spec_for(ExtensionSpec(3, "cyclotomic", nu=2)).family == "cyclotomic"


class TestUnramified:

    @pytest.mark.parametrize("n", [2, 3, 4, 6])
    def test_cocycle_and_invariant(self, n):
        tower = tower_setup(ExtensionSpec(5, "unramified", n=n, precision=12))
        c = unramified_cocycle(n, tower.pi)
        report = verify_cocycle(c)
        assert report.ok
        assert report.checked == n ** 3
        assert invariant_cyclic_unramified(c) == Fraction(1, n)
        T = tuple_from_cocycle(c)
        assert T.alpha[0] == tower.pi
        assert T.beta[0][0] == 1

    def test_pipeline_matches_the_closed_form(self):
        tower, data, T = fundamental_tuple(ExtensionSpec(5, "unramified", n=3, precision=12))
        assert tower.indices == (0,)
        assert T.alpha[0].congruent(tower.pi, 12)
        assert data.report.ok and data.report.checked == 27
        assert tuple_fingerprint(tower, T).invariant == Fraction(1, 3)

    def test_trivial_extension(self):
        tower, data, T = fundamental_tuple(ExtensionSpec(5, "unramified", n=1, precision=8))
        assert tower.indices == ()
        assert T.size == 0
        assert data.report.checked == 1
        assert norm_quotient(tower).order == 1

    def test_wrong_degree(self):
        tower = tower_setup(ExtensionSpec(5, "unramified", n=2, precision=8))
        with pytest.raises(InputError):
            unramified_cocycle(3, tower.pi)


class TestTameClosedForm:

    def test_totally_ramified_tuple(self, tame_541, tame_761):
        for (tower, T), e in ((tame_541, 4), (tame_761, 6)):
            assert tower.indices == (1,)
            assert T.orders == (e,)
            zeta_inv = T.alpha[0]
            assert zeta_inv ** e == 1
            assert zeta_inv ** (e // 2) == -1
            assert T.beta[0][0] == 1

    @pytest.mark.parametrize("fixture, inverse_root", [("tame_541", 3), ("tame_761", 5)])
    def test_wrap_value_is_teichmuller_of_inverse_root(self, request, fixture, inverse_root):
        # least primitive roots 2 mod 5 and 3 mod 7
        tower, T = request.getfixturevalue(fixture)
        assert T.alpha[0].congruent(teichmuller(tower.field, inverse_root), T.precision)

    @pytest.mark.parametrize("p, e, f, precision", [(7, 3, 2, 32), (5, 2, 2, 32), (7, 6, 1, 32)])
    def test_closed_form_verifies(self, p, e, f, precision):
        tower, T = tame_tuple(ExtensionSpec(p, "tame", e=e, f=f, precision=precision))
        _, report = verify_tuple(tower, T)
        assert report.ok
        assert report.checked == (e * f) ** 3
        zeta = subfield_root_of_unity(tower.field, f, p ** f - 1)
        assert (T.alpha[-1] * zeta).congruent(1, precision)
        if f > 1:
            assert T.alpha[0] == tower.varpi
            assert T.beta[0][1].congruent(zeta ** (-((p - 1) // e)), precision)

    def test_extraction_keeps_the_precision_of_a_ramified_wrap(self, tame_542):
        tower, T = tame_542
        c = cocycle_from_tuple(T, tower)
        extracted = tuple_from_cocycle(c)
        assert extracted.precision == T.precision
        assert extracted.beta[0][0] == 1 and extracted.beta[1][1] == 1
        assert extracted.alpha[0].valuation() == Fraction(1, 4)
        assert extracted.agrees_with(T)

    def test_mixed_tuple(self, tame_542):
        tower, T = tame_542
        F = tower.field
        assert tower.indices == (0, 1)
        assert tower.galois_L.orders == (2, 4)
        zeta = subfield_root_of_unity(F, 2, 24)
        assert T.alpha[0] == tower.varpi
        assert T.alpha[0] ** 4 == 5
        assert (T.alpha[1] * zeta).congruent(1, T.precision)
        assert T.beta[0][1].congruent(zeta.inverse(), T.precision)
        assert (T.beta[0][1] * T.beta[1][0]).congruent(1, T.precision)

    def test_expands_to_a_cocycle(self, tame_542):
        tower, T = tame_542
        c, report = verify_tuple(tower, T)
        assert report.ok
        assert report.checked == 8 ** 3
        assert tuple_from_cocycle(c).agrees_with(T)
        for j, s in enumerate(tower.galois_L.generators()):
            assert local_cup(c, s).congruent(T.alpha[j], T.precision)

    def test_tower_description(self, tame_542):
        tower, _ = tame_542
        described = tower.describe()
        assert described["field"] == tower.field.id
        assert described["orders"] == ["2", "4"]
        assert tower.in_L(tower.varpi)
        assert not tower.in_L(tower.field.generator())

    def test_needs_a_ramified_layer(self):
        with pytest.raises(InputError):
            tame_tuple(ExtensionSpec(5, "tame", e=1, f=2))


def test_general_route_agrees_with_closed_form(general_542, tame_542):
    tower, data, T = general_542
    assert data.report.ok
    assert data.report.checked == 8 ** 3
    assert tuple_fingerprint(tower, T) == tuple_fingerprint(*tame_542)


class TestGeneralRouteStages:

    def test_gamma_has_norm_pi(self, general_542):
        tower, data, _ = general_542
        assert norm(data.gamma, tower.H).congruent(tower.pi, tower.precision)
        assert data.gamma.valuation() == Fraction(1, 4)

    def test_unramified_gamma_is_pi(self):
        tower = tower_setup(ExtensionSpec(5, "unramified", n=3, precision=12))
        assert compute_gamma(tower).congruent(tower.pi, tower.precision)

    def test_b_values(self, general_542):
        tower, data, _ = general_542
        G = tower.G
        assert compute_b(tower, data.gamma, G.identity()) == 1
        assert compute_b(tower, data.gamma, tower.sigma(1)) == 1
        assert compute_b(tower, data.gamma, tower.frobenius_f).congruent(data.gamma, tower.precision)

    def test_c_prime_is_trivial_on_h(self, general_542):
        tower, data, _ = general_542
        for g in (tower.sigma(0), tower.sigma(1)):
            for h in tower.H.elements():
                assert compute_c_prime(tower, data.gamma, g, h, data.b).congruent(1, tower.precision)

    def test_etas_solve_the_frobenius_equations(self, general_542):
        tower, data, _ = general_542
        s = tower.frobenius_f
        assert set(data.etas) == set(tower.indices)
        for i, eta in data.etas.items():
            ratio = galois_apply(tower.sigma(i), data.gamma) / data.gamma
            assert (galois_apply(s, eta) / eta).congruent(ratio, tower.precision)

    def test_etas_recomputed(self, general_542):
        tower, data, _ = general_542
        etas = compute_etas(tower, data.gamma)
        assert sorted(etas) == [0, 1]


@pytest.mark.slow
@pytest.mark.parametrize("p", [5, 7])
def test_general_route_on_cyclotomic_fields(p):
    spec = ExtensionSpec(p, "cyclotomic", nu=1, precision=32)
    tower, data, T = fundamental_tuple(spec)
    assert data.report.ok
    closed_tower, closed = tame_tuple(spec)
    assert tuple_fingerprint(tower, T) == tuple_fingerprint(closed_tower, closed)


class TestNormGroups:

    def test_quotient_orders(self, tame_542, tame_761):
        for tower, _ in (tame_542, tame_761):
            assert norm_quotient(tower).order == tower.n
        tower = tower_setup(ExtensionSpec(5, "unramified", n=3, precision=8))
        Q = norm_quotient(tower)
        assert (Q.a, Q.b, Q.c) == (3, 0, 1)

    def test_artin_rows_have_the_generator_orders(self, tame_542):
        tower, T = tame_542
        rows = artin_table(tower, T)
        assert [row.index for row in rows] == [0, 1]
        for j, row in enumerate(rows):
            assert row.element.in_base()
            assert row.image == tower.galois_L.generator(j)
            assert norm_group_membership(tower, row.element).order == tower.galois_L.orders[j]
        assert rows[0].element == -5

    def test_norms_are_in_the_kernel(self, tame_761, rng):
        tower, T = tame_761
        table = artin_table(tower, T)
        identity = tower.galois_L.identity()
        for _ in range(100):
            x = norm_to_base(tower, random_in_L(tower.field, rng))
            assert norm_group_membership(tower, x).member
            assert artin_evaluate(tower, T, x, table) == identity

    def test_artin_map_is_a_homomorphism(self, tame_761):
        tower, T = tame_761
        table = artin_table(tower, T)
        assert norm_group_membership(tower, -7).member
        assert not norm_group_membership(tower, 7).member
        assert artin_evaluate(tower, T, 7, table) != tower.galois_L.identity()
        for a, b in ((2, 3), (3, 7), (5, 14), (49, 6)):
            assert artin_evaluate(tower, T, a * b, table) == \
                artin_evaluate(tower, T, a, table) * artin_evaluate(tower, T, b, table)
        omega = teichmuller(tower.field, 3)
        assert norm_group_membership(tower, omega).order == 6

    def test_zero_has_no_class(self, tame_761):
        tower, _ = tame_761
        with pytest.raises(ValuationUndeterminedError):
            norm_group_membership(tower, tower.field.zero())
        with pytest.raises(InputError):
            norm_group_membership(tower, tower.varpi)

    def test_rescaling_keeps_the_class(self, tame_541):
        tower, T = tame_541
        w = tower.varpi + 2
        perturbed = perturb_tuple(tower, T, w)
        assert not perturbed.alpha[0].congruent(T.alpha[0], T.precision)
        _, report = verify_tuple(tower, perturbed)
        assert report.ok
        assert tuple_fingerprint(tower, perturbed) == tuple_fingerprint(tower, T)

    def test_normalization_needs_a_cyclotomic_tower(self, tame_541):
        with pytest.raises(InputError):
            reciprocity_normalization(*tame_541)


@pytest.mark.slow
def test_reciprocity_normalization_is_stable():
    verdicts = set()
    for p in (5, 7):
        tower, _, T = fundamental_tuple(ExtensionSpec(p, "cyclotomic", nu=1, precision=32))
        verdicts.add(reciprocity_normalization(tower, T))
    assert len(verdicts) == 1
    assert verdicts <= {"inverse", "direct"}


@pytest.mark.slow
def test_wild_cyclotomic_norm_group(rng):
    tower, data, T = fundamental_tuple(ExtensionSpec(3, "cyclotomic", nu=2, precision=48))
    assert norm_quotient(tower).order == 6
    assert data.report.ok and data.report.checked == 6 ** 3
    table = artin_table(tower, T)
    assert norm_group_membership(tower, table[0].element).order == 6
    for _ in range(200):
        x = norm_to_base(tower, random_in_L(tower.field, rng))
        assert norm_group_membership(tower, x).member
    for u in (2, 4, 5, 7, 8):
        for k in range(4):
            assert not norm_group_membership(tower, u * 3 ** k).member
            assert artin_evaluate(tower, T, u * 3 ** k, table) != tower.galois_L.identity()
    assert norm_group_membership(tower, 3).member


class TestCorruptedTuples:

    def _corrupt(self, tower, T):
        return EncodingTuple(T.field, T.indices, T.orders, (tower.varpi,), T.beta, T.precision)

    def test_witness_does_not_depend_on_jobs(self, tame_541):
        tower, T = tame_541
        bad = self._corrupt(tower, T)
        c = cocycle_from_tuple(bad, tower, verify=False)
        serial = verify_cocycle(c, jobs=1)
        threaded = verify_cocycle(c, jobs=2)
        assert not serial.ok and not threaded.ok
        assert serial.witness == threaded.witness
        assert serial.witness_text() == threaded.witness_text()
        assert not serial.witness[0].is_identity()

    def test_verification_reports_instead_of_raising(self, tame_541):
        tower, T = tame_541
        bad = self._corrupt(tower, T)
        _, report = verify_tuple(tower, bad)
        assert not report.ok
        with pytest.raises(ConventionError):
            cocycle_from_tuple(bad, tower)

    def test_foreign_tuple_is_rejected(self, tame_541, tame_761):
        with pytest.raises(InputError):
            cocycle_from_tuple(tame_761[1], tame_541[0])
