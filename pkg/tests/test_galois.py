import itertools
from collections import defaultdict
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qpascal import (
    FieldSpec,
    NotIrreducibleError,
    NotPrimeError,
    QParam,
    Subspace,
    TooLargeError,
    codim_word,
    enumerate_grassmannian,
    exact_extreme_law,
    exact_growth_law,
    growth_q_param,
    is_irreducible,
    is_prime,
    list_extensions,
    make_field,
    project_down,
    q_binomial,
    rref_canonicalize,
    sample_growth,
)

F2 = make_field(2)
F3 = make_field(3)
F4 = make_field(2, 2)


class TestPrimality:
    def test_small_values(self):
        primes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41}
        for n in range(-2, 42):
            assert is_prime(n) == (n in primes)

    def test_large_composite_and_prime(self):
        assert is_prime(2**31 - 1)
        assert not is_prime(2**31 + 1)
        assert not is_prime(341)  # base-2 pseudoprime


class TestFieldConstruction:
    def test_default_moduli(self):
        assert F2.modulus == (0, 1)
        assert F3.modulus == (0, 1)
        assert F4.modulus == (1, 1, 1)  # the unique irreducible quadratic

    def test_f8_modulus_is_irreducible_cubic(self):
        f8 = make_field(2, 3)
        assert len(f8.modulus) == 4
        assert is_irreducible(f8.modulus, 2)
        assert f8.size == 8

    def test_rejects_composite_characteristic(self):
        with pytest.raises(NotPrimeError):
            make_field(6)

    def test_rejects_reducible_modulus(self):
        with pytest.raises(NotIrreducibleError):
            FieldSpec(2, 2, (0, 0, 1))  # x^2 = x * x

    def test_rejects_oversized_field(self):
        with pytest.raises(TooLargeError):
            make_field(2, 25)

    def test_jsonable_roundtrip(self):
        assert FieldSpec.from_jsonable(F4.to_jsonable()) == F4


class TestFieldArithmetic:
    def test_f4_multiplication_facts(self):
        # elements: 0, 1, x -> 2, x+1 -> 3 with x^2 = x + 1
        assert F4.mul(2, 2) == 3
        assert F4.mul(2, 3) == 1
        assert F4.add(2, 3) == 1

    def test_inverses_all_fields(self):
        for field in (F2, F3, F4, make_field(5), make_field(3, 2)):
            for x in range(1, field.size):
                assert field.mul(x, field.inv(x)) == 1

    def test_zero_has_no_inverse(self):
        with pytest.raises(ZeroDivisionError):
            F4.inv(0)

    def test_encode_decode_roundtrip(self):
        for x in F4.elements():
            assert F4.encode(F4.decode(x)) == x

    def test_field_axioms_sampled(self):
        f9 = make_field(3, 2)
        for x, y, z in itertools.product((0, 1, 4, 7), repeat=3):
            assert f9.mul(x, f9.add(y, z)) == f9.add(f9.mul(x, y), f9.mul(x, z))
            assert f9.mul(x, y) == f9.mul(y, x)

    def test_element_range_checked(self):
        with pytest.raises(ValueError):
            F2.add(0, 2)


class TestRref:
    def test_hand_example(self):
        rows = rref_canonicalize(F2, 3, [(1, 1, 0), (1, 0, 1)])
        assert rows == ((1, 0, 1), (0, 1, 1))

    def test_idempotent(self):
        rows = rref_canonicalize(F3, 4, [(1, 2, 0, 1), (2, 1, 1, 0), (0, 0, 1, 1)])
        assert rref_canonicalize(F3, 4, rows) == rows

    def test_zero_rows_dropped(self):
        assert rref_canonicalize(F2, 2, [(1, 1), (1, 1)]) == ((1, 1),)

    @settings(max_examples=60, deadline=None)
    @given(
        data=st.lists(
            st.lists(st.integers(min_value=0, max_value=2), min_size=3, max_size=3),
            min_size=1,
            max_size=3,
        )
    )
    def test_span_preserved(self, data):
        rows = rref_canonicalize(F3, 3, data)
        space = Subspace(F3, 3, rows)
        for vec in data:
            assert space.contains(tuple(v % 3 for v in vec))
        # basis vectors lie in the span of the input
        original = {v for v in Subspace.spanned(F3, 3, data).vectors()}
        for row in rows:
            assert row in original


class TestSubspace:
    def test_rejects_non_rref_basis(self):
        with pytest.raises(ValueError):
            Subspace(F2, 3, ((1, 1, 0), (1, 0, 1)))

    def test_zero_and_full(self):
        assert Subspace.zero(F2, 3).dim == 0
        assert Subspace.full(F2, 3).dim == 3
        assert Subspace.zero(F2, 0).ambient_dim == 0

    def test_vectors_count(self):
        space = Subspace.spanned(F3, 3, [(1, 0, 2), (0, 1, 1)])
        assert len(list(space.vectors())) == 9

    def test_contains(self):
        space = Subspace.spanned(F2, 3, [(1, 1, 0)])
        assert space.contains((1, 1, 0))
        assert space.contains((0, 0, 0))
        assert not space.contains((1, 0, 0))

    def test_jsonable_roundtrip(self):
        space = Subspace.spanned(F4, 2, [(2, 3)])
        assert Subspace.from_jsonable(space.to_jsonable()) == space

    def test_codim(self):
        assert Subspace.spanned(F2, 4, [(1, 0, 0, 0)]).codim == 3


class TestProjection:
    def test_hand_example(self):
        line = Subspace.spanned(F2, 2, [(1, 1)])
        assert project_down(line) == Subspace.zero(F2, 1)

    def test_kills_only_last_coordinate_direction(self):
        space = Subspace.spanned(F2, 3, [(1, 0, 0), (0, 0, 1)])
        assert project_down(space) == Subspace.spanned(F2, 2, [(1, 0)])

    def test_rejects_empty_ambient(self):
        with pytest.raises(ValueError):
            project_down(Subspace.zero(F2, 0))


class TestExtensions:
    def test_full_line_has_two(self):
        exts = list_extensions(Subspace.full(F2, 1))
        assert len(exts) == 2

    def test_zero_in_f3_has_four(self):
        exts = list_extensions(Subspace.zero(F3, 1))
        assert len(exts) == 4

    def test_exhaustive_counts_and_projection_inverse(self):
        for field in (F2, F3):
            for n in range(4):
                for k in range(n + 1):
                    for space in enumerate_grassmannian(field, n, k):
                        exts = list_extensions(space)
                        assert len(exts) == field.size ** (n - k) + 1
                        assert len(set(exts)) == len(exts)
                        for ext in exts:
                            assert project_down(ext) == space


class TestGrassmannian:
    def test_counts(self):
        assert len(list(enumerate_grassmannian(F2, 4, 2))) == 35
        assert len(list(enumerate_grassmannian(F3, 3, 1))) == 13

    def test_count_matches_gaussian_binomial(self):
        for field in (F2, F3, F4):
            q = QParam(F(field.size))
            for n in range(4):
                for k in range(n + 1):
                    expected = int(q_binomial(n, k, q))
                    assert len(list(enumerate_grassmannian(field, n, k))) == expected

    def test_distinct_canonical_forms(self):
        seen = list(enumerate_grassmannian(F2, 4, 2))
        assert len(set(seen)) == len(seen)

    def test_guard(self):
        with pytest.raises(TooLargeError):
            list(enumerate_grassmannian(F2, 40, 20, limit=1000))

    def test_empty_outside_range(self):
        assert list(enumerate_grassmannian(F2, 2, 3)) == []


class TestGrowth:
    def test_deterministic(self):
        c1 = sample_growth(1, F2, 6, seed=9)
        c2 = sample_growth(1, F2, 6, seed=9)
        assert c1 == c2

    def test_chain_shape(self):
        chain = sample_growth(2, F3, 5, seed=4)
        assert len(chain) == 6
        for n, space in enumerate(chain):
            assert space.ambient_dim == n
            assert space.codim <= 2

    def test_kappa_zero_grows_always(self):
        chain = sample_growth(0, F2, 5, seed=1)
        assert [s.dim for s in chain] == [0, 1, 2, 3, 4, 5]
        assert str(codim_word(chain)) == "00000"

    def test_kappa_infinite_never_grows(self):
        import math

        chain = sample_growth(math.inf, F2, 5, seed=1)
        assert [s.dim for s in chain] == [0] * 6
        assert str(codim_word(chain)) == "11111"

    def test_codim_word_hand_chain(self):
        chain = (
            Subspace.zero(F2, 0),
            Subspace.full(F2, 1),
            Subspace.spanned(F2, 2, [(1, 0)]),
            Subspace.spanned(F2, 3, [(1, 0, 0), (0, 1, 0)]),
        )
        assert str(codim_word(chain)) == "010"

    def test_codim_word_rejects_non_chain(self):
        with pytest.raises(ValueError):
            codim_word((Subspace.zero(F2, 0), Subspace.zero(F2, 2)))

    def test_exact_law_total_and_marginal(self):
        law = exact_growth_law(1, F2, 3)
        assert sum(law.values()) == 1
        marginal = defaultdict(F)
        for chain, p in law.items():
            marginal[codim_word(chain)] += p
        extreme = exact_extreme_law(1, growth_q_param(F2), 3)
        assert dict(marginal) == {w: p for w, p in extreme.probs.items() if p > 0}

    def test_conditional_uniformity_over_grassmannian(self):
        law = exact_growth_law(1, F3, 3)
        endpoint = defaultdict(F)
        for chain, p in law.items():
            endpoint[chain[-1]] += p
        by_dim = defaultdict(dict)
        for space, p in endpoint.items():
            by_dim[space.dim][space] = p
        for d, masses in by_dim.items():
            assert set(masses) == set(enumerate_grassmannian(F3, 3, d))
            assert len(set(masses.values())) == 1

    def test_growth_q_param(self):
        assert growth_q_param(F3).q == F(1, 3)
