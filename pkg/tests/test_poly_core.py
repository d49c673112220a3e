import cmath
import math

import numpy as np
import pytest

from src.config import Tolerances
from src.errors import InvalidInputError, NumericFailureError
from src.field_model import (
    AffineMap,
    Polynomial,
    RootMultiset,
    affine_substitute,
    evaluate_poly,
    expand_from_roots,
    find_roots,
    poly_add,
    poly_mul,
)

from .conftest import random_poly_coeffs, unit_roots


def assert_coeffs(p: Polynomial, expected, tol=1e-12):
    assert p.degree == len(expected) - 1
    for got, want in zip(p.coeffs, expected):
        assert abs(got - want) <= tol * max(1.0, abs(want))


def assert_roots(found: RootMultiset, expected, tol=1e-8):
    assert found.total == sum(m for _, m in expected)
    remaining = list(expected)
    for z, m in found.roots:
        match = next((item for item in remaining if abs(item[0] - z) <= tol and item[1] == m), None)
        assert match is not None, f"unexpected root {z} (multiplicity {m})"
        remaining.remove(match)
    assert not remaining


def random_multiset(rng: np.random.Generator, max_degree: int = 8, radius: float = 10.0, separation: float = 1.0):
    """|root| ≤ radius、总次数 ≤ max_degree、至少一个重根；不同根相距 ≥ separation。"""
    pairs = []
    total = 0
    while total < max_degree:
        m = int(rng.integers(1, 5))
        if total + m > max_degree:
            break
        for _ in range(100):
            z = radius * math.sqrt(rng.uniform()) * cmath.exp(2j * math.pi * rng.uniform())
            if all(abs(z - w) >= separation for w, _ in pairs):
                pairs.append((z, m))
                total += m
                break
        if rng.uniform() < 0.3:
            break
    if all(m == 1 for _, m in pairs):
        z, _ = pairs[0]
        pairs[0] = (z, 2)
        if sum(m for _, m in pairs) > max_degree:
            pairs.pop()
    return pairs


def assert_coefficient_round_trip(expected):
    # 只保留系数，强制走 Aberth + 聚类
    coeffs = expand_from_roots(1, RootMultiset.from_pairs(expected)).coeffs
    p = Polynomial.from_coeffs(coeffs)
    assert p.roots is None
    radius = Tolerances().cluster * max(1.0, max(abs(z) for z, _ in expected))
    assert_roots(find_roots(p), expected, tol=radius)


class TestExpandFromRoots:
    def test_empty_product_is_constant(self):
        p = expand_from_roots(1, RootMultiset())
        assert p.coeffs == (1 + 0j,)
        assert p.degree == 0

    def test_scaled_cube_roots(self):
        roots = RootMultiset.from_points(unit_roots(3, radius=1 / 3))
        p = expand_from_roots(1, roots)
        assert_coeffs(p, [1, 0, 0, -1 / 27])
        # 首项 3：与 3z³ − 1 只差 λ 中吸收的因子
        assert_coeffs(expand_from_roots(3, roots), [3, 0, 0, -1 / 9])

    def test_double_root(self):
        p = expand_from_roots(2, RootMultiset(((1, 2),)))
        assert_coeffs(p, [2, -4, 2])

    def test_zero_leading_rejected(self):
        with pytest.raises(InvalidInputError):
            expand_from_roots(0, RootMultiset(((1, 1),)))

    def test_roots_are_cached(self):
        roots = RootMultiset(((0.5j, 3), (-2, 1)))
        p = expand_from_roots(1, roots)
        assert find_roots(p) is roots


class TestFindRoots:
    def test_quadratic(self):
        assert_roots(find_roots(Polynomial.from_coeffs([1, 0, 1])), [(1j, 1), (-1j, 1)])

    def test_cube_roots_on_circle(self):
        found = find_roots(Polynomial.from_coeffs([3, 0, 0, -1]))
        radius = 3 ** (-1 / 3)
        assert_roots(found, [(z, 1) for z in unit_roots(3, radius)])

    def test_monomial_is_exact(self):
        found = find_roots(Polynomial.from_coeffs([5, 0, 0, 0]))
        assert found.roots == ((0j, 3),)

    def test_clustered_multiplicities(self):
        # (z − 1)³(z + 2)²
        coeffs = np.polymul(np.poly([1, 1, 1]), np.poly([-2, -2]))
        found = find_roots(Polynomial.from_coeffs(coeffs))
        assert_roots(found, [(1, 3), (-2, 2)], tol=1e-7)

    def test_mixed_zero_and_core_roots(self):
        # z⁴(z³ − 1)
        found = find_roots(Polynomial.from_coeffs([1, 0, 0, -1, 0, 0, 0, 0]))
        assert_roots(found, [(0, 4)] + [(z, 1) for z in unit_roots(3)])

    def test_random_round_trip(self, rng):
        for _ in range(20):
            n = int(rng.integers(1, 8))
            expected = [complex(rng.normal(), rng.normal()) for _ in range(n)]
            p = Polynomial.from_coeffs(np.poly(expected))
            assert_roots(find_roots(p), [(z, 1) for z in expected], tol=1e-7)

    def test_random_multiple_roots_from_coefficients(self, rng):
        for _ in range(20):
            expected = random_multiset(rng)
            assert_coefficient_round_trip(expected)

    @pytest.mark.slow
    def test_random_multiple_roots_suite(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            assert_coefficient_round_trip(random_multiset(rng))

    def test_constant_has_no_roots(self):
        assert find_roots(Polynomial.constant(4)).is_empty

    def test_zero_polynomial_rejected(self):
        with pytest.raises(InvalidInputError):
            find_roots(Polynomial.zero())

    def test_non_convergence_carries_partial(self, rng):
        p = Polynomial.from_coeffs(random_poly_coeffs(rng, 6))
        with pytest.raises(NumericFailureError) as info:
            find_roots(p, Tolerances(max_iter=1))
        assert len(info.value.partial) == 6


class TestAffineSubstitute:
    def test_identity(self):
        p = Polynomial.from_coeffs([1, 0])
        assert_coeffs(affine_substitute(p, AffineMap.identity()), [1, 0])

    def test_monomial_scaling(self):
        p = Polynomial.from_coeffs([1, 0, 0, 0])
        assert_coeffs(affine_substitute(p, AffineMap(2, 0)), [8, 0, 0, 0])

    def test_translation(self):
        p = Polynomial.from_coeffs([1, -2, 1])
        assert_coeffs(affine_substitute(p, AffineMap(1, 1)), [1, 0, 0])

    def test_cached_roots_follow_the_map(self):
        p = expand_from_roots(1, RootMultiset(((2, 1), (1j, 2))))
        T = AffineMap(2j, 1)
        q = affine_substitute(p, T)
        for z, _ in q.roots.roots:
            assert abs(evaluate_poly(p, T(z))) < 1e-12

    def test_matches_pointwise(self, rng):
        p = Polynomial.from_coeffs(random_poly_coeffs(rng, 5))
        T = AffineMap(0.7 - 0.4j, 1.5 + 0.2j)
        q = affine_substitute(p, T)
        for w in [0.3, -1j, 0.5 + 0.5j]:
            assert abs(evaluate_poly(q, w) - evaluate_poly(p, T(w))) < 1e-10 * max(1.0, abs(evaluate_poly(q, w)))


class TestEvaluate:
    def test_root_of_quadratic(self):
        assert evaluate_poly(Polynomial.from_coeffs([1, 0, 1]), 1j) == 0

    def test_real_cube_root(self):
        assert abs(evaluate_poly(Polynomial.from_coeffs([3, 0, 0, -1]), 3 ** (-1 / 3))) < 1e-12

    def test_identity_polynomial(self):
        assert evaluate_poly(Polynomial.from_coeffs([1, 0]), 5 + 2j) == 5 + 2j


class TestArithmetic:
    def test_mul_keeps_root_cache(self):
        p = expand_from_roots(1, RootMultiset(((1, 1),)))
        q = expand_from_roots(1, RootMultiset(((1, 1), (-1, 1))))
        pq = poly_mul(p, q)
        assert pq.roots.roots == ((-1 + 0j, 1), (1 + 0j, 2))
        assert_coeffs(pq, [1, -1, -1, 1])

    def test_add_cancels_leading(self):
        s = poly_add(Polynomial.from_coeffs([1, 2]), Polynomial.from_coeffs([-1, 3]))
        assert_coeffs(s, [5])

    def test_leading_zero_rejected(self):
        with pytest.raises(InvalidInputError):
            Polynomial((0, 1))

    def test_nonfinite_coefficient_rejected(self):
        with pytest.raises(InvalidInputError):
            Polynomial.from_coeffs([1, math.inf])

    def test_derivative(self):
        assert_coeffs(Polynomial.from_coeffs([1, 0, 0, -1]).derivative(), [3, 0, 0])

    def test_monic(self):
        p = Polynomial.from_coeffs([2j, 4]).monic()
        assert_coeffs(p, [1, cmath.exp(-1j * math.pi / 2) * 2])
