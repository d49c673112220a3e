import math

import numpy as np
import pytest

from src.errors import ParseError, SpecRejectionError
from src.field_model import fields_close
from src.field_model.enums import CenterKind, IsotropyKind
from src.realize import Orbit, SymmetrySpec, parse_spec, realize_simple, realize_symmetric, sample_spec, spec_problems
from src.symmetry_analyzer import isotropy_group

from .conftest import coeff_field, field


def pole_spec(k, nu, **kwargs):
    return SymmetrySpec(k=k, center_kind=CenterKind.POLE, center_multiplicity=nu, **kwargs)


class TestRealizeSymmetric:
    def test_neg_exp_cube(self, z3_example):
        X = realize_symmetric(pole_spec(3, 2, exp_center_multiplicity=3, lam=-1 / 3))
        assert X.signature == (0, 2, 3)
        assert fields_close(X, z3_example)

    def test_exp_square_with_pole_orbit(self, z2_example):
        spec = pole_spec(2, 1, pole_orbits=(Orbit(1, math.pi / 2),), exp_center_multiplicity=2)
        assert spec.signature() == (0, 3, 2)
        assert fields_close(realize_symmetric(spec), z2_example)

    def test_zero_center_needs_divisibility(self):
        spec = SymmetrySpec(k=3, center_kind=CenterKind.ZERO, center_multiplicity=2)
        with pytest.raises(SpecRejectionError, match=r"k \| \(nu-1\)"):
            realize_symmetric(spec)

    def test_pole_center_needs_divisibility(self):
        problems = spec_problems(pole_spec(3, 3))
        assert any('k | (nu+1)' in p for p in problems)
        assert any('divides 3' in p for p in problems)

    def test_exp_center_multiplicity(self):
        problems = spec_problems(pole_spec(3, 2, exp_center_multiplicity=2))
        assert any('k | mu' in p for p in problems)

    def test_order_too_small(self):
        assert spec_problems(pole_spec(1, 1)) == ["order k must be >= 2 (got 1)"]

    def test_bad_orbit(self):
        problems = spec_problems(pole_spec(2, 1, zero_orbits=(Orbit(0, 0),), pole_orbits=(Orbit(1, 0, 0),)))
        assert "zero orbit 0: radius must be positive" in problems
        assert "pole orbit 0: multiplicity must be >= 1" in problems

    def test_zero_c0_rejected(self):
        spec = pole_spec(2, 1, exp_center_multiplicity=2, c0=0j)
        with pytest.raises(SpecRejectionError) as info:
            realize_symmetric(spec)
        assert "c0 must be nonzero when d >= 1" in info.value.details['violations']

    def test_colliding_orbits(self):
        spec = SymmetrySpec(
            k=2,
            center_kind=CenterKind.ZERO,
            center_multiplicity=1,
            zero_orbits=(Orbit(1, 0),),
            pole_orbits=(Orbit(1, 0),),
        )
        assert not spec_problems(spec)
        with pytest.raises(SpecRejectionError, match='disjoint'):
            realize_symmetric(spec)

    def test_off_origin_center(self):
        spec = SymmetrySpec(k=3, center_kind=CenterKind.ZERO, center_multiplicity=4, C=1 + 1j,
                            zero_orbits=(Orbit(1, 0),))
        X = realize_symmetric(spec)
        result = isotropy_group(X)
        assert result.kind == IsotropyKind.CYCLIC and result.k == 3
        assert abs(result.center - (1 + 1j)) < 1e-9

    def test_to_dict(self):
        doc = pole_spec(3, 2, exp_center_multiplicity=3, lam=-1 / 3).to_dict()
        assert doc['center'] == {'kind': 'pole', 'multiplicity': 2}
        assert doc['lambda'] == [-1 / 3, 0.0]
        assert doc['zero_orbits'] == []


class TestRealizeSimple:
    def test_single_pole_orbit(self):
        X = realize_simple(pole_spec(2, 1, pole_orbits=(Orbit(1, 0),)))
        assert fields_close(X, coeff_field(1, P=[1, 0, -1, 0]))

    def test_two_pole_orbits(self):
        X = realize_simple(pole_spec(2, 1, pole_orbits=(Orbit(1, 0), Orbit(2, math.pi / 2))))
        assert fields_close(X, field(1, poles=[0, 1, -1, 2j, -2j]))

    def test_pole_center_forces_order_two(self):
        with pytest.raises(SpecRejectionError, match='k = 2'):
            realize_simple(pole_spec(3, 1))

    def test_multiple_orbit_rejected(self):
        with pytest.raises(SpecRejectionError, match='multiplicity 2'):
            realize_simple(pole_spec(2, 1, pole_orbits=(Orbit(1, 0, 2),)))

    def test_overlapping_orbits(self):
        spec = pole_spec(2, 1, pole_orbits=(Orbit(1, 0), Orbit(1, math.pi)))
        with pytest.raises(SpecRejectionError, match='overlap'):
            realize_simple(spec)


class TestParseSpec:
    def test_document(self):
        spec = parse_spec({
            'k': 2,
            'center': {'kind': 'pole', 'multiplicity': 1},
            'pole_orbits': [[1, 1.5707963267948966]],
            'exp_center_multiplicity': 2,
        })
        assert spec.k == 2
        assert spec.center_kind == CenterKind.POLE
        assert spec.pole_orbits == (Orbit(1.0, math.pi / 2, 1),)
        assert spec.lam == 1 and spec.c0 == 1 and spec.C == 0

    def test_center_label_case(self):
        assert parse_spec({'k': 3, 'center': {'kind': ' Zero ', 'multiplicity': 4}}).center_kind == CenterKind.ZERO

    @pytest.mark.parametrize('doc, location', [
        ([], '$'),
        ({'k': 'three', 'center': {'kind': 'pole'}}, '$.k'),
        ({'k': 3}, '$.center'),
        ({'k': 3, 'center': {'kind': 'saddle'}}, '$.center.kind'),
        ({'k': 3, 'center': {'kind': 'pole', 'multiplicity': 1.5}}, '$.center.multiplicity'),
        ({'k': 3, 'center': {'kind': 'pole'}, 'zero_orbits': [[1]]}, '$.zero_orbits[0]'),
        ({'k': 3, 'center': {'kind': 'pole'}, 'pole_orbits': [[1, 0, 1.5]]}, '$.pole_orbits[0]'),
    ])
    def test_errors(self, doc, location):
        with pytest.raises(ParseError) as info:
            parse_spec(doc)
        assert info.value.location == location


class TestRoundTrip:
    def check(self, spec):
        X = realize_symmetric(spec)
        assert X.signature == spec.signature()
        result = isotropy_group(X)
        if result.kind == IsotropyKind.CONTINUOUS:
            return
        assert result.kind == IsotropyKind.CYCLIC
        assert result.k % spec.k == 0
        assert abs(result.center - spec.C) < 1e-8

    def test_sampled_specs(self, rng):
        for _ in range(20):
            self.check(sample_spec(rng))

    @pytest.mark.slow
    def test_sampled_specs_suite(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            self.check(sample_spec(rng))

    def test_sample_respects_order(self, rng):
        spec = sample_spec(rng, k=5)
        assert spec.k == 5
        assert not spec_problems(spec)
