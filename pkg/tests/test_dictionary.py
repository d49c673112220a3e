import cmath
import math

import numpy as np
import pytest

from src.dictionary import (
    PathSpec,
    distinguished_parameter,
    flat_length,
    is_single_valued,
    one_form,
    psi_graph,
    pullback_one_form,
    quadratic_differential,
    residues,
)
from src.errors import NumericFailureError, PathRejectionError, PoleEvaluationError
from src.field_model import evaluate_field
from src.quotient import quotient_field

from .conftest import coeff_field, field, random_field, random_points, rel_err


class TestOneForm:
    def test_exponential(self):
        assert abs(one_form(field(1, exp_roots=[0]), 0) - 1) < 1e-15

    def test_linear(self):
        lam = 2 - 1j
        assert abs(one_form(field(lam, zeros=[0]), 2) - 1 / (2 * lam)) < 1e-15

    def test_quadratic_differential(self):
        lam = 0.5 + 2j
        assert abs(quadratic_differential(field(lam, zeros=[0]), 1) - 1 / lam ** 2) < 1e-14

    def test_zero_of_field_is_a_pole(self, e7_example):
        with pytest.raises(PoleEvaluationError):
            one_form(e7_example, 1)

    def test_pole_of_field_is_a_zero(self, z2_example):
        assert one_form(z2_example, 1j) == 0

    def test_pairing_is_one(self, rng):
        for _ in range(20):
            X = random_field(rng)
            for z in random_points(rng, 20, 2.0):
                assert abs(one_form(X, z) * evaluate_field(X, z) - 1) < 1e-9

    @pytest.mark.slow
    def test_pairing_is_one_suite(self, rng):
        for _ in range(100):
            X = random_field(rng)
            for z in random_points(rng, 20, 2.0):
                assert abs(one_form(X, z) * evaluate_field(X, z) - 1) < 1e-9

    def test_pullback_along_quotient(self, z3_example, e7_example, rng):
        for X in (z3_example, e7_example):
            result = quotient_field(X)
            for z in random_points(rng, 10, 0.8):
                if abs(z) < 0.2:
                    continue
                expected = one_form(X, z)
                assert rel_err(pullback_one_form(result.field, result.k, result.center, z), expected) < 1e-9


class TestResidues:
    def test_identity(self):
        report = residues(field(1, zeros=[0]))
        assert len(report) == 1
        assert abs(report.residue_at(0) - 1) < 1e-10
        assert report.entries[0].order == 1

    def test_linear(self):
        lam = 2 + 1j
        assert abs(residues(field(lam, zeros=[0])).residue_at(0) - 1 / lam) < 1e-10

    def test_double_zero(self):
        report = residues(field(1, zeros=[(0, 2)]))
        assert abs(report.residue_at(0)) < 1e-10
        assert report.entries[0].order == 2

    def test_e7_residue(self, e7_example):
        report = residues(e7_example)
        assert len(report) == 4
        # ω = 1/(z⁴(z³−1))：z = 1 处为 1/3，z = 0 处为 −1，总和为 0
        assert abs(report.residue_at(1) - 1 / 3) < 1e-10
        assert abs(report.residue_at(0) + 1) < 1e-10
        assert abs(sum(e.residue for e in report)) < 1e-9

    def test_radius_is_bounded(self):
        report = residues(field(1, zeros=[0, 0.4]))
        assert all(e.radius == pytest.approx(0.2) for e in report)
        assert abs(report.residue_at(0) + 1 / 0.4) < 1e-9

    def test_missing_location(self):
        assert residues(field(1, zeros=[0])).residue_at(5) is None

    def test_single_valued(self, e7_example, z2_example):
        assert is_single_valued(field(1, zeros=[(0, 2)]))
        assert not is_single_valued(e7_example)
        assert is_single_valued(z2_example)

    def test_to_dict(self):
        doc = residues(field(1, zeros=[0])).to_dict()
        assert doc['residues'][0]['location'] == [0.0, 0.0]
        assert doc['residues'][0]['order'] == 1


class TestPsi:
    def test_exponential(self):
        value = distinguished_parameter(field(1, exp_roots=[0]), PathSpec.segment(0, 1))
        assert abs(value - (1 - math.exp(-1))) < 1e-10

    def test_translation_field(self):
        value = distinguished_parameter(field(1), PathSpec.segment(0, 1 + 2j))
        assert abs(value - (1 + 2j)) < 1e-10

    def test_e7_closed_form(self, e7_example):
        def F(x):
            return 1 / (3 * x ** 3) + math.log(x ** 3 - 1) / 3 - math.log(x)

        value = distinguished_parameter(e7_example, PathSpec.segment(2, 3))
        assert abs(value - (F(3) - F(2))) < 1e-8

    def test_polyline_adds_up(self):
        X = coeff_field(1, Q=[1, 0, 1])
        direct = distinguished_parameter(X, PathSpec.segment(0, 1 + 1j))
        bent = distinguished_parameter(X, PathSpec((0, 1, 1 + 1j)))
        # 1/(1+z²) 在路径围成的三角形内没有极点
        assert abs(direct - bent) < 1e-9
        assert abs(direct - cmath.atan(1 + 1j)) < 1e-9

    def test_path_through_pole(self):
        with pytest.raises(PathRejectionError):
            distinguished_parameter(field(1, zeros=[0.5]), PathSpec.segment(0, 1))

    def test_path_grazing_pole(self):
        path = PathSpec.segment(1e-9j, 1 + 1e-9j)
        with pytest.raises(PathRejectionError) as info:
            distinguished_parameter(field(1, zeros=[0.5]), path)
        assert info.value.code == 'path_rejected'
        assert info.value.details['distance'] == pytest.approx(1e-9)

    def test_quadrature_failure_near_pole(self, monkeypatch):
        def blows_up(fn, epsabs, tol):
            if max(abs(fn(t)) for t in np.linspace(0, 1, 101)) > 1e6:
                raise NumericFailureError("quadrature did not converge")
            return 0.0

        monkeypatch.setattr('src.dictionary._quad', blows_up)
        with pytest.raises(PathRejectionError):
            distinguished_parameter(field(1, zeros=[(0.5, 2)]), PathSpec.segment(1e-5j, 1 + 1e-5j))

    def test_quadrature_failure_away_from_poles(self, monkeypatch):
        def failing(fn, epsabs, tol):
            raise NumericFailureError("quadrature did not converge")

        monkeypatch.setattr('src.dictionary._quad', failing)
        with pytest.raises(NumericFailureError) as info:
            distinguished_parameter(field(1, zeros=[(0.5, 2)]), PathSpec.segment(1j, 1 + 1j))
        assert info.value.code == 'numeric_failure'

    def test_pole_of_field_is_harmless(self):
        value = distinguished_parameter(field(1, poles=[0.5]), PathSpec.segment(0, 1))
        # ∫₀¹ (z − 1/2) dz = 0
        assert abs(value) < 1e-10

    @pytest.mark.parametrize('vertices, refinement', [((0,), 0.25), ((0, 1), 0), ((0, 1), -1)])
    def test_bad_path(self, vertices, refinement):
        with pytest.raises(PathRejectionError):
            PathSpec(vertices, refinement)

    def test_pieces(self):
        path = PathSpec((0, 1, 1 + 1j), 0.3)
        pieces = path.pieces()
        assert len(pieces) == 8
        assert pieces[0][0] == 0 and pieces[-1][1] == 1 + 1j
        assert path.length() == pytest.approx(2)

    def test_graph_skips_poles(self):
        X = field(1, zeros=[0.5])
        samples = psi_graph(X, 0, [0.25, 1, 0, -1])
        assert [s.z for s in samples] == [0.25, 0, -1]
        assert abs(samples[0].psi - math.log(0.5)) < 1e-9
        assert samples[1].psi == 0
        assert abs(samples[2].psi - math.log(3)) < 1e-9
        assert samples[0].to_list()[0] == [0.25, 0.0]


class TestLength:
    @pytest.mark.parametrize('lam, expected', [(1, 1), (2, 0.5), (1j, 1)])
    def test_constant_fields(self, lam, expected):
        assert flat_length(field(lam), PathSpec.segment(0, 1)) == pytest.approx(expected, abs=1e-10)

    def test_exponential(self):
        length = flat_length(field(1, exp_roots=[0]), PathSpec.segment(0, 1))
        assert length == pytest.approx(1 - math.exp(-1), abs=1e-10)

    def test_length_is_direction_free(self):
        X = field(1, exp_roots=[0])
        forward = flat_length(X, PathSpec.segment(0, 1j))
        backward = flat_length(X, PathSpec.segment(1j, 0))
        assert forward == pytest.approx(1, abs=1e-10)
        assert backward == pytest.approx(forward, abs=1e-10)

    def test_length_through_pole(self):
        with pytest.raises(PathRejectionError):
            flat_length(field(1, zeros=[0]), PathSpec.segment(-1, 1))
