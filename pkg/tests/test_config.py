import pytest

from src.config import Config, Tolerances, _env_float, _env_int, default_tolerances
from src.errors import ParseError
from src.field_model import parse_tolerances


class TestEnvironment:
    def test_float(self, monkeypatch):
        monkeypatch.setenv('ESSFIELD_TEST_VALUE', '2.5')
        assert _env_float('ESSFIELD_TEST_VALUE', 1.0) == 2.5

    def test_float_fallback(self, monkeypatch):
        monkeypatch.setenv('ESSFIELD_TEST_VALUE', 'abc')
        assert _env_float('ESSFIELD_TEST_VALUE', 1.0) == 1.0
        monkeypatch.setenv('ESSFIELD_TEST_VALUE', '  ')
        assert _env_float('ESSFIELD_TEST_VALUE', 1.0) == 1.0

    def test_int(self, monkeypatch):
        monkeypatch.setenv('ESSFIELD_TEST_VALUE', '17')
        assert _env_int('ESSFIELD_TEST_VALUE', 3) == 17
        monkeypatch.setenv('ESSFIELD_TEST_VALUE', '1.5')
        assert _env_int('ESSFIELD_TEST_VALUE', 3) == 3


class TestValidation:
    def test_defaults_are_valid(self, monkeypatch):
        monkeypatch.setattr(Config, 'TOLERANCE', 1e-7)
        monkeypatch.setattr(Config, 'EXP_OVERFLOW', 700.0)
        monkeypatch.setattr(Config, 'PORTRAIT_WORKERS', 4)
        monkeypatch.setattr(Config, 'ROOT_MAX_ITER', 200)
        monkeypatch.setattr(Config, 'QUAD_LIMIT', 200)
        for name in ('ROOT_TOL', 'CLUSTER_TOL', 'POLE_TOL', 'EQUIV_TOL', 'RESIDUE_TOL', 'QUAD_EPSABS'):
            monkeypatch.setattr(Config, name, 1e-8)
        assert Config.validate_config() == []

    def test_non_positive_tolerance(self, monkeypatch):
        monkeypatch.setattr(Config, 'POLE_TOL', 0.0)
        assert any('POLE_TOL' in issue for issue in Config.validate_config())

    def test_overflow_threshold(self, monkeypatch):
        monkeypatch.setattr(Config, 'EXP_OVERFLOW', 800.0)
        assert any('EXP_OVERFLOW' in issue for issue in Config.validate_config())

    def test_loose_symmetry_warning(self, monkeypatch):
        monkeypatch.setattr(Config, 'TOLERANCE', 1e-2)
        assert any('ESSFIELD_TOL' in issue for issue in Config.validate_config())

    def test_status(self, capsys):
        Config.print_config_status()
        out = capsys.readouterr().out
        assert 'ESSFIELD_TOL' in out


class TestTolerances:
    def test_from_config(self, monkeypatch):
        monkeypatch.setattr(Config, 'TOLERANCE', 1e-5)
        monkeypatch.setattr(Config, 'QUAD_LIMIT', 50)
        tol = default_tolerances()
        assert tol.symmetry == 1e-5
        assert tol.quad_limit == 50

    def test_overrides(self):
        tol = Tolerances().with_overrides({'symmetry': 1e-6, 'max_iter': 20.0})
        assert tol.symmetry == 1e-6
        assert tol.max_iter == 20 and isinstance(tol.max_iter, int)
        assert tol.root == Tolerances().root

    @pytest.mark.parametrize('overrides', [{'bogus': 1}, {'pole': 0}, {'equiv': -1e-3}, {'residue': 'x'}])
    def test_bad_overrides(self, overrides):
        with pytest.raises(ValueError):
            Tolerances().with_overrides(overrides)

    def test_frozen(self):
        with pytest.raises(AttributeError):
            Tolerances().symmetry = 1.0

    def test_document_overrides(self):
        tol = parse_tolerances({'lambda': [1, 0], 'tolerances': {'residue': 1e-6}})
        assert tol.residue == 1e-6

    @pytest.mark.parametrize('value', [[1e-6], {'residue': -1}, {'unknown': 1}])
    def test_document_errors(self, value):
        with pytest.raises(ParseError) as info:
            parse_tolerances({'lambda': [1, 0], 'tolerances': value})
        assert info.value.location == '$.tolerances'
