import json

import pytest

from algebra.dickson import generators
from algebra.errors import NotHomogeneous
from algebra.steenrod import MilnorIndex
from algebra.superpoly import SuperPoly
from analysis import cli
from analysis.cli import main


def test_apply_bockstein_to_mui_invariant(capsys: pytest.CaptureFixture) -> None:
    assert main(['apply', '--prime', '3', '--S', '0', '--R', '', '--target', 'R0']) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines == [str(generators(3).Q0), 'Q0']


def test_apply_identity(capsys: pytest.CaptureFixture) -> None:
    assert main(['apply', '--prime', '3', '--R', '0', '--target', 'Q1']) == 0
    assert capsys.readouterr().out.splitlines()[-1] == 'Q1'


def test_apply_to_a_polynomial(capsys: pytest.CaptureFixture) -> None:
    assert main(['apply', '--prime', '3', '--R', '1', '--target', '1*y1']) == 0
    assert capsys.readouterr().out == '1*y1^3\n'


def test_apply_input_errors() -> None:
    assert main(['apply', '--prime', '3', '--target', 'z9']) == 2
    assert main(['apply', '--prime', '4', '--target', 'Q0']) == 2
    assert main(['apply', '--prime', '3', '--S', '1,0', '--target', 'Q0']) == 2
    assert main(['apply', '--prime', '3', '--R', 'a', '--target', 'Q0']) == 2


def test_internal_errors_are_not_usage_errors(monkeypatch: pytest.MonkeyPatch) -> None:
    def broken(idx: MilnorIndex, f: SuperPoly) -> SuperPoly:
        raise NotHomogeneous('mixed bidegrees')

    monkeypatch.setattr(cli, 'st_apply', broken)
    with pytest.raises(NotHomogeneous):
        main(['apply', '--prime', '3', '--target', 'Q0'])


def test_gens(capsys: pytest.CaptureFixture) -> None:
    assert main(['gens', '--prime', '3']) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 11
    assert lines[0] == 'L2 = 2*y1^3*y2^1 + 1*y1^1*y2^3'
    assert lines[5] == 'M201 = 1*x1*x2'


def test_verify(capsys: pytest.CaptureFixture) -> None:
    code = main(['verify', '--theorem', 'Thm3.1', '--max-i', '3', '--format', 'json', '--no-progress'])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report['prime'] == 3
    assert report['summary']['mismatch'] == 0
    assert report['summary']['erratum'] >= 1
    assert set(report['cases'][0]) >= {'formula', 'variant', 'params', 'status', 'lhs', 'rhs'}


def test_verify_configuration_errors() -> None:
    assert main(['verify', '--theorem', 'Bogus', '--no-progress']) == 2
    assert main(['verify', '-c', 'does-not-exist.yaml']) == 2
    assert main(['verify', '--prime', '9', '--no-progress']) == 2


def test_usage_errors() -> None:
    with pytest.raises(SystemExit) as error:
        main(['transmogrify'])
    assert error.value.code == 2
