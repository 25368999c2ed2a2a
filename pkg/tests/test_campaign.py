import io
import json
from pathlib import Path
from typing import Dict, Union

import pytest

from algebra.closedform import FormulaId, FormulaParams, Variant
from algebra.steenrod import MilnorIndex
from analysis.campaign import (ERRATUM, MATCH, MISMATCH, CampaignOutcome, CaseGroup, CaseResult, enumerate_cases,
                               closure_indices, is_failure, oracle_value, run_campaign, run_structure_checks,
                               verify_case, verify_group)
from analysis.config import CampaignConfig, ConfigError, load_config
from analysis.loaders_dumpers import load_json_report, render_text_report


def campaign(tmp_path: Path, **overrides: Union[None, int, str, bool]) -> CampaignConfig:
    config = load_config('config.yaml', run_id='test', artifact_folder=str(tmp_path))
    return CampaignConfig.from_config(config, progress=False, **overrides)


@pytest.fixture(scope='module')
def full_sweep(tmp_path_factory: pytest.TempPathFactory) -> CampaignOutcome:
    tmp_path = tmp_path_factory.mktemp('sweep')
    return run_campaign(campaign(tmp_path, json_output_path=str(tmp_path / 'report.json')))


def test_full_sweep_at_three(full_sweep: CampaignOutcome) -> None:
    report = full_sweep.reports[3]
    assert full_sweep.exit_code == 0
    assert report['summary']['mismatch'] == 0
    assert report['summary']['erratum'] >= 2
    assert {'Thm3.1', 'Thm4.2'} <= set(report['errata'])

    statuses = {(case['formula'], case['variant'], json.dumps(case['params'], sort_keys=True)): case['status']
                for case in report['cases']}
    assert statuses[('Thm4.2', 'printed', '{"i": 3, "s": 0}')] == ERRATUM
    assert statuses[('Thm4.2', 'corrected', '{"i": 3, "s": 0}')] == MATCH
    assert statuses[('Thm3.1', 'printed', '{"i": 3, "s": 1}')] == ERRATUM
    assert statuses[('Thm3.1', 'corrected', '{"i": 1, "s": 1}')] == MATCH
    assert statuses[('Prop2.2', 'printed', '{"u": 0, "v": 2}')] == MATCH
    assert all(case['status'] == MATCH for case in report['cases'] if case['variant'] == 'corrected')


def test_boundary_reading(full_sweep: CampaignOutcome) -> None:
    boundary = full_sweep.reports[3]['boundary']
    assert boundary['empty']['consistent']
    assert not boundary['literal']['consistent']
    assert boundary['literal']['counterexample_i'] == 3


def test_text_report_lists_errata(full_sweep: CampaignOutcome) -> None:
    text = render_text_report(full_sweep.reports[3])
    assert 'Confirmed errata:' in text
    assert '  Thm4.2 at ' in text
    assert 'consistent under empty reading' in text


def test_single_group() -> None:
    group = CaseGroup(FormulaId.THM42, 3, FormulaParams(s=0, i=3), (Variant.PRINTED, Variant.CORRECTED))
    printed, corrected = verify_group(group)
    assert (printed.status, printed.rhs, printed.lhs, printed.audit) == (ERRATUM, '2*Q0^2*Q1', '2*Q0*Q1', 'fail')
    assert (corrected.status, corrected.rhs, corrected.audit) == (MATCH, '2*Q0*Q1', 'pass')

    prop = verify_group(CaseGroup(FormulaId.PROP22, 3, FormulaParams(u=0, v=2), (Variant.PRINTED,)))[0]
    assert prop.status == MATCH
    assert prop.lhs == prop.rhs
    assert prop.audit == 'n/a'


def test_single_case() -> None:
    case = verify_case(FormulaId.THM31, Variant.CORRECTED, 3, FormulaParams(s=1, i=1))
    assert (case.status, case.lhs, case.rhs) == (MATCH, 'Q0', 'Q0')

    printed = verify_case(FormulaId.THM42, Variant.PRINTED, 3, FormulaParams(s=0, i=3))
    assert printed.status == ERRATUM
    assert printed.variant == Variant.PRINTED


def test_tables_vanish_off_their_listed_indices() -> None:
    for target in ('L2', 'L20', 'L21'):
        listed = {'L2': {0, 3, 4}, 'L20': {0, 9, 12}, 'L21': {0, 1, 9, 10}}[target]
        for i in range(13):
            value = oracle_value(FormulaId.COR26, 3, FormulaParams(target=target, i=i))
            assert value.is_zero() == (i not in listed)


def test_max_i_zero(tmp_path: Path) -> None:
    cfg = campaign(tmp_path, max_i=0, theorems='Thm3.1,Thm3.3,Thm4.2,Thm4.4,StQ,Cor2.4', max_s=2, max_uv=2)
    groups = enumerate_cases(cfg, 3)
    assert all(group.params.i == 0 for group in groups if group.formula != FormulaId.COR24)

    outcome = run_campaign(cfg)
    assert outcome.exit_code == 0
    assert outcome.reports[3]['summary']['mismatch'] == 0


def test_determinism(tmp_path: Path) -> None:
    cfg = campaign(tmp_path, theorems='Thm3.1,Thm4.3', max_i=5, max_s=2, json_output_path=str(tmp_path / 'r.json'))
    reports = []
    for _ in range(2):
        run_campaign(cfg)
        report = load_json_report(str(tmp_path / 'r.json'))
        del report['generated_at']
        reports.append(report)
    assert reports[0] == reports[1]


def test_parallel_matches_serial(tmp_path: Path) -> None:
    serial = run_campaign(campaign(tmp_path, theorems='Thm4.4', max_i=4, max_s=2, format='json',
                                   json_output_path=str(tmp_path / 'serial.json')))
    parallel = run_campaign(campaign(tmp_path, theorems='Thm4.4', max_i=4, max_s=2, workers=2,
                                     json_output_path=str(tmp_path / 'parallel.json')))
    assert serial.reports[3]['cases'] == parallel.reports[3]['cases']


def test_reports_per_prime(tmp_path: Path) -> None:
    cfg = campaign(tmp_path, primes='3,5', theorems='StQ', max_i=1, max_s=1,
                   json_output_path=str(tmp_path / 'report.json'), text_output_path=str(tmp_path / 'report.txt'))
    run_campaign(cfg)
    for p in (3, 5):
        assert load_json_report(str(tmp_path / f'report.p{p}.json'))['prime'] == p
        assert (tmp_path / f'report.p{p}.txt').exists()


def test_unknown_theorem(tmp_path: Path) -> None:
    with pytest.raises(ConfigError):
        campaign(tmp_path, theorems='Thm5.1')


def test_failures_exclude_printed_rows_of_corrected_formulas() -> None:
    def case(formula: FormulaId, variant: Variant, status: str) -> CaseResult:
        return CaseResult(3, formula, variant, FormulaParams(i=0), status, '0', '0')

    assert not is_failure(case(FormulaId.THM31, Variant.PRINTED, MISMATCH))
    assert is_failure(case(FormulaId.THM31, Variant.CORRECTED, MISMATCH))
    assert is_failure(case(FormulaId.THM33, Variant.PRINTED, MISMATCH))
    assert not is_failure(case(FormulaId.THM33, Variant.PRINTED, MATCH))


def test_structure_checks() -> None:
    counts: Dict[str, int] = {'beta^2 = 0': 10, 'Cartan formula, two ways': 10, 'GL2-equivariance of the action': 5,
                              'Normal form round trip': 10}
    checks = run_structure_checks(3, seed=7, max_uv=4, max_s=2, counts=counts)
    failed = [check.name for check in checks if not check.passed]
    assert failed == []
    assert len(checks) >= 14
    assert 'R0 R1 decomposes as -R01 Q0' in {check.name for check in checks}


def test_closure_sweep_covers_every_power_and_milnor_primitive() -> None:
    indices = closure_indices(3, max_s=2)
    assert len(indices) == 13 * 4
    assert MilnorIndex.power(3) in indices
    assert MilnorIndex((2,), (12,)) in indices
    assert MilnorIndex((0,), ()) in indices


INVARIANT_THEOREMS = 'Thm3.1,Lem3.2,Thm3.3,Thm3.4-R21,Thm3.4-R201,Thm4.2,Thm4.3,Thm4.4,StQ'


def test_errata_confirmed_at_five(tmp_path: Path) -> None:
    outcome = run_campaign(campaign(tmp_path, primes='5', theorems=INVARIANT_THEOREMS, format='json'), io.StringIO())
    report = outcome.reports[5]
    assert outcome.exit_code == 0
    assert report['summary']['mismatch'] == 0
    assert set(report['errata']) == {'Thm3.1', 'Thm3.4-R21', 'Thm4.2', 'Thm4.3'}
    assert all(case['status'] == MATCH for case in report['cases'] if case['variant'] == 'corrected')


def test_determinant_expansion_at_five(tmp_path: Path) -> None:
    outcome = run_campaign(campaign(tmp_path, primes='5', theorems='Prop2.2', format='json'), io.StringIO())
    report = outcome.reports[5]
    assert outcome.exit_code == 0
    assert report['summary']['match'] == 21
    assert report['summary']['mismatch'] == 0


def test_sampled_sweep_at_seven(tmp_path: Path) -> None:
    cfg = campaign(tmp_path, primes='7', theorems=INVARIANT_THEOREMS, format='json')
    assert cfg.s_values(7) == [0, 1, 2, 4]
    assert cfg.i_values(7) == [0, 1, 6, 7, 8, 14, 48, 49, 56]

    outcome = run_campaign(cfg, io.StringIO())
    assert outcome.exit_code == 0
    assert outcome.reports[7]['summary']['mismatch'] == 0
    assert {case['params']['i'] for case in outcome.reports[7]['cases']} <= set(cfg.i_values(7))


def test_json_on_stdout_for_several_primes(tmp_path: Path) -> None:
    stream = io.StringIO()
    run_campaign(campaign(tmp_path, primes='3,5', theorems='StQ', max_i=1, max_s=1, format='json'), stream)
    reports = json.loads(stream.getvalue())
    assert [report['prime'] for report in reports] == [3, 5]

    stream = io.StringIO()
    run_campaign(campaign(tmp_path, primes='3', theorems='StQ', max_i=1, max_s=1, format='json'), stream)
    assert json.loads(stream.getvalue())['prime'] == 3
