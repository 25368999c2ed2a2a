from pathlib import Path

from analysis.loaders_dumpers import dump_json_report, load_json_report, render_text_report, report_path_for_prime

REPORT = {
    'prime': 3,
    'generated_at': '2024-01-01T00:00:00',
    'cases': [
        {'formula': 'Thm3.1', 'variant': 'corrected', 'params': {'i': 1, 's': 1}, 'status': 'match', 'lhs': 'Q0',
         'rhs': 'Q0', 'audit': 'pass'},
        {'formula': 'Thm3.1', 'variant': 'printed', 'params': {'i': 3, 's': 1}, 'status': 'erratum-confirmed',
         'lhs': '2*Q1^2', 'rhs': '0', 'audit': 'n/a'},
    ],
    'summary': {'match': 1, 'mismatch': 0, 'erratum': 1, 'skipped': 0},
    'errata': {
        'Thm3.1': {'formula': 'Thm3.1', 'variant': 'printed', 'params': {'i': 3, 's': 1}, 'status': 'erratum-confirmed',
                   'lhs': '2*Q1^2', 'rhs': '0', 'audit': 'n/a'},
    },
    'boundary': None,
}


def test_report_paths() -> None:
    assert report_path_for_prime('out/report.json', 5, multiple=False) == 'out/report.json'
    assert report_path_for_prime('out/report.json', 5, multiple=True) == 'out/report.p5.json'
    assert report_path_for_prime('report', 3, multiple=True) == 'report.p3'


def test_json_dump_and_load(tmp_path: Path) -> None:
    path = str(tmp_path / 'nested' / 'report.json')
    dump_json_report(REPORT, path)
    assert load_json_report(path) == REPORT


def test_text_rendering() -> None:
    text = render_text_report(REPORT)
    lines = text.splitlines()
    assert lines[0] == 'Verification report for p=3'
    assert lines[1].startswith('  [erratum-confirmed] Thm3.1 (printed) i=3, s=1')
    assert 'Summary: match=1, mismatch=0, erratum=1, skipped=0' in lines
    assert '  Thm3.1 at i=3, s=1: printed 0, oracle 2*Q1^2' in lines
    assert not any(line.startswith('Boundary') for line in lines)
