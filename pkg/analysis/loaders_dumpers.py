"""
Reading and writing verification reports
"""
import json
import logging
import os
from typing import List, Optional, TextIO, Union

# Type alias for a report: a nested dictionary ready for json.dumps
Report = dict


def report_path_for_prime(path: str, prime: int, multiple: bool) -> str:
    """
    Inserts '.p<prime>' before the extension when several primes write to one configured path

    :param path:        The configured output path
    :param prime:       The prime of this report
    :param multiple:    Whether more than one prime is being verified

    :return: The path to write this prime's report to
    """
    if not multiple:
        return path
    root, extension = os.path.splitext(path)
    return f'{root}.p{prime}{extension}'


def dumps_report(report: Union[Report, List[Report]]) -> str:
    return json.dumps(report, indent=2, sort_keys=False)


def dump_json_report(report: Report, path: str) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)

    with open(path, 'wt') as f:
        f.write(dumps_report(report))
        f.write('\n')

    logging.info(f'Wrote JSON report to {path}')


def load_json_report(path: str) -> Report:
    with open(path, 'rt') as f:
        report: Report = json.load(f)
    return report


def render_text_report(report: Report) -> str:
    """
    A human readable report: one line per case that did not plainly match, then the summary, the errata with one
    counterexample each and the boundary verdict
    """
    lines = [f"Verification report for p={report['prime']}"]

    cases = report.get('cases') or []
    for case in cases:
        if case['status'] == 'match':
            continue
        params = ', '.join(f'{key}={value}' for key, value in case['params'].items())
        line = f"  [{case['status']}] {case['formula']} ({case['variant']}) {params}: oracle {case['lhs']}, " \
               f"closed form {case['rhs']}"
        if case.get('diagnostic'):
            line += f" ({case['diagnostic']})"
        lines.append(line)

    summary = report.get('summary') or {}
    lines.append('Summary: ' + ', '.join(f'{key}={value}' for key, value in summary.items()))

    errata = report.get('errata') or {}
    if errata:
        lines.append('Confirmed errata:')
        for formula, case in errata.items():
            params = ', '.join(f'{key}={value}' for key, value in case['params'].items())
            lines.append(f"  {formula} at {params}: printed {case['rhs']}, oracle {case['lhs']}")

    boundary = report.get('boundary')
    if isinstance(boundary, dict):
        lines.append(f"Boundary s=2 of the general Thm4.2 line: {boundary['verdict']}")

    return '\n'.join(lines) + '\n'


def write_text_report(report: Report, path: Optional[str], stream: TextIO) -> None:
    """Writes the text report to a file, or to the given stream when no path is configured"""
    text = render_text_report(report)
    if path is None:
        stream.write(text)
        return

    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'wt') as f:
        f.write(text)
    logging.info(f'Wrote text report to {path}')
