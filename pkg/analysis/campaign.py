"""
Verification campaigns: every closed formula is evaluated over a sweep of parameters and compared with the brute-force
action of the Steenrod algebra, followed by Dickson-Mui decomposition where the formula is stated in normal form.
"""
import dataclasses
import datetime
import itertools
import logging
import multiprocessing
import sys
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, NamedTuple, Optional, Sequence, TextIO, Tuple

import numpy as np
from tqdm import tqdm

from algebra.closedform import (CORRECTED_FORMULAS, NORMAL_FORM_FORMULAS, TABLE_FORMULAS, ClosedValue, FormulaId,
                                FormulaParams, IConvention, Variant, degree_audit, evaluate, listed_indices, prop22,
                                thm42_general_line)
from algebra.dickson import (MUI_NAMES, DMExpr, DMKey, bracket, bracket1, determinant, dm_decompose, dm_evaluate,
                             generators, gl2_elements, gl2_generators, is_gl2_invariant)
from algebra.errors import ExponentOverflow, NegativeExponent, NotInSpan
from algebra.gfp import PrimeField
from algebra.steenrod import MilnorIndex, cartan_product, index_range, st_apply
from algebra.superpoly import SuperMonomial, SuperPoly
from analysis.config import CampaignConfig
from analysis.loaders_dumpers import Report, dump_json_report, dumps_report, report_path_for_prime, write_text_report

MATCH = 'match'
MISMATCH = 'mismatch'
ERRATUM = 'erratum-confirmed'
SKIPPED = 'skipped'

SUMMARY_KEYS = {MATCH: 'match', MISMATCH: 'mismatch', ERRATUM: 'erratum', SKIPPED: 'skipped'}

# Sweep of the atom formula
ATOM_S = ((), (0,), (1,), (2,), (0, 1))
ATOM_R = ((), (1,), (2,), (0, 1), (1, 1))


class CaseGroup(NamedTuple):
    """All variants of one formula at one parameter point; they share a single oracle evaluation"""
    formula: FormulaId
    p: int
    params: FormulaParams
    variants: Tuple[Variant, ...]


@dataclass
class CaseResult:
    prime: int
    formula: FormulaId
    variant: Variant
    params: FormulaParams
    status: str
    lhs: str
    rhs: str
    audit: str = 'n/a'
    diagnostic: Optional[str] = None

    def to_dict(self) -> Dict:
        entry = {
            'formula': self.formula.value,
            'variant': self.variant.value,
            'params': self.params.as_dict(),
            'status': self.status,
            'lhs': self.lhs,
            'rhs': self.rhs,
            'audit': self.audit,
        }
        if self.diagnostic:
            entry['diagnostic'] = self.diagnostic
        return entry


@dataclass
class CampaignOutcome:
    reports: Dict[int, Report] = field(default_factory=dict)
    exit_code: int = 0


# The brute-force side

def oracle_input(formula: FormulaId, p: int, params: FormulaParams) -> Tuple[Optional[MilnorIndex], SuperPoly]:
    """
    The operation and the polynomial it acts on for one case. Prop2.2 has no operation: its oracle is the
    determinant [u, v] itself.
    """
    field_ = PrimeField(p)
    gens = generators(p)
    i = params.i or 0
    s = params.s or 0
    power = MilnorIndex.power(i)
    milnor = MilnorIndex((s,), (i,))

    if formula == FormulaId.PROP22:
        return None, bracket(field_, params.u or 0, params.v or 0)
    if formula == FormulaId.LEM23:
        ext = (params.k or 1,) if params.eps else ()
        exps = [0, 0]
        exps[(params.ell or 1) - 1] = params.b or 0
        return MilnorIndex(params.S or (), params.R or ()), SuperPoly.monomial(field_, 2, ext=ext, exps=exps)
    if formula == FormulaId.COR24:
        return power, SuperPoly.y(field_, 2, 1, p ** (params.e or 0))
    if formula == FormulaId.LEM25:
        return power, bracket(field_, params.u or 0, params.v or 0)
    if formula == FormulaId.LEM27:
        return milnor, bracket1(field_, params.u or 0)
    if formula == FormulaId.LEM32:
        return power, gens.L2 ** (p - 2)

    targets: Dict[FormulaId, Tuple[MilnorIndex, str]] = {
        FormulaId.COR26: (power, params.target or 'L2'),
        FormulaId.COR28: (power, params.target or 'M20'),
        FormulaId.LEM41: (milnor, params.target or 'M20'),
        FormulaId.THM31: (power, 'Q0' if s == 0 else 'Q1'),
        FormulaId.THM33: (power, 'R0'),
        FormulaId.THM34_R21: (power, 'R1'),
        FormulaId.THM34_R201: (power, 'R01'),
        FormulaId.THM42: (milnor, 'R0'),
        FormulaId.THM43: (milnor, 'R1'),
        FormulaId.THM44: (milnor, 'R01'),
        FormulaId.STQ: (milnor, params.target or 'Q0'),
    }
    idx, name = targets[formula]
    return idx, gens[name]


def oracle_value(formula: FormulaId, p: int, params: FormulaParams) -> ClosedValue:
    """
    The brute-force value of a case: st_apply on the target, decomposed into normal form when the closed formula is
    stated that way
    """
    idx, target = oracle_input(formula, p, params)
    if idx is None:
        return target

    value = st_apply(idx, target)
    if formula in NORMAL_FORM_FORMULAS:
        return dm_decompose(value)
    return value


def expected_degree(formula: FormulaId, p: int, params: FormulaParams) -> Optional[int]:
    idx, target = oracle_input(formula, p, params)
    if idx is None:
        return None
    return target.bidegree()[1] + idx.degree(p)


def _audit(value: ClosedValue, formula: FormulaId, p: int, params: FormulaParams) -> str:
    degree = expected_degree(formula, p, params)
    if degree is None or value.is_zero():
        return 'n/a'
    return 'pass' if degree_audit(value, degree, p) else 'fail'


def variants_for(formula: FormulaId, selected: Sequence[Variant]) -> Tuple[Variant, ...]:
    """Formulas without a corrected statement are checked once, as printed"""
    if formula in CORRECTED_FORMULAS:
        return tuple(selected)
    return (Variant.PRINTED,)


def _closed(formula: FormulaId, variant: Variant, p: int, params: FormulaParams) -> \
        Tuple[Optional[ClosedValue], Optional[str]]:
    try:
        return evaluate(formula, variant, p, params), None
    except NegativeExponent as error:
        return None, str(error)


def _status(group: CaseGroup, variant: Variant, oracle: Optional[ClosedValue], closed: Optional[ClosedValue]) -> str:
    """match, erratum-confirmed when only the printed statement is off, otherwise mismatch"""
    if oracle is None:
        return MISMATCH
    if closed is not None and closed == oracle:
        return MATCH
    if variant == Variant.PRINTED and group.formula in CORRECTED_FORMULAS:
        corrected, _ = _closed(group.formula, Variant.CORRECTED, group.p, group.params)
        if corrected is not None and corrected == oracle:
            return ERRATUM
    return MISMATCH


def verify_group(group: CaseGroup) -> List[CaseResult]:
    """
    Verifies every variant of one parameter point against a single oracle evaluation

    :param group:   The formula, prime, parameters and variants to check

    :return: One CaseResult per variant, in the order of group.variants
    """
    formula, p, params = group.formula, group.p, group.params

    oracle: Optional[ClosedValue] = None
    oracle_error = None
    try:
        oracle = oracle_value(formula, p, params)
    except ExponentOverflow as error:
        return [CaseResult(p, formula, variant, params, SKIPPED, 'n/a', 'n/a', diagnostic=str(error))
                for variant in group.variants]
    except NotInSpan as error:
        oracle_error = f'oracle value is not a Dickson-Mui element: {error}'

    results = []
    for variant in group.variants:
        try:
            closed, closed_error = _closed(formula, variant, p, params)
        except ExponentOverflow as error:
            results.append(CaseResult(p, formula, variant, params, SKIPPED, 'n/a', 'n/a', diagnostic=str(error)))
            continue

        case = CaseResult(
            p, formula, variant, params,
            status=_status(group, variant, oracle, closed),
            lhs=str(oracle) if oracle is not None else 'n/a',
            rhs=str(closed) if closed is not None else 'n/a',
            audit=_audit(closed, formula, p, params) if closed is not None else 'n/a',
            diagnostic=oracle_error or closed_error,
        )
        if case.status == MISMATCH:
            logging.warning(f'{formula.value} ({variant.value}) at p={p} {params.as_dict()}: oracle {case.lhs}, '
                            f'closed form {case.rhs}')
        results.append(case)

    return results


def verify_case(formula: FormulaId, variant: Variant, p: int, params: FormulaParams) -> CaseResult:
    """Verifies a single variant of one formula at one parameter point"""
    return verify_group(CaseGroup(formula, p, params, (variant,)))[0]


# Sweeps

def _uv_pairs(max_uv: int, ordered: bool) -> Iterator[Tuple[int, int]]:
    for u, v in itertools.product(range(max_uv + 1), repeat=2):
        if u < v or (not ordered and u != v):
            yield u, v


def _with_i(formula: FormulaId, p: int, base: FormulaParams, i_values: Sequence[int]) -> List[FormulaParams]:
    values = set(i_values)
    if formula in TABLE_FORMULAS:
        values.update(listed_indices(formula, p, base))
    return [dataclasses.replace(base, i=i) for i in sorted(values)]


def _base_params(formula: FormulaId, cfg: CampaignConfig, p: int) -> List[FormulaParams]:
    """The parameter points of a formula apart from i"""
    s_values = cfg.s_values(p)
    uv = range(cfg.max_uv + 1)

    sweeps: Dict[FormulaId, Callable[[], List[FormulaParams]]] = {
        FormulaId.COR24: lambda: [FormulaParams(e=e) for e in uv],
        FormulaId.LEM25: lambda: [FormulaParams(u=u, v=v) for u, v in _uv_pairs(cfg.max_uv, ordered=False)],
        FormulaId.COR26: lambda: [FormulaParams(target=target) for target in ('L2', 'L20', 'L21')],
        FormulaId.LEM27: lambda: [FormulaParams(s=s, u=u) for s in s_values for u in uv],
        FormulaId.COR28: lambda: [FormulaParams(target=target) for target in ('M20', 'M21')],
        FormulaId.LEM41: lambda: [FormulaParams(target=target, s=s) for target in ('M20', 'M21') for s in s_values],
        FormulaId.THM31: lambda: [FormulaParams(s=s) for s in (0, 1)],
        FormulaId.LEM32: lambda: [FormulaParams()],
        FormulaId.THM33: lambda: [FormulaParams()],
        FormulaId.THM34_R21: lambda: [FormulaParams()],
        FormulaId.THM34_R201: lambda: [FormulaParams()],
        FormulaId.THM42: lambda: [FormulaParams(s=s) for s in s_values],
        FormulaId.THM43: lambda: [FormulaParams(s=s) for s in s_values],
        FormulaId.THM44: lambda: [FormulaParams(s=s) for s in s_values],
        FormulaId.STQ: lambda: [FormulaParams(target=target, s=s) for target in ('Q0', 'Q1') for s in s_values],
    }
    if formula not in sweeps:
        raise ValueError(f'No sweep defined for {formula.value}')
    return sweeps[formula]()


def _atom_params(p: int) -> List[FormulaParams]:
    points = []
    for S, R, eps in itertools.product(ATOM_S, ATOM_R, (0, 1)):
        pairs = [(ell, ell) for ell in (1, 2)] if not eps else list(itertools.product((1, 2), repeat=2))
        for (k, ell), b in itertools.product(pairs, (0, 1, 2, p, p + 1)):
            points.append(FormulaParams(S=S, R=R, eps=eps, k=k, b=b, ell=ell))
    return points


def enumerate_cases(cfg: CampaignConfig, p: int) -> List[CaseGroup]:
    """All case groups of a campaign for one prime, in canonical order: by formula, then by parameter point"""
    groups = []
    for formula in cfg.theorems:
        if formula == FormulaId.PROP22:
            points = [FormulaParams(u=u, v=v) for u, v in _uv_pairs(cfg.max_uv, ordered=True)]
        elif formula == FormulaId.LEM23:
            points = _atom_params(p)
        else:
            points = [point for base in _base_params(formula, cfg, p)
                      for point in _with_i(formula, p, base, cfg.i_values(p))]
        variants = variants_for(formula, cfg.variants)
        groups.extend(CaseGroup(formula, p, point, variants) for point in points)

    return groups


def check_boundary(p: int, i_values: Sequence[int]) -> Dict:
    """
    Evaluates the general line of Thm4.2 at s = 2 under both readings of I(u, v) and reports which one reproduces
    the brute-force action
    """
    readings = {}
    for convention in IConvention:
        counterexample = None
        for i in i_values:
            oracle = oracle_value(FormulaId.THM42, p, FormulaParams(s=2, i=i))
            try:
                consistent = thm42_general_line(p, 2, i, convention) == oracle
            except NegativeExponent:
                consistent = False
            if not consistent:
                counterexample = i
                break
        readings[convention.value] = {'consistent': counterexample is None, 'counterexample_i': counterexample}

    consistent = [name for name, reading in readings.items() if reading['consistent']]
    verdict = f'consistent under {" and ".join(consistent)} reading' if consistent else 'inconsistent under both'
    logging.info(f'Thm4.2 general line at s=2, p={p}: {verdict}')
    return {**readings, 'verdict': verdict}


def _execute(groups: List[CaseGroup], workers: int, progress: bool) -> List[CaseResult]:
    if workers > 1:
        with multiprocessing.Pool(processes=workers) as pool:
            batches = list(tqdm(pool.imap(verify_group, groups, chunksize=4), total=len(groups), disable=not progress))
    else:
        batches = [verify_group(group) for group in tqdm(groups, disable=not progress)]

    return [result for batch in batches for result in batch]


def build_report(p: int, results: List[CaseResult], boundary: Optional[Dict]) -> Report:
    summary = {key: 0 for key in SUMMARY_KEYS.values()}
    errata: Dict[str, Dict] = {}
    for case in results:
        summary[SUMMARY_KEYS[case.status]] += 1
        if case.status == ERRATUM and case.formula.value not in errata:
            errata[case.formula.value] = case.to_dict()

    return {
        'prime': p,
        'generated_at': datetime.datetime.now().isoformat(timespec='seconds'),
        'cases': [case.to_dict() for case in results],
        'summary': summary,
        'errata': errata,
        'boundary': boundary,
    }


def is_failure(case: CaseResult) -> bool:
    """A mismatch fails the run unless it sits on the printed row of a formula with a corrected statement"""
    return case.status == MISMATCH and not (case.variant == Variant.PRINTED and case.formula in CORRECTED_FORMULAS)


def verify_prime(cfg: CampaignConfig, p: int) -> Tuple[Report, bool]:
    groups = enumerate_cases(cfg, p)
    logging.info(f'Verifying {len(groups)} parameter points at p={p}')
    results = _execute(groups, cfg.workers, cfg.progress)

    boundary = check_boundary(p, cfg.i_values(p)) if FormulaId.THM42 in cfg.theorems else None
    report = build_report(p, results, boundary)
    logging.info(f"p={p}: {report['summary']}")
    return report, any(is_failure(case) for case in results)


def run_campaign(cfg: CampaignConfig, stream: Optional[TextIO] = None) -> CampaignOutcome:
    """
    Runs the campaign prime by prime and writes the reports

    :param cfg:     The validated campaign settings
    :param stream:  Where reports go when no output path is configured, stdout by default

    :return: The reports per prime and the exit code: 1 if any case outside the printed rows of corrected formulas
             mismatched, else 0
    """
    start = datetime.datetime.now()
    stream = stream or sys.stdout
    outcome = CampaignOutcome()
    multiple = len(cfg.primes) > 1

    for p in cfg.primes:
        report, failed = verify_prime(cfg, p)
        outcome.reports[p] = report
        if failed:
            outcome.exit_code = 1

        if cfg.json_output_path:
            dump_json_report(report, report_path_for_prime(cfg.json_output_path, p, multiple))
        if cfg.text_output_path:
            write_text_report(report, report_path_for_prime(cfg.text_output_path, p, multiple), stream)
        if not cfg.json_output_path and not cfg.text_output_path and cfg.format == 'text':
            write_text_report(report, None, stream)

    # One JSON document on stdout: the report itself for one prime, an array of reports for several
    if not cfg.json_output_path and not cfg.text_output_path and cfg.format == 'json':
        reports = list(outcome.reports.values())
        stream.write(dumps_report(reports if multiple else reports[0]) + '\n')

    end = datetime.datetime.now()
    logging.info(f'Campaign took {end - start}')
    return outcome


# Structural identities

class StructureCheck(NamedTuple):
    name: str
    passed: bool
    detail: str = ''


def random_superpoly(rng: np.random.Generator, field_: PrimeField, max_terms: int = 3, max_exponent: int = 3) -> \
        SuperPoly:
    """A small random element of P_2 with up to max_terms monomials"""
    terms: Dict[SuperMonomial, int] = {}
    exteriors = ((), (1,), (2,), (1, 2))
    for _ in range(int(rng.integers(1, max_terms + 1))):
        ext = exteriors[int(rng.integers(len(exteriors)))]
        exps = tuple(int(e) for e in rng.integers(0, max_exponent + 1, size=2))
        monomial = SuperMonomial(ext, exps)
        terms[monomial] = terms.get(monomial, 0) + int(rng.integers(1, field_.p))

    return SuperPoly(field_, 2, terms)


def random_index(rng: np.random.Generator, max_length: int = 2, max_r_total: int = 3) -> MilnorIndex:
    candidates = index_range(max_length, max_r_total, max_s=2)
    return candidates[int(rng.integers(len(candidates)))]


def random_dmexpr(rng: np.random.Generator, p: int, max_terms: int = 3, max_exponent: int = 4) -> DMExpr:
    """A random normal form with up to max_terms monomials and exponents of Q0, Q1 at most max_exponent"""
    keys = [DMKey(T, a, b) for T in MUI_NAMES for a in range(max_exponent + 1) for b in range(max_exponent + 1)]
    pairs = []
    for _ in range(int(rng.integers(1, max_terms + 1))):
        pairs.append((keys[int(rng.integers(len(keys)))], int(rng.integers(1, p))))
    return DMExpr.from_pairs(p, pairs)


def _identity_checks(p: int) -> List[StructureCheck]:
    gens = generators(p)
    zero = SuperPoly.zero(gens.field, 2)
    checks = [
        StructureCheck('Q0 = L2^(p-1)', gens.Q0 == gens.L2 ** (p - 1)),
        StructureCheck('R0^2 = 0', gens.R0 * gens.R0 == zero),
        StructureCheck('R1^2 = 0', gens.R1 * gens.R1 == zero),
        StructureCheck('R0 R1 = -R01 Q0', gens.R0 * gens.R1 == -(gens.R01 * gens.Q0)),
    ]

    exhaustive = p == 3
    for name in ('Q0', 'Q1', 'R0', 'R1', 'R01'):
        checks.append(StructureCheck(f'{name} is GL2-invariant', is_gl2_invariant(gens[name], exhaustive)))

    matrices = gl2_elements(p) if exhaustive else gl2_generators(p)
    twisted = all(gens.L2.substitute(matrix) == gens.L2.scale(determinant(matrix, p)) for matrix in matrices)
    checks.append(StructureCheck('L2 transforms by the determinant', twisted))
    return checks


def _bracket_checks(p: int, max_uv: int) -> List[StructureCheck]:
    field_ = PrimeField(p)
    failures = [(u, v) for u, v in _uv_pairs(max_uv, ordered=True) if prop22(p, u, v) != bracket(field_, u, v)]
    return [StructureCheck(f'Prop2.2 expands [u, v] for 0 <= u < v <= {max_uv}', not failures,
                           f'fails at {failures}' if failures else '')]


def closure_indices(p: int, max_s: int) -> List[MilnorIndex]:
    """P^i and St^{(s),(i)} for 0 <= s <= max_s and 0 <= i <= p^2 + p"""
    indices = []
    for i in range(p * p + p + 1):
        indices.append(MilnorIndex.power(i))
        indices.extend(MilnorIndex((s,), (i,)) for s in range(max_s + 1))
    return indices


def _closure_checks(p: int, max_s: int) -> List[StructureCheck]:
    gens = generators(p)
    exhaustive = p == 3
    failures = []
    for idx in closure_indices(p, max_s):
        for name in ('Q0', 'Q1', 'R0', 'R1', 'R01'):
            if not is_gl2_invariant(st_apply(idx, gens[name]), exhaustive):
                failures.append(f'{idx} {name}')
    return [StructureCheck('Operations keep invariants invariant', not failures, ', '.join(failures))]


def _decomposition_checks(p: int) -> List[StructureCheck]:
    gens = generators(p)
    samples = [gens.Q0 * gens.Q1, gens.R0 * gens.Q1 ** 2, gens.R1 + gens.R0 * gens.Q0, gens.R01 * gens.Q0]
    passed = all(dm_evaluate(dm_decompose(f)) == f for f in samples)
    single = dm_decompose(gens.R0 * gens.Q0) == DMExpr.single(p, T=(0,), a=1)
    product = dm_decompose(gens.R0 * gens.R1) == DMExpr.single(p, T=(0, 1), a=1, coeff=-1)
    return [
        StructureCheck('Normal forms evaluate back to their polynomial', passed and single),
        StructureCheck('R0 R1 decomposes as -R01 Q0', product),
    ]


def _random_checks(p: int, seed: int, counts: Dict[str, int]) -> List[StructureCheck]:
    rng = np.random.default_rng(seed)
    field_ = PrimeField(p)
    beta = MilnorIndex.bockstein()

    def count_failures(trials: int, check: Callable[[], bool]) -> int:
        return sum(1 for _ in range(trials) if not check())

    def beta_squared() -> bool:
        return st_apply(beta, st_apply(beta, random_superpoly(rng, field_))).is_zero()

    def cartan() -> bool:
        idx = random_index(rng)
        f, g = random_superpoly(rng, field_), random_superpoly(rng, field_)
        return st_apply(idx, f * g) == cartan_product(idx, f, g)

    def equivariance() -> bool:
        idx = random_index(rng)
        f = random_superpoly(rng, field_)
        matrices = gl2_elements(p)
        matrix = matrices[int(rng.integers(len(matrices)))]
        return st_apply(idx, f.substitute(matrix)) == st_apply(idx, f).substitute(matrix)

    def round_trip() -> bool:
        expr = random_dmexpr(rng, p)
        return dm_decompose(dm_evaluate(expr)) == expr

    checks = []
    for name, check in (('beta^2 = 0', beta_squared), ('Cartan formula, two ways', cartan),
                        ('GL2-equivariance of the action', equivariance), ('Normal form round trip', round_trip)):
        trials = counts.get(name, 20)
        failures = count_failures(trials, check)
        checks.append(StructureCheck(name, failures == 0, f'{failures} of {trials} random trials failed'))
    return checks


def run_structure_checks(p: int, seed: int = 0, max_uv: int = 6, max_s: int = 2,
                         counts: Optional[Dict[str, int]] = None) -> List[StructureCheck]:
    """
    The structural identities of the generators and of the action, followed by seeded random property checks

    :param p:       The prime
    :param seed:    Seed of the random property checks
    :param max_uv:  Range of u, v for the determinant expansion
    :param max_s:   Largest s of the operations St^{(s),(i)} checked to keep the invariants invariant
    :param counts:  Trials per random check, keyed by check name

    :return: One StructureCheck per identity
    """
    counts = counts or {'beta^2 = 0': 50, 'Cartan formula, two ways': 50, 'GL2-equivariance of the action': 20,
                        'Normal form round trip': 30}
    checks = _identity_checks(p) + _bracket_checks(p, max_uv) + _closure_checks(p, max_s) + _decomposition_checks(p)
    checks += _random_checks(p, seed, counts)
    for check in checks:
        if not check.passed:
            logging.warning(f'Structure check failed at p={p}: {check.name} {check.detail}')
    return checks
