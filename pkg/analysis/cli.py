"""
Command line entry point: verification campaigns, single operations, the generators and the structural identities
"""
import datetime
import logging
import sys
from argparse import ArgumentParser, Namespace
from typing import List, Optional

from algebra.dickson import GENERATOR_NAMES, dm_decompose, generators, is_gl2_invariant
from algebra.errors import AlgebraError, ExponentOverflow, InvalidIndex, InvalidPrime
from algebra.gfp import validate_prime
from algebra.steenrod import MilnorIndex, st_apply
from analysis.campaign import run_campaign, run_structure_checks
from analysis.config import VARIANT_CHOICES, FORMAT_CHOICES, CampaignConfig, ConfigError, load_config
from analysis.shared_parsers import ParseError, parse_index_list, parse_target


def build_parser() -> ArgumentParser:
    parser = ArgumentParser('dickson-mui', description='Steenrod-Milnor operations on Dickson-Mui invariants')
    subparsers = parser.add_subparsers(dest='command', required=True)

    verify = subparsers.add_parser('verify', help='Check the closed formulas against the brute-force action')
    verify.add_argument('-c', '--config', default='config.yaml')
    verify.add_argument('--prime', help='One or more primes, comma separated')
    verify.add_argument('--theorem', help='"all" or comma separated formula names, e.g. Thm3.1,Thm4.2')
    verify.add_argument('--max-i', type=int)
    verify.add_argument('--max-s', type=int)
    verify.add_argument('--max-uv', type=int)
    verify.add_argument('--variant', choices=VARIANT_CHOICES)
    verify.add_argument('--json', dest='json_output_path', help='Write the JSON report here')
    verify.add_argument('--text', dest='text_output_path', help='Write the text report here')
    verify.add_argument('--format', choices=FORMAT_CHOICES, help='Report format on stdout')
    verify.add_argument('--workers', type=int)
    verify.add_argument('--no-progress', action='store_true')

    apply = subparsers.add_parser('apply', help='Apply St^{S,R} to a generator or a polynomial')
    apply.add_argument('--prime', type=int, required=True)
    apply.add_argument('--S', dest='S', default='', help='Strictly increasing entries, e.g. "0,1"')
    apply.add_argument('--R', dest='R', default='', help='Nonnegative entries, e.g. "1,0,2"')
    apply.add_argument('--target', required=True, help='A generator name such as R0, or a polynomial like "2*x1*y2^3"')

    gens = subparsers.add_parser('gens', help='Print the Dickson and Mui generators')
    gens.add_argument('--prime', type=int, required=True)

    structure = subparsers.add_parser('structure', help='Check the structural identities of the generators')
    structure.add_argument('-c', '--config', default='config.yaml')
    structure.add_argument('--prime', type=int)
    structure.add_argument('--seed', type=int)

    return parser


def verify(args: Namespace) -> int:
    config = load_config(args.config)
    cfg = CampaignConfig.from_config(
        config,
        primes=args.prime,
        theorems=args.theorem,
        max_i=args.max_i,
        max_s=args.max_s,
        max_uv=args.max_uv,
        variant=args.variant,
        json_output_path=args.json_output_path,
        text_output_path=args.text_output_path,
        format=args.format,
        workers=args.workers,
        progress=False if args.no_progress else None,
    )
    return run_campaign(cfg).exit_code


def apply(args: Namespace) -> int:
    p = validate_prime(args.prime)
    idx = MilnorIndex(parse_index_list(args.S), parse_index_list(args.R))
    name, target = parse_target(args.target, p)
    logging.info(f'Applying {idx} to {name} at p={p}')

    result = st_apply(idx, target)
    print(result)
    if not result.is_zero() and is_gl2_invariant(result, exhaustive=p == 3):
        try:
            print(dm_decompose(result))
        except AlgebraError as error:
            logging.warning(f'Invariant result has no normal form: {error}')

    return 0


def gens(args: Namespace) -> int:
    p = validate_prime(args.prime)
    polys = generators(p)
    for name in GENERATOR_NAMES:
        print(f'{name} = {polys[name]}')
    return 0


def structure(args: Namespace) -> int:
    start = datetime.datetime.now()
    config = load_config(args.config)
    structure_cfg = config.get('structure') or {}
    try:
        prime = args.prime if args.prime is not None else int(structure_cfg.get('prime', 3))
        seed = args.seed if args.seed is not None else int(structure_cfg.get('seed', 0))
        max_uv = int(structure_cfg.get('max_uv', 6))
        max_s = int(structure_cfg.get('max_s', 2))
    except (TypeError, ValueError) as error:
        raise ConfigError(f'Invalid structure settings: {error}') from error
    p = validate_prime(prime)

    checks = run_structure_checks(p, seed=seed, max_uv=max_uv, max_s=max_s, counts=structure_cfg.get('trials'))
    for check in checks:
        print(f"[{'pass' if check.passed else 'FAIL'}] {check.name}" + (f' ({check.detail})' if check.detail else ''))

    end = datetime.datetime.now()
    logging.info(f'Structure checks took {end - start}')
    return 0 if all(check.passed for check in checks) else 1


COMMANDS = {'verify': verify, 'apply': apply, 'gens': gens, 'structure': structure}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Runs one subcommand

    :param argv:    Command line arguments without the program name, sys.argv by default

    :return: The exit code: 0 on success, 1 when a check failed, 2 on a usage or configuration error
    """
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, ParseError) as error:
        logging.error(str(error))
        return 2
    except (InvalidPrime, InvalidIndex, ExponentOverflow) as error:
        logging.error(f'Invalid input: {error}')
        return 2


def run() -> None:
    raise SystemExit(main(sys.argv[1:]))


if __name__ == '__main__':
    raise SystemExit(main())
