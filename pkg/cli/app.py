"""
cli/app.py

Command-line front end.

Usage:
    python main.py check   cli/fixtures/fig1.json
    python main.py check   cli/fixtures/fig1.json --sensors 1,2
    python main.py augment cli/fixtures/fig1.json --mode binary --order asc
    python main.py augment cli/fixtures/brain.json --mode cost --json
    python main.py verify  cli/fixtures/fig1_gstar.json --seed 7 --trials 100
    python main.py demo    fig1

Exit codes: 0 success, 1 check failed, 2 input or usage error.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from pathlib import Path

from dotenv import load_dotenv

from topology.augment import independent_link_count
from topology.errors import NetobsError, UnobservablePlantError
from topology.pipeline import run_design
from topology.slack import Weighting
from topology.structural import SparsityPattern, check_dd_observability, check_structural_observability
from verification.pbh import RANK_TOL
from verification.pipeline import run_verification
from .report import (
    ReportFile,
    adjacency,
    augmentation_section,
    dd_section,
    numeric_section,
    provenance,
    render_json,
    render_text,
    structural_section,
)
from .system_file import SystemFile, dump_system, load_system_file

logger = logging.getLogger(__name__)

EXIT_OK     = 0
EXIT_FAILED = 1
EXIT_INPUT  = 2

FIXTURES = Path(__file__).resolve().parent / 'fixtures'
DEMOS    = ('fig1', 'brain')


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='netobs',
        description='Distributed-decentralized observability checks and communication-link design.',
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--out', type=Path, default=None, help='Write the report here instead of stdout')
    common.add_argument('--json', action='store_true', help='Emit the report as JSON')
    common.add_argument('--verbose', '-v', action='store_true', help='Debug logging on stderr')

    sub = parser.add_subparsers(dest='command', required=True)

    check = sub.add_parser('check', parents=[common], help='Structural and DD observability checks')
    check.add_argument('file', type=Path)
    check.add_argument('--sensors', default=None,
                       help='Comma-separated 1-based sensors for an extra plant check, e.g. 1,2')

    augment = sub.add_parser('augment', parents=[common], help='Add communication links')
    augment.add_argument('file', type=Path)
    augment.add_argument('--mode', choices=[w.value for w in Weighting], default='binary')
    augment.add_argument('--order', choices=['asc', 'desc'], default='asc')
    augment.add_argument('--connect-first', action='store_true',
                         help='Repair strong connectivity whenever G is not strongly connected')
    augment.add_argument('--system-out', type=Path, default=None,
                         help='Where to write G* (default: <stem>_augmented.json in the working directory)')

    verify = sub.add_parser('verify', parents=[common], help='Numeric PBH and reconstruction checks')
    verify.add_argument('file', type=Path)
    verify.add_argument('--seed', type=int, default=None)
    verify.add_argument('--tol', type=float, default=None)
    verify.add_argument('--trials', type=int, default=1)

    demo = sub.add_parser('demo', parents=[common], help='Run a bundled worked example')
    demo.add_argument('name', choices=DEMOS)
    demo.add_argument('--seed', type=int, default=None)

    return parser


# ---------------------------------------------------------------------------
# Configuration fallbacks
# ---------------------------------------------------------------------------

def resolve_seed(flag: int | None, sf: SystemFile | None) -> int:
    """--seed, then the file's seed, then NETOBS_SEED, then 0."""
    if flag is not None:
        return flag
    if sf is not None and sf.seed is not None:
        return sf.seed
    env = os.environ.get('NETOBS_SEED', '').strip()
    if env:
        try:
            return int(env)
        except ValueError:
            raise NetobsError(f'NETOBS_SEED must be an integer, got {env!r}') from None
    return 0


def resolve_tol(flag: float | None) -> float:
    if flag is not None:
        return flag
    env = os.environ.get('NETOBS_TOL', '').strip()
    if env:
        try:
            return float(env)
        except ValueError:
            raise NetobsError(f'NETOBS_TOL must be a number, got {env!r}') from None
    return RANK_TOL


def parse_sensor_list(text: str, m: int) -> list[int]:
    try:
        sensors = sorted({int(tok) - 1 for tok in text.split(',') if tok.strip()})
    except ValueError:
        raise NetobsError(f'--sensors expects comma-separated integers, got {text!r}') from None
    bad = [i + 1 for i in sensors if not 0 <= i < m]
    if bad:
        raise NetobsError(f'--sensors out of range 1..{m}: {bad}')
    return sensors


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_check(args) -> tuple[ReportFile, int]:
    sf = load_system_file(args.file)
    spec = sf.spec
    dd = check_dd_observability(spec)

    report = ReportFile(
        command    = 'check',
        system     = sf.name or args.file.stem,
        provenance = provenance(args.file, None, {'sensors': args.sensors}),
        structural = structural_section(dd.plant),
        dd         = dd_section(dd),
    )
    if args.sensors:
        subset = parse_sensor_list(args.sensors, spec.m)
        rows = SparsityPattern(len(subset), spec.n, frozenset(
            (p, k) for p, i in enumerate(subset) for k in spec.c_pattern.row(i)))
        report.extra['structural_subset'] = structural_section(
            check_structural_observability(spec.a_pattern, rows), subset)

    return report, EXIT_OK if dd.overall_ok else EXIT_FAILED


def cmd_augment(args) -> tuple[ReportFile, int]:
    sf = load_system_file(args.file)
    weighting = Weighting.parse(args.mode)
    design = run_design(sf.spec, weighting=weighting, order=args.order, connect_first=args.connect_first)

    seed = resolve_seed(None, sf)
    flags = {'mode': args.mode, 'order': args.order, 'connect_first': args.connect_first}
    report = ReportFile(
        command    = 'augment',
        system     = sf.name or args.file.stem,
        provenance = provenance(args.file, seed, flags),
        structural = structural_section(design.initial.plant),
        dd         = dd_section(design.final) if design.final else None,
    )
    if design.error:
        report.augmentation = augmentation_section(design, sf.cost_unit, sf.cost_unit_label)
        return report, EXIT_FAILED

    independent = independent_link_count(sf.spec, weighting).total_links
    report.augmentation = augmentation_section(design, sf.cost_unit, sf.cost_unit_label, independent)
    report.extra['initial_dd'] = dd_section(design.initial)
    # numeric section only for a DD-observable G*
    if design.success:
        numeric = run_verification(design.final_system, seed=seed, tol=resolve_tol(None))
        report.numeric = numeric_section(numeric)

    target = args.system_out or Path.cwd() / f'{args.file.stem}_augmented.json'
    dump_system(target, design.final_system,
                name=f'{sf.name or args.file.stem}_augmented',
                cost_unit=sf.cost_unit, cost_unit_label=sf.cost_unit_label, seed=sf.seed,
                notes=f'G* produced by `augment --mode {args.mode} --order {args.order}` from {args.file.name}')
    report.extra['system_out'] = target.name

    return report, EXIT_OK if design.success else EXIT_FAILED


def cmd_verify(args) -> tuple[ReportFile, int]:
    sf = load_system_file(args.file)
    seed = resolve_seed(args.seed, sf)
    tol = resolve_tol(args.tol)
    result = run_verification(sf.spec, seed=seed, tol=tol, trials=args.trials)
    dd = check_dd_observability(sf.spec)

    report = ReportFile(
        command    = 'verify',
        system     = sf.name or args.file.stem,
        provenance = provenance(args.file, seed, {'tol': tol, 'trials': args.trials}),
        structural = structural_section(dd.plant),
        dd         = dd_section(dd),
        numeric    = numeric_section(result),
    )
    return report, EXIT_OK if result.observable else EXIT_FAILED


def cmd_demo(args) -> tuple[ReportFile, int]:
    path = FIXTURES / f'{args.name}.json'
    sf = load_system_file(path)
    expected = sf.expected or {}
    weighting = Weighting.parse(expected.get('mode', 'binary'))
    design = run_design(sf.spec, weighting=weighting, order=expected.get('order', 'asc'))
    if design.error:
        raise UnobservablePlantError(design.error)

    seed = resolve_seed(args.seed, sf)
    numeric = run_verification(design.final_system, seed=seed, tol=resolve_tol(None))

    mismatches = compare_expected(expected, design, sf)
    report = ReportFile(
        command      = 'demo',
        system       = sf.name or args.name,
        provenance   = provenance(path, seed, {'mode': weighting.value}),
        structural   = structural_section(design.initial.plant),
        dd           = dd_section(design.final),
        augmentation = augmentation_section(design, sf.cost_unit, sf.cost_unit_label),
        numeric      = numeric_section(numeric),
    )
    report.extra['demo'] = {'name': args.name, 'passed': not mismatches,
                            'mismatches': mismatches, 'expected': expected}
    for line in mismatches:
        print(f'demo {args.name}: {line}', file=sys.stderr)
    return report, EXIT_OK if not mismatches else EXIT_FAILED


def compare_expected(expected: dict, design, sf: SystemFile) -> list[str]:
    """Differences between a fixture's `expected` block and the design run."""
    out: list[str] = []
    links = sorted([link.transmitter + 1, link.receiver + 1] for link in design.links)

    if 'added_links' in expected:
        want = sorted(list(pair) for pair in expected['added_links'])
        if want != links:
            out.append(f'added_links: expected {want}, got {links}')
    if 'total_links' in expected and expected['total_links'] != len(links):
        out.append(f'total_links: expected {expected["total_links"]}, got {len(links)}')
    if 'total_cost' in expected:
        got = design.total_cost / sf.cost_unit
        if not math.isclose(got, float(expected['total_cost']), rel_tol=1e-9, abs_tol=1e-9):
            out.append(f'total_cost: expected {expected["total_cost"]}, got {got:g}')
    if 'final_comm' in expected:
        got = adjacency(design.final_system.comm.edges, design.final_system.m)
        if got != expected['final_comm']:
            out.append(f'final_comm: expected {expected["final_comm"]}, got {got}')
    if not design.success:
        out.append('final system is not DD-observable')
    return out


COMMANDS = {
    'check'   : cmd_check,
    'augment' : cmd_augment,
    'verify'  : cmd_verify,
    'demo'    : cmd_demo,
}


# ---------------------------------------------------------------------------
# Main entry point
# ---------------------------------------------------------------------------

def main(argv: list[str] | None = None) -> int:
    load_dotenv()
    args = build_parser().parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format='%(asctime)s [%(levelname)s] %(name)s: %(message)s',
        stream=sys.stderr,
    )

    try:
        report, code = COMMANDS[args.command](args)
    except UnobservablePlantError as exc:
        print(f'netobs {args.command}: {exc}', file=sys.stderr)
        return EXIT_FAILED
    except (NetobsError, ValueError) as exc:
        print(f'netobs {args.command}: {exc}', file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:
        logger.error('Unexpected failure | command=%s | error=%s', args.command, exc, exc_info=True)
        return EXIT_INPUT

    text = render_json(report) if args.json else render_text(report)
    if args.out:
        args.out.write_text(text, encoding='utf-8')
    else:
        sys.stdout.write(text)
    return code


if __name__ == '__main__':
    sys.exit(main())
