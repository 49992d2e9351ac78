# src/cli.py
"""
Command-line front end.

Usage:
    python run_job.py gb --vars z,w --ideal "z^2, z*w, w^2"
    python run_job.py member --vars z,w --ideal "z^2, z*w, w^2" --germ "z"
    python run_job.py residue --vars z,w --ideal "z^2, w^2" --germ "z*w"
    python run_job.py duality-check --vars z,w --ideal "z^2, z*w, w^2" --degree 4

Exit codes: 0 success / true verdict, 1 false verdict, 2 input error.
"""
import argparse
import json
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from bmform import build_v, closed_form_vp, omega_is_exact, render_form, top_component, vp_constant
from groebner import (
    IdealError,
    MonomialOrder,
    NotZeroDimensionalError,
    buchberger,
    extended_member,
    is_member,
    localize_at_origin,
    origin_is_zero,
    quotient_basis,
    verify_cofactors,
)
from poly import GaussianRational, PolySyntaxError, format_gaussian, parse_poly, render_poly, to_complex
from quad import SingularCycleError, bm_calibration, sphere_bm_residue, sphere_radius, tolerance_for, torus_residue
from residue import is_complete_intersection, pairing_matrix, residue_pairing, transform_residue
from resolution import (
    FreeComplex,
    cohen_macaulay_check,
    free_resolution,
    koszul_complex,
    pointwise_exactness_check,
    verify_complex,
)
from validation import validate_bm_identities, validate_duality

logger = logging.getLogger(__name__)

COMMANDS = ("gb", "member", "resolve", "koszul", "residue", "pairing", "duality-check", "bm-verify", "vp-check")
EXIT_OK, EXIT_FALSE, EXIT_INPUT = 0, 1, 2


@dataclass
class JobSpec:
    """One CLI invocation."""
    command: str
    variables: Tuple[str, ...]
    generators: Tuple[str, ...]
    germ: Optional[str] = None
    order: str = "grevlex"
    degree: int = 4
    samples: int = 100
    seed: int = 0
    radius: Optional[float] = None
    grid: Optional[Tuple[int, ...]] = None
    quadrature: bool = True
    render: bool = False
    output_format: str = "text"

    @property
    def nvars(self) -> int:
        return len(self.variables)


def split_generators(text: str) -> Tuple[str, ...]:
    """Split 'f1, f2, ...' at top-level commas."""
    parts, depth, current = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(current).strip())
            current = []
        else:
            current.append(ch)
    parts.append("".join(current).strip())
    return tuple(p for p in parts if p)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--vars', required=True, help='Comma-separated variable names, e.g. z,w')
    common.add_argument('--ideal', required=True, help='Comma-separated generators in the polynomial grammar')
    common.add_argument('--format', dest='output_format', choices=['text', 'json'], default='text', help='Output format')
    common.add_argument('--log-level', default='WARNING', help='Logging level')

    parser = argparse.ArgumentParser(description='Exact residues, resolutions and duality checks')
    sub = parser.add_subparsers(dest='command', required=True)

    gb = sub.add_parser('gb', parents=[common], help='Reduced Groebner basis')
    gb.add_argument('--order', choices=['grevlex', 'lex'], default='grevlex')

    member = sub.add_parser('member', parents=[common], help='Membership of a germ in the ideal at the origin')
    member.add_argument('--germ', required=True)

    sub.add_parser('resolve', parents=[common], help='Minimal free resolution')
    sub.add_parser('koszul', parents=[common], help='Koszul complex of the generators')

    residue = sub.add_parser('residue', parents=[common], help='Residue of a germ')
    residue.add_argument('--germ', required=True)
    residue.add_argument('--radius', type=float, default=None, help='Sphere radius (default: chosen from the other zeros)')
    residue.add_argument('--grid', type=int, nargs='+', default=None)
    residue.add_argument('--no-quad', action='store_true', help='Skip the quadrature cross-check')

    sub.add_parser('pairing', parents=[common], help='Residue pairing table')

    duality = sub.add_parser('duality-check', parents=[common], help='Duality harness')
    duality.add_argument('--degree', type=int, default=4, help='Check all monomials of total degree <= d')
    duality.add_argument('--samples', type=int, default=100)
    duality.add_argument('--seed', type=int, default=0)

    bm = sub.add_parser('bm-verify', parents=[common], help='Koszul-case form identities')
    bm.add_argument('--germ', default=None, help='Also test exactness of omega for this germ')

    vp = sub.add_parser('vp-check', parents=[common], help='Compare v_p with its closed form')
    vp.add_argument('--render', action='store_true', help='Include the rendered forms')
    return parser


def parse_job(argv: Optional[Sequence[str]] = None) -> Tuple[JobSpec, str]:
    """Parse argv into a JobSpec and the requested log level."""
    args = build_parser().parse_args(argv)
    spec = JobSpec(
        command=args.command,
        variables=tuple(v.strip() for v in args.vars.split(',') if v.strip()),
        generators=split_generators(args.ideal),
        germ=getattr(args, 'germ', None),
        order=getattr(args, 'order', 'grevlex'),
        degree=getattr(args, 'degree', 4),
        samples=getattr(args, 'samples', 100),
        seed=getattr(args, 'seed', 0),
        radius=getattr(args, 'radius', None),
        grid=tuple(args.grid) if getattr(args, 'grid', None) else None,
        quadrature=not getattr(args, 'no_quad', False),
        render=getattr(args, 'render', False),
        output_format=args.output_format,
    )
    return spec, args.log_level


def _exact(c: GaussianRational) -> str:
    return format_gaussian(c)


def _complex(z: complex) -> List[float]:
    return [z.real, z.imag]


def _matrix(m, names) -> List[List[str]]:
    return [[render_poly(e, names) for e in row] for row in m]


def _complex_report(c: FreeComplex, names) -> Dict:
    return {
        'ranks': list(c.ranks),
        'maps': [_matrix(f, names) for f in c.maps],
        'composition_zero': verify_complex(c),
    }


def _cmd_gb(spec, gens, names) -> Tuple[int, Dict]:
    order = MonomialOrder.lex(spec.nvars) if spec.order == 'lex' else MonomialOrder.grevlex(spec.nvars)
    gb = buchberger(gens, order)
    report = {
        'order': spec.order,
        'basis': [render_poly(g, names) for g in gb.basis],
        'cofactors_verified': verify_cofactors(gb),
    }
    try:
        report['quotient_dimension'] = quotient_basis(gb).dim
    except NotZeroDimensionalError as exc:
        report['quotient_dimension'] = None
        report['note'] = str(exc)
    return EXIT_OK, report


def _cmd_member(spec, gens, names, germ) -> Tuple[int, Dict]:
    gb = buchberger(gens)
    cofactors = extended_member(germ, gb)
    scope = 'global'
    verdict = cofactors is not None
    if origin_is_zero(gb):
        try:
            verdict = is_member(germ, localize_at_origin(gb))
            scope = 'local'
        except (IdealError, NotZeroDimensionalError) as exc:
            logger.debug("member: falling back to global membership (%s)", exc)
    # cofactors certify global membership only; a local verdict can hold without them
    report = {
        'germ': render_poly(germ, names),
        'member': verdict,
        'scope': scope,
        'global_member': cofactors is not None,
        'cofactors': [render_poly(c, names) for c in cofactors] if cofactors is not None else None,
    }
    return (EXIT_OK if verdict else EXIT_FALSE), report


def _cmd_resolve(spec, gens, names) -> Tuple[int, Dict]:
    c = free_resolution(gens)
    report = _complex_report(c, names)
    report['length'] = c.length
    report['cohen_macaulay'] = cohen_macaulay_check(c)
    report['pointwise_exact'] = pointwise_exactness_check(c)
    return EXIT_OK, report


def _cmd_koszul(spec, gens, names) -> Tuple[int, Dict]:
    c = koszul_complex(gens)
    report = _complex_report(c, names)
    report['pointwise_exact'] = pointwise_exactness_check(c)
    return EXIT_OK, report


def _cmd_residue(spec, gens, names, germ) -> Tuple[int, Dict]:
    gb = buchberger(gens)
    rf = residue_pairing(gb)
    ci = is_complete_intersection(gb)
    exact = transform_residue(gens, germ) if ci else rf.value(germ)
    report = {
        'germ': render_poly(germ, names),
        'complete_intersection': ci,
        'ci_tuple': [render_poly(g, names) for g in rf.ci],
        'exact': _exact(exact),
        'quadrature': None,
    }
    code = EXIT_OK
    if spec.quadrature:
        value, tol, method = None, None, None
        if ci and spec.nvars <= 2:
            radius = spec.radius if spec.radius is not None else sphere_radius(gens)
            value = sphere_bm_residue(gens, germ, radius=radius, grid=spec.grid)
            tol, method = tolerance_for(spec.nvars), 'sphere'
            cal = bm_calibration(spec.nvars, radius, spec.grid)
            report['calibration'] = {
                'raw': _complex(cal.raw),
                'kappa': _complex(cal.kappa),
                'expected_magnitude': _complex(cal.expected),
                'orientation_sign': cal.orientation_sign,
            }
        elif not ci:
            value = torus_residue(rf.m, germ, grid=spec.grid)
            tol, method = tolerance_for(1), 'torus'
        if value is not None:
            exact_c = to_complex(exact)
            error = abs(value - exact_c) / max(1.0, abs(exact_c))
            report['quadrature'] = {'value': _complex(value), 'method': method, 'tolerance': tol, 'error': error}
            if method == 'sphere':
                report['quadrature']['radius'] = radius
            if error >= tol:
                code = EXIT_FALSE
    return code, report


def _cmd_pairing(spec, gens, names) -> Tuple[int, Dict]:
    gb = buchberger(gens)
    rf = residue_pairing(gb)
    rows, rank = pairing_matrix(rf)
    mons = rf.standard.monomials
    R = gb.ring
    return EXIT_OK, {
        'complete_intersection': rf.is_ci,
        'ci_tuple': [render_poly(g, names) for g in rf.ci],
        'dominating_powers': list(rf.m),
        'standard_monomials': [render_poly(R.one.mul_monom(m), names) for m in mons],
        'matrix': [[_exact(c) for c in row] for row in rows],
        'rank': rank,
        'nondegenerate': rank == len(mons),
    }


def _cmd_duality(spec, gens, names) -> Tuple[int, Dict]:
    result = validate_duality(gens, degree=spec.degree, samples=spec.samples, seed=spec.seed, verbose=False)
    report = {
        'degree': spec.degree,
        'monomials_checked': result.monomials_checked,
        'random_checked': result.random_checked,
        'members_seen': result.members_seen,
        'local_dimension': result.local_dimension,
        'dominating_powers': list(result.dominating_powers),
        'disagreements': result.disagreements,
        'agreement': result.is_valid,
    }
    return (EXIT_OK if result.is_valid else EXIT_FALSE), report


def _cmd_bm_verify(spec, gens, names, germ) -> Tuple[int, Dict]:
    result = validate_bm_identities(gens, verbose=False)
    report = {
        'p': result.p,
        'delta_sigma_is_one': result.delta_sigma_is_one,
        'dbar_sigma_power_vanishes': result.dbar_sigma_power_vanishes,
        'nabla_v_is_one': result.nabla_v_is_one,
        'top_is_closed': result.top_is_closed,
        'vp_constant': _exact(result.vp_constant) if result.vp_constant is not None else None,
        'violations': result.violations,
    }
    ok = result.is_valid
    if germ is not None:
        exact, _ = omega_is_exact(gens, germ)
        report['germ'] = render_poly(germ, names)
        report['omega_exact_witness'] = exact
    return (EXIT_OK if ok else EXIT_FALSE), report


def _cmd_vp_check(spec, gens, names) -> Tuple[int, Dict]:
    c = vp_constant(gens)
    report = {'p': len(gens), 'vp_constant': _exact(c) if c is not None else None}
    if spec.render:
        report['top_component'] = render_form(top_component(build_v(gens)))
        report['closed_form'] = render_form(closed_form_vp(gens))
    return (EXIT_OK if c is not None else EXIT_FALSE), report


def run(spec: JobSpec) -> Tuple[int, Dict]:
    """
    Execute one job.

    Returns:
        (exit code, report dict); exact numbers in the report are strings
    """
    if spec.command not in COMMANDS:
        raise ValueError(f"unknown command {spec.command!r}")
    names = spec.variables
    gens = [parse_poly(g, spec.nvars, names) for g in spec.generators]
    if not gens:
        raise ValueError("the ideal needs at least one generator")
    germ = parse_poly(spec.germ, spec.nvars, names) if spec.germ is not None else None
    report = {
        'command': spec.command,
        'variables': list(names),
        'ideal': [render_poly(g, names) for g in gens],
    }
    handlers = {
        'gb': lambda: _cmd_gb(spec, gens, names),
        'member': lambda: _cmd_member(spec, gens, names, germ),
        'resolve': lambda: _cmd_resolve(spec, gens, names),
        'koszul': lambda: _cmd_koszul(spec, gens, names),
        'residue': lambda: _cmd_residue(spec, gens, names, germ),
        'pairing': lambda: _cmd_pairing(spec, gens, names),
        'duality-check': lambda: _cmd_duality(spec, gens, names),
        'bm-verify': lambda: _cmd_bm_verify(spec, gens, names, germ),
        'vp-check': lambda: _cmd_vp_check(spec, gens, names),
    }
    code, body = handlers[spec.command]()
    report.update(body)
    report['exit_code'] = code
    return code, report


def _print_text(report: Dict) -> None:
    print("=" * 80)
    print(f"{report['command'].upper()} REPORT")
    print("=" * 80)
    for key, value in report.items():
        if key == 'command':
            continue
        if isinstance(value, str) and "\n" in value:
            print(f"{key}:")
            for line in value.splitlines():
                print(f"  {line}")
        else:
            print(f"{key}: {value}")
    print("=" * 80)


def main(argv: Optional[Sequence[str]] = None) -> int:
    spec, log_level = parse_job(argv)
    logging.basicConfig(level=getattr(logging, log_level.upper(), logging.WARNING))
    try:
        code, report = run(spec)
    except PolySyntaxError as exc:
        print(f"Error: {exc} (line {exc.line}, column {exc.column}) in {exc.text!r}")
        return EXIT_INPUT
    except ValueError as exc:
        print(f"Error: {exc}")
        return EXIT_INPUT
    except SingularCycleError as exc:
        print(f"Error: {exc}; pass another --radius")
        return EXIT_INPUT
    if spec.output_format == 'json':
        print(json.dumps(report, indent=2))
    else:
        _print_text(report)
    return code
