# src/corpus_runner.py
"""
Corpus runner: every harness over the example ideals, with Excel output.
"""
import time
from pathlib import Path
from typing import Dict, List, Optional

import openpyxl
from openpyxl.styles import Alignment, Font, PatternFill

from instance import IdealInstance, load_ideal_instance
from groebner import buchberger
from poly import format_gaussian, monomials_up_to, render_poly
from residue import is_complete_intersection, residue_pairing
from validation import (
    validate_duality,
    validate_local_annihilation,
    validate_quadrature,
    validate_resolution,
)

SHEETS = {
    'Duality': ['Instance', 'Vars', 'Local Dim', 'Powers', 'Monomials', 'Random', 'Members', 'Disagreements', 'Wall Time (s)', 'Valid'],
    'Resolution': ['Instance', 'Vars', 'Ranks', 'Composition', 'Minimal', 'Exact', 'CM', 'Koszul', 'Wall Time (s)', 'Valid'],
    'Quadrature': ['Instance', 'Germ', 'Exact', 'Quadrature', 'Error', 'Tolerance', 'Radius Gap', 'Kappa', 'Wall Time (s)', 'Valid'],
}


def _quadrature_germs(inst: IdealInstance, degree: int) -> List:
    """The lowest few monomials; each sphere cross-check costs two 3-D quadratures."""
    R = inst.generators[0].ring
    return [R.one.mul_monom(m) for m in monomials_up_to(inst.nvars, degree)][:6]


def run_corpus(
    instance_paths: List[Path],
    degree: int = 4,
    samples: int = 100,
    output_excel: Optional[Path] = None,
    quadrature: bool = True,
    verbose: bool = False,
) -> List[Dict]:
    """
    Run the duality, resolution and quadrature harnesses on each instance.

    Args:
        instance_paths: corpus files
        degree: monomial degree bound of the duality harness
        samples: random polynomials per duality run
        output_excel: workbook path, nothing is written when None
        quadrature: include the sphere cross-checks (n <= 2 complete intersections)
        verbose: print the harness reports

    Returns:
        one row dict per harness run, tagged by 'sheet'
    """
    results = []

    for inst_path in instance_paths:
        print(f"\n{'='*80}")
        print(f"Instance: {inst_path.stem}")
        print(f"{'='*80}")

        inst = load_ideal_instance(inst_path)
        gens = inst.generators
        print(f"  Vars: {', '.join(inst.variables)}")
        print(f"  Ideal: <{', '.join(inst.generator_texts)}>")

        t0 = time.perf_counter()
        dv = validate_duality(gens, degree=degree, samples=samples, verbose=verbose)
        annihilation = validate_local_annihilation(residue_pairing(buchberger(gens)))
        duality_ok = dv.is_valid and not annihilation
        results.append({
            'sheet': 'Duality',
            'instance': inst.name,
            'nvars': inst.nvars,
            'local_dimension': dv.local_dimension,
            'powers': str(dv.dominating_powers),
            'monomials': dv.monomials_checked,
            'random': dv.random_checked,
            'members': dv.members_seen,
            'disagreements': len(dv.disagreements) + len(annihilation),
            'wall_time': time.perf_counter() - t0,
            'is_valid': duality_ok,
        })
        print(f"  Duality: {'✓' if duality_ok else '✗'} (local dimension {dv.local_dimension})")

        t0 = time.perf_counter()
        rv = validate_resolution(gens, verbose=verbose)
        results.append({
            'sheet': 'Resolution',
            'instance': inst.name,
            'nvars': inst.nvars,
            'ranks': str(list(rv.ranks)),
            'composition': rv.composition_zero,
            'minimal': rv.minimal,
            'exact': rv.pointwise_exact,
            'cm': rv.cohen_macaulay,
            'koszul': rv.koszul_agreement,
            'wall_time': time.perf_counter() - t0,
            'is_valid': rv.is_valid,
        })
        print(f"  Resolution: {'✓' if rv.is_valid else '✗'} ranks {list(rv.ranks)}")

        if not quadrature or inst.nvars > 2 or not is_complete_intersection(buchberger(gens)):
            continue
        for h in _quadrature_germs(inst, degree):
            t0 = time.perf_counter()
            qv = validate_quadrature(gens, h, verbose=verbose)
            results.append({
                'sheet': 'Quadrature',
                'instance': inst.name,
                'germ': render_poly(h, inst.variables),
                'exact': format_gaussian(qv.exact),
                'quadrature': f"{qv.quadrature.real:.10f}{qv.quadrature.imag:+.10f}i",
                'error': qv.error,
                'tolerance': qv.tolerance,
                'radius_gap': qv.radius_gap,
                'kappa': f"{qv.calibration.kappa.real:.6g}{qv.calibration.kappa.imag:+.6g}i",
                'wall_time': time.perf_counter() - t0,
                'is_valid': qv.is_valid,
            })
            print(f"  Quadrature h = {render_poly(h, inst.variables)}: {'✓' if qv.is_valid else '✗'} (error {qv.error:.2e})")

    if output_excel is not None:
        print(f"\n{'='*80}")
        print(f"Writing results to {output_excel}...")
        _write_excel(results, Path(output_excel))
        print(f"✅ Complete!")
    return results


def _row_values(result: Dict) -> List:
    mark = '✓' if result['is_valid'] else '✗'
    sheet = result['sheet']
    if sheet == 'Duality':
        return [result['instance'], result['nvars'], result['local_dimension'], result['powers'],
                result['monomials'], result['random'], result['members'], result['disagreements'],
                f"{result['wall_time']:.2f}", mark]
    if sheet == 'Resolution':
        koszul = '-' if result['koszul'] is None else ('✓' if result['koszul'] else '✗')
        return [result['instance'], result['nvars'], result['ranks'], '✓' if result['composition'] else '✗',
                '✓' if result['minimal'] else '✗', '✓' if result['exact'] else '✗', str(result['cm']),
                koszul, f"{result['wall_time']:.2f}", mark]
    return [result['instance'], result['germ'], result['exact'], result['quadrature'],
            f"{result['error']:.2e}", result['tolerance'], f"{result['radius_gap']:.2e}",
            result['kappa'], f"{result['wall_time']:.2f}", mark]


def _write_excel(results: List[Dict], output_path: Path) -> None:
    """Write results to Excel with formatting."""
    wb = openpyxl.Workbook()

    # Remove default sheet
    if 'Sheet' in wb.sheetnames:
        wb.remove(wb['Sheet'])

    header_fill = PatternFill(start_color="366092", end_color="366092", fill_type="solid")
    header_font = Font(bold=True, color="FFFFFF")

    for sheet, headers in SHEETS.items():
        ws = wb.create_sheet(sheet)
        for col, header in enumerate(headers, 1):
            cell = ws.cell(row=1, column=col, value=header)
            cell.fill = header_fill
            cell.font = header_font
            cell.alignment = Alignment(horizontal='center')

        rows = [r for r in results if r['sheet'] == sheet]
        for row_idx, result in enumerate(rows, 2):
            for col, value in enumerate(_row_values(result), 1):
                ws.cell(row=row_idx, column=col, value=value)

        for col in range(1, len(headers) + 1):
            ws.column_dimensions[openpyxl.utils.get_column_letter(col)].width = 18

    # Summary sheet
    ws_summary = wb.create_sheet("Summary", 0)
    ws_summary['A1'] = "Corpus Summary"
    ws_summary['A1'].font = Font(bold=True, size=14)

    ws_summary['A3'] = "Instances:"
    ws_summary['B3'] = len(set(r['instance'] for r in results))

    ws_summary['A4'] = "Total Runs:"
    ws_summary['B4'] = len(results)

    ws_summary['A5'] = "All Valid:"
    ws_summary['B5'] = '✓' if all(r['is_valid'] for r in results) else '✗'

    ws_summary['A7'] = "Passed by Harness:"
    ws_summary['A7'].font = Font(bold=True)

    for idx, sheet in enumerate(SHEETS, 8):
        rows = [r for r in results if r['sheet'] == sheet]
        ws_summary[f'A{idx}'] = f"{sheet}:"
        ws_summary[f'B{idx}'] = f"{sum(r['is_valid'] for r in rows)}/{len(rows)}"

    wb.save(output_path)
