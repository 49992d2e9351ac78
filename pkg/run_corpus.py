#!/usr/bin/env python3
"""
Run every harness on the example-ideal corpus with results in Excel.

Usage:
    python run_corpus.py
    python run_corpus.py --degree 5 --samples 200
    python run_corpus.py --no-quad --verbose
"""
import argparse
import logging
import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / 'src'))

from corpus_runner import run_corpus
from instance import list_instances


def main():
    parser = argparse.ArgumentParser(description='Run duality, resolution and quadrature harnesses on the corpus')
    parser.add_argument('--instances', type=str, default='instances', help='Corpus directory')
    parser.add_argument('--degree', type=int, default=4, help='Monomial degree bound for the duality harness')
    parser.add_argument('--samples', type=int, default=100, help='Random polynomials per duality run')
    parser.add_argument('--output', type=str, default='corpus_results.xlsx', help='Excel output path')
    parser.add_argument('--no-quad', action='store_true', help='Skip the sphere quadrature cross-checks')
    parser.add_argument('--verbose', action='store_true', help='Print harness reports')
    parser.add_argument('--log-level', default='WARNING', help='Logging level')

    args = parser.parse_args()
    logging.basicConfig(level=getattr(logging, args.log_level.upper(), logging.WARNING))

    inst_dir = Path(args.instances)
    if not inst_dir.exists():
        print(f"Error: Instance directory not found: {inst_dir}")
        return 1

    paths = list_instances(inst_dir)
    if not paths:
        print(f"Error: No instances in {inst_dir}")
        return 1

    print(f"{'='*80}")
    print(f"Corpus: {inst_dir} ({len(paths)} instances)")
    print(f"Degree: {args.degree}, samples: {args.samples}")
    print(f"{'='*80}")

    results = run_corpus(
        paths,
        degree=args.degree,
        samples=args.samples,
        output_excel=Path(args.output),
        quadrature=not args.no_quad,
        verbose=args.verbose,
    )
    return 0 if all(r['is_valid'] for r in results) else 1


if __name__ == '__main__':
    sys.exit(main())
