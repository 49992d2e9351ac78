#!/usr/bin/env python3
"""
Run a single job (Groebner basis, membership, resolution, residue, duality check, ...).

Usage:
    python run_job.py residue --vars z,w --ideal "z^2, w^2" --germ "z*w"
    python run_job.py duality-check --vars z,w --ideal "z^2, z*w, w^2" --degree 4 --format json
"""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent / 'src'))

from cli import main


if __name__ == '__main__':
    sys.exit(main())
