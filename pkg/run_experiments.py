"""
Run PDMP experiments from the command line.

Usage:
    python run_experiments.py simulate --preset quadratic-if --epsilon 1e-3 --replicas 1000 --seed 7
    python run_experiments.py sweep-epsilon --config experiment.json --values 1,0.1,0.01,0.001
    python run_experiments.py preset quadratic-if --out quadratic_if.json
"""

import sys

from pdmp_engine.cli import main


if __name__ == "__main__":
    sys.exit(main())
