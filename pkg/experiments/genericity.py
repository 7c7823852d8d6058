"""
genericity.py
-------------
Draws many numeric protocols W on a system's communication pattern and
records, per draw and per sensor, the PBH margin and the reconstruction
error. A structurally DD-observable design should pass almost every draw.

Output:
    experiments/results/genericity_<system>.csv
    experiments/results/genericity_<system>.png

Usage:
    python experiments/genericity.py
    python experiments/genericity.py --system cli/fixtures/fig1_gstar.json --trials 500 --seed 1
"""

import argparse
import logging
import sys
from pathlib import Path

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

# Must come before package imports
sys.path.append(str(Path(__file__).resolve().parent.parent))

from cli.system_file import load_system_file
from topology.structural import check_dd_observability
from verification.pipeline import run_verification

logger = logging.getLogger(__name__)

OUT_DIR        = Path('experiments/results')
DEFAULT_SYSTEM = Path('cli/fixtures/fig1_gstar.json')


def collect(system: Path, trials: int, seed: int) -> pd.DataFrame:
    sf = load_system_file(system)
    structural = check_dd_observability(sf.spec).overall_ok
    print(f"{system.name}: structurally DD-observable = {structural}")

    result = run_verification(sf.spec, seed=seed, trials=trials, on_status=logger.debug)
    rows = [
        {
            'trial'          : trial.trial,
            'seed'           : trial.seed,
            'w_source'       : trial.w_source,
            'sensor'         : s.sensor + 1,
            'observable'     : s.pbh.observable,
            'pbh_margin'     : s.pbh.margin,
            'threshold'      : s.pbh.tolerance,
            'relative_error' : s.reconstruction.relative_error,
        }
        for trial in result.trials
        for s in trial.sensors
    ]
    return pd.DataFrame(rows)


def plot(df: pd.DataFrame, path: Path, title: str):
    fig, axes = plt.subplots(1, 2, figsize=(12, 4))

    rate = df.groupby('sensor')['observable'].mean()
    axes[0].bar(rate.index.astype(str), rate.values)
    axes[0].set_ylim(0, 1.05)
    axes[0].set_xlabel('sensor'); axes[0].set_ylabel('pass rate')
    axes[0].set_title(f'PBH pass rate per sensor ({title})')

    margins = np.log10(df['pbh_margin'].clip(lower=1e-18))
    axes[1].hist(margins, bins=40)
    axes[1].axvline(np.log10(df['threshold'].iloc[0]), color='r', linestyle='--', label='threshold')
    axes[1].set_xlabel('log10 PBH margin'); axes[1].set_ylabel('sensor-trials')
    axes[1].set_title('Margin distribution'); axes[1].legend()

    plt.tight_layout()
    plt.savefig(path, dpi=150)
    print(f"Plot saved to {path}")


def main():
    parser = argparse.ArgumentParser(description='Pass rate of random W draws on a design')
    parser.add_argument('--system', type=Path, default=DEFAULT_SYSTEM)
    parser.add_argument('--trials', type=int, default=100)
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--output', type=Path, default=OUT_DIR)
    parser.add_argument('--verbose', '-v', action='store_true')
    args = parser.parse_args()

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format='%(asctime)s [%(levelname)s] %(name)s: %(message)s')
    args.output.mkdir(parents=True, exist_ok=True)

    df = collect(args.system, args.trials, args.seed)
    stem = args.system.stem
    csv_path = args.output / f'genericity_{stem}.csv'
    df.to_csv(csv_path, index=False)
    print(f"Wrote {len(df)} rows to {csv_path}")

    per_trial = df.groupby('trial')['observable'].all()
    print(f"\nTrials passing for every sensor: {per_trial.sum()}/{len(per_trial)}")
    print(f"Worst reconstruction error on passing trials: "
          f"{df[df['trial'].isin(per_trial[per_trial].index)]['relative_error'].max():.3g}")

    plot(df, args.output / f'genericity_{stem}.png', stem)


if __name__ == '__main__':
    main()
