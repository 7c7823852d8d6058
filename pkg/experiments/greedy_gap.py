"""
greedy_gap.py
-------------
Compares the sequential per-sensor link count against the true minimum on
tiny random systems, where the minimum can still be found by brute force.
Also records the per-sensor sum the sequential total can never exceed.

Output:
    experiments/results/greedy_gap.csv
    experiments/results/greedy_gap.png

Usage:
    python experiments/greedy_gap.py
    python experiments/greedy_gap.py --seeds 200 --max-states 6 --max-sensors 4
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

from testing_stuff.oracles import exact_min_links, random_observable_system
from topology.augment import augment_all, independent_link_count

OUT_DIR   = Path('experiments/results')
SEED_BASE = 50_000   # same instances as the acceptance suite


def run(seeds: int, max_states: int, max_sensors: int) -> pd.DataFrame:
    rows = []
    for seed in range(seeds):
        rng = np.random.default_rng(SEED_BASE + seed)
        s = random_observable_system(rng, n_max=max_states, m_max=max_sensors)
        greedy = augment_all(s).total_links
        rows.append({
            'seed'        : SEED_BASE + seed,
            'n'           : s.n,
            'm'           : s.m,
            'greedy'      : greedy,
            'exact'       : exact_min_links(s, upper=greedy),
            'independent' : independent_link_count(s).total_links,
        })
    df = pd.DataFrame(rows)
    df['gap'] = df['greedy'] - df['exact']
    return df


def plot(df: pd.DataFrame, path: Path):
    fig, axes = plt.subplots(1, 2, figsize=(12, 4))

    counts = df['gap'].value_counts().sort_index()
    axes[0].bar(counts.index.astype(str), counts.values)
    axes[0].set_xlabel('sequential - exact (links)'); axes[0].set_ylabel('instances')
    axes[0].set_title('Gap to the exact minimum')

    axes[1].scatter(df['exact'], df['greedy'], alpha=0.6, label='sequential')
    axes[1].scatter(df['exact'], df['independent'], alpha=0.6, marker='x', label='per-sensor sum')
    top = int(max(df['independent'].max(), 1))
    axes[1].plot([0, top], [0, top], 'k--', linewidth=1)
    axes[1].set_xlabel('exact minimum'); axes[1].set_ylabel('links')
    axes[1].set_title('Link totals per instance'); axes[1].legend()

    plt.tight_layout()
    plt.savefig(path, dpi=150)
    print(f"Plot saved to {path}")


def main():
    parser = argparse.ArgumentParser(description='Sequential vs exact link count on tiny systems')
    parser.add_argument('--seeds', type=int, default=50)
    parser.add_argument('--max-states', type=int, default=6)
    parser.add_argument('--max-sensors', type=int, default=4)
    parser.add_argument('--output', type=Path, default=OUT_DIR)
    args = parser.parse_args()

    logging.basicConfig(level=logging.WARNING, format='%(asctime)s [%(levelname)s] %(name)s: %(message)s')
    args.output.mkdir(parents=True, exist_ok=True)

    df = run(args.seeds, args.max_states, args.max_sensors)
    csv_path = args.output / 'greedy_gap.csv'
    df.to_csv(csv_path, index=False)
    print(f"Wrote {len(df)} instances to {csv_path}")

    print("\nGap distribution (sequential - exact):")
    print(df['gap'].value_counts().sort_index().to_string())
    print(f"\nSequential never above per-sensor sum: {(df['greedy'] <= df['independent']).all()}")
    print(f"Sequential optimal on {(df['gap'] == 0).mean():.0%} of instances")

    plot(df, args.output / 'greedy_gap.png')


if __name__ == '__main__':
    main()
