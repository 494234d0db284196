"""
Handcrafted agents compared
===========================

Runs the three experiment presets with a few seeds and prints mean total
reward per cell. ``room run --preset fig1 --seeds 10 --out fig1.csv`` does
the same from the shell and writes the CSV.
"""

import sys

from room_memory.harness import preset, run_experiment, summarize

seeds = int(sys.argv[1]) if len(sys.argv) > 1 else 3

for name in ("fig1", "fig2", "fig3"):
    results = run_experiment(preset(name, seeds))
    print(f"\n{name}: policy forget answer capacity agents -> mean (std)")
    for (kind, forget, answer, cap, agents), stats in summarize(results).items():
        print(f"  {kind} {forget:<11} {answer:<11} {cap:>3} {agents}  "
              f"{stats['mean']:7.1f} ({stats['std']:.1f})")
