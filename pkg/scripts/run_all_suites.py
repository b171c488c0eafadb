"""Sweep every verification suite over dimensions and seeds and print a summary table.

    python3 scripts/run_all_suites.py --dims 2 3 4 --seeds 0 1 2 --trials 100
"""
import argparse
import sys

from catmeas.instances import RunConfig
from catmeas.suites import run_suite


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dims", type=int, nargs="+", default=[2, 3, 4])
    parser.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2])
    parser.add_argument("--trials", type=int, default=100)
    parser.add_argument("--max-atoms", type=int, default=6)
    parser.add_argument("--fault-inject", action="store_true")
    args = parser.parse_args(argv)

    failures = 0
    print(f"{'dim':>3} {'seed':>5} {'check':<42} {'pass':<5} {'max dev':>10} {'seconds':>8}")
    for d in args.dims:
        for seed in args.seeds:
            cfg = RunConfig(seed=seed, dim=d, max_atoms=args.max_atoms, trials=args.trials, fault_inject=args.fault_inject)
            report = run_suite(cfg)
            for c in report.to_dict()["checks"]:
                dev = c.get("max_deviation")
                dev_s = "inf" if dev is None else f"{dev:.2e}"
                print(f"{d:>3} {seed:>5} {c['name']:<42} {str(c['pass']):<5} {dev_s:>10} {report.wall_clock_seconds:>8.2f}")
            failures += not report.passed
    print(f"\n{failures} failing run(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
