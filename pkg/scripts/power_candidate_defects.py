"""Additivity defect of the power candidate xi(M) = (Tr[rho M])^k on the split {1/2, 1/2}.

Compares the measured defect with the closed form 1 - 2^(1-k), which holds for every
unit-trace rho. Also reports whether reconstruction rejects the candidate.
"""
import argparse

from catmeas.born import reconstruct_report
from catmeas.errors import NotAState
from catmeas.naturality import EffectFunctional, check_generalized_measure, effectwise
from catmeas.operators import identity_op


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dim", type=int, default=2)
    parser.add_argument("--max-k", type=int, default=5)
    args = parser.parse_args(argv)

    d = args.dim
    rho = identity_op(d) / d
    half = identity_op(d) * 0.5
    print(f"{'k':>2} {'measured':>12} {'1 - 2^(1-k)':>12} {'reconstruct':>12}")
    for k in range(1, args.max_k + 1):
        t = effectwise(EffectFunctional("power", rho, k=k))
        defect = check_generalized_measure(t, [[half, half]]).decompositions[0]["defect"]
        try:
            reconstruct_report(t, d)
            verdict = "state"
        except NotAState:
            verdict = "NotAState"
        print(f"{k:>2} {defect:>12.6f} {1 - 2.0 ** (1 - k):>12.6f} {verdict:>12}")


if __name__ == "__main__":
    main()
