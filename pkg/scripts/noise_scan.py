"""Diagnostic-suite TVDs and set-1 TVD as the controlled-gate error rate grows.

    python3 scripts/noise_scan.py --shots 100000
"""
import argparse

from hardyring.noise import NoiseModel, appendix_a_suite, hardy_set_tvd


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--shots", type=int, default=100_000)
    ap.add_argument("--p1", type=float, default=0.01)
    ap.add_argument("--p-ro", type=float, default=0.01)
    args = ap.parse_args()

    print(f"{'p_mc':>6} {'set1':>8}  diagnostic circuits")
    for p_mc in (0.0, 0.005, 0.01, 0.02, 0.04):
        model = NoiseModel(args.p1, p_mc, args.p_ro)
        suite = appendix_a_suite(model, shots=args.shots)
        row = " ".join(f"{f['name']}={f['ideal_vs_noisy_tvd']:.4f}" for f in suite["families"])
        print(f"{p_mc:>6} {hardy_set_tvd(model, shots=args.shots):>8.4f}  {row}")


if __name__ == "__main__":
    main()
