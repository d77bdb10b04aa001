"""Sample the three cycle(4) condition sets and print them against the closed form.

    python3 scripts/reproduce_tables.py --shots 409600 --seed 7
"""
import argparse
import math

from hardyring.analytic import amplitudes_for_setting, coeffs_from_theta, p_success_analytic
from hardyring.config import MeasurementSetting, build_circuit, builtin_spec, interest_states_rule
from hardyring.sv import postselect_ancillas, probabilities, run_circuit, sample_histogram


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--theta-pi", type=float, default=0.423)
    ap.add_argument("--shots", type=int, default=409_600)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    spec = builtin_spec("cycle4")
    theta = args.theta_pi * math.pi
    coeffs = coeffs_from_theta(theta, spec.n)
    interest = interest_states_rule(spec)
    for setting in (MeasurementSetting.none(), MeasurementSetting.single(1), MeasurementSetting.all(4)):
        circ = build_circuit(spec, theta, setting)
        state, rate = postselect_ancillas(run_circuit(circ), circ.ancillas)
        hist = sample_histogram(probabilities(state), args.shots, args.seed, rate)
        exact = amplitudes_for_setting(spec, coeffs, setting).probabilities()
        print(f"\n{setting.label(spec.n)}  (post-selection rate {rate:.4f})")
        print(f"{'state':>6} {'sampled %':>10} {'exact %':>9}")
        for s, f in hist.frequencies().items():
            if exact[s] > 1e-12 or f:
                print(f"{s:>6} {100 * f:>10.2f} {100 * exact[s]:>9.2f}")
    print(f"\np_success (exact) = {100 * p_success_analytic(spec, coeffs, interest):.3f}%")


if __name__ == "__main__":
    main()
