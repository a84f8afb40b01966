"""How long does reaching the true steady state take?

The slowest decaying eigenvalue of the Liouvillian sets the relaxation time
tau_max.  Near the atomic resonances it is dominated by the slow tunneling
redistribution (kappa*tau_max ~ 1e4 at the reference parameters, i.e. a few
milliseconds); far above them the measurement rate collapses and tau_max
grows without bound.  This script sweeps the detuning, prints tau_max in
both kappa units and seconds, and shows the divergence trend.
"""

from dwcavity.sweeps import SweepConfig, run_spectrum


def main():
    cfg = SweepConfig.from_dict({
        "mode": "spectrum",
        "delta": {"min": 0.0, "max": 5.0, "steps": 11, "units": "U0"},
        "jobs": 4,
    })
    _, rows = run_spectrum(cfg)

    print(f"{'delta/U0':>9} {'kappa*tau_max':>14} {'tau_max [ms]':>13} "
          f"{'stationary modes':>17}")
    for row in rows:
        print(f"{row['delta_over_U0']:9.2f} {row['kappa_tau_max']:14.4g} "
              f"{1e3 * row['tau_max_seconds']:13.4g} "
              f"{row['zero_count']:17d}")
    print("\nBeyond delta/U0 ~ 3 the pump no longer distinguishes the "
          "atomic configurations and relaxation slows down sharply; "
          "experiments must wait several tau_max to see the uniform "
          "steady-state populations.")


if __name__ == "__main__":
    main()
