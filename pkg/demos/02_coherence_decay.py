"""Measurement-induced decay of atomic coherences.

Each atomic configuration |m> drives the cavity into its own coherent state,
so the leaking field carries which-path information about the atom number in
the coupled well.  The atomic coherences rho_a^{mn} therefore decay at a
rate set by the distinguishability of the conditional field states:

    1/tau_mn ~ kappa U0^2 eta^2 (m - n)^2 /
               ([kappa^2 + (delta - U0 m)^2][kappa^2 + (delta - U0 n)^2]).

With tunneling frozen the decay is purely of this measurement type.  The
script propagates the frozen-tunneling master equation and fits the decay
rate of |rho_a^{01}|, comparing with the prediction above.
"""

import numpy as np

from dwcavity import (
    HilbertSpace,
    ModelParams,
    TruncationConfig,
    build_hamiltonian,
    build_liouvillian,
    evolve_expm,
    ground_state,
    initial_state,
)
from dwcavity.analytic import decoherence_time, fit_decay_rate
from dwcavity.propagate import atomic_rdm


def main():
    params = ModelParams.reference()
    trunc = TruncationConfig()
    space = HilbertSpace(params.N, trunc.fock_cutoff)
    gs = ground_state(params.N, params.t, params.u)
    rho0 = initial_state(gs, space)

    print(f"{'delta/U0':>9} {'tau_01 (pred)':>14} {'fit 1/rate':>11} "
          f"{'rel err':>9}")
    for x in (0.0, 0.5, 1.0):
        p = params.replace(delta=x * params.U0, t=0.0)
        tau01 = decoherence_time(0, 1, p).tau_mn
        horizon = 3.0 * tau01
        taus = np.linspace(horizon / 40.0, horizon, 40)
        _, _, H = build_hamiltonian(p, space)
        L = build_liouvillian(H, 1.0, space)
        cohs = [atomic_rdm(rho, space)[0, 1]
                for _, rho in evolve_expm(rho0, L, taus, trunc)]
        rate = fit_decay_rate(taus, cohs, window=(20.0, horizon))
        print(f"{x:9.2f} {tau01:14.2f} {1.0 / rate:11.2f} "
              f"{abs(rate * tau01 - 1.0):9.2e}")
    print("\nCoherences survive longest when both configurations scatter "
          "the pump equally poorly (detuning far from both resonances).")


if __name__ == "__main__":
    main()
