# How close does |00> get to the Bell state (|00> + |11>)/sqrt(2)?
#
# Within photon number n the pair rotates between |00> and |11> at a rate
# omega_n. The rotation is tilted by the qubit splitting, so the overlap
# with the Bell state never reaches one.

import numpy as np

from cavity_entangle import CavityPrep, ModelParams, bell_overlap, block_coefficients

params = ModelParams()
t = np.linspace(0.0, 200.0, 40001)

for n in (0, 10, 20):
    b = block_coefficients(n, 0.0, params)
    f = bell_overlap(CavityPrep.fock(n), t, params)
    print(f"Fock({n:2d}): omega_n = {b.omega_n:.6f}, theta_n = {b.theta_n:.6f}, max overlap = {f.max():.9f}")

for alpha in (0.1, 1.1, 5.0):
    f = bell_overlap(CavityPrep.coherent(alpha), t, params)
    print(f"Coherent({alpha}): max overlap = {f.max():.9f}, min = {f.min():.9f}")
