# Adiabatic decoherence: fidelity against the vacuum evolution
#
# Each photon number n shifts the qubits by stark*n, so a field with a
# spread of n leaves the qubit pair in a mixture. The fidelity with the
# n = 0 evolution measures how much that costs.

import numpy as np

from cavity_entangle import ModelParams, fidelity_vs_target
from cavity_entangle.scenarios import coherent_from_m

params = ModelParams()
t = np.linspace(0.0, 200.0, 2001)

for m in (0.2, 0.4, 0.7):
    f = fidelity_vs_target(0, coherent_from_m(m, "mean"), "00", t, params)
    print(f"mean photon number {m}: F(0) = {f[0]:.1f}, min F = {f.min():.10f} at t = {t[f.argmin()]:.1f}")

# The loss grows with m. At fixed time, sweep the field strength instead.
ms = np.linspace(0.0, 1.0, 6)
for tt in (13.0, 40.0, 70.0):
    row = [fidelity_vs_target(0, coherent_from_m(m, "mean"), "00", tt, params) for m in ms]
    print(f"t = {tt:4.0f}: " + " ".join(f"{1 - v:.2e}" for v in row))
