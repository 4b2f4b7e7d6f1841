# Concurrence generated from |00> for coherent and thermal fields
#
# The qubit pair starts unentangled. Its concurrence (Wootters) is
# computed from the reduced density matrix averaged over photon numbers.

import numpy as np

from cavity_entangle import CavityPrep, EffectiveForm, ModelParams, concurrence_coherent, concurrence_curve, concurrence_thermal

params = ModelParams()
t = np.linspace(0.0, 200.0, 2001)

for alpha in (0.1, 1.1, 3.0):
    c = concurrence_coherent(alpha, t, params)
    print(f"coherent alpha = {alpha}: max C = {c.max():.6f} at t = {t[c.argmax()]:.1f}")

for beta_e in (0.7, 2.0, 6.0):
    c = concurrence_thermal(beta_e, t, params)
    print(f"thermal betaE = {beta_e}: max C = {c.max():.6f}")

# A cold thermal field is the vacuum.
vac = concurrence_curve(CavityPrep.fock(0), t, params)
print("betaE = 50 vs vacuum:", np.max(np.abs(concurrence_thermal(50.0, t, params) - vac)))

# The printed closed form for the thermal field is not a concurrence: it
# exceeds one at these parameters.
cf = concurrence_thermal(2.0, t, params, mode="closed-form")
print(f"closed-form thermal expression: max {cf.max():.3f}")

# The ordering of the peaks hinges on the sign of the Stark term. The
# printed rotating-wave form has it the other way round, and with it the
# peaks fall with alpha and rise with betaE instead. Its spectrum is
# visibly off from exact diagonalisation, though.
printed = EffectiveForm("rwa", "printed")
print("printed form, coherent:", [round(float(concurrence_coherent(a, t, params, printed).max()), 7) for a in (0.1, 1.1, 3.0)])
print("printed form, thermal: ", [round(float(concurrence_thermal(b, t, params, printed).max()), 7) for b in (0.7, 2.0, 6.0)])
