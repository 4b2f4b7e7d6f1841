"""Acceptance criteria AC1..AC12, one PASS/FAIL line each.

Run under pytest (lines appear in the terminal summary) or directly with
``python tests/test_acceptance.py``.
"""

import json
import subprocess
import sys
import time

import numpy as np
import pytest
from scipy.linalg import expm

from cavity_entangle import ModelParams
from cavity_entangle.dynamics import block_propagators, branch_states, rdm_from_branches
from cavity_entangle.froehlich import effective_model_hamiltonian, oracle_block
from cavity_entangle.hilbert import CavityPrep, commutator, embed_cavity, joint_space, number_operator
from cavity_entangle.metrics import (
    BellState,
    bell_overlap_fock,
    concurrence,
    concurrence_coherent,
    concurrence_curve,
    concurrence_thermal,
    dfs_protocol,
    fidelity_vs_target,
)
from cavity_entangle.scenarios import FIG2_M, FIG4_M, FIG6_ALPHA, FIG7_BETA_E, coherent_from_m
from cavity_entangle.validation import (
    ensemble_gap,
    froehlich_residual,
    generator_gap,
    non_decreasing,
    non_increasing,
    random_params,
    random_pure_concurrence_gap,
    scaling_slope,
)

RESULTS: dict[str, str] = {}
DEFAULTS = ModelParams()
TIMES = np.linspace(0.0, 200.0, 2001)
PARAM_SETS = [DEFAULTS.with_cutoff(8)] + random_params(20, cutoff=8)


def record(ac: str, ok: bool, detail: str) -> None:
    RESULTS[ac] = f"{'PASS' if ok else 'FAIL'} {ac}: {detail}"
    print(RESULTS[ac])
    assert ok, detail


def test_ac1_froehlich_condition():
    start = time.perf_counter()
    worst = max(froehlich_residual(p) for p in PARAM_SETS)
    elapsed = time.perf_counter() - start
    record("AC1", worst < 1e-8 and elapsed < 5, f"residual {worst:.2e} < 1e-8 over {len(PARAM_SETS)} sets in {elapsed:.2f} s (< 5 s)")


def test_ac2_generator_agreement():
    worst = max(generator_gap(p) for p in PARAM_SETS)
    record("AC2", worst < 1e-8, f"max |S_model - S_generic| = {worst:.2e} < 1e-8")


def test_ac3_second_order_scaling():
    slope, errs = scaling_slope(DEFAULTS)
    record("AC3", abs(slope - 3) <= 0.3,
           f"log-log slope {slope:.3f} (target 3 +/- 0.3), errors {', '.join(f'{e:.2e}' for e in errs)}")


def test_ac4_photon_number_conservation():
    p = DEFAULTS.with_cutoff(10)
    h = effective_model_hamiltonian(p)
    comm = commutator(h, embed_cavity(number_operator(10), joint_space(10))).max_abs()
    record("AC4", comm == 0.0, f"||[H_eff^RWA, a^dag a]||_max = {comm!r}")


def test_ac5_closed_form_blocks():
    ns = (0, 1, 5)
    u_cf = block_propagators(list(ns), TIMES, DEFAULTS)
    gap = 0.0
    for k, n in enumerate(ns):
        h = oracle_block(n, DEFAULTS) - DEFAULTS.omega * n * np.eye(4)
        for i, t in enumerate(TIMES):
            col = expm(-1j * h * t)[:, 0]
            ref = np.abs(col[[0, 3]]) ** 2
            got = np.abs(u_cf[i, k, [0, 3], 0]) ** 2
            gap = max(gap, float(np.max(np.abs(ref - got))))
    record("AC5", gap < 1e-10, f"max ||c1|^2, |c2|^2 gap| vs expm = {gap:.2e} < 1e-10 for n in {ns}")


def test_ac6_adiabatic_decoherence_trend():
    lines, ok = [], True
    for m_is in ("amplitude", "mean"):
        curves = [fidelity_vs_target(0, coherent_from_m(m, m_is), "00", TIMES, DEFAULTS) for m in FIG2_M]
        fmax = [float(np.max(c)) for c in curves]
        fmin = [float(np.min(c)) for c in curves]
        at0 = all(c[0] == 1.0 for c in curves)
        good = non_increasing(fmax) and bool(np.all(np.diff(fmin) < 0)) and at0
        ok &= good
        lines.append(f"{m_is}: 1-max {[f'{1 - v:.2e}' for v in fmax]}, 1-min {[f'{1 - v:.2e}' for v in fmin]}, F(0)=1 {at0}")
    record("AC6", ok, "; ".join(lines))


def test_ac7_imperfect_gate():
    dense = np.linspace(0.0, 200.0, 40001)
    fmax = [float(np.max(bell_overlap_fock(m, dense, DEFAULTS))) for m in FIG4_M]
    ok = max(fmax) < 1 - 1e-6 and non_increasing(fmax)
    record("AC7", ok, f"max f_m for m in {FIG4_M}: {[round(v, 9) for v in fmax]} (< 1 - 1e-6, non-increasing)")


def test_ac8_dfs_protocol():
    preps = [CavityPrep.fock(0), CavityPrep.fock(5), CavityPrep.coherent(1.1), CavityPrep.thermal(2.0)]
    res = [dfs_protocol(DEFAULTS, prep=p) for p in preps]
    conc = [r.achieved_concurrence for r in res]
    j = res[0].exchange
    grid = np.linspace(0.0, 2 * np.pi / abs(j), 2001)
    pur = 0.0
    for p in preps:
        b = branch_states(p, "01", grid, DEFAULTS)
        rho = rdm_from_branches(b.weights, b.states)
        pur = max(pur, float(np.max(np.abs(np.einsum("tij,tji->t", rho, rho).real - 1))))
    dev = max(abs(c - 1) for c in conc)
    spread = max(conc) - min(conc)
    r = res[0]
    ok = dev < 1e-10 and spread < 1e-10 and pur < 1e-10
    record("AC8", ok, f"t_star {r.t_star:.4f}, |C-1| {dev:.1e}, spread {spread:.1e}, purity defect {pur:.1e}; "
                      f"closed-form time {r.printed_time:.4f}, ratio t_star/that {r.time_ratio:.4f} (reported only)")


def test_ac9_concurrence_oracle():
    gap = random_pure_concurrence_gap(1000)
    bell = [concurrence(np.outer(b.vector(), b.vector().conj())) for b in BellState]
    rng = np.random.default_rng(7)
    prod = []
    for _ in range(100):
        a, b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        psi = np.kron(a / np.linalg.norm(a), b / np.linalg.norm(b))
        prod.append(concurrence(np.outer(psi, psi.conj())))
    ok = gap < 1e-10 and all(abs(c - 1) < 1e-10 for c in bell) and max(prod) < 1e-10
    record("AC9", ok, f"pure-state gap {gap:.1e} (1000 trials), Bell {min(bell):.12f}, product max {max(prod):.1e}")


def test_ac10_concurrence_trends():
    coh = [float(np.max(concurrence_coherent(a, TIMES, DEFAULTS))) for a in FIG6_ALPHA]
    th = [float(np.max(concurrence_thermal(b, TIMES, DEFAULTS))) for b in FIG7_BETA_E]
    vac = float(np.max(np.abs(concurrence_thermal(50.0, TIMES, DEFAULTS) - concurrence_curve(CavityPrep.fock(0), TIMES, DEFAULTS))))
    ok = non_increasing(coh) and non_decreasing(th) and vac < 1e-8
    record("AC10", ok, f"coherent max {[round(v, 6) for v in coh]} (want non-increasing), "
                       f"thermal max {[round(v, 6) for v in th]} (want non-decreasing), betaE=50 vs vacuum {vac:.1e}")


def test_ac11_ensemble_equivalence():
    preps = [CavityPrep.fock(n) for n in (0, 1, 5)] + [CavityPrep.coherent(a) for a in (0.5, 1.1, 3.0)] + \
            [CavityPrep.thermal(b) for b in (0.7, 2.0, 6.0)]
    gap = max(ensemble_gap(DEFAULTS, p, init, [0.0, 13.0, 70.0, 200.0])
              for p in preps for init in ("00", "01", "10", "11", "bell+"))
    record("AC11", gap < 1e-9, f"max RDM gap {gap:.1e} < 1e-9 over {len(preps)} preps x 5 initial states")


def _validate(*extra):
    start = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "cavity_entangle", "validate", "--json", *extra], capture_output=True, text=True)
    return proc, time.perf_counter() - start


def test_ac12_validate_runtime_and_mutation():
    proc, elapsed = _validate()
    report = json.loads(proc.stdout)
    expected = 1 if report["failed"] else 0
    mutated, _ = _validate("--coupling-sign", "1")
    mreport = json.loads(mutated.stdout)
    c05 = next(c for c in mreport["checks"] if c["id"] == "C05")
    ok = elapsed < 120 and proc.returncode == expected and mutated.returncode != 0 and not c05["passed"]
    record("AC12", ok, f"validate ran {len(report['checks'])} checks in {elapsed:.1f} s (< 120 s), exit {proc.returncode}; "
                       f"flipped coupling sign exits {mutated.returncode} with C05 failing ({c05['measured']:.3f})")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
