"""Command-line front end.

Flags override values from ``--config file.toml``, which override the
built-in defaults.  Curves go out as CSV (``%.17g``) with a ``.meta.json``
sidecar; reports and derivations go out as JSON.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

import numpy as np

from .dynamics import branch_states, evolve_exact_many, rdm_from_branches
from .errors import ConsistencyError, CutoffError, DegeneracyError, RegimeWarning, ResonanceError, StateError
from .froehlich import (
    DERIVED,
    FULL,
    PRINTED,
    RWA,
    EffectiveForm,
    ModelParams,
    block_hamiltonian,
    delta_coefficients,
    effective_coefficients,
    effective_model_hamiltonian,
    oracle_block,
    resolve_coupling_sign,
)
from .hilbert import PAPER_LITERAL, STANDARD, CavityPrep, prepare_cavity, qubit_state, resolve_cutoff, tensor_states
from .metrics import BellState, MetricCurve, _concurrence_raw, dfs_protocol
from .scenarios import custom_scenario, dumps, figure_scenario, format_csv, run_scenario, write_text
from .validation import run_validation

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

DEFAULTS = {
    "omega": 1.0,
    "omega_j": 0.3,
    "g": 0.02,
    "cutoff": None,
    "t_max": 200.0,
    "t_steps": 2001,
    "weights": None,
    "form": RWA,
    "m_is": "mean",
    "paper_literal": False,
    "coupling_sign": None,
}
CONFIG_KEYS = tuple(DEFAULTS)


def _common(p: argparse.ArgumentParser) -> None:
    # defaults are None so that "not given" can be told apart from a value
    p.add_argument("--omega", type=float, help="cavity frequency (default 1.0)")
    p.add_argument("--omega-j", dest="omega_j", type=float, help="qubit half-splitting (default 0.3)")
    p.add_argument("--g", type=float, help="qubit-cavity coupling (default 0.02)")
    p.add_argument("--cutoff", type=int, help="Fock levels kept (default: smallest meeting the 1e-10 tail criterion)")
    p.add_argument("--t-max", dest="t_max", type=float, help="end of the time grid (default 200)")
    p.add_argument("--t-steps", dest="t_steps", type=int, help="points on the time grid (default 2001)")
    p.add_argument("--weights", choices=[STANDARD, PAPER_LITERAL], help="coherent-state weights")
    p.add_argument("--form", choices=[RWA, FULL], help="effective Hamiltonian variant (default rwa)")
    p.add_argument("--m-is", dest="m_is", choices=["amplitude", "mean"], help="reading of m for coherent fields (default mean)")
    p.add_argument("--paper-literal", dest="paper_literal", action="store_const", const=True,
                   help="use the printed coefficients and k!k! weights instead of the derived ones")
    p.add_argument("--coupling-sign", dest="coupling_sign", type=int, choices=[-1, 1],
                   help="force the sign of the sx sx exchange (default: resolved from the generic engine)")
    p.add_argument("--config", type=Path, help="TOML file with any of the options above")
    p.add_argument("--out", type=Path, help="output file (default: stdout)")


def _prep_arg(p: argparse.ArgumentParser, default="coherent:1.1") -> None:
    p.add_argument("--prep", default=default, help="cavity field as kind:value, e.g. fock:3, coherent:1.1, thermal:2")
    p.add_argument("--init", default="00", help="initial qubit state: 00, 01, 10, 11 or bell+")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cavity-entangle", description="Two charge qubits coupled through an off-resonant cavity")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("derive", help="effective Hamiltonian coefficients and photon-number blocks")
    _common(p)
    p.add_argument("--json", action="store_true", help="print JSON instead of text")
    p.add_argument("--compare", action="store_true", help="also show the printed closed forms and their gaps")

    p = sub.add_parser("evolve", help="qubit populations, purity and concurrence over time")
    _common(p)
    _prep_arg(p)

    p = sub.add_parser("fidelity", help="overlap with the ideal evolution for a Fock target")
    _common(p)
    _prep_arg(p)
    p.add_argument("--target-m", dest="target_m", type=int, default=0, help="Fock index of the ideal evolution")

    p = sub.add_parser("bell-overlap", help="overlap with (|00> + |11>)/sqrt2")
    _common(p)
    _prep_arg(p)

    p = sub.add_parser("concurrence", help="Wootters or printed closed-form concurrence")
    _common(p)
    _prep_arg(p)
    p.add_argument("--mode", choices=["wootters", "closed-form"], default="wootters")

    p = sub.add_parser("dfs", help="entangling times inside span{|01>, |10>}")
    _common(p)

    p = sub.add_parser("figure", help="regenerate one of the figure families")
    p.add_argument("number", type=int, choices=range(2, 8), metavar="N", help="figure number, 2..7")
    _common(p)
    p.add_argument("--m-max", dest="m_max", type=float, default=1.0, help="figure 3: largest m")
    p.add_argument("--m-steps", dest="m_steps", type=int, default=101, help="figure 3: points on the m grid")
    p.add_argument("--mode", choices=["wootters", "closed-form"], default="wootters", help="figures 6 and 7")

    p = sub.add_parser("validate", help="run every oracle comparison; nonzero exit on any failure")
    _common(p)
    p.add_argument("--json", action="store_true", help="print the JSON report to stdout")
    return ap


def load_config(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    if args.config is not None:
        with open(args.config, "rb") as fh:
            data = tomllib.load(fh)
        data = {k.replace("-", "_"): v for k, v in data.items()}
        unknown = sorted(set(data) - set(CONFIG_KEYS))
        if unknown:
            raise ValueError(f"unknown config keys in {args.config}: {', '.join(unknown)}")
        cfg.update(data)
    for key in CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    if cfg["weights"] is None:
        cfg["weights"] = PAPER_LITERAL if cfg["paper_literal"] else STANDARD
    return cfg


def params_from(cfg: dict) -> ModelParams:
    return ModelParams(float(cfg["omega"]), float(cfg["omega_j"]), float(cfg["g"]), cfg["cutoff"])


def form_from(cfg: dict) -> EffectiveForm:
    return EffectiveForm(cfg["form"], PRINTED if cfg["paper_literal"] else DERIVED, cfg["coupling_sign"])


def parse_prep(text: str, weights: str = STANDARD) -> CavityPrep:
    kind, _, value = text.partition(":")
    if not value:
        raise ValueError(f"--prep needs kind:value, got {text!r}")
    if kind == "fock":
        return CavityPrep.fock(int(value))
    if kind == "coherent":
        return CavityPrep.coherent(complex(value.replace(" ", "")), weights)
    if kind == "thermal":
        return CavityPrep.thermal(float(value))
    raise ValueError(f"unknown preparation kind {kind!r}; use fock, coherent or thermal")


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        write_text(out, text)


def _curve_out(curve: MetricCurve, out: Path | None, cfg: dict) -> None:
    if out is None:
        sys.stdout.write(format_csv(curve))
        return
    write_text(out, format_csv(curve))
    write_text(out.with_name(out.name + ".meta.json"), dumps({**curve.meta, "config": cfg}))


def _times(cfg: dict) -> np.ndarray:
    if cfg["t_steps"] < 2 or cfg["t_max"] <= 0:
        raise ValueError("need --t-max > 0 and --t-steps >= 2")
    return np.linspace(0.0, float(cfg["t_max"]), int(cfg["t_steps"]))


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def derive_report(params: ModelParams, form: EffectiveForm = EffectiveForm(), compare: bool = False) -> dict:
    d = delta_coefficients(params)
    sign = resolve_coupling_sign(params)

    def coeffs(f):
        c = effective_coefficients(params, f)
        return {"stark": c.stark, "lamb": c.lamb, "squeeze": c.squeeze, "exchange": c.exchange, "offset": c.offset,
                "form": c.form.describe()}

    blocks = {}
    for n in (0, 1, 2):
        blocks[str(n)] = {
            "closed_form": np.real(block_hamiltonian(n, params, EffectiveForm(RWA, form.convention, form.coupling_sign)).matrix).tolist(),
            "generic_engine": np.real(oracle_block(n, params)).tolist(),
        }
    stark = effective_coefficients(params, form).stark
    coefficients = {
        "derived_rwa": coeffs(EffectiveForm(RWA, DERIVED)),
        "derived_full": coeffs(EffectiveForm(FULL, DERIVED)),
    }
    if compare:
        coefficients["printed_rwa"] = coeffs(EffectiveForm(RWA, PRINTED))
        coefficients["printed_full"] = coeffs(EffectiveForm(FULL, PRINTED))
        for n, b in blocks.items():
            printed = block_hamiltonian(int(n), params, EffectiveForm(RWA, PRINTED)).matrix.real
            b["printed_rwa_gap"] = float(np.max(np.abs(printed - np.array(b["generic_engine"]))))
            b["derived_rwa_gap"] = float(np.max(np.abs(np.array(b["closed_form"]) - np.array(b["generic_engine"]))))
    return {
        "params": params.as_dict(),
        "delta_plus": d.delta_plus,
        "delta_minus": d.delta_minus,
        "coupling_sign": {
            "generic_engine": sign,
            "supports": "full form, exchange -g^2 D+ sx1 sx2" if sign < 0 else "rwa form, exchange +g^2 D+ sx1 sx2",
        },
        "stark_term_zero": stark == 0.0,
        "coefficients": coefficients,
        "selected_form": form.resolved(params).describe(),
        "blocks_rwa": blocks,
        "basis": ["00", "01", "10", "11"],
    }


def _derive_text(rep: dict) -> str:
    lines = [
        f"omega={rep['params']['omega']:g} omega_j={rep['params']['omega_j']:g} g={rep['params']['g']:g}",
        f"Delta+ = {rep['delta_plus']:.12g}",
        f"Delta- = {rep['delta_minus']:.12g}",
        f"exchange sign from the generic engine: {rep['coupling_sign']['generic_engine']:+d} ({rep['coupling_sign']['supports']})",
    ]
    if rep["stark_term_zero"]:
        lines.append("photon-number Stark term a^dag a (sz1 + sz2): identically zero")
    for name, c in rep["coefficients"].items():
        lines.append(
            f"{name:13s} stark={c['stark']:+.6e} lamb={c['lamb']:+.6e} squeeze={c['squeeze']:+.6e} "
            f"exchange={c['exchange']:+.6e} offset={c['offset']:+.6e}"
        )
    for n, b in rep["blocks_rwa"].items():
        lines.append(f"H_eff block n={n} (basis 00, 01, 10, 11), closed form:")
        lines.extend("  " + " ".join(f"{v:+.10f}" for v in row) for row in b["closed_form"])
        if "printed_rwa_gap" in b:
            lines.append(f"  max gap to generic engine: closed form {b['derived_rwa_gap']:.3e}, printed rwa {b['printed_rwa_gap']:.3e}")
    return "\n".join(lines) + "\n"


def cmd_derive(args, cfg) -> int:
    rep = derive_report(params_from(cfg), form_from(cfg), args.compare)
    if args.out is not None:
        write_text(args.out, dumps(rep))
    if args.json:
        sys.stdout.write(dumps(rep))
    elif args.out is None:
        sys.stdout.write(_derive_text(rep))
    return 0


def cmd_evolve(args, cfg) -> int:
    params, form, times = params_from(cfg), form_from(cfg), _times(cfg)
    prep = parse_prep(args.prep, cfg["weights"])
    if form.variant == RWA:
        b = branch_states(prep, args.init, times, params, form)
        rho = rdm_from_branches(b.weights, b.states)
    else:
        # a^2 terms mix photon numbers, so evolve on the joint space
        cutoff = resolve_cutoff(prep, params.cutoff)
        p = params.with_cutoff(cutoff)
        psi = tensor_states(qubit_state(args.init), prepare_cavity(prep, cutoff))
        states = evolve_exact_many(effective_model_hamiltonian(p, form), psi, times)
        if states.ndim == 2:
            s = states.reshape(len(times), 4, cutoff)
            rho = np.einsum("tin,tjn->tij", s, s.conj())
        else:
            s = states.reshape(len(times), 4, cutoff, 4, cutoff)
            rho = np.einsum("tinjn->tij", s)
    pops = np.real(np.einsum("tii->ti", rho))
    purity = np.real(np.einsum("tij,tji->t", rho, rho))
    conc = _concurrence_raw(rho)
    names = ["p00", "p01", "p10", "p11", "purity", "concurrence"]
    meta = {
        "scenario": "evolve",
        "metric": "qubit populations",
        "params": params.as_dict(),
        "form": form.resolved(params).describe(),
        "prep": prep.label(),
        "qubit_init": args.init,
        "series": [{"name": n} for n in names],
    }
    curve = MetricCurve(times, np.column_stack([pops, purity, conc]), meta)
    _curve_out(curve, args.out, cfg)
    return 0


def _custom(args, cfg, metric: str, **kw) -> int:
    prep = parse_prep(args.prep, cfg["weights"])
    s = custom_scenario(metric, prep, params_from(cfg), cfg["t_max"], cfg["t_steps"], args.init, form_from(cfg), **kw)
    _curve_out(run_scenario(s), args.out, cfg)
    return 0


def cmd_fidelity(args, cfg) -> int:
    return _custom(args, cfg, "fidelity", target_m=args.target_m)


def cmd_bell_overlap(args, cfg) -> int:
    return _custom(args, cfg, "bell_overlap")


def cmd_concurrence(args, cfg) -> int:
    return _custom(args, cfg, "concurrence", mode=args.mode)


def cmd_dfs(args, cfg) -> int:
    params, form = params_from(cfg), form_from(cfg)
    preps = [CavityPrep.fock(0), CavityPrep.fock(5), CavityPrep.coherent(1.1, cfg["weights"]), CavityPrep.thermal(2.0)]
    rep = {"params": params.as_dict(), "form": form.resolved(params).describe(), "targets": {}}
    for which in (BellState.PSI_01_MINUS_I, BellState.PSI_10_PLUS_I):
        runs = [dfs_protocol(params, form, which, p) for p in preps]
        rep["targets"][which.value] = {
            "t_star": runs[0].t_star,
            "printed_time": runs[0].printed_time,
            "ratio": runs[0].time_ratio,
            "exchange": runs[0].exchange,
            "concurrence": {p.label(): r.achieved_concurrence for p, r in zip(preps, runs)},
        }
    _emit(dumps(rep), args.out)
    return 0


def cmd_figure(args, cfg) -> int:
    s = figure_scenario(
        args.number,
        params_from(cfg),
        t_max=cfg["t_max"],
        t_steps=cfg["t_steps"],
        weights=cfg["weights"],
        m_is=cfg["m_is"],
        form=form_from(cfg),
        m_max=args.m_max,
        m_steps=args.m_steps,
        mode=args.mode,
    )
    _curve_out(run_scenario(s), args.out, cfg)
    return 0


def cmd_validate(args, cfg) -> int:
    params = params_from(cfg)
    report = run_validation(params, cfg["coupling_sign"], cfg["t_max"], cfg["t_steps"])
    report.environment["config"] = cfg
    text = report.to_json()
    if args.out is not None:
        write_text(args.out, text)
    if args.json:
        sys.stdout.write(text)
    else:
        sys.stdout.write(report.summary() + "\n")
        sys.stdout.write(("all checks passed" if report.passed else "failed: " + ", ".join(report.failed())) + "\n")
    return 0 if report.passed else 1


COMMANDS = {
    "derive": cmd_derive,
    "evolve": cmd_evolve,
    "fidelity": cmd_fidelity,
    "bell-overlap": cmd_bell_overlap,
    "concurrence": cmd_concurrence,
    "dfs": cmd_dfs,
    "figure": cmd_figure,
    "validate": cmd_validate,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        with warnings.catch_warnings():
            warnings.simplefilter("always", RegimeWarning)
            return COMMANDS[args.command](args, cfg)
    except ResonanceError as exc:
        print(f"error: resonance guard: {exc}", file=sys.stderr)
        return 2
    except CutoffError as exc:
        hint = f" (use --cutoff {exc.minimal_cutoff} or more)" if exc.minimal_cutoff else ""
        print(f"error: {exc}{hint}", file=sys.stderr)
        return 2
    except (DegeneracyError, StateError, ConsistencyError, ValueError, OSError, tomllib.TOMLDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
