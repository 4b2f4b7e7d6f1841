"""Figure presets and custom sweeps, written as CSV with a JSON sidecar."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .froehlich import DERIVED, PRINTED, RWA, EffectiveForm, ModelParams
from .hilbert import PAPER_LITERAL, STANDARD, CavityPrep, qubit_state
from .metrics import (
    MetricCurve,
    bell_overlap,
    concurrence_coherent,
    concurrence_curve,
    concurrence_thermal,
    fidelity_vs_target,
)

METRICS = ("fidelity", "bell_overlap", "concurrence")
FIGURES = ("fig2", "fig3", "fig4", "fig5", "fig6", "fig7")
TIME_UNIT = "1/omega with hbar = 1 (times are in the units of the frequencies given)"

FIG2_M = (0.2, 0.4, 0.7)
FIG3_TIMES = (13.0, 40.0, 70.0)
FIG4_M = (0, 10, 20)
FIG5_ALPHA = (0.1, 1.1, 5.0)
FIG6_ALPHA = (0.1, 1.1, 3.0)
FIG7_BETA_E = (0.7, 2.0, 6.0)


@dataclass(frozen=True)
class Series:
    name: str
    prep: CavityPrep | None = None
    value: float | None = None  # fixed time for parameter sweeps


@dataclass
class Scenario:
    """Everything needed to regenerate one curve family.

    ``grid`` is a time grid unless ``sweep == "m"``, in which case it is the
    grid of coherent-field parameters m and each series fixes a time.
    """

    name: str
    params: ModelParams
    metric: str
    series: list[Series]
    grid: np.ndarray
    qubit_init: str | np.ndarray = "00"
    sweep: str = "time"
    form: EffectiveForm = field(default_factory=EffectiveForm)
    weights: str = STANDARD
    m_is: str = "mean"
    target_m: int = 0
    mode: str = "wootters"

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}, got {self.metric!r}")
        if self.sweep not in ("time", "m"):
            raise ValueError(f"sweep must be 'time' or 'm', got {self.sweep!r}")
        if self.grid.ndim != 1 or len(self.grid) < 1:
            raise ValueError("grid must be a non-empty 1-D array")
        if np.any(np.diff(self.grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        if self.sweep == "time" and self.grid[0] < 0:
            raise ValueError("times must be non-negative")
        if self.sweep == "m" and self.grid[0] < 0:
            raise ValueError("m grid must be non-negative")
        if self.m_is not in ("amplitude", "mean"):
            raise ValueError(f"--m-is must be 'amplitude' or 'mean', got {self.m_is!r}")
        if not self.series:
            raise ValueError("a scenario needs at least one series")
        names = [s.name for s in self.series]
        if len(set(names)) != len(names):
            raise ValueError(f"series names must be unique: {names}")
        qubit_state(self.qubit_init)  # validates the label or vector

    def coherent_from_m(self, m: float) -> CavityPrep:
        return coherent_from_m(m, self.m_is, self.weights)

    def describe(self) -> dict:
        init = self.qubit_init if isinstance(self.qubit_init, str) else [str(c) for c in np.asarray(self.qubit_init)]
        return {
            "scenario": self.name,
            "metric": self.metric,
            "sweep": self.sweep,
            "params": self.params.as_dict(),
            "form": self.form.resolved(self.params).describe(),
            "weights": self.weights,
            "m_is": self.m_is,
            "target_m": self.target_m,
            "concurrence_mode": self.mode,
            "qubit_init": init,
            "series": [
                {"name": s.name, "prep": s.prep.label() if s.prep else None, "time": s.value} for s in self.series
            ],
            "grid": {"start": float(self.grid[0]), "stop": float(self.grid[-1]), "points": int(len(self.grid))},
            "time_unit": TIME_UNIT,
        }


def coherent_from_m(m: float, m_is: str = "mean", weights: str = STANDARD) -> CavityPrep:
    """Coherent field labelled by m: alpha = m ("amplitude") or |alpha|^2 = m ("mean")."""
    if m_is not in ("amplitude", "mean"):
        raise ValueError(f"m_is must be 'amplitude' or 'mean', got {m_is!r}")
    return CavityPrep.coherent(m if m_is == "amplitude" else np.sqrt(m), weights)


def _evaluate(s: Scenario, prep: CavityPrep, t):
    if s.metric == "fidelity":
        return fidelity_vs_target(s.target_m, prep, s.qubit_init, t, s.params, s.form)
    if s.metric == "bell_overlap":
        return bell_overlap(prep, t, s.params, s.form, s.qubit_init)
    if s.mode == "closed-form":
        if prep.kind == "coherent":
            return concurrence_coherent(prep.value, t, s.params, s.form, "closed-form", prep.weights)
        if prep.kind == "thermal":
            return concurrence_thermal(prep.value, t, s.params, s.form, "closed-form")
        raise ValueError("closed-form concurrence exists only for coherent and thermal fields")
    return concurrence_curve(prep, t, s.params, s.form, s.qubit_init)


def compute(s: Scenario) -> MetricCurve:
    cols = []
    for ser in s.series:
        if s.sweep == "time":
            cols.append(np.asarray(_evaluate(s, ser.prep, s.grid), dtype=float))
        else:
            cols.append(np.array([_evaluate(s, s.coherent_from_m(m), ser.value) for m in s.grid], dtype=float))
    meta = s.describe()
    meta["metric"] = s.metric
    closed = s.metric == "concurrence" and s.mode == "closed-form"
    if closed:
        meta["note"] = "printed closed form, not clamped; Wootters mode is authoritative"
    return MetricCurve(s.grid, np.column_stack(cols), meta, bounded=not closed)


def format_csv(curve: MetricCurve) -> str:
    names = [ser["name"] for ser in curve.meta["series"]]
    lines = [",".join(["abscissa", *names])]
    values = np.atleast_2d(curve.values.T).T
    for x, row in zip(curve.abscissa, values):
        lines.append(",".join("%.17g" % v for v in (x, *row)))
    return "\n".join(lines) + "\n"


def write_text(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"


def run_scenario(s: Scenario, out: str | Path | None = None, config: dict | None = None) -> MetricCurve:
    """Compute the scenario; with ``out`` also write ``out`` (CSV) and ``out.meta.json``."""
    curve = compute(s)
    if out is not None:
        out = Path(out)
        write_text(out, format_csv(curve))
        meta = dict(curve.meta)
        if config is not None:
            meta["config"] = config
        write_text(out.with_name(out.name + ".meta.json"), dumps(meta))
    return curve


# --------------------------------------------------------------------------
# presets
# --------------------------------------------------------------------------


def preset_form(paper_literal: bool, variant: str = RWA, coupling_sign: int | None = None) -> EffectiveForm:
    return EffectiveForm(variant, PRINTED if paper_literal else DERIVED, coupling_sign)


def figure_scenario(
    number: int | str,
    params: ModelParams = ModelParams(),
    t_max: float = 200.0,
    t_steps: int = 2001,
    weights: str = STANDARD,
    m_is: str = "mean",
    form: EffectiveForm = EffectiveForm(),
    m_max: float = 1.0,
    m_steps: int = 101,
    mode: str = "wootters",
) -> Scenario:
    """Preset for one of the figure families 2..7."""
    name = f"fig{int(str(number).removeprefix('fig'))}"
    if name not in FIGURES:
        raise ValueError(f"figure must be one of 2..7, got {number!r}")
    if t_steps < 2 or t_max <= 0:
        raise ValueError("need t_max > 0 and at least two time steps")
    times = np.linspace(0.0, t_max, int(t_steps))
    common = dict(params=params, form=form, weights=weights, m_is=m_is, mode=mode)

    if name == "fig2":
        series = [Series(f"m={m:g}", coherent_from_m(m, m_is, weights)) for m in FIG2_M]
        return Scenario(name, metric="fidelity", series=series, grid=times, **common)
    if name == "fig3":
        grid = np.linspace(0.0, m_max, int(m_steps))
        series = [Series(f"t={t:g}", value=t) for t in FIG3_TIMES]
        return Scenario(name, metric="fidelity", series=series, grid=grid, sweep="m", **common)
    if name == "fig4":
        series = [Series(f"m={m}", CavityPrep.fock(m)) for m in FIG4_M]
        return Scenario(name, metric="bell_overlap", series=series, grid=times, **common)
    if name == "fig5":
        series = [Series(f"alpha={a:g}", CavityPrep.coherent(a, weights)) for a in FIG5_ALPHA]
        return Scenario(name, metric="bell_overlap", series=series, grid=times, **common)
    if name == "fig6":
        series = [Series(f"alpha={a:g}", CavityPrep.coherent(a, weights)) for a in FIG6_ALPHA]
        return Scenario(name, metric="concurrence", series=series, grid=times, **common)
    series = [Series(f"betaE={b:g}", CavityPrep.thermal(b)) for b in FIG7_BETA_E]
    return Scenario(name, metric="concurrence", series=series, grid=times, **common)


def custom_scenario(
    metric: str,
    prep: CavityPrep,
    params: ModelParams = ModelParams(),
    t_max: float = 200.0,
    t_steps: int = 2001,
    qubit_init="00",
    form: EffectiveForm = EffectiveForm(),
    target_m: int = 0,
    mode: str = "wootters",
) -> Scenario:
    times = np.linspace(0.0, t_max, int(t_steps))
    return Scenario(
        "custom",
        params=params,
        metric=metric,
        series=[Series(metric, prep)],
        grid=times,
        qubit_init=qubit_init,
        form=form,
        weights=prep.weights,
        target_m=target_m,
        mode=mode,
    )


def paper_literal_weights(paper_literal: bool, weights: str | None) -> str:
    if weights is not None:
        return weights
    return PAPER_LITERAL if paper_literal else STANDARD
