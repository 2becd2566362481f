"""Evaluate a sweep over its grid, optionally across worker processes.

Each grid point is evaluated by pure functions, so results do not depend on
how points are distributed over workers. Rows are always emitted in grid
order.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator

from ..channels import (
    NoiseKind,
    NoiseParams,
    apply_channel_n,
    asymptotic_zeta,
    diag_history_two,
    iterate_channel,
    kraus_two,
)
from ..ergotropy import (
    asymptotic_ergotropy_ad,
    asymptotic_ergotropy_bf,
    ergotropy_single_closed,
    ergotropy_spectral,
    ergotropy_two_closed,
    stored_energy_two,
)
from ..linalg import ContractViolation, check_density
from ..models import (
    DegenerateParameterError,
    SingleQubitParams,
    XYZDMParams,
    charged_state_two,
    classify_region,
    critical_dmi,
    energy_gap,
    two_qubit_hamiltonian,
)
from .spec import Experiment, SweepSpec


class RowError(RuntimeError):
    """A grid point failed a numerical contract."""

    def __init__(self, index: int, point: dict, message: str):
        super().__init__(f"row {index} {point}: {message}")
        self.index = index
        self.point = point
        self.message = message


@dataclass(frozen=True)
class _Failure:
    message: str


def _model(pt: dict) -> XYZDMParams:
    return XYZDMParams(J=pt["j"], Jz=pt["jz"], gamma=pt["gamma"], D=pt["d"], omega=pt.get("omega", 1.0))


def columns(spec: SweepSpec) -> list[str]:
    exp = spec.experiment
    if exp is Experiment.SINGLE_QUBIT_NOISE:
        return ["noise", "p", "omega_t", "n", "xi"]
    if exp is Experiment.TWO_QUBIT_NOISELESS:
        return ["j", "jz", "gamma", "d", "omega", "t", "region", "e_g", "xi"]
    if exp is Experiment.TWO_QUBIT_NOISE:
        return ["noise", "j", "jz", "gamma", "d", "omega", "p", "t", "n", "region", "xi"]
    if exp is Experiment.REGION_MAP:
        cols = ["j", "jz", "gamma", "d_c", "d_c_prime"]
        if "d" in spec.params:
            cols[3:3] = ["d"]
            cols += ["region", "e_g"]
        return cols
    if exp is Experiment.ASYMPTOTIC_MAP:
        cols = ["noise", "j", "jz", "gamma", "d", "d_c", "d_c_prime", "region", "zeta", "xi"]
        if spec.brute:
            cols.append("xi_brute")
        return cols
    if exp is Experiment.DIAGONAL_DISTRIBUTION:
        return ["noise", "j", "jz", "gamma", "d", "omega", "t", "p", "n", "diag0", "diag1", "diag2", "diag3"]
    raise ValueError(f"{exp.value} is not a grid experiment")


# Work units: a unit is one grid point, except that the innermost ``n`` axis is
# folded into its parent point where a single channel iteration serves every n.

def _units(spec: SweepSpec) -> list[dict]:
    exp = spec.experiment
    if exp in (Experiment.TWO_QUBIT_NOISE, Experiment.DIAGONAL_DISTRIBUTION):
        ns = spec.params["n"]
        reduced = {k: v for k, v in spec.params.items() if k != "n"}
        folded = SweepSpec(experiment=exp, params=reduced)
        return [dict(pt, n=tuple(ns)) for pt in folded.points()]
    return list(spec.points())


def _eval_single(spec: SweepSpec, pt: dict) -> list[dict]:
    s = SingleQubitParams(omega=1.0, t=pt["omega_t"])
    xi = ergotropy_single_closed(s, NoiseParams(spec.noise, pt["p"], pt["n"]))
    return [{"noise": spec.noise.value, "p": pt["p"], "omega_t": pt["omega_t"], "n": pt["n"], "xi": xi}]


def _eval_two(spec: SweepSpec, pt: dict) -> list[dict]:
    model = _model(pt)
    try:
        xi = ergotropy_two_closed(model, pt["t"])
    except DegenerateParameterError:
        xi = stored_energy_two(model, pt["t"])
    return [{
        "j": pt["j"], "jz": pt["jz"], "gamma": pt["gamma"], "d": pt["d"], "omega": pt["omega"], "t": pt["t"],
        "region": str(classify_region(model)), "e_g": energy_gap(model), "xi": xi,
    }]


def _eval_two_noise(spec: SweepSpec, pt: dict) -> list[dict]:
    model = _model(pt)
    h = two_qubit_hamiltonian(model)
    kraus = kraus_two(spec.noise, pt["p"])
    wanted = pt["n"]
    states = {}
    for step, rho in enumerate(iterate_channel(kraus, charged_state_two(model, pt["t"]), max(wanted))):
        if step in wanted:
            states[step] = check_density(rho)
    region = str(classify_region(model))
    return [{
        "noise": spec.noise.value, "j": pt["j"], "jz": pt["jz"], "gamma": pt["gamma"], "d": pt["d"],
        "omega": pt["omega"], "p": pt["p"], "t": pt["t"], "n": n, "region": region,
        "xi": ergotropy_spectral(h, states[n]),
    } for n in wanted]


def _eval_regions(spec: SweepSpec, pt: dict) -> list[dict]:
    model = _model(dict(pt, d=pt.get("d", 0.0)))
    crit = critical_dmi(model)
    row = {"j": pt["j"], "jz": pt["jz"], "gamma": pt["gamma"]}
    if "d" in pt:
        row["d"] = pt["d"]
    row["d_c"] = crit.d_c
    row["d_c_prime"] = crit.d_c_prime
    if "d" in pt:
        row["region"] = str(classify_region(model, crit))
        row["e_g"] = energy_gap(model)
    return [row]


def _eval_map(spec: SweepSpec, pt: dict) -> list[dict]:
    model = _model(pt)
    crit = critical_dmi(model)
    if spec.noise is NoiseKind.AMPLITUDE_DAMPING:
        xi = asymptotic_ergotropy_ad(model)
    else:
        xi = asymptotic_ergotropy_bf(model)
    row = {
        "noise": spec.noise.value, "j": pt["j"], "jz": pt["jz"], "gamma": pt["gamma"], "d": pt["d"],
        "d_c": crit.d_c, "d_c_prime": crit.d_c_prime, "region": str(classify_region(model, crit)),
        "zeta": asymptotic_zeta(model), "xi": xi,
    }
    if spec.brute:
        rho = charged_state_two(model, spec.brute_t)
        rho = check_density(apply_channel_n(kraus_two(spec.noise, spec.brute_p), rho, spec.brute_n))
        row["xi_brute"] = ergotropy_spectral(two_qubit_hamiltonian(model), rho)
    return [row]


def _eval_diag(spec: SweepSpec, pt: dict) -> list[dict]:
    model = _model(pt)
    rho = charged_state_two(model, pt["t"])
    start = [float(rho[i, i].real) for i in range(4)]
    history = diag_history_two(spec.noise, pt["p"], start, max(pt["n"]))
    rows = []
    for n in pt["n"]:
        d = history[n]
        rows.append({
            "noise": spec.noise.value, "j": pt["j"], "jz": pt["jz"], "gamma": pt["gamma"], "d": pt["d"],
            "omega": pt["omega"], "t": pt["t"], "p": pt["p"], "n": n,
            "diag0": d[0], "diag1": d[1], "diag2": d[2], "diag3": d[3],
        })
    return rows


_EVALUATORS: dict[Experiment, Callable[[SweepSpec, dict], list[dict]]] = {
    Experiment.SINGLE_QUBIT_NOISE: _eval_single,
    Experiment.TWO_QUBIT_NOISELESS: _eval_two,
    Experiment.TWO_QUBIT_NOISE: _eval_two_noise,
    Experiment.REGION_MAP: _eval_regions,
    Experiment.ASYMPTOTIC_MAP: _eval_map,
    Experiment.DIAGONAL_DISTRIBUTION: _eval_diag,
}


def _evaluate(args) -> list[dict] | _Failure:
    spec, unit = args
    try:
        return _EVALUATORS[spec.experiment](spec, unit)
    except (ContractViolation, DegenerateParameterError, ValueError) as exc:
        return _Failure(f"{type(exc).__name__}: {exc}")


def default_workers() -> int:
    return os.cpu_count() or 1


def run_sweep(spec: SweepSpec, errors: list | None = None, workers: int | None = None) -> Iterator[dict]:
    """Yield result rows in grid order.

    A point that breaks a numerical contract becomes a :class:`RowError`; it is
    appended to ``errors`` when a list is given and raised otherwise.
    """
    if spec.experiment not in _EVALUATORS:
        raise ValueError(f"{spec.experiment.value} is not a grid experiment")
    units = _units(spec)
    workers = workers or spec.workers or default_workers()
    jobs = [(spec, u) for u in units]
    if workers <= 1 or len(jobs) < 2:
        results = map(_evaluate, jobs)
        pool = None
    else:
        pool = ProcessPoolExecutor(max_workers=workers)
        chunk = max(1, len(jobs) // (8 * workers))
        results = pool.map(_evaluate, jobs, chunksize=chunk)
    try:
        for index, (unit, result) in enumerate(zip(units, results)):
            if isinstance(result, _Failure):
                err = RowError(index, unit, result.message)
                if errors is None:
                    raise err
                errors.append(err)
                continue
            yield from result
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
