"""Extract, confirm, correct: the full protocol plus fault sweeps over it."""

from __future__ import annotations

import functools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .code import StabilizerCode, errors_up_to_weight, load_code, syndrome_str
from .decode import SyndromeTable, Uncorrectable, build_table, decode_and_correct
from .extraction import (
    Circuit,
    Unconfirmed,
    compile_full,
    repeat_until_confirmed,
    run_extraction,
)
from .noise import FaultLocation, enumerate_fault_locations, inject, inject_many, sample_faults
from .pauli import PauliOperator
from .statevec import Xor, encode_code_state, fidelity, haar_qubit, apply_pauli

__all__ = [
    "FIDELITY_TOL",
    "TrialResult",
    "random_logical",
    "bloch_state",
    "run_protocol",
    "ideal_round",
    "counterexample_location",
    "run_counterexample",
    "sweep_exhaustive",
    "sweep_stochastic",
]

FIDELITY_TOL = 1e-9


@dataclass
class TrialResult:
    status: str  # "ok" | "unconfirmed" | "uncorrectable"
    history: list[str] = field(default_factory=list)
    syndrome: str | None = None
    rounds: int = 0
    fidelity: float = 0.0  # after confirmed correction
    final_fidelity: float = 0.0  # after one more ideal round
    reached: bool = True

    def passed(self, tol: float = FIDELITY_TOL) -> bool:
        return self.status == "ok" and self.final_fidelity >= 1 - tol

    def to_dict(self) -> dict:
        d = asdict(self)
        d["fidelity"] = round(d["fidelity"], 12)
        d["final_fidelity"] = round(d["final_fidelity"], 12)
        return d


def random_logical(code: StabilizerCode, rng) -> np.ndarray:
    """Haar-random logical amplitudes (2**k entries)."""
    if code.k == 1:
        return np.array(haar_qubit(rng))
    v = rng.normal(size=1 << code.k) + 1j * rng.normal(size=1 << code.k)
    return v / np.linalg.norm(v)


def bloch_state(x: float, y: float, z: float) -> np.ndarray:
    """Qubit amplitudes for Bloch vector (x, y, z)."""
    r = np.sqrt(x * x + y * y + z * z)
    theta, phi = np.arccos(z / r), np.arctan2(y, x)
    return np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])


def ideal_round(state, circuit: Circuit, table: SyndromeTable, rng):
    """Fault-free extraction followed by its correction."""
    out, st = run_extraction(state, circuit, rng)
    return decode_and_correct(st, table, out.syndrome)


def run_protocol(
    code: StabilizerCode,
    circuit: Circuit,
    table: SyndromeTable,
    logical,
    rng,
    *,
    error: PauliOperator | None = None,
    fault: FaultLocation | list | None = None,
    fault_round: int = 1,
    max_rounds: int = 4,
) -> TrialResult:
    """Encode, apply ``error``, extract until confirmed, correct, then verify.

    ``fault`` is spliced into round ``fault_round`` only.
    """
    encoded = encode_code_state(code, logical)
    state = encoded.copy()
    if error is not None:
        apply_pauli(state, error)
    rounds = {}
    if fault:
        faults = fault if isinstance(fault, list) else [fault]
        rounds[fault_round] = inject_many(circuit, faults)
    try:
        outcome, state = repeat_until_confirmed(
            state, rng=rng, max_rounds=max_rounds, circuit=circuit, round_circuits=rounds
        )
    except Unconfirmed as exc:
        return TrialResult("unconfirmed", [syndrome_str(s) for s in exc.history])
    history = [syndrome_str(s) for s in outcome.history]
    reached = not fault or fault_round <= outcome.rounds_used
    try:
        state = decode_and_correct(state, table, outcome.syndrome)
    except Uncorrectable:
        return TrialResult(
            "uncorrectable", history, syndrome_str(outcome.syndrome), outcome.rounds_used,
            reached=reached,
        )
    fid = fidelity(encoded, state)
    final = fidelity(encoded, ideal_round(state, circuit, table, rng))
    return TrialResult(
        "ok", history, syndrome_str(outcome.syndrome), outcome.rounds_used, fid, final, reached
    )


def counterexample_location(circuit: Circuit) -> FaultLocation:
    """Z on the first stage's ancilla between its second and third XOR."""
    stage = circuit.stages[0]
    xors = [i for i in range(stage.start, stage.stop) if isinstance(circuit.gates[i], Xor)]
    if len(xors) < 3:
        raise ValueError("first stage has fewer than three XOR gates")
    gi = xors[1]
    return FaultLocation(gi, "after", circuit.gates[gi].target, "Z")


def run_counterexample(code: StabilizerCode, seed: int = 0, max_rounds: int = 4) -> dict:
    """Bare-mode ancilla phase fault that spreads to two data qubits."""
    circuit, _ = compile_full(code, "bare")
    table = build_table(code)
    loc = counterexample_location(circuit)
    logical = bloch_state(1, 1, 1) if code.k == 1 else random_logical(code, np.random.default_rng(seed))
    rng = np.random.default_rng(seed)
    res = run_protocol(code, circuit, table, logical, rng, fault=loc, max_rounds=max_rounds)
    # the data error left behind by one faulty round
    encoded = encode_code_state(code, logical)
    _, after = run_extraction(encoded, inject(circuit, loc), np.random.default_rng(seed))
    spread = _equivalent_paulis(encoded, after, code.n)
    return {
        "location": str(loc),
        "data_error": [p.label() for p in spread],
        "final_fidelity": round(res.final_fidelity, 12),
        "uncorrectable": not res.passed(),
    }


def _equivalent_paulis(reference, state, n, max_weight: int = 2) -> list[PauliOperator]:
    """All Paulis of weight <= max_weight mapping ``reference`` onto ``state``."""
    out = []
    for p in errors_up_to_weight(n, max_weight):
        cand = reference.copy()
        apply_pauli(cand, p)
        if fidelity(cand, state) > 1 - 1e-9:
            out.append(p)
    return out


# -- sweeps ------------------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def _setup(code_source: str, mode: str):
    code = load_code(code_source)
    circuit, _ = compile_full(code, mode)
    return code, circuit, build_table(code)


def _trial(args):
    code_source, mode, seed, index, loc_text, fault_round, max_rounds = args
    code, circuit, table = _setup(code_source, mode)
    rng = np.random.default_rng([seed, index])
    logical = random_logical(code, rng)
    loc = FaultLocation.parse(loc_text)
    res = run_protocol(
        code, circuit, table, logical, rng,
        fault=loc, fault_round=fault_round, max_rounds=max_rounds,
    )
    return res


def sweep_exhaustive(
    code_source: str,
    mode: str,
    seed: int,
    *,
    max_rounds: int = 4,
    rounds=None,
    workers: int = 1,
    locations=None,
) -> dict:
    """Every single-fault location and kind, placed in each of ``rounds``."""
    _, circuit, _ = _setup(code_source, mode)
    locs = enumerate_fault_locations(circuit) if locations is None else list(locations)
    rounds = tuple(range(1, max_rounds + 1)) if rounds is None else tuple(rounds)
    jobs = [
        (code_source, mode, seed, i, str(loc), r, max_rounds)
        for i, (r, loc) in enumerate((r, loc) for r in rounds for loc in locs)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_trial, jobs, chunksize=16))
    else:
        results = [_trial(j) for j in jobs]
    failures = []
    not_reached = 0
    min_fid = 1.0
    for job, res in zip(jobs, results):
        if not res.reached:
            not_reached += 1
            continue
        min_fid = min(min_fid, res.final_fidelity if res.status == "ok" else 0.0)
        if not res.passed():
            failures.append(
                {"location": job[4], "round": job[5], "status": res.status,
                 "history": res.history, "final_fidelity": round(res.final_fidelity, 12)}
            )
    return {
        "locations": len(locs),
        "rounds": list(rounds),
        "total": len(jobs),
        "reached": len(jobs) - not_reached,
        "not_reached": not_reached,
        "passed": len(jobs) - not_reached - len(failures),
        "failed": len(failures),
        "min_final_fidelity": round(min_fid, 12),
        "failures": failures,
    }


def sweep_stochastic(code_source: str, mode: str, seed: int, p: float, trials: int,
                     *, max_rounds: int = 4) -> dict:
    """Independent faults with probability ``p`` per qubit-time slot, every round."""
    code, circuit, table = _setup(code_source, mode)
    failures, counts = [], []
    for i in range(trials):
        rng = np.random.default_rng([seed, i])
        logical = random_logical(code, rng)
        per_round = {}
        n_faults = 0
        for r in range(1, max_rounds + 1):
            locs = sample_faults(circuit, p, rng)
            n_faults += len(locs)
            if locs:
                per_round[r] = inject_many(circuit, locs)
        encoded = encode_code_state(code, logical)
        try:
            outcome, st = repeat_until_confirmed(
                encoded, rng=rng, max_rounds=max_rounds, circuit=circuit, round_circuits=per_round
            )
            st = decode_and_correct(st, table, outcome.syndrome)
            fid = fidelity(encoded, ideal_round(st, circuit, table, rng))
            status = "ok"
        except (Unconfirmed, Uncorrectable) as exc:
            fid, status = 0.0, type(exc).__name__.lower()
        counts.append(n_faults)
        if status != "ok" or fid < 1 - FIDELITY_TOL:
            failures.append({"trial": i, "faults": n_faults, "status": status,
                             "final_fidelity": round(fid, 12)})
    return {
        "p": p,
        "total": trials,
        "failed": len(failures),
        "passed": trials - len(failures),
        "mean_faults": round(float(np.mean(counts)) if counts else 0.0, 6),
        "failures": failures,
    }
