"""Quantum-void classification of the 255 nonlocal faces.

A face is a quantum void when its zeroed set contains a void edge or one of
S1, S2. Every other face needs a concrete quantum witness: a two-qubit
model whose behavior lies on the face with chsh_value above
``NONLOCAL_THRESHOLD``. Closed-form Hardy points are tried first, then a
seeded multistart qubit search.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import hardy
from .correlations import Behavior, chsh_value
from .errors import WitnessNotFound
from .geometry import Face, all_faces, center_segment, void_rule
from .principles import boundary_mu, satisfies_ml
from .quantum import ZERO_TOL, QubitConfig, behavior_from_qubit, max_chsh_qubits

__all__ = [
    "QUANTUM_VOID",
    "NOT_VOID",
    "NONLOCAL_THRESHOLD",
    "VoidClassification",
    "classify_face",
    "classify_all",
    "summarize",
    "VoidCheck",
    "verify_void",
    "thread_count",
]

QUANTUM_VOID = "QuantumVoid"
NOT_VOID = "NotVoid"
NONLOCAL_THRESHOLD = 1e-4
VOID_CHSH_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class VoidClassification:
    face: Face
    verdict: str
    evidence_kind: str  # "edge" | "S1" | "S2" | "hardy" | "qubit"
    evidence_detail: str
    witness: QubitConfig | None = None
    chsh: float | None = None

    @property
    def is_void(self) -> bool:
        return self.verdict == QUANTUM_VOID

    def witness_behavior(self) -> Behavior | None:
        return None if self.witness is None else behavior_from_qubit(self.witness)


def _accept(face: Face, cfg: QubitConfig, zero_tol: float):
    beh = behavior_from_qubit(cfg)
    value = chsh_value(beh)
    if face.contains(beh, zero_tol) and value > NONLOCAL_THRESHOLD:
        return value
    return None


def classify_face(face: Face, restarts: int = 200, seed: int = 0, zero_tol: float = ZERO_TOL,
                  use_hardy: bool = True) -> VoidClassification:
    """Verdict plus evidence for one face.

    The qubit search for a face uses ``seed + face.mask`` so that results do
    not depend on the order in which faces are processed.
    """
    rule = void_rule(face)
    if rule is not None:
        kind, members = rule
        return VoidClassification(face, QUANTUM_VOID, kind, "-".join(map(str, members)))
    if use_hardy:
        for arg in hardy.enumerate_arguments():
            if face.zeroed <= arg.zero_indices:
                cfg = hardy.config_for(arg)
                value = _accept(face, cfg, zero_tol)
                if value is not None:
                    return VoidClassification(face, NOT_VOID, "hardy", str(arg), cfg, value)
    value, cfg = max_chsh_qubits(face.zeroed, restarts=restarts, seed=seed + face.mask,
                                 stop_above=NONLOCAL_THRESHOLD)
    if np.isfinite(value) and _accept(face, cfg, zero_tol) is not None:
        return VoidClassification(face, NOT_VOID, "qubit", f"seed={seed + face.mask}", cfg,
                                  chsh_value(behavior_from_qubit(cfg)))
    raise WitnessNotFound([face.mask])


def thread_count() -> int:
    cap = os.environ.get("BELLSCOPE_THREADS")
    n = os.cpu_count() or 1
    return max(1, min(n, int(cap))) if cap else n


def _classify_job(args):
    mask, restarts, seed, zero_tol = args
    try:
        return classify_face(Face.from_mask(mask), restarts, seed, zero_tol)
    except WitnessNotFound:
        return mask


def classify_all(restarts: int = 200, seed: int = 0, zero_tol: float = ZERO_TOL,
                 threads: int | None = None) -> list[VoidClassification]:
    """Classify every face, in mask order.

    Rule-decided faces are handled inline; faces needing a witness go to a
    process pool of ``threads`` workers (default: ``thread_count()``).
    Raises WitnessNotFound listing every face left without a witness.
    """
    threads = thread_count() if threads is None else threads
    faces = all_faces()
    results: dict[int, VoidClassification | int] = {}
    pending = []
    for f in faces:
        if void_rule(f) is not None:
            results[f.mask] = classify_face(f)
        else:
            pending.append((f.mask, restarts, seed, zero_tol))
    if threads > 1 and len(pending) > 1:
        with ProcessPoolExecutor(max_workers=min(threads, len(pending))) as pool:
            done = list(pool.map(_classify_job, pending))
    else:
        done = [_classify_job(job) for job in pending]
    for job, res in zip(pending, done):
        results[job[0]] = res
    missing = sorted(m for m, r in results.items() if isinstance(r, int))
    if missing:
        raise WitnessNotFound(missing)
    return [results[f.mask] for f in faces]


def summarize(table) -> dict[int, tuple[int, int]]:
    """dim -> (faces, voids), for dims 0..7."""
    out = {d: [0, 0] for d in range(8)}
    for c in table:
        out[c.face.dim][0] += 1
        out[c.face.dim][1] += c.is_void
    return {d: (n, v) for d, (n, v) in out.items()}


@dataclass(frozen=True)
class VoidCheck:
    """Independent cross-checks of a void face."""

    face: Face
    qubit_max: float  # best-found chsh_value under the face's zeros
    ml_mu_star: float  # macroscopic-locality boundary on the centre segment

    @property
    def qubit_confirms(self) -> bool:
        return self.qubit_max <= VOID_CHSH_TOL

    @property
    def ml_confirms(self) -> bool:
        return self.ml_mu_star <= 1e-5


def verify_void(face: Face, restarts: int = 200, seed: int = 0) -> VoidCheck:
    """Qubit maximisation on the face and the ML boundary on its centre.

    ML only rules out the whole face for some voids; its verdict is
    reported, not required.
    """
    value, _ = max_chsh_qubits(face.zeroed, restarts=restarts, seed=seed + face.mask)
    ml = boundary_mu(center_segment(face), satisfies_ml) if face.dim >= 1 else 0.0
    return VoidCheck(face, float(value), ml)
