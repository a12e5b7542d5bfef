"""Classify a correction as success, logical failure or syndrome mismatch."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..pauli import PauliOperator


class Outcome(enum.Enum):
    SUCCESS = "success"
    LOGICAL_FAILURE = "logical failure"
    SYNDROME_MISMATCH = "syndrome mismatch"


@dataclass(frozen=True)
class Judgement:
    outcome: Outcome
    # anticommutation of E*C with each logical X-bar then each Z-bar (empty unless a logical failure)
    logical_class: Tuple[int, ...] = ()

    @property
    def failed(self) -> bool:
        return self.outcome is not Outcome.SUCCESS


def logical_failure(code, E: PauliOperator, C: PauliOperator) -> Judgement:
    """Judge the residual ``E C``: it must have trivial syndrome and lie in the stabilizer group."""
    R = (E * C).unsigned()
    if code.syndrome_int(R):
        return Judgement(Outcome.SYNDROME_MISMATCH)
    if code.in_stabilizer_group(R):
        return Judgement(Outcome.SUCCESS)
    cls = tuple(int(not R.commutes(L)) for L in tuple(code.logical_x) + tuple(code.logical_z))
    return Judgement(Outcome.LOGICAL_FAILURE, cls)


def judge_batch(model, e_true: np.ndarray, e_corr: np.ndarray) -> np.ndarray:
    """Vectorised judgement on mechanism vectors of a detector model.

    Returns codes per shot: 0 success, 1 logical failure, 2 syndrome mismatch.
    The residual has to trigger no detector and flip no observable.
    """
    R = (np.asarray(e_true, dtype=np.int64) ^ np.asarray(e_corr, dtype=np.int64))
    H = np.asarray(model.check_matrix().array, dtype=np.int64)
    L = np.asarray(model.logical_matrix().array, dtype=np.int64)
    bad_syn = ((R @ H.T) & 1).any(axis=1) if H.shape[0] else np.zeros(len(R), bool)
    bad_log = ((R @ L.T) & 1).any(axis=1) if L.shape[0] else np.zeros(len(R), bool)
    return np.where(bad_syn, 2, np.where(bad_log, 1, 0)).astype(np.int8)
