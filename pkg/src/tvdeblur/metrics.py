"""Quality and convergence scoring of iterates."""

from __future__ import annotations

import numpy as np

from .errors import DegenerateReference, MissingScores

SNR_CAP_DB = 300.0


def snr_db(u: np.ndarray, reference: np.ndarray) -> float:
    """Signal-to-noise ratio in dB against a ground-truth image.

    10*log10(||reference - mean(reference)||^2 / ||u - reference||^2),
    capped at 300 dB; exact equality returns the 300 dB sentinel.
    """
    reference = np.asarray(reference, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    signal = reference - reference.mean()
    signal_energy = float((signal * signal).sum())
    if signal_energy == 0.0:
        raise DegenerateReference("reference image is constant")
    err = u - reference
    err_energy = float((err * err).sum())
    if err_energy == 0.0:
        return SNR_CAP_DB
    return min(10.0 * np.log10(signal_energy / err_energy), SNR_CAP_DB)


def rel_change(u_new: np.ndarray, u_old: np.ndarray) -> float:
    """||u_new - u_old||_2 / max(||u_old||_2, 1e-12)."""
    num = float(np.linalg.norm(u_new - u_old))
    den = max(float(np.linalg.norm(u_old)), 1e-12)
    return num / den


def best_iterate(trace, criterion: str = "snr") -> int:
    """Index of the best stage record: max snr_db or min objective_tv.

    Ties break toward the earliest index.  Raises MissingScores when the
    snr criterion is requested but some record carries no score.
    """
    records = trace.stage_records
    if not records:
        raise ValueError("trace has no stage records")
    if criterion == "snr":
        scores = [r.snr_db for r in records]
        if any(s is None for s in scores):
            raise MissingScores("trace records carry no snr_db; run with ground truth")
        return int(np.argmax(scores))
    if criterion == "objective_tv":
        return int(np.argmin([r.objective_tv for r in records]))
    raise ValueError(f"unknown criterion {criterion!r}")
