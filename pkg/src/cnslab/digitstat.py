"""
Digit statistics Z, S, L and the length defect L - log|gamma|/log|alpha|, with empirical
estimates of the two constants that bound the defect.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel

from . import ring
from .cns import CnsBase, expand
from .errors import ZeroInput
from .ring import QuadInt, format_quadint

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class DigitStats:
    Z: int
    S: int
    L: int
    defect: float


class KpConstants(BaseModel):
    base: str
    n_max: int
    e1_hat: float
    e2_hat: float
    argmin: str = ""
    argmax: str = ""


def defect_of(L: int, gamma_norm: int, base: CnsBase) -> float:
    return L - 0.5 * math.log(gamma_norm) / base.log_mod_alpha


def stats(gamma: QuadInt, base: CnsBase) -> DigitStats:
    if not gamma:
        raise ZeroInput("Digit statistics need a nonzero gamma")
    ds = expand(gamma, base)
    return DigitStats(Z=ds.Z, S=ds.S, L=ds.L, defect=defect_of(ds.L, ring.norm(gamma), base))


def length_bounds(log_gamma: float, base: CnsBase, e1: float, e2: float) -> tuple[float, float]:
    """Window log|gamma|/log|alpha| + e1 <= L <= log|gamma|/log|alpha| + e2."""
    scaled = log_gamma / base.log_mod_alpha
    return scaled + e1, scaled + e2


def _band_defects(base: CnsBase, lo: int, hi: int) -> tuple[np.ndarray, np.ndarray, list[QuadInt]]:
    gammas = ring.enumerate_norm_band(base.field, lo, hi)
    lengths = np.fromiter((len(expand(g, base).digits) - 1 for g in gammas), dtype=np.float64, count=len(gammas))
    norms = np.fromiter((ring.norm(g) for g in gammas), dtype=np.float64, count=len(gammas))
    defects = lengths - 0.5 * np.log(norms) / base.log_mod_alpha
    return norms, defects, gammas


def envelope_band(base: CnsBase, checkpoints: tuple[int, ...], lo: int, hi: int) -> list[Optional[tuple]]:
    """Per checkpoint: (min, argmin, max, argmax) over lo < norm <= min(hi, checkpoint)."""
    norms, defects, gammas = _band_defects(base, lo, hi)
    out = []
    for c in checkpoints:
        # gammas are sorted by norm, so the checkpoint prefix is contiguous
        n = int(np.searchsorted(norms, c, side="right"))
        if n == 0:
            out.append(None)
            continue
        i_min = int(np.argmin(defects[:n]))
        i_max = int(np.argmax(defects[:n]))
        out.append(
            (float(defects[i_min]), format_quadint(gammas[i_min]), float(defects[i_max]), format_quadint(gammas[i_max]))
        )
    return out


def _merge_envelopes(parts: list[Optional[tuple]]) -> Optional[tuple]:
    present = [p for p in parts if p is not None]
    if not present:
        return None
    # ties resolve to the earliest band, i.e. the smallest (norm, a, b)
    low = min(present, key=lambda p: p[0])
    high = max(present, key=lambda p: p[2])
    return low[0], low[1], high[2], high[3]


def kp_envelope_series(
    base: CnsBase, checkpoints: Sequence[int], workers: Optional[int] = None
) -> list[KpConstants]:
    """Defect envelopes (e1_hat, e2_hat) at each norm checkpoint, from a single sweep."""
    from .parallel import map_bands

    checkpoints = tuple(sorted(set(int(c) for c in checkpoints)))
    per_band = map_bands(envelope_band, base, checkpoints, n_max=checkpoints[-1], workers=workers)
    series = []
    for j, c in enumerate(checkpoints):
        merged = _merge_envelopes([band[j] for band in per_band])
        if merged is None:
            continue
        e1, arg1, e2, arg2 = merged
        series.append(KpConstants(base=str(base), n_max=c, e1_hat=e1, e2_hat=e2, argmin=arg1, argmax=arg2))
    return series


def kp_empirical_constants(base: CnsBase, n_max: int, workers: Optional[int] = None) -> KpConstants:
    """Min and max defect over all gamma with 0 < norm <= n_max."""
    series = kp_envelope_series(base, [n_max], workers=workers)
    if not series:
        raise ZeroInput(f"No nonzero element has norm <= {n_max}")
    constants = series[0]
    logger.info(f"Defect envelope for {base} up to {n_max}: [{constants.e1_hat}, {constants.e2_hat}]")
    return constants
