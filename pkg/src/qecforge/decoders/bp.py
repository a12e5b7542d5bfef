"""Sum-product belief propagation on the Tanner graph and its order-0 OSD post-processor."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .common import Decoder, InfeasibleSyndrome, bits_to_int, column_ints, llr_weights, solve_columns

DEFAULT_CLAMP = 30.0
DEFAULT_MAX_ITER = 50


@dataclass
class BpResult:
    posterior_llr: np.ndarray  # beliefs Lambda_i
    hard_decision: np.ndarray
    converged: bool
    iterations: int

    @property
    def marginals(self) -> np.ndarray:
        """``P(e_i = 1 | s)`` implied by the beliefs."""
        return 1.0 / (1.0 + np.exp(self.posterior_llr))


class _Tanner:
    def __init__(self, H):
        H = np.asarray(getattr(H, "array", H), dtype=np.uint8)
        self.H = H
        self.m, self.n = H.shape
        self.chk, self.var = np.nonzero(H)  # one entry per edge
        self.E = len(self.chk)
        self.Hi = H.astype(np.int64)


def bp_decode(H, s, priors, max_iter: int = DEFAULT_MAX_ITER, clamp: float = DEFAULT_CLAMP,
              early_stop: bool = True, _tanner: _Tanner = None) -> BpResult:
    """Flooding sum-product decoding of ``H e = s``.

    Check messages carry the factor ``(-1)^{s_a}``; all messages are clipped
    to ``[-clamp, clamp]``.  ``e_i = 1`` exactly when ``Lambda_i < 0``.  With
    ``early_stop`` the loop ends at the first iteration whose hard decision
    satisfies the syndrome.
    """
    T = _tanner or _Tanner(H)
    s = np.asarray(s, dtype=np.uint8).ravel()
    p = np.broadcast_to(np.asarray(priors, dtype=float), (T.n,))
    if np.any(p <= 0) or np.any(p >= 0.5):
        raise ValueError("bp needs 0 < p_i < 0.5")
    llr = np.clip(llr_weights(p), -clamp, clamp)
    sign_s = np.where(s[T.chk] == 1, -1.0, 1.0)
    s_int = s.astype(np.int64)
    lim = 1 - 1e-15
    v2c = llr[T.var].copy()
    belief = llr.copy()
    hard = np.zeros(T.n, dtype=np.uint8)
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        # check update: product of tanh over the other edges of the check
        t = np.tanh(v2c / 2.0)
        mag = np.log(np.maximum(np.abs(t), 1e-300))
        neg = t < 0
        sum_mag = np.bincount(T.chk, weights=mag, minlength=T.m)
        sum_neg = np.bincount(T.chk, weights=neg, minlength=T.m).astype(np.int64)
        other_neg = (sum_neg[T.chk] - neg) & 1
        prod = np.exp(sum_mag[T.chk] - mag)
        np.minimum(prod, lim, out=prod)
        prod[other_neg == 1] *= -1.0
        c2v = sign_s * 2.0 * np.arctanh(prod)
        np.minimum(np.maximum(c2v, -clamp, out=c2v), clamp, out=c2v)
        # beliefs and variable update
        belief = llr + np.bincount(T.var, weights=c2v, minlength=T.n)
        v2c = belief[T.var] - c2v
        np.minimum(np.maximum(v2c, -clamp, out=v2c), clamp, out=v2c)
        hard = (belief < 0).astype(np.uint8)
        converged = not T.m or not np.any(((T.Hi @ hard) & 1) ^ s_int)
        if converged and early_stop:
            break
    return BpResult(belief, hard, converged, it)


def osd0(H, s, reliability_llr) -> np.ndarray:
    """Order-0 OSD: solve on the least reliable independent columns, zeros elsewhere.

    Columns are sorted by ``P(e_i = 1)`` descending (belief ascending, ties by index).
    """
    Hn = np.asarray(getattr(H, "array", H), dtype=np.uint8)
    order = np.argsort(np.asarray(reliability_llr, dtype=float), kind="stable")
    J = solve_columns(column_ints(Hn), bits_to_int(s), order.tolist())
    if J is None:
        raise InfeasibleSyndrome("syndrome outside the column space of H")
    e = np.zeros(Hn.shape[1], dtype=np.uint8)
    e[J] = 1
    return e


def bp_osd0_decode(H, s, priors, max_iter: int = DEFAULT_MAX_ITER, clamp: float = DEFAULT_CLAMP,
                   _tanner: _Tanner = None) -> np.ndarray:
    """BP, falling back to order-0 OSD when BP fails; the output always satisfies ``H e = s``."""
    res = bp_decode(H, s, priors, max_iter, clamp, _tanner=_tanner)
    if res.converged:
        return res.hard_decision
    return osd0(H, s, res.posterior_llr)


class BpDecoder(Decoder):
    """Plain BP; the hard decision may violate the syndrome when BP does not converge."""

    name = "bp"

    def __init__(self, model, options=None, code=None):
        super().__init__(model, options, code)
        self.max_iter = int(self.options.get("max_iter", DEFAULT_MAX_ITER))
        self.clamp = float(self.options.get("clamp", DEFAULT_CLAMP))
        self._tanner = _Tanner(self.H)
        self.unconverged = 0

    def _decode(self, s):
        res = bp_decode(self.H, s, self.priors, self.max_iter, self.clamp, _tanner=self._tanner)
        if not res.converged:
            self.unconverged += 1
        return res.hard_decision


class BpOsd0Decoder(BpDecoder):
    name = "bp_osd0"

    def _decode(self, s):
        res = bp_decode(self.H, s, self.priors, self.max_iter, self.clamp, _tanner=self._tanner)
        if res.converged:
            return res.hard_decision
        self.unconverged += 1
        return osd0(self.H, s, res.posterior_llr)
