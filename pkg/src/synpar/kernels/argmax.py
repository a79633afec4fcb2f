"""Conditional max-update reduction (the tail of a neural match routine).

Each trial scores a feature vector and, if the score beats the current best
for its winner, records it and raises a flag.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .. import _atomics as at
from ..numerics import Rng
from ..runtime import ExecConfig, Strategy, parallel_blocks


@dataclass
class ArgmaxInput:
    winners: np.ndarray
    features: np.ndarray
    weights: np.ndarray
    highest_confidence: np.ndarray
    set_high: np.ndarray

    def __post_init__(self):
        self.winners = np.ascontiguousarray(self.winners, dtype=np.int64)
        self.weights = np.ascontiguousarray(self.weights, dtype=np.float64)
        self.features = np.ascontiguousarray(self.features, dtype=np.float64)
        self.features = self.features.reshape(len(self.winners), self.weights.size)
        self.highest_confidence = np.ascontiguousarray(self.highest_confidence, dtype=np.float64)
        self.set_high = np.ascontiguousarray(self.set_high, dtype=np.bool_)
        if self.set_high.shape != self.highest_confidence.shape:
            raise ValueError("set_high and highest_confidence differ in length")
        if self.winners.size and (self.winners.min() < 0 or self.winners.max() >= self.highest_confidence.size):
            raise ValueError("winner index out of range")

    def copy(self) -> ArgmaxInput:
        return ArgmaxInput(self.winners, self.features, self.weights,
                           self.highest_confidence.copy(), self.set_high.copy())

    def same_state(self, other: ArgmaxInput) -> bool:
        return (np.array_equal(self.highest_confidence.view(np.int64), other.highest_confidence.view(np.int64))
                and np.array_equal(self.set_high, other.set_high))


def gen_argmax(trials: int, winners: int, features: int, rng: Rng) -> ArgmaxInput:
    """Random trials; initial bests are drawn so that some winners never get beaten."""
    return ArgmaxInput(
        rng.integers(0, winners, trials),
        rng.uniform(-1.0, 1.0, (trials, features)),
        rng.uniform(-1.0, 1.0, features),
        rng.uniform(0.0, 0.5 * features, winners),
        np.zeros(winners, dtype=np.bool_),
    )


@njit(nogil=True, cache=True, inline="always")
def _confidence(features, weights, t):
    acc = 0.0
    for f in range(weights.size):
        acc += features[t, f] * weights[f]
    return acc


@njit(nogil=True, cache=True)
def _serial(winners, features, weights, hc, flag, lo, hi):
    for t in range(lo, hi):
        conf = _confidence(features, weights, t)
        w = winners[t]
        if conf > hc[w]:
            hc[w] = conf
            flag[w] = True


@njit(nogil=True, cache=True)
def _critical(winners, features, weights, hc, flag, locks, lo, hi):
    for t in range(lo, hi):
        conf = _confidence(features, weights, t)
        w = winners[t]
        s = w % locks.size
        at.spin_lock(locks, s)
        if conf > hc[w]:
            hc[w] = conf
            flag[w] = True
        at.spin_unlock(locks, s)


@njit(cache=True)
def _merge(hc, flag, priv_hc, priv_flag):
    for p in range(priv_hc.shape[0]):
        for w in range(hc.size):
            if priv_flag[p, w] and priv_hc[p, w] > hc[w]:
                hc[w] = priv_hc[p, w]
                flag[w] = True


def argmax_update_serial(inp: ArgmaxInput):
    _serial(inp.winners, inp.features, inp.weights, inp.highest_confidence, inp.set_high, 0, inp.winners.size)


def argmax_update_parallel(inp: ArgmaxInput, strategy, cfg: ExecConfig, stripes: int = 1024):
    strategy = Strategy(strategy)
    args = (inp.winners, inp.features, inp.weights)
    if strategy is Strategy.CRITICAL:
        locks = np.zeros(stripes, dtype=np.int64)
        parallel_blocks(range(inp.winners.size), cfg,
                        lambda lo, hi, wk: _critical(*args, inp.highest_confidence, inp.set_high, locks, lo, hi))
    elif strategy is Strategy.PRIVATIZED:
        nw = inp.highest_confidence.size
        priv_hc = np.full((cfg.threads, nw), -np.inf)
        priv_flag = np.zeros((cfg.threads, nw), dtype=np.bool_)
        parallel_blocks(range(inp.winners.size), cfg,
                        lambda lo, hi, wk: _serial(*args, priv_hc[wk], priv_flag[wk], lo, hi))
        _merge(inp.highest_confidence, inp.set_high, priv_hc, priv_flag)
    else:
        raise ValueError(f"argmax supports the critical and privatized strategies, not {strategy}")
