"""Monte Carlo estimation of the limiting conditional entropies.

These estimators validate the analytic module on quantities the exhaustive
oracle cannot reach: long-run stationary frequencies and plug-in conditional
entropies of the auxiliary sequences.  Each estimator simulates one long
channel realization, tabulates the finite conditioning contexts after
burn-in, and substitutes the empirical frequencies into the entropy formula.

Contexts observed fewer than :data:`MIN_CONTEXT_OBS` times are pooled; their
probability mass times the log alphabet size is reported as ``bias_budget``
instead of being guessed.  Standard errors come from a block bootstrap
(:data:`BOOTSTRAP_BLOCKS` contiguous blocks, resampled with replacement).

Seeds: every public estimator takes one master seed; per-stream seeds are
derived with ``numpy.random.SeedSequence(master).spawn``, so concurrent
chains never share a stream and aggregation order does not matter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import MarkovSourceParams, ChannelParams, generate_markov_sequence
from .channel_sim import ChannelOutput, apply_delins

__all__ = [
    "McEstimate",
    "EmpiricalStationary",
    "MIN_CONTEXT_OBS",
    "BOOTSTRAP_BLOCKS",
    "BOOTSTRAP_REPS",
    "estimate_stationary_iy",
    "estimate_hI",
    "estimate_hT",
    "estimate_HS2",
    "estimate_delins_S_term",
    "tv_distance",
]

MIN_CONTEXT_OBS = 30
BOOTSTRAP_BLOCKS = 50
BOOTSTRAP_REPS = 200
DEFAULT_BURN_IN = 1000


@dataclass(frozen=True)
class McEstimate:
    """Plug-in estimate with bootstrap standard error and pooling budget."""

    value: float
    std_error: float
    bias_budget: float
    n_obs: int
    pooled_contexts: int


@dataclass(frozen=True)
class EmpiricalStationary:
    """Empirical stationary frequencies with per-cell binomial standard errors."""

    freqs: np.ndarray
    std_errors: np.ndarray
    n_obs: int


def _spawn_seeds(seed: int, k: int) -> list[np.random.SeedSequence]:
    return np.random.SeedSequence(seed).spawn(k)


def _simulate(kind_params: ChannelParams, gamma: float, steps: int, seed: int) -> tuple[np.ndarray, ChannelOutput]:
    src_seed, ch_seed = _spawn_seeds(seed, 2)
    x = generate_markov_sequence(MarkovSourceParams(gamma), steps,
                                 int(src_seed.generate_state(1, np.uint64)[0]))
    out = apply_delins(x, kind_params, int(ch_seed.generate_state(1, np.uint64)[0]))
    return x, out


def _entropy_of_table(table: np.ndarray, min_obs: int) -> tuple[float, float, int, int]:
    """Plug-in conditional entropy of a (contexts, values) count table.

    Returns (entropy, pooled mass * log2(alphabet), kept observations,
    pooled context count); contexts below ``min_obs`` are pooled out.
    """
    totals = table.sum(axis=1)
    n_total = int(totals.sum())
    if n_total == 0:
        return 0.0, 0.0, 0, 0
    keep = totals >= min_obs
    pooled = int((~keep & (totals > 0)).sum())
    value = 0.0
    for row, tot in zip(table[keep], totals[keep]):
        pos = row[row > 0]
        value += float(np.dot(pos, np.log2(tot / pos))) / n_total
    pooled_mass = float(totals[~keep].sum()) / n_total
    n_values = max(2, int((table.sum(axis=0) > 0).sum()))
    return value, pooled_mass * np.log2(n_values), n_total, pooled


def _plug_in(ctx: np.ndarray, val: np.ndarray, n_ctx: int, seed: int) -> McEstimate:
    """Plug-in conditional entropy H(val | ctx) with block-bootstrap errors."""
    n = ctx.size
    n_val = int(val.max()) + 1 if n else 1
    cells = n_ctx * n_val
    table = np.bincount(ctx * n_val + val, minlength=cells).reshape(n_ctx, n_val)
    value, bias, n_used, pooled = _entropy_of_table(table, MIN_CONTEXT_OBS)

    block = np.minimum(np.arange(n) * BOOTSTRAP_BLOCKS // max(n, 1), BOOTSTRAP_BLOCKS - 1)
    block_tables = np.bincount(
        block * cells + ctx * n_val + val, minlength=BOOTSTRAP_BLOCKS * cells
    ).reshape(BOOTSTRAP_BLOCKS, n_ctx, n_val)
    rng = np.random.default_rng(seed)
    reps = np.empty(BOOTSTRAP_REPS)
    for b in range(BOOTSTRAP_REPS):
        pick = rng.integers(0, BOOTSTRAP_BLOCKS, size=BOOTSTRAP_BLOCKS)
        reps[b] = _entropy_of_table(block_tables[pick].sum(axis=0), MIN_CONTEXT_OBS)[0]
    return McEstimate(value=value, std_error=float(reps.std(ddof=1)),
                      bias_budget=bias, n_obs=n_used, pooled_contexts=pooled)


def estimate_stationary_iy(i: float, alpha: float, gamma: float, steps: int,
                           burn_in: int = DEFAULT_BURN_IN, seed: int = 0) -> EmpiricalStationary:
    """Empirical stationary law of (I_j, Y_j, Y_{j-1}) on one insertion-channel chain."""
    _, out = _simulate(ChannelParams(i=i, alpha=alpha), gamma, steps, seed)
    y = out.y.astype(np.int64)
    i_fl = out.aux.i_flags.astype(np.int64)
    codes = (i_fl[1:] * 4 + y[1:] * 2 + y[:-1])[burn_in:]
    counts = np.bincount(codes, minlength=8).astype(float)
    n = counts.sum()
    freqs = counts / n
    se = np.sqrt(freqs * (1.0 - freqs) / n)
    return EmpiricalStationary(freqs=freqs.reshape(2, 2, 2), std_errors=se.reshape(2, 2, 2), n_obs=int(n))


def estimate_hI(i: float, alpha: float, gamma: float, steps: int, seed: int = 0,
                burn_in: int = DEFAULT_BURN_IN) -> McEstimate:
    """Plug-in estimate of lim H(I_j | I_{j-1}, Y_j, Y_{j-1}, Y_{j-2})."""
    _, out = _simulate(ChannelParams(i=i, alpha=alpha), gamma, steps, seed)
    y = out.y.astype(np.int64)
    i_fl = out.aux.i_flags.astype(np.int64)
    ctx = (i_fl[1:-1] * 8 + y[2:] * 4 + y[1:-1] * 2 + y[:-2])[burn_in:]
    val = i_fl[2:][burn_in:]
    return _plug_in(ctx, val, 16, seed + 1)


def estimate_hT(i: float, alpha: float, gamma: float, steps: int, seed: int = 0,
                burn_in: int = DEFAULT_BURN_IN) -> McEstimate:
    """Plug-in estimate of lim H(T_j | T_{j-1}, Y_j, Y_{j-1})."""
    _, out = _simulate(ChannelParams(i=i, alpha=alpha), gamma, steps, seed)
    y = out.y.astype(np.int64)
    t_fl = out.aux.t_flags.astype(np.int64)
    ctx = (t_fl[:-1] * 4 + y[1:] * 2 + y[:-1])[burn_in:]
    val = t_fl[1:][burn_in:]
    return _plug_in(ctx, val, 8, seed + 1)


def estimate_HS2(gamma: float, d: float, steps: int, seed: int = 0,
                 burn_in: int = DEFAULT_BURN_IN) -> McEstimate:
    """Plug-in estimate of H(S_2 | Y_1 Y_2) from a deletion-channel chain."""
    _, out = _simulate(ChannelParams(d=d), gamma, steps, seed)
    y = out.y.astype(np.int64)
    s = out.aux.s_counts
    # gap g sits between output bits g-1 and g
    ctx = (y[:-1] * 2 + y[1:])[burn_in:]
    val = s[1:-1][burn_in:]
    return _plug_in(ctx, val, 4, seed + 1)


def estimate_delins_S_term(gamma: float, d: float, i: float, alpha: float, steps: int,
                           seed: int = 0, burn_in: int = DEFAULT_BURN_IN) -> McEstimate:
    """Plug-in estimate of lim H(S_j | Y_{j-1}, Y_j, T_j) on the combined channel."""
    _, out = _simulate(ChannelParams(d=d, i=i, alpha=alpha), gamma, steps, seed)
    y = out.y.astype(np.int64)
    t_fl = out.aux.t_flags.astype(np.int64)
    s = out.aux.s_counts
    ctx = (t_fl[1:] * 4 + y[:-1] * 2 + y[1:])[burn_in:]
    val = s[1:-1][burn_in:]
    return _plug_in(ctx, val, 8, seed + 1)


def tv_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Total variation distance between two distributions on the same cells."""
    return 0.5 * float(np.abs(np.asarray(a, float).ravel() - np.asarray(b, float).ravel()).sum())
