"""Ground truth by exhaustive enumeration at desk scale.

Enumeration runs over the 4-way per-bit action alphabet (delete, keep,
duplicate, complement), never over output strings, so every pattern
probability is an exact product ``d**k (i*alpha)**l (i*(1-alpha))**m
(1-d-i)**(n-k-l-m)`` and outputs are keyed and accumulated afterwards.  This
sidesteps the ambiguity of inferring patterns from an input/output pair.

Compensated summation on top of exact per-pattern products is enough for the
1e-12 targets at the supported sizes; exact rational arithmetic is not
needed.  Inputs longer than :data:`MAX_ENUM_BITS` are refused outright.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .core import ChannelParams, as_bits
from .channel_sim import Action, action_probabilities

__all__ = [
    "MAX_ENUM_BITS",
    "enumerate_channel_law",
    "cascade_law",
    "cascade_equivalence_check",
    "exact_run_law",
    "exact_decomposition_check",
    "reference_apply",
    "DecompositionCheck",
]

MAX_ENUM_BITS = 12

# output bits contributed by each action and the packed fragment value
# (two-bit fragments are packed most-significant-first)
_FRAG_LEN = np.array([0, 1, 2, 2], dtype=np.int64)
_FRAG_VAL = np.array(
    [[0, 0],  # DELETE: empty fragment
     [0, 1],  # KEEP: the bit itself
     [0, 3],  # DUPLICATE: 00 or 11
     [1, 2]],  # COMPLEMENT: 01 or 10
    dtype=np.int64,
)

_CHUNK = 1 << 15
_LEN_SHIFT = 1 << 24  # packed key = length * 2**24 + value (lengths <= 24 bits)


def _active_actions(probs4: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    codes = np.flatnonzero(probs4 > 0.0).astype(np.int64)
    return codes, probs4[codes]


def _digit_chunks(n: int, base: int):
    """Yield (chunk, n) arrays of base-``base`` digit rows covering all base**n patterns."""
    total = base ** n
    pows = base ** np.arange(n - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        yield (idx[:, None] // pows) % base


def _law_from_probs(x: np.ndarray, probs4: np.ndarray) -> dict[int, float]:
    """Exact output law as {packed key: probability} for per-bit action probs."""
    n = x.size
    if n == 0:
        return {0: 1.0}
    codes, probs = _active_actions(probs4)
    law: dict[int, float] = defaultdict(float)
    xr = x.astype(np.int64)[None, :]
    for digits in _digit_chunks(n, codes.size):
        acts = codes[digits]
        p = probs[digits].prod(axis=1)
        lens = _FRAG_LEN[acts]
        cum = np.cumsum(lens, axis=1)
        total = cum[:, -1]
        vals = _FRAG_VAL[acts, np.broadcast_to(xr, acts.shape)]
        packed = (vals << (total[:, None] - cum)).sum(axis=1)
        keys = total * _LEN_SHIFT + packed
        uniq, inv = np.unique(keys, return_inverse=True)
        sums = np.bincount(inv, weights=p)
        for k, v in zip(uniq.tolist(), sums.tolist()):
            law[k] += v
    return dict(law)


def _key_to_str(key: int) -> str:
    length = key >> 24
    value = key & (_LEN_SHIFT - 1)
    return format(value, f"0{length}b") if length else ""


def enumerate_channel_law(x, params: ChannelParams) -> dict[str, float]:
    """Exact law {output string: probability} of the combined channel on ``x``.

    Refuses inputs longer than :data:`MAX_ENUM_BITS` (the action alphabet is
    4-way per bit, so the pattern count is 4**n).
    """
    x = as_bits(x)
    if x.size > MAX_ENUM_BITS:
        raise ValueError(f"exact enumeration supports at most {MAX_ENUM_BITS} bits, got {x.size}")
    law = _law_from_probs(x, action_probabilities(params))
    return {_key_to_str(k): v for k, v in sorted(law.items())}


def cascade_law(x, params: ChannelParams) -> dict[str, float]:
    """Output law of the deletion-then-insertion factorization (i' = i/(1-d))."""
    x = as_bits(x)
    if x.size > MAX_ENUM_BITS:
        raise ValueError(f"exact enumeration supports at most {MAX_ENUM_BITS} bits, got {x.size}")
    del_probs = np.array([params.d, 1.0 - params.d, 0.0, 0.0])
    stage1 = _law_from_probs(x, del_probs)
    ip = params.i_prime
    a = params.alpha
    ins_probs = np.array([0.0, 1.0 - ip, ip * a, ip * (1.0 - a)])
    law: dict[int, float] = defaultdict(float)
    for zkey, pz in stage1.items():
        z = np.frombuffer(_key_to_str(zkey).encode(), dtype=np.uint8) - ord("0") if zkey >> 24 else np.zeros(0, np.uint8)
        for ykey, py in _law_from_probs(z, ins_probs).items():
            law[ykey] += pz * py
    return {_key_to_str(k): v for k, v in sorted(law.items())}


def cascade_equivalence_check(n: int, params: ChannelParams, seed: int = 0) -> float:
    """Max pointwise |P_direct(y|x) - P_cascade(y|x)| over inputs of length n.

    All 2**n inputs are checked for n <= 8; for n in {9, 10} a fixed
    pseudorandom subset of 64 inputs is used (the pattern count blows up as
    8**n otherwise).
    """
    if n > 10:
        raise ValueError("cascade equivalence check supports n <= 10")
    if n <= 8:
        inputs = range(2 ** n)
    else:
        rng = np.random.default_rng(seed)
        inputs = sorted(int(v) for v in rng.choice(2 ** n, size=64, replace=False))
    worst = 0.0
    for xv in inputs:
        x = np.array([(xv >> (n - 1 - j)) & 1 for j in range(n)], dtype=np.uint8)
        direct = enumerate_channel_law(x, params)
        casc = cascade_law(x, params)
        for y in direct.keys() | casc.keys():
            worst = max(worst, abs(direct.get(y, 0.0) - casc.get(y, 0.0)))
    return worst


def exact_run_law(r_max: int, params: ChannelParams, kind: str) -> dict[int, np.ndarray]:
    """P(output run length s | input run length r) by action enumeration.

    A run of ``r`` identical bits sits between opposite-symbol guards, so its
    image in the augmented/flipped output is simply the concatenation of its
    per-bit fragments; ``s`` is the total fragment length.  Returns, per r,
    an array over s = 0..2r.  ``kind`` selects which actions are live:
    ``deletion`` (delete/keep), ``insertion`` (keep/duplicate/complement) or
    ``delins`` (all four).
    """
    if r_max > 10:
        raise ValueError("exact run law enumeration supports r_max <= 10")
    d, i, a = params.d, params.i, params.alpha
    if kind == "deletion":
        probs4 = np.array([d, 1.0 - d, 0.0, 0.0])
    elif kind == "insertion":
        probs4 = np.array([0.0, 1.0 - i, i * a, i * (1.0 - a)])
    elif kind == "delins":
        probs4 = action_probabilities(params)
    else:
        raise ValueError(f"unknown channel kind {kind!r}")
    codes, probs = _active_actions(probs4)
    out: dict[int, np.ndarray] = {}
    for r in range(1, r_max + 1):
        table = np.zeros(2 * r + 1)
        for digits in _digit_chunks(r, codes.size):
            acts = codes[digits]
            p = probs[digits].prod(axis=1)
            s = _FRAG_LEN[acts].sum(axis=1)
            table += np.bincount(s, weights=p, minlength=2 * r + 1)
        out[r] = table
    return out


# ---------------------------------------------------------------------------
# pure-Python reference channel semantics (kept independent of channel_sim)
# ---------------------------------------------------------------------------

def reference_apply(x: list[int], actions: list[int]) -> tuple[list[int], list[int], list[int], list[int]]:
    """Apply a per-bit action pattern; returns (y, I, T, S) as plain lists.

    Independent re-implementation of the channel bookkeeping used by the
    enumeration checks, so the fast simulator can be validated against it.
    """
    n = len(x)
    y: list[int] = []
    i_fl: list[int] = []
    t_fl: list[int] = []
    surv_out_idx: list[int] = []
    surv_run_id: list[int] = []

    run_id = 0
    run_ids = []
    for j in range(n):
        if j > 0 and x[j] != x[j - 1]:
            run_id += 1
        run_ids.append(run_id)
    num_runs = run_id + 1 if n else 0

    survivors_per_run = [0] * num_runs
    for j, act in enumerate(actions):
        if act == Action.DELETE:
            continue
        survivors_per_run[run_ids[j]] += 1
        surv_out_idx.append(len(y))
        surv_run_id.append(run_ids[j])
        y.append(x[j])
        i_fl.append(0)
        t_fl.append(0)
        if act in (Action.DUPLICATE, Action.COMPLEMENT):
            y.append(x[j] if act == Action.DUPLICATE else 1 - x[j])
            i_fl.append(1)
            t_fl.append(1 if act == Action.COMPLEMENT else 0)

    fully_deleted = [c == 0 for c in survivors_per_run]
    m = len(y)
    if m == 0:
        return y, i_fl, t_fl, [sum(fully_deleted)]

    csum = []
    acc = 0
    for f in fully_deleted:
        acc += f
        csum.append(acc)
    s = [0] * (m + 1)
    s[0] = csum[surv_run_id[0]]
    for k in range(1, len(surv_run_id)):
        s[surv_out_idx[k]] = csum[surv_run_id[k]] - csum[surv_run_id[k - 1]]
    s[m] = sum(fully_deleted) - csum[surv_run_id[-1]]
    return y, i_fl, t_fl, s


@dataclass(frozen=True)
class DecompositionCheck:
    """Residual of one exact entropy-decomposition identity."""

    residual: float
    mass_error: float
    h_x_given_y: float
    h_x_aux_given_y: float
    h_aux_given_xy: float


def _cond_entropy(joint: dict, group) -> float:
    by: dict = defaultdict(list)
    for k, p in joint.items():
        if p > 0.0:
            by[group(k)].append(p)
    pieces = []
    for ps in by.values():
        pg = math.fsum(ps)
        pieces.extend(p * math.log2(pg / p) for p in ps)
    return math.fsum(pieces)


def exact_decomposition_check(n: int, gamma: float, params: ChannelParams, kind: str) -> DecompositionCheck:
    """Exact residual of the auxiliary-sequence entropy decomposition.

    Builds the full joint of (Markov input, action pattern), marginalizes to
    (X, Y, aux) where aux is S for the deletion channel, T for the insertion
    channel and (T, S) for the combined channel, and evaluates both sides of

        H(X | Y) = H(X, aux | Y) - H(aux | X, Y)

    by direct grouping.  The two sides agree mathematically; the residual
    exercises the bookkeeping that derives the auxiliary sequences.
    """
    if n > 8:
        raise ValueError("decomposition check supports n <= 8")
    if kind == "deletion":
        aux_of = lambda t, s: s
    elif kind == "insertion":
        aux_of = lambda t, s: t
    elif kind == "delins":
        aux_of = lambda t, s: (t, s)
    else:
        raise ValueError(f"unknown channel kind {kind!r}")

    probs4 = action_probabilities(params)
    codes, probs = _active_actions(probs4)
    codes_l = codes.tolist()
    probs_l = probs.tolist()
    k_act = len(codes_l)

    joint: dict = defaultdict(float)
    for xv in range(2 ** n):
        x = [(xv >> (n - 1 - j)) & 1 for j in range(n)]
        px = 0.5
        for j in range(1, n):
            px *= gamma if x[j] == x[j - 1] else 1.0 - gamma
        for pat in range(k_act ** n):
            acts = []
            pp = px
            rem = pat
            for _ in range(n):
                acts.append(codes_l[rem % k_act])
                pp *= probs_l[rem % k_act]
                rem //= k_act
            y, i_fl, t_fl, s = reference_apply(x, acts)
            aux = aux_of(tuple(t_fl), tuple(s))
            joint[(xv, tuple(y), aux)] += pp

    mass_error = abs(math.fsum(joint.values()) - 1.0)
    xy: dict = defaultdict(float)
    for (xv, y, aux), p in joint.items():
        xy[(xv, y)] += p

    h_x_given_y = _cond_entropy(xy, lambda k: k[1])
    h_xaux_given_y = _cond_entropy(joint, lambda k: k[1])
    h_aux_given_xy = _cond_entropy(joint, lambda k: (k[0], k[1]))
    residual = abs(h_x_given_y - (h_xaux_given_y - h_aux_given_xy))
    return DecompositionCheck(
        residual=residual,
        mass_error=mass_error,
        h_x_given_y=h_x_given_y,
        h_x_aux_given_y=h_xaux_given_y,
        h_aux_given_xy=h_aux_given_xy,
    )
