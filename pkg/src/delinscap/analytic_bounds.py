"""Closed-form entropy terms and assembly of the four capacity lower bounds.

Every bound has the shape ``h(gamma) - penalties + credits`` where the
penalties are limiting conditional entropies of auxiliary sequences and the
credit reflects residual ambiguity in insertion positions given both channel
input and output.  All infinite sums are evaluated by direct truncated
summation of the underlying joint laws; the truncation points are chosen from
``SeriesConfig.tail_epsilon`` and every term carries a conservative
closed-form bound on the discarded mass's entropy contribution.

Terms that also admit a printed closed form (the deleted-run-count entropy,
the deletion run-length entropy, the combined-channel deleted-run term) are
additionally evaluated in that literal form and the series-minus-closed-form
residual is reported as a diagnostic.  The literal deleted-run-count formula
disagrees with the direct law at d = 0 (it evaluates to ``gamma*log2(gamma)``
where the law gives 0), so the series path is authoritative throughout and
the literal form is exposed only for side-by-side study.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ChannelParams, EntropyTerm, binary_entropy

__all__ = [
    "SeriesConfig",
    "AnalyticIntermediates",
    "BoundResult",
    "markov_q",
    "intermediates",
    "stationary_iy",
    "iy_transition_matrix",
    "h_I_limit",
    "h_T_limit",
    "insertion_penalty_credit",
    "cond_entropy_S_given_YY",
    "closed_form_HS2",
    "run_law_deletion_H",
    "run_law_duplication_H",
    "run_law_delins_H",
    "closed_form_HLXLY",
    "delins_S_term",
    "closed_form_delins_S",
    "deletion_run_law_row",
    "duplication_run_law_row",
    "delins_run_law_row",
    "sy_joint_same",
    "sy_joint_diff",
    "delins_s_joint_same",
    "delins_s_joint_diff",
    "lb_deletion",
    "lb1_insertion",
    "lb2_insertion",
    "lb_delins",
]

_LOG2 = math.log(2.0)


@dataclass(frozen=True)
class SeriesConfig:
    """Truncation policy for the infinite sums.

    ``tail_epsilon`` is the geometric-ratio threshold at which a series is
    cut; ``r_max_cap`` and ``k_max_cap`` are hard caps on the run-length and
    deleted-run-count truncation indices.  Doubling ``r_max_cap`` and halving
    ``tail_epsilon`` must not move any reported value by more than its
    ``truncation_error`` (tested).
    """

    tail_epsilon: float = 1e-12
    r_max_cap: int = 10_000
    k_max_cap: int = 10_000

    def __post_init__(self) -> None:
        if self.tail_epsilon <= 0 or self.r_max_cap <= 0 or self.k_max_cap <= 0:
            raise ValueError("series configuration entries must be positive")


@dataclass(frozen=True)
class AnalyticIntermediates:
    """Derived channel quantities: output Markov parameter q, deleted-run
    geometric ratio theta, survival coefficient beta, cascade rate i'."""

    q: float
    theta: float
    beta: float
    i_prime: float


@dataclass(frozen=True)
class BoundResult:
    """A capacity lower bound with its per-term breakdown.

    ``bound_bits`` always equals ``source_entropy`` minus the ``*_penalty``
    terms plus the ``*_credit`` terms; ``*_residual`` terms are diagnostics
    excluded from the reconstruction.  ``error_budget`` sums the truncation
    errors of the contributing terms.
    """

    bound_bits: float
    gamma_star: float
    terms: tuple[EntropyTerm, ...]
    error_budget: float

    def reconstruct(self) -> float:
        total = 0.0
        for t in self.terms:
            if "residual" in t.name:
                continue
            if t.name.endswith("_penalty"):
                total -= t.value
            else:  # source entropy and credits add
                total += t.value
        return total


def markov_q(gamma: float, d: float) -> float:
    """Same-symbol transition probability of the deletion-channel output."""
    return (gamma + d - 2.0 * gamma * d) / (1.0 + d - 2.0 * gamma * d)


def _theta(gamma: float, d: float) -> float:
    return (1.0 - gamma) * d / (1.0 - gamma * d)


def _beta(gamma: float, d: float) -> float:
    return (1.0 - gamma) * (1.0 - d) / (1.0 - gamma * d) ** 2


def _g0(gamma: float, d: float) -> float:
    """P(next output bit repeats, no run deleted in between) given the law."""
    return gamma * (1.0 - d) / (1.0 - gamma * d)


def intermediates(gamma: float, d: float, i: float = 0.0) -> AnalyticIntermediates:
    return AnalyticIntermediates(
        q=markov_q(gamma, d),
        theta=_theta(gamma, d),
        beta=_beta(gamma, d),
        i_prime=i / (1.0 - d),
    )


# ---------------------------------------------------------------------------
# insertion-channel closed forms
# ---------------------------------------------------------------------------

def stationary_iy(i: float, alpha: float, gamma: float) -> np.ndarray:
    """Stationary law of the (insertion-flag, output, previous-output) chain.

    Returns an array indexed ``[i_flag, y_now, y_prev]`` whose eight entries
    sum to one.  By 0/1 symmetry the entries depend only on the flag and on
    whether the two output bits agree.
    """
    ib, ab, gb = 1.0 - i, 1.0 - alpha, 1.0 - gamma
    z = 2.0 * (1.0 + i)
    pi = np.zeros((2, 2, 2))
    for y in (0, 1):
        pi[1, y, y] = i * alpha / z
        pi[1, 1 - y, y] = i * ab / z
        pi[0, y, y] = (ib * gamma + i * alpha * gamma + i * ab * gb) / z
        pi[0, 1 - y, y] = (ib * gb + i * alpha * gb + i * ab * gamma) / z
    return pi


def iy_transition_matrix(i: float, alpha: float, gamma: float) -> np.ndarray:
    """8x8 one-step kernel on states (i_flag, y_now, y_prev), row-stochastic.

    State index is ``i_flag * 4 + y_now * 2 + y_prev``.  An inserted bit is
    never followed by another insertion, and after an insertion the next
    output bit continues the Markov chain from the last non-inserted bit.
    """
    ib, ab, gb = 1.0 - i, 1.0 - alpha, 1.0 - gamma
    kernel = np.zeros((8, 8))
    for flag in (0, 1):
        for y1 in (0, 1):
            for y0 in (0, 1):
                src = flag * 4 + y1 * 2 + y0
                if flag == 0:
                    moves = {
                        (1, y1): i * alpha,
                        (1, 1 - y1): i * ab,
                        (0, y1): ib * gamma,
                        (0, 1 - y1): ib * gb,
                    }
                else:
                    moves = {(0, y0): gamma, (0, 1 - y0): gb}
                for (f2, y2), p in moves.items():
                    kernel[src, f2 * 4 + y2 * 2 + y1] += p
    return kernel


def _weighted_h(weight: float, numerator: float) -> float:
    """weight * h(numerator / weight) with the degenerate cases sent to 0."""
    if weight <= 0.0:
        return 0.0
    return weight * binary_entropy(numerator / weight)


def h_I_limit(i: float, alpha: float, gamma: float) -> float:
    """Limiting per-output-symbol entropy of the all-insertions indicator."""
    ib, ab, gb = 1.0 - i, 1.0 - alpha, 1.0 - gamma
    same = _weighted_h(i * alpha + ib * gamma, i * alpha)
    diff = _weighted_h(i * ab + ib * gb, i * ab)
    return (same + diff) / (1.0 + i)


def h_T_limit(i: float, alpha: float, gamma: float) -> float:
    """Limiting per-output-symbol entropy of the complementary-insertion indicator."""
    ab = 1.0 - alpha
    w = 1.0 - gamma + gamma * i * ab
    return _weighted_h(w, i * ab) / (1.0 + i)


def insertion_penalty_credit(i: float, alpha: float, gamma: float) -> float:
    """Credit for insertion-position ambiguity that persists even given both
    the channel input and output (a complementary insertion at a run boundary
    is indistinguishable from a duplication of the next bit)."""
    ab = 1.0 - alpha
    w = ab + (1.0 - i) * alpha
    return (1.0 - gamma) ** 2 * i * _weighted_h(w, ab)


# ---------------------------------------------------------------------------
# geometric-series plumbing
# ---------------------------------------------------------------------------

def _geom_sums(theta: float, k0: int, step: int) -> tuple[float, float]:
    """(sum theta**k, sum k * theta**k) over k = k0, k0 + step, ..."""
    if theta <= 0.0:
        return 0.0, 0.0
    ts = theta ** step
    s0 = theta ** k0 / (1.0 - ts)
    s1 = s0 * (k0 + step * ts / (1.0 - ts))
    return s0, s1


def _geom_tail_abs(coef: float, theta: float, k0: int, step: int, num: float) -> float:
    """|sum coef*theta**k * log2(num / (coef*theta**k))| over the tail, bounded
    term-group-wise (each log factor taken in absolute value)."""
    if coef <= 0.0 or theta <= 0.0:
        return 0.0
    s0, s1 = _geom_sums(theta, k0, step)
    return coef * (s0 * abs(math.log2(num / coef)) + s1 * abs(math.log2(theta)))


def _k_truncation(theta: float, cfg: SeriesConfig) -> int:
    if theta <= 0.0:
        return 1
    k = int(math.ceil(math.log(cfg.tail_epsilon) / math.log(theta)))
    return max(4, min(cfg.k_max_cap, k))


# ---------------------------------------------------------------------------
# deletion channel: deleted-run-count entropy H(S2 | Y1 Y2)
# ---------------------------------------------------------------------------

def sy_joint_same(gamma: float, d: float, k: int) -> float:
    """P(Y2 = Y1, S2 = k | Y1): gamma-run survival for k = 0, geometric for odd k."""
    if k == 0:
        return _g0(gamma, d)
    if k % 2 == 1:
        return _beta(gamma, d) * _theta(gamma, d) ** k
    return 0.0


def sy_joint_diff(gamma: float, d: float, k: int) -> float:
    """P(Y2 != Y1, S2 = k | Y1): geometric over even k (including 0)."""
    if k % 2 == 0:
        return _beta(gamma, d) * _theta(gamma, d) ** k
    return 0.0


def cond_entropy_S_given_YY(gamma: float, d: float, cfg: SeriesConfig | None = None) -> EntropyTerm:
    """H(S2 | Y1 Y2) by direct summation of the stationary joint law.

    Authoritative value for the deletion bound; the printed closed form is
    available separately as :func:`closed_form_HS2` (known to disagree at
    d = 0, where the direct law correctly gives zero).
    """
    cfg = cfg or SeriesConfig()
    name = "deleted_run_count_entropy"
    if d == 0.0:
        return EntropyTerm(name, 0.0, 0.0)
    th, be, g0 = _theta(gamma, d), _beta(gamma, d), _g0(gamma, d)
    q = markov_q(gamma, d)
    qb = 1.0 - q
    k_max = _k_truncation(th, cfg)

    pieces = [g0 * math.log2(q / g0)]
    for k in range(1, k_max + 1, 2):
        p = be * th ** k
        pieces.append(p * math.log2(q / p))
    for k in range(0, k_max + 1, 2):
        p = be * th ** k
        pieces.append(p * math.log2(qb / p))
    value = math.fsum(pieces)

    odd0 = k_max + 1 if (k_max + 1) % 2 == 1 else k_max + 2
    even0 = k_max + 1 if (k_max + 1) % 2 == 0 else k_max + 2
    trunc = _geom_tail_abs(be, th, odd0, 2, q) + _geom_tail_abs(be, th, even0, 2, qb)
    return EntropyTerm(name, max(value, 0.0), trunc)


def closed_form_HS2(gamma: float, d: float) -> float:
    """Literal printed closed form for H(S2 | Y1 Y2) (diagnostic only)."""
    q = markov_q(gamma, d)
    th, be = _theta(gamma, d), _beta(gamma, d)
    tb = 1.0 - th
    out = gamma * tb * math.log2(q / tb)
    if th > 0.0:
        out += be * th / tb ** 2 * math.log2(1.0 / th)
        out += be * th / (1.0 - th ** 2) * math.log2(q / be)
    out += be / (1.0 - th ** 2) * math.log2((1.0 - q) / be)
    return out


# ---------------------------------------------------------------------------
# run-length transformation entropies H(L_X | L_out)
# ---------------------------------------------------------------------------

def _r_truncation(gamma: float, cfg: SeriesConfig) -> int:
    r = int(math.ceil(math.log(cfg.tail_epsilon) / math.log(gamma)))
    return max(8, min(cfg.r_max_cap, r))


def _run_law_entropy(gamma: float, step: np.ndarray, cfg: SeriesConfig, name: str) -> EntropyTerm:
    """H(L_X | L_out) where L_out is the sum over the run's bits of i.i.d.
    per-bit length contributions in {0, 1, 2} distributed as ``step``.

    The conditional row for run length r is the r-fold convolution of
    ``step``, which equals the printed binomial/multinomial row laws; rows
    are streamed so memory stays O(r_max).
    """
    r_max = _r_truncation(gamma, cfg)
    gb = 1.0 - gamma
    marginal = np.zeros(2 * r_max + 1)
    joint_pieces = []
    row = np.array([1.0])
    for r in range(1, r_max + 1):
        row = np.convolve(row, step)
        p_r = gamma ** (r - 1) * gb
        marginal[: row.size] += p_r * row
        pos = row[row > 0.0]
        row_entropy = -float(np.dot(pos, np.log2(pos)))
        joint_pieces.append(p_r * (math.log2(1.0 / p_r) + row_entropy))
    h_joint = math.fsum(joint_pieces)
    pos = marginal[marginal > 0.0]
    h_marg = -math.fsum((p * math.log2(p) for p in pos))
    value = h_joint - h_marg

    trunc = _run_tail_bound(gamma, r_max)
    return EntropyTerm(name, max(value, 0.0), trunc)


def _run_tail_bound(gamma: float, r_max: int) -> float:
    """Conservative bound on the error from dropping runs longer than r_max."""
    eps = gamma ** r_max  # P(L_X > r_max)
    gb = 1.0 - gamma
    # entropy carried by the dropped joint rows
    tail_joint = _geom_tail_abs(gb / gamma, gamma, r_max + 1, 1, 1.0)
    tail_joint += eps * math.log2(2 * r_max + 3) + eps * gamma / gb
    # distortion of the output-length marginal (Fannes-style)
    n_cols = 2 * r_max + 2
    eps_h = binary_entropy(min(eps, 0.5))
    tail_marg = 2.0 * eps * math.log2(n_cols) + eps_h + 2.0 * eps
    return tail_joint + tail_marg


def run_law_deletion_H(gamma: float, d: float, cfg: SeriesConfig | None = None) -> EntropyTerm:
    """H(L_X | L_Y') for pure deletion: each bit survives with prob 1 - d."""
    cfg = cfg or SeriesConfig()
    step = np.array([d, 1.0 - d, 0.0])
    return _run_law_entropy(gamma, step, cfg, "run_length_entropy_deletion")


def run_law_duplication_H(gamma: float, i: float, cfg: SeriesConfig | None = None) -> EntropyTerm:
    """H(L_X | L_Ytilde) for insertions only: each bit contributes 1 or 2."""
    cfg = cfg or SeriesConfig()
    step = np.array([0.0, 1.0 - i, i])
    return _run_law_entropy(gamma, step, cfg, "run_length_entropy_insertion")


def run_law_delins_H(gamma: float, d: float, i: float, cfg: SeriesConfig | None = None) -> EntropyTerm:
    """H(L_X | L_Y') for the combined channel: contributions {0, 1, 2} with
    probabilities (d, 1 - d - i, i)."""
    cfg = cfg or SeriesConfig()
    step = np.array([d, 1.0 - d - i, i])
    return _run_law_entropy(gamma, step, cfg, "run_length_entropy_delins")


def _log_comb(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def deletion_run_law_row(r: int, d: float) -> np.ndarray:
    """P(output run length s | input run length r), s = 0..2r, deletions only."""
    out = np.zeros(2 * r + 1)
    for s in range(r + 1):
        if r <= 60:
            coef = float(math.comb(r, s))
        else:
            coef = math.exp(_log_comb(r, s))
        out[s] = coef * d ** (r - s) * (1.0 - d) ** s
    return out


def duplication_run_law_row(r: int, i: float) -> np.ndarray:
    """P(s | r) for duplications only; support r <= s <= 2r."""
    out = np.zeros(2 * r + 1)
    for s in range(r, 2 * r + 1):
        if r <= 60:
            coef = float(math.comb(r, s - r))
        else:
            coef = math.exp(_log_comb(r, s - r))
        out[s] = coef * i ** (s - r) * (1.0 - i) ** (2 * r - s)
    return out


def delins_run_law_row(r: int, d: float, i: float) -> np.ndarray:
    """P(s | r) for the combined channel via the explicit insertion-count sum.

    For a pair (r, s), an assignment with ``n_ins`` insertions forces
    ``r + n_ins - s`` deletions; ``n_ins`` ranges over 0..floor(s/2) when
    s <= r and over (s - r)..floor(s/2) when s > r.
    """
    keep = 1.0 - d - i
    out = np.zeros(2 * r + 1)
    for s in range(2 * r + 1):
        lo = max(0, s - r)
        hi = s // 2
        total = 0.0
        for n_ins in range(lo, hi + 1):
            n_del = r + n_ins - s
            n_keep = s - 2 * n_ins
            if r <= 60:
                coef = float(math.comb(r, n_ins) * math.comb(r - n_ins, n_del))
            else:
                coef = math.exp(
                    math.lgamma(r + 1) - math.lgamma(n_ins + 1)
                    - math.lgamma(n_del + 1) - math.lgamma(n_keep + 1)
                )
            total += coef * i ** n_ins * d ** n_del * keep ** n_keep
        out[s] = total
    return out


_LOG_FACTORIALS = np.zeros(1)


def _log_factorials(n: int) -> np.ndarray:
    """Cached table of ln(k!) for k = 0..n (grown on demand)."""
    global _LOG_FACTORIALS
    if _LOG_FACTORIALS.size <= n:
        start = _LOG_FACTORIALS.size
        ext = np.log(np.arange(start, n + 1, dtype=float))
        _LOG_FACTORIALS = np.concatenate([_LOG_FACTORIALS, _LOG_FACTORIALS[-1] + np.cumsum(ext)])
    return _LOG_FACTORIALS


def closed_form_HLXLY(gamma: float, d: float, tail_epsilon: float = 1e-14, m_cap: int = 20_000) -> float:
    """Literal printed closed form for the deletion H(L_X | L_Y') (diagnostic).

    The residual double series over binomial coefficients converges since its
    terms are dominated by gamma**m; it is truncated once the remaining mass
    bound drops below ``tail_epsilon``.
    """
    if d == 0.0:
        return 0.0
    gb, db = 1.0 - gamma, 1.0 - d
    gd = gamma * d
    out = (d / gb - d * gb / (1.0 - gd) ** 2) * math.log2(1.0 / gd)
    out += d * gb * binary_entropy(gd) / (1.0 - gd) ** 2
    out -= db * (2.0 - gamma - gamma * d) * math.log2(1.0 - gd) / (gb * (1.0 - gd))

    lnx, lny = math.log(db * gamma), math.log(d * gamma)  # exp sums to gamma**m
    double = []
    m = 2
    while m <= m_cap:
        lf = _log_factorials(m)
        ks = np.arange(1, m)
        lc = lf[m] - lf[ks] - lf[m - ks]
        double.append(float(np.dot(np.exp(ks * lnx + (m - ks) * lny + lc), lc / _LOG2)))
        # remaining mass is at most sum_{m' > m} m' * gamma**m'
        rem = gamma ** (m + 1) * ((m + 1) + gamma / gb) / gb
        if rem < tail_epsilon:
            break
        m += 1
    out -= (gb / gamma) * math.fsum(double)
    return out


# ---------------------------------------------------------------------------
# combined channel: deleted-run term H(S_j | Y_{j-1} Y_j T_j)
# ---------------------------------------------------------------------------

def delins_s_joint_same(gamma: float, d: float, i: float, alpha: float, k: int) -> float:
    """Stationary P(S = k, Y_prev = Y_now = y, T = 0) summed over both y."""
    ip = i / (1.0 - d)
    ab = 1.0 - alpha
    c1 = 1.0 - ip * ab
    pref = 1.0 / (1.0 + ip)
    th, be, g0 = _theta(gamma, d), _beta(gamma, d), _g0(gamma, d)
    if k == 0:
        return pref * (ip * alpha + c1 * g0 + ip * ab * be)
    coef = c1 if k % 2 == 1 else ip * ab
    return pref * coef * be * th ** k


def delins_s_joint_diff(gamma: float, d: float, i: float, alpha: float, k: int) -> float:
    """Stationary P(S = k, Y_prev != Y_now, T = 0) summed over both y."""
    ip = i / (1.0 - d)
    ab = 1.0 - alpha
    c1 = 1.0 - ip * ab
    pref = 1.0 / (1.0 + ip)
    th, be, g0 = _theta(gamma, d), _beta(gamma, d), _g0(gamma, d)
    if k == 0:
        return pref * (c1 * be + ip * ab * g0)
    coef = ip * ab if k % 2 == 1 else c1
    return pref * coef * be * th ** k


def delins_S_term(gamma: float, d: float, i: float, alpha: float,
                  cfg: SeriesConfig | None = None) -> EntropyTerm:
    """Limit of H(S_j | Y_{j-1}, Y_j, T_j) by direct summation of the
    stationary joint law of the cascade's second-stage chain.

    Reduces to :func:`cond_entropy_S_given_YY` at i = 0 and vanishes at
    d = 0.  The compact closed form is :func:`closed_form_delins_S`.
    """
    cfg = cfg or SeriesConfig()
    name = "deleted_run_count_entropy"
    if d == 0.0:
        return EntropyTerm(name, 0.0, 0.0)
    ip = i / (1.0 - d)
    ab = 1.0 - alpha
    c1 = 1.0 - ip * ab
    pref = 1.0 / (1.0 + ip)
    th, be, g0 = _theta(gamma, d), _beta(gamma, d), _g0(gamma, d)
    q = markov_q(gamma, d)
    qb = 1.0 - q

    w_same = pref * (ip * alpha + c1 * q + ip * ab * qb)
    w_diff = pref * (c1 * qb + ip * ab * q)
    k_max = _k_truncation(th, cfg)

    pieces = []
    j0 = pref * (ip * alpha + c1 * g0 + ip * ab * be)
    if j0 > 0.0:
        pieces.append(j0 * math.log2(w_same / j0))
    j0 = pref * (c1 * be + ip * ab * g0)
    if j0 > 0.0:
        pieces.append(j0 * math.log2(w_diff / j0))
    for k in range(1, k_max + 1):
        same_coef = c1 if k % 2 == 1 else ip * ab
        diff_coef = ip * ab if k % 2 == 1 else c1
        p = pref * same_coef * be * th ** k
        if p > 0.0:
            pieces.append(p * math.log2(w_same / p))
        p = pref * diff_coef * be * th ** k
        if p > 0.0:
            pieces.append(p * math.log2(w_diff / p))
    value = math.fsum(pieces)

    odd0 = k_max + 1 if (k_max + 1) % 2 == 1 else k_max + 2
    even0 = k_max + 1 if (k_max + 1) % 2 == 0 else k_max + 2
    trunc = (
        _geom_tail_abs(pref * c1 * be, th, odd0, 2, w_same)
        + _geom_tail_abs(pref * ip * ab * be, th, even0, 2, w_same)
        + _geom_tail_abs(pref * ip * ab * be, th, odd0, 2, w_diff)
        + _geom_tail_abs(pref * c1 * be, th, even0, 2, w_diff)
    )
    return EntropyTerm(name, max(value, 0.0), trunc)


def closed_form_delins_S(gamma: float, d: float, i: float, alpha: float) -> float:
    """Compact closed form of the combined-channel deleted-run term (diagnostic)."""
    if d == 0.0:
        return 0.0
    ip = i / (1.0 - d)
    ab = 1.0 - alpha
    c1 = 1.0 - ip * ab
    th, be, g0 = _theta(gamma, d), _beta(gamma, d), _g0(gamma, d)
    q = markov_q(gamma, d)
    qb = 1.0 - q
    omt2 = 1.0 - th ** 2

    n1 = ip * alpha + c1 * q + ip * ab * qb
    n2 = c1 * qb + ip * ab * q

    def _piece(coef: float, num: float, den: float) -> float:
        if coef <= 0.0 or den <= 0.0:
            return 0.0
        return coef * math.log2(num / den)

    a1 = _piece(th * be * c1 / omt2, n1, be * c1)
    a1 += _piece(th ** 2 * be * ip * ab / omt2, n1, be * ip * ab)
    k0 = c1 * g0 + ip * ab * be + ip * alpha
    a1 += _piece(k0, n1, k0)

    a2 = _piece(th ** 2 * be * c1 / omt2, n2, be * c1)
    a2 += _piece(th * be * ip * ab / omt2, n2, be * ip * ab)
    k0 = ip * ab * g0 + c1 * be
    a2 += _piece(k0, n2, k0)

    third = -th * be / (1.0 - th) ** 2 * math.log2(th) if th > 0.0 else 0.0
    return (a1 + a2 + third) / (1.0 + ip)


# ---------------------------------------------------------------------------
# bound assembly
# ---------------------------------------------------------------------------

def _assemble(gamma_star: float, terms: list[EntropyTerm]) -> BoundResult:
    bound = 0.0
    budget = 0.0
    for t in terms:
        if "residual" in t.name:
            continue
        bound += -t.value if t.name.endswith("_penalty") else t.value
        budget += t.truncation_error
    return BoundResult(bound_bits=bound, gamma_star=gamma_star, terms=tuple(terms), error_budget=budget)


def lb_deletion(d: float, gamma: float, cfg: SeriesConfig | None = None,
                diagnostics: bool = True, use_printed_hs2: bool = False) -> BoundResult:
    """Deletion-channel bound h(gamma) - (1-d) H(S2|Y1Y2) - (1-gamma) H(L_X|L_Y').

    ``use_printed_hs2`` swaps the deleted-run-count term for its literal
    printed closed form, for side-by-side study of the suspected erratum.
    """
    ChannelParams(d=d)
    cfg = cfg or SeriesConfig()
    hs2 = cond_entropy_S_given_YY(gamma, d, cfg)
    run = run_law_deletion_H(gamma, d, cfg)
    hs2_value = closed_form_HS2(gamma, d) if use_printed_hs2 else hs2.value
    hs2_name = "deleted_runs_penalty_printed_form" if use_printed_hs2 else "deleted_runs_penalty"
    terms = [
        EntropyTerm("source_entropy", binary_entropy(gamma)),
        EntropyTerm(hs2_name, (1.0 - d) * hs2_value,
                    0.0 if use_printed_hs2 else (1.0 - d) * hs2.truncation_error),
        EntropyTerm("run_length_penalty", (1.0 - gamma) * run.value, (1.0 - gamma) * run.truncation_error),
    ]
    if diagnostics:
        terms.append(EntropyTerm("hs2_series_minus_closed_residual", hs2.value - closed_form_HS2(gamma, d)))
        terms.append(EntropyTerm("run_law_series_minus_closed_residual",
                                 run.value - closed_form_HLXLY(gamma, d)))
    return _assemble(gamma, terms)


def lb1_insertion(i: float, alpha: float, gamma: float) -> BoundResult:
    """Insertion bound decoding all insertion positions (LB 1)."""
    ChannelParams(i=i, alpha=alpha)
    terms = [
        EntropyTerm("source_entropy", binary_entropy(gamma)),
        EntropyTerm("insertion_positions_penalty", (1.0 + i) * h_I_limit(i, alpha, gamma)),
        EntropyTerm("insertion_ambiguity_credit", insertion_penalty_credit(i, alpha, gamma)),
    ]
    return _assemble(gamma, terms)


def lb2_insertion(i: float, alpha: float, gamma: float, cfg: SeriesConfig | None = None) -> BoundResult:
    """Insertion bound decoding only complementary insertions (LB 2)."""
    ChannelParams(i=i, alpha=alpha)
    cfg = cfg or SeriesConfig()
    run = run_law_duplication_H(gamma, i, cfg)
    terms = [
        EntropyTerm("source_entropy", binary_entropy(gamma)),
        EntropyTerm("comp_insertion_penalty", (1.0 + i) * h_T_limit(i, alpha, gamma)),
        EntropyTerm("run_length_penalty", (1.0 - gamma) * run.value, (1.0 - gamma) * run.truncation_error),
        EntropyTerm("insertion_ambiguity_credit", insertion_penalty_credit(i, alpha, gamma)),
    ]
    return _assemble(gamma, terms)


def lb_delins(d: float, i: float, alpha: float, gamma: float,
              cfg: SeriesConfig | None = None, diagnostics: bool = True) -> BoundResult:
    """Combined-channel bound assembled from the cascade representation.

    The complementary-insertion and ambiguity-credit terms are the insertion
    ones with the first-stage output statistics substituted (gamma -> q,
    i -> i' = i/(1-d)); the deleted-run term comes from the stationary
    second-stage law and the run-length term from the combined per-bit law.
    Reduces exactly to the deletion bound at i = 0 and to insertion LB 2 at
    d = 0.
    """
    ChannelParams(d=d, i=i, alpha=alpha)
    cfg = cfg or SeriesConfig()
    q = markov_q(gamma, d)
    ip = i / (1.0 - d)
    scale = 1.0 - d + i  # output symbols per input bit
    s_term = delins_S_term(gamma, d, i, alpha, cfg)
    run = run_law_delins_H(gamma, d, i, cfg)
    terms = [
        EntropyTerm("source_entropy", binary_entropy(gamma)),
        EntropyTerm("comp_insertion_penalty", scale * h_T_limit(ip, alpha, q)),
        EntropyTerm("deleted_runs_penalty", scale * s_term.value, scale * s_term.truncation_error),
        EntropyTerm("run_length_penalty", (1.0 - gamma) * run.value, (1.0 - gamma) * run.truncation_error),
        EntropyTerm("insertion_ambiguity_credit", (1.0 - d) * insertion_penalty_credit(ip, alpha, q)),
    ]
    if diagnostics:
        terms.append(EntropyTerm("delins_s_series_minus_closed_residual",
                                 s_term.value - closed_form_delins_S(gamma, d, i, alpha)))
    return _assemble(gamma, terms)
