"""Dirty-paper inner bounds for a two-antenna Gaussian broadcast channel
whose first user's channel vector is only known to lie in a two-element set.

The transmitter beamforms two streams: a first-user stream on beam b_u that
must survive both candidate channels h1, h2, and a second-user stream on beam
b_v received through g.  Dirty-paper coding (DPC) against the b_v stream with
parameter alpha leaves residual interference I_j (alpha - beta_j)^2 at
candidate receiver j, so the robust rate is a max-min over alpha of functions
that are, inside the log, upward parabolas in alpha.  All max-min steps here
reduce to minimizing the upper envelope of such parabolas, which is solved
exactly on the finite candidate set {vertices, pairwise crossings}.

Splitting off a slice x of the first-user power as a per-candidate private
description (one description per candidate channel, time-shared or
correlated) relaxes the max-min tension and can strictly enlarge the region.

Rates are in bits per real channel use, so every Gaussian expression carries
a 1/2 log2 prefactor.
"""

import math
from dataclasses import dataclass

import numpy as np

from .polyhedra import RateCurve2D

# private-power level at which the correlated-description rate penalty
# 1/2 log2(2 pi e x) changes sign
CORRELATION_BREAKPOINT = 1.0 / (2.0 * math.pi * math.e)

LOG2E = 1.0 / math.log(2.0)


def _vec2(v, name):
    arr = np.asarray(v, dtype=float).reshape(-1)
    if arr.shape != (2,) or not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be a finite real 2-vector")
    return arr


def unit_beam(v, name="beam"):
    """Validate and return a unit-norm 2-vector."""
    arr = _vec2(v, name)
    norm = float(np.hypot(arr[0], arr[1]))
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"{name} must have unit norm, got {norm!r}")
    return arr / norm


def beam_from_angle(theta):
    """Unit beam (cos theta, sin theta)."""
    return np.array([math.cos(theta), math.sin(theta)])


@dataclass(frozen=True)
class MisoChannel:
    """Two candidate user-1 rows h1, h2, user-2 row g, power P, noise N."""

    h1: np.ndarray
    h2: np.ndarray
    g: np.ndarray
    P: float
    N: float

    def __post_init__(self):
        object.__setattr__(self, "h1", _vec2(self.h1, "h1"))
        object.__setattr__(self, "h2", _vec2(self.h2, "h2"))
        object.__setattr__(self, "g", _vec2(self.g, "g"))
        if not self.P > 0:
            raise ValueError("total power P must be positive")
        if not self.N > 0:
            raise ValueError("noise variance N must be positive")
        pairs = [("h1", self.h1, "h2", self.h2),
                 ("h1", self.h1, "g", self.g),
                 ("h2", self.h2, "g", self.g)]
        for na, a, nb, b in pairs:
            cross = a[0] * b[1] - a[1] * b[0]
            scale = np.linalg.norm(a) * np.linalg.norm(b)
            if abs(cross) <= 1e-12 * max(scale, 1e-300):
                raise ValueError(f"{na} and {nb} must be linearly independent")

    def receiver(self, j):
        """Candidate user-1 channel row for index j in {1, 2}."""
        if j == 1:
            return self.h1
        if j == 2:
            return self.h2
        raise ValueError("channel index must be 1 or 2")


@dataclass(frozen=True)
class DpcScheme:
    """One transmit strategy: beams, power split, private slice, DPC knobs.

    b_u, b_v: unit beams for the user-1 and user-2 streams
    p_u, p_v: stream powers (p_u + p_v may not exceed the channel's P)
    x: slice of p_u re-used as per-candidate private descriptions, 0 <= x <= p_u
    alpha: DPC parameter of the user-1 stream (None when an op optimizes it)
    t: time share of candidate 1's private description, in [0, 1]
    """

    b_u: np.ndarray
    b_v: np.ndarray
    p_u: float
    p_v: float
    x: float = 0.0
    alpha: float = None
    t: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "b_u", unit_beam(self.b_u, "b_u"))
        object.__setattr__(self, "b_v", unit_beam(self.b_v, "b_v"))
        if self.p_u < 0 or self.p_v < 0:
            raise ValueError("stream powers must be nonnegative")
        if not 0 <= self.x <= self.p_u + 1e-12:
            raise ValueError("private slice x must lie in [0, p_u]")
        if not 0 <= self.t <= 1:
            raise ValueError("time share t must lie in [0, 1]")
        if self.alpha is not None and not math.isfinite(self.alpha):
            raise ValueError("alpha must be finite")


@dataclass(frozen=True)
class GaussRatePoint:
    """Nonnegative rate pair in bits per real channel use."""

    r1: float
    r2: float

    def __post_init__(self):
        if not (self.r1 >= 0 and self.r2 >= 0):
            raise ValueError("rates must be nonnegative")

    def as_array(self):
        return np.array([self.r1, self.r2])


def _point(r1, r2):
    # builders clamp tiny negatives from float noise; ops return raw values
    return GaussRatePoint(max(0.0, float(r1)), max(0.0, float(r2)))


def _check_power(channel, scheme):
    if scheme.p_u + scheme.p_v > channel.P + 1e-9:
        raise ValueError("p_u + p_v exceeds the channel power budget")


def _gains(channel, j, scheme):
    h = channel.receiver(j)
    return float(h @ scheme.b_u), float(h @ scheme.b_v)


def _need_alpha(scheme):
    if scheme.alpha is None:
        raise ValueError("scheme.alpha is required for this operation")
    return scheme.alpha


# ---------------------------------------------------------------------------
# single-receiver DPC rate primitives


def dpc_coefficients(channel, j, scheme):
    """Residual-interference weight I_j and cancellation center beta_j.

    The user-1 stream, dirty-paper coded with parameter alpha against the
    user-2 stream, reaches candidate receiver j at rate
    1/2 log2((h_ju^2 p_u + N) / (I_j (alpha - beta_j)^2 + N)).
    Requires p_u > 0.
    """
    _check_power(channel, scheme)
    if scheme.p_u <= 0:
        raise ValueError("dpc_coefficients needs p_u > 0")
    h_u, h_v = _gains(channel, j, scheme)
    n = channel.N
    s = h_u * h_u * scheme.p_u + n
    total = h_u * h_u * scheme.p_u + h_v * h_v * scheme.p_v + n
    beta = scheme.p_u * h_u * h_v / s
    i_coef = (scheme.p_v / scheme.p_u) * s * s / total
    return beta, i_coef


def dpc_common_rate(channel, j, scheme):
    """User-1 stream rate at candidate receiver j for the scheme's alpha.

    Zero-power streams signal zero rate rather than an error.
    """
    _check_power(channel, scheme)
    if scheme.p_u <= 0:
        return 0.0
    alpha = _need_alpha(scheme)
    beta, i_coef = dpc_coefficients(channel, j, scheme)
    h_u, _ = _gains(channel, j, scheme)
    n = channel.N
    s = h_u * h_u * scheme.p_u + n
    return 0.5 * math.log2(s / (i_coef * (alpha - beta) ** 2 + n))


def split_coefficients(channel, j, scheme):
    """beta_j and I_j after re-purposing the slice x as a private layer.

    Requires 0 <= x < p_u so the remaining first-layer power is positive.
    """
    _check_power(channel, scheme)
    if not 0 <= scheme.x < scheme.p_u:
        raise ValueError("split_coefficients needs 0 <= x < p_u")
    h_u, h_v = _gains(channel, j, scheme)
    n = channel.N
    s = h_u * h_u * scheme.p_u + n
    total = h_u * h_u * scheme.p_u + h_v * h_v * scheme.p_v + n
    beta_x = (scheme.p_u - scheme.x) * h_u * h_v / s
    i_x = (scheme.p_v / (scheme.p_u - scheme.x)) * s * s / total
    return beta_x, i_x


def private_link_rate(channel, j, scheme):
    """Rate carried by the private slice x at candidate receiver j."""
    _check_power(channel, scheme)
    h_u, _ = _gains(channel, j, scheme)
    n = channel.N
    return 0.5 * math.log2((h_u * h_u * scheme.x + n) / n)


def dpc_private_optimal(channel, j, scheme):
    """User-1 stream rate at receiver j with the private layer re-encoded
    optimally against both the user-2 stream and the remaining first layer.

    Closed form of the inner maximization over the private DPC parameter:
    1/2 log2((h_ju^2 p_u + N) /
             (I_j^x N (alpha - beta_j^x)^2 / (h_ju^2 x + N) + N)).
    x = p_u is handled as the limit where the first layer carries no power.
    """
    _check_power(channel, scheme)
    alpha = _need_alpha(scheme)
    h_u, _ = _gains(channel, j, scheme)
    n = channel.N
    s = h_u * h_u * scheme.p_u + n
    if scheme.x >= scheme.p_u:
        if scheme.p_v == 0 or alpha == 0:
            return 0.5 * math.log2(s / n)
        return -math.inf
    beta_x, i_x = split_coefficients(channel, j, scheme)
    # grouped so the x = 0 case reproduces dpc_common_rate bit for bit
    bracket = i_x * (alpha - beta_x) ** 2 * (n / (h_u * h_u * scheme.x + n))
    return 0.5 * math.log2(s / (bracket + n))


def gaussian_mutual_information(cov, a_indices, b_indices):
    """I(A; B) in bits for jointly Gaussian variables with covariance cov.

    Validation oracle: every DPC rate formula in this module can be checked
    against determinant ratios of an explicit joint covariance.
    """
    cov = np.atleast_2d(np.asarray(cov, dtype=float))
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise ValueError("covariance must be a square matrix")
    scale = max(float(np.max(np.abs(cov))), 1.0)
    if np.max(np.abs(cov - cov.T)) > 1e-9 * scale:
        raise ValueError("covariance must be symmetric")
    if np.min(np.linalg.eigvalsh(cov)) < -1e-9 * scale:
        raise ValueError("covariance must be positive semidefinite")
    a = list(a_indices)
    b = list(b_indices)
    if set(a) & set(b):
        raise ValueError("variable groups must be disjoint")
    sign_a, ld_a = np.linalg.slogdet(cov[np.ix_(a, a)])
    sign_b, ld_b = np.linalg.slogdet(cov[np.ix_(b, b)])
    sign_j, ld_j = np.linalg.slogdet(cov[np.ix_(a + b, a + b)])
    if sign_a <= 0 or sign_b <= 0:
        raise ValueError("marginal covariance blocks must be nonsingular")
    if sign_j <= 0:
        return math.inf  # degenerate joint law, deterministic dependence
    return 0.5 * (ld_a + ld_b - ld_j) * LOG2E


# ---------------------------------------------------------------------------
# exact minimization of the upper envelope of upward parabolas


def _golden_min(fun, lo, hi, tol=1e-12):
    inv = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv * (b - a)
    d = a + inv * (b - a)
    fc, fd = fun(c), fun(d)
    while b - a > tol * (1.0 + abs(a) + abs(b)):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - inv * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv * (b - a)
            fd = fun(d)
    return (a + b) / 2.0


def minimax_parabolas(parabolas, refine=True):
    """Minimize t -> max_j of A_j (t - v_j)^2 + c_j with all A_j >= 0.

    The envelope's minimizer is a vertex of the active parabola or a crossing
    of two parabolas, so the finite candidate set is exact.  An optional
    golden-section pass over the bracketing candidates guards the arithmetic.
    Returns (t_star, value).
    """
    paras = [(float(a), float(v), float(c)) for a, v, c in parabolas]
    if not paras:
        raise ValueError("need at least one parabola")
    for a, _, _ in paras:
        if a < 0:
            raise ValueError("parabolas must open upward")

    def env(t):
        return max(a * (t - v) ** 2 + c for a, v, c in paras)

    cands = [v for _, v, _ in paras]
    for i in range(len(paras)):
        for j in range(i + 1, len(paras)):
            ai, vi, ci = paras[i]
            aj, vj, cj = paras[j]
            qa = ai - aj
            qb = -2.0 * (ai * vi - aj * vj)
            qc = (ai * vi * vi + ci) - (aj * vj * vj + cj)
            if abs(qa) <= 1e-13 * (ai + aj + 1.0):
                if abs(qb) > 1e-300:
                    cands.append(-qc / qb)
                continue
            disc = qb * qb - 4.0 * qa * qc
            if disc >= 0:
                root = math.sqrt(disc)
                cands.append((-qb + root) / (2.0 * qa))
                cands.append((-qb - root) / (2.0 * qa))
    best_t = min(cands, key=env)
    best_v = env(best_t)
    if refine and len(cands) > 1:
        lo = min(cands)
        hi = max(cands)
        t_g = _golden_min(env, lo - 1e-9, hi + 1e-9)
        if env(t_g) < best_v:
            best_t, best_v = t_g, env(t_g)
    return best_t, best_v


def minimax_parabolas_grid(parabolas, num=10001):
    """Grid + golden-section fallback for the same problem, used as a guard."""
    paras = [(float(a), float(v), float(c)) for a, v, c in parabolas]

    def env(t):
        return max(a * (t - v) ** 2 + c for a, v, c in paras)

    vs = [v for _, v, _ in paras]
    lo, hi = min(vs) - 2.0, max(vs) + 2.0
    grid = np.linspace(lo, hi, num)
    vals = np.max([a * (grid - v) ** 2 + c for a, v, c in paras], axis=0)
    k = int(np.argmin(vals))
    a = grid[max(k - 1, 0)]
    b = grid[min(k + 1, num - 1)]
    t = _golden_min(env, a, b)
    return t, env(t)


def _minimax_two_vec(a1, v1, c1, a2, v2, c2):
    """Vectorized two-parabola envelope minimization.

    All arguments broadcast; returns (t_star, value) arrays.
    """
    a1, v1, c1, a2, v2, c2 = np.broadcast_arrays(a1, v1, c1, a2, v2, c2)
    qa = a1 - a2
    qb = -2.0 * (a1 * v1 - a2 * v2)
    qc = (a1 * v1 ** 2 + c1) - (a2 * v2 ** 2 + c2)
    quad = np.abs(qa) > 1e-13 * (a1 + a2 + 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        disc = qb * qb - 4.0 * qa * qc
        root = np.sqrt(np.where(disc >= 0, disc, np.nan))
        r_plus = np.where(quad, (-qb + root) / (2.0 * qa), np.nan)
        r_minus = np.where(quad, (-qb - root) / (2.0 * qa), np.nan)
        linear = np.where(~quad & (np.abs(qb) > 1e-300), -qc / qb, np.nan)
    cands = np.stack([v1, v2, r_plus, r_minus, linear], axis=-1)
    cands = np.where(np.isfinite(cands), cands, v1[..., None])
    q1 = a1[..., None] * (cands - v1[..., None]) ** 2 + c1[..., None]
    q2 = a2[..., None] * (cands - v2[..., None]) ** 2 + c2[..., None]
    env = np.maximum(q1, q2)
    k = np.argmin(env, axis=-1)
    t_star = np.take_along_axis(cands, k[..., None], axis=-1)[..., 0]
    value = np.take_along_axis(env, k[..., None], axis=-1)[..., 0]
    return t_star, value


# ---------------------------------------------------------------------------
# common-layer-only corner points and their closed form


@dataclass(frozen=True)
class CdCorners:
    """The two antagonist encoding orderings for one (beams, powers) choice.

    corner1: user-2 stream encoded first, user-1 stream dirty-paper coded
             against it with the max-min optimal alpha (stored in alpha).
    corner2: user-1 stream encoded first (treated as noise by receiver j),
             user-2 stream dirty-paper coded against it.
    """

    corner1: GaussRatePoint
    corner2: GaussRatePoint
    alpha: float


def cd_region(channel, scheme):
    """Both corner points reachable without a private layer."""
    _check_power(channel, scheme)
    n = channel.N
    g_u = float(channel.g @ scheme.b_u)
    g_v = float(channel.g @ scheme.b_v)
    gu2, gv2 = g_u * g_u, g_v * g_v
    p_u, p_v = scheme.p_u, scheme.p_v

    if p_u > 0:
        paras = []
        for j in (1, 2):
            beta, i_coef = dpc_coefficients(channel, j, scheme)
            h_u, _ = _gains(channel, j, scheme)
            s = h_u * h_u * p_u + n
            paras.append((i_coef / s, beta, n / s))
        alpha, env = minimax_parabolas(paras)
        r1_first = -0.5 * math.log2(env)
    else:
        alpha, r1_first = 0.0, 0.0
    r2_first = 0.5 * math.log2((gu2 * p_u + gv2 * p_v + n) / (gu2 * p_u + n))
    corner1 = _point(r1_first, r2_first)

    r2_second = 0.5 * math.log2((gv2 * p_v + n) / n)
    vals = []
    for j in (1, 2):
        h_u, h_v = _gains(channel, j, scheme)
        top = h_u * h_u * p_u + h_v * h_v * p_v + n
        vals.append(0.5 * math.log2(top / (h_v * h_v * p_v + n)))
    corner2 = _point(min(vals), r2_second)
    return CdCorners(corner1, corner2, float(alpha))


def p_of_eta(eta, p_u, p_v, n):
    """Residual interference power after max-min DPC in the symmetric
    geometry, as a function of the private-beam alignment eta in [-1, 1]."""
    if not -1 <= eta <= 1:
        raise ValueError("eta must lie in [-1, 1]")
    if p_u < 0 or p_v < 0 or n <= 0:
        raise ValueError("powers must be nonnegative and noise positive")
    p_tot = p_u + p_v
    rad = math.sqrt((p_tot + 2 * n) ** 2 + (eta * eta - 1) * p_v * p_v)
    return (1 - eta) * p_v * p_u / (p_tot + 2 * n + rad)


def cd_closed_form(eta, p_u, p_v, n):
    """corner1 of cd_region in the symmetric geometry, in closed form.

    Geometry: h1, h2 orthonormal, g proportional to h1 - h2, user-1 beam on
    the mean direction h1 + h2, user-2 beam at angle theta with
    eta = sin(2 theta).
    """
    residual = p_of_eta(eta, p_u, p_v, n)
    r1 = 0.5 * math.log2((p_u + 2 * n) / (residual + 2 * n))
    r2 = 0.5 * math.log2(((1 - eta) * p_v + 2 * n) / (2 * n))
    return _point(r1, r2)


# ---------------------------------------------------------------------------
# private-description layers


def md_uncorrelated_point(channel, scheme):
    """Rate pair with two time-shared independent private descriptions.

    The slice x of the user-1 power is re-sent as a private description for
    each candidate channel, active a fraction t (candidate 1) or 1 - t
    (candidate 2) of the time.  The first-user rate is optimized over alpha.
    """
    _check_power(channel, scheme)
    n = channel.N
    if scheme.p_u <= 0:
        r1 = 0.0
    elif scheme.x >= scheme.p_u:
        # everything private: alpha -> 0 limit, each receiver keeps its share
        vals = []
        for j, share in ((1, scheme.t), (2, 1.0 - scheme.t)):
            h_u, _ = _gains(channel, j, scheme)
            vals.append(share * 0.5
                        * math.log2((h_u * h_u * scheme.p_u + n) / n))
        r1 = min(vals)
    else:
        paras = []
        for j, share in ((1, scheme.t), (2, 1.0 - scheme.t)):
            h_u, _ = _gains(channel, j, scheme)
            s = h_u * h_u * scheme.p_u + n
            beta_x, i_x = split_coefficients(channel, j, scheme)
            w = ((h_u * h_u * scheme.x + n) / n) ** (-share)
            paras.append((w * i_x / s,
                          beta_x,
                          w * (n + h_u * h_u * scheme.x) / s))
        _, env = minimax_parabolas(paras)
        r1 = -0.5 * math.log2(env)
    g_u = float(channel.g @ scheme.b_u)
    g_v = float(channel.g @ scheme.b_v)
    r2 = 0.5 * math.log2(
        (g_u * g_u * scheme.p_u + g_v * g_v * scheme.p_v + n)
        / (g_u * g_u * scheme.p_u + n))
    return _point(r1, r2)


def _correlated_f(channel, j, scheme, alpha):
    h_u, _ = _gains(channel, j, scheme)
    n = channel.N
    s = h_u * h_u * scheme.p_u + n
    beta_x, i_x = split_coefficients(channel, j, scheme)
    bracket = i_x * (alpha - beta_x) ** 2 * (n / (h_u * h_u * scheme.x + n))
    return 0.5 * math.log2(s / (bracket + n))


def md_correlated_point(channel, scheme):
    """Rate pair with one pair of fully correlated private descriptions.

    Both candidates' descriptions carry the same Gaussian sample of power x,
    so each receiver gets its side for free, but revealing the sample costs
    the correlation penalty 1/2 log2(2 pi e x) inside a sum constraint:
    R1 <= min_j f_j(alpha, x) and 2 R1 <= f_1 + f_2 - 1/2 log2(2 pi e x).
    Returns (point, sum_constraint_active).
    """
    _check_power(channel, scheme)
    alpha = _need_alpha(scheme)
    if not scheme.x > 0:
        raise ValueError("correlated descriptions need x > 0")
    if not scheme.x < scheme.p_u:
        raise ValueError("correlated descriptions need x < p_u")
    f1 = _correlated_f(channel, 1, scheme, alpha)
    f2 = _correlated_f(channel, 2, scheme, alpha)
    penalty = 0.5 * math.log2(2.0 * math.pi * math.e * scheme.x)
    bound_min = min(f1, f2)
    bound_sum = 0.5 * (f1 + f2 - penalty)
    r1 = min(bound_min, bound_sum)
    sum_active = bound_sum < bound_min
    n = channel.N
    g_u = float(channel.g @ scheme.b_u)
    g_v = float(channel.g @ scheme.b_v)
    r2 = 0.5 * math.log2(
        (g_u * g_u * scheme.p_u + g_v * g_v * scheme.p_v + n)
        / (g_u * g_u * scheme.p_u + n))
    return _point(r1, r2), sum_active


def md_correlated_optimal(channel, scheme):
    """md_correlated_point with alpha optimized.

    The min branch is an exact parabola max-min; the sum branch is evaluated
    on the same candidate set, which keeps the result an achievable inner
    point even where the sum constraint binds.
    Returns (point, alpha, sum_constraint_active).
    """
    _check_power(channel, scheme)
    if not 0 < scheme.x < scheme.p_u:
        raise ValueError("correlated descriptions need 0 < x < p_u")
    n = channel.N
    paras = []
    for j in (1, 2):
        h_u, _ = _gains(channel, j, scheme)
        s = h_u * h_u * scheme.p_u + n
        beta_x, i_x = split_coefficients(channel, j, scheme)
        paras.append((i_x * n / ((h_u * h_u * scheme.x + n) * s),
                      beta_x, n / s))
    alpha_minmax, _ = minimax_parabolas(paras)
    penalty = 0.5 * math.log2(2.0 * math.pi * math.e * scheme.x)
    best = (-math.inf, 0.0, False)
    for alpha in (alpha_minmax, paras[0][1], paras[1][1]):
        f1 = -0.5 * math.log2(paras[0][0] * (alpha - paras[0][1]) ** 2
                              + paras[0][2])
        f2 = -0.5 * math.log2(paras[1][0] * (alpha - paras[1][1]) ** 2
                              + paras[1][2])
        bound_min = min(f1, f2)
        bound_sum = 0.5 * (f1 + f2 - penalty)
        r1 = min(bound_min, bound_sum)
        if r1 > best[0]:
            best = (r1, alpha, bound_sum < bound_min)
    r1, alpha, sum_active = best
    g_u = float(channel.g @ scheme.b_u)
    g_v = float(channel.g @ scheme.b_v)
    r2 = 0.5 * math.log2(
        (g_u * g_u * scheme.p_u + g_v * g_v * scheme.p_v + n)
        / (g_u * g_u * scheme.p_u + n))
    return _point(r1, r2), float(alpha), bool(sum_active)


# ---------------------------------------------------------------------------
# strictness of the private-description gain (symmetric geometry)


@dataclass(frozen=True)
class StrictnessReport:
    """Outcome of the private-description gain check.

    condition_holds: the sufficient condition residual > p_u / 2 is met
    best_gain: max over x of R1(x) - R1(0) from the direct sweep
    best_x: the x achieving best_gain
    """

    condition_holds: bool
    best_gain: float
    best_x: float

    def __bool__(self):
        return self.condition_holds


def strictness_uncorrelated_check(p_u, p_v, n, eta, x_steps=2001):
    """Does a time-shared private slice strictly raise R1 here?

    Symmetric geometry, equal time share t = 1/2.  R1(x) is evaluated in
    closed form; the sufficient condition for R1 strictly increasing at x = 0
    is residual interference > p_u / 2.
    """
    if p_u <= 0:
        return StrictnessReport(False, 0.0, 0.0)
    residual = p_of_eta(eta, p_u, p_v, n)
    condition = residual > p_u / 2.0

    xs = np.linspace(0.0, p_u * (1.0 - 1e-9), x_steps)
    scaled = (p_u - xs) / np.sqrt(xs + 2 * n) * math.sqrt(2 * n) / p_u
    denom = scaled * residual + math.sqrt(2 * n) * np.sqrt(xs + 2 * n)
    r1 = 0.5 * np.log2((p_u + 2 * n) / denom)
    k = int(np.argmax(r1))
    return StrictnessReport(bool(condition),
                            float(r1[k] - r1[0]), float(xs[k]))


# ---------------------------------------------------------------------------
# geometry helpers and boundary sweeps


def special_geometry(scale=1.0, total_power=10.0, noise=1.0):
    """Symmetric benchmark channel: orthogonal equal-norm candidate rows with
    the user-2 row along their difference."""
    h1 = scale * np.array([1.0, 0.0])
    h2 = scale * np.array([0.0, 1.0])
    g = scale * np.array([1.0, -1.0]) / math.sqrt(2.0)
    return MisoChannel(h1, h2, g, total_power, noise)


def special_beams(eta):
    """Beam pair (b_u on the mean direction, b_v at eta = sin(2 theta))."""
    if not -1 <= eta <= 1:
        raise ValueError("eta must lie in [-1, 1]")
    theta = 0.5 * math.asin(eta)
    return beam_from_angle(math.pi / 4.0), beam_from_angle(theta)


def is_symmetric_geometry(channel, tol=1e-9):
    """True when the channel matches special_geometry up to rotation/scale."""
    n1 = np.linalg.norm(channel.h1)
    n2 = np.linalg.norm(channel.h2)
    if abs(n1 - n2) > tol * max(n1, n2):
        return False
    if abs(float(channel.h1 @ channel.h2)) > tol * n1 * n2:
        return False
    mean = channel.h1 + channel.h2
    gn = np.linalg.norm(channel.g)
    return abs(float(channel.g @ mean)) <= tol * gn * np.linalg.norm(mean)


REGION_KINDS = ("cd", "md-uncorr", "md-corr")


def _normalize_kind(kind):
    k = str(kind).lower().replace("_", "-")
    if k not in REGION_KINDS:
        raise ValueError(f"kind must be one of {REGION_KINDS}")
    return k


def _beam_grid(channel, eta_steps, beam_steps):
    """Arrays of effective gains per beam cell plus per-cell labels."""
    if is_symmetric_geometry(channel):
        scale = float(np.linalg.norm(channel.h1))
        etas = np.linspace(-1.0, 1.0, eta_steps)
        thetas = 0.5 * np.arcsin(etas)
        # rotate the canonical beams into the channel's own frame
        e1 = channel.h1 / scale
        e2 = channel.h2 / scale
        b_u = (e1 + e2) / math.sqrt(2.0)
        b_vs = np.outer(np.cos(thetas), e1) + np.outer(np.sin(thetas), e2)
        b_us = np.broadcast_to(b_u, b_vs.shape)
        labels = [("eta", float(v)) for v in etas]
    else:
        steps_u, steps_v = (49, 97) if beam_steps is None else beam_steps
        tu = np.linspace(0.0, math.pi, steps_u, endpoint=False)
        tv = np.linspace(0.0, math.pi, steps_v, endpoint=False)
        uu, vv = np.meshgrid(tu, tv, indexing="ij")
        uu, vv = uu.ravel(), vv.ravel()
        b_us = np.stack([np.cos(uu), np.sin(uu)], axis=1)
        b_vs = np.stack([np.cos(vv), np.sin(vv)], axis=1)
        labels = [("theta_u", float(a), "theta_v", float(b))
                  for a, b in zip(uu, vv)]
    gains = {
        "h1u": b_us @ channel.h1, "h1v": b_vs @ channel.h1,
        "h2u": b_us @ channel.h2, "h2v": b_vs @ channel.h2,
        "gu": b_us @ channel.g, "gv": b_vs @ channel.g,
    }
    return gains, labels


def region_boundary(kind, channel, *, eta_steps=401, split_steps=201,
                    x_steps=201, t_values=(0.0, 0.25, 0.5, 0.75, 1.0),
                    beam_steps=None, power=None, time_sharing=False):
    """Pareto staircase of one inner bound, swept over scheme parameters.

    kind: "cd", "md-uncorr" or "md-corr".  Symmetric channels sweep the
    private-beam alignment eta; general channels sweep both beam angles.
    Returns a RateCurve2D whose meta rows record the achieving scheme; pass
    time_sharing=True for the convex (time-shared) closure instead.
    """
    kind = _normalize_kind(kind)
    p_total = channel.P if power is None else float(power)
    if not 0 <= p_total <= channel.P + 1e-12:
        raise ValueError("power must lie in [0, channel.P]")
    n = channel.N
    if p_total == 0:
        return RateCurve2D(np.zeros((1, 2)),
                           meta=[{"p_u": 0.0, "p_v": 0.0}])

    gains, labels = _beam_grid(channel, eta_steps, beam_steps)
    splits = np.linspace(0.0, 1.0, split_steps)

    h1u = gains["h1u"][:, None]
    h1v = gains["h1v"][:, None]
    h2u = gains["h2u"][:, None]
    h2v = gains["h2v"][:, None]
    gu = gains["gu"][:, None]
    gv = gains["gv"][:, None]
    p_u = p_total * splits[None, :]
    p_v = p_total - p_u
    tiny = 1e-300

    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        s1 = h1u ** 2 * p_u + n
        s2 = h2u ** 2 * p_u + n
        tot1 = h1u ** 2 * p_u + h1v ** 2 * p_v + n
        tot2 = h2u ** 2 * p_u + h2v ** 2 * p_v + n
        r2_first = 0.5 * np.log2((gu ** 2 * p_u + gv ** 2 * p_v + n)
                                 / (gu ** 2 * p_u + n))
        r2_second = 0.5 * np.log2((gv ** 2 * p_v + n) / n)
        r1_second = np.minimum(
            0.5 * np.log2(tot1 / (h1v ** 2 * p_v + n)),
            0.5 * np.log2(tot2 / (h2v ** 2 * p_v + n)))

        def corr_parabolas(x):
            # min-branch parabolas: rate_j = -1/2 log2(q_j(alpha))
            out = []
            for hu, hv, s, tot in ((h1u, h1v, s1, tot1),
                                   (h2u, h2v, s2, tot2)):
                beta_x = (p_u - x) * hu * hv / s
                i_x = p_v * s * s / np.maximum((p_u - x) * tot, tiny)
                out += [i_x * n / ((hu * hu * x + n) * s), beta_x, n / s]
            return out

        def uncorr_parabolas(x, share1):
            # weights fold each receiver's private-link term into the envelope
            out = []
            for hu, hv, s, tot, share in ((h1u, h1v, s1, tot1, share1),
                                          (h2u, h2v, s2, tot2, 1.0 - share1)):
                beta_x = (p_u - x) * hu * hv / s
                i_x = p_v * s * s / np.maximum((p_u - x) * tot, tiny)
                w = ((hu * hu * x + n) / n) ** (-share)
                out += [w * i_x / s, beta_x, w * (n + hu * hu * x) / s]
            return out

        # x sweep: zero, a log-spaced ladder, and the penalty breakpoint
        fracs = np.concatenate([[0.0],
                                np.geomspace(1e-7, 1.0, max(x_steps - 2, 1))
                                * (1.0 - 1e-9)])
        x_slices = [f * p_u for f in fracs]
        x_slices.append(np.minimum(CORRELATION_BREAKPOINT,
                                   p_u * (1.0 - 1e-9)))

        grid_shape = tot1.shape  # (beam cells, power splits)
        if kind == "cd":
            alpha_main, env = _minimax_two_vec(*corr_parabolas(0.0))
            r1_main = -0.5 * np.log2(env)
            x_main = np.zeros(grid_shape)
            t_main = np.full(grid_shape, 0.5)
            sum_main = np.zeros(grid_shape, dtype=bool)
        elif kind == "md-uncorr":
            r1_main = np.full(grid_shape, -np.inf)
            alpha_main = np.zeros(grid_shape)
            x_main = np.zeros(grid_shape)
            t_main = np.zeros(grid_shape)
            sum_main = np.zeros(grid_shape, dtype=bool)
            for share1 in t_values:
                for x in x_slices:
                    alph, env = _minimax_two_vec(*uncorr_parabolas(x, share1))
                    r1 = -0.5 * np.log2(env)
                    upd = r1 > r1_main
                    r1_main = np.where(upd, r1, r1_main)
                    alpha_main = np.where(upd, alph, alpha_main)
                    x_main = np.where(upd, x, x_main)
                    t_main = np.where(upd, share1, t_main)
        else:  # md-corr
            r1_main = np.full(grid_shape, -np.inf)
            alpha_main = np.zeros(grid_shape)
            x_main = np.zeros(grid_shape)
            t_main = np.full(grid_shape, 0.5)
            sum_main = np.zeros(grid_shape, dtype=bool)
            for x in x_slices:
                a1, v1, c1, a2, v2, c2 = corr_parabolas(x)
                alph, _ = _minimax_two_vec(a1, v1, c1, a2, v2, c2)
                cands = np.stack([alph, v1, v2], axis=-1)
                q1 = a1[..., None] * (cands - v1[..., None]) ** 2 \
                    + c1[..., None]
                q2 = a2[..., None] * (cands - v2[..., None]) ** 2 \
                    + c2[..., None]
                f1 = -0.5 * np.log2(q1)
                f2 = -0.5 * np.log2(q2)
                pen = np.where(x > 0,
                               0.5 * np.log2(2.0 * math.pi * math.e
                                             * np.maximum(x, tiny)),
                               -np.inf)
                min_branch = np.minimum(f1, f2)
                sum_branch = 0.5 * (f1 + f2 - pen[..., None])
                r1c = np.minimum(min_branch, sum_branch)
                k = np.argmax(r1c, axis=-1)[..., None]
                r1 = np.take_along_axis(r1c, k, axis=-1)[..., 0]
                act = np.take_along_axis(sum_branch < min_branch, k,
                                         axis=-1)[..., 0]
                alph_best = np.take_along_axis(cands, k, axis=-1)[..., 0]
                upd = r1 > r1_main
                r1_main = np.where(upd, r1, r1_main)
                alpha_main = np.where(upd, alph_best, alpha_main)
                x_main = np.where(upd, x, x_main)
                sum_main = np.where(upd, act, sum_main)

    # zero first-layer power carries no first-user rate
    r1_main = np.where(p_u > 0, r1_main, 0.0)
    r1_main = np.maximum(np.nan_to_num(r1_main, nan=0.0, neginf=0.0), 0.0)
    r2_first = np.maximum(r2_first, 0.0)
    r1_second = np.maximum(r1_second, 0.0)
    r2_second = np.maximum(r2_second, 0.0)

    block_a = np.column_stack([r1_main.ravel(), r2_first.ravel()])
    block_b = np.column_stack([r1_second.ravel(), r2_second.ravel()])
    samples = np.vstack([block_a, block_b])
    curve = RateCurve2D.from_samples(samples, meta=range(len(samples)))

    n_main = block_a.shape[0]
    n_splits = len(splits)

    def decode(flat_index):
        in_main = flat_index < n_main
        rem = flat_index if in_main else flat_index - n_main
        cell, split_idx = divmod(rem, n_splits)
        row = dict(zip(labels[cell][::2], labels[cell][1::2]))
        row["p_u"] = float(p_u[0, split_idx])
        row["p_v"] = float(p_v[0, split_idx])
        if in_main:
            row["order"] = "user2-encoded-first"
            row["x"] = float(x_main[cell, split_idx])
            row["t"] = float(t_main[cell, split_idx])
            row["alpha"] = float(alpha_main[cell, split_idx])
            row["sum_constraint_active"] = bool(sum_main[cell, split_idx])
        else:
            row["order"] = "user1-encoded-first"
        return row

    curve.meta = [decode(i) for i in curve.meta]
    return curve.hull() if time_sharing else curve
