"""Adversarial graph fusion.

The fused graph P and the view weights alpha solve a min-max problem: P
maximizes an agreement objective regularized toward the current soft labels,
alpha minimizes the resulting value h(alpha) over the simplex. The inner
maximization has a closed-form row-wise solution; the outer minimization is
a projected reduced-gradient descent with an Armijo line search.

h is evaluated with the label-distance matrix H held fixed within one outer
step, which makes the inner maximizer unique and the Danskin gradient
formula exact: dh/dalpha_v = 2 lambda alpha_v Tr(P*^T Z_v T_v).
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .graphs import weighted_fusion_input
from .simplex import prox_rows

_DEGREE_EPS = 1e-12
_ARMIJO_C = 1e-4
_ARMIJO_SHRINK = 0.5
_MAX_BACKTRACKS = 20


def compute_H(F, Q, P):
    """Squared distances between sample labels and degree-normalized anchor labels.

    H[i, j] = ||F_i - Q_j / sqrt(col_degree_j)||^2. Sample degrees are exactly
    one because P is row stochastic, so F rows enter unscaled. Anchors that no
    sample points to get their degree floored at 1e-12 (with a warning), which
    keeps H finite but large for those columns.
    """
    F = np.asarray(F, dtype=np.float64)
    Q = np.asarray(Q, dtype=np.float64)
    P = np.asarray(P, dtype=np.float64)
    col = P.sum(axis=0)
    if np.any(col < _DEGREE_EPS):
        warnings.warn(
            f"{int(np.sum(col < _DEGREE_EPS))} anchor(s) have zero degree in the "
            "fused graph; flooring their degree at 1e-12",
            RuntimeWarning,
            stacklevel=2,
        )
        col = np.maximum(col, _DEGREE_EPS)
    Qn = Q / np.sqrt(col)[:, None]
    H = (
        (F * F).sum(axis=1)[:, None]
        - 2.0 * (F @ Qn.T)
        + (Qn * Qn).sum(axis=1)[None, :]
    )
    return np.maximum(H, 0.0)


def solve_inner_P(Z_tilde, H, lam, beta):
    """Row-wise closed form of the inner maximization.

    Each row of the maximizer of lam <P, Z~> - beta ||P||^2 - <H, P> over
    row-stochastic P is the simplex projection of (lam Z~_i - H_i) / (2 beta).
    """
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    Z_tilde = np.asarray(Z_tilde, dtype=np.float64)
    H = np.asarray(H, dtype=np.float64)
    return prox_rows((lam * Z_tilde - H) / (2.0 * beta))


def inner_value(P, Z_tilde, H, lam, beta):
    """Inner objective lam <P, Z~> - beta ||P||_F^2 - <H, P>."""
    return float(
        lam * np.sum(P * Z_tilde) - beta * np.sum(P * P) - np.sum(H * P)
    )


def grad_h(alpha, P_star, Zs, Ts, lam):
    """Exact gradient of h at alpha, P_star being the inner maximizer there."""
    alpha = np.asarray(alpha, dtype=np.float64)
    out = np.empty(alpha.size)
    for v, (Z, T) in enumerate(zip(Zs, Ts)):
        out[v] = 2.0 * lam * alpha[v] * float(np.sum(P_star * (Z @ T)))
    return out


def reduced_descent_direction(grad, alpha):
    """Simplex-feasible descent direction from the reduced gradient.

    With u the largest weight (ties to the lowest index), the reduced
    gradient is grad - grad[u]. The direction negates it, zeroes components
    that would push a zero weight negative, and rebalances the pivot so the
    components sum to zero exactly.
    """
    grad = np.asarray(grad, dtype=np.float64)
    alpha = np.asarray(alpha, dtype=np.float64)
    u = int(np.argmax(alpha))
    red = grad - grad[u]
    g = -red
    clamp = (alpha <= 0.0) & (red > 0.0)
    clamp[u] = False
    g[clamp] = 0.0
    g[u] = 0.0
    g[u] = -g.sum()
    return g


@dataclass
class AgfResult:
    """Outcome of one adversarial fusion solve."""

    alpha: np.ndarray
    P: np.ndarray
    H: np.ndarray
    converged: bool
    n_iter: int
    h_trace: list = field(default_factory=list)
    steps: list = field(default_factory=list)
    deltas: list = field(default_factory=list)
    alpha_trace: list = field(default_factory=list)


def agf_minmax(
    Zs,
    Ts,
    F,
    Q,
    lam,
    beta,
    alpha0=None,
    P0=None,
    tol=1e-4,
    max_iter=50,
):
    """Alternate H refresh, inner P solve, and a reduced-gradient alpha step.

    Every outer iteration recomputes H from (F, Q) and the previous P, solves
    the inner problem exactly, and takes one Armijo backtracking step on the
    weights. Stops when the accepted step moves no weight by more than tol,
    or when the line search finds no decrease (step 0, reported converged),
    or after max_iter iterations (reported not converged).

    The returned P is always the exact inner maximizer at the returned alpha
    under the returned H.
    """
    V = len(Zs)
    if len(Ts) != V:
        raise ValueError("one alignment per view required")
    alpha = (
        np.full(V, 1.0 / V)
        if alpha0 is None
        else np.asarray(alpha0, dtype=np.float64).copy()
    )
    if P0 is None:
        Zt = weighted_fusion_input(Zs, Ts, alpha)
        P = solve_inner_P(Zt, np.zeros_like(Zt), lam, beta)
    else:
        P = np.asarray(P0, dtype=np.float64)

    res = AgfResult(
        alpha=alpha, P=P, H=np.zeros_like(P), converged=False, n_iter=0
    )
    res.alpha_trace.append(alpha.copy())

    if V == 1:
        H = compute_H(F, Q, P)
        P = solve_inner_P(weighted_fusion_input(Zs, Ts, alpha), H, lam, beta)
        res.alpha, res.P, res.H = np.array([1.0]), P, H
        res.converged, res.n_iter = True, 1
        return res

    for it in range(1, max_iter + 1):
        res.n_iter = it
        H = compute_H(F, Q, P)
        Zt = weighted_fusion_input(Zs, Ts, alpha)
        P = solve_inner_P(Zt, H, lam, beta)
        res.H = H
        res.alpha, res.P = alpha, P

        h0 = inner_value(P, Zt, H, lam, beta)
        grad = grad_h(alpha, P, Zs, Ts, lam)
        g = reduced_descent_direction(grad, alpha)
        if not np.any(g):
            res.converged = True
            break
        slope = float(grad @ g)

        # largest step keeping every weight nonnegative
        shrinking = g < 0
        theta = min(1.0, float(np.min(alpha[shrinking] / -g[shrinking])))

        accepted = False
        for _ in range(_MAX_BACKTRACKS + 1):
            cand = np.maximum(alpha + theta * g, 0.0)
            cand /= cand.sum()
            Zt_c = weighted_fusion_input(Zs, Ts, cand)
            P_c = solve_inner_P(Zt_c, H, lam, beta)
            h_c = inner_value(P_c, Zt_c, H, lam, beta)
            if h_c <= h0 + _ARMIJO_C * theta * slope:
                accepted = True
                break
            theta *= _ARMIJO_SHRINK

        if not accepted:
            res.h_trace.append((h0, h0))
            res.steps.append(0.0)
            res.deltas.append(0.0)
            res.converged = True
            break

        delta = float(np.max(np.abs(cand - alpha)))
        alpha, P = cand, P_c
        res.alpha, res.P = alpha, P
        res.h_trace.append((h0, h_c))
        res.steps.append(theta)
        res.deltas.append(delta)
        res.alpha_trace.append(alpha.copy())
        if delta <= tol:
            res.converged = True
            break

    return res
