import logging
from typing import Dict, List, Sequence, Tuple

import numpy as np
from cvxopt import solvers
from cvxopt.base import matrix, spmatrix

from interfaces.invariant_report import ThetaResult
from tools.linalg import real_embedding
from utils.errors import ConvergenceFailure

SDP_OPTIONS = {
    "show_progress": False,
    "abstol": 1e-9,
    "reltol": 1e-9,
    "feastol": 1e-9,
    "maxiters": 200,
}
ACCEPTABLE_GAP = 1e-6


def _check_status(sol: Dict, what: str) -> float:
    def residual(key: str) -> float:
        value = sol.get(key)
        return float("inf") if value is None else abs(float(value))

    gap = residual("gap")
    residuals = {
        "gap": gap,
        "primal infeasibility": residual("primal infeasibility"),
        "dual infeasibility": residual("dual infeasibility"),
    }
    if sol["status"] == "optimal":
        return gap
    # cvxopt stops with "unknown" when it can no longer make progress; accept if already tight
    if (
        sol["status"] == "unknown"
        and sol.get("x") is not None
        and residuals["gap"] < ACCEPTABLE_GAP
        and residuals["primal infeasibility"] < ACCEPTABLE_GAP
        and residuals["dual infeasibility"] < ACCEPTABLE_GAP
    ):
        logging.warning(f"{what}: SDP stopped with status 'unknown' but residuals are small: {residuals}")
        return gap
    raise ConvergenceFailure(f"{what}: SDP solver ended with status {sol['status']!r}", residuals)


def lovasz_theta_sdp(n: int, edges: Sequence[Tuple[int, int]]) -> ThetaResult:
    """
    Lovasz number by the dual SDP

        minimize t  subject to  t I + sum_{ij in E} y_ij E_ij - J >= 0,

    where E_ij has ones at (i, j) and (j, i).
    """
    if n == 0:
        return ThetaResult(value=0.0, tolerance=0.0, gap=0.0)
    if n == 1:
        return ThetaResult(value=1.0, tolerance=0.0, gap=0.0)
    edges = list(edges)
    if not edges:
        return ThetaResult(value=float(n), tolerance=0.0, gap=0.0)

    m = len(edges)
    c = matrix([0.0] * m + [1.0])
    G = spmatrix(0.0, [], [], (n * n, m + 1))
    for e, (i, j) in enumerate(edges):
        G[i * n + j, e] = -1.0
        G[j * n + i, e] = -1.0
    for i in range(n):
        G[i * n + i, m] = -1.0
    h = -matrix(1.0, (n, n))

    sol = solvers.sdp(c=c, Gs=[G], hs=[h], options=SDP_OPTIONS)
    gap = _check_status(sol, "lovasz_theta")
    primal = float(sol["primal objective"])
    dual = float(sol["dual objective"])
    theta = float(sol["x"][m])
    tolerance = max(abs(primal - dual), 1e-7 * max(1.0, abs(theta)))
    return ThetaResult(value=theta, tolerance=tolerance, gap=gap)


def max_min_eigenvalue(
    projectors: Sequence[np.ndarray],
    independent_sets: Sequence[Sequence[int]],
) -> Tuple[np.ndarray, float, float, float]:
    """
    Weights maximizing the smallest eigenvalue of sum_i w_i P_i over

        w >= 0,  sum_{i in I} w_i <= 1 for every listed independent set I.

    Returns (w, lambda, upper bound, gap). Complex operators go through the real embedding,
    which doubles every eigenvalue's multiplicity and keeps the minimum.
    """
    n = len(projectors)
    d = projectors[0].shape[0]
    real = all(np.abs(p.imag).max(initial=0.0) < 1e-14 for p in projectors)
    blocks = [p.real if real else real_embedding(p) for p in projectors]
    size = d if real else 2 * d

    # variables x = (w_1, .., w_n, lambda); minimize -lambda
    c = matrix([0.0] * n + [-1.0])

    rows = n + len(independent_sets)
    Gl = spmatrix(0.0, [], [], (rows, n + 1))
    hl = matrix(0.0, (rows, 1))
    for i in range(n):
        Gl[i, i] = -1.0
    for r, members in enumerate(independent_sets):
        for i in members:
            Gl[n + r, i] = 1.0
        hl[n + r] = 1.0

    # s = sum_i w_i P_i - lambda I must be PSD: Gs x + s = hs with hs = 0
    Gs = matrix(0.0, (size * size, n + 1))
    for i, block in enumerate(blocks):
        Gs[:, i] = matrix(-block.reshape(-1, order="F"))
    Gs[:, n] = matrix(np.eye(size).reshape(-1, order="F"))
    hs = matrix(0.0, (size, size))

    sol = solvers.sdp(c=c, Gl=Gl, hl=hl, Gs=[Gs], hs=[hs], options=SDP_OPTIONS)
    gap = _check_status(sol, "max_min_eigenvalue")
    x = np.asarray(sol["x"]).ravel()
    w = np.clip(x[:n], 0.0, None)
    lam = float(x[n])
    upper = -float(sol["dual objective"])
    logging.debug(f"Weight SDP: {len(independent_sets)} set constraints, lambda = {lam:.12f}, bound = {upper:.12f}")
    return w, lam, upper, gap


def independent_set_rows(independent_sets: Sequence[Sequence[int]]) -> List[List[int]]:
    """Deduplicated, sorted constraint rows."""
    return [list(s) for s in sorted({tuple(sorted(s)) for s in independent_sets})]
