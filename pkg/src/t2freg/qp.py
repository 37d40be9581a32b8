"""Dense quadratic programs with linear inequality constraints.

Minimize ``0.5 x'Hx + g'x + c`` subject to ``Ax <= b``. The Hessian may be
indefinite (the regression objective mixes minimized and maximized quadratic
terms), so the solver has two regimes:

* strictly convex: a primal active-set method run to the global optimum;
* semidefinite or indefinite: spectral projected gradient descent from a
  deterministic, seeded family of starting points (a max-margin interior
  point, constraint-vertex candidates, and projected Gaussian samples), with
  an artificial box injected so every solve terminates. The best stationary
  point wins; ties go to the lowest start index.

Every returned point carries a KKT residual measured independently of the
solve path: the gradient is projected onto the cone of active constraint
normals via nonnegative least squares, and the leftover norm is reported.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import linprog, nnls

OPTIMAL_CONVEX = "optimal_convex"
LOCAL_STATIONARY = "local_stationary"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

# Vertex-candidate starts enumerate random square row subsets; above this
# dimension the subsets are too sparse a sample to be worth the solves.
_VERTEX_START_DIM_LIMIT = 12
_GRID_DIM_LIMIT = 5


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class QpProblem:
    """Immutable dense QP data; the Hessian is symmetrized on construction."""

    hessian: np.ndarray
    gradient_vec: np.ndarray
    constant: float
    constraint_matrix: np.ndarray
    constraint_rhs: np.ndarray

    def __post_init__(self) -> None:
        h = np.asarray(self.hessian, dtype=float)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise ValueError(f"hessian must be square, got shape {h.shape}")
        n = h.shape[0]
        g = np.asarray(self.gradient_vec, dtype=float)
        if g.shape != (n,):
            raise ValueError(f"gradient shape {g.shape} does not match dim {n}")
        a = np.asarray(self.constraint_matrix, dtype=float)
        if a.size == 0:
            a = a.reshape(0, n)
        if a.ndim != 2 or a.shape[1] != n:
            raise ValueError(f"constraint matrix shape {a.shape} does not match dim {n}")
        b = np.asarray(self.constraint_rhs, dtype=float)
        if b.shape != (a.shape[0],):
            raise ValueError(
                f"constraint rhs shape {b.shape} does not match {a.shape[0]} rows"
            )
        object.__setattr__(self, "hessian", _readonly((h + h.T) / 2.0))
        object.__setattr__(self, "gradient_vec", _readonly(g))
        object.__setattr__(self, "constant", float(self.constant))
        object.__setattr__(self, "constraint_matrix", _readonly(a))
        object.__setattr__(self, "constraint_rhs", _readonly(b))

    @property
    def dim(self) -> int:
        return self.hessian.shape[0]

    @property
    def n_constraints(self) -> int:
        return self.constraint_matrix.shape[0]

    def objective(self, x: np.ndarray) -> float:
        x = np.asarray(x, dtype=float)
        return float(0.5 * x @ self.hessian @ x + self.gradient_vec @ x + self.constant)

    def violations(self, x: np.ndarray) -> np.ndarray:
        """Per-row constraint violation ``max(Ax - b, 0)``."""
        if self.n_constraints == 0:
            return np.zeros(0)
        return np.maximum(self.constraint_matrix @ x - self.constraint_rhs, 0.0)


@dataclass(frozen=True)
class SolverConfig:
    feasibility_tol: float = 1e-8
    stationarity_tol: float = 1e-6
    max_iterations: int = 10_000
    n_starts: int = 16
    seed: int = 0
    box_bound: float = 1e9


@dataclass(frozen=True)
class QpSolution:
    point: np.ndarray
    objective_value: float
    kkt_residual: float
    status: str
    active_set: tuple[int, ...] = ()
    multipliers: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "point", _readonly(np.asarray(self.point, dtype=float)))


def classify(p: QpProblem) -> str:
    """``"convex"`` when the smallest Hessian eigenvalue clears
    ``-1e-10 * spectral_scale``, else ``"indefinite"``."""
    eigs = np.linalg.eigvalsh(p.hessian)
    scale = float(np.max(np.abs(eigs))) if eigs.size else 0.0
    return "convex" if float(eigs.min(initial=0.0)) >= -1e-10 * scale else "indefinite"


def _row_norms(a: np.ndarray) -> np.ndarray:
    return np.sqrt(np.einsum("ij,ij->i", a, a)) if a.size else np.zeros(a.shape[0])


def _phase1(a: np.ndarray, b: np.ndarray, box: float, feas_tol: float):
    """Max-margin interior point, then the smallest-1-norm point keeping half
    that margin. Returns ``(x0, margin)``; ``margin < -feas_tol`` means the
    constraints are inconsistent (within the search box)."""
    m, n = a.shape
    if m == 0:
        return np.zeros(n), np.inf
    norms = _row_norms(a)
    degenerate = norms <= 0.0
    if np.any(degenerate):
        if np.any(b[degenerate] < -feas_tol):
            return np.zeros(n), -np.inf
        a, b, norms = a[~degenerate], b[~degenerate], norms[~degenerate]
        if a.shape[0] == 0:
            return np.zeros(n), np.inf
    search_box = min(box, 1e6)
    cost = np.zeros(n + 1)
    cost[-1] = -1.0
    a_ub = np.hstack([a, norms[:, None]])
    bounds = [(-search_box, search_box)] * n + [(None, 1e3)]
    res = linprog(cost, A_ub=a_ub, b_ub=b, bounds=bounds, method="highs")
    if not res.success:
        return np.zeros(n), -np.inf
    x0, margin = res.x[:n], float(res.x[n])
    if margin >= -feas_tol:
        # Re-center: smallest 1-norm point keeping half the achievable margin
        # (zero for pinched sets), so starts stay near the origin instead of
        # a degenerate vertex of the margin LP.
        delta = 0.5 * min(max(margin, 0.0), 1.0)
        cost2 = np.ones(2 * n)
        a2 = np.hstack([a, -a])
        bounds2 = [(0.0, search_box)] * (2 * n)
        res2 = linprog(cost2, A_ub=a2, b_ub=b - delta * norms, bounds=bounds2, method="highs")
        if res2.success:
            x0 = res2.x[:n] - res2.x[n:]
    return x0, margin


def _independent_rows(a_w: np.ndarray) -> list[int]:
    """Indices (into ``a_w``) of a maximal independent row subset.

    Gram-Schmidt in row order, so earlier rows win over later dependent
    ones (consistent with lowest-index tie-breaking elsewhere).
    """
    kept: list[int] = []
    basis = np.empty((0, a_w.shape[1]))
    for idx in range(a_w.shape[0]):
        v = np.array(a_w[idx], dtype=float)
        norm0 = float(np.linalg.norm(v))
        if norm0 <= 1e-13:
            continue
        if basis.shape[0]:
            v = v - basis.T @ (basis @ v)
            v = v - basis.T @ (basis @ v)  # re-orthogonalize for stability
        nv = float(np.linalg.norm(v))
        if nv > 1e-10 * norm0:
            basis = np.vstack([basis, v / nv])
            kept.append(idx)
    return kept


def _face_step(
    hess: np.ndarray, grad: np.ndarray, null_basis: np.ndarray
) -> tuple[np.ndarray, bool]:
    """Step within the affine face spanned by ``null_basis``.

    Returns ``(p, ray)``. On a face where the reduced Hessian is positive
    semidefinite, ``p`` is the full step to the face minimizer (``ray`` is
    False), with a linear descent ray when the gradient has a component the
    quadratic cannot explain. Otherwise ``p`` is a negative-curvature descent
    ray.
    """
    reduced_h = null_basis.T @ hess @ null_basis
    reduced_g = null_basis.T @ grad
    eigvals, eigvecs = np.linalg.eigh(reduced_h)
    scale = max(1.0, float(np.abs(eigvals).max(initial=0.0)))
    if float(eigvals.min(initial=0.0)) >= -1e-10 * scale:
        v, *_ = np.linalg.lstsq(reduced_h, -reduced_g, rcond=None)
        unexplained = reduced_g + reduced_h @ v
        if float(np.linalg.norm(unexplained)) > 1e-9 * (1.0 + float(np.linalg.norm(reduced_g))):
            return -(null_basis @ unexplained), True
        return null_basis @ v, False
    direction = eigvecs[:, 0]
    if float(reduced_g @ direction) > 0.0:
        direction = -direction
    return null_basis @ direction, True


def _active_set_min(
    hess: np.ndarray,
    grad_vec: np.ndarray,
    a: np.ndarray,
    b: np.ndarray,
    x_start: np.ndarray,
    max_iter: int,
    identity_hess: bool = False,
) -> tuple[np.ndarray, bool]:
    """Primal active-set minimization of a quadratic from a feasible start.

    Handles indefinite Hessians: each iteration takes the exact minimizer of
    the quadratic on the current active face when that restriction is convex,
    and otherwise walks a negative-curvature (or flat linear) descent ray to
    the nearest blocking row. Descent is monotone and the iterate stays
    feasible throughout; ``(x, converged)`` is returned, with ``converged``
    True only at a point whose active multipliers pass the nonnegative cone
    test. An unbounded ray with no blocking row returns ``converged = False``
    (callers box the feasible set when that matters).

    ``identity_hess`` short-circuits the face analysis for projections, where
    the reduced Hessian is always the identity.
    """
    import scipy.linalg

    n = hess.shape[0]
    m = a.shape[0]
    x = np.array(x_start, dtype=float)
    scale_b = 1.0 + np.abs(b) if m else np.zeros(0)
    row_norms = _row_norms(a)
    identity = np.eye(n)

    def residuals(pt: np.ndarray) -> np.ndarray:
        return b - a @ pt if m else np.zeros(0)

    res = residuals(x)
    work = [int(i) for i in np.flatnonzero(res <= 1e-9 * scale_b)]
    if len(work) > 1:
        work = [work[i] for i in _independent_rows(a[work])]

    for _ in range(max_iter):
        grad = (x + grad_vec) if identity_hess else (hess @ x + grad_vec)
        if identity_hess:
            # steepest descent projected onto the face null space
            if work:
                a_w = a[work]
                lam_eq, *_ = np.linalg.lstsq(a_w @ a_w.T, -(a_w @ grad), rcond=None)
                p = -grad - a_w.T @ lam_eq
            else:
                p = -grad
            ray = False
        else:
            if work:
                null_basis = scipy.linalg.null_space(a[work])
            else:
                null_basis = identity
            if null_basis.shape[1]:
                p, ray = _face_step(hess, grad, null_basis)
            else:
                p, ray = np.zeros(n), False

        step_scale = 1.0 + float(np.linalg.norm(x)) + float(np.linalg.norm(grad))
        if not ray and float(np.linalg.norm(p)) <= 1e-12 * step_scale:
            # stationary on this face: examine the multipliers
            if not work:
                return x, True
            lam, *_ = np.linalg.lstsq(a[work].T, -grad, rcond=None)
            lam_scale = 1.0 + float(np.max(np.abs(lam), initial=0.0))
            if float(lam.min(initial=0.0)) >= -1e-9 * lam_scale:
                return x, True
            # Degenerate working sets give sign noise in the equality
            # multipliers; certify with the nonnegative cone test before
            # concluding a drop is needed.
            _, rnorm = nnls(a[work].T, -grad)
            if rnorm <= 1e-9 * (1.0 + float(np.linalg.norm(grad))):
                return x, True
            work.pop(int(np.argmin(lam)))
            continue

        php = float(p @ p) if identity_hess else float(p @ (hess @ p))
        gp = float(grad @ p)
        if ray:
            step = np.inf if php <= 0.0 else max(0.0, -gp / php)
        else:
            step = 1.0
        blocking = -1
        if m:
            ap = a @ p
            res = residuals(x)
            # Rows whose normal is (numerically) orthogonal to the step must
            # not block: cancellation dust in ap would otherwise pin the
            # iteration at active dependent rows with step zero. The threshold
            # sits above the Gram-Schmidt dependence tolerance so that any row
            # the working-set trim would reject also never blocks. Rows
            # already violated beyond rounding must block regardless, so the
            # equality solve pulls the iterate back onto them.
            block_tol = 1e-9 * (1.0 + row_norms * float(np.linalg.norm(p)))
            violated = res < -1e-11 * scale_b
            candidate = (ap > block_tol) | (violated & (ap > 0.0))
            if work:
                candidate[work] = False
            if candidate.any():
                safe_ap = np.where(candidate, ap, 1.0)
                ratios = np.where(candidate, np.maximum(res, 0.0) / safe_ap, np.inf)
                nearest = float(ratios.min())
                if nearest < step - 1e-15:
                    step = nearest
                    blocking = int(np.flatnonzero(ratios <= nearest + 1e-15)[0])
            if np.isfinite(step) and step > 0.0:
                # second pass: dust-skipped rows still block when the chosen
                # step is long enough to turn their dust into a violation
                skipped = (~candidate) & (ap > 0.0)
                if work:
                    skipped[work] = False
                relevant = skipped & (ap * step > 1e-11 * scale_b)
                if relevant.any():
                    safe_ap = np.where(relevant, ap, 1.0)
                    ratios = np.where(relevant, np.maximum(res, 0.0) / safe_ap, np.inf)
                    nearest = float(ratios.min())
                    if nearest < step - 1e-15:
                        step = nearest
                        blocking = int(np.flatnonzero(ratios <= nearest + 1e-15)[0])
        if not np.isfinite(step):
            return x, False  # genuine unbounded descent ray
        x = x + step * p
        if work:
            # long steps let null-space rounding drift the working rows off
            # their bounds; re-pin them with a minimal-norm correction (only
            # when it actually helps: near-dependent rows can make the
            # correction ill-posed)
            a_w = a[work]
            res_w = b[work] - a_w @ x
            drift = float(np.max(np.abs(res_w)))
            if drift > 1e-13 * float(np.max(scale_b[work])):
                delta, *_ = np.linalg.lstsq(a_w, res_w, rcond=1e-10)
                trial = x + delta
                if (
                    float(np.linalg.norm(delta)) <= 1e-3 * (1.0 + float(np.linalg.norm(x)))
                    and float(np.max(np.abs(b[work] - a_w @ trial))) <= 0.5 * drift
                ):
                    x = trial
        if blocking >= 0:
            # new row first: if it is dependent on the current set, exchange
            # an old row for it rather than discarding it
            work = [blocking] + work
            work = [work[i] for i in _independent_rows(a[work])]
    return x, False


def _ldp_projection(y: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Euclidean projection of ``y`` onto ``{x : Ax <= b}`` as a least
    distance program: with ``z = x - y`` the problem is ``min ||z||`` s.t.
    ``(-A) z >= Ay - b``, settled by one Lawson-Hanson nonnegative least
    squares solve with guaranteed finite termination."""
    y = np.asarray(y, dtype=float)
    m, n = a.shape
    slack = a @ y - b
    stacked = np.vstack([(-a).T, slack[None, :]])
    # each column is one constraint; rescaling a constraint is free, and unit
    # columns keep the least squares well conditioned even for distant y
    norms = np.sqrt(np.einsum("ij,ij->j", stacked, stacked))
    keep = norms > 0.0
    if not keep.all():
        if float(slack[~keep].max(initial=-np.inf)) > 0.0:
            raise ValueError("projection target set is empty")
        stacked, norms = stacked[:, keep], norms[keep]
    target = np.zeros(n + 1)
    target[n] = 1.0
    u, rnorm = nnls(stacked / norms, target)
    if rnorm == 0.0 or not np.isfinite(rnorm):
        raise ValueError("projection target set is empty")
    residual = (stacked / norms) @ u - target
    if not residual[n] < 0.0:
        raise ValueError("projection failed to separate the target set")
    return y - residual[:n] / residual[n]


def _project(
    y: np.ndarray,
    a: np.ndarray,
    b: np.ndarray,
    x_feasible: Optional[np.ndarray] = None,
    max_iter: int = 150,
) -> np.ndarray:
    """Euclidean projection of ``y`` onto ``{x : Ax <= b}``.

    With a feasible warm start the active-set path is tried first (cheap when
    the active face barely changes, as inside the projected-gradient loop);
    the least-distance program is the fallback and the sole path otherwise.
    """
    y = np.asarray(y, dtype=float)
    if a.shape[0] == 0:
        return y.copy()
    slack = a @ y - b
    if float(slack.max(initial=-np.inf)) <= 0.0:
        return y.copy()
    if x_feasible is not None:
        x, converged = _active_set_min(
            np.eye(a.shape[1]), -y, a, b, x_feasible, max_iter, identity_hess=True
        )
        if converged:
            return x
        try:
            z = _ldp_projection(y, a, b)
        except ValueError:
            return x  # feasible best effort
        # the least-distance route loses accuracy for distant y; keep
        # whichever candidate is feasible, nearer on ties
        viol_z = float(np.max(a @ z - b, initial=0.0))
        viol_x = float(np.max(a @ x - b, initial=0.0))
        if viol_z > max(1e-9, 10.0 * viol_x):
            return x
        return z
    return _ldp_projection(y, a, b)


def _spg(
    hess: np.ndarray,
    grad_vec: np.ndarray,
    a: np.ndarray,
    b: np.ndarray,
    x0: np.ndarray,
    lipschitz: float,
    max_iter: int,
    step_tol: float,
) -> np.ndarray:
    """Spectral projected gradient descent for a (possibly indefinite)
    quadratic over a polyhedron, from a feasible start.

    The line search along the projected-gradient segment is exact (the
    objective is quadratic), so descent is monotone; Barzilai-Borwein spacing
    drives the step length. Stationarity is measured by the prox residual at
    the reference step ``1/L``: the cheap per-iteration ratio test only bounds
    it when the current step is no longer than ``1/L``, so larger steps
    require an explicit confirmation projection.
    """
    # The step cap is deliberately modest: the projection loses accuracy for
    # very distant trial points, and escape to infinity is the polish phase's
    # job (its descent rays run straight to the termination box).
    inv_l = 1.0 / lipschitz
    lo, hi = 1e-8 * inv_l, 1e4 * inv_l
    alpha = inv_l
    x = np.array(x0, dtype=float)
    grad = hess @ x + grad_vec

    def confirmed_stationary() -> bool:
        z_ref = _project(x - inv_l * grad, a, b, x)
        return float(np.linalg.norm(z_ref - x)) * lipschitz <= step_tol

    for _ in range(max_iter):
        z = _project(x - alpha * grad, a, b, x)
        d = z - x
        dnorm = float(np.linalg.norm(d))
        if dnorm <= 1e-15 * (1.0 + float(np.linalg.norm(x))) or dnorm / alpha <= step_tol:
            if alpha <= inv_l or confirmed_stationary():
                break
            alpha = inv_l
            continue
        hd = hess @ d
        dhd = float(d @ hd)
        gd = float(grad @ d)
        if gd > 0.0:
            # inexact projection produced a non-descent direction; retry with
            # a shorter gradient step
            alpha = max(0.1 * alpha, lo)
            continue
        t = 1.0 if dhd <= 0.0 else min(1.0, -gd / dhd)
        x = x + t * d
        grad = grad + t * hd
        alpha = hi if dhd <= 0.0 else min(hi, max(lo, dnorm * dnorm / dhd))
    return x


def _kkt_residual(
    p: QpProblem, x: np.ndarray
) -> tuple[float, tuple[int, ...], tuple[float, ...]]:
    """Stationarity residual: the gradient is fit by a nonnegative combination
    of active constraint normals; the unexplained norm is returned together
    with the active set and its multipliers."""
    grad = p.hessian @ x + p.gradient_vec
    a, b = p.constraint_matrix, p.constraint_rhs
    if a.shape[0] == 0:
        return float(np.linalg.norm(grad)), (), ()
    slack = b - a @ x
    thresh = 1e-6 * (1.0 + np.abs(b) + _row_norms(a) * float(np.linalg.norm(x)))
    active = np.flatnonzero(slack <= thresh)
    if active.size == 0:
        return float(np.linalg.norm(grad)), (), ()
    lam, rnorm = nnls(a[active].T, -grad)
    return float(rnorm), tuple(int(i) for i in active), tuple(float(v) for v in lam)


def _vertex_candidates(
    a: np.ndarray, b: np.ndarray, rng: np.random.Generator, count: int, feas_tol: float
) -> list[np.ndarray]:
    """Feasible vertices found by solving random square row subsets."""
    m, n = a.shape
    if n > _VERTEX_START_DIM_LIMIT or m < n or count <= 0:
        return []
    found: list[np.ndarray] = []
    seen: set[tuple] = set()
    for _ in range(4 * count):
        rows = rng.choice(m, size=n, replace=False)
        sub = a[rows]
        if abs(float(np.linalg.det(sub))) < 1e-12:
            continue
        v = np.linalg.solve(sub, b[rows])
        if np.all(a @ v <= b + feas_tol):
            key = tuple(np.round(v, 9))
            if key not in seen:
                seen.add(key)
                found.append(v)
        if len(found) >= count:
            break
    return found


def solve(p: QpProblem, cfg: SolverConfig = SolverConfig()) -> QpSolution:
    """Solve the QP. Statuses:

    * ``optimal_convex``: convex problem solved to its global optimum;
    * ``local_stationary``: indefinite problem, best stationary point over
      the multi-start family (certified stationary, not globally optimal);
    * ``infeasible``: no point satisfies the constraints (the returned point
      maximizes the margin);
    * ``unbounded``: descent escaped to the artificial box.

    Identical problem, config, and seed give a bit-identical solution.
    """
    a, b = p.constraint_matrix, p.constraint_rhs
    x0, margin = _phase1(a, b, cfg.box_bound, cfg.feasibility_tol)
    if margin < -cfg.feasibility_tol:
        return QpSolution(x0, p.objective(x0), np.inf, INFEASIBLE)
    x0 = _project(x0, a, b, x0) if margin >= 0 else x0

    eigs = np.linalg.eigvalsh(p.hessian)
    scale = float(np.max(np.abs(eigs))) if eigs.size else 0.0
    strictly_convex = scale > 0.0 and float(eigs.min()) > 1e-10 * scale
    convex = float(eigs.min(initial=0.0)) >= -1e-10 * scale
    lipschitz = max(scale, 1.0)

    if strictly_convex:
        x, converged = _active_set_min(
            p.hessian, p.gradient_vec, a, b, x0, 3 * (p.n_constraints + p.dim) + 20
        )
        if converged:
            kkt, active, lam = _kkt_residual(p, x)
            return QpSolution(x, p.objective(x), kkt, OPTIMAL_CONVEX, active, lam)
        # fall through to the projected-gradient path from the same start

    # Inject the termination box; a solution that lands on it is a
    # certificate that the true problem escapes to infinity.
    box_rows = np.vstack([np.eye(p.dim), -np.eye(p.dim)])
    a_box = np.vstack([a, box_rows]) if a.size else box_rows
    b_box = np.concatenate([b, np.full(2 * p.dim, cfg.box_bound)])

    rng = np.random.default_rng(cfg.seed)
    starts: list[np.ndarray] = [x0]
    starts.extend(
        _vertex_candidates(a_box, b_box, rng, max(0, cfg.n_starts // 2 - 1), cfg.feasibility_tol)
    )
    spread = 1.0 + float(np.linalg.norm(x0))
    while len(starts) < cfg.n_starts:
        sample = x0 + spread * rng.standard_normal(p.dim)
        starts.append(_project(sample, a_box, b_box, x0))

    # The gradient phase runs coarse (it only needs to land in the right
    # basin and near the right face); the active-set polish then finishes to
    # face-exact stationarity in a handful of linear solves.
    tight_tol = 0.02 * cfg.stationarity_tol * (1.0 + float(np.linalg.norm(p.gradient_vec)))
    coarse_tol = max(tight_tol, 1e-4 * (1.0 + float(np.linalg.norm(p.gradient_vec))))
    polish_iters = 3 * (a_box.shape[0] + p.dim) + 20
    best_x: Optional[np.ndarray] = None
    best_f = np.inf
    for start in starts:
        x = _spg(p.hessian, p.gradient_vec, a_box, b_box, start, lipschitz, cfg.max_iterations, coarse_tol)
        x, _ = _active_set_min(p.hessian, p.gradient_vec, a_box, b_box, x, polish_iters)
        f = p.objective(x)
        # strict improvement only, so ties resolve to the lowest start index
        if best_x is None or f < best_f - 1e-15 * (1.0 + abs(best_f)):
            best_f, best_x = f, x
    assert best_x is not None

    kkt, active, lam = _kkt_residual(p, best_x)
    grad_scale = 1.0 + float(np.linalg.norm(p.hessian @ best_x + p.gradient_vec))
    if kkt > 0.5 * cfg.stationarity_tol * grad_scale:
        best_x = _spg(
            p.hessian, p.gradient_vec, a_box, b_box, best_x, lipschitz,
            cfg.max_iterations, tight_tol,
        )
        best_x, _ = _active_set_min(p.hessian, p.gradient_vec, a_box, b_box, best_x, polish_iters)
        best_f = p.objective(best_x)
        kkt, active, lam = _kkt_residual(p, best_x)

    if float(np.max(np.abs(best_x), initial=0.0)) >= cfg.box_bound * (1.0 - 1e-6):
        return QpSolution(best_x, best_f, kkt, UNBOUNDED)
    status = OPTIMAL_CONVEX if convex else LOCAL_STATIONARY
    return QpSolution(best_x, best_f, kkt, status, active, lam)


def brute_force_oracle(
    p: QpProblem, box: Sequence[tuple[float, float]], resolution: int
) -> tuple[np.ndarray, float]:
    """Exhaustive grid minimization over the feasible box points.

    A verification oracle for tiny problems: the grid is the definition of
    the answer, not an approximation of the solver. Dimensions above
    5 are rejected (grid growth), as is a grid with no feasible point.
    """
    if p.dim > _GRID_DIM_LIMIT:
        raise ValueError(f"grid oracle supports dim <= {_GRID_DIM_LIMIT}, got {p.dim}")
    if len(box) != p.dim:
        raise ValueError(f"box has {len(box)} ranges for dim {p.dim}")
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    axes = [np.linspace(lo, hi, resolution) for lo, hi in box]
    best_val = np.inf
    best_pt: Optional[np.ndarray] = None
    # Chunk along the first axis to bound memory on 5-D grids.
    rest = axes[1:]
    if rest:
        grids = np.meshgrid(*rest, indexing="ij")
        tail = np.stack([g.ravel() for g in grids], axis=1)
    else:
        tail = np.zeros((1, 0))
    for v0 in axes[0]:
        pts = np.hstack([np.full((tail.shape[0], 1), v0), tail])
        if p.n_constraints:
            feasible = np.all(
                pts @ p.constraint_matrix.T <= p.constraint_rhs + 1e-9, axis=1
            )
            if not feasible.any():
                continue
            pts = pts[feasible]
        vals = (
            0.5 * np.einsum("ni,ij,nj->n", pts, p.hessian, pts)
            + pts @ p.gradient_vec
            + p.constant
        )
        k = int(np.argmin(vals))
        if vals[k] < best_val:
            best_val = float(vals[k])
            best_pt = pts[k]
    if best_pt is None:
        raise ValueError("no feasible grid point in the given box")
    return best_pt, best_val
