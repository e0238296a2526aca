"""Linear programming: presolve and a homogeneous self-dual interior point.

Problems have the form::

    min c.x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  lo <= x <= hi

with infinite bounds allowed.
"""

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve, lstsq, qr

from ..common import StructuralError

# step-length damping toward the boundary of the positive orthant
ALPHA0 = 0.99995
# presolve feasibility slack for 0 = b rows and bound comparisons
PRESOLVE_TOL = 1e-9


def _matrix(a, rows, n):
    if a is None:
        return np.zeros((rows, n))
    a = np.array(a, dtype=np.float64)
    if a.size == 0:
        return np.zeros((rows, n))
    if a.ndim != 2 or a.shape[1] != n:
        raise StructuralError(f"constraint matrix must have {n} columns, got shape {a.shape}")
    return a


def _vector(v):
    if v is None:
        return np.zeros(0)
    return np.array(v, dtype=np.float64).reshape(-1)


@dataclass(frozen=True, eq=False)
class LpProblem:
    c: np.ndarray
    A_ub: np.ndarray
    b_ub: np.ndarray
    A_eq: np.ndarray
    b_eq: np.ndarray
    bounds: np.ndarray  # (n, 2) lower/upper, +-inf allowed

    @classmethod
    def create(cls, c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, bounds=None):
        """Validating constructor; ``bounds`` defaults to ``(0, inf)`` for every
        variable, and a single ``(lo, hi)`` pair applies to all of them.
        ``None`` inside a pair means unbounded on that side."""
        c = _vector(c)
        n = c.size
        b_ub, b_eq = _vector(b_ub), _vector(b_eq)
        A_ub = _matrix(A_ub, b_ub.size, n)
        A_eq = _matrix(A_eq, b_eq.size, n)
        if A_ub.shape[0] != b_ub.size or A_eq.shape[0] != b_eq.size:
            raise StructuralError("row counts of A and b disagree")
        if bounds is None:
            bounds = [(0.0, None)] * n
        elif len(bounds) == 2 and (bounds[0] is None or np.ndim(bounds[0]) == 0):
            bounds = [tuple(bounds)] * n
        if len(bounds) != n:
            raise StructuralError(f"need {n} bound pairs, got {len(bounds)}")
        bd = np.array([[-np.inf if lo is None else lo, np.inf if hi is None else hi]
                       for lo, hi in bounds], dtype=np.float64).reshape(n, 2)
        for arr in (c, A_ub, b_ub, A_eq, b_eq):
            if not np.all(np.isfinite(arr)):
                raise StructuralError("problem data must be finite")
        if np.any(np.isnan(bd)) or np.any(bd[:, 0] == np.inf) or np.any(bd[:, 1] == -np.inf):
            raise StructuralError("invalid bounds")
        if np.any(bd[:, 0] > bd[:, 1]):
            raise StructuralError("lower bound exceeds upper bound")
        return cls(c, A_ub, b_ub, A_eq, b_eq, bd)

    @property
    def n(self):
        return self.c.size

    @property
    def lower(self):
        return self.bounds[:, 0]

    @property
    def upper(self):
        return self.bounds[:, 1]

    def objective(self, x):
        return float(self.c @ x)

    def primal_residual(self, x):
        """``max`` violation of rows and bounds, scaled by ``1 + ‖b‖∞``."""
        viol = [0.0]
        if self.b_eq.size:
            viol.append(np.abs(self.A_eq @ x - self.b_eq).max())
        if self.b_ub.size:
            viol.append(np.maximum(self.A_ub @ x - self.b_ub, 0).max())
        viol.append(np.maximum(self.lower - x, 0).max(initial=0.0))
        viol.append(np.maximum(x - self.upper, 0).max(initial=0.0))
        bnorm = max(np.abs(self.b_eq).max(initial=0.0), np.abs(self.b_ub).max(initial=0.0))
        return float(max(viol) / (1.0 + bnorm))

    def to_dict(self):
        def num(v):
            return None if not np.isfinite(v) else float(v)
        return {
            "c": self.c.tolist(),
            "A_ub": self.A_ub.tolist(), "b_ub": self.b_ub.tolist(),
            "A_eq": self.A_eq.tolist(), "b_eq": self.b_eq.tolist(),
            "bounds": [[num(lo), num(hi)] for lo, hi in self.bounds],
        }

    @classmethod
    def from_dict(cls, d):
        unknown = set(d) - {"c", "A_ub", "b_ub", "A_eq", "b_eq", "bounds"}
        if unknown:
            raise StructuralError(f"unknown LP fields: {sorted(unknown)}")
        if "c" not in d:
            raise StructuralError("LP needs a cost vector 'c'")
        return cls.create(d["c"], d.get("A_ub"), d.get("b_ub"), d.get("A_eq"),
                          d.get("b_eq"), d.get("bounds"))


def load_problem(path):
    with open(path, encoding="utf-8") as fh:
        return LpProblem.from_dict(json.load(fh))


def dump_problem(problem, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(problem.to_dict(), fh, indent=2)


@dataclass
class Certificate:
    """Proof of infeasibility or unboundedness for the original problem.

    Infeasibility (Farkas): ``y_ub >= 0``, ``z_lo >= 0``, ``z_up >= 0`` with
    ``A_ub' y_ub + A_eq' y_eq - z_lo + z_up = 0`` and
    ``b_ub.y_ub + b_eq.y_eq - lo.z_lo + hi.z_up < 0`` (``z_lo``/``z_up`` are
    zero where the bound is infinite).  Unboundedness: a ray ``d`` with
    ``c.d < 0``, ``A_eq d = 0``, ``A_ub d <= 0``, ``d_j >= 0`` where ``lo_j``
    is finite and ``d_j <= 0`` where ``hi_j`` is finite; together with a
    feasible point this shows the objective is unbounded below.
    """

    kind: str
    y_ub: np.ndarray = None
    y_eq: np.ndarray = None
    z_lo: np.ndarray = None
    z_up: np.ndarray = None
    ray: np.ndarray = None

    def violation(self, p):
        """Largest violation of the certificate conditions, scaled to the data.

        Negative strictness margins count as violations; a return value of
        0 or less than a small tolerance means the certificate holds.
        """
        scale = 1.0 + max(np.abs(p.A_ub).max(initial=0), np.abs(p.A_eq).max(initial=0),
                          np.abs(p.c).max(initial=0))
        if self.kind == "infeasible":
            lo_f = np.isfinite(p.lower)
            up_f = np.isfinite(p.upper)
            stat = p.A_ub.T @ self.y_ub + p.A_eq.T @ self.y_eq - self.z_lo + self.z_up
            value = (p.b_ub @ self.y_ub + p.b_eq @ self.y_eq
                     - p.lower[lo_f] @ self.z_lo[lo_f] + p.upper[up_f] @ self.z_up[up_f])
            sign = min(self.y_ub.min(initial=0), self.z_lo.min(initial=0),
                       self.z_up.min(initial=0))
            stray = max(np.abs(self.z_lo[~lo_f]).max(initial=0),
                        np.abs(self.z_up[~up_f]).max(initial=0))
            size = max(np.abs(self.y_ub).max(initial=0), np.abs(self.y_eq).max(initial=0),
                       np.abs(self.z_lo).max(initial=0), np.abs(self.z_up).max(initial=0))
            return float(max(np.abs(stat).max(initial=0) / scale, -sign, stray,
                             value / max(size, 1e-300) if value >= 0 else -1.0))
        d = self.ray
        worst = [p.c @ d / max(np.abs(d).max(), 1e-300) if p.c @ d >= 0 else -1.0]
        if p.b_eq.size:
            worst.append(np.abs(p.A_eq @ d).max() / scale)
        if p.b_ub.size:
            worst.append(np.maximum(p.A_ub @ d, 0).max() / scale)
        worst.append(np.maximum(-d[np.isfinite(p.lower)], 0).max(initial=0))
        worst.append(np.maximum(d[np.isfinite(p.upper)], 0).max(initial=0))
        return float(max(worst))

    def verify(self, p, tol=1e-7):
        return self.violation(p) <= tol


@dataclass
class LpResult:
    """``residuals``: ``primal`` is :meth:`LpProblem.primal_residual` of ``x``;
    ``dual`` is ``‖c - A'y - z‖∞ / (1 + ‖c‖∞)`` and ``complementarity`` is
    ``|c.x - b.y| / (1 + |c.x|)``, both on the standard-form problem the
    interior point actually solved."""

    status: str
    x: np.ndarray = None
    objective: float = np.nan
    residuals: dict = field(default_factory=dict)
    certificate: Certificate = None
    iterations: int = 0
    message: str = ""

    @property
    def success(self):
        return self.status == "optimal"


# ---------------------------------------------------------------- presolve


@dataclass
class PresolveResult:
    problem: LpProblem = None
    transforms: list = field(default_factory=list)
    status: str = None  # None, "optimal", "infeasible" or "unbounded"
    message: str = ""
    offset: float = 0.0
    n_original: int = 0
    keep: np.ndarray = None
    values: np.ndarray = None

    def restore(self, x_reduced):
        """Full-length solution from a solution of the reduced problem."""
        x = self.values.copy()
        x[self.keep] = x_reduced
        return x


def lp_presolve(problem, tol=PRESOLVE_TOL):
    """Simplify ``problem``; pathologies become statuses, never exceptions.

    Reductions, repeated until nothing changes: empty rows (checked for
    consistency and dropped), singleton inequality rows (turned into bounds),
    singleton equality rows (fixing the variable), fixed variables
    (substituted out), empty columns (set to their best bound).  Finally
    linearly dependent equality rows are removed using QR with column
    pivoting.  ``transforms`` records each reduction in order.
    """
    p = problem
    c = p.c.copy()
    A_ub, b_ub = p.A_ub.copy(), p.b_ub.copy()
    A_eq, b_eq = p.A_eq.copy(), p.b_eq.copy()
    lo, hi = p.lower.copy(), p.upper.copy()
    n = c.size
    cols = np.arange(n)
    values = np.zeros(n)
    offset = 0.0
    steps = []
    status = None
    message = ""
    unbounded_col = None

    def done(st, msg):
        return PresolveResult(None, steps, st, msg, offset, n, None, values)

    changed = True
    while changed:
        changed = False
        if np.any(lo > hi + tol * (1 + np.abs(lo))):
            j = int(cols[np.argmax(lo - hi)])
            return done("infeasible", f"bounds of variable {j} contradict")
        # empty rows
        nz_ub = np.any(A_ub != 0, axis=1)
        if np.any(~nz_ub):
            if np.any(b_ub[~nz_ub] < -tol):
                return done("infeasible", "empty inequality row with negative right-hand side")
            steps.append(("drop_empty_ub_rows", int((~nz_ub).sum())))
            A_ub, b_ub = A_ub[nz_ub], b_ub[nz_ub]
            changed = True
        nz_eq = np.any(A_eq != 0, axis=1)
        if np.any(~nz_eq):
            if np.any(np.abs(b_eq[~nz_eq]) > tol):
                return done("infeasible", "empty equality row with nonzero right-hand side")
            steps.append(("drop_empty_eq_rows", int((~nz_eq).sum())))
            A_eq, b_eq = A_eq[nz_eq], b_eq[nz_eq]
            changed = True
        # singleton inequality rows become bounds
        single = np.count_nonzero(A_ub, axis=1) == 1
        if np.any(single):
            for i in np.flatnonzero(single):
                j = int(np.flatnonzero(A_ub[i])[0])
                a, b = A_ub[i, j], b_ub[i]
                if a > 0:
                    hi[j] = min(hi[j], b / a)
                else:
                    lo[j] = max(lo[j], b / a)
                steps.append(("row_to_bound", int(cols[j])))
            A_ub, b_ub = A_ub[~single], b_ub[~single]
            changed = True
            continue
        # singleton equality rows fix their variable
        single = np.count_nonzero(A_eq, axis=1) == 1
        if np.any(single):
            for i in np.flatnonzero(single):
                j = int(np.flatnonzero(A_eq[i])[0])
                v = b_eq[i] / A_eq[i, j]
                if v < lo[j] - tol * (1 + abs(v)) or v > hi[j] + tol * (1 + abs(v)):
                    return done("infeasible", f"equality forces variable {cols[j]} outside its bounds")
                if lo[j] == hi[j] and abs(lo[j] - v) > tol * (1 + abs(v)):
                    return done("infeasible", f"conflicting values for variable {cols[j]}")
                lo[j] = hi[j] = v
            A_eq, b_eq = A_eq[~single], b_eq[~single]
            changed = True
            continue
        # fixed variables
        fixed = lo == hi
        if np.any(fixed):
            v = lo[fixed]
            offset += float(c[fixed] @ v)
            b_ub = b_ub - A_ub[:, fixed] @ v
            b_eq = b_eq - A_eq[:, fixed] @ v
            values[cols[fixed]] = v
            for j, vj in zip(cols[fixed], v):
                steps.append(("fix", int(j), float(vj)))
            keep = ~fixed
            c, lo, hi, cols = c[keep], lo[keep], hi[keep], cols[keep]
            A_ub, A_eq = A_ub[:, keep], A_eq[:, keep]
            changed = True
            continue
        # empty columns go to the bound their cost prefers
        empty = ~(np.any(A_ub != 0, axis=0) | np.any(A_eq != 0, axis=0))
        if np.any(empty):
            for j in np.flatnonzero(empty):
                if c[j] > 0:
                    v = lo[j]
                elif c[j] < 0:
                    v = hi[j]
                else:
                    v = min(max(0.0, lo[j]), hi[j])
                if not np.isfinite(v):
                    # improving ray; park the variable and keep going so a
                    # later infeasibility still wins
                    unbounded_col = int(cols[j])
                    v = min(max(0.0, lo[j]), hi[j])
                lo[j] = hi[j] = v
            changed = True
            continue

    # linearly dependent equality rows
    if b_eq.size > 1:
        _, R, piv = qr(A_eq.T, mode="economic", pivoting=True)
        diag = np.abs(np.diag(R))
        rank = int(np.sum(diag > 1e-10 * max(1.0, diag.max(initial=0))))
        if rank < b_eq.size:
            keep_rows = np.sort(piv[:rank])
            drop = np.setdiff1d(np.arange(b_eq.size), keep_rows)
            coef = lstsq(A_eq[keep_rows].T, A_eq[drop].T)[0]
            if np.abs(coef.T @ b_eq[keep_rows] - b_eq[drop]).max() > 1e-8 * (1 + np.abs(b_eq).max()):
                return done("infeasible", "inconsistent linearly dependent equality rows")
            steps.append(("drop_dependent_eq_rows", drop.tolist()))
            A_eq, b_eq = A_eq[keep_rows], b_eq[keep_rows]

    if unbounded_col is not None:
        status, message = "unbounded", f"variable {unbounded_col} has an improving unbounded direction"
    elif cols.size == 0:
        status, message = "optimal", "presolve removed every variable"
    bounds = [(None if not np.isfinite(a) else a, None if not np.isfinite(b) else b)
              for a, b in zip(lo, hi)]
    reduced = LpProblem.create(c, A_ub, b_ub, A_eq, b_eq, bounds) if cols.size else None
    return PresolveResult(reduced, steps, status, message, offset, n, cols, values)


# ----------------------------------------------------------- standard form


def _standard_form(p):
    """``min c'x'`` s.t. ``A x' = b``, ``x' >= 0`` plus a map back to ``x``.

    A variable with a finite lower bound is shifted, one with only a finite
    upper bound is reflected, a free one is split.  Finite upper bounds of
    shifted variables and all inequality rows get slack columns.
    """
    n = p.n
    lo, hi = p.lower, p.upper
    # columns of x' for each original variable: x = shift + sum(sign * x'_col)
    col_of, sign, shift = [], [], np.zeros(n)
    plus_cols = []
    ncol = 0
    for j in range(n):
        if np.isfinite(lo[j]):
            shift[j] = lo[j]
            col_of.append([ncol])
            sign.append([1.0])
            ncol += 1
        elif np.isfinite(hi[j]):
            shift[j] = hi[j]
            col_of.append([ncol])
            sign.append([-1.0])
            ncol += 1
        else:
            col_of.append([ncol, ncol + 1])
            sign.append([1.0, -1.0])
            ncol += 2
        plus_cols.append(col_of[-1][0])
    T = np.zeros((n, ncol))
    for j in range(n):
        for k, s in zip(col_of[j], sign[j]):
            T[j, k] = s
    ub_rows = [j for j in range(n) if np.isfinite(lo[j]) and np.isfinite(hi[j])]
    m_eq, m_ub, m_bd = p.b_eq.size, p.b_ub.size, len(ub_rows)
    nslack = m_ub + m_bd
    A = np.zeros((m_eq + m_ub + m_bd, ncol + nslack))
    b = np.zeros(m_eq + m_ub + m_bd)
    A[:m_eq, :ncol] = p.A_eq @ T
    b[:m_eq] = p.b_eq - p.A_eq @ shift
    A[m_eq:m_eq + m_ub, :ncol] = p.A_ub @ T
    b[m_eq:m_eq + m_ub] = p.b_ub - p.A_ub @ shift
    A[m_eq:m_eq + m_ub, ncol:ncol + m_ub] = np.eye(m_ub)
    for r, j in enumerate(ub_rows):
        A[m_eq + m_ub + r, plus_cols[j]] = 1.0
        A[m_eq + m_ub + r, ncol + m_ub + r] = 1.0
        b[m_eq + m_ub + r] = hi[j] - lo[j]
    c = np.concatenate((p.c @ T, np.zeros(nslack)))
    c0 = float(p.c @ shift)

    def back(xs):
        return shift + T @ xs[:ncol]

    return A, b, c, c0, back


# ---------------------------------------------------------- interior point


def _normal_solver(A, d):
    M = (A * d) @ A.T
    try:
        factor = cho_factor(M)
        return lambda r: cho_solve(factor, r)
    except LinAlgError:
        pass
    # rank-deficient or badly scaled: fall back to least squares
    return lambda r: lstsq(M, r)[0]


def _hsd(A, b, c, tol, max_iter):
    """Mehrotra predictor-corrector on the homogeneous self-dual embedding.

    Returns ``(status, x, y, z, tau, kappa, iterations)`` where status is
    ``optimal``, ``infeasible_or_unbounded`` or ``numerical_failure``.
    """
    m, n = A.shape
    x, z = np.ones(n), np.ones(n)
    y = np.zeros(m)
    tau = kappa = 1.0

    def resid(x, y, z, tau, kappa):
        return b * tau - A @ x, c * tau - A.T @ y - z, c @ x - b @ y + kappa

    rp0, rd0, rg0 = resid(x, y, z, tau, kappa)
    np0, nd0, ng0 = (max(1.0, np.linalg.norm(rp0)), max(1.0, np.linalg.norm(rd0)),
                     max(1.0, abs(rg0)))
    mu0 = (x @ z + tau * kappa) / (n + 1)
    bnorm = np.abs(b).max(initial=0.0)
    cnorm = np.abs(c).max(initial=0.0)

    def converged(x, y, z, tau):
        xh, yh, zh = x / tau, y / tau, z / tau
        primal = np.abs(A @ xh - b).max(initial=0.0) / (1 + bnorm)
        dual = np.abs(c - A.T @ yh - zh).max(initial=0.0) / (1 + cnorm)
        gap = abs(c @ xh - b @ yh) / (1 + abs(c @ xh))
        return primal <= tol and dual <= tol and gap <= tol

    it = 0
    while True:
        if converged(x, y, z, tau):
            return "optimal", x, y, z, tau, kappa, it
        rp, rd, rg = resid(x, y, z, tau, kappa)
        mu = (x @ z + tau * kappa) / (n + 1)
        inf1 = (np.linalg.norm(rp) / np0 < tol and np.linalg.norm(rd) / nd0 < tol
                and abs(rg) / ng0 < tol and tau < tol * max(1.0, kappa))
        inf2 = mu / mu0 < tol and tau < tol * min(1.0, kappa)
        if inf1 or inf2:
            return "infeasible_or_unbounded", x, y, z, tau, kappa, it
        if it >= max_iter:
            return "numerical_failure", x, y, z, tau, kappa, it
        it += 1
        try:
            with np.errstate(all="raise"):
                d = x / z
                solve = _normal_solver(A, d)

                def sym_solve(r1, r2):
                    v = solve(r2 + A @ (d * r1))
                    return d * (A.T @ v - r1), v

                # solution of the homogeneous part, shared by both right-hand sides
                p_, q_ = sym_solve(c, b)
                gamma = 0.0
                dx = dz = None
                for corrector in (False, True):
                    eta = 1.0 - gamma
                    rxs = gamma * mu - x * z
                    rtk = gamma * mu - tau * kappa
                    if corrector:
                        rxs = rxs - dx * dz
                        rtk = rtk - dtau * dkappa
                    u, v = sym_solve(eta * rd - rxs / x, eta * rp)
                    dtau = ((eta * rg + rtk / tau - (-c @ u + b @ v))
                            / (kappa / tau + (-c @ p_ + b @ q_)))
                    dx = u + p_ * dtau
                    dy = v + q_ * dtau
                    dz = (rxs - z * dx) / x
                    dkappa = (rtk - kappa * dtau) / tau
                    if not corrector:
                        alpha = _step_length(x, dx, z, dz, tau, dtau, kappa, dkappa, 1.0)
                        gamma = (1 - alpha) ** 2 * min(0.1, 1 - alpha)
                alpha = _step_length(x, dx, z, dz, tau, dtau, kappa, dkappa, ALPHA0)
                x = x + alpha * dx
                y = y + alpha * dy
                z = z + alpha * dz
                tau = tau + alpha * dtau
                kappa = kappa + alpha * dkappa
        except (FloatingPointError, LinAlgError, ValueError):
            return "numerical_failure", x, y, z, tau, kappa, it
        if not (np.all(x > 0) and np.all(z > 0) and tau > 0 and kappa > 0):
            return "numerical_failure", x, y, z, tau, kappa, it


def _step_length(x, dx, z, dz, tau, dtau, kappa, dkappa, alpha0):
    out = 1.0
    for v, dv in ((x, dx), (z, dz)):
        neg = dv < 0
        if np.any(neg):
            out = min(out, alpha0 * np.min(v[neg] / -dv[neg]))
    if dtau < 0:
        out = min(out, alpha0 * tau / -dtau)
    if dkappa < 0:
        out = min(out, alpha0 * kappa / -dkappa)
    return out


def _solve_reduced(p, tol, max_iter):
    """Interior point on ``p``; returns ``(status, x, residuals, iterations)``."""
    A, b, c, c0, back = _standard_form(p)
    status, x, y, z, tau, kappa, it = _hsd(A, b, c, tol, max_iter)
    xh, yh, zh = x / tau, y / tau, z / tau
    res = {
        "dual": float(np.abs(c - A.T @ yh - zh).max(initial=0.0) / (1 + np.abs(c).max(initial=0))),
        "complementarity": float(abs(c @ xh - b @ yh) / (1 + abs(c @ xh))),
    }
    return status, back(xh), res, it


# ----------------------------------------------------------- certificates


def _farkas(p, tol, max_iter):
    """Search for an infeasibility certificate by a bounded auxiliary LP."""
    lo_f, up_f = np.isfinite(p.lower), np.isfinite(p.upper)
    m_ub, m_eq, n = p.b_ub.size, p.b_eq.size, p.n
    nl, nu = int(lo_f.sum()), int(up_f.sum())
    E_lo = np.eye(n)[:, lo_f]
    E_up = np.eye(n)[:, up_f]
    A_eq = np.hstack((p.A_ub.T, p.A_eq.T, -E_lo, E_up))
    cost = np.concatenate((p.b_ub, p.b_eq, -p.lower[lo_f], p.upper[up_f]))
    bounds = [(0, 1)] * m_ub + [(-1, 1)] * m_eq + [(0, 1)] * (nl + nu)
    if cost.size == 0:
        return None
    aux = LpProblem.create(cost, A_eq=A_eq, b_eq=np.zeros(n), bounds=bounds)
    res = _solve_plain(aux, tol, max_iter)
    if res.status != "optimal" or not res.objective < -1e-7:
        return None
    w = res.x
    z_lo, z_up = np.zeros(n), np.zeros(n)
    z_lo[lo_f] = w[m_ub + m_eq:m_ub + m_eq + nl]
    z_up[up_f] = w[m_ub + m_eq + nl:]
    cert = Certificate("infeasible", y_ub=np.maximum(w[:m_ub], 0.0),
                       y_eq=w[m_ub:m_ub + m_eq], z_lo=np.maximum(z_lo, 0.0),
                       z_up=np.maximum(z_up, 0.0))
    return cert if cert.verify(p) else None


def _ray(p, tol, max_iter):
    """Search for an improving feasible direction by a bounded auxiliary LP."""
    lo = np.where(np.isfinite(p.lower), 0.0, -1.0)
    hi = np.where(np.isfinite(p.upper), 0.0, 1.0)
    aux = LpProblem.create(p.c, A_ub=p.A_ub, b_ub=np.zeros(p.b_ub.size), A_eq=p.A_eq,
                           b_eq=np.zeros(p.b_eq.size), bounds=list(zip(lo, hi)))
    res = _solve_plain(aux, tol, max_iter)
    if res.status != "optimal" or not res.objective < -1e-7:
        return None
    d = np.clip(res.x, lo, hi)
    cert = Certificate("unbounded", ray=d)
    return cert if cert.verify(p) else None


def _certify(p, tol, max_iter):
    """Decide infeasible versus unbounded for a problem with no optimum.

    An infeasibility certificate takes precedence: a problem that is both
    primal and dual infeasible is reported infeasible.
    """
    cert = _farkas(p, tol, max_iter)
    if cert is not None:
        return "infeasible", cert
    cert = _ray(p, tol, max_iter)
    if cert is not None:
        return "unbounded", cert
    return "numerical_failure", None


def _solve_plain(p, tol, max_iter):
    """Interior point without presolve or certificates (auxiliary problems)."""
    status, x, res, it = _solve_reduced(p, tol, max_iter)
    if status != "optimal":
        return LpResult(status, iterations=it)
    res["primal"] = p.primal_residual(x)
    return LpResult("optimal", x, p.objective(x), res, iterations=it)


# ------------------------------------------------------------------ drivers


def linprog_interior_point(problem, tol=1e-8, max_iter=200):
    """Interior point on ``problem`` as given (no presolve).

    Converts to standard form, runs Mehrotra predictor-corrector on the
    homogeneous self-dual embedding and classifies the outcome.  The optimum
    returned is an interior point of the optimal face, not necessarily a
    vertex.  When no optimum exists, a verified certificate is attached.
    """
    if problem.n == 0:
        raise StructuralError("problem has no variables")
    status, x, res, it = _solve_reduced(problem, tol, max_iter)
    if status == "optimal":
        res["primal"] = problem.primal_residual(x)
        return LpResult("optimal", x, problem.objective(x), res, iterations=it,
                        message="optimal solution found")
    if status == "infeasible_or_unbounded":
        status, cert = _certify(problem, tol, max_iter)
        msg = {"infeasible": "problem is infeasible", "unbounded": "problem is unbounded",
               "numerical_failure": "no optimum, but no certificate could be verified"}[status]
        return LpResult(status, certificate=cert, iterations=it, message=msg)
    return LpResult("numerical_failure", x, problem.objective(x), res, iterations=it,
                    message=f"iteration limit or breakdown after {it} iterations; "
                            f"residuals {res}")


def linprog(problem, tol=1e-8, max_iter=200, presolve=True):
    """Presolve, then interior point on the reduced problem, then restore."""
    if not presolve:
        return linprog_interior_point(problem, tol, max_iter)
    pre = lp_presolve(problem)
    if pre.status == "infeasible":
        # presolve's verdict is exact; the certificate is searched separately
        return LpResult("infeasible", certificate=_farkas(problem, tol, max_iter),
                        message=pre.message)
    if pre.status == "unbounded":
        # the parked column may hide an infeasible remainder
        status, cert = _certify(problem, tol, max_iter)
        if status == "numerical_failure":
            status = "unbounded"
        return LpResult(status, certificate=cert, message=pre.message)
    if pre.status == "optimal":
        x = pre.restore(np.zeros(0))
        res = {"primal": problem.primal_residual(x), "dual": 0.0, "complementarity": 0.0}
        return LpResult("optimal", x, problem.objective(x), res, message=pre.message)
    inner = linprog_interior_point(pre.problem, tol, max_iter)
    if inner.status in ("infeasible", "unbounded"):
        status, cert = _certify(problem, tol, max_iter)
        if status == "numerical_failure":
            status = inner.status
        return LpResult(status, certificate=cert, iterations=inner.iterations,
                        message=inner.message)
    if inner.x is None:
        return inner
    x = pre.restore(inner.x)
    res = dict(inner.residuals)
    res["primal"] = problem.primal_residual(x)
    return LpResult(inner.status, x, problem.objective(x), res, iterations=inner.iterations,
                    message=inner.message)
