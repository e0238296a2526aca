"""Trust-region minimization with dogleg, Steihaug-CG and nearly exact steps."""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve, solve_triangular

from ..common import NotPositiveDefinite, NumkitError, StructuralError

# boundary accuracy for the nearly exact solver: |‖p‖ - Δ| <= this * Δ
EXACT_BOUNDARY_RTOL = 1e-12


class CallbackError(NumkitError):
    """A user-supplied objective callback raised."""


def _guarded(name, fn, *args):
    try:
        return fn(*args)
    except Exception as exc:  # noqa: BLE001
        raise CallbackError(f"{name} raised {type(exc).__name__}: {exc}") from exc


class Objective:
    """Callbacks for ``min f(x)`` with per-callback evaluation counters.

    Exceptions raised inside a callback are re-raised as CallbackError.
    """

    def __init__(self, f, grad, hess=None, hessvec=None):
        self._f, self._grad, self._hess, self._hessvec = f, grad, hess, hessvec
        self.nfev = self.ngev = self.nhev = 0

    @property
    def has_hess(self):
        return self._hess is not None

    @property
    def has_hessvec(self):
        return self._hessvec is not None or self._hess is not None

    def f(self, x):
        self.nfev += 1
        return float(_guarded("f", self._f, x))

    def grad(self, x):
        self.ngev += 1
        return np.asarray(_guarded("grad", self._grad, x), dtype=np.float64).reshape(-1)

    def hess(self, x):
        self.nhev += 1
        return np.asarray(_guarded("hess", self._hess, x), dtype=np.float64)

    def hessvec(self, x, v):
        self.nhev += 1
        if self._hessvec is not None:
            return np.asarray(_guarded("hessvec", self._hessvec, x, v),
                              dtype=np.float64).reshape(-1)
        return np.asarray(_guarded("hess", self._hess, x), dtype=np.float64) @ v


@dataclass
class TrustRegionState:
    x: np.ndarray = None
    delta: float = 1.0
    delta_max: float = 1000.0
    eta: float = 0.15
    shrink: float = 0.25
    expand: float = 2.0
    gtol: float = 1e-8

    def __post_init__(self):
        if not 0 < self.delta <= self.delta_max:
            raise ValueError("need 0 < delta <= delta_max")
        if not 0 <= self.eta < 0.25:
            raise ValueError("need 0 <= eta < 0.25")
        if not (0 < self.shrink < 1 < self.expand):
            raise ValueError("need 0 < shrink < 1 < expand")
        if not self.gtol > 0:
            raise ValueError("gtol must be positive")


@dataclass
class MinimizeResult:
    x: np.ndarray
    fun: float
    grad_norm: float
    iterations: int
    status: str
    message: str = ""
    nfev: int = 0
    ngev: int = 0
    nhev: int = 0
    info: dict = field(default_factory=dict)

    @property
    def success(self):
        return self.status == "converged"


def _model_value(H, g, p):
    return float(g @ p + 0.5 * p @ (H @ p))


def _boundary_tau(z, d, delta):
    """Positive ``tau`` with ``‖z + tau d‖ = delta`` (``‖z‖ <= delta``)."""
    a = d @ d
    b = 2.0 * (z @ d)
    c = z @ z - delta * delta
    disc = np.sqrt(max(b * b - 4.0 * a * c, 0.0))
    # c <= 0, so the product of the roots is <= 0 and this root is >= 0
    if b >= 0:
        return -2.0 * c / (b + disc) if b + disc > 0 else 0.0
    return (-b + disc) / (2.0 * a)


def solve_subproblem_dogleg(H, g, delta):
    """Powell's dogleg step; ``H`` must be positive definite."""
    H = np.asarray(H, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    if not np.any(g):
        return np.zeros_like(g)
    try:
        factor = cho_factor(H)
    except np.linalg.LinAlgError:
        raise NotPositiveDefinite(
            "dogleg needs a positive definite Hessian; use trust_ncg or trust_exact") from None
    p_newton = -cho_solve(factor, g)
    if np.linalg.norm(p_newton) <= delta:
        return p_newton
    p_cauchy = -(g @ g) / (g @ H @ g) * g
    norm_cauchy = np.linalg.norm(p_cauchy)
    if norm_cauchy >= delta:
        return -delta / np.linalg.norm(g) * g
    tau = _boundary_tau(p_cauchy, p_newton - p_cauchy, delta)
    return p_cauchy + tau * (p_newton - p_cauchy)


def solve_subproblem_steihaug(hessvec, g, delta, cg_tol=None, max_iter=None):
    """Truncated conjugate gradient on the model (Steihaug).

    ``hessvec(v)`` returns ``H v``.  The default residual tolerance is
    ``min(0.5, sqrt(‖g‖)) ‖g‖``.
    """
    g = np.asarray(g, dtype=np.float64)
    gnorm = np.linalg.norm(g)
    z = np.zeros_like(g)
    if gnorm == 0:
        return z
    if cg_tol is None:
        cg_tol = min(0.5, np.sqrt(gnorm)) * gnorm
    if max_iter is None:
        max_iter = 10 * g.size + 10
    r = g.copy()
    d = -r
    rr = r @ r
    for _ in range(max_iter):
        Bd = np.asarray(hessvec(d), dtype=np.float64)
        curv = d @ Bd
        if curv <= 0:
            return z + _boundary_tau(z, d, delta) * d
        alpha = rr / curv
        z_next = z + alpha * d
        if np.linalg.norm(z_next) >= delta:
            return z + _boundary_tau(z, d, delta) * d
        r = r + alpha * Bd
        rr_next = r @ r
        z = z_next
        if np.sqrt(rr_next) < cg_tol:
            return z
        d = -r + (rr_next / rr) * d
        rr = rr_next
    return z


def solve_subproblem_exact(H, g, delta, full_output=False):
    """Nearly exact step (Moré–Sorensen).

    Newton iteration on the shift ``lam`` of ``‖(H + lam I)^{-1} g‖ = delta``
    using Cholesky factors of ``H + lam I``.  The iteration starts left of the
    root, where it is monotone, and stops once the step length is within
    ``EXACT_BOUNDARY_RTOL`` of ``delta``.  In the hard case the step is
    completed along an eigenvector of the smallest eigenvalue.  With
    ``full_output`` returns ``(p, lam)``.
    """
    H = np.asarray(H, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    if H.ndim != 2 or H.shape != (g.size, g.size):
        raise StructuralError("H must be n x n matching g")
    if not np.allclose(H, H.T, rtol=1e-12, atol=1e-14 * max(1.0, np.abs(H).max())):
        raise StructuralError("trust_exact needs a symmetric Hessian")
    H = 0.5 * (H + H.T)
    n = g.size
    eye = np.eye(n)
    w, V = np.linalg.eigh(H)
    lam_min = w[0]
    scale = max(1.0, np.abs(w).max())

    def out(p, lam):
        return (p, lam) if full_output else p

    def step(lam):
        L = np.linalg.cholesky(H + lam * eye)
        p = -cho_solve((L, True), g)
        return p, L

    if lam_min > 1e-12 * scale:
        p, L = step(0.0)
        if np.linalg.norm(p) <= delta:
            return out(p, 0.0)
        lam = 0.0
    else:
        lam_lo = max(-lam_min, 0.0)
        # the smallest shift at which the factorization is reliably definite
        lam = lam_lo + 1e-12 * scale
        try:
            p, L = step(lam)
            factored = True
        except np.linalg.LinAlgError:
            factored = False
        if not factored or np.linalg.norm(p) < delta:
            return out(_hard_case(w, V, g, delta, lam_lo), lam_lo)

    for _ in range(200):
        pnorm = np.linalg.norm(p)
        if abs(pnorm - delta) <= EXACT_BOUNDARY_RTOL * delta:
            break
        q = solve_triangular(L, p, lower=True)
        lam_next = lam + (pnorm / np.linalg.norm(q)) ** 2 * (pnorm - delta) / delta
        if not lam_next > lam:
            break
        lam = lam_next
        p, L = step(lam)
    return out(p, lam)


def _hard_case(w, V, g, delta, lam):
    """Minimum-norm step for shift ``lam = -w[0]`` plus an eigenvector move
    onto the boundary."""
    coef = V.T @ g
    tol = 1e-10 * max(1.0, np.abs(w).max())
    active = np.abs(w + lam) > tol
    p = -V[:, active] @ (coef[active] / (w[active] + lam))
    z = V[:, 0]
    pn = np.linalg.norm(p)
    if pn >= delta:
        # g nearly orthogonal to the eigenspace but the shifted step is long:
        # scale back onto the boundary
        return p * (delta / pn)
    tau = _boundary_tau(p, z, delta)
    return p + tau * z


_METHODS = ("dogleg", "trust_ncg", "trust_exact")


def minimize_trust_region(obj, x0, method="trust_exact", state=None, max_iter=1000):
    """Trust-region driver with the classic ratio test.

    A step is accepted when ``rho = actual / predicted`` exceeds ``eta``; the
    radius shrinks by ``shrink`` when ``rho < 0.25`` and grows by ``expand``
    (capped at ``delta_max``) when ``rho > 0.75`` and the step reached the
    boundary.  ``info["trace"]`` lists ``f`` at every accepted iterate.
    """
    if method not in _METHODS:
        raise ValueError(f"method must be one of {_METHODS}")
    if method == "trust_ncg" and not obj.has_hessvec:
        raise ValueError("trust_ncg needs hess or hessvec")
    if method != "trust_ncg" and not obj.has_hess:
        raise ValueError(f"{method} needs an explicit Hessian")
    st = state if state is not None else TrustRegionState()
    x = np.array(x0, dtype=np.float64).reshape(-1)
    delta = st.delta
    trace, radii = [], []
    status, message = "max_iter", "iteration limit reached"
    it = 0
    f = gnorm = np.nan
    try:
        f = obj.f(x)
        g = obj.grad(x)
        gnorm = float(np.linalg.norm(g))
        trace.append(f)
        while True:
            if gnorm <= st.gtol:
                status, message = "converged", "gradient norm below gtol"
                break
            if it >= max_iter:
                break
            it += 1
            if method == "trust_ncg":
                xk = x
                p = solve_subproblem_steihaug(lambda v: obj.hessvec(xk, v), g, delta)
                Hp = obj.hessvec(x, p)
                predicted = -(g @ p + 0.5 * p @ Hp)
            else:
                H = obj.hess(x)
                if method == "dogleg":
                    p = solve_subproblem_dogleg(H, g, delta)
                else:
                    p = solve_subproblem_exact(H, g, delta)
                predicted = -_model_value(H, g, p)
            if not predicted > 0:
                status = "precision_loss"
                message = "model predicts no decrease; step below working precision"
                break
            x_new = x + p
            f_new = obj.f(x_new)
            # a non-finite trial value counts as a failed step
            rho = (f - f_new) / predicted if np.isfinite(f_new) else -np.inf
            hit_boundary = np.linalg.norm(p) >= delta * (1 - 1e-6)
            if rho < 0.25:
                delta *= st.shrink
            elif rho > 0.75 and hit_boundary:
                delta = min(st.expand * delta, st.delta_max)
            radii.append(delta)
            if rho > st.eta and f_new < f:
                x, f = x_new, f_new
                g = obj.grad(x)
                gnorm = float(np.linalg.norm(g))
                trace.append(f)
    except CallbackError as exc:
        status, message = "callback_error", str(exc)
    st.x, st.delta = x, delta
    return MinimizeResult(x=x, fun=f, grad_norm=gnorm, iterations=it, status=status,
                          message=message, nfev=obj.nfev, ngev=obj.ngev, nhev=obj.nhev,
                          info={"trace": trace, "radii": radii, "method": method})
