import numpy as np

from config import config, logger
from app.exceptions import FieldError, StepError
from app.operators import finite_difference_jacobian


def _direction(jac, rhs):
    try:
        return np.linalg.solve(jac, rhs)
    except np.linalg.LinAlgError:
        return np.linalg.lstsq(jac, rhs, rcond=None)[0]


# (Public) Damped Newton for residual(x) = 0 with backtracking on |residual|
# jacobian=None falls back to forward differences of the residual
def damped_newton(residual, x0, jacobian=None, tol=None, maxit=None):
    tol = config.NEWTON_TOL if tol is None else tol
    maxit = config.NEWTON_MAXIT if maxit is None else maxit
    x = np.array(x0, dtype=float)
    r = residual(x)
    norm = float(np.linalg.norm(r))
    for iteration in range(maxit):
        if norm <= tol:
            return x, iteration, norm
        jac = jacobian(x) if jacobian is not None else finite_difference_jacobian(residual, x, r)
        d = _direction(jac, -r)

        alpha = 1.0
        while True:
            trial = x + alpha * d
            try:
                r_trial = residual(trial)
                norm_trial = float(np.linalg.norm(r_trial))
            except FieldError:
                # overshoot into non-finite coefficients
                r_trial, norm_trial = r, np.inf
            sufficient = norm_trial < (1.0 - config.LINE_SEARCH_DECREASE * alpha) * norm
            if sufficient or alpha <= config.LINE_SEARCH_MIN_STEP:
                break
            alpha /= 2.0
        if not np.isfinite(norm_trial):
            raise StepError("Newton step left the finite range", norm, iteration + 1)
        logger.debug(f"Newton {iteration + 1}: |R| = {norm_trial:.3e}, step {alpha:g}")
        x, r, norm = trial, r_trial, norm_trial
    if norm <= tol:
        return x, maxit, norm
    raise StepError(f"Newton did not converge in {maxit} iterations, |R| = {norm:.3e}", norm, maxit)
