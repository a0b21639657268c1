import numpy as np

from config import config
from app.operators import assemble_rhs, on_space
from app.spaces import DiscreteField
from .newton import damped_newton


# Solve (c - c_prev) / tau + A(t_next) c = f(t_next); returns (u_next, iterations, |R|)
def euler_newton(space, A, f_spec, u_prev, t_next, tau, tol=None, maxit=None):
    if not tau > 0:
        raise ValueError(f"time step must be positive, got {tau}")
    tol = config.NEWTON_TOL if tol is None else tol
    u_prev = on_space(space, u_prev)
    c_prev = u_prev.coeffs
    rhs = assemble_rhs(space, f_spec, t_next)

    def residual(c):
        return (c - c_prev) / tau + A.apply(space, DiscreteField(space, c), t_next) - rhs

    def jacobian(c):
        return np.eye(space.size) / tau + A.jacobian(space, DiscreteField(space, c), t_next)

    # roundoff floor relative to the size of the step equation
    scale = float(np.linalg.norm(c_prev)) / tau + float(np.linalg.norm(rhs))
    tol = max(tol, config.RESIDUAL_FLOOR * scale)
    coeffs, iterations, norm = damped_newton(residual, c_prev, jacobian, tol, maxit)
    return DiscreteField(space, coeffs), iterations, norm


# (Public) One implicit Euler step of the Galerkin system
def implicit_euler_step(space, A, f_spec, u_prev, t_next, tau, tol=None, maxit=None):
    u_next, _, _ = euler_newton(space, A, f_spec, u_prev, t_next, tau, tol, maxit)
    return u_next
