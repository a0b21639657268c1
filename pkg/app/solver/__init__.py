from .initial import project_initial
from .newton import damped_newton
from .problem import Problem, build_problem, default_q
from .stepping import euler_newton, implicit_euler_step
from .trajectory import (
    DerivativeNorms,
    Trajectory,
    solve_trajectory,
    time_derivative_pairings,
)
