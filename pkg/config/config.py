import os

from dotenv import load_dotenv

# Load environment variables from a .env file in the project root.
# Existing system-wide variables are not overridden.
load_dotenv()


def _env_int(name, default):
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"Environment variable {name} must be an integer, got {raw!r}")


class BasicConfig:
    """Base config class for shared configuration."""

    # Version number
    VERSION = "v1.2"

    # ----------------------------------------------------------------
    # Runtime settings
    # ----------------------------------------------------------------
    # Upper bound on levels solved at the same time by convergence studies
    GALERKIN_THREADS = _env_int("GALERKIN_THREADS", os.cpu_count() or 1)

    # Log destination and verbosity
    LOG_DIR = os.getenv(
        "GALERKIN_LOG_DIR",
        os.path.join(os.path.dirname(__file__), "..", "logs"),
    )
    LOG_LEVEL = os.getenv("GALERKIN_LOG_LEVEL", "INFO").upper()

    # ----------------------------------------------------------------
    # Solver defaults
    # ----------------------------------------------------------------
    NEWTON_TOL = 1e-10
    NEWTON_MAXIT = 50
    # Local time-step bisection on Newton failure
    MAX_BISECTIONS = 5
    # Backtracking line search of the damped Newton method
    LINE_SEARCH_MIN_STEP = 1.0 / 1024
    LINE_SEARCH_DECREASE = 1e-4
    # Residuals below RESIDUAL_FLOOR * (size of the step equation) count as converged
    RESIDUAL_FLOOR = 1e-13
    # Finite-difference Jacobian increment: h = FD_STEP * (1 + |c_j|)
    FD_STEP = 1e-6
    # Floor on |grad u| and |u| inside Jacobians of singular integrands
    JACOBIAN_FLOOR = 1e-8

    # ----------------------------------------------------------------
    # Checker defaults
    # ----------------------------------------------------------------
    CHECK_TOLERANCE = 1e-8
    ENERGY_TOLERANCE = 1e-9
    MONOTONE_TOLERANCE = 1e-10
    CANCELLATION_TOLERANCE = 1e-10
    # Scales lambda applied to unit random directions, 1e-2 .. 1e2
    SAMPLE_SCALES = (1e-2, 1e-1, 1.0, 1e1, 1e2)
    # Spectral decay exponents used to mix rough and smooth sample fields
    SAMPLE_SMOOTHNESS = (0.0, 0.5, 1.0, 2.0)
    # Multi-start ascent for the discrete dual norm
    DUAL_NORM_STARTS = 8
    DUAL_NORM_MAXIT = 200
    DUAL_NORM_RTOL = 1e-12
    # Fitted growth constants are inflated by this factor before audits use them
    GROWTH_FIT_SAFETY = 4.0

    # ----------------------------------------------------------------
    # Output settings
    # ----------------------------------------------------------------
    FLOAT_FORMAT = "%.17g"
    ARTIFACT_NAMES = {
        "trajectory": "trajectory.csv",
        "audit": "audit.json",
        "manifest": "manifest.json",
        "report": "report.json",
        "study": "study.csv",
    }
    TRAJECTORY_RECORD_COLUMNS = ["norm_H", "pairing_A", "pairing_f", "newton_iterations"]
    STUDY_COLUMNS = ["n", "e_V", "e_H", "h_n"]
