import numpy as np

from config import config, logger
from app.operators import p_laplace_apply, p_laplace_jacobian
from app.spaces import DiscreteField, norm_V

##### Random fields #####


# Unit-H random direction damped by omega^(-alpha/2) per mode, then scaled
def random_field(space, rng, scale=1.0, alpha=0.0) -> DiscreteField:
    z = rng.standard_normal(space.size) * space.omega ** (-alpha / 2.0)
    norm = np.linalg.norm(z)
    if norm == 0.0:
        return DiscreteField(space, z)
    return DiscreteField(space, scale * z / norm)


# (Public) `count` fields cycling through every (scale, smoothness) pair
def random_fields(space, rng, count, scales=None, smoothness=None):
    scales = config.SAMPLE_SCALES if scales is None else scales
    smoothness = config.SAMPLE_SMOOTHNESS if smoothness is None else smoothness
    samples = []
    for i in range(count):
        scale = scales[i % len(scales)]
        alpha = smoothness[(i // len(scales)) % len(smoothness)]
        meta = {"sample": i, "scale": scale, "alpha": alpha}
        samples.append((random_field(space, rng, scale, alpha), meta))
    return samples


##### Discrete dual norm #####


# Minimise |v|_V^p / p - <w, v> by damped Newton; at the minimiser B v = w and
# the ratio <w, v> / |v|_V is the discrete V*-norm of w
def _dual_ascent(w, space, p, v0):
    def energy(c):
        return norm_V(DiscreteField(space, c), p) ** p / p - w @ c

    v = v0.copy()
    best = _ratio(w, space, p, v)
    e = energy(v)
    for _ in range(config.DUAL_NORM_MAXIT):
        field = DiscreteField(space, v)
        grad = p_laplace_apply(space, field, p) - w
        hess = p_laplace_jacobian(space, field, p)
        hess += 1e-14 * max(np.trace(hess) / space.size, 1.0) * np.eye(space.size)
        try:
            d = -np.linalg.solve(hess, grad)
        except np.linalg.LinAlgError:
            d = -grad
        alpha = 1.0
        while True:
            trial = v + alpha * d
            e_trial = energy(trial)
            if e_trial <= e + config.LINE_SEARCH_DECREASE * alpha * (grad @ d):
                break
            if alpha <= config.LINE_SEARCH_MIN_STEP:
                break
            alpha /= 2.0
        if not e_trial < e:
            break
        v, e = trial, e_trial
        ratio = _ratio(w, space, p, v)
        converged = abs(ratio - best) <= config.DUAL_NORM_RTOL * max(abs(ratio), 1e-300)
        best = max(best, ratio)
        if converged:
            break
    return best


def _ratio(w, space, p, v):
    norm = norm_V(DiscreteField(space, v), p)
    return float(w @ v) / norm if norm > 0 else 0.0


# Start on the ray through `direction` at the minimiser of the energy along it
def _scaled_start(w, space, p, direction):
    pairing = float(w @ direction)
    if pairing < 0:
        direction, pairing = -direction, -pairing
    norm = norm_V(DiscreteField(space, direction), p)
    if pairing == 0.0 or norm == 0.0:
        return None
    return direction * (pairing / norm**p) ** (1.0 / (p - 1.0))


# (Public) sup over v in the level of <w, v> / |v|_V, exact for p = 2
def dual_norm_estimate(w, space, p, rng=None, starts=None, hint=None) -> float:
    w = np.asarray(w, dtype=float)
    p = float(p)
    if not np.any(w):
        return 0.0
    if p == 2.0:
        return float(np.sqrt(np.sum(w**2 / space.eigenvalues)))
    starts = config.DUAL_NORM_STARTS if starts is None else starts
    rng = np.random.default_rng(0) if rng is None else rng

    directions = []
    if hint is not None:
        directions.append(np.asarray(hint, dtype=float))
    directions.append(w / space.eigenvalues)
    while len(directions) < starts:
        directions.append(rng.standard_normal(space.size))

    # starts orthogonal to w are not counted
    best, used = 0.0, 0
    for direction in directions:
        if used >= max(starts, 1):
            break
        v0 = _scaled_start(w, space, p, direction)
        if v0 is not None:
            best = max(best, _dual_ascent(w, space, p, v0))
            used += 1
    logger.debug(f"Dual norm estimate {best:.6e} from {used} starts")
    return best
