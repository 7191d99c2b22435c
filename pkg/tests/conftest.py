import numpy as np
import pytest

import neelwall as nw

DEFAULT_TOL = 1e-6


def make_random_admissible(grid, params, rng, modes=12, amp=0.6):
    """Reference profile plus a random smooth field vanishing at the ends.

    Amplitudes are chosen so the raw profile regularly leaves the admissible
    angle range, which exercises the clamp.
    """
    x = grid.points
    length = grid.half_length
    field = np.zeros_like(x)
    for m in range(1, modes + 1):
        field += rng.normal(0.0, amp / m) * np.sin(np.pi * m * (x + length) / (2 * length))
    ref = nw.reference_profile(grid, params)
    return nw.Profile(grid, ref.values + field, params)


@pytest.fixture(scope="session")
def baseline():
    """Converged production-scale wall for nu=1, h=0 (the acceptance anchor)."""
    grid = nw.make_grid(40.0, 4096)
    params = nw.ModelParams(1.0, 0.0)
    result = nw.minimize(nw.reference_profile(grid, params),
                         nw.SolveOptions(tol=DEFAULT_TOL))
    assert result.converged
    return result


@pytest.fixture(scope="session")
def asymptotic_solves():
    """Walls solved on a long domain whose fit window sits in the far field."""
    out = {}
    for nu, h in [(1.0, 0.0), (2.0, 0.3), (0.5, 0.5)]:
        grid = nw.make_grid(80.0, 8192)
        params = nw.ModelParams(nu, h)
        result = nw.minimize(nw.reference_profile(grid, params),
                             nw.SolveOptions(tol=DEFAULT_TOL))
        assert result.converged
        out[(nu, h)] = result
    return out
