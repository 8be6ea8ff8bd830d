import math

import numpy as np
import pytest

from noisyqca.automaton import AutomatonConfig, step_forward, step_inverse
from noisyqca.errors import CapacityError, DegenerateProjectionError
from noisyqca.oracle import (
    FullState,
    basis_state,
    embed_sector_state,
    embed_two_site,
    full_step_forward,
    full_step_inverse,
    project_to_sector,
)
from noisyqca.sector import pure_site_state, random_sector_state

C = AutomatonConfig.coupled


def oracle_grid():
    """N in {4, 6} x xi in {0, 0.3, 1} x eta in {-0.5, 0, 0.5} x phi1+phi2 in {0, pi}."""
    pq = {-0.5: (0.25, 0.75), 0.0: (0.5, 0.5), 0.5: (0.75, 0.25)}
    return [
        C(n, *pq[eta], phi / 2, phi / 2, xi=xi)
        for n in (4, 6)
        for xi in (0.0, 0.3, 1.0)
        for eta in (-0.5, 0.0, 0.5)
        for phi in (0.0, math.pi)
    ]


def test_swap_in_full_space():
    cfg = C(2, 1.0, 1.0)
    out = full_step_forward(basis_state(2, [1]), cfg)
    np.testing.assert_allclose(out.matrix, basis_state(2, [2]).matrix, atol=1e-15)


@pytest.mark.parametrize("cfg", [C(4, 0.5, 0.5, xi=0.3), C(5, 0.75, 0.25, 1.0, 0.0, xi=1.0)])
def test_vacuum_and_double_excitation_untouched_by_channels(cfg):
    vac = basis_state(cfg.n_sites)
    np.testing.assert_allclose(full_step_forward(vac, cfg).matrix, vac.matrix, atol=1e-15)
    np.testing.assert_allclose(full_step_inverse(vac, cfg).matrix, vac.matrix, atol=1e-15)


def test_embedding_acts_on_the_named_pair():
    op = np.zeros((4, 4))
    op[2, 1] = 1.0  # |10> -> |01>
    full = embed_two_site(op, 3, 2, 3)
    x = 0b010  # site 2 excited
    assert full[0b100, x] == 1.0
    assert np.count_nonzero(full) == 2  # also moves the state with site 1 excited as a spectator


def test_projection():
    sector, leak = project_to_sector(basis_state(4, [1]))
    np.testing.assert_array_equal(sector.matrix, pure_site_state(4, 1).matrix)
    assert leak == 0.0
    with pytest.raises(DegenerateProjectionError):
        project_to_sector(basis_state(4))


def test_capacity_guard():
    with pytest.raises(CapacityError):
        FullState(9, np.zeros((512, 512)))
    with pytest.raises(CapacityError):
        full_step_forward(FullState(8, np.eye(256) / 256), C(9, 0.5, 0.5))


def test_three_steps_match_sector_evolution():
    cfg = C(4, 0.5, 0.5, xi=0.2)
    rho = pure_site_state(4, 1)
    full = embed_sector_state(rho)
    for _ in range(3):
        rho = step_forward(rho, cfg)
        full = full_step_forward(full, cfg)
    projected, leak = project_to_sector(full)
    assert np.max(np.abs(projected.matrix - rho.matrix)) <= 1e-10
    assert abs(leak) <= 1e-12


@pytest.mark.parametrize("cfg", oracle_grid(), ids=str)
def test_oracle_equivalence_grid(cfg):
    rho = random_sector_state(cfg.n_sites, 2024)
    full = embed_sector_state(rho)
    for stepper, full_stepper in ((step_forward, full_step_forward), (step_inverse, full_step_inverse)):
        for _ in range(10):
            rho = stepper(rho, cfg)
            full = full_stepper(full, cfg)
            projected, leak = project_to_sector(full)
            assert np.max(np.abs(projected.matrix - rho.matrix)) <= 1e-10
            assert abs(leak) <= 1e-12


@pytest.mark.parametrize("n", [3, 5, 6])
def test_sector_closure_over_fifty_steps(n):
    cfg = C(n, 0.65, 0.3, 0.4, 2.0, xi=0.45)
    full = basis_state(n, [n // 2 + 1])
    for _ in range(50):
        full = full_step_forward(full, cfg)
        assert abs(project_to_sector(full)[1]) <= 1e-12
