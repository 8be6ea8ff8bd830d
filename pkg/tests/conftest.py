import math

import hypothesis
import numpy as np
import pytest

from noisyqca.automaton import AutomatonConfig, NoiseParams, RuleParams, build_block_unitary, partition_blocks

hypothesis.settings.register_profile("default", max_examples=50, deadline=None)
hypothesis.settings.register_profile("ci", max_examples=200, deadline=None)
hypothesis.settings.load_profile("default")


def projector(n, *sites):
    m = np.zeros((n, n), dtype=complex)
    for s in sites:
        m[s - 1, s - 1] = 1.0
    return m


def ket_bra(n, a, b):
    m = np.zeros((n, n), dtype=complex)
    m[a - 1, b - 1] = 1.0
    return m


def dephasing_kraus(n, i, j, xi):
    rest = np.eye(n, dtype=complex) - projector(n, i, j)
    return [
        math.sqrt(1 - xi) * projector(n, i, j) + rest,
        math.sqrt(xi) * projector(n, i),
        math.sqrt(xi) * projector(n, j),
    ]


def damping_kraus(n, i, j, eta):
    if eta < 0:
        i, j, eta = j, i, -eta
    rest = np.eye(n, dtype=complex) - projector(n, i, j)
    return [
        projector(n, i) + math.sqrt(1 - eta) * projector(n, j) + rest,
        math.sqrt(eta) * ket_bra(n, i, j),
    ]


def block_embedding(n, i, j, u):
    v = np.eye(n, dtype=complex)
    v[i - 1, i - 1], v[i - 1, j - 1] = u[0, 0], u[0, 1]
    v[j - 1, i - 1], v[j - 1, j - 1] = u[1, 0], u[1, 1]
    return v


def kraus_sum(rho, ops):
    return sum(k @ rho @ k.conj().T for k in ops)


def kraus_step(rho, config, inverse=False):
    """Dense N x N Kraus-sum evaluation of one (inverse) step, block by block."""
    n = config.n_sites
    u = build_block_unitary(config.rule).matrix
    if inverse:
        u = u.conj().T
        sweep = [b for part in ("B", "A") for b in reversed(partition_blocks(n, part))]
    else:
        sweep = [b for part in ("A", "B") for b in partition_blocks(n, part)]
    rho = np.array(rho, dtype=complex)
    for i, j in sweep:
        rho = kraus_sum(rho, [block_embedding(n, i, j, u)])
        rho = kraus_sum(rho, dephasing_kraus(n, i, j, config.noise.xi))
        rho = kraus_sum(rho, damping_kraus(n, i, j, config.noise.eta))
    return rho


def decoupled(n, p, q, phi1=0.0, phi2=0.0, xi=0.0, eta=0.0):
    return AutomatonConfig(n, RuleParams(p, q, phi1, phi2), NoiseParams(xi, eta), decoupled_noise=True)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
