import hypothesis
import numpy as np

from d2dmm.linkbudget import Instance, PowerAndNoise
from d2dmm.topology import GainMatrix

hypothesis.settings.register_profile("default", max_examples=60, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile("default")


def make_gains(
    h_owner_to_bs,
    h_dt_to_bs,
    h_owner_to_dt_rx,
    h_dt_to_dt_rx,
    h_owner_self=None,
    h_dt_to_owner_rx=None,
    alpha=None,
):
    """GainMatrix from nested lists; UT owners by default."""
    h_owner_to_bs = np.asarray(h_owner_to_bs, dtype=float)
    h_dt_to_bs = np.asarray(h_dt_to_bs, dtype=float)
    n, m = len(h_owner_to_bs), len(h_dt_to_bs)
    alpha = np.ones(n) if alpha is None else np.asarray(alpha, dtype=float)
    if h_owner_self is None:
        h_owner_self = h_owner_to_bs.copy()
    if h_dt_to_owner_rx is None:
        h_dt_to_owner_rx = np.repeat(h_dt_to_bs[:, None], n, axis=1)
    return GainMatrix(
        h_owner_to_bs=h_owner_to_bs,
        h_owner_self=np.asarray(h_owner_self, dtype=float),
        h_dt_to_bs=h_dt_to_bs,
        h_dt_to_owner_rx=np.asarray(h_dt_to_owner_rx, dtype=float).reshape(m, n),
        h_owner_to_dt_rx=np.asarray(h_owner_to_dt_rx, dtype=float).reshape(n, m),
        h_dt_to_dt_rx=np.asarray(h_dt_to_dt_rx, dtype=float).reshape(m, m),
        alpha=alpha,
        beta=1.0 - alpha,
    )


def make_instance(gains, p_owner=1.0, p_dt=1.0, noise=1.0, cst_s=1.0, cst_d=1.0,
                  gamma_s_th=1.0, gamma_d_th=1.0, bandwidth=180e3):
    n, m = gains.shape
    pw = PowerAndNoise(
        p_owner=np.broadcast_to(np.asarray(p_owner, dtype=float), (n,)).copy(),
        p_dt=np.broadcast_to(np.asarray(p_dt, dtype=float), (m,)).copy(),
        noise_owner=noise,
        noise_dt=noise,
    )
    return Instance(gains, pw, cst_s, cst_d, gamma_s_th, gamma_d_th, bandwidth)


def random_instance(rng, n, m, n_promoted=None, spread=2.0):
    """Unit powers and noise, log-normal gains around SNR ~ 10, some promoted owners."""
    if n_promoted is None:
        n_promoted = int(rng.integers(0, n + 1))
    alpha = np.r_[np.ones(n - n_promoted), np.zeros(n_promoted)]

    def g(*shape):
        return 10.0 ** rng.normal(0.0, spread / 2, shape)

    gains = GainMatrix(
        h_owner_to_bs=10 * g(n),
        h_owner_self=10 * g(n),
        h_dt_to_bs=g(m),
        h_dt_to_owner_rx=g(m, n),
        h_owner_to_dt_rx=g(n, m),
        h_dt_to_dt_rx=g(m, m) + 9 * np.eye(m) * g(m),
        alpha=alpha,
        beta=1.0 - alpha,
    )
    # UT owners' receiver is the BS
    for s in range(n - n_promoted):
        gains.h_owner_self[s] = gains.h_owner_to_bs[s]
        gains.h_dt_to_owner_rx[:, s] = gains.h_dt_to_bs
    return make_instance(gains, cst_s=rng.uniform(0.2, 2.0), cst_d=rng.uniform(0.2, 2.0))


def random_rho(rng, n, m, p_assign=0.7):
    rho = np.zeros((n, m), dtype=np.int8)
    for d in range(m):
        if rng.random() < p_assign:
            rho[rng.integers(n), d] = 1
    return rho


ACCEPTANCE_LOG = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LOG:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LOG:
            terminalreporter.write_line(line)
