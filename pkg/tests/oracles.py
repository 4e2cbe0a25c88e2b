"""Independent reference computations used by the test-suite.

Everything here is built from scipy densities and plain linear algebra and
shares no code with the package under test.
"""

import numpy as np
from scipy import stats
from scipy.special import betainc, betaln, gammaln


def gb1_bin_probs(a, b, rate, edges):
    """Bin probabilities of GB-I(a, b, rate) truncated to [edges[0], edges[-1]]."""
    cdf = betainc(a, b, np.clip(rate * np.asarray(edges), 0.0, 1.0))
    mass = np.diff(cdf)
    return mass / mass.sum()


def jeffreys_n_conditional(x0, q, n_max):
    """Brute-force normalization of (1/N) * N!/(N-x0)! * q**(N-x0) over N in [x0, n_max]."""
    n = np.arange(x0, n_max + 1)
    logw = -np.log(n) + gammaln(n + 1) - gammaln(n - x0 + 1) + (n - x0) * np.log(q)
    w = np.exp(logw - logw.max())
    return n, w / w.sum()


def ab_flat_stationary_n(x11, x10, x01, alpha, beta, n_max=500, nodes=400, tol=1e-13,
                         max_iter=2000):
    """Stationary law of N for the AB-Flat (p = c-hat/phi, Jeffreys) transition.

    The sweep (phi | previous phi) -> (N | phi, p1.) -> (p1. | N) is discretized
    with Gauss-Legendre nodes in phi and p1. and the exact negative-binomial pmf
    in N on [x0, n_max]; the stationary distribution is found by power iteration.
    """
    x1 = x11 + x10
    x0 = x1 + x01
    c = x11 / x1
    z, w = np.polynomial.legendre.leggauss(nodes)
    phi = alpha + (beta - alpha) * (z + 1) / 2
    wphi = w * (beta - alpha) / 2
    p1 = (z + 1) / 2
    wp1 = w / 2

    # phi_i -> phi_j : density phi^x11 (1 - phi p)^x10 with p = c / phi_i, on the feasible set
    arg = 1.0 - phi[None, :] * (c / phi[:, None])
    f = np.where(arg > 0, phi[None, :] ** x11 * np.clip(arg, 0.0, None) ** x10, 0.0)
    f = f * wphi[None, :]
    k_phi = f / f.sum(axis=1, keepdims=True)

    ns = np.arange(x0, n_max + 1)
    m = ns - x0
    # N -> p1. : Beta(x1 + 1, N - x1 + 1) at the nodes
    lb = (x1 * np.log(p1[None, :]) + (ns[:, None] - x1) * np.log1p(-p1[None, :])
          - betaln(x1 + 1, ns[:, None] - x1 + 1))
    b_mat = np.exp(lb) * wp1[None, :]
    b_mat /= b_mat.sum(axis=1, keepdims=True)
    # (phi, p1.) -> N - x0 : negative binomial with failure probability q
    q = (1.0 - p1[None, :]) * (1.0 - c / phi[:, None])
    lc = gammaln(m + x0) - gammaln(m + 1) - gammaln(x0)
    a_mat = np.exp(lc[None, None, :] + m[None, None, :] * np.log(q)[:, :, None]
                   + x0 * np.log1p(-q)[:, :, None])
    a_mat /= a_mat.sum(axis=2, keepdims=True)

    g = np.full((nodes, nodes), 1.0 / nodes ** 2)  # joint over (phi, p1.)
    for _ in range(max_iter):
        h = k_phi.T @ g
        n_marg = np.einsum("ij,ijk->ik", h, a_mat)
        g_new = n_marg @ b_mat
        delta = np.abs(g_new - g).sum()
        g = g_new
        if delta < tol:
            break
    return ns, n_marg.sum(axis=0)


def total_variation(p, q):
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())


def empirical_pmf(draws, support):
    support = np.asarray(support)
    counts = np.bincount(np.asarray(draws) - support[0], minlength=len(support))
    tail = counts[len(support):].sum()
    pmf = counts[:len(support)].astype(float)
    pmf[-1] += tail
    return pmf / pmf.sum()


def poisson_pmf(lam, support):
    pmf = stats.poisson.pmf(support, lam)
    pmf[-1] += stats.poisson.sf(support[-1], lam)
    return pmf
