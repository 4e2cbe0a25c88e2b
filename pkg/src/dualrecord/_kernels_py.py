"""Pure-Python hot kernels.

Line-for-line twin of ``_kernels.pyx``.  Both backends draw every variate
through the same numpy ``Generator`` primitives (``random_beta``,
``random_negative_binomial``, ``random_poisson``, ``next_double``) in the same
order and evaluate the same floating-point expressions, so a chain run with
either backend is bitwise identical.  Keep the two files in step.
"""

import math

import numpy as np

NAME = "python"

TINY = 1e-300
CF_EPS = 1e-15
CF_MAXIT = 100000
ROOT_MAXIT = 400
MAX_RETRIES = 100

OK = 0
ERR_UNDERFLOW = 1
ERR_INFEASIBLE = 2

JEFFREYS = 0
POISSON = 1
C_OVER_PHI = 0
LLOYD = 1


def log_beta(a, b):
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def _betacf(a, b, x):
    # modified Lentz evaluation of the incomplete-beta continued fraction
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if math.fabs(d) < TINY:
        d = TINY
    d = 1.0 / d
    h = d
    m = 1
    while m < CF_MAXIT:
        m2 = 2.0 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if math.fabs(d) < TINY:
            d = TINY
        c = 1.0 + aa / c
        if math.fabs(c) < TINY:
            c = TINY
        d = 1.0 / d
        h = h * d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if math.fabs(d) < TINY:
            d = TINY
        c = 1.0 + aa / c
        if math.fabs(c) < TINY:
            c = TINY
        d = 1.0 / d
        de = d * c
        h = h * de
        if math.fabs(de - 1.0) < CF_EPS:
            break
        m += 1
    return h


def betainc_tails(x, a, b, lbeta):
    """Return ``(I_x(a, b), 1 - I_x(a, b))`` with the smaller tail computed directly."""
    if x <= 0.0:
        return 0.0, 1.0
    if x >= 1.0:
        return 1.0, 0.0
    front = math.exp(a * math.log(x) + b * math.log1p(-x) - lbeta)
    if x < (a + 1.0) / (a + b + 2.0):
        lower = front * _betacf(a, b, x) / a
        return lower, 1.0 - lower
    upper = front * _betacf(b, a, 1.0 - x) / b
    return 1.0 - upper, upper


def _log_density(y, a, b, lbeta):
    return (a - 1.0) * math.log(y) + (b - 1.0) * math.log1p(-y) - lbeta


def invert_tail(u, a, b, lbeta, upper, lo, hi):
    """Solve ``tail(y) = u`` for y in ``[lo, hi]``.

    ``tail`` is the lower CDF when ``upper`` is false and the survival function
    otherwise.  Safeguarded Newton: a step that leaves the bracket is replaced
    by bisection.
    """
    if lo >= hi:
        return lo
    y = a / (a + b)
    if not (lo < y < hi):
        y = 0.5 * (lo + hi)
    it = 0
    while it < ROOT_MAXIT:
        lower, surv = betainc_tails(y, a, b, lbeta)
        if upper:
            g = u - surv
        else:
            g = lower - u
        if g == 0.0:
            return y
        if g < 0.0:
            lo = y
        else:
            hi = y
        f = 0.0
        if 0.0 < y < 1.0:
            f = math.exp(_log_density(y, a, b, lbeta))
        if f > 0.0:
            y_new = y - g / f
        else:
            y_new = lo - 1.0
        if not (lo < y_new < hi):
            y_new = 0.5 * (lo + hi)
        if math.fabs(y_new - y) <= 4e-16 * y_new or hi - lo <= 4e-16 * hi:
            return y_new
        y = y_new
        it += 1
    return y


def truncated_beta_draw(u01, a, b, lbeta, ylo, yhi):
    """Map a uniform ``u01`` to a Beta(a, b) draw truncated to ``[ylo, yhi]``.

    Returns ``(y, status)``.
    """
    if ylo < 0.0:
        ylo = 0.0
    if yhi > 1.0:
        yhi = 1.0
    if not ylo < yhi:
        return ylo, OK
    flo, slo = betainc_tails(ylo, a, b, lbeta)
    fhi, shi = betainc_tails(yhi, a, b, lbeta)
    if flo < 0.5:
        base = flo
        mass = fhi - flo
    else:
        base = shi
        mass = slo - shi
    if not mass > 1e-12 * base or not mass > 1e-300:
        # interval too narrow for the CDF to resolve: the density is flat on it
        mid = 0.5 * (ylo + yhi)
        if mid <= 0.0 or mid >= 1.0:
            return ylo, ERR_UNDERFLOW
        log_mass = _log_density(mid, a, b, lbeta) + math.log(yhi - ylo)
        if log_mass < -690.0:
            return ylo, ERR_UNDERFLOW
        return ylo + u01 * (yhi - ylo), OK
    v = base + mass * u01
    y = invert_tail(v, a, b, lbeta, flo >= 0.5, ylo, yhi)
    if y < ylo:
        y = ylo
    if y > yhi:
        y = yhi
    return y, OK


def truncated_scaled_beta_draw(gen, a, b, lbeta, rate, lo, hi):
    """One draw of phi with density prop. to phi^(a-1) (1 - rate*phi)^(b-1) on [lo, hi]."""
    u = gen.random()
    y, status = truncated_beta_draw(u, a, b, lbeta, rate * lo, rate * hi)
    phi = y / rate
    if phi < lo:
        phi = lo
    if phi > hi:
        phi = hi
    return phi, status


def _draw_n(gen, x0, n_prior, lam, q):
    if n_prior == JEFFREYS:
        return x0 + int(gen.negative_binomial(x0, 1.0 - q))
    return x0 + int(gen.poisson(lam * q))


def ab_flat_chain(gen, x11, x10, x01, alpha, beta, n_prior, lam, p_rule,
                  n0, phi0, p1_0, n_iter):
    """Run one AB-Flat chain for ``n_iter`` sweeps.

    Returns ``(status, N, phi, p, p1dot, redraws)``; on failure the arrays
    hold the sweeps completed so far.
    """
    x1 = x11 + x10
    x0 = x1 + x01
    chat = x11 / x1
    sa = x11 + 1.0
    sb = x10 + 1.0
    lbeta = log_beta(sa, sb)
    out_n = np.zeros(n_iter, dtype=np.int64)
    out_phi = np.zeros(n_iter)
    out_p = np.zeros(n_iter)
    out_p1 = np.zeros(n_iter)
    redraws = 0
    n = n0
    phi = phi0
    p = chat / phi0
    p1 = p1_0
    for h in range(n_iter):
        # step 1: phi | p, flat prior on [alpha, beta]
        tries = 0
        while True:
            hi = beta
            if 1.0 / p < hi:
                hi = 1.0 / p
            phi_new, status = truncated_scaled_beta_draw(gen, sa, sb, lbeta, p, alpha, hi)
            if status != OK:
                return status, out_n[:h], out_phi[:h], out_p[:h], out_p1[:h], redraws
            p_new = chat / phi_new
            if p_new < 1.0:
                break
            redraws += 1
            tries += 1
            if tries > MAX_RETRIES:
                return ERR_INFEASIBLE, out_n[:h], out_phi[:h], out_p[:h], out_p1[:h], redraws
        # step 2: N | p1dot, phi, then the p update
        q = (1.0 - p1) * (1.0 - p_new)
        tries = 0
        while True:
            n = _draw_n(gen, x0, n_prior, lam, q)
            if p_rule == C_OVER_PHI:
                break
            d = n - x1
            if d > x01 and d > alpha * x01:
                p_new = x01 / d
                break
            redraws += 1
            tries += 1
            if tries > MAX_RETRIES:
                return ERR_INFEASIBLE, out_n[:h], out_phi[:h], out_p[:h], out_p1[:h], redraws
        phi = phi_new
        p = p_new
        # step 3: p1dot | N
        p1 = float(gen.beta(x1 + 1.0, n - x1 + 1.0))
        out_n[h] = n
        out_phi[h] = phi
        out_p[h] = p
        out_p1[h] = p1
    return OK, out_n, out_phi, out_p, out_p1, redraws


def ab_con_chain(gen, x11, x10, x01, sa, sb, n_prior, lam, n0, beta0, n_iter):
    """Run one AB-Con chain; ``sa``/``sb`` are the posterior GB-I shapes for phi.

    Returns ``(status, N, phi, p, p1dot, redraws)``.
    """
    x1 = x11 + x10
    x0 = x1 + x01
    chat = x11 / x1
    lbeta = log_beta(sa, sb)
    out_n = np.zeros(n_iter, dtype=np.int64)
    out_phi = np.zeros(n_iter)
    out_p = np.zeros(n_iter)
    out_p1 = np.zeros(n_iter)
    redraws = 0
    n = n0
    upper = beta0
    for h in range(n_iter):
        # step 1: p1dot | N and phi | N on [c-hat, upper]
        p1 = float(gen.beta(x1 + 1.0, n - x1 + 1.0))
        tries = 0
        while True:
            phi, status = truncated_scaled_beta_draw(gen, sa, sb, lbeta, 1.0 / upper, chat, upper)
            if status != OK:
                return status, out_n[:h], out_phi[:h], out_p[:h], out_p1[:h], redraws
            # step 2
            p = chat / phi
            if p < 1.0:
                break
            redraws += 1
            tries += 1
            if tries > MAX_RETRIES:
                return ERR_INFEASIBLE, out_n[:h], out_phi[:h], out_p[:h], out_p1[:h], redraws
        # step 3: N | p1dot, phi; the phi range [c-hat, (N - x1.)/x01] must be non-empty
        q = (1.0 - p1) * (1.0 - p)
        tries = 0
        while True:
            n = _draw_n(gen, x0, n_prior, lam, q)
            d = n - x1
            if d > x01 * chat:
                break
            redraws += 1
            tries += 1
            if tries > MAX_RETRIES:
                return ERR_INFEASIBLE, out_n[:h], out_phi[:h], out_p[:h], out_p1[:h], redraws
        upper = d / x01
        out_n[h] = n
        out_phi[h] = phi
        out_p[h] = p
        out_p1[h] = p1
    return OK, out_n, out_phi, out_p, out_p1, redraws
