# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels.

Twin of ``_kernels_py.py``; see that module for the contract.  Expressions are
kept in the same order so both backends produce bitwise-identical chains.
"""

import math

import numpy as np

from cpython.pycapsule cimport PyCapsule_GetPointer
from libc.math cimport exp, fabs, log, log1p
from libc.stdint cimport int64_t
from numpy.random cimport bitgen_t
from numpy.random.c_distributions cimport (
    random_beta,
    random_negative_binomial,
    random_poisson,
    random_standard_uniform,
)

NAME = "compiled"

cdef double TINY = 1e-300
cdef double CF_EPS = 1e-15
cdef int CF_MAXIT = 100000
cdef int ROOT_MAXIT = 400
cdef int MAX_RETRIES = 100

cdef enum:
    OK = 0
    ERR_UNDERFLOW = 1
    ERR_INFEASIBLE = 2

cdef enum:
    JEFFREYS = 0
    POISSON = 1

cdef enum:
    C_OVER_PHI = 0
    LLOYD = 1


def log_beta(double a, double b):
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


cdef double _betacf(double a, double b, double x) noexcept nogil:
    cdef double qab = a + b
    cdef double qap = a + 1.0
    cdef double qam = a - 1.0
    cdef double c = 1.0
    cdef double d = 1.0 - qab * x / qap
    cdef double h, aa, de, m2
    cdef int m
    if fabs(d) < TINY:
        d = TINY
    d = 1.0 / d
    h = d
    m = 1
    while m < CF_MAXIT:
        m2 = 2.0 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if fabs(d) < TINY:
            d = TINY
        c = 1.0 + aa / c
        if fabs(c) < TINY:
            c = TINY
        d = 1.0 / d
        h = h * d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if fabs(d) < TINY:
            d = TINY
        c = 1.0 + aa / c
        if fabs(c) < TINY:
            c = TINY
        d = 1.0 / d
        de = d * c
        h = h * de
        if fabs(de - 1.0) < CF_EPS:
            break
        m += 1
    return h


cdef void _tails(double x, double a, double b, double lbeta,
                 double *lower, double *upper) noexcept nogil:
    cdef double front, t
    if x <= 0.0:
        lower[0] = 0.0
        upper[0] = 1.0
        return
    if x >= 1.0:
        lower[0] = 1.0
        upper[0] = 0.0
        return
    front = exp(a * log(x) + b * log1p(-x) - lbeta)
    if x < (a + 1.0) / (a + b + 2.0):
        t = front * _betacf(a, b, x) / a
        lower[0] = t
        upper[0] = 1.0 - t
    else:
        t = front * _betacf(b, a, 1.0 - x) / b
        lower[0] = 1.0 - t
        upper[0] = t


cdef inline double _log_density(double y, double a, double b, double lbeta) noexcept nogil:
    return (a - 1.0) * log(y) + (b - 1.0) * log1p(-y) - lbeta


cdef double _invert_tail(double u, double a, double b, double lbeta, bint upper,
                         double lo, double hi) noexcept nogil:
    cdef double y, y_new, g, f, lower, surv
    cdef int it
    if lo >= hi:
        return lo
    y = a / (a + b)
    if not (lo < y < hi):
        y = 0.5 * (lo + hi)
    it = 0
    while it < ROOT_MAXIT:
        _tails(y, a, b, lbeta, &lower, &surv)
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
            f = exp(_log_density(y, a, b, lbeta))
        if f > 0.0:
            y_new = y - g / f
        else:
            y_new = lo - 1.0
        if not (lo < y_new < hi):
            y_new = 0.5 * (lo + hi)
        if fabs(y_new - y) <= 4e-16 * y_new or hi - lo <= 4e-16 * hi:
            return y_new
        y = y_new
        it += 1
    return y


cdef int _truncated_beta(double u01, double a, double b, double lbeta,
                         double ylo, double yhi, double *out) noexcept nogil:
    cdef double flo, slo, fhi, shi, base, mass, mid, log_mass, v, y
    if ylo < 0.0:
        ylo = 0.0
    if yhi > 1.0:
        yhi = 1.0
    if not ylo < yhi:
        out[0] = ylo
        return OK
    _tails(ylo, a, b, lbeta, &flo, &slo)
    _tails(yhi, a, b, lbeta, &fhi, &shi)
    if flo < 0.5:
        base = flo
        mass = fhi - flo
    else:
        base = shi
        mass = slo - shi
    if not mass > 1e-12 * base or not mass > 1e-300:
        mid = 0.5 * (ylo + yhi)
        if mid <= 0.0 or mid >= 1.0:
            out[0] = ylo
            return ERR_UNDERFLOW
        log_mass = _log_density(mid, a, b, lbeta) + log(yhi - ylo)
        if log_mass < -690.0:
            out[0] = ylo
            return ERR_UNDERFLOW
        out[0] = ylo + u01 * (yhi - ylo)
        return OK
    v = base + mass * u01
    y = _invert_tail(v, a, b, lbeta, flo >= 0.5, ylo, yhi)
    if y < ylo:
        y = ylo
    if y > yhi:
        y = yhi
    out[0] = y
    return OK


cdef int _scaled_draw(bitgen_t *rng, double a, double b, double lbeta, double rate,
                      double lo, double hi, double *out) noexcept nogil:
    cdef double u = random_standard_uniform(rng)
    cdef double y, phi
    cdef int status = _truncated_beta(u, a, b, lbeta, rate * lo, rate * hi, &y)
    phi = y / rate
    if phi < lo:
        phi = lo
    if phi > hi:
        phi = hi
    out[0] = phi
    return status


cdef inline int64_t _draw_n(bitgen_t *rng, int64_t x0, int n_prior, double lam,
                            double q) noexcept nogil:
    if n_prior == JEFFREYS:
        return x0 + random_negative_binomial(rng, <double>x0, 1.0 - q)
    return x0 + random_poisson(rng, lam * q)


cdef bitgen_t *_bitgen(gen) except NULL:
    capsule = gen.bit_generator.capsule
    return <bitgen_t *> PyCapsule_GetPointer(capsule, "BitGenerator")


def betainc_tails(double x, double a, double b, double lbeta):
    cdef double lower, upper
    _tails(x, a, b, lbeta, &lower, &upper)
    return lower, upper


def invert_tail(double u, double a, double b, double lbeta, bint upper, double lo, double hi):
    return _invert_tail(u, a, b, lbeta, upper, lo, hi)


def truncated_beta_draw(double u01, double a, double b, double lbeta, double ylo, double yhi):
    cdef double y
    cdef int status = _truncated_beta(u01, a, b, lbeta, ylo, yhi, &y)
    return y, status


def truncated_scaled_beta_draw(gen, double a, double b, double lbeta, double rate,
                               double lo, double hi):
    cdef bitgen_t *rng = _bitgen(gen)
    cdef double phi
    cdef int status
    with gen.bit_generator.lock, nogil:
        status = _scaled_draw(rng, a, b, lbeta, rate, lo, hi, &phi)
    return phi, status


def ab_flat_chain(gen, int64_t x11, int64_t x10, int64_t x01, double alpha, double beta,
                  int n_prior, double lam, int p_rule, int64_t n0, double phi0,
                  double p1_0, Py_ssize_t n_iter):
    cdef int64_t x1 = x11 + x10
    cdef int64_t x0 = x1 + x01
    cdef double chat = (<double>x11) / x1
    cdef double sa = x11 + 1.0
    cdef double sb = x10 + 1.0
    cdef double lbeta = log_beta(sa, sb)
    out_n_arr = np.zeros(n_iter, dtype=np.int64)
    out_phi_arr = np.zeros(n_iter)
    out_p_arr = np.zeros(n_iter)
    out_p1_arr = np.zeros(n_iter)
    cdef int64_t[::1] out_n = out_n_arr
    cdef double[::1] out_phi = out_phi_arr
    cdef double[::1] out_p = out_p_arr
    cdef double[::1] out_p1 = out_p1_arr
    cdef bitgen_t *rng = _bitgen(gen)
    cdef int64_t redraws = 0
    cdef int64_t n = n0
    cdef int64_t d
    cdef double phi = phi0
    cdef double p = chat / phi0
    cdef double p1 = p1_0
    cdef double hi, phi_new, p_new, q
    cdef int status = OK
    cdef int tries
    cdef Py_ssize_t h = 0
    with gen.bit_generator.lock, nogil:
        while h < n_iter:
            tries = 0
            while True:
                hi = beta
                if 1.0 / p < hi:
                    hi = 1.0 / p
                status = _scaled_draw(rng, sa, sb, lbeta, p, alpha, hi, &phi_new)
                if status != OK:
                    break
                p_new = chat / phi_new
                if p_new < 1.0:
                    break
                redraws += 1
                tries += 1
                if tries > MAX_RETRIES:
                    status = ERR_INFEASIBLE
                    break
            if status != OK:
                break
            q = (1.0 - p1) * (1.0 - p_new)
            tries = 0
            while True:
                n = _draw_n(rng, x0, n_prior, lam, q)
                if p_rule == C_OVER_PHI:
                    break
                d = n - x1
                if d > x01 and d > alpha * x01:
                    p_new = (<double>x01) / d
                    break
                redraws += 1
                tries += 1
                if tries > MAX_RETRIES:
                    status = ERR_INFEASIBLE
                    break
            if status != OK:
                break
            phi = phi_new
            p = p_new
            p1 = random_beta(rng, x1 + 1.0, n - x1 + 1.0)
            out_n[h] = n
            out_phi[h] = phi
            out_p[h] = p
            out_p1[h] = p1
            h += 1
    return (status, out_n_arr[:h], out_phi_arr[:h], out_p_arr[:h], out_p1_arr[:h],
            int(redraws))


def ab_con_chain(gen, int64_t x11, int64_t x10, int64_t x01, double sa, double sb,
                 int n_prior, double lam, int64_t n0, double beta0, Py_ssize_t n_iter):
    cdef int64_t x1 = x11 + x10
    cdef int64_t x0 = x1 + x01
    cdef double chat = (<double>x11) / x1
    cdef double lbeta = log_beta(sa, sb)
    out_n_arr = np.zeros(n_iter, dtype=np.int64)
    out_phi_arr = np.zeros(n_iter)
    out_p_arr = np.zeros(n_iter)
    out_p1_arr = np.zeros(n_iter)
    cdef int64_t[::1] out_n = out_n_arr
    cdef double[::1] out_phi = out_phi_arr
    cdef double[::1] out_p = out_p_arr
    cdef double[::1] out_p1 = out_p1_arr
    cdef bitgen_t *rng = _bitgen(gen)
    cdef int64_t redraws = 0
    cdef int64_t n = n0
    cdef int64_t d = 0
    cdef double upper = beta0
    cdef double phi, p, p1, q
    cdef int status = OK
    cdef int tries
    cdef Py_ssize_t h = 0
    with gen.bit_generator.lock, nogil:
        while h < n_iter:
            p1 = random_beta(rng, x1 + 1.0, n - x1 + 1.0)
            tries = 0
            while True:
                status = _scaled_draw(rng, sa, sb, lbeta, 1.0 / upper, chat, upper, &phi)
                if status != OK:
                    break
                p = chat / phi
                if p < 1.0:
                    break
                redraws += 1
                tries += 1
                if tries > MAX_RETRIES:
                    status = ERR_INFEASIBLE
                    break
            if status != OK:
                break
            q = (1.0 - p1) * (1.0 - p)
            tries = 0
            while True:
                n = _draw_n(rng, x0, n_prior, lam, q)
                d = n - x1
                if d > x01 * chat:
                    break
                redraws += 1
                tries += 1
                if tries > MAX_RETRIES:
                    status = ERR_INFEASIBLE
                    break
            if status != OK:
                break
            upper = (<double>d) / x01
            out_n[h] = n
            out_phi[h] = phi
            out_p[h] = p
            out_p1[h] = p1
            h += 1
    return (status, out_n_arr[:h], out_phi_arr[:h], out_p_arr[:h], out_p1_arr[:h],
            int(redraws))
