# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loop for the brute-force XY8 propagator (see ``_pykernels`` for the reference)."""
from libc.math cimport ceil, cos, sin


def free_evolve(double complex[::1] psi, double t0, double t1,
                const double[::1] seg_start, const double[::1] seg_stop,
                const double[::1] seg_field, double gamma, double detuning,
                double max_step):
    cdef double complex a = psi[0]
    cdef double complex b = psi[1]
    cdef double complex rot, rot_c
    cdef double lo, hi, dt, half
    cdef Py_ssize_t i, k, n, nseg = seg_start.shape[0]
    cdef long steps = 0
    for i in range(nseg):
        lo = t0 if t0 > seg_start[i] else seg_start[i]
        hi = t1 if t1 < seg_stop[i] else seg_stop[i]
        if hi <= lo:
            continue
        n = <Py_ssize_t>ceil((hi - lo) / max_step)
        if n < 1:
            n = 1
        dt = (hi - lo) / n
        half = 0.5 * (gamma * seg_field[i] + detuning) * dt
        rot = cos(half) - 1j * sin(half)
        rot_c = cos(half) + 1j * sin(half)
        for k in range(n):
            a = a * rot
            b = b * rot_c
        steps += n
    psi[0] = a
    psi[1] = b
    return steps
