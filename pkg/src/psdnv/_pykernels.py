"""Pure-Python reference versions of the compiled kernels in ``_ckernels.pyx``."""
import math


def free_evolve(psi, t0, t1, seg_start, seg_stop, seg_field, gamma, detuning, max_step):
    """Evolve ``psi`` (length-2 complex array, in place) from ``t0`` to ``t1``.

    The timeline is piecewise constant: field ``seg_field[i]`` (T) on
    ``[seg_start[i], seg_stop[i])``. Each overlap is cut into equal steps no longer
    than ``max_step``; a step of length ``dt`` multiplies the two amplitudes by
    ``exp(-/+ i (gamma B + detuning) dt / 2)``. Returns the number of steps taken.
    """
    a = complex(psi[0])
    b = complex(psi[1])
    steps = 0
    for i in range(len(seg_start)):
        lo = max(t0, seg_start[i])
        hi = min(t1, seg_stop[i])
        if hi <= lo:
            continue
        n = max(1, int(math.ceil((hi - lo) / max_step)))
        dt = (hi - lo) / n
        half = 0.5 * (gamma * seg_field[i] + detuning) * dt
        rot = complex(math.cos(half), -math.sin(half))
        rot_c = rot.conjugate()
        for _ in range(n):
            a *= rot
            b *= rot_c
        steps += n
    psi[0] = a
    psi[1] = b
    return steps
