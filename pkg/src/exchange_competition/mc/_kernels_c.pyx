# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Metropolis sweep kernels.

Mirrors _kernels_py exactly (same splitmix64 stream, same update
sequence) so trajectories are bitwise identical across backends; see the
_kernels_py docstring for the documented sequence.
"""

from libc.math cimport cos, exp, sin, sqrt

import numpy as np

cimport numpy as cnp

cdef double _INV53 = 1.0 / 9007199254740992.0
cdef double _PI = 3.141592653589793


cdef inline cnp.uint64_t _next_u64(cnp.uint64_t* state) nogil:
    cdef cnp.uint64_t s = state[0] + <cnp.uint64_t>0x9E3779B97F4A7C15
    state[0] = s
    cdef cnp.uint64_t z = s
    z = (z ^ (z >> 30)) * <cnp.uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <cnp.uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline double _uniform(cnp.uint64_t* state) nogil:
    return <double>(_next_u64(state) >> 11) * _INV53


def next_uniform(cnp.uint64_t[::1] state):
    """One uniform double in [0, 1); advances the state in place."""
    return _uniform(&state[0])


def seed_state(seed):
    """Initial RNG state: one splitmix64 scramble of the seed."""
    cdef cnp.uint64_t z = <cnp.uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)
    z = z + <cnp.uint64_t>0x9E3779B97F4A7C15
    z = (z ^ (z >> 30)) * <cnp.uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <cnp.uint64_t>0x94D049BB133111EB
    return int(z ^ (z >> 31))


def ising_sweep(cnp.int8_t[::1] spins, cnp.int32_t[::1] neighbors,
                cnp.int32_t[::1] offsets, double j_coupling,
                double temperature, cnp.uint64_t[::1] state):
    """One full-lattice sweep of single-site flips; returns (accepted, delta_E)."""
    cdef Py_ssize_t n = spins.shape[0]
    cdef Py_ssize_t i, k
    cdef int accepted = 0
    cdef double delta_total = 0.0
    cdef double field, delta_e, u
    cdef cnp.uint64_t* st = &state[0]
    for i in range(n):
        field = 0.0
        for k in range(offsets[i], offsets[i + 1]):
            field += spins[neighbors[k]]
        delta_e = 2.0 * j_coupling * spins[i] * field
        u = _uniform(st)
        if delta_e <= 0.0 or u < exp(-delta_e / temperature):
            spins[i] = -spins[i]
            accepted += 1
            delta_total += delta_e
    return accepted, delta_total


def vector_sweep(double[:, ::1] spins, cnp.int32_t[::1] neighbors,
                 cnp.int32_t[::1] offsets, double j_coupling,
                 double temperature, double cone_cos,
                 cnp.uint64_t[::1] state):
    """One sweep of cone-rotation proposals for unit 3-vector spins."""
    cdef Py_ssize_t n = spins.shape[0]
    cdef Py_ssize_t i, k, m
    cdef int accepted = 0
    cdef double delta_total = 0.0
    cdef double hx, hy, hz, sx, sy, sz
    cdef double u1, u2, u3, cos_t, sin_t, phi
    cdef double tx, ty, tz, tn, wx, wy, wz, cp, sp
    cdef double nx, ny, nz, norm, delta_e, arg
    cdef cnp.uint64_t* st = &state[0]
    for i in range(n):
        hx = 0.0
        hy = 0.0
        hz = 0.0
        for k in range(offsets[i], offsets[i + 1]):
            m = neighbors[k]
            hx += spins[m, 0]
            hy += spins[m, 1]
            hz += spins[m, 2]
        sx = spins[i, 0]
        sy = spins[i, 1]
        sz = spins[i, 2]

        u1 = _uniform(st)
        u2 = _uniform(st)
        cos_t = 1.0 - u1 * (1.0 - cone_cos)
        arg = 1.0 - cos_t * cos_t
        if arg < 0.0:
            arg = 0.0
        sin_t = sqrt(arg)
        phi = 2.0 * _PI * u2
        if sz * sz <= 0.81:
            tx = -sy
            ty = sx
            tz = 0.0
        else:
            tx = 0.0
            ty = sz
            tz = -sy
        tn = sqrt(tx * tx + ty * ty + tz * tz)
        tx /= tn
        ty /= tn
        tz /= tn
        wx = sy * tz - sz * ty
        wy = sz * tx - sx * tz
        wz = sx * ty - sy * tx
        cp = cos(phi)
        sp = sin(phi)
        nx = cos_t * sx + sin_t * (cp * tx + sp * wx)
        ny = cos_t * sy + sin_t * (cp * ty + sp * wy)
        nz = cos_t * sz + sin_t * (cp * tz + sp * wz)
        norm = sqrt(nx * nx + ny * ny + nz * nz)
        nx /= norm
        ny /= norm
        nz /= norm

        delta_e = -j_coupling * ((nx - sx) * hx + (ny - sy) * hy + (nz - sz) * hz)
        u3 = _uniform(st)
        if delta_e <= 0.0 or u3 < exp(-delta_e / temperature):
            spins[i, 0] = nx
            spins[i, 1] = ny
            spins[i, 2] = nz
            accepted += 1
            delta_total += delta_e
    return accepted, delta_total
