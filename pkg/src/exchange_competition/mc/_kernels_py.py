"""Pure-Python Metropolis sweep kernels (fallback for the Cython extension).

Both backends implement the exact same documented update sequence so a
fixed seed yields bitwise-identical trajectories regardless of backend:

RNG: splitmix64.  state <- state + 0x9E3779B97F4A7C15 (mod 2^64);
z = state; z = (z ^ z>>30) * 0xBF58476D1CE4E5B9 (mod 2^64);
z = (z ^ z>>27) * 0x94D049BB133111EB (mod 2^64); output z ^ z>>31.
Uniform doubles in [0, 1) are (output >> 11) * 2^-53.

Sweep order: sites 0..n-1 in index order, one proposal per site.
Ising draws one uniform per proposal (acceptance); vector spins draw
three (cone polar, cone azimuth, acceptance).  A proposal is accepted
when delta_E <= 0 or u < exp(-delta_E / T).  The energy convention is
E = -J * sum_bonds s_i . s_j with J = 2*(a1 + a2).
"""

import math

_MASK = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_INV53 = 1.0 / (1 << 53)


def _next_u64(state):
    s = (int(state[0]) + _GOLDEN) & _MASK
    state[0] = s
    z = s
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


def next_uniform(state):
    """One uniform double in [0, 1); advances the state array in place."""
    return (_next_u64(state) >> 11) * _INV53


def seed_state(seed):
    """Initial RNG state: one splitmix64 scramble of the seed."""
    z = ((int(seed) & _MASK) + _GOLDEN) & _MASK
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


def ising_sweep(spins, neighbors, offsets, j_coupling, temperature, state):
    """One full-lattice sweep of single-site flips; returns (accepted, delta_E)."""
    n = spins.shape[0]
    accepted = 0
    delta_total = 0.0
    for i in range(n):
        field = 0.0
        for k in range(offsets[i], offsets[i + 1]):
            field += spins[neighbors[k]]
        delta_e = 2.0 * j_coupling * spins[i] * field
        u = next_uniform(state)
        if delta_e <= 0.0 or u < math.exp(-delta_e / temperature):
            spins[i] = -spins[i]
            accepted += 1
            delta_total += delta_e
    return accepted, delta_total


def vector_sweep(spins, neighbors, offsets, j_coupling, temperature,
                 cone_cos, state):
    """One sweep of cone-rotation proposals for unit 3-vector spins."""
    n = spins.shape[0]
    accepted = 0
    delta_total = 0.0
    for i in range(n):
        hx = hy = hz = 0.0
        for k in range(offsets[i], offsets[i + 1]):
            m = neighbors[k]
            hx += spins[m, 0]
            hy += spins[m, 1]
            hz += spins[m, 2]
        sx, sy, sz = spins[i, 0], spins[i, 1], spins[i, 2]

        u1 = next_uniform(state)
        u2 = next_uniform(state)
        cos_t = 1.0 - u1 * (1.0 - cone_cos)
        sin_t = math.sqrt(max(0.0, 1.0 - cos_t * cos_t))
        phi = 2.0 * math.pi * u2
        # frame transverse to the current spin
        if sz * sz <= 0.81:
            tx, ty, tz = -sy, sx, 0.0      # z_hat x s
        else:
            tx, ty, tz = 0.0, sz, -sy      # x_hat x s
        tn = math.sqrt(tx * tx + ty * ty + tz * tz)
        tx, ty, tz = tx / tn, ty / tn, tz / tn
        wx = sy * tz - sz * ty
        wy = sz * tx - sx * tz
        wz = sx * ty - sy * tx
        cp = math.cos(phi)
        sp = math.sin(phi)
        nx = cos_t * sx + sin_t * (cp * tx + sp * wx)
        ny = cos_t * sy + sin_t * (cp * ty + sp * wy)
        nz = cos_t * sz + sin_t * (cp * tz + sp * wz)
        norm = math.sqrt(nx * nx + ny * ny + nz * nz)
        nx, ny, nz = nx / norm, ny / norm, nz / norm

        delta_e = -j_coupling * ((nx - sx) * hx + (ny - sy) * hy + (nz - sz) * hz)
        u3 = next_uniform(state)
        if delta_e <= 0.0 or u3 < math.exp(-delta_e / temperature):
            spins[i, 0] = nx
            spins[i, 1] = ny
            spins[i, 2] = nz
            accepted += 1
            delta_total += delta_e
    return accepted, delta_total
