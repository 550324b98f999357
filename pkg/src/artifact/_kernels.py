"""Hot loops: index walks on the line space and Markov edge sampling.

Each kernel has a numba version and a pure-numpy version with identical
results. Set ``ARTIFACT_NO_NUMBA=1`` to force the numpy path.
"""

from __future__ import annotations

import os

import numpy as np

USE_NUMBA = os.environ.get("ARTIFACT_NO_NUMBA", "") not in ("1", "true", "yes")

try:
    import numba as nb
except ImportError:  # pragma: no cover - numba is a declared dependency
    nb = None
    USE_NUMBA = False


# ---------------------------------------------------------------- numpy path

def _line_walk_np(steps, symbols, start, limit):
    disp = np.empty(symbols.shape[0] + 1, dtype=np.int64)
    disp[0] = 0
    np.cumsum(steps[symbols], out=disp[1:])
    pos = disp + start
    out = np.flatnonzero(np.abs(pos) > limit)
    n_valid = pos.shape[0] if out.shape[0] == 0 else int(out[0])
    return pos[:n_valid].copy(), n_valid


def _displacement_np(steps, symbols):
    disp = np.zeros(symbols.shape[0] + 1, dtype=np.int64)
    np.cumsum(steps[symbols], out=disp[1:])
    return disp


def _markov_walk_np(offsets, cum, targets, labels, v0, uniforms):
    n = uniforms.shape[0]
    out = np.empty(n, dtype=np.int64)
    v = v0
    for t in range(n):
        lo, hi = offsets[v], offsets[v + 1]
        j = lo + int(np.searchsorted(cum[lo:hi], uniforms[t], side="right"))
        if j >= hi:
            j = hi - 1
        out[t] = labels[j]
        v = targets[j]
    return out


# ---------------------------------------------------------------- numba path

if nb is not None:
    kwd = dict(cache=False, nogil=True)

    @nb.njit(**kwd)
    def _line_walk_nb(steps, symbols, start, limit):
        n = symbols.shape[0]
        pos = np.empty(n + 1, dtype=np.int64)
        x = start
        pos[0] = x
        if x > limit or x < -limit:
            return pos[:0].copy(), 0
        for t in range(n):
            x += steps[symbols[t]]
            if x > limit or x < -limit:
                return pos[: t + 1].copy(), t + 1
            pos[t + 1] = x
        return pos, n + 1

    @nb.njit(**kwd)
    def _displacement_nb(steps, symbols):
        n = symbols.shape[0]
        disp = np.zeros(n + 1, dtype=np.int64)
        acc = 0
        for t in range(n):
            acc += steps[symbols[t]]
            disp[t + 1] = acc
        return disp

    @nb.njit(**kwd)
    def _markov_walk_nb(offsets, cum, targets, labels, v0, uniforms):
        n = uniforms.shape[0]
        out = np.empty(n, dtype=np.int64)
        v = v0
        for t in range(n):
            lo = offsets[v]
            hi = offsets[v + 1]
            j = lo
            u = uniforms[t]
            while j < hi - 1 and cum[j] <= u:
                j += 1
            out[t] = labels[j]
            v = targets[j]
        return out


def line_walk(steps, symbols, start, limit, use_numba=None):
    """Positions ``start + displacement`` until the first step leaving ``[-limit, limit]``.

    Returns ``(positions, n_valid)``; ``n_valid < len(symbols) + 1`` means the
    walk stopped at a boundary.
    """
    steps = np.asarray(steps, dtype=np.int64)
    symbols = np.asarray(symbols, dtype=np.int64)
    fast = USE_NUMBA if use_numba is None else (use_numba and nb is not None)
    if fast:
        pos, n = _line_walk_nb(steps, symbols, np.int64(start), np.int64(limit))
        return pos, int(n)
    return _line_walk_np(steps, symbols, int(start), int(limit))


def displacement(steps, symbols, use_numba=None):
    """Prefix sums of per-symbol steps, starting at 0."""
    steps = np.asarray(steps, dtype=np.int64)
    symbols = np.asarray(symbols, dtype=np.int64)
    fast = USE_NUMBA if use_numba is None else (use_numba and nb is not None)
    if fast:
        return _displacement_nb(steps, symbols)
    return _displacement_np(steps, symbols)


def markov_walk(offsets, cum, targets, labels, v0, uniforms, use_numba=None):
    """Walk a CSR edge table choosing edge ``j`` when ``cum[j-1] <= u < cum[j]``."""
    offsets = np.asarray(offsets, dtype=np.int64)
    cum = np.asarray(cum, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.int64)
    labels = np.asarray(labels, dtype=np.int64)
    uniforms = np.asarray(uniforms, dtype=np.float64)
    fast = USE_NUMBA if use_numba is None else (use_numba and nb is not None)
    if fast:
        return _markov_walk_nb(offsets, cum, targets, labels, np.int64(v0), uniforms)
    return _markov_walk_np(offsets, cum, targets, labels, int(v0), uniforms)
