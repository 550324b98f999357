"""IFS triples: word application, orbits, trajectories, preimages, factor checks."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels
from .shift_core import (
    LanguageAutomaton,
    ShiftSpec,
    SigmaStream,
    SlidingBlockCode,
    apply_sliding_block,
    compile_oracle,
    sample_walk,
    sym,
    words_up_to,
)
from .state_spaces import BOUNDARY, BOT, TOP, FiniteSpace, IntervalSet, IntervalSpace, LineSpace, Space
from .verdict import ArtifactError, refuted, verified


@dataclass
class IFS:
    """A state space, one map per alphabet symbol, and the driving shift."""

    space: Space
    spec: ShiftSpec
    name: str = ""
    oracle: LanguageAutomaton = field(init=False, repr=False)

    def __post_init__(self):
        if self.space.n_maps != self.spec.k:
            raise ArtifactError("MAP_COUNT_MISMATCH", f"{self.space.n_maps} maps for alphabet of size {self.spec.k}")
        self.oracle = compile_oracle(self.spec)

    @property
    def k(self) -> int:
        return self.spec.k

    def successors(self, q: int):
        """Admissible ``(symbol index, next state)`` pairs from automaton state ``q``."""
        return self.oracle.successors(q)


def _is_set(space: Space, x) -> bool:
    if isinstance(space, FiniteSpace):
        return isinstance(x, frozenset)
    if isinstance(space, IntervalSpace):
        return isinstance(x, IntervalSet)
    return True


def check_admissible(ifs: IFS, u: str):
    if ifs.oracle.run(0, u) < 0:
        raise ArtifactError("INADMISSIBLE_WORD", repr(u))


def apply_word(ifs: IFS, u: str, x, check: bool = True):
    """``f_u(x)`` with the first symbol acting first.

    Points of finite spaces map to points (or ``BOUNDARY``); every other
    value is treated as a set and mapped exactly.
    """
    if check:
        check_admissible(ifs, u)
    sp = ifs.space
    if _is_set(sp, x):
        s, _ = image_word(ifs, u, x, check=False)
        return s
    for c in u:
        x = sp.apply_point(ord(c) - 48, x)
        if x == BOUNDARY:
            return BOUNDARY
    return x


def image_word(ifs: IFS, u: str, s, check: bool = True):
    """Exact image set ``f_u(s)`` and whether any point left a truncated space."""
    if check:
        check_admissible(ifs, u)
    hit = False
    for c in u:
        s, b = ifs.space.apply_set(ord(c) - 48, s)
        hit = hit or b
    return s, hit


def preimage_word(ifs: IFS, u: str, s, check: bool = True):
    """``(f_u)^{-1}(s)``: pull back through the last symbol first."""
    if check:
        check_admissible(ifs, u)
    for c in reversed(u):
        s = ifs.space.preimage_set(ord(c) - 48, s)
    return s


@dataclass
class ForwardOrbit:
    """Values reached by admissible words up to a horizon, each with a shortest word."""

    witnesses: dict
    horizon: int
    boundary: bool
    exhausted: bool  # search closed before the horizon: the orbit is complete

    @property
    def values(self) -> set:
        return set(self.witnesses)


def forward_orbit(ifs: IFS, x, horizon: int) -> ForwardOrbit:
    """Breadth-first search over ``(automaton state, value)`` pairs."""
    sp = ifs.space
    as_set = _is_set(sp, x)
    key = (lambda v: v)
    seen = {(0, key(x))}
    wit = {x: ""}
    frontier = [(0, x, "")]
    boundary = False
    depth = 0
    while frontier and depth < horizon:
        nxt = []
        for q, v, w in frontier:
            for a, t in ifs.successors(q):
                if as_set:
                    y, b = sp.apply_set(a, v)
                    boundary = boundary or b
                else:
                    y = sp.apply_point(a, v)
                    if y == BOUNDARY:
                        boundary = True
                        continue
                if (t, y) in seen:
                    continue
                seen.add((t, y))
                w2 = w + sym(a)
                if y not in wit:
                    wit[y] = w2
                nxt.append((t, y, w2))
        frontier = nxt
        depth += 1
    return ForwardOrbit(wit, horizon, boundary, not frontier)


def backward_orbit(ifs: IFS, x, horizon: int) -> set:
    """Points ``y`` with ``f_u(y) = x`` for some admissible ``|u| <= horizon`` (finite spaces)."""
    sp = ifs.space
    if not isinstance(sp, FiniteSpace):
        raise ArtifactError("UNSUPPORTED_SPACE", "backward orbits need a finite space")
    out = {x}
    for u in words_up_to(ifs.oracle, horizon):
        out |= preimage_word(ifs, u, frozenset([x]), check=False)
    return out


def full_orbit(ifs: IFS, x, horizon: int) -> set:
    return forward_orbit(ifs, x, horizon).values | backward_orbit(ifs, x, horizon)


@dataclass
class OrbitRun:
    """Trajectory ``x, f_{s1}(x), f_{s1 s2}(x), ...`` along a driving prefix."""

    prefix: str
    trajectory: list
    boundary: bool
    stats: dict

    @property
    def length(self) -> int:
        return len(self.trajectory) - 1


def _prefix(sigma, horizon: int) -> str:
    if isinstance(sigma, SigmaStream):
        return sigma.prefix(horizon)
    return str(sigma)[:horizon]


def run_along(ifs: IFS, sigma, x, horizon: int, check: bool = True) -> OrbitRun:
    """Exact trajectory along the first ``horizon`` symbols of ``sigma``.

    The run stops early, with ``boundary`` set, when a point leaves a
    truncated space.
    """
    w = _prefix(sigma, horizon)
    if check:
        check_admissible(ifs, w)
    sp = ifs.space
    if isinstance(sp, LineSpace) and x not in (BOT, TOP) and not isinstance(x, frozenset):
        syms = np.frombuffer(w.encode(), dtype=np.uint8).astype(np.int64) - 48
        pos, n = _kernels.line_walk(sp.steps, syms, int(x), sp.n)
        traj = [int(v) for v in pos[:n]]
        boundary = n < len(w) + 1
        stats = {"min_index": min(traj), "max_index": max(traj), "visits": Counter(traj)}
        return OrbitRun(w[: len(traj) - 1], traj, boundary, stats)
    traj = [x]
    boundary = False
    as_set = _is_set(sp, x)
    for c in w:
        a = ord(c) - 48
        if as_set:
            x, b = sp.apply_set(a, x)
            if b:
                boundary = True
        else:
            x = sp.apply_point(a, x)
            if x == BOUNDARY:
                boundary = True
                break
        traj.append(x)
    stats = {}
    if not as_set:
        stats["visits"] = Counter(traj)
    return OrbitRun(w[: len(traj) - 1], traj, boundary, stats)


# --------------------------------------------------------------- factor check

def _apply_phi(phi, x):
    return phi(x) if callable(phi) else phi[x]


def check_factor(ifs_x: IFS, ifs_y: IFS, phi, code: SlidingBlockCode, trials: int = 20,
                 horizon: int = 12, seed: int = 0, exhaustive: bool | None = None):
    """Check ``phi(f_{s_i}(x)) = g_{s'_i}(phi(x))`` along driving prefixes.

    ``s'`` is the image of ``s`` under the sliding block code. Exhaustive
    mode (all admissible prefixes, all points) is used by default when both
    spaces are finite and ``horizon <= 12``; otherwise prefixes and points
    are sampled with the given seed.
    """
    spx, spy = ifs_x.space, ifs_y.space
    finite = isinstance(spx, FiniteSpace) and isinstance(spy, FiniteSpace)
    if finite:
        img = {_apply_phi(phi, x) for x in spx.points()}
        if img != set(spy.points()):
            raise ArtifactError("PHI_NOT_SURJECTIVE", f"misses {sorted(map(str, set(spy.points()) - img))}")
    if any(not 0 <= ord(v) - 48 < ifs_y.k for v in code.table.values()):
        raise ArtifactError("CODE_RANGE_ERROR", "block map value outside the target alphabet")
    if exhaustive is None:
        exhaustive = finite and horizon <= 12
    rng = np.random.default_rng(seed)
    if exhaustive:
        from .shift_core import enumerate_words

        prefixes = enumerate_words(ifs_x.oracle, horizon)
    else:
        prefixes = [sample_walk(ifs_x.spec, horizon, int(rng.integers(2**31))).prefix(horizon) for _ in range(trials)]
    checked = 0
    tested = set()
    for w in prefixes:
        image = apply_sliding_block(code, w, ifs_x.oracle)
        if ifs_y.oracle.run(0, image) < 0:
            raise ArtifactError("CODE_RANGE_ERROR", f"image {image!r} of {w!r} is inadmissible")
        for i, c2 in enumerate(image):
            c = w[i]
            if (c, c2) in tested and exhaustive:
                continue
            tested.add((c, c2))
            if finite and exhaustive:
                pts = spx.points()
            elif finite:
                pts = [spx.points()[int(rng.integers(len(spx.points())))]]
            else:
                pts = [Fraction(int(rng.integers(1, 2**20)), 2**20 + 1)]
            for x in pts:
                left = spx.apply_point(ord(c) - 48, x)
                right = spy.apply_point(ord(c2) - 48, _apply_phi(phi, x))
                checked += 1
                if left == BOUNDARY or right == BOUNDARY:
                    continue
                if _apply_phi(phi, left) != right:
                    return refuted({"prefix": w, "index": i + 1, "x": x}, mode="exhaustive" if exhaustive else "sampled",
                                   lhs=_apply_phi(phi, left), rhs=right)
    return verified(horizon, mode="exhaustive" if exhaustive else "sampled", checks=checked,
                    trials=len(prefixes))
