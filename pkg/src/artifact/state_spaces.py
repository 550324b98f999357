"""Exactly computable state spaces and their maps.

Everything here is exact: points and interval endpoints are
``fractions.Fraction``, cylinder sets are prefix antichains. A step that
leaves a truncated space yields the ``BOUNDARY`` marker instead of being
clamped.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .verdict import ArtifactError

BOUNDARY = "BOUNDARY"
BOT = "BOT"
TOP = "TOP"

F0 = Fraction(0)
F1 = Fraction(1)


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (tuple, list)):
        return Fraction(int(x[0]), int(x[1]))
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


def sym_index(c: str) -> int:
    return ord(c) - 48


# ------------------------------------------------------------ interval sets

class IntervalSet:
    """Finite union of closed intervals with rational endpoints, kept canonical."""

    __slots__ = ("parts",)

    def __init__(self, parts: Iterable[tuple] = ()):
        ivs = sorted((frac(l), frac(r)) for l, r in parts)
        out = []
        for l, r in ivs:
            if l > r:
                raise ValueError(f"bad interval [{l}, {r}]")
            if out and l <= out[-1][1]:
                if r > out[-1][1]:
                    out[-1] = (out[-1][0], r)
            else:
                out.append((l, r))
        self.parts = tuple(out)

    @classmethod
    def interval(cls, l, r) -> "IntervalSet":
        return cls([(l, r)])

    @classmethod
    def point(cls, x) -> "IntervalSet":
        return cls([(x, x)])

    @classmethod
    def unit(cls) -> "IntervalSet":
        return cls([(F0, F1)])

    def __eq__(self, other):
        return isinstance(other, IntervalSet) and self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        return "IntervalSet(" + ", ".join(f"[{l}, {r}]" for l, r in self.parts) + ")"

    def is_empty(self) -> bool:
        return not self.parts

    def length(self) -> Fraction:
        return sum((r - l for l, r in self.parts), F0)

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self.parts + other.parts)

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        i = j = 0
        a, b = self.parts, other.parts
        while i < len(a) and j < len(b):
            l = max(a[i][0], b[j][0])
            r = min(a[i][1], b[j][1])
            if l <= r:
                out.append((l, r))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return IntervalSet(out)

    def contains(self, x) -> bool:
        x = frac(x)
        return any(l <= x <= r for l, r in self.parts)

    def issubset(self, other: "IntervalSet") -> bool:
        return all(any(l2 <= l and r <= r2 for l2, r2 in other.parts) for l, r in self.parts)

    def meets_interior(self, other: "IntervalSet", lo=F0, hi=F1) -> bool:
        """True when ``self`` meets the interior of ``other`` relative to ``[lo, hi]``."""
        for l2, r2 in other.parts:
            if l2 == r2:
                if self.contains(l2):
                    return True
                continue
            for l, r in self.parts:
                # open (l2, r2), closed at the ambient ends
                left_ok = r > l2 or (l2 == lo and r >= l2)
                right_ok = l < r2 or (r2 == hi and l <= r2)
                if left_ok and right_ok and l <= r2 and r >= l2:
                    return True
        return False

    def sample_point(self) -> Fraction:
        l, r = self.parts[0]
        return (l + r) / 2

    def to_json(self):
        return [[str(l), str(r)] for l, r in self.parts]


# ----------------------------------------------------- piecewise affine maps

@dataclass(frozen=True)
class RationalPiecewiseMap:
    """``x -> a x + b`` on consecutive pieces ``[l, r]`` covering ``[0, 1]``."""

    pieces: tuple  # (l, r, a, b)
    name: str = ""

    def __post_init__(self):
        ps = tuple(tuple(frac(v) for v in p) for p in self.pieces)
        object.__setattr__(self, "pieces", ps)
        if not ps or ps[0][0] != 0 or ps[-1][1] != 1:
            raise ArtifactError("MALFORMED_MAP", "pieces must cover [0, 1]")
        for (l, r, a, b), nxt in zip(ps, ps[1:] + (None,)):
            if not l < r:
                raise ArtifactError("MALFORMED_MAP", f"empty piece [{l}, {r}]")
            if nxt is not None and nxt[0] != r:
                raise ArtifactError("MALFORMED_MAP", f"gap or overlap at {r}")
            for v in (a * l + b, a * r + b):
                if not 0 <= v <= 1:
                    raise ArtifactError("MALFORMED_MAP", f"value {v} outside [0, 1]")

    @property
    def continuous(self) -> bool:
        return all(p[2] * p[1] + p[3] == q[2] * q[0] + q[3] for p, q in zip(self.pieces, self.pieces[1:]))

    def breakpoints(self):
        return [p[0] for p in self.pieces] + [F1]

    def __call__(self, x) -> Fraction:
        x = frac(x)
        for l, r, a, b in self.pieces:
            if l <= x < r or (r == 1 and x == 1):
                return a * x + b
        raise ArtifactError("OUT_OF_DOMAIN", str(x))

    def slopes(self):
        return [p[2] for p in self.pieces]

    def to_json(self):
        return [[[p.numerator, p.denominator] for p in piece] for piece in self.pieces]


def pl_map_from_json(data, name="") -> RationalPiecewiseMap:
    """Parse ``[[l, r, a, b], ...]`` with every entry a ``[num, den]`` pair."""
    try:
        pieces = [tuple(frac(v) for v in piece) for piece in data]
    except (TypeError, ValueError, ZeroDivisionError, IndexError) as exc:
        raise ArtifactError("MALFORMED_MAP", str(exc)) from exc
    return RationalPiecewiseMap(tuple(pieces), name)


def affine_through(points: Sequence[tuple], name="") -> RationalPiecewiseMap:
    """Continuous piecewise affine map through ``(x, y)`` nodes with ``x`` from 0 to 1."""
    pts = [(frac(x), frac(y)) for x, y in points]
    pieces = []
    for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
        a = (y1 - y0) / (x1 - x0)
        pieces.append((x0, x1, a, y0 - a * x0))
    return RationalPiecewiseMap(tuple(pieces), name)


def pl_image(f: RationalPiecewiseMap, s: IntervalSet) -> IntervalSet:
    out = []
    for l, r in s.parts:
        for pl, pr, a, b in f.pieces:
            lo, hi = max(l, pl), min(r, pr)
            if lo > hi:
                continue
            y0, y1 = a * lo + b, a * hi + b
            out.append((min(y0, y1), max(y0, y1)))
    return IntervalSet(out)


def pl_preimage(f: RationalPiecewiseMap, s: IntervalSet) -> IntervalSet:
    out = []
    for pl, pr, a, b in f.pieces:
        for c, d in s.parts:
            if a == 0:
                if c <= b <= d:
                    out.append((pl, pr))
                continue
            x0, x1 = (c - b) / a, (d - b) / a
            lo, hi = max(min(x0, x1), pl), min(max(x0, x1), pr)
            if lo <= hi:
                out.append((lo, hi))
    return IntervalSet(out)


def doubling_map() -> RationalPiecewiseMap:
    return RationalPiecewiseMap(((0, Fraction(1, 2), 2, 0), (Fraction(1, 2), 1, 2, -1)), "2x mod 1")


def tripling_map() -> RationalPiecewiseMap:
    t = Fraction(1, 3)
    return RationalPiecewiseMap(((0, t, 3, 0), (t, 2 * t, 3, -1), (2 * t, 1, 3, -2)), "3x mod 1")


def identity_map() -> RationalPiecewiseMap:
    return RationalPiecewiseMap(((0, 1, 1, 0),), "id")


def half_maps():
    """The pair agreeing with the doubling map on one half and constant on the other."""
    h = Fraction(1, 2)
    f0 = RationalPiecewiseMap(((0, h, 2, 0), (h, 1, 0, 1)), "f0")
    f1 = RationalPiecewiseMap(((0, h, 0, 0), (h, 1, 2, -1)), "f1")
    return f0, f1


def reference_pl_pair():
    """Continuous surjective pair with ``I0 -> I1 -> I0`` contracting at rate 3/4.

    ``f0`` contracts ``I0 = [7/64, 9/64]`` into ``I1 = [11/64, 13/64]``,
    ``f1`` contracts ``I1`` back into ``I0`` and fixes ``x0 = 1/8`` with
    slope 3. Every other piece has ``|slope| >= 3``.
    """
    q = Fraction
    f0 = affine_through([
        (0, 1), (q(7, 64), q(45, 256)), (q(9, 64), q(51, 256)), (q(25, 64), 1),
        (q(5, 8), 0), (q(13, 16), 1), (1, 0),
    ], "f0")
    f1 = affine_through([
        (0, 1), (q(7, 64), q(5, 64)), (q(9, 64), q(11, 64)), (q(75, 512), q(97, 512)),
        (q(11, 64), q(29, 256)), (q(13, 64), q(35, 256)), (q(15, 32), 1), (q(3, 4), 0), (1, 1),
    ], "f1")
    params = {
        "x0": q(1, 8), "x1": q(3, 16),
        "I0": (q(7, 64), q(9, 64)), "I1": (q(11, 64), q(13, 64)),
        "c0": q(3, 4), "e0": Fraction(3),
    }
    return f0, f1, params


def verify_pl_constraints(f0: RationalPiecewiseMap, f1: RationalPiecewiseMap, params: dict) -> dict:
    """Check the contracting-pair constraint system; returns a per-constraint report."""
    i0 = IntervalSet.interval(*params["I0"])
    i1 = IntervalSet.interval(*params["I1"])
    c0 = frac(params["c0"])
    e0 = frac(params["e0"])
    rows = []

    def add(name, ok, **info):
        rows.append({"constraint": name, "pass": bool(ok), **{k: str(v) for k, v in info.items()}})

    x0, x1 = frac(params["x0"]), frac(params["x1"])
    add("x0 in I0", i0.contains(x0) and not i0.contains(x1))
    add("x1 in I1", i1.contains(x1) and not i1.contains(x0))
    add("I0 and I1 disjoint", i0.intersect(i1).is_empty())
    add("c0 in (1/2, 1)", Fraction(1, 2) < c0 < 1, c0=c0)
    add("e0 > 2", e0 > 2, e0=e0)
    for name, f, home, dest in (("f0", f0, i0, i1), ("f1", f1, i1, i0)):
        img = pl_image(f, home)
        add(f"{name}(I) inside target", img.issubset(dest), image=img)
        lo, hi = home.parts[0]
        inner = [p[2] for p in f.pieces if p[0] < hi and p[1] > lo]
        contract = all(c0 <= abs(a) < 1 for a in inner)
        add(f"{name} contracting on its interval", contract, slopes=[str(a) for a in inner])
        # any piece reaching outside the contracting interval must expand
        outer = [p[2] for p in f.pieces if p[0] < lo or p[1] > hi]
        add(f"{name} expanding elsewhere", all(abs(a) >= e0 for a in outer), min_slope=min((abs(a) for a in outer), default=0))
        add(f"{name} continuous", f.continuous)
        add(f"{name} surjective", pl_image(f, IntervalSet.unit()) == IntervalSet.unit())
    return {"pass": all(r["pass"] for r in rows), "constraints": rows}


# ---------------------------------------------------------- cylinder algebra

class CylinderSet:
    """Union of one-sided cylinders ``[p]`` given by a canonical prefix antichain."""

    __slots__ = ("prefixes",)

    def __init__(self, prefixes: Iterable[str] = ()):
        self.prefixes = _canonical(prefixes)

    @classmethod
    def full(cls) -> "CylinderSet":
        return cls([""])

    @classmethod
    def empty(cls) -> "CylinderSet":
        return cls([])

    @classmethod
    def of(cls, *words) -> "CylinderSet":
        return cls(words)

    def __eq__(self, other):
        return isinstance(other, CylinderSet) and self.prefixes == other.prefixes

    def __hash__(self):
        return hash(self.prefixes)

    def __repr__(self):
        if self.is_full():
            return "FULL"
        if self.is_empty():
            return "EMPTY"
        return "{" + ",".join(f"[{p}]" for p in self.prefixes) + "}"

    def is_full(self) -> bool:
        return self.prefixes == ("",)

    def is_empty(self) -> bool:
        return not self.prefixes

    def measure(self) -> Fraction:
        return sum((Fraction(1, 2 ** len(p)) for p in self.prefixes), F0)

    def depth(self) -> int:
        return max((len(p) for p in self.prefixes), default=0)

    def union(self, other: "CylinderSet") -> "CylinderSet":
        return CylinderSet(self.prefixes + other.prefixes)

    def intersect(self, other: "CylinderSet") -> "CylinderSet":
        out = []
        for p in self.prefixes:
            for q in other.prefixes:
                if p.startswith(q):
                    out.append(p)
                elif q.startswith(p):
                    out.append(q)
        return CylinderSet(out)

    def meets(self, other: "CylinderSet") -> bool:
        return any(p.startswith(q) or q.startswith(p) for p in self.prefixes for q in other.prefixes)

    def issubset(self, other: "CylinderSet") -> bool:
        return all(any(p.startswith(q) for q in other.prefixes) for p in self.prefixes)

    def truncate(self, d: int) -> "CylinderSet":
        return CylinderSet(p[:d] for p in self.prefixes)

    def to_json(self):
        return list(self.prefixes)


def _canonical(prefixes) -> tuple:
    ps = set(prefixes)
    # drop words having a proper prefix in the set
    ps = {p for p in ps if not any(p[:i] in ps for i in range(len(p)))}
    changed = True
    while changed:
        changed = False
        for p in sorted(ps, key=len, reverse=True):
            if p and p[-1] == "0" and p[:-1] + "1" in ps:
                ps.discard(p)
                ps.discard(p[:-1] + "1")
                ps.add(p[:-1])
                changed = True
                break
    return tuple(sorted(ps))


def cyl_ops(s: CylinderSet, t: CylinderSet) -> dict:
    inter = s.intersect(t)
    return {"intersect": inter, "is_full": s.is_full(), "is_empty": s.is_empty(), "measure": s.measure()}


PREPEND = "PREPEND"
FIRSTBIT = "FIRSTBIT"


def _cyl_step(family: str, a: str, s: CylinderSet) -> CylinderSet:
    if family == PREPEND:
        return CylinderSet(a + p for p in s.prefixes)
    if family == FIRSTBIT:
        out = []
        for p in s.prefixes:
            for q in ((p,) if p else ("0", "1")):
                out.append(a + q if q[0] == a else q[1:])
        return CylinderSet(out)
    raise ArtifactError("UNSUPPORTED_SPACE", family)


def cyl_preimage_step(family: str, a: str, s: CylinderSet) -> CylinderSet:
    """Exact preimage of ``s`` under the single map ``f_a``."""
    other = "1" if a == "0" else "0"
    if family == PREPEND:
        if s.is_full():
            return CylinderSet.full()
        return CylinderSet(p[1:] for p in s.prefixes if p[0] == a)
    if family == FIRSTBIT:
        out = CylinderSet.empty()
        for p in s.prefixes:
            if not p:
                return CylinderSet.full()
            if p[0] == a:
                out = out.union(CylinderSet.of(a).intersect(CylinderSet.of(p[1:])))
            out = out.union(CylinderSet.of(other + p))
        return out
    raise ArtifactError("UNSUPPORTED_SPACE", family)


def cyl_image(family: str, u: str, s: CylinderSet, max_depth: int = 64) -> CylinderSet:
    """Image of a cylinder set under ``f_u`` (first symbol acts first)."""
    for a in u:
        s = _cyl_step(family, a, s)
        if s.depth() > max_depth:
            raise ArtifactError("DEPTH_OVERFLOW", f"depth {s.depth()} > {max_depth}")
    return s


@dataclass(frozen=True)
class TwoSidedCylinder:
    """The set of bi-infinite sequences with ``x[start + i] = word[i]``."""

    start: int
    word: str

    def __post_init__(self):
        if len(self.word) < 1:
            raise ValueError("two-sided cylinder needs a non-empty word")

    @property
    def end(self) -> int:
        return self.start + len(self.word) - 1

    def at(self, i: int):
        if self.start <= i <= self.end:
            return self.word[i - self.start]
        return None

    def __repr__(self):
        return f"_{self.start}[{self.word}]_{self.end}"


def shift_cylinder(c: TwoSidedCylinder, d: int) -> TwoSidedCylinder:
    """Image under the d-th power of the shift: indices move by ``-d``."""
    return TwoSidedCylinder(c.start - d, c.word)


def intersect_indexed(c1: TwoSidedCylinder, c2: TwoSidedCylinder) -> bool:
    lo, hi = max(c1.start, c2.start), min(c1.end, c2.end)
    return all(c1.at(i) == c2.at(i) for i in range(lo, hi + 1))


# -------------------------------------------------------------- line spaces

def line_embed(x) -> Fraction:
    """``g(n) = 1 / (1 + 2^-n)``; ``BOT -> 0`` and ``TOP -> 1``."""
    if x == BOT:
        return F0
    if x == TOP:
        return F1
    n = int(x)
    return Fraction(2 ** n, 2 ** n + 1) if n >= 0 else Fraction(1, 1 + 2 ** (-n))


def harmonic_maps_index(i: int, n: int) -> int:
    """Index map behind the three harmonic-space maps; point ``1/n`` has index ``n``."""
    if n == 1:
        return 1
    if i == 0:
        return n - 1
    if i == 1:
        return n - 1 if n % 2 else n + 1
    if i == 2:
        if n == 2:
            return 3
        if n == 4:
            return 2
        return n + 1 if n % 2 else n - 1
    raise ArtifactError("SYMBOL_OUT_OF_RANGE", str(i))


# ============================================================ space classes

class Space:
    """Common interface used by the IFS engine and the checkers."""

    kind = "abstract"
    finite = False
    n_maps = 0

    def apply_point(self, a: int, x):
        raise ArtifactError("UNSUPPORTED_SPACE", f"{self.kind} has no point maps")

    def apply_set(self, a: int, s):
        """``(image, touched_boundary)``."""
        raise NotImplementedError

    def preimage_set(self, a: int, s):
        raise ArtifactError("UNSUPPORTED_SPACE", f"{self.kind} has no preimages")

    def full(self):
        raise NotImplementedError

    def is_full(self, s) -> bool:
        return s == self.full()

    def is_empty(self, s) -> bool:
        raise NotImplementedError

    def meets(self, s, v) -> bool:
        raise NotImplementedError

    def intersect(self, s, v):
        raise NotImplementedError

    def subset(self, s, v) -> bool:
        raise NotImplementedError

    def cells(self, eps: Fraction | None = None, depth: int | None = None) -> list:
        raise NotImplementedError

    def coarsen(self, s, depth):
        """Exact coarsening for hit tests against cells of the given depth (identity by default)."""
        return s

    def describe(self) -> dict:
        return {"kind": self.kind}

    def fmt(self, s):
        return repr(s)


class FiniteSpace(Space):
    """Finite point set; subsets are frozensets."""

    finite = True
    embedded = False

    def points(self) -> list:
        raise NotImplementedError

    def apply_set(self, a, s):
        out = set()
        hit = False
        for x in s:
            y = self.apply_point(a, x)
            if y == BOUNDARY:
                hit = True
            else:
                out.add(y)
        return frozenset(out), hit

    def preimage_set(self, a, s):
        return frozenset(x for x in self.points() if self.apply_point(a, x) in s)

    def full(self):
        return frozenset(self.points())

    def is_empty(self, s):
        return not s

    def meets(self, s, v):
        return not s.isdisjoint(v)

    def intersect(self, s, v):
        return s & v

    def subset(self, s, v):
        return s <= v

    def embed(self, x) -> Fraction:
        raise NotImplementedError

    def cells(self, eps=None, depth=None):
        pts = self.points()
        if not self.embedded or eps is None:
            return [(self.fmt_point(x), frozenset([x])) for x in pts]
        eps = frac(eps)
        m = int(1 / eps)
        by_cell: dict = {}
        for x in pts:
            t = self.embed(x) / eps
            j = int(t)
            if j < m:
                by_cell.setdefault(j, set()).add(x)
            if t.denominator == 1 and 0 < j:
                # closed cells: a mesh point sits in both neighbours
                by_cell.setdefault(j - 1, set()).add(x)
        out, seen = [], set()
        for j in sorted(by_cell):
            cell = frozenset(by_cell[j])
            if cell not in seen:
                seen.add(cell)
                out.append((f"[{j * eps},{(j + 1) * eps}]", cell))
        return out

    def fmt_point(self, x):
        return str(x)

    def fmt(self, s):
        if isinstance(s, frozenset):
            return "{" + ",".join(self.fmt_point(x) for x in sorted(s, key=self.embed_key)) + "}"
        return self.fmt_point(s)

    def embed_key(self, x):
        return self.embed(x) if self.embedded else x


class LineSpace(FiniteSpace):
    """Indices ``-N..N`` plus ``BOT`` and ``TOP``; symbol ``a`` moves an index by ``steps[a]``."""

    kind = "line"
    embedded = True

    def __init__(self, n: int = 64, steps: Sequence[int] = (1, -1)):
        if n < 1:
            raise ValueError("N must be positive")
        self.n = n
        self.steps = tuple(int(s) for s in steps)
        self.n_maps = len(self.steps)

    def points(self):
        return [BOT] + list(range(-self.n, self.n + 1)) + [TOP]

    def apply_point(self, a, x):
        if x == BOT or x == TOP:
            return x
        y = x + self.steps[a]
        if abs(y) > self.n:
            return BOUNDARY
        return y

    def embed(self, x):
        return line_embed(x)

    def describe(self):
        return {"kind": "line", "N": self.n, "steps": list(self.steps)}


def line_apply(space: LineSpace, u: str, x):
    for c in u:
        x = space.apply_point(sym_index(c), x)
        if x == BOUNDARY:
            return BOUNDARY
    return x


class HarmonicSpace(FiniteSpace):
    """Points ``1/n`` for ``1 <= n <= N`` together with 0, with three tabled maps."""

    kind = "harmonic"
    embedded = True
    n_maps = 3

    def __init__(self, n: int = 24):
        if n < 4 or n % 2:
            raise ValueError("N must be even and >= 4")
        self.n = n

    def points(self):
        return [F0] + [Fraction(1, m) for m in range(self.n, 0, -1)]

    def apply_point(self, a, x):
        if x == 0:
            return F0
        m = harmonic_maps_index(a, x.denominator)
        if m > self.n:
            return BOUNDARY
        return Fraction(1, m)

    def embed(self, x):
        return x

    def describe(self):
        return {"kind": "harmonic", "N": self.n}


def harmonic_apply(space: HarmonicSpace, u: str, x):
    x = frac(x)
    for c in u:
        x = space.apply_point(sym_index(c), x)
        if x == BOUNDARY:
            return BOUNDARY
    return x


class TableSpace(FiniteSpace):
    """Points ``0..n-1`` with explicit map tables; cells are singletons."""

    kind = "table"

    def __init__(self, tables: Sequence[Sequence[int]]):
        self.tables = tuple(tuple(int(v) for v in t) for t in tables)
        self.size = len(self.tables[0])
        self.n_maps = len(self.tables)
        for t in self.tables:
            if len(t) != self.size or any(not 0 <= v < self.size for v in t):
                raise ArtifactError("MALFORMED_MAP", "table maps must be total on the point set")

    def points(self):
        return list(range(self.size))

    def apply_point(self, a, x):
        return self.tables[a][x]

    def describe(self):
        return {"kind": "table", "tables": [list(t) for t in self.tables]}


class IntervalSpace(Space):
    """``[0, 1]`` with piecewise affine maps; sets are ``IntervalSet``."""

    kind = "interval"

    def __init__(self, maps: Sequence[RationalPiecewiseMap]):
        self.maps = tuple(maps)
        self.n_maps = len(self.maps)

    def apply_point(self, a, x):
        return self.maps[a](x)

    def apply_set(self, a, s):
        return pl_image(self.maps[a], s), False

    def preimage_set(self, a, s):
        return pl_preimage(self.maps[a], s)

    def full(self):
        return IntervalSet.unit()

    def is_empty(self, s):
        return s.is_empty()

    def meets(self, s, v):
        return s.meets_interior(v)

    def intersect(self, s, v):
        return s.intersect(v)

    def subset(self, s, v):
        return s.issubset(v)

    def cells(self, eps=None, depth=None):
        eps = frac(eps if eps is not None else Fraction(1, 64))
        m = int(1 / eps)
        return [(f"[{j * eps},{(j + 1) * eps}]", IntervalSet.interval(j * eps, (j + 1) * eps)) for j in range(m)]

    def describe(self):
        return {"kind": "interval", "maps": [m.name or m.to_json() for m in self.maps]}


class CylinderSpace(Space):
    """``{0,1}^N`` with the PREPEND or FIRSTBIT map family; sets are ``CylinderSet``."""

    kind = "cylinder"
    n_maps = 2

    def __init__(self, family: str, max_depth: int = 64):
        if family not in (PREPEND, FIRSTBIT):
            raise ArtifactError("UNSUPPORTED_SPACE", family)
        self.family = family
        self.max_depth = max_depth

    def apply_set(self, a, s):
        out = _cyl_step(self.family, str(a), s)
        if out.depth() > self.max_depth:
            raise ArtifactError("DEPTH_OVERFLOW", f"depth {out.depth()} > {self.max_depth}")
        return out, False

    def preimage_set(self, a, s):
        return cyl_preimage_step(self.family, str(a), s)

    def full(self):
        return CylinderSet.full()

    def is_full(self, s):
        return s.is_full()

    def is_empty(self, s):
        return s.is_empty()

    def meets(self, s, v):
        return s.meets(v)

    def intersect(self, s, v):
        return s.intersect(v)

    def subset(self, s, v):
        return s.issubset(v)

    def cells(self, eps=None, depth=None):
        d = 3 if depth is None else depth
        from .shift_core import all_words

        return [(f"[{w}]", CylinderSet.of(w)) for w in all_words(2, d)]

    def cover_upto(self, depth: int) -> list:
        """Every cylinder of depth 1..depth, shortest first."""
        return [c for d in range(1, depth + 1) for c in self.cells(depth=d)]

    def coarsen(self, s, depth):
        # Prepending commutes with truncation, so hit tests against cells of
        # depth <= d only see the first d symbols.
        if self.family == PREPEND and depth is not None:
            return s.truncate(depth)
        return s

    def describe(self):
        return {"kind": "cylinder", "family": self.family, "max_depth": self.max_depth}


class TwoSidedSpace(Space):
    """``{0,1}^Z`` seen through indexed cylinders; symbol ``a`` acts as the shift power ``steps[a]``."""

    kind = "twosided"

    def __init__(self, steps: Sequence[int] = (1, -1), width: int = 3):
        self.steps = tuple(steps)
        self.n_maps = len(self.steps)
        self.width = width

    def apply_set(self, a, s):
        return shift_cylinder(s, self.steps[a]), False

    def preimage_set(self, a, s):
        return shift_cylinder(s, -self.steps[a])

    def full(self):
        return None

    def is_full(self, s):
        return False

    def is_empty(self, s):
        return False

    def meets(self, s, v):
        return intersect_indexed(s, v)

    def subset(self, s, v):
        return s.start <= v.start and s.end >= v.end and intersect_indexed(s, v)

    def cells(self, eps=None, depth=None):
        from .shift_core import all_words

        w = self.width if depth is None else depth
        lo = -(w // 2)
        return [(f"_{lo}[{u}]_{lo + w - 1}", TwoSidedCylinder(lo, u)) for u in all_words(2, w)]

    def describe(self):
        return {"kind": "twosided", "steps": list(self.steps), "width": self.width}
