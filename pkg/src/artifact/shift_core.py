"""Shift spaces: specs, language automata, word queries, recoding and streams.

Words are Python strings. Symbol ``i`` is the character ``chr(ord('0') + i)``,
so the usual digits cover alphabets up to 10 and larger recoded alphabets
continue past ``'9'``.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from . import _kernels
from .verdict import ArtifactError, Verdict, refuted, unknown, verified


def sym(i: int) -> str:
    return chr(48 + i)


def sym_index(c: str) -> int:
    return ord(c) - 48


def reverse_word(u: str) -> str:
    """``u_n ... u_1`` for ``u = u_1 ... u_n``."""
    return u[::-1]


def all_words(k: int, n: int) -> Iterator[str]:
    """Every word of length ``n`` over ``k`` symbols in lexicographic order."""
    alphabet = [sym(i) for i in range(k)]
    for t in itertools.product(alphabet, repeat=n):
        yield "".join(t)


# --------------------------------------------------------------------- specs

@dataclass(frozen=True)
class ShiftSpec:
    """Declarative subshift: ``full``, ``sft``, ``coded`` or ``graph``."""

    kind: str
    k: int
    forbidden: tuple = ()
    generators: tuple = ()
    vertices: tuple = ()
    edges: tuple = ()  # (src, dst, label symbol)
    name: str = ""

    def __post_init__(self):
        validate_spec(self)


def validate_spec(spec: ShiftSpec) -> None:
    if spec.kind not in ("full", "sft", "coded", "graph"):
        raise ArtifactError("MALFORMED_SPEC", f"unknown kind {spec.kind!r}")
    if spec.k < 1:
        raise ArtifactError("MALFORMED_SPEC", "alphabet size must be >= 1")

    def _check_word(w, what):
        for c in w:
            if not 0 <= sym_index(c) < spec.k:
                raise ArtifactError("MALFORMED_SPEC", f"{what} {w!r} uses a symbol outside the alphabet")

    if spec.kind == "sft":
        for f in spec.forbidden:
            if len(f) == 0:
                raise ArtifactError("MALFORMED_SPEC", "empty forbidden word")
            _check_word(f, "forbidden word")
    if spec.kind == "coded":
        if not spec.generators:
            raise ArtifactError("MALFORMED_SPEC", "coded spec needs generators")
        for g in spec.generators:
            if len(g) == 0:
                raise ArtifactError("MALFORMED_SPEC", "empty generator word")
            _check_word(g, "generator")
    if spec.kind == "graph":
        vs = set(spec.vertices)
        if not vs:
            raise ArtifactError("MALFORMED_SPEC", "graph needs vertices")
        out_deg = {v: 0 for v in vs}
        in_deg = {v: 0 for v in vs}
        for s, d, a in spec.edges:
            if s not in vs or d not in vs:
                raise ArtifactError("MALFORMED_SPEC", f"edge ({s},{d}) uses an unknown vertex")
            _check_word(a, "edge label")
            if len(a) != 1:
                raise ArtifactError("MALFORMED_SPEC", "edge labels are single symbols")
            out_deg[s] += 1
            in_deg[d] += 1
        for v in spec.vertices:
            if out_deg[v] == 0 or in_deg[v] == 0:
                raise ArtifactError("MALFORMED_SPEC", f"stranded vertex {v!r}")


def full_shift(k: int = 2) -> ShiftSpec:
    return ShiftSpec("full", k, name=f"full{k}")


def forbidden_sft(k: int, forbidden: Iterable[str], name: str = "") -> ShiftSpec:
    return ShiftSpec("sft", k, forbidden=tuple(sorted(set(forbidden))), name=name)


def coded_shift(generators: Iterable[str], k: int | None = None, name: str = "") -> ShiftSpec:
    gens = tuple(dict.fromkeys(generators))
    if k is None:
        k = max((sym_index(c) for g in gens for c in g), default=0) + 1
        k = max(k, 2)
    return ShiftSpec("coded", k, generators=gens, name=name)


def graph_shift(vertices: Sequence, edges: Iterable[tuple], k: int, name: str = "") -> ShiftSpec:
    return ShiftSpec("graph", k, vertices=tuple(vertices), edges=tuple(tuple(e) for e in edges), name=name)


def golden_shift() -> ShiftSpec:
    return forbidden_sft(2, ["11"], name="golden")


def spec_from_dict(d: dict) -> ShiftSpec:
    """Build a spec from the definition-file mapping."""
    if not isinstance(d, dict) or "kind" not in d:
        raise ArtifactError("MALFORMED_SPEC", "definition needs a 'kind' field")
    kind = d["kind"]
    k = d.get("alphabet_size")
    try:
        if kind == "full":
            return full_shift(int(k or 2))
        if kind == "sft":
            return forbidden_sft(int(k or 2), [str(w) for w in d.get("forbidden", [])], d.get("name", ""))
        if kind == "coded":
            gens = [str(w) for w in d.get("generators", [])]
            return coded_shift(gens, int(k) if k else None, d.get("name", ""))
        if kind == "graph":
            edges = [(str(e[0]), str(e[1]), str(e[2])) for e in d.get("edges", [])]
            verts = [str(v) for v in d.get("vertices", [])]
            return graph_shift(verts, edges, int(k or 2), d.get("name", ""))
    except (TypeError, ValueError, IndexError) as exc:
        raise ArtifactError("MALFORMED_SPEC", str(exc)) from exc
    raise ArtifactError("MALFORMED_SPEC", f"unknown kind {kind!r}")


def spec_to_dict(spec: ShiftSpec) -> dict:
    d = {"kind": spec.kind, "alphabet_size": spec.k}
    if spec.name:
        d["name"] = spec.name
    if spec.kind == "sft":
        d["forbidden"] = list(spec.forbidden)
    if spec.kind == "coded":
        d["generators"] = list(spec.generators)
    if spec.kind == "graph":
        d["vertices"] = list(spec.vertices)
        d["edges"] = [list(e) for e in spec.edges]
    return d


def load_spec(path: str) -> ShiftSpec:
    import yaml

    with open(path, "r", encoding="utf8") as fh:
        try:
            data = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ArtifactError("MALFORMED_SPEC", str(exc)) from exc
    return spec_from_dict(data)


# ---------------------------------------------------------------- automaton

@dataclass(frozen=True)
class LanguageAutomaton:
    """Minimal DFA of a factor-closed language; every state accepts.

    ``trans[q][a]`` is the successor state or ``-1``. State 0 is the start
    state, whose follower set is the whole language.
    """

    k: int
    trans: tuple
    source: str = ""

    @property
    def n_states(self) -> int:
        return len(self.trans)

    def step(self, q: int, c: str) -> int:
        a = sym_index(c)
        if not 0 <= a < self.k:
            raise ArtifactError("SYMBOL_OUT_OF_RANGE", repr(c))
        return self.trans[q][a]

    def run(self, q: int, word: str) -> int:
        tr = self.trans
        k = self.k
        for c in word:
            a = ord(c) - 48
            if not 0 <= a < k:
                raise ArtifactError("SYMBOL_OUT_OF_RANGE", repr(c))
            q = tr[q][a]
            if q < 0:
                return -1
        return q

    def accepts(self, word: str) -> bool:
        return self.run(0, word) >= 0

    def successors(self, q: int):
        return [(a, t) for a, t in enumerate(self.trans[q]) if t >= 0]


def _determinize(k, nfa_next, starts):
    """Subset construction. ``nfa_next(state, a)`` yields successor states."""
    start = frozenset(starts)
    index = {start: 0}
    order = [start]
    trans = []
    i = 0
    while i < len(order):
        cur = order[i]
        row = []
        for a in range(k):
            nxt = frozenset(t for s in cur for t in nfa_next(s, a))
            if not nxt:
                row.append(-1)
                continue
            if nxt not in index:
                index[nxt] = len(order)
                order.append(nxt)
            row.append(index[nxt])
        trans.append(row)
        i += 1
    return trans


def _trim(trans):
    """Keep only states with an infinite forward path; returns remapped table."""
    n = len(trans)
    alive = [True] * n
    changed = True
    while changed:
        changed = False
        for q in range(n):
            if alive[q] and not any(t >= 0 and alive[t] for t in trans[q]):
                alive[q] = False
                changed = True
    if not alive[0]:
        return [[-1] * len(trans[0])] if n else []
    return [[t if t >= 0 and alive[t] else -1 for t in row] if alive[q] else None for q, row in enumerate(trans)]


def _minimize(trans, k):
    """Moore partition refinement on a partial DFA, renumbered in BFS order."""
    states = [q for q, row in enumerate(trans) if row is not None]
    # Only states reachable from 0 matter.
    reach = {0}
    dq = deque([0])
    while dq:
        q = dq.popleft()
        for t in trans[q]:
            if t >= 0 and t not in reach:
                reach.add(t)
                dq.append(t)
    states = [q for q in states if q in reach]
    cls = {q: 0 for q in states}
    while True:
        sigs = {}
        new = {}
        for q in states:
            sig = (cls[q],) + tuple(cls[t] if t >= 0 else -1 for t in trans[q])
            new[q] = sigs.setdefault(sig, len(sigs))
        if len(sigs) == len(set(cls.values())):
            cls = new
            break
        cls = new
    # BFS renumbering from the start class.
    order = {cls[0]: 0}
    rep = {}
    for q in states:
        rep.setdefault(cls[q], q)
    out = []
    dq = deque([cls[0]])
    while dq:
        c = dq.popleft()
        row = []
        for t in trans[rep[c]]:
            if t < 0:
                row.append(-1)
                continue
            ct = cls[t]
            if ct not in order:
                order[ct] = len(order)
                dq.append(ct)
            row.append(order[ct])
        out.append(tuple(row))
    return tuple(out)


def _sft_table(spec):
    k = spec.k
    forb = set(spec.forbidden)
    m = max((len(f) for f in forb), default=1)
    keep = m - 1
    index = {"": 0}
    order = [""]
    trans = []
    i = 0
    while i < len(order):
        h = order[i]
        row = []
        for a in range(k):
            w = h + sym(a)
            if any(w.endswith(f) for f in forb):
                row.append(-1)
                continue
            nh = w[-keep:] if keep > 0 else ""
            if nh not in index:
                index[nh] = len(order)
                order.append(nh)
            row.append(index[nh])
        trans.append(row)
        i += 1
    return trans


def compile_oracle(spec: ShiftSpec) -> LanguageAutomaton:
    """Minimal deterministic automaton for the language of ``spec``."""
    validate_spec(spec)
    k = spec.k
    if spec.kind == "full":
        return LanguageAutomaton(k, (tuple([0] * k),), "full")
    if spec.kind == "sft":
        table = _sft_table(spec)
    elif spec.kind == "coded":
        gens = spec.generators

        def nxt(s, a):
            i, j = s
            if sym_index(gens[i][j]) != a:
                return ()
            if j + 1 < len(gens[i]):
                return ((i, j + 1),)
            return tuple((g, 0) for g in range(len(gens)))

        starts = [(i, j) for i, g in enumerate(gens) for j in range(len(g))]
        table = _determinize(k, nxt, starts)
    else:
        adj = {}
        for s, d, a in spec.edges:
            adj.setdefault((s, sym_index(a)), []).append(d)
        table = _determinize(k, lambda s, a: adj.get((s, a), ()), list(spec.vertices))
    table = _trim(table)
    return LanguageAutomaton(k, _minimize(table, k), spec.kind)


def as_oracle(obj) -> LanguageAutomaton:
    return obj if isinstance(obj, LanguageAutomaton) else compile_oracle(obj)


def is_admissible(oracle, u: str) -> bool:
    return as_oracle(oracle).accepts(u)


def enumerate_words(oracle, n: int) -> list[str]:
    """All admissible words of length ``n`` in lexicographic order."""
    dfa = as_oracle(oracle)
    if n < 0:
        raise ValueError("n must be >= 0")
    out = []
    tr = dfa.trans
    letters = [sym(a) for a in range(dfa.k)]

    def rec(q, prefix, depth):
        if depth == n:
            out.append(prefix)
            return
        for a, t in enumerate(tr[q]):
            if t >= 0:
                rec(t, prefix + letters[a], depth + 1)

    rec(0, "", 0)
    return out


def count_words(oracle, n: int) -> int:
    """``|L_n|`` by dynamic programming over the automaton."""
    dfa = as_oracle(oracle)
    counts = [1] * dfa.n_states
    for _ in range(n):
        counts = [sum(counts[t] for t in row if t >= 0) for row in dfa.trans]
    return counts[0]


def words_up_to(oracle, n: int) -> list[str]:
    out = []
    for m in range(n + 1):
        out.extend(enumerate_words(oracle, m))
    return out


def _exact_steps_to(dfa, goal: set, m_max: int):
    """``layers[m]`` = states reaching ``goal`` in exactly ``m`` steps."""
    layers = [set(goal)]
    for _ in range(m_max):
        prev = layers[-1]
        layers.append({q for q, row in enumerate(dfa.trans) if any(t in prev for t in row if t >= 0)})
    return layers


def connect_from_state(dfa, q: int, v: str, m_max: int):
    """Shortest, then lexicographically least ``w`` with ``w v`` readable from ``q``."""
    goal = {p for p in range(dfa.n_states) if dfa.run(p, v) >= 0}
    layers = _exact_steps_to(dfa, goal, m_max)
    for m in range(m_max + 1):
        if q in layers[m]:
            w = []
            cur = q
            for left in range(m, 0, -1):
                for a, t in enumerate(dfa.trans[cur]):
                    if t >= 0 and t in layers[left - 1]:
                        w.append(sym(a))
                        cur = t
                        break
            return "".join(w)
    return None


def connect_words(oracle, u: str, v: str, m_max: int):
    """Connector ``w`` with ``|w| <= m_max`` and ``u w v`` admissible, or ``None``."""
    dfa = as_oracle(oracle)
    if not dfa.accepts(u) or not dfa.accepts(v):
        raise ArtifactError("INADMISSIBLE_ENDPOINT", f"{u!r} / {v!r}")
    return connect_from_state(dfa, dfa.run(0, u), v, m_max)


def _reach_with_words(dfa, depth):
    """States reachable from start within ``depth`` symbols, with a shortest lex-least word."""
    rep = {0: ""}
    frontier = [0]
    for _ in range(depth):
        nxt = []
        for q in frontier:
            for a, t in enumerate(dfa.trans[q]):
                if t >= 0 and t not in rep:
                    rep[t] = rep[q] + sym(a)
                    nxt.append(t)
        frontier = nxt
    return rep


def _right_classes(dfa, max_len):
    """Group words with ``|v| <= max_len`` by the set of states that can read them."""
    classes = {}
    n = dfa.n_states
    tr = dfa.trans

    def rec(word, cur):
        key = frozenset(q for q in range(n) if cur[q] >= 0)
        if not key:
            return
        if key not in classes or len(word) < len(classes[key]):
            classes[key] = word
        if len(word) == max_len:
            return
        for a in range(dfa.k):
            nxt = tuple(tr[s][a] if s >= 0 else -1 for s in cur)
            if any(s >= 0 for s in nxt):
                rec(word + sym(a), nxt)

    rec("", tuple(range(n)))
    return classes


def _distance_to(dfa, targets):
    """Shortest path length from each state into ``targets``."""
    rev = {}
    for q, row in enumerate(dfa.trans):
        for t in row:
            if t >= 0:
                rev.setdefault(t, set()).add(q)
    dist = {t: 0 for t in targets}
    dq = deque(targets)
    while dq:
        t = dq.popleft()
        for p in rev.get(t, ()):
            if p not in dist:
                dist[p] = dist[t] + 1
                dq.append(p)
    return dist


def gap_table(oracle, l_max: int):
    """Exact minimal connector length for every class of pairs ``|u|, |v| <= l_max``.

    Returns a list of ``(u, v, gap)`` with ``gap = None`` when no connector of
    any length exists.
    """
    dfa = as_oracle(oracle)
    left = _reach_with_words(dfa, l_max)
    right = _right_classes(dfa, l_max)
    rows = []
    for pset, v in sorted(right.items(), key=lambda kv: (len(kv[1]), kv[1])):
        dist = _distance_to(dfa, pset)
        for q, u in sorted(left.items(), key=lambda kv: (len(kv[1]), kv[1])):
            rows.append((u, v, dist.get(q)))
    return rows


def check_svgl(spec, m_max: int, l_max: int) -> Verdict:
    """Bounded variable-gap specification check."""
    dfa = as_oracle(spec)
    rows = gap_table(dfa, l_max)
    never = [(u, v) for u, v, g in rows if g is None]
    if never:
        return refuted(never[0], reason="no connector of any length exists")
    worst = max((g for _, _, g in rows), default=0)
    failing = [(u, v, g) for u, v, g in rows if g > m_max]
    if failing:
        hist = {}
        for _, _, g in failing:
            hist[g] = hist.get(g, 0) + 1
        failing.sort(key=lambda r: (-r[2], len(r[0]) + len(r[1]), r[0], r[1]))
        return unknown(gap_histogram=dict(sorted(hist.items())), worst_pairs=failing[:8], max_gap=worst, m_max=m_max)
    return verified(l_max, M=worst)


def is_irreducible(spec, l_max: int) -> Verdict:
    """Exact for graph specs via strong connectivity; otherwise a bounded probe."""
    if isinstance(spec, ShiftSpec) and spec.kind == "graph":
        import networkx as nx

        g = nx.MultiDiGraph()
        g.add_nodes_from(spec.vertices)
        g.add_edges_from((s, d) for s, d, _ in spec.edges)
        if nx.is_strongly_connected(g):
            return verified(None, reason="presentation strongly connected")
        comps = sorted(sorted(c) for c in nx.strongly_connected_components(g))
        return refuted((comps[-1][0], comps[0][0]), reason="vertices in different strong components")
    dfa = as_oracle(spec)
    rows = gap_table(dfa, l_max)
    for u, v, g in rows:
        if g is None:
            return refuted((u, v), reason="no connector of any length exists")
    return verified(l_max, max_gap=max((g for *_, g in rows), default=0))


def _bounded_classes(dfa, rounds):
    cls = [0] * dfa.n_states
    for _ in range(rounds):
        sigs = {}
        cls = [sigs.setdefault((cls[q],) + tuple(cls[t] if t >= 0 else -1 for t in row), len(sigs))
               for q, row in enumerate(dfa.trans)]
    return cls


def find_synchronizing_word(spec, l_max: int):
    """Shortest lex-least ``w`` whose left contexts (length <= l_max) never change its followers."""
    dfa = as_oracle(spec)
    reach = list(_reach_with_words(dfa, l_max))
    cls = _bounded_classes(dfa, l_max)
    for n in range(l_max + 1):
        for w in enumerate_words(dfa, n):
            target = cls[dfa.run(0, w)]
            ok = True
            for q in reach:
                t = dfa.run(q, w)
                if t >= 0 and cls[t] != target:
                    ok = False
                    break
            if ok:
                return w
    return None


def weight_range(oracle, weights: Sequence[int]):
    """Infimum and supremum of the symbol-weight sum over all admissible words.

    ``None`` marks an unbounded side. Exact: a side is unbounded iff a cycle
    of that sign is reachable.
    """
    dfa = as_oracle(oracle)
    n = dfa.n_states

    def extreme(sign):
        best = [None] * n
        best[0] = 0
        for it in range(n + 1):
            changed = False
            for q in range(n):
                if best[q] is None:
                    continue
                for a, t in enumerate(dfa.trans[q]):
                    if t < 0:
                        continue
                    val = best[q] + sign * weights[a]
                    if best[t] is None or val > best[t]:
                        best[t] = val
                        changed = True
            if not changed:
                return max(b for b in best if b is not None)
        return None

    hi = extreme(1)
    lo = extreme(-1)
    return (None if lo is None else -lo, hi)


# ----------------------------------------------------------------- recoding

def higher_block(spec: ShiftSpec, n_block: int) -> ShiftSpec:
    """N-block recoding; block symbol ``i`` is the i-th word of ``L_N`` in lex order."""
    if n_block < 1:
        raise ValueError("N must be >= 1")
    dfa = compile_oracle(spec)
    blocks = enumerate_words(dfa, n_block)
    if not blocks:
        raise ArtifactError("EMPTY_LANGUAGE", f"L_{n_block} is empty")
    if n_block == 1 and spec.kind == "full":
        return spec
    index = {b: i for i, b in enumerate(blocks)}
    kb = len(blocks)
    if spec.kind in ("full", "sft"):
        m = max((len(f) for f in spec.forbidden), default=0)
        r = max(2, m - n_block + 1)
        allowed = {tuple(index[w[i:i + n_block]] for i in range(r)) for w in enumerate_words(dfa, n_block + r - 1)}
        forb = []
        for tup in itertools.product(range(kb), repeat=r):
            if tup not in allowed:
                forb.append("".join(sym(i) for i in tup))
        return ShiftSpec("sft", kb, forbidden=tuple(forb), name=f"{spec.name}^[{n_block}]")
    keep = n_block - 1
    verts = {}
    edges = []
    dq = deque()
    for x in enumerate_words(dfa, keep):
        v = (dfa.run(0, x), x)
        if v not in verts:
            verts[v] = len(verts)
            dq.append(v)
    while dq:
        q, s = dq.popleft()
        for a, t in enumerate(dfa.trans[q]):
            if t < 0:
                continue
            b = s + sym(a)
            nv = (t, b[1:] if keep else "")
            if nv not in verts:
                verts[nv] = len(verts)
                dq.append(nv)
            edges.append((verts[(q, s)], verts[nv], sym(index[b])))
    alive = set(verts.values())
    while True:
        outs = {s for s, d, _ in edges if s in alive and d in alive}
        ins = {d for s, d, _ in edges if s in alive and d in alive}
        nxt = alive & outs & ins
        if nxt == alive:
            break
        alive = nxt
    edges = [(f"v{s}", f"v{d}", a) for s, d, a in edges if s in alive and d in alive]
    names = [f"v{i}" for i in sorted(alive)]
    return ShiftSpec("graph", kb, vertices=tuple(names), edges=tuple(edges), name=f"{spec.name}^[{n_block}]")


def block_projection(spec: ShiftSpec, n_block: int) -> Callable[[str], str]:
    """Inverse of the N-block recoding on words: overlap the blocks back together."""
    blocks = enumerate_words(compile_oracle(spec), n_block)

    def project(word: str) -> str:
        if not word:
            return ""
        bs = [blocks[sym_index(c)] for c in word]
        return bs[0] + "".join(b[-1] for b in bs[1:])

    return project


@dataclass(frozen=True)
class SlidingBlockCode:
    """Block map ``table`` from ``(memory + anticipation + 1)``-windows to output symbols."""

    memory: int
    anticipation: int
    table: dict = field(hash=False)
    source: ShiftSpec | None = None

    @property
    def window(self) -> int:
        return self.memory + self.anticipation + 1


def apply_sliding_block(code: SlidingBlockCode, word: str, oracle=None) -> str:
    w = code.window
    if len(word) < w:
        raise ArtifactError("INPUT_TOO_SHORT", f"need at least {w} symbols")
    dfa = None
    if oracle is not None:
        dfa = as_oracle(oracle)
    elif code.source is not None:
        dfa = compile_oracle(code.source)
    out = []
    for i in range(len(word) - w + 1):
        win = word[i:i + w]
        if win not in code.table or (dfa is not None and not dfa.accepts(win)):
            raise ArtifactError("WINDOW_INADMISSIBLE", repr(win))
        out.append(code.table[win])
    return "".join(out)


def identity_code(k: int = 2) -> SlidingBlockCode:
    return SlidingBlockCode(0, 0, {sym(i): sym(i) for i in range(k)})


# ------------------------------------------------------------------ streams

class SigmaStream:
    """Lazily materialized driving sequence.

    Parameters
    ----------
    kind : str
        Generator name, echoed in reports.
    chunks : callable
        Zero-argument factory returning an iterator of string chunks.
    length : int or None
        Total length for finite streams; ``None`` for infinite ones.
    params : dict
        Constructor arguments, for reports.
    """

    def __init__(self, kind: str, chunks: Callable[[], Iterator[str]], length: int | None = None,
                 params: dict | None = None, period: int | None = None):
        self.kind = kind
        self.params = params or {}
        self.length = length
        self.period = period
        self._factory = chunks
        self._it = chunks()
        self._buf: list[str] = []
        self._cache = ""
        self._size = 0
        self._done = False

    def _fill(self, n: int):
        while self._size < n and not self._done:
            try:
                c = next(self._it)
            except StopIteration:
                self._done = True
                break
            self._buf.append(c)
            self._size += len(c)
        if self._buf:
            self._cache += "".join(self._buf)
            self._buf = []

    def prefix(self, n: int) -> str:
        if self.length is not None and n > self.length:
            raise ArtifactError("STREAM_EXHAUSTED", f"stream {self.kind} has only {self.length} symbols")
        if self._size < n:
            self._fill(n)
        if self._size < n:
            raise ArtifactError("STREAM_EXHAUSTED", f"stream {self.kind} ended at {self._size}")
        return self._cache[:n]

    def available(self) -> int | None:
        return self.length

    def __repr__(self):
        return f"SigmaStream({self.kind}, {self.params})"


def periodic_stream(word: str) -> SigmaStream:
    def chunks():
        while True:
            yield word * 64

    return SigmaStream("periodic", chunks, params={"word": word}, period=len(word))


def finite_stream(word: str, kind: str = "word") -> SigmaStream:
    return SigmaStream(kind, lambda: iter([word]), length=len(word), params={"length": len(word)})


def gen_transitive_stream(spec, l_max: int | None = None) -> SigmaStream:
    """Concatenate every word of each length, joined by shortest connectors.

    For the full shift the connectors are empty and the stream is
    ``v'_1 v'_2 ...`` with ``v'_i`` the lexicographic concatenation of ``L_i``.
    """
    dfa = as_oracle(spec)
    if isinstance(spec, ShiftSpec) and spec.kind == "graph":
        if not is_irreducible(spec, 1).verified:
            raise ArtifactError("NOT_IRREDUCIBLE", spec.name)
    limit = dfa.n_states + 1

    def chunks():
        q = 0
        n = 1
        while l_max is None or n <= l_max:
            for w in enumerate_words(dfa, n):
                c = connect_from_state(dfa, q, w, limit)
                if c is None:
                    raise ArtifactError("NOT_IRREDUCIBLE", f"cannot reach {w!r}")
                q = dfa.run(q, c + w)
                yield c + w
            n += 1

    return SigmaStream("transitive", chunks, params={"spec": getattr(spec, "name", "")})


def gen_sigma0(w0: str, w1: str) -> SigmaStream:
    """``w0^1 w1^2 w0^3 w1^4 ...``: exponent n uses w0 for odd n, w1 for even n."""
    if len(w0) != len(w1):
        raise ArtifactError("LENGTH_MISMATCH", f"|{w0}| != |{w1}|")

    def chunks():
        n = 1
        while True:
            yield (w0 if n % 2 else w1) * n
            n += 1

    return SigmaStream("sigma0", chunks, params={"w0": w0, "w1": w1})


def permutation_blocks(m: int) -> Iterator[str]:
    """All orderings of ``L_m`` of the binary full shift, lexicographic by permutation."""
    words = list(all_words(2, m))
    for perm in itertools.permutations(words):
        yield "".join(perm)


def gen_permutation_stream(m_max: int) -> SigmaStream:
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    total = sum(math.factorial(2 ** m) * m * 2 ** m for m in range(1, m_max + 1))

    def chunks():
        for m in range(1, m_max + 1):
            yield from permutation_blocks(m)

    return SigmaStream("permutation", chunks, length=total, params={"m_max": m_max})


def gen_leftdrift_stream() -> SigmaStream:
    """``1^{|w_1|} w_1 1^{|w_2|} w_2 ...`` with ``w_i`` all binary i-words concatenated."""

    def chunks():
        i = 1
        while True:
            w = "".join(all_words(2, i))
            yield "1" * len(w) + w
            i += 1

    return SigmaStream("leftdrift", chunks)


def sample_walk(spec, length: int, seed: int) -> SigmaStream:
    """Uniform successor choice on the language automaton."""
    dfa = as_oracle(spec)
    rng = np.random.default_rng(seed)
    out = []
    q = 0
    for _ in range(length):
        succ = dfa.successors(q)
        if not succ:
            raise ArtifactError("DEAD_END", f"state {q}")
        a, q = succ[int(rng.integers(len(succ)))]
        out.append(sym(a))
    word = "".join(out)
    s = finite_stream(word, "walk")
    s.params = {"length": length, "seed": seed}
    return s


# ------------------------------------------------------------------- Parry

@dataclass(frozen=True)
class EdgeGraph:
    n_vertices: int
    edges: tuple  # (src, dst, symbol index)


def graph_presentation(spec: ShiftSpec) -> EdgeGraph:
    """Irreducible labeled graph presenting ``spec``."""
    if spec.kind == "full":
        return EdgeGraph(1, tuple((0, 0, a) for a in range(spec.k)))
    if spec.kind == "graph":
        names = {v: i for i, v in enumerate(spec.vertices)}
        g = EdgeGraph(len(names), tuple((names[s], names[d], sym_index(a)) for s, d, a in spec.edges))
        if not is_irreducible(spec, 1).verified:
            raise ArtifactError("NOT_GRAPH_PRESENTABLE", "presentation is not irreducible")
        return g
    if spec.kind == "coded":
        edges = []
        nv = 1
        for g in spec.generators:
            prev = 0
            for j, c in enumerate(g):
                if j == len(g) - 1:
                    nxt = 0
                else:
                    nxt = nv
                    nv += 1
                edges.append((prev, nxt, sym_index(c)))
                prev = nxt
        return EdgeGraph(nv, tuple(edges))
    import networkx as nx

    dfa = compile_oracle(spec)
    g = nx.DiGraph()
    g.add_nodes_from(range(dfa.n_states))
    for q, row in enumerate(dfa.trans):
        for t in row:
            if t >= 0:
                g.add_edge(q, t)
    comps = [c for c in nx.strongly_connected_components(g) if len(c) > 1 or any(g.has_edge(q, q) for q in c)]
    if len(comps) != 1:
        raise ArtifactError("NOT_GRAPH_PRESENTABLE", "no unique recurrent component")
    comp = sorted(comps[0])
    idx = {q: i for i, q in enumerate(comp)}
    edges = tuple((idx[q], idx[t], a) for q in comp for a, t in enumerate(dfa.trans[q]) if t in idx)
    return EdgeGraph(len(comp), edges)


def parry_chain(graph: EdgeGraph):
    """Maximal-entropy edge probabilities and stationary vertex weights."""
    n = graph.n_vertices
    a = np.zeros((n, n))
    for s, d, _ in graph.edges:
        a[s, d] += 1.0
    vals, right = np.linalg.eig(a)
    i = int(np.argmax(vals.real))
    lam = float(vals[i].real)
    r = np.abs(right[:, i].real)
    vals_l, left = np.linalg.eig(a.T)
    j = int(np.argmax(vals_l.real))
    l = np.abs(left[:, j].real)
    probs = np.array([r[d] / (lam * r[s]) for s, d, _ in graph.edges])
    pi = l * r
    pi = pi / pi.sum()
    return lam, probs, pi


def sample_markov(spec: ShiftSpec, length: int, seed: int, use_numba=None) -> SigmaStream:
    """Sample the Parry chain of the graph presentation; seeded and reproducible."""
    if not isinstance(spec, ShiftSpec):
        raise ArtifactError("NOT_GRAPH_PRESENTABLE", "needs a ShiftSpec")
    graph = graph_presentation(spec)
    _, probs, pi = parry_chain(graph)
    order = sorted(range(len(graph.edges)), key=lambda e: (graph.edges[e][0], e))
    offsets = np.zeros(graph.n_vertices + 1, dtype=np.int64)
    for e in order:
        offsets[graph.edges[e][0] + 1] += 1
    offsets = np.cumsum(offsets)
    cum = np.empty(len(order))
    targets = np.empty(len(order), dtype=np.int64)
    labels = np.empty(len(order), dtype=np.int64)
    for pos, e in enumerate(order):
        s, d, a = graph.edges[e]
        cum[pos] = probs[e]
        targets[pos] = d
        labels[pos] = a
    for v in range(graph.n_vertices):
        lo, hi = offsets[v], offsets[v + 1]
        cum[lo:hi] = np.cumsum(cum[lo:hi])
    rng = np.random.default_rng(seed)
    u = rng.random(length + 1)
    v0 = int(np.searchsorted(np.cumsum(pi), u[0], side="right"))
    v0 = min(v0, graph.n_vertices - 1)
    out = _kernels.markov_walk(offsets, cum, targets, labels, v0, u[1:], use_numba=use_numba)
    word = "".join(sym(int(x)) for x in out)
    s = finite_stream(word, "markov")
    s.params = {"length": length, "seed": seed, "spec": spec.name}
    return s


def entropy_estimate(oracle, n: int) -> float:
    if n < 1:
        raise ValueError("n must be >= 1")
    c = count_words(oracle, n)
    if c == 0:
        raise ArtifactError("EMPTY_LANGUAGE", f"L_{n} is empty")
    return math.log2(c) / n
