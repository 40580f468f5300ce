"""Pseudobracket calculus: certificates, elementary operations, verifier,
diagram construction from accepted sequences, and a bounded exhaustive search.

Brackets are int tuples: 6-tuples (b1..b6) over free products of cyclics,
4-tuples (b1..b4) over Baumslag-Solitar presentations.  A system is a
sorted tuple of brackets with pairwise non-overlapping arcs.  Elementary
operations are pure: apply_op returns the successor system or raises
OpError naming the violated side condition.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import diagram as dgm
from .diagram import Diagram
from .words import (
    INF,
    ZERO,
    BaumslagSolitar,
    Cost,
    CyclicProducts,
    Presentation,
    Word,
)

Bracket = tuple[int, ...]
System = tuple[Bracket, ...]
Target = tuple[int, int]

C_SIZE = 1.0 / math.log2(6 / 5)


class OpError(ValueError):
    def __init__(self, code: str, detail: str = ""):
        super().__init__(f"{code}: {detail}" if detail else code)
        self.code = code


class SearchBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class SizeBound:
    k1: int
    k2: int


def default_size_bound(w: Word, p: Presentation) -> SizeBound:
    n = len(w)
    if n < 1:
        raise ValueError("size bound needs a nonempty word")
    if isinstance(p, CyclicProducts):
        return SizeBound(11 * n, math.ceil(C_SIZE * (math.log2(n) + 1)))
    nbar = n - w.count_gen(1)
    logterm = 0.0 if nbar == 0 else math.log2(nbar)
    return SizeBound(7 * n, math.ceil(C_SIZE * (logterm + 1)))


# -- elementary operations ---------------------------------------------------


@dataclass(frozen=True)
class Add:
    vertex: int


@dataclass(frozen=True)
class Ext1Left:
    target: Target


@dataclass(frozen=True)
class Ext1Right:
    target: Target


@dataclass(frozen=True)
class Ext2Left:
    target: Target


@dataclass(frozen=True)
class Ext2Right:
    target: Target


@dataclass(frozen=True)
class Ext2BS:
    target: Target


@dataclass(frozen=True)
class Ext3:
    target: Target


@dataclass(frozen=True)
class Turn:
    target: Target
    generator: int
    exponent: int | None = None  # planned face boundary length, default n_j


@dataclass(frozen=True)
class Merge:
    left: Target
    right: Target


ElemOp = Add | Ext1Left | Ext1Right | Ext2Left | Ext2Right | Ext2BS | Ext3 | Turn | Merge


def is_pb2(b: Bracket) -> bool:
    return len(b) == 6 and b[2] != 0


def _check_system(brackets: Iterable[Bracket]) -> System:
    out = tuple(sorted(brackets))
    for prev, cur in zip(out, out[1:]):
        if prev[1] > cur[0]:
            raise OpError("overlap-created", f"{prev} overlaps {cur}")
        if prev[0] == prev[1] == cur[0] == cur[1]:
            raise OpError("overlap-created", f"coincident zero-length arcs at {prev[0]}")
    return out


def _find(system: System, target: Target) -> Bracket:
    for b in system:
        if (b[0], b[1]) == target:
            return b
    raise OpError("target-missing", f"no bracket with arc {target}")


def apply_op(system: System, op: ElemOp, w: Word, p: Presentation) -> System:
    """Apply one elementary operation; pure, raises OpError on violations."""
    if isinstance(p, CyclicProducts):
        return _apply_g2(system, op, w, p)
    return _apply_bs(system, op, w, p)


def _replace(system: System, old: Sequence[Bracket], new: Bracket) -> System:
    rest = [b for b in system if all(b is not o for o in old)]
    return _check_system(rest + [new])


def _edge(w: Word, pos: int) -> int:
    """Letter of the edge pos -> pos+1 of the model path."""
    return w[pos]


def _apply_g2(system: System, op: ElemOp, w: Word, p: CyclicProducts) -> System:
    n = len(w)
    if isinstance(op, Add):
        if not 0 <= op.vertex <= n:
            raise OpError("side-condition-violated", "vertex outside the word")
        return _check_system(system + ((op.vertex, op.vertex, 0, 0, 0, 0),))
    if isinstance(op, Merge):
        b = _find(system, op.left)
        c = _find(system, op.right)
        if b[1] != c[0]:
            raise OpError("side-condition-violated", "arcs are not adjacent")
        if b[2] != 0 and c[2] != 0:
            raise OpError("side-condition-violated", "merger needs a PB1 side")
        merged = (b[0], c[1], b[2] + c[2], b[3] + c[3], b[4] + c[4], b[5] + c[5])
        if merged[5] > n:
            raise OpError("side-condition-violated", "face count exceeds |W|")
        return _replace(system, (b, c), merged)
    if isinstance(op, Turn):
        b = _find(system, op.target)
        if is_pb2(b):
            raise OpError("side-condition-violated", "turn applies to PB1 only")
        j = op.generator
        if not 1 <= j <= p.m or p.exponent_set(j).kind == ZERO:
            raise OpError("side-condition-violated", "turn needs E_j != {0}")
        n4 = op.exponent if op.exponent is not None else p.exponent_set(j).n
        if not (0 < n4 <= n) or not p.exponent_set(j).contains(n4):
            raise OpError("side-condition-violated", "exponent outside E_j or |W|")
        return _replace(system, (b,), (b[0], b[1], j, n4, b[4], b[5]))
    b = _find(system, op.target)
    if isinstance(op, Ext3):
        if is_pb2(b):
            raise OpError("side-condition-violated", "type-3 extension needs PB1")
        if b[0] < 1 or b[1] >= n:
            raise OpError("side-condition-violated", "no surrounding edges")
        if _edge(w, b[0] - 1) != -_edge(w, b[1]):
            raise OpError("side-condition-violated", "surrounding edges do not cancel")
        return _replace(system, (b,), (b[0] - 1, b[1] + 1, 0, 0, 0, b[5]))
    if not is_pb2(b):
        raise OpError("side-condition-violated", "extension type 1/2 needs PB2")
    left = isinstance(op, (Ext1Left, Ext2Left))
    pos = b[0] - 1 if left else b[1]
    if pos < 0 or pos >= n:
        raise OpError("side-condition-violated", "no edge beyond the arc")
    letter = _edge(w, pos)
    if abs(letter) != b[2]:
        raise OpError("side-condition-violated", "edge is over a different generator")
    eps = 1 if letter > 0 else -1
    if eps * b[4] < 0:
        raise OpError("side-condition-violated", "edge sign fights the partial power")
    if isinstance(op, (Ext1Left, Ext1Right)):
        if abs(b[4]) > b[3] - 2:
            raise OpError("side-condition-violated", "partial power already full")
        nb = (b[0] - 1, b[1], b[2], b[3], b[4] + eps, b[5]) if left else (
            b[0], b[1] + 1, b[2], b[3], b[4] + eps, b[5])
        return _replace(system, (b,), nb)
    if abs(b[4]) != b[3] - 1:
        raise OpError("side-condition-violated", "face not ready to close")
    if b[5] + 1 > n:
        raise OpError("side-condition-violated", "face count exceeds |W|")
    nb = (b[0] - 1, b[1], 0, 0, 0, b[5] + 1) if left else (b[0], b[1] + 1, 0, 0, 0, b[5] + 1)
    return _replace(system, (b,), nb)


def _apply_bs(system: System, op: ElemOp, w: Word, p: BaumslagSolitar) -> System:
    n = len(w)
    if isinstance(op, Add):
        if not 0 <= op.vertex <= n:
            raise OpError("side-condition-violated", "vertex outside the word")
        return _check_system(system + ((op.vertex, op.vertex, 0, 0),))
    if isinstance(op, Merge):
        b = _find(system, op.left)
        c = _find(system, op.right)
        if b[1] != c[0]:
            raise OpError("side-condition-violated", "arcs are not adjacent")
        return _replace(system, (b, c), (b[0], c[1], b[2] + c[2], b[3] + c[3]))
    b = _find(system, op.target)
    if isinstance(op, (Ext1Left, Ext1Right)):
        left = isinstance(op, Ext1Left)
        pos = b[0] - 1 if left else b[1]
        if pos < 0 or pos >= n:
            raise OpError("side-condition-violated", "no edge beyond the arc")
        letter = _edge(w, pos)
        if abs(letter) != 1:
            raise OpError("side-condition-violated", "type-1 extension needs an a1-edge")
        eps = 1 if letter > 0 else -1
        nb = (b[0] - 1, b[1], b[2] + eps, b[3]) if left else (b[0], b[1] + 1, b[2] + eps, b[3])
        return _replace(system, (b,), nb)
    if b[0] < 1 or b[1] >= n:
        raise OpError("side-condition-violated", "no surrounding edges")
    e1, e2 = _edge(w, b[0] - 1), _edge(w, b[1])
    if isinstance(op, Ext2BS):
        if abs(e1) != 2 or e1 != -e2:
            raise OpError("side-condition-violated", "needs a2^eps ... a2^-eps around the arc")
        if b[2] == 0:
            raise OpError("side-condition-violated", "type-2 extension needs b(3) != 0")
        eps = 1 if e1 > 0 else -1
        n_in, n_out = (p.n1, p.n2) if eps == 1 else (p.n2, p.n1)
        if b[2] % n_in != 0:
            raise OpError("side-condition-violated", f"b(3) not divisible by {n_in}")
        k = b[2] // n_in
        return _replace(
            system, (b,), (b[0] - 1, b[1] + 1, k * n_out, b[3] + abs(k))
        )
    if isinstance(op, Ext3):
        if abs(e1) < 2 or e1 != -e2:
            raise OpError("side-condition-violated", "needs cancelling non-a1 edges")
        if b[2] != 0:
            raise OpError("side-condition-violated", "type-3 extension needs b(3) = 0")
        return _replace(system, (b,), (b[0] - 1, b[1] + 1, b[2], b[3]))
    raise OpError("side-condition-violated", f"operation {op!r} undefined over this presentation")


# -- serialization -----------------------------------------------------------


def op_to_line(op: ElemOp) -> str:
    if isinstance(op, Add):
        return f"add {op.vertex}"
    if isinstance(op, Turn):
        base = f"turn {op.target[0]} {op.target[1]} {op.generator}"
        return base if op.exponent is None else f"{base} {op.exponent}"
    if isinstance(op, Merge):
        return f"merge {op.left[0]} {op.left[1]} {op.right[0]} {op.right[1]}"
    name = {
        Ext1Left: "ext1l",
        Ext1Right: "ext1r",
        Ext2Left: "ext2l",
        Ext2Right: "ext2r",
        Ext2BS: "ext2",
        Ext3: "ext3",
    }[type(op)]
    return f"{name} {op.target[0]} {op.target[1]}"


def op_from_line(line: str) -> ElemOp:
    parts = line.split()
    if not parts:
        raise ValueError("empty certificate line")
    kind, args = parts[0], [int(x) for x in parts[1:]]
    if kind == "add" and len(args) == 1:
        return Add(args[0])
    if kind == "turn" and len(args) in (3, 4):
        return Turn((args[0], args[1]), args[2], args[3] if len(args) == 4 else None)
    if kind == "merge" and len(args) == 4:
        return Merge((args[0], args[1]), (args[2], args[3]))
    table = {
        "ext1l": Ext1Left,
        "ext1r": Ext1Right,
        "ext2l": Ext2Left,
        "ext2r": Ext2Right,
        "ext2": Ext2BS,
        "ext3": Ext3,
    }
    if kind in table and len(args) == 2:
        return table[kind]((args[0], args[1]))
    raise ValueError(f"bad certificate line: {line!r}")


def ops_to_text(ops: Iterable[ElemOp]) -> str:
    return "".join(op_to_line(op) + "\n" for op in ops)


def ops_from_text(text: str) -> list[ElemOp]:
    return [op_from_line(line) for line in text.splitlines() if line.strip()]


# -- verification ------------------------------------------------------------


@dataclass(frozen=True)
class FinalStats:
    accepted: bool
    faces: Cost
    max_concurrent: int


def _is_final(system: System, n: int) -> bool:
    if len(system) != 1:
        return False
    b = system[0]
    if (b[0], b[1]) != (0, n):
        return False
    return b[2] == 0 if len(b) == 4 else (b[2], b[3], b[4]) == (0, 0, 0)


def verify_sequence(w: Word, p: Presentation, ops: Sequence[ElemOp]) -> FinalStats:
    """Run ops from the empty system; accepted iff the result is final."""
    system: System = ()
    peak = 0
    for idx, op in enumerate(ops):
        try:
            system = apply_op(system, op, w, p)
        except OpError as err:
            raise OpError(err.code, f"step {idx}: {err}") from err
        peak = max(peak, len(system))
    if _is_final(system, len(w)):
        return FinalStats(True, system[0][-1], peak)
    return FinalStats(False, INF, peak)


# -- diagram construction from an accepted sequence --------------------------


class _Partial:
    """Diagram under replay: boundary = arc part followed by tail part."""

    __slots__ = ("dia", "arc_len")

    def __init__(self, dia: Diagram, arc_len: int):
        self.dia = dia
        self.arc_len = arc_len


def build_diagram(w: Word, p: Presentation, ops: Sequence[ElemOp]) -> Diagram:
    """Replay an accepted operation sequence into a disk diagram."""
    system: System = ()
    parts: dict[Target, _Partial] = {}
    g2 = isinstance(p, CyclicProducts)
    for idx, op in enumerate(ops):
        try:
            new_system = apply_op(system, op, w, p)
            _replay(parts, system, new_system, op, w, p, g2)
        except OpError as err:
            raise OpError(err.code, f"step {idx}: {err}") from err
        system = new_system
    if not _is_final(system, len(w)):
        raise OpError("sequence-rejected", "final system not reached")
    out = parts[(0, len(w))]
    dia = out.dia
    if dia.boundary_word() != w:
        raise OpError("sequence-rejected", "replayed boundary does not match the word")
    return dia


def _replay(
    parts: dict[Target, _Partial],
    system: System,
    new_system: System,
    op: ElemOp,
    w: Word,
    p: Presentation,
    g2: bool,
) -> None:
    if isinstance(op, Add):
        parts[(op.vertex, op.vertex)] = _Partial(dgm.empty_diagram(p), 0)
        return
    if isinstance(op, Turn):
        parts[op.target] = parts.pop(op.target)
        return
    if isinstance(op, Merge):
        b = _find(system, op.left)
        c = _find(system, op.right)
        left, right = parts.pop(op.left), parts.pop(op.right)
        key = (b[0], c[1])
        if g2:
            # one side has an empty tail; concatenate arcs, keep the other tail
            a, bb = left.dia, right.dia
            merged = dgm.glue(a, bb, left.arc_len, 0, 0)
            parts[key] = _Partial(merged, left.arc_len + right.arc_len)
            return
        b3, c3 = b[2], c[2]
        if b3 * c3 >= 0:
            merged = dgm.glue(left.dia, right.dia, left.arc_len, 0, 0)
            parts[key] = _Partial(merged, left.arc_len + right.arc_len)
            return
        m = min(abs(b3), abs(c3))
        if abs(b3) >= abs(c3):
            merged = dgm.glue(left.dia, right.dia, left.arc_len, right.arc_len, m)
        else:
            ib = right.arc_len + abs(c3) - m
            merged = dgm.glue(left.dia, right.dia, left.arc_len, ib, m)
        parts[key] = _Partial(merged, left.arc_len + right.arc_len)
        return
    b = _find(system, op.target)
    part = parts.pop(op.target)
    nb = next(x for x in new_system if x not in system)
    key = (nb[0], nb[1])
    if g2:
        _replay_g2(parts, part, b, op, w, p, key)
    else:
        _replay_bs(parts, part, b, op, w, p, key)


def _replay_g2(parts, part, b, op, w, p, key):
    dia, arc_len = part.dia, part.arc_len
    if isinstance(op, Ext3):
        letter = _edge(w, b[0] - 1)
        frame = dgm.spur(letter, p)
        parts[key] = _Partial(dgm.glue(frame, dia, 1, 0, 0), len(dia.boundary) + 2)
        return
    left = isinstance(op, (Ext1Left, Ext2Left))
    pos = b[0] - 1 if left else b[1]
    letter = _edge(w, pos)
    frame = dgm.spur(letter, p)
    if left:
        # boundary becomes [f][arc][tail][f^-1]
        out = dgm.glue(frame, dia, 1, 0, 0)
        new_arc = arc_len + 1
    else:
        # boundary becomes [arc][f][f^-1][tail]
        out = dgm.glue(dia, frame, arc_len, 0, 0)
        new_arc = arc_len + 1
    if isinstance(op, (Ext1Left, Ext1Right)):
        parts[key] = _Partial(out, new_arc)
        return
    # type 2: the tail darts plus the new edge close into a face
    tail_len = len(out.boundary) - new_arc
    out = dgm.close_face(out, new_arc, tail_len)
    parts[key] = _Partial(out, len(out.boundary))


def _replay_bs(parts, part, b, op, w, p, key):
    dia, arc_len = part.dia, part.arc_len
    if isinstance(op, Ext3):
        letter = _edge(w, b[0] - 1)
        frame = dgm.spur(letter, p)
        parts[key] = _Partial(dgm.glue(frame, dia, 1, 0, 0), len(dia.boundary) + 2)
        return
    if isinstance(op, (Ext1Left, Ext1Right)):
        left = isinstance(op, Ext1Left)
        pos = b[0] - 1 if left else b[1]
        letter = _edge(w, pos)
        eps = 1 if letter > 0 else -1
        b3 = b[2]
        if eps * b3 >= 0:
            frame = dgm.spur(letter, p)
            if left:
                out = dgm.glue(frame, dia, 1, 0, 0)
            else:
                out = dgm.glue(dia, frame, arc_len, 0, 0)
            parts[key] = _Partial(out, arc_len + 1)
        elif left:
            # tail's last dart joins the arc at the front: rotate one step back
            out = dgm.rotate_basepoint(dia, len(dia.boundary) - 1)
            parts[key] = _Partial(out, arc_len + 1)
        else:
            # tail's first dart joins the arc at the back: pure re-partition
            parts[key] = _Partial(dia, arc_len + 1)
        return
    # Ext2BS: glue a band on the tail, then rotate the fresh rung to the front
    e1 = _edge(w, b[0] - 1)
    eps = 1 if e1 > 0 else -1
    n_in, n_out = (p.n1, p.n2) if eps == 1 else (p.n2, p.n1)
    sgn = 1 if b[2] // n_in > 0 else -1
    k = abs(b[2] // n_in)
    strip = dgm.band(k, sgn * n_in, sgn * n_out, eps, p)
    out = dgm.glue(dia, strip, arc_len, 0, abs(b[2]))
    out = dgm.rotate_basepoint(out, len(out.boundary) - 1)
    parts[key] = _Partial(out, arc_len + 2)


# -- bounded exhaustive search ------------------------------------------------


def search_min_faces(
    w: Word,
    p: Presentation,
    bound: SizeBound | None = None,
    node_budget: int = 10_000_000,
) -> tuple[int, list[ElemOp]] | None:
    """Minimal face count over accepted sequences, with a witness.

    Returns None when the state space is exhausted without acceptance,
    raises SearchBudgetExceeded when the node budget runs out first.
    """
    n = len(w)
    if n == 0:
        return 0, []
    bound = bound or default_size_bound(w, p)
    g2 = isinstance(p, CyclicProducts)
    start: System = ()

    def strip(system: System) -> tuple:
        if g2:
            return tuple(b[:5] for b in system)
        return tuple(b[:3] for b in system)

    goal = (((0, n, 0, 0, 0),) if g2 else ((0, n, 0),))
    dist: dict[tuple, int] = {strip(start): 0}
    parent: dict[tuple, tuple] = {}
    heap: list[tuple[int, int, System]] = [(0, 0, start)]
    counter = 1
    popped = 0
    settled: set[tuple] = set()
    while heap:
        faces, _, system = heapq.heappop(heap)
        key = strip(system)
        if key in settled:
            continue
        settled.add(key)
        popped += 1
        if popped > node_budget:
            raise SearchBudgetExceeded(f"node budget {node_budget} exhausted")
        if key == goal:
            return faces, _walk_back(parent, key)
        for op, nxt in _successors(system, w, p, bound.k2, g2):
            nk = strip(nxt)
            if nk in settled:
                continue
            nf = sum(b[-1] for b in nxt)
            if g2 and nf > n:
                continue
            if nf < dist.get(nk, INF):
                dist[nk] = nf
                parent[nk] = (key, op, system)
                heapq.heappush(heap, (nf, counter, nxt))
                counter += 1
    return None


def _walk_back(parent: dict, key: tuple) -> list[ElemOp]:
    ops: list[ElemOp] = []
    while key in parent:
        key, op, _ = parent[key][0], parent[key][1], parent[key][2]
        ops.append(op)
    ops.reverse()
    return ops


def _successors(system: System, w: Word, p: Presentation, k2: int, g2: bool):
    n = len(w)
    out = []

    def attempt(op: ElemOp) -> None:
        try:
            nxt = apply_op(system, op, w, p)
        except OpError:
            return
        if len(nxt) <= k2:
            out.append((op, nxt))

    if len(system) < k2:
        covered = [False] * (n + 1)
        for b in system:
            for v in range(b[0] + 1, b[1]):
                covered[v] = True  # strictly inside an arc: overlap is certain
        for v in range(n + 1):
            if not covered[v]:
                attempt(Add(v))
    for b in system:
        t = (b[0], b[1])
        if g2:
            if b[2] == 0:
                attempt(Ext3(t))
                for j in range(1, p.m + 1):
                    es = p.exponent_set(j)
                    if es.kind == ZERO:
                        continue
                    for n4 in es.members_upto(n):
                        attempt(Turn(t, j, n4))
            else:
                attempt(Ext1Left(t))
                attempt(Ext1Right(t))
                attempt(Ext2Left(t))
                attempt(Ext2Right(t))
        else:
            attempt(Ext1Left(t))
            attempt(Ext1Right(t))
            attempt(Ext2BS(t))
            attempt(Ext3(t))
    for b in system:
        for c in system:
            if b is not c and b[1] == c[0]:
                attempt(Merge((b[0], b[1]), (c[0], c[1])))
    return out
