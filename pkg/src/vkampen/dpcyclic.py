"""Interval dynamic program for minimal face counts over free products of cyclics.

Cells are parameterized words: a window of the input word followed by a
single-generator power tail that collects letters rotated out of the
window.  Cells are evaluated by memoized descent; every recursion step
strictly decreases the pair (window length, |tail|) in lexicographic
order, so an explicit work stack suffices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from . import diagram as dgm
from .diagram import (
    BoundaryLengthSum,
    Diagram,
    FaceCount,
    FacesWithLabel,
    TauSpec,
)
from .words import (
    EXACTLY,
    INF,
    MULTIPLES,
    ZERO,
    Cost,
    CyclicProducts,
    ExponentSet,
    Word,
)

Key = tuple[int, int, int, int]  # (i, j, g, e): window start/len, tail gen/exp


def has_property_e(w: Word) -> bool:
    """Nonempty, and the first/last letters neither cancel nor coincide."""
    if not w:
        return False
    first, last = w[0], w[-1]
    return first != -last and first != last


class Mu2Solver:
    """Minimal-face-count table for one word over one presentation."""

    def __init__(self, w: Word, p: CyclicProducts):
        if w and w.max_generator() > p.m:
            raise ValueError("word uses generators outside the presentation")
        self.w = w
        self.p = p
        self.n = len(w)
        self.cost: dict[Key, Cost] = {}
        self.choice: dict[Key, tuple] = {}

    # cell helpers ---------------------------------------------------------

    def _canon(self, i: int, j: int, g: int, e: int) -> Key:
        if e == 0:
            g = 1
        if j == 0:
            i = 1
        return (i, j, g, e)

    def _letter(self, pos: int) -> int:
        return self.w[pos - 1]

    def power_cost(self, g: int, e: int) -> Cost:
        if e == 0:
            return 0
        es = self.p.exponent_set(g)
        if es.kind == ZERO or abs(e) % es.n != 0:
            return INF
        return 1 if es.kind == MULTIPLES else abs(e) // es.n

    # main evaluation ------------------------------------------------------

    def mu2(self) -> Cost:
        if self.n == 0:
            return 0
        return self.cell_cost((1, self.n, 1, 0))

    def _nf_row(self, i: int) -> list:
        """Persistent syllable stacks for all windows starting at position i."""
        rows = getattr(self, "_nf_rows", None)
        if rows is None:
            rows = self._nf_rows = {}
        row = rows.get(i)
        if row is not None:
            return row
        sets = self.p.sets
        node = None  # linked syllable stack: (gen, exp, parent)
        row = [None]
        for t in range(i - 1, self.n):
            x = self.w[t]
            gg, d = (x, 1) if x > 0 else (-x, -1)
            es = sets[gg - 1]
            if node is not None and node[0] == gg:
                ee = node[1] + d
                if es.kind != ZERO:
                    ee %= es.n
                node = node[2] if ee == 0 else (gg, ee, node[2])
            else:
                ee = d % es.n if es.kind != ZERO else d
                if ee != 0:
                    node = (gg, ee, node)
            row.append(node)
        rows[i] = row
        return row

    def _cell_trivial(self, i: int, j: int, g: int, e: int) -> bool:
        """Whether the cell's concrete word is trivial in the free product."""
        st = self._nf_row(i)[j]
        if e == 0:
            return st is None
        es = self.p.exponent_set(g)
        if st is None:
            return es.kind != ZERO and e % es.n == 0
        if st[2] is not None or st[0] != g:
            return False
        ee = st[1] + e
        if es.kind != ZERO:
            ee %= es.n
        return ee == 0

    def cell_cost(self, key: Key) -> Cost:
        memo = self.cost
        if key in memo:
            return memo[key]
        choice = self.choice
        w, power_cost = self.w, self.power_cost
        stack = [key]
        while stack:
            cur = stack[-1]
            if cur in memo:
                stack.pop()
                continue
            i, j, g, e = cur
            length = j + abs(e)
            tail_sign = 1 if e > 0 else -1
            first = w[i - 1] if j > 0 else tail_sign * g
            last = tail_sign * g if e != 0 else w[i + j - 2]
            if j == 0:
                memo[cur] = power_cost(g, e)
                choice[cur] = ("power",)
                stack.pop()
            elif length == 1:
                memo[cur] = power_cost(abs(first), 1 if first > 0 else -1)
                choice[cur] = ("power",)
                stack.pop()
            elif first == -last:
                child = (
                    self._canon(i + 1, j - 2, 1, 0)
                    if e == 0
                    else self._canon(i + 1, j - 1, g, e - tail_sign)
                )
                got = memo.get(child)
                if got is not None:
                    memo[cur] = got
                    choice[cur] = ("peel", child)
                    stack.pop()
                else:
                    stack.append(child)
            elif first == last:
                if e == 0:
                    child = (i + 1, j - 1, abs(first), 1 if first > 0 else -1)
                else:
                    child = (i + 1, j - 1, g, e + tail_sign)
                got = memo.get(child)
                if got is not None:
                    memo[cur] = got
                    choice[cur] = ("rot", child)
                    stack.pop()
                else:
                    stack.append(child)
            elif not self._cell_trivial(i, j, g, e):
                memo[cur] = INF
                choice[cur] = ("infeasible",)
                stack.pop()
            else:
                # trivial property-(E) cell: only cuts with a trivial prefix
                # can yield a finite total (the suffix is then trivial too)
                missing = False
                best: Cost = INF
                best_bp: tuple = ("stuck",)
                mget = memo.get
                push = stack.append
                row = self._nf_row(i)
                for c in range(1, length):
                    if c <= j:
                        if row[c] is not None:
                            continue
                        lk = (i, c, 1, 0)
                        rk = (i + c, j - c, g, e) if j != c else (1, 0, g, e)
                        lc = mget(lk)
                        rc = mget(rk)
                        if lc is None:
                            push(lk)
                            missing = True
                        if rc is None:
                            push(rk)
                            missing = True
                        if not missing:
                            total = lc + rc
                            if total < best:
                                best = total
                                best_bp = ("split", lk, rk)
                    else:
                        e1 = tail_sign * (c - j)
                        rcost = power_cost(g, e - e1)
                        if rcost == INF:
                            continue
                        lk = (i, j, g, e1)
                        lc = mget(lk)
                        if lc is None:
                            push(lk)
                            missing = True
                        elif not missing:
                            total = lc + rcost
                            if total < best:
                                best = total
                                best_bp = ("split_tail", lk, g, e - e1)
                if not missing:
                    memo[cur] = best
                    choice[cur] = best_bp
                    stack.pop()
        return memo[key]

    def table_size(self) -> int:
        return len(self.cost)

    # reconstruction -------------------------------------------------------

    def diagram(self) -> Diagram:
        """Minimal diagram for the whole word along the stored backpointers."""
        if self.n == 0:
            return dgm.empty_diagram(self.p)
        if self.mu2() == INF:
            raise ValueError("word is not trivial in the group")
        return self._assemble((1, self.n, 1, 0))

    def _assemble(self, key: Key) -> Diagram:
        built: dict[Key, Diagram] = {}
        stack = [key]
        while stack:  # memoized post-order over the backpointer dag
            cur = stack[-1]
            if cur in built:
                stack.pop()
                continue
            deps = [
                part
                for part in self.choice[cur][1:]
                if isinstance(part, tuple) and len(part) == 4 and part not in built
            ]
            if deps:
                stack.extend(deps)
            else:
                built[cur] = self._build_cell(cur, built)
                stack.pop()
        return built[key]

    def _cell_word(self, key: Key) -> Word:
        i, j, g, e = key
        tail = [g if e > 0 else -g] * abs(e)
        return Word(tuple(self.w[i - 1 : i - 1 + j]) + tuple(tail))

    def _leaf_diagram(self, letters: Word) -> Diagram:
        if not letters:
            return dgm.empty_diagram(self.p)
        g = abs(letters[0])
        es = self.p.exponent_set(g)
        if es.kind == MULTIPLES:
            return dgm.polygon(letters, self.p)
        out = dgm.polygon(letters[: es.n], self.p)
        for k in range(es.n, len(letters), es.n):
            out = dgm.wedge(out, dgm.polygon(letters[k : k + es.n], self.p))
        return out

    def _build_cell(self, key: Key, built: dict[Key, Diagram]) -> Diagram:
        bp = self.choice[key]
        kind = bp[0]
        if kind == "power":
            return self._leaf_diagram(self._cell_word(key))
        if kind == "peel":
            inner = built[bp[1]]
            letter = self._cell_word(key)[0]
            frame = dgm.spur(letter, self.p)
            return dgm.glue(frame, inner, 1, 0, 0)
        if kind == "rot":
            inner = built[bp[1]]
            return dgm.rotate_basepoint(inner, len(inner.boundary) - 1)
        if kind == "split":
            return dgm.wedge(built[bp[1]], built[bp[2]])
        if kind == "split_tail":
            right = self._leaf_diagram(self._cell_word(self._canon(1, 0, bp[2], bp[3])))
            return dgm.wedge(built[bp[1]], right)
        raise ValueError(f"no diagram for backpointer {bp!r}")


def mu2(w: Word, p: CyclicProducts) -> Cost:
    """Minimal number of faces of a disk diagram with boundary label w."""
    return Mu2Solver(w, p).mu2()


def bounded_wp(w: Word, n: int, p: CyclicProducts) -> bool:
    if n < 0:
        raise ValueError("n must be >= 0")
    return mu2(w, p) <= n


def precise_wp(w: Word, n: int, p: CyclicProducts) -> bool:
    if n < 0:
        raise ValueError("n must be >= 0")
    return mu2(w, p) == n


def _uniform_presentation(w: Word, m: int | None, kind: str) -> CyclicProducts:
    size = m if m is not None else max(w.max_generator(), 1)
    return CyclicProducts(tuple(ExponentSet(kind, 1) for _ in range(size)))


def width(w: Word, m: int | None = None) -> Cost:
    """Minimal number of conjugates of generator powers multiplying to w."""
    return mu2(w, _uniform_presentation(w, m, MULTIPLES))


def spelling_length(w: Word, m: int | None = None) -> Cost:
    """Minimal number of conjugates of single letters multiplying to w."""
    return mu2(w, _uniform_presentation(w, m, EXACTLY))


def minimal_diagram_cyclic(w: Word, p: CyclicProducts) -> Diagram:
    solver = Mu2Solver(w, p)
    solver.mu2()
    return solver.diagram()


# lexicographic extension ---------------------------------------------------

Tuple = tuple[int, ...]


class Mu2LexSolver:
    """Same descent as Mu2Solver but over lexicographic cost tuples."""

    def __init__(self, w: Word, p: CyclicProducts, tau: TauSpec):
        if not tau.selectors or not isinstance(tau.selectors[0], FaceCount):
            raise ValueError("first selector must be FaceCount")
        self.tau = tau
        self.base = Mu2Solver(w, p)
        self.cost: dict[Key, Tuple | None] = {}
        self.choice: dict[Key, tuple] = {}

    def _face_tuple(self, g: int, exponent: int) -> Tuple:
        return tuple(
            dgm.eval_selector_on_face(sel, g, exponent) for sel in self.tau.selectors
        )

    def _power_tuple(self, g: int, e: int) -> Tuple | None:
        if e == 0:
            return tuple(0 for _ in self.tau.selectors)
        es = self.base.p.exponent_set(g)
        if es.kind == ZERO or abs(e) % es.n != 0:
            return None
        if es.kind == MULTIPLES:
            return self._face_tuple(g, -e)
        one = self._face_tuple(g, -(es.n if e > 0 else -es.n))
        count = abs(e) // es.n
        return tuple(x * count for x in one)

    def solve(self) -> tuple[Tuple, Diagram]:
        b = self.base
        if b.n == 0:
            return tuple(0 for _ in self.tau.selectors), dgm.empty_diagram(b.p)
        top = (1, b.n, 1, 0)
        value = self._eval(top)
        if value is None:
            raise ValueError("word is not trivial in the group")
        saved_choice = b.choice
        b.choice = self.choice
        try:
            out = b._assemble(top)
        finally:
            b.choice = saved_choice
        return value, out

    def _eval(self, key: Key) -> Tuple | None:
        memo = self.cost
        if key in memo:
            return memo[key]
        b = self.base
        stack = [key]
        while stack:
            cur = stack[-1]
            if cur in memo:
                stack.pop()
                continue
            i, j, g, e = cur
            length = j + abs(e)
            tail_sign = 1 if e > 0 else -1
            first = b.w[i - 1] if j > 0 else tail_sign * g
            last = tail_sign * g if e != 0 else b.w[i + j - 2]
            if j == 0 or length == 1:
                if j == 0:
                    memo[cur] = self._power_tuple(g, e)
                else:
                    memo[cur] = self._power_tuple(abs(first), 1 if first > 0 else -1)
                self.choice[cur] = ("power",)
                stack.pop()
            elif first == -last or first == last:
                peel = first == -last
                if peel:
                    child = (
                        b._canon(i + 1, j - 2, 1, 0)
                        if e == 0
                        else b._canon(i + 1, j - 1, g, e - tail_sign)
                    )
                elif e == 0:
                    child = (i + 1, j - 1, abs(first), 1 if first > 0 else -1)
                else:
                    child = (i + 1, j - 1, g, e + tail_sign)
                if child in memo:
                    memo[cur] = memo[child]
                    self.choice[cur] = ("peel" if peel else "rot", child)
                    stack.pop()
                else:
                    stack.append(child)
            else:
                missing = False
                best: Tuple | None = None
                best_bp: tuple = ("stuck",)
                for c in range(1, length):
                    if c <= j:
                        lk = b._canon(i, c, 1, 0)
                        rk = b._canon(i + c, j - c, g, e)
                        for dep in (lk, rk):
                            if dep not in memo:
                                stack.append(dep)
                                missing = True
                        if missing:
                            continue
                        total = _tadd(memo[lk], memo[rk])
                        bp = ("split", lk, rk)
                    else:
                        e1 = tail_sign * (c - j)
                        lk = b._canon(i, j, g, e1)
                        if lk not in memo:
                            stack.append(lk)
                            missing = True
                            continue
                        total = _tadd(memo[lk], self._power_tuple(g, e - e1))
                        bp = ("split_tail", lk, g, e - e1)
                    if total is not None and (best is None or total < best):
                        best = total
                        best_bp = bp
                if not missing:
                    memo[cur] = best
                    self.choice[cur] = best_bp
                    stack.pop()
        return memo[key]


def _tadd(a: Tuple | None, b: Tuple | None) -> Tuple | None:
    if a is None or b is None:
        return None
    return tuple(x + y for x, y in zip(a, b))


def mu2_lex(w: Word, p: CyclicProducts, tau: TauSpec) -> tuple[tuple[int, ...], Diagram]:
    """Lexicographically minimal face-statistics tuple and a witness diagram."""
    return Mu2LexSolver(w, p, tau).solve()
