"""Window dynamic program for Baumslag-Solitar presentations.

For each subword the solver records the unique a1-power it equals in the
group (or infinity) together with the minimal number of faces needed to
carry it there.  Windows recurse by splitting at positions where both
sides keep non-a1 letters, or by pinching the first and last non-a1
letters, which must be inverse a_k letters wrapping the interior.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import brackets as brk
from .brackets import Add, ElemOp, Ext1Left, Ext1Right, Ext2BS, Ext3, Merge
from .diagram import Diagram
from .words import INF, BaumslagSolitar, Cost, Word


@dataclass(frozen=True)
class LambdaMu:
    """Normal-form exponent and face cost of one word."""

    lam: int | float
    mu3: Cost


Windowkey = tuple[int, int]  # [s, e) in 0-based letter positions


class BsSolver:
    def __init__(self, w: Word, p: BaumslagSolitar):
        if w and w.max_generator() > p.m:
            raise ValueError("word uses generators outside the presentation")
        self.w = w
        self.p = p
        self.value: dict[Windowkey, LambdaMu] = {}
        self.choice: dict[Windowkey, tuple] = {}

    def window(self, s: int, e: int) -> LambdaMu:
        key = (s, e)
        got = self.value.get(key)
        if got is not None:
            return got
        w = self.w
        non_a1 = [t for t in range(s, e) if abs(w[t]) != 1]
        if not non_a1:
            lam = sum(1 if w[t] > 0 else -1 for t in range(s, e))
            out = LambdaMu(lam, 0)
            self.choice[key] = ("base",)
            self.value[key] = out
            return out
        best_m: Cost = INF
        best_l: int | float = INF
        best_bp: tuple = ("stuck",)
        # pinch: first and last non-a1 letters must be inverse a_k^(+-1)
        pp, q = non_a1[0], non_a1[-1]
        if pp != q and w[pp] == -w[q]:
            inner = self.window(pp + 1, q)
            outer = sum(
                1 if w[t] > 0 else -1
                for t in list(range(s, pp)) + list(range(q + 1, e))
            )
            k, delta = abs(w[pp]), (1 if w[pp] > 0 else -1)
            if inner.lam is not INF:
                if k > 2:
                    if inner.lam == 0:
                        best_l = outer
                        best_m = inner.mu3
                        best_bp = ("pinch", pp, q, 0)
                else:
                    n_in, n_out = (self.p.n1, self.p.n2) if delta == 1 else (
                        self.p.n2, self.p.n1)
                    if inner.lam % n_in == 0:
                        carried = inner.lam // n_in * n_out
                        best_l = outer + carried
                        best_m = inner.mu3 + abs(inner.lam // n_in)
                        best_bp = ("pinch", pp, q, carried)
        # splits with non-a1 letters on both sides
        for t in non_a1[:-1]:
            cut = t + 1
            left = self.window(s, cut)
            right = self.window(cut, e)
            total = left.mu3 + right.mu3
            if total < best_m:
                best_m = total
                best_l = left.lam + right.lam
                best_bp = ("split", cut)
        out = LambdaMu(best_l if best_m is not INF else INF, best_m)
        self.value[key] = out
        self.choice[key] = best_bp
        return out

    def lambda_mu(self) -> LambdaMu:
        return self.window(0, len(self.w))

    def to_ops(self, s: int | None = None, e: int | None = None) -> list[ElemOp]:
        """Operation sequence building the single bracket for the window."""
        s = 0 if s is None else s
        e = len(self.w) if e is None else e
        self.window(s, e)
        ops: list[ElemOp] = []
        self._emit(s, e, ops)
        return ops

    def _emit(self, s: int, e: int, ops: list[ElemOp]) -> None:
        bp = self.choice[(s, e)]
        if bp[0] == "base":
            ops.append(Add(s))
            for t in range(s, e):
                ops.append(Ext1Right((s, t)))
            return
        if bp[0] == "split":
            cut = bp[1]
            self._emit(s, cut, ops)
            self._emit(cut, e, ops)
            ops.append(Merge((s, cut), (cut, e)))
            return
        if bp[0] == "pinch":
            pp, q = bp[1], bp[2]
            self._emit(pp + 1, q, ops)
            inner = self.value[(pp + 1, q)]
            if inner.lam == 0:
                ops.append(Ext3((pp + 1, q)))
            else:
                ops.append(Ext2BS((pp + 1, q)))
            for t in range(pp - 1, s - 1, -1):
                ops.append(Ext1Left((t + 1, q + 1)))
            for t in range(q + 1, e):
                ops.append(Ext1Right((s, t)))
            return
        raise ValueError("window is not expressible as an a1-power")


def lambda_mu(w: Word, p: BaumslagSolitar) -> LambdaMu:
    """lam with w = a1^lam in the group, and the face cost of getting there."""
    return BsSolver(w, p).lambda_mu()


def mu3(w: Word, p: BaumslagSolitar) -> Cost:
    """Minimal faces of a diagram with boundary w, infinite when w != 1."""
    lm = lambda_mu(w, p)
    return lm.mu3 if lm.lam == 0 else INF


def bounded_wp_bs(w: Word, n: int, p: BaumslagSolitar) -> bool:
    if n < 0:
        raise ValueError("n must be >= 0")
    return mu3(w, p) <= n


def precise_wp_bs(w: Word, n: int, p: BaumslagSolitar) -> bool:
    if n < 0:
        raise ValueError("n must be >= 0")
    return mu3(w, p) == n


def minimal_diagram_bs(w: Word, p: BaumslagSolitar) -> Diagram:
    """Minimal diagram with boundary label w, via the certificate replayer."""
    solver = BsSolver(w, p)
    if not w:
        from . import diagram as dgm

        return dgm.empty_diagram(p)
    lm = solver.lambda_mu()
    if lm.lam != 0:
        raise ValueError("word is not trivial in the group")
    return brk.build_diagram(w, p, solver.to_ops())


def quadratic_face_bound(w: Word, p: BaumslagSolitar) -> int:
    """Certified face bound |w|^2 / (4 |n1|) for presentations with |n1| = |n2|."""
    if abs(p.n1) != abs(p.n2):
        raise ValueError("quadratic bound requires |n1| = |n2|")
    return len(w) ** 2 // (4 * abs(p.n1))
