"""Hidden-graph cut oracle with exact query accounting.

A GraphInstance holds the hidden capacitated simple graph. Algorithms only
ever talk to it through an OracleView, which answers cut queries, charges
them on a QueryLedger, and keeps a replayable transcript. Derived views
(augmented, contracted, induced) decompose every one of their cut queries
into at most one base-graph query plus arithmetic on explicitly known
virtual structure, so only base-graph information ever costs anything.

The CutCache layers algorithm-side memoisation on top: a deterministic
algorithm never needs to issue the same base query twice, so the cache
answers repeats for free while the ledger keeps counting real queries.
The contract operations on the views themselves (cut_query, pair_capacity,
bis_query, residual_bis) never memoise: their charges are exact by design.

Concurrency: a view plus its ledger (and any cache over them) is
single-owner, single-threaded state; distinct GraphInstances with distinct
ledgers may be used from different threads without coordination.
"""

from __future__ import annotations

import json
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional

import numpy as np

from . import _kernels

MAX_TOTAL_CAPACITY = 1 << 62  # cut sums must stay inside 64-bit ints


class GraphFormatError(ValueError):
    pass


class QueryInputError(ValueError):
    pass


class ContractViolation(RuntimeError):
    pass


def canon(ids: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(ids))


# ---------------------------------------------------------------------------
# hidden graph


class GraphInstance:
    """The hidden simple capacitated graph. Algorithms must not touch it;
    only the oracle and the harness-side reference checkers may."""

    def __init__(self, n: int, edges: dict[tuple[int, int], int]):
        if n < 1:
            raise GraphFormatError("need at least one vertex")
        norm: dict[tuple[int, int], int] = {}
        total = 0
        for (u, v), w in edges.items():
            if u == v:
                raise GraphFormatError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"vertex out of range in edge ({u},{v})")
            if not isinstance(w, int) or w < 1:
                raise GraphFormatError(f"capacity of ({u},{v}) must be an integer >= 1")
            key = (u, v) if u < v else (v, u)
            if key in norm:
                raise GraphFormatError(f"duplicate edge {key}")
            norm[key] = w
            total += w
        if total >= MAX_TOTAL_CAPACITY:
            raise GraphFormatError("total capacity overflows the 64-bit budget")
        self.n = n
        self.edges = dict(sorted(norm.items()))
        self.W = max(self.edges.values(), default=1)
        self._build_csr()

    def _build_csr(self):
        n = self.n
        deg = np.zeros(n + 1, dtype=np.int64)
        for (u, v), _ in self.edges.items():
            deg[u + 1] += 1
            deg[v + 1] += 1
        indptr = np.cumsum(deg)
        indices = np.zeros(max(int(indptr[-1]), 1), dtype=np.int64)
        weights = np.zeros_like(indices)
        cursor = indptr[:-1].copy()
        for (u, v), w in self.edges.items():
            indices[cursor[u]] = v
            weights[cursor[u]] = w
            cursor[u] += 1
            indices[cursor[v]] = u
            weights[cursor[v]] = w
            cursor[v] += 1
        self._indptr, self._indices, self._weights = indptr, indices, weights

    def __eq__(self, other):
        return (
            isinstance(other, GraphInstance)
            and self.n == other.n
            and self.edges == other.edges
        )

    def __repr__(self):
        return f"GraphInstance(n={self.n}, m={len(self.edges)}, W={self.W})"

    @property
    def m(self) -> int:
        return len(self.edges)

    def cut_of(self, ids: Iterable[int]) -> int:
        mask = np.zeros(self.n, dtype=np.uint8)
        lst = list(ids)
        if lst:
            mask[lst] = 1
        return _kernels.cut_value(self._indptr, self._indices, self._weights, mask)

    def adjacency(self) -> dict[int, dict[int, int]]:
        adj: dict[int, dict[int, int]] = {v: {} for v in range(self.n)}
        for (u, v), w in self.edges.items():
            adj[u][v] = w
            adj[v][u] = w
        return adj

    def degree(self, v: int) -> int:
        lo, hi = self._indptr[v], self._indptr[v + 1]
        return int(self._weights[lo:hi].sum())

    def edge_arrays(self):
        m = max(len(self.edges), 1)
        eu = np.zeros(m, dtype=np.int64)
        ev = np.zeros(m, dtype=np.int64)
        ew = np.zeros(m, dtype=np.int64)
        for i, ((u, v), w) in enumerate(self.edges.items()):
            eu[i], ev[i], ew[i] = u, v, w
        if not self.edges:
            return eu[:0], ev[:0], ew[:0]
        return eu, ev, ew

    # -- plain text format: first line "n m", then m lines "u v [w]"

    @classmethod
    def load(cls, path) -> "GraphInstance":
        with open(path) as fh:
            return cls.loads(fh.read())

    @classmethod
    def loads(cls, text: str) -> "GraphInstance":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise GraphFormatError("empty graph file")
        head = lines[0].split()
        if len(head) != 2:
            raise GraphFormatError("first line must be 'n m'")
        try:
            n, m = int(head[0]), int(head[1])
        except ValueError as exc:
            raise GraphFormatError("first line must be 'n m'") from exc
        if len(lines) - 1 != m:
            raise GraphFormatError(f"expected {m} edge lines, found {len(lines) - 1}")
        edges: dict[tuple[int, int], int] = {}
        for ln in lines[1:]:
            parts = ln.split()
            if len(parts) not in (2, 3):
                raise GraphFormatError(f"bad edge line: {ln!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
                w = int(parts[2]) if len(parts) == 3 else 1
            except ValueError as exc:
                raise GraphFormatError(f"bad edge line: {ln!r}") from exc
            key = (u, v) if u < v else (v, u)
            if key in edges:
                raise GraphFormatError(f"duplicate edge {key}")
            edges[key] = w
        return cls(n, edges)

    def dumps(self) -> str:
        out = [f"{self.n} {len(self.edges)}"]
        for (u, v), w in self.edges.items():
            out.append(f"{u} {v} {w}")
        return "\n".join(out) + "\n"

    def dump(self, path):
        with open(path, "w") as fh:
            fh.write(self.dumps())


# ---------------------------------------------------------------------------
# ledger


@dataclass(frozen=True)
class TranscriptRecord:
    seq: int
    ids: tuple[int, ...]
    answer: int
    tag: str


class QueryLedger:
    """Exact counters plus a replayable transcript of every charged query.

    Empty/full-set conventions and queries answered purely from virtual
    metadata are logged separately in `zero_cost` and charged nothing."""

    def __init__(self):
        self.cut_count = 0
        self.bis_count = 0
        self.transcript: list[TranscriptRecord] = []
        self.zero_cost: list[TranscriptRecord] = []
        self.phase_tags: dict[str, int] = {}
        self._tags: list[str] = []

    @property
    def tag(self) -> str:
        return self._tags[-1] if self._tags else ""

    @contextmanager
    def phase(self, label: str):
        self._tags.append(label)
        try:
            yield self
        finally:
            self._tags.pop()

    def record_cut(self, ids: tuple[int, ...], answer: int) -> None:
        self.transcript.append(TranscriptRecord(self.cut_count, ids, answer, self.tag))
        self.cut_count += 1
        if self.tag:
            self.phase_tags[self.tag] = self.phase_tags.get(self.tag, 0) + 1

    def record_zero(self, ids: tuple[int, ...], answer: int) -> None:
        self.zero_cost.append(TranscriptRecord(-1, ids, answer, self.tag))

    def record_bis(self) -> None:
        self.bis_count += 1

    def snapshot(self) -> tuple[int, int]:
        return self.cut_count, self.bis_count

    # -- transcript format: one JSON object per line

    def transcript_text(self) -> str:
        out = []
        for rec in self.transcript:
            out.append(
                json.dumps(
                    {"seq": rec.seq, "set": list(rec.ids), "answer": rec.answer, "tag": rec.tag},
                    sort_keys=True,
                    separators=(",", ":"),
                )
            )
        return "\n".join(out) + ("\n" if out else "")

    def write_transcript(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.transcript_text())

    @staticmethod
    def parse_transcript(text: str) -> list[TranscriptRecord]:
        recs = []
        for ln in text.splitlines():
            if not ln.strip():
                continue
            obj = json.loads(ln)
            recs.append(
                TranscriptRecord(obj["seq"], tuple(obj["set"]), obj["answer"], obj.get("tag", ""))
            )
        return recs

    @staticmethod
    def replay(records: list[TranscriptRecord], instance: GraphInstance) -> bool:
        """True iff the hidden instance reproduces every recorded answer."""
        for rec in records:
            if instance.cut_of(rec.ids) != rec.answer:
                return False
        return True


# ---------------------------------------------------------------------------
# flows


class Flow:
    """Antisymmetric integral flow assignment: get(u, v) == -get(v, u)."""

    __slots__ = ("source", "sink", "value", "_adj")

    def __init__(self, source: int, sink: int):
        if source == sink:
            raise QueryInputError("source and sink must differ")
        self.source = source
        self.sink = sink
        self.value = 0
        self._adj: dict[int, dict[int, int]] = {}

    @classmethod
    def zero(cls, source: int, sink: int) -> "Flow":
        return cls(source, sink)

    def get(self, u: int, v: int) -> int:
        return self._adj.get(u, {}).get(v, 0)

    def push(self, u: int, v: int, amount: int) -> None:
        if amount == 0:
            return
        fu = self._adj.setdefault(u, {})
        fv = self._adj.setdefault(v, {})
        new = fu.get(v, 0) + amount
        if new == 0:
            fu.pop(v, None)
            fv.pop(u, None)
        else:
            fu[v] = new
            fv[u] = -new

    def across(self, A: Iterable[int], B: Iterable[int]) -> int:
        bset = set(B)
        total = 0
        for a in A:
            for v, val in self._adj.get(a, {}).items():
                if v in bset:
                    total += val
        return total

    def support(self) -> list[tuple[int, int, int]]:
        """Positive-direction entries, sorted."""
        out = []
        for u in sorted(self._adj):
            for v in sorted(self._adj[u]):
                val = self._adj[u][v]
                if val > 0:
                    out.append((u, v, val))
        return out

    def vertices(self) -> list[int]:
        return sorted(self._adj)

    def copy(self) -> "Flow":
        f = Flow(self.source, self.sink)
        f.value = self.value
        f._adj = {u: dict(nbrs) for u, nbrs in self._adj.items()}
        return f


# ---------------------------------------------------------------------------
# views


class CutPlan(NamedTuple):
    base_ids: Optional[tuple[int, ...]]  # None: no base query needed
    coeff: int
    offset: int


class OracleView:
    """Common behaviour: validation, conventions, charging, BIS simulation."""

    kind = "base"

    def __init__(self, base: "BaseView"):
        self._base = base

    @property
    def ledger(self) -> QueryLedger:
        return self._base._ledger

    @property
    def base_view(self) -> "BaseView":
        return self._base

    def vertices(self) -> tuple[int, ...]:
        raise NotImplementedError

    @property
    def universe(self) -> frozenset:
        raise NotImplementedError

    @property
    def universe_size(self) -> int:
        return len(self.vertices())

    def unit_real_capacities(self) -> bool:
        """True when every real (base-graph-backed) edge in this view has
        capacity exactly 1, so a residual edge with zero flow has capacity 1."""
        raise NotImplementedError

    def cut_plan(self, ids: tuple[int, ...]) -> CutPlan:
        raise NotImplementedError

    def pair_known(self, A: tuple[int, ...], B: tuple[int, ...]) -> Optional[int]:
        """Total A-B capacity if derivable from explicit metadata alone."""
        return None

    def known_capacity(self, u: int, v: int) -> Optional[int]:
        return self.pair_known((u,), (v,))

    def singleton_decompose(
        self, u: int, B: tuple[int, ...]
    ) -> Optional[tuple[int, Optional[int], tuple[int, ...], int]]:
        """Express c_view(u, B) as known + scale * c_base(u, B_real), or None
        when this view cannot (contracted views fall back to cut plans)."""
        return None

    def _check_subset(self, ids: tuple[int, ...]) -> None:
        uni = self.universe
        for v in ids:
            if v not in uni:
                raise QueryInputError(f"vertex {v} outside the view universe")

    # -- contract operations (exact charging, no memoisation)

    def cut_query(self, ids: Iterable[int]) -> int:
        ids = canon(ids)
        self._check_subset(ids)
        if len(ids) == 0 or len(ids) == self.universe_size:
            self.ledger.record_zero(ids, 0)
            return 0
        plan = self.cut_plan(ids)
        if plan.base_ids is None:
            self.ledger.record_zero(ids, plan.offset)
            return plan.offset
        raw = self._base.raw_cut(plan.base_ids)
        return plan.coeff * raw + plan.offset

    def pair_capacity(self, A: Iterable[int], B: Iterable[int]) -> int:
        A, B = canon(A), canon(B)
        if not A or not B:
            raise QueryInputError("pair_capacity needs nonempty sets")
        if set(A) & set(B):
            raise QueryInputError("pair_capacity sets must be disjoint")
        total = self.cut_query(A) + self.cut_query(B) - self.cut_query(A + B)
        if total % 2 or total < 0:
            raise ContractViolation("inconsistent cut answers in pair_capacity")
        return total // 2

    def bis_query(self, A: Iterable[int], B: Iterable[int]) -> bool:
        val = self.pair_capacity(A, B)
        self.ledger.record_bis()
        return val > 0

    def residual_bis(self, f: Flow, A: Iterable[int], B: Iterable[int]) -> bool:
        A, B = canon(A), canon(B)
        val = self.pair_capacity(A, B) - f.across(A, B)
        self.ledger.record_bis()
        if val < 0:
            raise ContractViolation("negative residual capacity: invalid flow")
        return val > 0


class BaseView(OracleView):
    """Direct window onto the hidden graph."""

    kind = "base"

    def __init__(self, instance: GraphInstance, ledger: Optional[QueryLedger] = None):
        self._instance = instance
        self._ledger = ledger or QueryLedger()
        self._base = self
        self._verts = tuple(range(instance.n))
        self._uni = frozenset(self._verts)
        self.n = instance.n

    def vertices(self) -> tuple[int, ...]:
        return self._verts

    @property
    def universe(self) -> frozenset:
        return self._uni

    def unit_real_capacities(self) -> bool:
        return self._instance.W == 1

    def cut_plan(self, ids: tuple[int, ...]) -> CutPlan:
        if len(ids) == 0 or len(ids) == self.n:
            return CutPlan(None, 1, 0)
        return CutPlan(ids, 1, 0)

    def singleton_decompose(self, u, B):
        return (0, u, B, 1)

    def raw_cut(self, base_ids: tuple[int, ...]) -> int:
        answer = self._instance.cut_of(base_ids)
        self._ledger.record_cut(base_ids, answer)
        return answer


class AugmentedView(OracleView):
    """Adds a virtual source and sink; each terminal edge of capacity k is
    realised as k unit-capacity length-2 paths through fresh subdivision
    vertices. Base-graph edge capacities are multiplied by `scale`. All
    virtual structure is explicit, so queries touching only it are free."""

    kind = "augmented"

    def __init__(
        self,
        parent: OracleView,
        sources: list[tuple[int, int]],
        sinks: list[tuple[int, int]],
        scale: int = 1,
    ):
        super().__init__(parent.base_view)
        if scale < 1:
            raise QueryInputError("scale must be >= 1")
        self.parent = parent
        self.scale = scale
        pverts = parent.vertices()
        puni = parent.universe
        nxt = (max(pverts) + 1) if pverts else 0
        seen: set[int] = set()
        for v, cap in sources + sinks:
            if v not in puni:
                raise QueryInputError(f"terminal {v} not in the parent view")
            if cap < 1:
                raise QueryInputError("terminal capacity must be >= 1")
            if v in seen:
                raise QueryInputError(f"terminal {v} listed twice")
            seen.add(v)
        self.s_source = nxt
        self.s_sink = nxt + 1
        nxt += 2
        self.source_bundle: dict[int, tuple[int, ...]] = {}
        self.sink_bundle: dict[int, tuple[int, ...]] = {}
        vedges: list[tuple[int, int, int]] = []
        for a, cap in sources:
            subs = tuple(range(nxt, nxt + cap))
            nxt += cap
            self.source_bundle[a] = subs
            for x in subs:
                vedges.append((self.s_source, x, 1))
                vedges.append((x, a, 1))
        for b, cap in sinks:
            subs = tuple(range(nxt, nxt + cap))
            nxt += cap
            self.sink_bundle[b] = subs
            for y in subs:
                vedges.append((b, y, 1))
                vedges.append((y, self.s_sink, 1))
        self.virtual_edges = vedges
        self.virtual_ids = frozenset(
            [self.s_source, self.s_sink]
            + [x for subs in self.source_bundle.values() for x in subs]
            + [y for subs in self.sink_bundle.values() for y in subs]
        )
        self._verts = tuple(sorted(pverts + tuple(self.virtual_ids)))
        self._uni = frozenset(self._verts)

    def vertices(self) -> tuple[int, ...]:
        return self._verts

    @property
    def universe(self) -> frozenset:
        return self._uni

    def unit_real_capacities(self) -> bool:
        return self.scale == 1 and self.parent.unit_real_capacities()

    def _virtual_crossing(self, inside: set) -> int:
        total = 0
        for u, v, w in self.virtual_edges:
            if (u in inside) != (v in inside):
                total += w
        return total

    def cut_plan(self, ids: tuple[int, ...]) -> CutPlan:
        if len(ids) == 0 or len(ids) == self.universe_size:
            return CutPlan(None, 1, 0)
        inside = set(ids)
        real = canon(v for v in ids if v not in self.virtual_ids)
        offset = self._virtual_crossing(inside)
        plan = self.parent.cut_plan(real)
        return CutPlan(plan.base_ids, plan.coeff * self.scale, plan.offset * self.scale + offset)

    def pair_known(self, A, B) -> Optional[int]:
        aset, bset = set(A), set(B)
        a_real = aset - self.virtual_ids
        b_real = bset - self.virtual_ids
        virt = 0
        for u, v, w in self.virtual_edges:
            if (u in aset and v in bset) or (u in bset and v in aset):
                virt += w
        if not a_real or not b_real:
            return virt
        sub = self.parent.pair_known(canon(a_real), canon(b_real))
        if sub is None:
            return None
        return virt + self.scale * sub

    def bundle_flow(self, f: Flow, terminal: int) -> int:
        """Units the flow routes through a terminal's virtual bundle."""
        if terminal in self.source_bundle:
            return f.across((self.s_source,), self.source_bundle[terminal])
        if terminal in self.sink_bundle:
            return f.across(self.sink_bundle[terminal], (self.s_sink,))
        raise QueryInputError(f"{terminal} is not an augmented terminal")

    def singleton_decompose(self, u, B):
        bset = set(B)
        extra = 0
        for a, b, w in self.virtual_edges:
            if (a == u and b in bset) or (b == u and a in bset):
                extra += w
        if u in self.virtual_ids:
            return (extra, None, (), 1)
        b_real = canon(bset - self.virtual_ids)
        if not b_real:
            return (extra, None, (), 1)
        sub = self.parent.singleton_decompose(u, b_real)
        if sub is None:
            return None
        s_extra, base_u, base_b, s_scale = sub
        return (extra + self.scale * s_extra, base_u, base_b, self.scale * s_scale)


class ContractedView(OracleView):
    """Everything outside `keep` is contracted into one vertex s_r, parallel
    edges merging into summed capacities. `drops` removes explicitly known
    capacity between a kept vertex and s_r (used once its value is known)."""

    kind = "contracted"

    def __init__(self, parent: OracleView, keep: Iterable[int], drops: Optional[dict[int, int]] = None):
        super().__init__(parent.base_view)
        keep = canon(keep)
        puni = parent.universe
        if not keep:
            raise QueryInputError("keep must be nonempty")
        for v in keep:
            if v not in puni:
                raise QueryInputError(f"vertex {v} not in the parent view")
        if len(keep) == len(parent.vertices()):
            raise QueryInputError("keep must be a proper subset")
        self.parent = parent
        self.keep = keep
        self._keepset = frozenset(keep)
        self.s_r = max(parent.vertices()) + 1
        self.drops = dict(drops or {})
        self._verts = tuple(sorted(keep + (self.s_r,)))
        self._uni = frozenset(self._verts)

    def vertices(self) -> tuple[int, ...]:
        return self._verts

    @property
    def universe(self) -> frozenset:
        return self._uni

    def unit_real_capacities(self) -> bool:
        # edges into s_r are merged parallels, so they may exceed 1
        return False

    def cut_plan(self, ids: tuple[int, ...]) -> CutPlan:
        if len(ids) == 0 or len(ids) == self.universe_size:
            return CutPlan(None, 1, 0)
        inside = set(ids)
        drop_off = 0
        s_in = self.s_r in inside
        for u, w in self.drops.items():
            if (u in inside) != s_in:
                drop_off -= w
        if s_in:
            T = canon(self._keepset - inside)
        else:
            T = ids
        plan = self.parent.cut_plan(T)
        return CutPlan(plan.base_ids, plan.coeff, plan.offset + drop_off)

    def pair_known(self, A, B) -> Optional[int]:
        if self.s_r in A or self.s_r in B:
            return None
        return self.parent.pair_known(A, B)


class InducedView(OracleView):
    """Induced subgraph on `part`. Per-vertex crossing capacity to the rest
    of the parent universe (`w_out`) is learned once by the caller; induced
    cut answers subtract it at zero query cost."""

    kind = "induced"

    def __init__(self, parent: OracleView, part: Iterable[int], w_out: dict[int, int]):
        super().__init__(parent.base_view)
        part = canon(part)
        puni = parent.universe
        for v in part:
            if v not in puni:
                raise QueryInputError(f"vertex {v} not in the parent view")
        if not part:
            raise QueryInputError("part must be nonempty")
        self.parent = parent
        self.part = part
        self.w_out = {v: int(w_out.get(v, 0)) for v in part}
        self._verts = part
        self._uni = frozenset(part)

    def vertices(self) -> tuple[int, ...]:
        return self._verts

    @property
    def universe(self) -> frozenset:
        return self._uni

    def unit_real_capacities(self) -> bool:
        return self.parent.unit_real_capacities()

    def cut_plan(self, ids: tuple[int, ...]) -> CutPlan:
        if len(ids) == 0 or len(ids) == self.universe_size:
            return CutPlan(None, 1, 0)
        out = sum(self.w_out[v] for v in ids)
        plan = self.parent.cut_plan(ids)
        return CutPlan(plan.base_ids, plan.coeff, plan.offset - out)

    def pair_known(self, A, B) -> Optional[int]:
        return self.parent.pair_known(A, B)

    def singleton_decompose(self, u, B):
        # pair capacities inside the part equal the parent's
        return self.parent.singleton_decompose(u, B)


# ---------------------------------------------------------------------------
# algorithm-side memoisation


class CutCache:
    """Shared memo over base-graph cut sets.

    Every view reduces a cut query to (base set, coeff, offset); the cache
    answers previously-seen base sets (and their complements) without
    touching the oracle again. Counters track logical operations so query
    budgets can be expressed in BIS calls independently of cache hits."""

    def __init__(self, base: BaseView):
        self.base = base
        self._memo: dict[tuple[int, ...], int] = {}
        # learned hidden-graph pair capacities; blocks of total capacity zero
        # (and, on unit graphs, saturated blocks) teach all members at once
        self._pairs: dict[int, dict[int, int]] = {}
        self._unit_base = base._instance.W == 1
        self.logical_cuts = 0
        self.logical_pairs = 0
        self.logical_bis = 0

    def _key(self, ids: tuple[int, ...]) -> tuple[int, ...]:
        n = self.base.n
        if len(ids) * 2 > n or (len(ids) * 2 == n and ids[0] != 0):
            return tuple(sorted(set(self.base.vertices()) - set(ids)))
        return ids

    def cut(self, view: OracleView, ids: Iterable[int]) -> int:
        ids = canon(ids)
        self.logical_cuts += 1
        if len(ids) == 0 or len(ids) == view.universe_size:
            return 0
        plan = view.cut_plan(ids)
        if plan.base_ids is None:
            return plan.offset
        key = self._key(plan.base_ids)
        val = self._memo.get(key)
        if val is None:
            val = self.base.raw_cut(plan.base_ids)
            self._memo[key] = val
        return plan.coeff * val + plan.offset

    def pair_capacity(self, view: OracleView, A: Iterable[int], B: Iterable[int]) -> int:
        A, B = canon(A), canon(B)
        self.logical_pairs += 1
        known = view.pair_known(A, B)
        if known is not None:
            return known
        total = self.cut(view, A) + self.cut(view, B) - self.cut(view, A + B)
        if total % 2 or total < 0:
            raise ContractViolation("inconsistent cut answers in pair_capacity")
        return total // 2

    def _learn(self, u: int, v: int, c: int) -> None:
        self._pairs.setdefault(u, {})[v] = c
        self._pairs.setdefault(v, {})[u] = c

    def base_pair_sum(self, u: int, B: tuple[int, ...]) -> int:
        """Total hidden-graph capacity between u and the set B, served from
        the learned-pair table where possible and querying only the unknown
        remainder. Zero-capacity remainders (and full ones on unit graphs)
        teach every member pair at once."""
        known = self._pairs.get(u, {})
        total = 0
        unknown = []
        for v in B:
            c = known.get(v)
            if c is None:
                unknown.append(v)
            else:
                total += c
        if not unknown:
            return total
        if len(unknown) == 1:
            v = unknown[0]
            cut_u = self.cut(self.base, (u,))
            cut_v = self.cut(self.base, (v,))
            cut_uv = self.cut(self.base, (u, v))
            c = (cut_u + cut_v - cut_uv) // 2
            self._learn(u, v, c)
            return total + c
        rest = tuple(unknown)
        val = self.cut(self.base, (u,)) + self.cut(self.base, rest) - self.cut(self.base, (u,) + rest)
        if val % 2 or val < 0:
            raise ContractViolation("inconsistent cut answers in base_pair_sum")
        val //= 2
        if val == 0:
            for v in unknown:
                self._learn(u, v, 0)
        elif self._unit_base and val == len(unknown):
            for v in unknown:
                self._learn(u, v, 1)
        return total + val

    def residual_between(
        self, view: OracleView, f: Optional[Flow], A: Iterable[int], B: Iterable[int]
    ) -> int:
        """Total residual capacity from A into B; one logical BIS. A None
        flow means the zero flow."""
        A, B = canon(A), canon(B)
        self.logical_bis += 1
        if len(A) == 1:
            dec = view.singleton_decompose(A[0], B)
            if dec is not None:
                extra, base_u, base_b, scale = dec
                cap = extra
                if base_u is not None and base_b:
                    cap += scale * self.base_pair_sum(base_u, base_b)
                val = cap - (f.across(A, B) if f is not None else 0)
                if val < 0:
                    raise ContractViolation("negative residual capacity: invalid flow")
                return val
        val = self.pair_capacity(view, A, B) - (f.across(A, B) if f is not None else 0)
        if val < 0:
            raise ContractViolation("negative residual capacity: invalid flow")
        return val

    def capacity(self, view: OracleView, u: int, v: int) -> int:
        known = view.known_capacity(u, v)
        if known is not None:
            return known
        dec = view.singleton_decompose(u, (v,))
        if dec is not None:
            extra, base_u, base_b, scale = dec
            cap = extra
            if base_u is not None and base_b:
                cap += scale * self.base_pair_sum(base_u, base_b)
            return cap
        return self.pair_capacity(view, (u,), (v,))
