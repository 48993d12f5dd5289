"""Exhaustive checkers for the five axioms and the adjacency criterion.

Notation: ``n`` is the diameter of the graph and ``d`` its distance.

A1  connected with finite diameter.
A2  for all x, y some z has d(x,z) = d(x,y) + d(y,z) = n.
A3  for x, y at distance 2 with a common neighbour z, some other common
    neighbour w has d(z,w) = 2.
A4  for x != y both at distance n from z, some neighbour w of z has
    d(x,w) = n - 1 and d(y,w) = n.
A5  every edge {a, b} admits p outside {a, b} whose diameter shell is
    covered by the shells of a and b.

The covering condition of A5 is the adjacency criterion: on graphs with
A1-A4 any pair (a, b) admitting such a p is an edge.

Every scan walks vertices in index order and stops at the first failure, so
reported counterexamples are deterministic.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Iterable

import numpy as np

from .graph import DistanceIndex

AXIOMS = ("A1", "A2", "A3", "A4", "A5")
MAX_LISTED_PAIRS = 1000


class AxiomPreconditionError(ValueError):
    pass


@dataclass
class AxiomResult:
    axiom: str
    holds: bool
    witness: dict[str, int] | None = None
    elapsed: float = 0.0
    details: dict[str, Any] = field(default_factory=dict)

    def to_dict(self, index: DistanceIndex | None = None) -> dict[str, Any]:
        witness = None
        if self.witness is not None:
            witness = {role: {"vertex": v} for role, v in self.witness.items()}
            if index is not None:
                for role, v in self.witness.items():
                    witness[role]["point"] = index.space.label(v)
        out = {
            "space": index.space.name if index is not None else None,
            "axiom": self.axiom,
            "holds": self.holds,
            "witness": witness,
            "elapsed_ms": round(self.elapsed * 1000, 3),
        }
        if self.details:
            out["details"] = self.details
        return out


def _require_connected(index: DistanceIndex) -> None:
    if not index.connected:
        raise AxiomPreconditionError("graph is not connected")


def _timed(fn):
    def wrapper(index: DistanceIndex, *args, **kwargs) -> AxiomResult:
        start = time.perf_counter()
        result = fn(index, *args, **kwargs)
        result.elapsed = time.perf_counter() - start
        return result

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_timed
def check_a1(index: DistanceIndex) -> AxiomResult:
    if index.connected:
        return AxiomResult("A1", True, details={"diameter": index.diameter})
    y = int(np.nonzero(index.dist[0] == 255)[0][0])
    return AxiomResult("A1", False, {"x": 0, "y": y})


@_timed
def check_a2(index: DistanceIndex) -> AxiomResult:
    _require_connected(index)
    dist = index.dist.astype(np.int16)
    n = index.diameter
    for x in range(index.size):
        shell = index.shell(x)
        target = n - dist[x]
        ok = (dist[:, shell] == target[:, None]).any(axis=1)
        if not ok.all():
            y = int(np.argmin(ok))
            return AxiomResult("A2", False, {"x": x, "y": y})
    return AxiomResult("A2", True)


@_timed
def check_a3(index: DistanceIndex) -> AxiomResult:
    _require_connected(index)
    adj = (index.dist == 1).astype(np.float32)
    for z in range(index.size):
        nz = np.nonzero(index.dist[z] == 1)[0]
        if len(nz) < 2:
            continue
        at_two = index.dist[np.ix_(nz, nz)] == 2
        if not at_two.any():
            continue
        far_from_z = (index.dist[z] == 2).astype(np.float32)
        counts = (adj[nz] * far_from_z) @ adj[nz].T
        bad = np.argwhere(at_two & (counts == 0))
        if len(bad):
            x, y = (int(nz[i]) for i in bad[0])
            return AxiomResult("A3", False, {"x": x, "y": y, "z": z})
    return AxiomResult("A3", True)


@_timed
def check_a4(index: DistanceIndex) -> AxiomResult:
    """Scans each diameter shell once; the failing z is reported with all its violating (x, y)."""
    _require_connected(index)
    n = index.diameter
    for z in range(index.size):
        shell = index.shell(z)
        if len(shell) < 2:
            continue
        nz = np.nonzero(index.dist[z] == 1)[0]
        sub = index.dist[np.ix_(shell, nz)]
        penult = (sub == n - 1).astype(np.float32)
        far = (sub == n).astype(np.float32)
        counts = penult @ far.T
        np.fill_diagonal(counts, 1)
        bad = np.argwhere(counts == 0)
        if len(bad):
            pairs = [(int(shell[i]), int(shell[j])) for i, j in bad[:MAX_LISTED_PAIRS]]
            x, y = pairs[0]
            return AxiomResult(
                "A4",
                False,
                {"x": x, "y": y, "z": z},
                details={"violating_pairs_for_z": pairs, "violating_pair_count": int(len(bad))},
            )
    return AxiomResult("A4", True)


# ---------------------------------------------------------------------------
# adjacency criterion


def _criterion_counts(index: DistanceIndex, a: int, bs: np.ndarray) -> np.ndarray:
    """counts[p, j] = #{x : d(x,p) = n, d(x,a) != n, d(x,bs[j]) != n}.

    p satisfies the criterion for (a, bs[j]) exactly when the count is zero.
    The inner dimension is min(|shell(a)|, N - |shell(a)|).
    """
    mask = index.diameter_mask
    in_a = mask[a] > 0
    n_in = int(in_a.sum())
    bs = np.asarray(bs, dtype=np.int64)
    if index.size - n_in <= n_in:
        outside = ~in_a
        return mask[:, outside] @ (1.0 - mask[np.ix_(bs, outside)]).T
    # inclusion-exclusion over shell(a)
    sizes = mask.sum(axis=1)
    overlap = index.shell_overlap
    triple = mask[:, in_a] @ mask[np.ix_(bs, in_a)].T
    return sizes[:, None] - overlap[:, a][:, None] - overlap[:, bs] + triple


def _valid_p(counts: np.ndarray, a: int, bs: np.ndarray) -> np.ndarray:
    ok = counts < 0.5
    ok[a, :] = False
    ok[bs, np.arange(len(bs))] = False
    return ok


def _chosen_p(counts: np.ndarray, a: int, bs: np.ndarray) -> np.ndarray:
    """Highest-index valid p per column, -1 if none."""
    ok = _valid_p(counts, a, bs)
    found = ok.any(axis=0)
    return np.where(found, len(ok) - 1 - ok[::-1].argmax(axis=0), -1)


def lemma21_find_p(index: DistanceIndex, a: int, b: int) -> int | None:
    """A point p outside {a, b} whose diameter shell lies in shell(a) ∪ shell(b), or None.

    Candidates are scanned from the highest vertex id down; ``lemma21_all_p``
    lists every candidate.
    """
    if a == b:
        raise ValueError("a and b must be distinct")
    bs = np.array([b])
    p = int(_chosen_p(_criterion_counts(index, a, bs), a, bs)[0])
    return None if p < 0 else p


def lemma21_all_p(index: DistanceIndex, a: int, b: int) -> list[int]:
    if a == b:
        raise ValueError("a and b must be distinct")
    bs = np.array([b])
    return [int(p) for p in np.nonzero(_valid_p(_criterion_counts(index, a, bs), a, bs)[:, 0])[0]]


def lemma21_table(index: DistanceIndex, jobs: int = 1) -> np.ndarray:
    """table[a, b] = lemma21_find_p(a, b), or -1 when absent (and on the diagonal)."""
    size = index.size
    table = np.full((size, size), -1, dtype=np.int64)

    def row(a: int) -> None:
        bs = np.arange(a + 1, size)
        if len(bs) == 0:
            return
        chosen = _chosen_p(_criterion_counts(index, a, bs), a, bs)
        table[a, bs] = chosen
        table[bs, a] = chosen

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            list(pool.map(row, range(size)))
    else:
        for a in range(size):
            row(a)
    return table


@_timed
def check_a5(index: DistanceIndex) -> AxiomResult:
    _require_connected(index)
    for a in range(index.size):
        bs = np.nonzero(index.dist[a, a + 1 :] == 1)[0] + a + 1
        if len(bs) == 0:
            continue
        chosen = _chosen_p(_criterion_counts(index, a, bs), a, bs)
        if (chosen < 0).any():
            b = int(bs[np.argmax(chosen < 0)])
            return AxiomResult("A5", False, {"a": a, "b": b})
    return AxiomResult("A5", True)


CHECKERS = {"A1": check_a1, "A2": check_a2, "A3": check_a3, "A4": check_a4, "A5": check_a5}


def run_axioms(index: DistanceIndex, axioms: Iterable[str] = AXIOMS) -> dict[str, AxiomResult]:
    """Run the selected checkers; on a disconnected graph A2-A5 are reported as failing."""
    results = {}
    for name in axioms:
        name = name.upper()
        if name not in CHECKERS:
            raise ValueError(f"unknown axiom {name!r}")
        try:
            results[name] = CHECKERS[name](index)
        except AxiomPreconditionError as exc:
            results[name] = AxiomResult(name, False, details={"precondition": str(exc)})
    return results


def verify_counterexample(result: AxiomResult, index: DistanceIndex) -> bool:
    """Re-check, by direct scan, that a failing result's witness violates its axiom."""
    if result.holds or result.witness is None:
        return False
    d = index.dist.astype(np.int64)
    n = index.diameter
    w = result.witness
    if result.axiom == "A1":
        return d[w["x"], w["y"]] == 255
    if result.axiom == "A2":
        x, y = w["x"], w["y"]
        return not any(d[x, z] == d[x, y] + d[y, z] == n for z in range(index.size))
    if result.axiom == "A3":
        x, y, z = w["x"], w["y"], w["z"]
        if not (d[x, z] == d[y, z] == 1 and d[x, y] == 2):
            return False
        return not any(d[x, v] == d[y, v] == 1 and d[z, v] == 2 for v in range(index.size))
    if result.axiom == "A4":
        x, y, z = w["x"], w["y"], w["z"]
        if x == y or not (d[x, z] == d[y, z] == n):
            return False
        return not any(d[z, v] == 1 and d[x, v] == n - 1 and d[y, v] == n for v in range(index.size))
    if result.axiom == "A5":
        a, b = w["a"], w["b"]
        if d[a, b] != 1:
            return False
        return not any(
            criterion_holds_naive(index, a, b, p) for p in range(index.size) if p not in (a, b)
        )
    raise ValueError(f"unknown axiom {result.axiom!r}")


def criterion_holds_naive(index: DistanceIndex, a: int, b: int, p: int) -> bool:
    """Direct loop over x: d(x,p) = n implies d(x,a) = n or d(x,b) = n."""
    d = index.dist
    n = index.diameter
    return all(d[x, a] == n or d[x, b] == n for x in range(index.size) if d[x, p] == n)


@dataclass
class Lemma21Report:
    space: str
    precondition_ok: bool
    failed_axioms: list[str]
    criterion_pairs: int
    edges: int
    equals_edge_set: bool
    violations: list[tuple[int, int, int]]
    edges_without_p: list[tuple[int, int]]

    @property
    def passed(self) -> bool:
        return self.precondition_ok and not self.violations

    def to_dict(self) -> dict[str, Any]:
        return {
            "space": self.space,
            "precondition_ok": self.precondition_ok,
            "failed_axioms": self.failed_axioms,
            "criterion_pairs": self.criterion_pairs,
            "edges": self.edges,
            "equals_edge_set": self.equals_edge_set,
            "violations": [list(v) for v in self.violations[:MAX_LISTED_PAIRS]],
            "edges_without_p": [list(v) for v in self.edges_without_p[:MAX_LISTED_PAIRS]],
            "passed": self.passed,
        }


def lemma21_validate(
    index: DistanceIndex,
    axiom_results: dict[str, AxiomResult] | None = None,
    jobs: int = 1,
) -> Lemma21Report:
    """Every pair satisfying the criterion must be an edge, provided A1-A4 hold.

    The scan runs regardless of the precondition; when A1-A4 fail, the
    non-adjacent criterion pairs are returned as exhibits in ``violations``.
    """
    if axiom_results is None:
        axiom_results = run_axioms(index, ("A1", "A2", "A3", "A4"))
    failed = [a for a in ("A1", "A2", "A3", "A4") if a in axiom_results and not axiom_results[a].holds]
    missing = [a for a in ("A1", "A2", "A3", "A4") if a not in axiom_results]
    if missing:
        axiom_results = {**axiom_results, **run_axioms(index, missing)}
        failed = [a for a in ("A1", "A2", "A3", "A4") if not axiom_results[a].holds]
    table = lemma21_table(index, jobs=jobs) if index.connected else np.full((index.size,) * 2, -1)
    present = table >= 0
    adjacent = index.dist == 1
    upper = np.triu(np.ones_like(adjacent), k=1)
    violations = [(int(a), int(b), int(table[a, b])) for a, b in np.argwhere(upper & present & ~adjacent)]
    edges_without = [(int(a), int(b)) for a, b in np.argwhere(upper & adjacent & ~present)]
    return Lemma21Report(
        space=index.space.name,
        precondition_ok=not failed,
        failed_axioms=failed,
        criterion_pairs=int((present & upper).sum()),
        edges=int((adjacent & upper).sum()),
        equals_edge_set=bool(np.array_equal(present, adjacent)),
        violations=violations,
        edges_without_p=edges_without,
    )
