"""Subset enumeration and exact minor scanning.

A scan walks index subsets in canonical order (size ascending, then
lexicographic) and decides whether every minor is nonzero.  For integral
cyclotomic matrices a modular filter certifies almost every minor with
one word-sized determinant; zero residues fall back to an exact
fraction-free determinant over Z[zeta_N].  Prime-field matrices are
decided directly mod q.  Reported counts always follow the canonical
sequential order, so reports are identical for any worker count.
"""

import dataclasses
import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import BudgetExceededError, InvalidInputError, ResourceLimitError
from .exactdet import (ModularFilter, batch_nonsingular_mod, det_cyclotomic_integral,
                       det_field, det_integer, inverse_table)
from .exactring import CycElem
from .finitefield import FqElem
from .groupfourier import ExponentMatrix, RootAssignment, evaluate
from .numbertheory import is_prime

DEFAULT_MINOR_BUDGET = 10 ** 7


@dataclass
class ScanOptions:
    exhaustive: bool = False
    budget: int = DEFAULT_MINOR_BUDGET
    use_filter: bool = True
    filter_prime_floor: int = 10 ** 4
    workers: int = 1
    chunk: int = 2048
    estimate_magnitudes: bool = False
    task_id: str = ""


@dataclass
class ScanReport:
    task_id: str
    matrix: str
    ring: str
    mode: str
    n: int
    planned: int
    subsets_checked: int
    verdict: str                     # verified | refuted | indeterminate
    witness_rows: tuple | None
    witness_cols: tuple | None
    min_magnitude: float | None
    elapsed: float | None
    filter_enabled: bool
    filter_prime: int | None
    filter_root: int | None
    filter_certified: int
    filter_fallbacks: int
    exhaustive: bool
    budget: int

    @property
    def filter_hit_rate(self) -> float | None:
        if not self.filter_enabled or self.subsets_checked == 0:
            return None
        return self.filter_certified / self.subsets_checked

    def to_json_dict(self, deterministic: bool = False) -> dict:
        witness = None
        if self.witness_rows is not None:
            witness = {"rows": list(self.witness_rows), "cols": list(self.witness_cols)}
        out = {
            "task_id": self.task_id,
            "matrix": self.matrix,
            "ring": self.ring,
            "mode": self.mode,
            "n": self.n,
            "planned": self.planned,
            "subsets_checked": self.subsets_checked,
            "verdict": self.verdict,
            "witness": witness,
            "min_magnitude": self.min_magnitude,
            "filter": {
                "enabled": self.filter_enabled,
                "prime": self.filter_prime,
                "root": self.filter_root,
                "certified": self.filter_certified,
                "fallbacks": self.filter_fallbacks,
                "hit_rate": self.filter_hit_rate,
            },
            "exhaustive": self.exhaustive,
            "budget": self.budget,
        }
        if not deterministic:
            out["elapsed"] = self.elapsed
        return out


# --- scan context -------------------------------------------------------------


@dataclass
class ScanContext:
    """Evaluated matrix plus whatever auxiliary tables the ring allows."""

    descriptor: str
    ring_kind: str                 # cyclotomic | prime_field | ext_field | integer
    ring_desc: str
    n: int
    values: list                   # evaluated entries for exact paths
    ivecs: tuple | None = None     # integer coefficient vectors (cyclotomic integral)
    cyc_field: object = None
    residues: np.ndarray | None = None
    modulus: int | None = None     # ell (filter) or q (prime field)
    inv_table: np.ndarray | None = None
    filter_prime: int | None = None
    filter_root: int | None = None
    complexm: np.ndarray | None = None

    @property
    def filter_enabled(self) -> bool:
        return self.ring_kind == "cyclotomic" and self.residues is not None


def build_context(matrix, roots: RootAssignment | None = None,
                  opts: ScanOptions | None = None) -> ScanContext:
    """Evaluate (if symbolic) and prepare residue/complex side tables."""
    opts = opts or ScanOptions()
    if isinstance(matrix, ExponentMatrix):
        if roots is None:
            raise InvalidInputError("an ExponentMatrix scan needs a RootAssignment")
        values = evaluate(matrix, roots)
        descriptor = f"{matrix.describe()} over {roots.describe()}"
    else:
        values = [list(row) for row in matrix]
        descriptor = f"matrix {len(values)}x{len(values)}"
    n = len(values)
    if any(len(row) != n for row in values):
        raise InvalidInputError("matrix must be square")
    sample = values[0][0]

    if isinstance(sample, CycElem):
        fld = sample.field
        ring_desc = f"Q(zeta_{fld.N})"
        integral = all(v.is_integral() for row in values for v in row)
        ivecs = None
        residues = None
        inv = None
        fprime = froot = None
        if integral:
            ivecs = tuple(tuple(v.ivec() for v in row) for row in values)
            if opts.use_filter:
                filt = ModularFilter(fld.N, prime_floor=opts.filter_prime_floor)
                residues = filt.residue_matrix(ivecs)
                inv = inverse_table(filt.ell)
                fprime, froot = filt.ell, filt.root
        complexm = _complex_embedding(values, fld)
        return ScanContext(descriptor, "cyclotomic", ring_desc, n, values,
                           ivecs=ivecs, cyc_field=fld,
                           residues=residues, modulus=fprime, inv_table=inv,
                           filter_prime=fprime, filter_root=froot, complexm=complexm)

    if isinstance(sample, FqElem):
        fld = sample.field
        if fld.k == 1:
            q = fld.q
            residues = np.array([[v.coeffs[0] for v in row] for row in values],
                                dtype=np.int64)
            return ScanContext(descriptor, "prime_field", f"F_{q}", n, values,
                               residues=residues, modulus=q, inv_table=inverse_table(q))
        return ScanContext(descriptor, "ext_field", f"F_{fld.q}^{fld.k}", n, values)

    if isinstance(sample, int):
        complexm = np.array(values, dtype=np.float64).astype(np.complex128)
        return ScanContext(descriptor, "integer", "Z", n, values, complexm=complexm)

    raise InvalidInputError(f"unsupported entry type {type(sample).__name__}")


def _complex_embedding(values, fld) -> np.ndarray:
    roots = np.exp(2j * np.pi * np.arange(fld.degree) / fld.N)
    out = np.empty((len(values), len(values)), dtype=np.complex128)
    for i, row in enumerate(values):
        for j, v in enumerate(row):
            out[i, j] = sum(float(c) * r for c, r in zip(v.coeffs, roots))
    return out


def _exact_minor_is_zero(ctx: ScanContext, rows, cols) -> bool:
    if ctx.ring_kind == "cyclotomic":
        if ctx.ivecs is not None:
            sub = [[ctx.ivecs[r][c] for c in cols] for r in rows]
            det = det_cyclotomic_integral(sub, ctx.cyc_field)
            return all(x == 0 for x in det)
        sub = [[ctx.values[r][c] for c in cols] for r in rows]
        return det_field(sub).is_zero()
    if ctx.ring_kind == "ext_field":
        sub = [[ctx.values[r][c] for c in cols] for r in rows]
        return det_field(sub).is_zero()
    if ctx.ring_kind == "integer":
        sub = [[ctx.values[r][c] for c in cols] for r in rows]
        return det_integer(sub) == 0
    # prime_field zeros are decided on the residue path; reaching here means
    # a direct recheck was requested
    sub = [[ctx.values[r][c] for c in cols] for r in rows]
    return det_field(sub).is_zero()


# --- combination enumeration ---------------------------------------------------


def combination_at_rank(n: int, k: int, rank: int) -> list[int]:
    """The rank-th k-combination of range(n) in lexicographic order."""
    out = []
    x = 0
    for i in range(k):
        while True:
            c = comb(n - 1 - x, k - 1 - i)
            if rank < c:
                out.append(x)
                x += 1
                break
            rank -= c
            x += 1
    return out


def _advance(combo: list[int], n: int) -> bool:
    """In-place lexicographic successor; False when exhausted."""
    k = len(combo)
    i = k - 1
    while i >= 0 and combo[i] == n - k + i:
        i -= 1
    if i < 0:
        return False
    combo[i] += 1
    for j in range(i + 1, k):
        combo[j] = combo[j - 1] + 1
    return True


def _iter_pairs(n: int, k: int, mode: str, lo: int, hi: int):
    """Yield (rank, rows, cols) for ranks lo..hi-1 of the given size class.

    principal ranks are combination ranks; all_minors ranks decompose as
    rank = rank(I) * C(n, k) + rank(J).
    """
    if mode == "principal":
        combo = combination_at_rank(n, k, lo)
        for rank in range(lo, hi):
            rows = tuple(combo)
            yield rank, rows, rows
            if not _advance(combo, n):
                break
        return
    per = comb(n, k)
    ri, rj = divmod(lo, per)
    combo_i = combination_at_rank(n, k, ri)
    combo_j = combination_at_rank(n, k, rj)
    rows = tuple(combo_i)
    for rank in range(lo, hi):
        yield rank, rows, tuple(combo_j)
        if not _advance(combo_j, n):
            if not _advance(combo_i, n):
                break
            rows = tuple(combo_i)
            combo_j = list(range(k))


# --- per-task scanning ----------------------------------------------------------


@dataclass
class TaskResult:
    checked: int = 0
    certified: int = 0
    fallbacks: int = 0
    first_zero_rank: int | None = None
    first_zero_rows: tuple | None = None
    first_zero_cols: tuple | None = None
    min_magnitude: float | None = None

    def observe_magnitude(self, value: float):
        if value > 0 and (self.min_magnitude is None or value < self.min_magnitude):
            self.min_magnitude = value


def _scan_task(ctx: ScanContext, mode: str, size: int, lo: int, hi: int,
               fail_fast: bool, chunk: int, magnitudes: bool) -> TaskResult:
    result = TaskResult()
    if ctx.residues is not None:
        _scan_task_batched(ctx, mode, size, lo, hi, fail_fast, chunk, magnitudes, result)
    else:
        _scan_task_sequential(ctx, mode, size, lo, hi, fail_fast, magnitudes, result)
    return result


def _scan_task_batched(ctx, mode, size, lo, hi, fail_fast, chunk, magnitudes, result):
    ell = ctx.modulus
    inv = ctx.inv_table
    residues = ctx.residues
    exact_zero_on_dead = ctx.ring_kind == "prime_field"
    scale = None
    if magnitudes and ctx.complexm is not None:
        scale = ctx.n ** (-size / 2)
    pos = lo
    while pos < hi:
        top = min(pos + chunk, hi)
        ranks = []
        rows_list = []
        cols_list = []
        for rank, rows, cols in _iter_pairs(ctx.n, size, mode, pos, top):
            ranks.append(rank)
            rows_list.append(rows)
            cols_list.append(cols)
        ri = np.array(rows_list, dtype=np.intp)
        ci = np.array(cols_list, dtype=np.intp)
        subs = residues[ri[:, :, None], ci[:, None, :]]
        alive = batch_nonsingular_mod(subs, ell, inv)
        if scale is not None:
            csubs = ctx.complexm[ri[:, :, None], ci[:, None, :]]
            mags = np.abs(np.linalg.det(csubs)) * scale
        for idx in range(len(ranks)):
            if alive[idx]:
                result.checked += 1
                result.certified += 1
                if scale is not None:
                    result.observe_magnitude(float(mags[idx]))
                continue
            rows, cols = rows_list[idx], cols_list[idx]
            if exact_zero_on_dead:
                result.checked += 1
                is_zero = True
            else:
                result.fallbacks += 1
                result.checked += 1
                is_zero = _exact_minor_is_zero(ctx, rows, cols)
            if scale is not None and not is_zero:
                result.observe_magnitude(float(mags[idx]))
            if is_zero:
                result.first_zero_rank = ranks[idx]
                result.first_zero_rows = rows
                result.first_zero_cols = cols
                if fail_fast:
                    return
                # exhaustive: keep only the first witness but keep counting
                _continue_exhaustive_batch(ctx, mode, size, ranks[idx] + 1, hi,
                                           chunk, magnitudes, result)
                return
        pos = top


def _continue_exhaustive_batch(ctx, mode, size, lo, hi, chunk, magnitudes, result):
    """Finish an exhaustive size class after the first witness was found."""
    ell = ctx.modulus
    inv = ctx.inv_table
    residues = ctx.residues
    exact_zero_on_dead = ctx.ring_kind == "prime_field"
    scale = None
    if magnitudes and ctx.complexm is not None:
        scale = ctx.n ** (-size / 2)
    pos = lo
    while pos < hi:
        top = min(pos + chunk, hi)
        rows_list = []
        cols_list = []
        for _, rows, cols in _iter_pairs(ctx.n, size, mode, pos, top):
            rows_list.append(rows)
            cols_list.append(cols)
        ri = np.array(rows_list, dtype=np.intp)
        ci = np.array(cols_list, dtype=np.intp)
        subs = residues[ri[:, :, None], ci[:, None, :]]
        alive = batch_nonsingular_mod(subs, ell, inv)
        if scale is not None:
            csubs = ctx.complexm[ri[:, :, None], ci[:, None, :]]
            mags = np.abs(np.linalg.det(csubs)) * scale
        for idx in range(len(rows_list)):
            result.checked += 1
            if alive[idx]:
                result.certified += 1
                if scale is not None:
                    result.observe_magnitude(float(mags[idx]))
            elif not exact_zero_on_dead:
                result.fallbacks += 1
                if not _exact_minor_is_zero(ctx, rows_list[idx], cols_list[idx]):
                    if scale is not None:
                        result.observe_magnitude(float(mags[idx]))
        pos = top


def _scan_task_sequential(ctx, mode, size, lo, hi, fail_fast, magnitudes, result):
    scale = None
    if magnitudes and ctx.complexm is not None:
        scale = ctx.n ** (-size / 2)
    for rank, rows, cols in _iter_pairs(ctx.n, size, mode, lo, hi):
        is_zero = _exact_minor_is_zero(ctx, rows, cols)
        result.checked += 1
        if scale is not None and not is_zero:
            sub = ctx.complexm[np.ix_(rows, cols)]
            result.observe_magnitude(float(abs(np.linalg.det(sub)) * scale))
        if is_zero and result.first_zero_rank is None:
            result.first_zero_rank = rank
            result.first_zero_rows = rows
            result.first_zero_cols = cols
            if fail_fast:
                return


# --- scan driver ----------------------------------------------------------------


def _split_ranges(total: int, workers: int) -> list[tuple[int, int]]:
    if total <= 0:
        return []
    workers = max(1, min(workers, total))
    base, extra = divmod(total, workers)
    ranges = []
    lo = 0
    for i in range(workers):
        hi = lo + base + (1 if i < extra else 0)
        ranges.append((lo, hi))
        lo = hi
    return ranges


def _merge_size_results(parts: list[tuple[tuple[int, int], TaskResult]],
                        fail_fast: bool) -> TaskResult:
    """Combine per-range results of one size class.

    Ranges are disjoint and ascending, and each fail-fast task stops at
    its own first zero, so the first range reporting a witness holds the
    canonical (least-rank) one.  Under fail-fast semantics accumulation
    stops there, which makes the merged counters equal to what a single
    sequential scan would have reported.
    """
    merged = TaskResult()
    for (_, _), part in parts:
        merged.checked += part.checked
        merged.certified += part.certified
        merged.fallbacks += part.fallbacks
        if part.min_magnitude is not None:
            merged.observe_magnitude(part.min_magnitude)
        if part.first_zero_rank is not None:
            if merged.first_zero_rank is None:
                merged.first_zero_rank = part.first_zero_rank
                merged.first_zero_rows = part.first_zero_rows
                merged.first_zero_cols = part.first_zero_cols
            if fail_fast:
                break
    return merged


def _run_scan(ctx: ScanContext, mode: str, opts: ScanOptions) -> ScanReport:
    n = ctx.n
    start = time.monotonic()
    if mode == "principal":
        planned = 2 ** n - 1
        if planned > opts.budget:
            raise ResourceLimitError(
                f"principal scan of size {n} needs {planned} minors, over budget {opts.budget}")
    else:
        planned = comb(2 * n, n) - 1
        if planned > opts.budget:
            raise BudgetExceededError(
                f"all-minors scan of size {n} needs {planned} minors, over budget {opts.budget}",
                report=_empty_report(ctx, mode, planned, opts))

    fail_fast = not opts.exhaustive
    totals = TaskResult()
    witness = None

    # size 1 first: entries, checked directly and exactly
    size1 = _scan_size_one(ctx, mode)
    totals.checked += size1.checked
    totals.certified += size1.certified
    if size1.first_zero_rank is not None:
        witness = size1
        if fail_fast:
            return _finish_report(ctx, mode, planned, opts, totals, witness, start)

    pool = None
    try:
        if opts.workers > 1:
            pool = ProcessPoolExecutor(max_workers=opts.workers)
        for size in range(2, n + 1):
            per = comb(n, size)
            total = per if mode == "principal" else per * per
            ranges = _split_ranges(total, opts.workers)
            if pool is None or len(ranges) == 1:
                parts = [((lo, hi), _scan_task(ctx, mode, size, lo, hi, fail_fast,
                                               opts.chunk, opts.estimate_magnitudes))
                         for lo, hi in ranges]
            else:
                futures = [pool.submit(_scan_task, ctx, mode, size, lo, hi, fail_fast,
                                       opts.chunk, opts.estimate_magnitudes)
                           for lo, hi in ranges]
                parts = [((lo, hi), fut.result())
                         for (lo, hi), fut in zip(ranges, futures)]
            merged = _merge_size_results(parts, fail_fast)
            totals.checked += merged.checked
            totals.certified += merged.certified
            totals.fallbacks += merged.fallbacks
            if merged.min_magnitude is not None:
                totals.observe_magnitude(merged.min_magnitude)
            if merged.first_zero_rank is not None and witness is None:
                witness = merged
                if fail_fast:
                    break
    finally:
        if pool is not None:
            pool.shutdown()

    return _finish_report(ctx, mode, planned, opts, totals, witness, start)


def _scan_size_one(ctx: ScanContext, mode: str) -> TaskResult:
    result = TaskResult()
    n = ctx.n
    if mode == "principal":
        coords = [(i, i) for i in range(n)]
    else:
        coords = [(i, j) for i in range(n) for j in range(n)]
    for rank, (i, j) in enumerate(coords):
        v = ctx.values[i][j]
        zero = (v == 0) if isinstance(v, int) else v.is_zero()
        result.checked += 1
        if zero:
            result.first_zero_rank = rank
            result.first_zero_rows = (i,)
            result.first_zero_cols = (j,)
            return result
    return result


def _empty_report(ctx, mode, planned, opts) -> ScanReport:
    return ScanReport(
        task_id=opts.task_id, matrix=ctx.descriptor, ring=ctx.ring_desc, mode=mode,
        n=ctx.n, planned=planned, subsets_checked=0, verdict="indeterminate",
        witness_rows=None, witness_cols=None, min_magnitude=None, elapsed=None,
        filter_enabled=ctx.filter_enabled, filter_prime=ctx.filter_prime,
        filter_root=ctx.filter_root, filter_certified=0, filter_fallbacks=0,
        exhaustive=opts.exhaustive, budget=opts.budget)


def _finish_report(ctx, mode, planned, opts, totals, witness, start) -> ScanReport:
    refuted = witness is not None
    return ScanReport(
        task_id=opts.task_id, matrix=ctx.descriptor, ring=ctx.ring_desc, mode=mode,
        n=ctx.n, planned=planned, subsets_checked=totals.checked,
        verdict="refuted" if refuted else "verified",
        witness_rows=witness.first_zero_rows if refuted else None,
        witness_cols=witness.first_zero_cols if refuted else None,
        min_magnitude=totals.min_magnitude,
        elapsed=time.monotonic() - start,
        filter_enabled=ctx.filter_enabled, filter_prime=ctx.filter_prime,
        filter_root=ctx.filter_root, filter_certified=totals.certified,
        filter_fallbacks=totals.fallbacks,
        exhaustive=opts.exhaustive, budget=opts.budget)


# --- public operations ------------------------------------------------------------


def scan_principal(matrix, roots: RootAssignment | None = None,
                   opts: ScanOptions | None = None) -> ScanReport:
    """Scan all 2^n - 1 nonempty principal minors; refute on the first
    exact zero (canonical witness: smallest size, then lexicographic)."""
    opts = opts or ScanOptions()
    ctx = build_context(matrix, roots, opts)
    return _run_scan(ctx, "principal", opts)


def scan_all_minors(matrix, roots: RootAssignment | None = None,
                    opts: ScanOptions | None = None) -> ScanReport:
    """Scan every equal-size (rows, cols) pair: C(2n, n) - 1 minors."""
    opts = opts or ScanOptions()
    ctx = build_context(matrix, roots, opts)
    return _run_scan(ctx, "all_minors", opts)


def verify_chebotarev(p: int, opts: ScanOptions | None = None) -> ScanReport:
    """All-minors scan of F_p over Q(zeta_p); must verify for prime p."""
    from .groupfourier import GroupSpec, cyclotomic_assignment, fourier_matrix
    if not is_prime(p):
        raise InvalidInputError(f"{p} is not prime")
    opts = opts or ScanOptions()
    group = GroupSpec((p,))
    matrix = fourier_matrix(group)
    roots = cyclotomic_assignment(group)
    if not opts.task_id:
        opts = dataclasses.replace(opts, task_id=f"chebotarev-p{p}")
    return scan_all_minors(matrix, roots, opts)


@dataclass
class UncertaintyReport:
    p: int
    bound: int
    achiever_support: int          # |supp(x)| of the achieving vector
    achiever_transform_support: int
    scan: ScanReport

    def to_json_dict(self, deterministic: bool = False) -> dict:
        return {
            "p": self.p,
            "bound": self.bound,
            "achiever": {
                "vector": "delta",
                "support": self.achiever_support,
                "transform_support": self.achiever_transform_support,
                "total": self.achiever_support + self.achiever_transform_support,
            },
            "scan": self.scan.to_json_dict(deterministic),
        }


def uncertainty_bound(p: int, opts: ScanOptions | None = None) -> UncertaintyReport:
    """Support-sum lower bound for F_p, certified through the minor scan.

    A nonzero x with |supp(x)| = a whose transform vanishes at a or more
    places forces a vanishing a x a minor; the verified absence of
    vanishing minors therefore proves |supp(x)| + |supp(Fx)| >= p + 1.
    The delta vector achieves the bound: support 1, transform support p.
    """
    report = verify_chebotarev(p, opts)
    if report.verdict != "verified":
        raise ArithmeticError(
            f"minor scan for p={p} did not verify; the bound claim would be unsound")
    return UncertaintyReport(p, p + 1, 1, p, report)


def min_principal_magnitude(n: int, size_bound: int = 16) -> list[dict]:
    """Float magnitude trend: for each m <= n the minimum |principal minor|
    of the unitary-scaled m x m Fourier matrix.

    Magnitudes are 64-bit complex estimates, never used for zero testing
    anywhere else in the package.
    """
    if n < 1 or n > size_bound:
        raise ResourceLimitError(f"decay table limited to n <= {size_bound}")
    rows = []
    for m in range(1, n + 1):
        exponents = np.outer(np.arange(m), np.arange(m)) % m
        matrix = np.exp(2j * np.pi * exponents / m) / np.sqrt(m)
        minimum = np.inf
        subsets = 0
        for size in range(1, m + 1):
            combos = np.array(list(itertools.combinations(range(m), size)), dtype=np.intp)
            subs = matrix[combos[:, :, None], combos[:, None, :]]
            mags = np.abs(np.linalg.det(subs))
            subsets += len(combos)
            minimum = min(minimum, float(mags.min()))
        rows.append({"m": m, "subsets": subsets, "min_magnitude": minimum})
    return rows
