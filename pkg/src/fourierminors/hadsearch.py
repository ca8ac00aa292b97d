"""Exhaustive column-permutation search over Sylvester Hadamard matrices.

For each of the n! column permutations of the 2^k x 2^k sign matrix, every
principal minor of size 2..n-1 must be a nonzero power of two in absolute
value.  Determinants are exact 64-bit-safe integers (a 7 x 7 sign matrix
cannot exceed 7! = 5040 in absolute determinant), so no rounding is ever
involved.  Size-1 minors are +-1 and the full-size minor is the Hadamard
determinant, a power of two invariant under column permutation; both are
skipped, mirroring the interior-sizes loop of the classic search.

The search precomputes the power-of-two status of all (rows, cols) subset
pairs once, then reduces each permutation to table lookups with early
abort, which keeps the k = 3 search well under a minute.
"""

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import factorial

from .errors import InvalidInputError, ResourceLimitError
from .exactdet import det_integer
from .numbertheory import is_power_of_two

SEARCH_K_BOUND = 3
SYLVESTER_K_BOUND = 4


def sylvester(k: int) -> list[list[int]]:
    """The 2^k x 2^k Sylvester sign matrix: iterated Kronecker square of
    [[1, 1], [1, -1]]."""
    if k < 1 or k > SYLVESTER_K_BOUND:
        raise ResourceLimitError(f"sylvester(k) supports 1 <= k <= {SYLVESTER_K_BOUND}")
    base = [[1, 1], [1, -1]]
    matrix = base
    for _ in range(k - 1):
        n = len(matrix)
        matrix = [[matrix[i // 2][j // 2] * base[i % 2][j % 2]
                   for j in range(2 * n)] for i in range(2 * n)]
    return [row[:] for row in matrix]


@dataclass(frozen=True)
class MinorCheckResult:
    ok: bool
    witness: tuple | None        # row index set of the first failing minor
    minors_evaluated: int


def check_power_of_two_minors(matrix, perm, _lookup=None) -> MinorCheckResult:
    """Are all interior principal minors of matrix[., perm(.)] powers of two?

    Checks sizes 2..n-1 in ascending order, lexicographic within a size,
    aborting on the first determinant that is zero or not a power of two.
    The witness is that subset's row index set.
    """
    n = len(matrix)
    perm = tuple(perm)
    if sorted(perm) != list(range(n)):
        raise InvalidInputError(f"not a permutation of 0..{n - 1}: {perm}")
    evaluated = 0
    for size in range(2, n):
        for rows in itertools.combinations(range(n), size):
            evaluated += 1
            if _lookup is not None:
                rmask = 0
                cmask = 0
                for i in rows:
                    rmask |= 1 << i
                    cmask |= 1 << perm[i]
                ok = _lookup[(rmask, cmask)]
            else:
                cols = sorted(perm[i] for i in rows)
                d = det_integer([[matrix[i][j] for j in cols] for i in rows])
                ok = d != 0 and is_power_of_two(abs(d))
            if not ok:
                return MinorCheckResult(False, rows, evaluated)
    return MinorCheckResult(True, None, evaluated)


def _build_lookup(matrix) -> dict:
    """Power-of-two status of every equal-size (rows, cols) pair, sizes 2..n-1,
    keyed by bitmask pair."""
    n = len(matrix)
    lookup = {}
    for size in range(2, n):
        subsets = list(itertools.combinations(range(n), size))
        masks = [sum(1 << i for i in s) for s in subsets]
        for rows, rmask in zip(subsets, masks):
            rsub = [matrix[i] for i in rows]
            for cols, cmask in zip(subsets, masks):
                d = det_integer([[row[j] for j in cols] for row in rsub])
                lookup[(rmask, cmask)] = d != 0 and is_power_of_two(abs(d))
    return lookup


@dataclass
class PermSearchReport:
    k: int
    n: int
    total_permutations: int
    valid: list[tuple]
    minors_evaluated: int
    failure_samples: list[dict]
    elapsed: float | None

    def to_json_dict(self, deterministic: bool = False) -> dict:
        out = {
            "k": self.k,
            "n": self.n,
            "total_permutations": self.total_permutations,
            "valid_count": len(self.valid),
            "valid": [list(p) for p in self.valid],
            "minors_evaluated": self.minors_evaluated,
            "failure_samples": self.failure_samples,
        }
        if not deterministic:
            out["elapsed"] = self.elapsed
        return out


def _search_range(matrix, lookup, n, lo, hi, witness_sample):
    valid = []
    evaluated = 0
    failures = []
    perms = itertools.islice(itertools.permutations(range(n)), lo, hi)
    for perm in perms:
        res = check_power_of_two_minors(matrix, perm, _lookup=lookup)
        evaluated += res.minors_evaluated
        if res.ok:
            valid.append(perm)
        elif len(failures) < witness_sample:
            failures.append({"perm": list(perm), "witness": list(res.witness)})
    return valid, evaluated, failures


def search_permutations(k: int, workers: int = 1,
                        witness_sample: int = 5) -> PermSearchReport:
    """Exhaustively test all n! column permutations of the Sylvester matrix.

    Valid permutations come back in lexicographic order regardless of the
    worker count; workers own contiguous rank ranges merged in order.
    Refuses k > 3 (16! permutations is out of desk scale; use
    check_power_of_two_minors to test individual k = 4 permutations).
    """
    if k < 1 or k > SEARCH_K_BOUND:
        raise ResourceLimitError(
            f"exhaustive search supports 1 <= k <= {SEARCH_K_BOUND}; "
            f"for k = 4 check individual permutations instead")
    start = time.monotonic()
    matrix = sylvester(k)
    n = 2 ** k
    total = factorial(n)
    lookup = _build_lookup(matrix)

    workers = max(1, min(workers, total))
    base, extra = divmod(total, workers)
    ranges = []
    lo = 0
    for i in range(workers):
        hi = lo + base + (1 if i < extra else 0)
        if hi > lo:
            ranges.append((lo, hi))
        lo = hi

    if len(ranges) == 1:
        parts = [_search_range(matrix, lookup, n, lo, hi, witness_sample)
                 for lo, hi in ranges]
    else:
        with ProcessPoolExecutor(max_workers=len(ranges)) as pool:
            futures = [pool.submit(_search_range, matrix, lookup, n, lo, hi,
                                   witness_sample)
                       for lo, hi in ranges]
            parts = [f.result() for f in futures]

    valid: list[tuple] = []
    evaluated = 0
    failures: list[dict] = []
    for part_valid, part_eval, part_failures in parts:
        valid.extend(part_valid)
        evaluated += part_eval
        for f in part_failures:
            if len(failures) < witness_sample:
                failures.append(f)
    return PermSearchReport(k, n, total, valid, evaluated, failures,
                            time.monotonic() - start)
