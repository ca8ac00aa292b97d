"""Symbolic Fourier matrices on finite Abelian groups.

A matrix is stored as a table of exponent tuples, one exponent per cyclic
factor, with a lazy column permutation.  Concrete matrices only appear
when a root assignment maps each factor to a root of unity in a target
ring (a cyclotomic field, a finite field, or the plain integers for
groups built from Z_2 factors).  Evaluating late lets one exponent table
serve both characteristic-zero scans and finite-field reductions.
"""

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

from .errors import InvalidInputError, ResourceLimitError
from .exactring import CycElem, CycField
from .finitefield import FqElem, FqField, multiplicative_order
from .numbertheory import crt_pair

DEFAULT_GROUP_ORDER_BOUND = 64


@dataclass(frozen=True)
class GroupSpec:
    """An ordered product of cyclic groups Z_{n_1} x ... x Z_{n_d}."""

    factors: tuple[int, ...]

    def __post_init__(self):
        if not self.factors or any(n < 2 for n in self.factors):
            raise InvalidInputError("every cyclic factor must be at least 2")

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def exponent(self) -> int:
        """lcm of the factor orders: the natural cyclotomic conductor."""
        return reduce(math.lcm, self.factors)

    def index_to_tuple(self, index: int) -> tuple[int, ...]:
        """Mixed-radix decoding, leftmost factor most significant."""
        parts = []
        for n in reversed(self.factors):
            parts.append(index % n)
            index //= n
        return tuple(reversed(parts))

    def tuple_to_index(self, parts) -> int:
        index = 0
        for n, p in zip(self.factors, parts):
            index = index * n + (p % n)
        return index

    def __str__(self):
        return "x".join(str(n) for n in self.factors)


def parse_group(text: str) -> GroupSpec:
    """Parse the CLI group syntax, e.g. "4", "2x3", "2x2x2x7"."""
    try:
        factors = tuple(int(part) for part in text.lower().split("x"))
    except ValueError:
        raise InvalidInputError(f"cannot parse group spec {text!r}") from None
    return GroupSpec(factors)


def _check_permutation(perm, n: int) -> tuple[int, ...]:
    perm = tuple(perm)
    if len(perm) != n or sorted(perm) != list(range(n)):
        raise InvalidInputError(f"not a permutation of 0..{n - 1}: {perm}")
    return perm


@dataclass(frozen=True)
class IndexSet:
    """Strictly increasing subset of a row/column index range."""

    indices: tuple[int, ...]

    def __post_init__(self):
        ixs = self.indices
        if any(b <= a for a, b in zip(ixs, ixs[1:])) or (ixs and ixs[0] < 0):
            raise InvalidInputError(f"index set must be strictly increasing: {ixs}")

    def __iter__(self):
        return iter(self.indices)

    def __len__(self):
        return len(self.indices)


class ExponentMatrix:
    """n x n table of per-factor exponents with a lazy column permutation."""

    __slots__ = ("group", "n", "entries", "col_perm")

    def __init__(self, group: GroupSpec, entries, col_perm=None):
        self.group = group
        self.n = len(entries)
        self.entries = entries
        self.col_perm = (tuple(range(self.n)) if col_perm is None
                         else _check_permutation(col_perm, self.n))

    def entry(self, j: int, k: int) -> tuple[int, ...]:
        """Effective exponent tuple at (j, k), column permutation applied."""
        return self.entries[j][self.col_perm[k]]

    def __repr__(self):
        return f"ExponentMatrix(group={self.group}, n={self.n})"

    def describe(self) -> str:
        label = f"F[{self.group}]"
        if self.col_perm != tuple(range(self.n)):
            label += f" cols{list(self.col_perm)}"
        return label


def fourier_matrix(group: GroupSpec,
                   order_bound: int = DEFAULT_GROUP_ORDER_BOUND) -> ExponentMatrix:
    """Canonical Fourier exponent matrix: entry (j,k) = (j_l * k_l mod n_l)_l."""
    n = group.order
    if n > order_bound:
        raise ResourceLimitError(
            f"group order {n} exceeds the configured bound {order_bound}")
    tuples = [group.index_to_tuple(i) for i in range(n)]
    entries = tuple(
        tuple(tuple(j_l * k_l % n_l for j_l, k_l, n_l in zip(jt, kt, group.factors))
              for kt in tuples)
        for jt in tuples)
    return ExponentMatrix(group, entries)


def kronecker(a: ExponentMatrix, b: ExponentMatrix,
              order_bound: int = DEFAULT_GROUP_ORDER_BOUND) -> ExponentMatrix:
    """Kronecker product; blocks of b indexed by entries of a.

    Index j of the product decomposes as j = q_j * b.n + r_j; the entry at
    (j, k) concatenates a's effective exponents at (q_j, q_k) with b's at
    (r_j, r_k).  Any column permutations on the inputs are resolved into
    the materialized entries, so the result carries the identity.
    """
    n = a.n * b.n
    if n > order_bound:
        raise ResourceLimitError(
            f"product order {n} exceeds the configured bound {order_bound}")
    group = GroupSpec(a.group.factors + b.group.factors)
    entries = tuple(
        tuple(a.entry(j // b.n, k // b.n) + b.entry(j % b.n, k % b.n)
              for k in range(n))
        for j in range(n))
    return ExponentMatrix(group, entries)


def apply_col_permutation(a: ExponentMatrix, perm) -> ExponentMatrix:
    """Lazy view with perm composed into the existing column permutation."""
    perm = _check_permutation(perm, a.n)
    composed = tuple(a.col_perm[perm[k]] for k in range(a.n))
    return ExponentMatrix(a.group, a.entries, composed)


def crt_equivalence(m: int, n: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Permutations (sigma, tau) aligning the Z_m x Z_n Fourier matrix with F_{mn}.

    Entrywise, (F_m (x) F_n)[j, k] = F_{mn}[sigma[j], tau[k]]: sigma sends
    j = q*n + r to the CRT representative of (q mod m, r mod n), and tau
    additionally twists by the cofactors so the bilinear exponent matches.
    """
    if m < 1 or n < 1 or math.gcd(m, n) != 1:
        raise InvalidInputError(f"{m} and {n} must be coprime positive integers")
    sigma = []
    tau = []
    for idx in range(m * n):
        q, r = divmod(idx, n)
        sigma.append(crt_pair(q % m, m, r % n, n))
        tau.append(crt_pair(n * q % m, m, m * r % n, n))
    return tuple(sigma), tuple(tau)


class RootAssignment:
    """One root-of-unity image per cyclic factor, in a common target ring.

    The image order must divide the factor order: order exactly n_l gives
    the faithful evaluation, order 1 (image one) realizes the quotient map
    that collapses that factor.  ring is a CycField, an FqField, or the
    builtin int type for plus/minus-one matrices.
    """

    __slots__ = ("group", "images", "ring")

    def __init__(self, group: GroupSpec, images, ring):
        images = tuple(images)
        if len(images) != len(group.factors):
            raise InvalidInputError("one root image per group factor required")
        for n_l, image in zip(group.factors, images):
            order = _image_order(image, ring)
            if n_l % order != 0:
                raise InvalidInputError(
                    f"image order {order} does not divide factor {n_l}")
        self.group = group
        self.images = images
        self.ring = ring

    def describe(self) -> str:
        if isinstance(self.ring, CycField):
            return f"Q(zeta_{self.ring.N})"
        if isinstance(self.ring, FqField):
            return f"F_{self.ring.q}^{self.ring.k}" if self.ring.k > 1 else f"F_{self.ring.q}"
        return "Z"


def _image_order(image, ring) -> int:
    if ring is int:
        if image == 1:
            return 1
        if image == -1:
            return 2
        raise InvalidInputError("integer root images must be +1 or -1")
    if isinstance(ring, CycField):
        if not isinstance(image, CycElem) or image.field != ring:
            raise InvalidInputError("root image does not belong to the target field")
        # images are expected to be root powers; find the order by powering
        acc = image
        for t in range(1, ring.N + 1):
            if acc == ring.one():
                return t
            acc = acc * image
        raise InvalidInputError("image is not a root of unity of order dividing N")
    if isinstance(ring, FqField):
        if not isinstance(image, FqElem) or image.field != ring:
            raise InvalidInputError("root image does not belong to the target field")
        return multiplicative_order(image)
    raise InvalidInputError(f"unsupported target ring {ring!r}")


def cyclotomic_assignment(group: GroupSpec, field: CycField | None = None) -> RootAssignment:
    """Faithful images zeta_N^(N/n_l) in Q(zeta_N), N the group exponent."""
    N = group.exponent
    if field is None:
        field = CycField(N)
    if field.N % N != 0:
        raise InvalidInputError(
            f"conductor {field.N} cannot host roots of order {N}")
    images = [field.root_power(field.N // n_l) for n_l in group.factors]
    return RootAssignment(group, images, field)


def finite_field_assignment(group: GroupSpec, field: FqField,
                            root: FqElem | None = None) -> RootAssignment:
    """Images w^(N/n_l) for a primitive N-th root w in the finite field."""
    from .finitefield import primitive_root_of_unity
    N = group.exponent
    if root is None:
        root = primitive_root_of_unity(field, N)
    images = [root ** (N // n_l) for n_l in group.factors]
    return RootAssignment(group, images, field)


def sign_assignment(group: GroupSpec) -> RootAssignment:
    """Integer images -1 for every factor; requires all factors equal 2."""
    if any(n != 2 for n in group.factors):
        raise InvalidInputError("integer evaluation needs all factors equal to 2")
    return RootAssignment(group, [-1] * len(group.factors), int)


def quotient_assignment(base: RootAssignment, collapse: int) -> RootAssignment:
    """Copy of base with the image of factor index `collapse` replaced by one."""
    one = 1 if base.ring is int else base.ring.one()
    images = list(base.images)
    images[collapse] = one
    return RootAssignment(base.group, images, base.ring)


def evaluate(matrix: ExponentMatrix, roots: RootAssignment, ring=None) -> list[list]:
    """Concrete matrix with entry (j,k) = prod_l image_l ^ exponent_l.

    The column permutation is applied.  Entries are CycElem, FqElem, or
    int depending on the assignment's ring.
    """
    if roots.group.factors != matrix.group.factors:
        raise InvalidInputError("root assignment built for a different group")
    if ring is not None and ring != roots.ring:
        raise InvalidInputError("explicit ring disagrees with the root assignment")
    one = 1 if roots.ring is int else roots.ring.one()
    # power tables per factor
    tables = []
    for n_l, image in zip(matrix.group.factors, roots.images):
        row = [one]
        for _ in range(n_l - 1):
            row.append(row[-1] * image)
        tables.append(row)
    out = []
    for j in range(matrix.n):
        row = []
        for k in range(matrix.n):
            exps = matrix.entry(j, k)
            val = one
            for table, e in zip(tables, exps):
                if e:
                    val = val * table[e]
            row.append(val)
        out.append(row)
    return out


def submatrix(matrix_values, rows, cols) -> list[list]:
    return [[matrix_values[r][c] for c in cols] for r in rows]


def write_matrix_csv(path, matrix_values) -> None:
    """CSV export; cyclotomic and finite-field entries become coefficient vectors."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        for row in matrix_values:
            out = []
            for v in row:
                if isinstance(v, CycElem):
                    out.append(";".join(v.to_coeff_strings()))
                elif isinstance(v, FqElem):
                    out.append(";".join(str(c) for c in v.coeffs))
                else:
                    out.append(str(v))
            writer.writerow(out)
