"""Z2-graded linear algebra over exact rationals.

Everything is indexed by a fixed basis 0..dim-1, each index carrying a
parity (0 = even, 1 = odd).  Scalars are `fractions.Fraction` throughout;
no floating point enters anywhere in this package.
"""

from __future__ import annotations

from fractions import Fraction

EVEN = 0
ODD = 1


class SingularMatrixError(ValueError):
    """Raised when an exact inverse is requested of a singular matrix."""


def koszul_sign(perm, parities):
    """Sign picked up when a word of graded symbols is reordered.

    ``perm[j]`` is the index, in the original word, of the symbol that
    lands at position ``j`` of the reordered word; ``parities[i]`` is the
    parity of original symbol ``i``.  Each crossing of two odd symbols
    contributes a factor -1, so the result is (-1)**(odd-odd inversions).
    """
    n = len(perm)
    if len(parities) != n or sorted(perm) != list(range(n)):
        raise ValueError("perm must be a permutation of range(len(parities))")
    sign = 1
    for j in range(n):
        pj = perm[j]
        if not parities[pj]:
            continue
        for k in range(j + 1, n):
            pk = perm[k]
            if pj > pk and parities[pk]:
                sign = -sign
    return sign


# ---------------------------------------------------------------------------
# exact dense matrices (tuples of tuples of Fraction)

def as_matrix(rows):
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def identity_matrix(n):
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def zero_matrix(n, m=None):
    m = n if m is None else m
    return tuple((Fraction(0),) * m for _ in range(n))


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    if a and len(a[0]) != k:
        raise ValueError("shape mismatch")
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            row.append(sum((a[i][t] * b[t][j] for t in range(k)), Fraction(0)))
        out.append(tuple(row))
    return tuple(out)


def mat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a, b):
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(c, a):
    c = Fraction(c)
    return tuple(tuple(c * x for x in row) for row in a)


def transpose(a):
    return tuple(zip(*a)) if a else ()


def mat_is_zero(a):
    return all(x == 0 for row in a for x in row)


def mat_inverse(a):
    """Exact inverse by Gauss-Jordan elimination with partial pivoting."""
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrixError("matrix is singular over Q")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def supertrace(mat, parities):
    """Trace weighted by (-1)**parity of each diagonal slot."""
    total = Fraction(0)
    for i, p in enumerate(parities):
        total += -mat[i][i] if p else mat[i][i]
    return total


class Operator:
    """Linear map with a declared parity, stored as a dense exact matrix.

    ``mat[i][j]`` is the coefficient of basis vector i in the image of
    basis vector j, so composition is plain matrix product.
    """

    __slots__ = ("mat", "parity")

    def __init__(self, mat, parity):
        if parity not in (EVEN, ODD):
            raise ValueError("parity must be 0 or 1")
        self.mat = as_matrix(mat)
        self.parity = parity

    @property
    def dim(self):
        return len(self.mat)

    @classmethod
    def identity(cls, dim):
        return cls(identity_matrix(dim), EVEN)

    @classmethod
    def zero(cls, dim, parity=EVEN):
        return cls(zero_matrix(dim), parity)

    def compose(self, other):
        """self after other."""
        return Operator(mat_mul(self.mat, other.mat),
                        (self.parity + other.parity) % 2)

    def plus(self, other):
        if self.parity != other.parity:
            raise ValueError("cannot add operators of different parity")
        return Operator(mat_add(self.mat, other.mat), self.parity)

    def minus(self, other):
        if self.parity != other.parity:
            raise ValueError("cannot subtract operators of different parity")
        return Operator(mat_sub(self.mat, other.mat), self.parity)

    def scale(self, c):
        return Operator(mat_scale(c, self.mat), self.parity)

    def apply(self, coords):
        """Apply to a sparse coordinate dict {index: Fraction}."""
        out = {}
        for j, c in coords.items():
            if c == 0:
                continue
            for i in range(self.dim):
                m = self.mat[i][j]
                if m != 0:
                    out[i] = out.get(i, Fraction(0)) + m * c
        return {i: c for i, c in out.items() if c != 0}

    def is_zero(self):
        return mat_is_zero(self.mat)

    def parity_consistent(self, parities):
        """True if every nonzero entry shifts parity by self.parity."""
        for i in range(self.dim):
            for j in range(self.dim):
                if self.mat[i][j] != 0 and (parities[i] - parities[j]) % 2 != self.parity:
                    return False
        return True

    def __eq__(self, other):
        return (isinstance(other, Operator)
                and self.parity == other.parity and self.mat == other.mat)

    def __hash__(self):
        return hash((self.parity, self.mat))

    def __repr__(self):
        return f"Operator(parity={self.parity}, dim={self.dim})"


def vec_add(u, v):
    out = dict(u)
    for i, c in v.items():
        out[i] = out.get(i, Fraction(0)) + c
    return {i: c for i, c in out.items() if c != 0}


def vec_scale(c, u):
    c = Fraction(c)
    if c == 0:
        return {}
    return {i: c * x for i, x in u.items()}
