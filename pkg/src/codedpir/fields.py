"""Exact arithmetic over GF(p^alpha) and dense matrices over such fields.

Elements are canonical integers in [0, q): the integer's base-p digits are the
coefficients (low to high) of the polynomial residue modulo a canonical
irreducible. The canonical modulus is the lexicographically smallest monic
irreducible of the requested degree, so element encodings are reproducible
across runs. Extension fields GF(q^ell) are ordinary fields GF(p^(alpha*ell))
carrying a cached embedding of the subfield, which is what lets a query matrix
over GF(q) act on message symbols in GF(q^ell).

Everything here is immutable after construction and safe to share.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import (
    DegreeOutOfRange,
    DimensionMismatch,
    FieldMismatch,
    NonPrime,
    RankDeficient,
)

_TABLE_MAX = 1 << 16  # build log/exp tables up to this field order
_MAX_DEGREE = 8


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# --- polynomial helpers over GF(p), coefficients low-to-high ----------------

def _poly_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mulmod(a: Sequence[int], b: Sequence[int], mod: Sequence[int], p: int) -> list[int]:
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] = (prod[i + j] + ai * bj) % p
    return _poly_modred(prod, mod, p)


def _poly_modred(c: list[int], mod: Sequence[int], p: int) -> list[int]:
    deg_m = len(mod) - 1
    c = list(c)
    for i in range(len(c) - 1, deg_m - 1, -1):
        coef = c[i]
        if coef:
            c[i] = 0
            for j in range(deg_m):
                c[i - deg_m + j] = (c[i - deg_m + j] - coef * mod[j]) % p
    return _poly_trim(c)


def _poly_powmod(base: Sequence[int], e: int, mod: Sequence[int], p: int) -> list[int]:
    result = [1]
    acc = _poly_modred(list(base), mod, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, acc, mod, p)
        acc = _poly_mulmod(acc, acc, mod, p)
        e >>= 1
    return result


def _poly_rem(a: list[int], b: list[int], p: int) -> list[int]:
    a = _poly_trim(list(a))
    inv_lead = pow(b[-1], p - 2, p)
    while a and len(a) >= len(b):
        coef = (a[-1] * inv_lead) % p
        shift = len(a) - len(b)
        for j, bj in enumerate(b):
            a[shift + j] = (a[shift + j] - coef * bj) % p
        _poly_trim(a)
    return a


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b:
        a, b = b, _poly_rem(a, b, p)
    return a


def _is_irreducible(mod: Sequence[int], p: int) -> bool:
    """Rabin test: x^(p^d) = x mod f, and gcd(x^(p^(d/r)) - x, f) = 1 for prime r | d."""
    d = len(mod) - 1
    if d == 1:
        return True
    x = [0, 1]
    xq = _poly_powmod(x, p ** d, mod, p)
    if _poly_trim(list(xq)) != [0, 1]:
        return False
    primes = []
    dd = d
    r = 2
    while dd > 1:
        if dd % r == 0:
            primes.append(r)
            while dd % r == 0:
                dd //= r
        r += 1
    for r in primes:
        xr = _poly_powmod(x, p ** (d // r), mod, p)
        diff = list(xr) + [0] * max(0, 2 - len(xr))
        diff[1] = (diff[1] - 1) % p
        g = _poly_gcd(list(mod), _poly_trim(diff), p)
        if len(g) - 1 > 0:
            return False
    return True


def canonical_modulus(p: int, alpha: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree alpha over GF(p).

    Candidates are ordered by the integer whose base-p digits are the
    non-leading coefficients (low to high): for GF(8) this yields x^3 + x + 1.
    """
    if alpha == 1:
        return (0, 1)  # the polynomial x; prime field needs no reduction
    for v in range(p ** alpha):
        coeffs = []
        t = v
        for _ in range(alpha):
            coeffs.append(t % p)
            t //= p
        mod = coeffs + [1]
        if _is_irreducible(mod, p):
            return tuple(mod)
    raise AssertionError("no irreducible polynomial found (unreachable)")


class FiniteField:
    """GF(p^alpha) with canonical integer element encoding.

    Do not call directly for shared instances; use :func:`field_make`, which
    caches fields so identity comparison (`a.field is b.field`) works.
    """

    def __init__(self, p: int, alpha: int, modulus: Sequence[int] | None = None):
        if not _is_prime(p):
            raise NonPrime(f"{p} is not prime")
        if not 1 <= alpha <= _MAX_DEGREE:
            raise DegreeOutOfRange(f"alpha={alpha} outside 1..{_MAX_DEGREE}")
        self.p = p
        self.alpha = alpha
        self.order = p ** alpha
        if modulus is None:
            modulus = canonical_modulus(p, alpha)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != alpha + 1 or modulus[-1] != 1:
                raise DegreeOutOfRange("modulus must be monic of degree alpha")
            if alpha > 1 and not _is_irreducible(modulus, p):
                raise NonPrime(f"modulus {modulus} is reducible over GF({p})")
        self.modulus = tuple(modulus)
        self._exp: list[int] | None = None
        self._log: list[int] | None = None
        self._embeddings: dict[tuple[int, int], list[int]] = {}
        if 1 < self.order <= _TABLE_MAX and alpha > 1:
            self._build_tables()

    # --- encoding ---------------------------------------------------------

    def to_digits(self, rep: int) -> list[int]:
        digits = []
        for _ in range(self.alpha):
            digits.append(rep % self.p)
            rep //= self.p
        return digits

    def from_digits(self, digits: Iterable[int]) -> int:
        rep = 0
        for d in reversed(list(digits)):
            rep = rep * self.p + (d % self.p)
        return rep

    # --- arithmetic on canonical integer reps ------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.alpha == 1:
            return (a + b) % self.p
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.alpha):
            out += ((a + b) % p) * mult
            a, b = a // p, b // p
            mult *= p
        return out

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.alpha == 1:
            return (-a) % self.p
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.alpha):
            out += ((-a) % p) * mult
            a //= p
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.alpha == 1:
            return (a * b) % self.p
        if self._exp is not None:
            if a == 0 or b == 0:
                return 0
            return self._exp[self._log[a] + self._log[b]]
        prod = _poly_mulmod(self.to_digits(a), self.to_digits(b), self.modulus, self.p)
        return self.from_digits(prod + [0] * (self.alpha - len(prod)))

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.alpha == 1:
            return pow(a, self.p - 2, self.p)
        if self._exp is not None:
            return self._exp[(self.order - 1) - self._log[a]]
        return self.pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        e = int(e)
        if e < 0:
            a, e = self.inv(a), -e
        out = 1
        acc = a
        while e:
            if e & 1:
                out = self.mul(out, acc)
            acc = self.mul(acc, acc)
            e >>= 1
        return out

    def _build_tables(self) -> None:
        q = self.order
        # find a multiplicative generator by direct order check
        for g in range(2, q):
            seen = 1
            x = g
            count = 1
            while x != 1:
                x = self._mul_poly(x, g)
                count += 1
                if count > q:
                    break
            if count == q - 1:
                exp = [0] * (2 * (q - 1))
                log = [0] * q
                x = 1
                for i in range(q - 1):
                    exp[i] = x
                    exp[i + q - 1] = x
                    log[x] = i
                    x = self._mul_poly(x, g)
                self._exp, self._log = exp, log
                self.generator = g
                return
        raise AssertionError("no generator found (unreachable)")

    def _mul_poly(self, a: int, b: int) -> int:
        prod = _poly_mulmod(self.to_digits(a), self.to_digits(b), self.modulus, self.p)
        return self.from_digits(prod + [0] * (self.alpha - len(prod)))

    # --- structure ----------------------------------------------------------

    def element(self, rep: int) -> "FieldElement":
        return FieldElement(self, int(rep) % self.order)

    def elements(self) -> Iterable["FieldElement"]:
        return (FieldElement(self, r) for r in range(self.order))

    def extension(self, ell: int) -> "FiniteField":
        """GF(q^ell) as GF(p^(alpha*ell)), with this field's embedding cached."""
        if ell == 1:
            return self
        ext = field_make(self.p, self.alpha * ell)
        ext.embedding_from(self)  # precompute and cache
        return ext

    def embedding_from(self, sub: "FiniteField") -> list[int]:
        """Embedding table sub -> self (field homomorphism on canonical reps)."""
        if sub is self:
            return list(range(self.order))
        key = (sub.p, sub.alpha)
        cached = self._embeddings.get(key)
        if cached is not None:
            return cached
        if sub.p != self.p or self.alpha % sub.alpha != 0:
            raise FieldMismatch(
                f"GF({sub.p}^{sub.alpha}) is not a subfield of GF({self.p}^{self.alpha})")
        # map the representation generator x of `sub` to the smallest root of
        # sub.modulus inside this field, then extend linearly over GF(p)
        root = None
        for cand in range(self.order):
            acc = 0
            for coef in reversed(sub.modulus):
                acc = self.add(self.mul(acc, cand), coef % self.p)
            if acc == 0:
                root = cand
                break
        if root is None:
            raise FieldMismatch("no embedding root found")
        table = [0] * sub.order
        for rep in range(sub.order):
            digits = sub.to_digits(rep)
            acc = 0
            for coef in reversed(digits):
                acc = self.add(self.mul(acc, root), coef)
            table[rep] = acc
        self._embeddings[key] = table
        return table

    def has_subfield(self, sub: "FiniteField") -> bool:
        return sub is self or (sub.p == self.p and self.alpha % sub.alpha == 0)

    def __repr__(self) -> str:
        if self.alpha == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.alpha})"

    def __reduce__(self):
        if self.modulus == canonical_modulus(self.p, self.alpha):
            return (field_make, (self.p, self.alpha))
        return (FiniteField, (self.p, self.alpha, self.modulus))


_FIELD_CACHE: dict[tuple[int, int], FiniteField] = {}


def field_make(p: int, alpha: int = 1) -> FiniteField:
    """The field GF(p^alpha) with its canonical modulus (cached singleton)."""
    key = (int(p), int(alpha))
    field = _FIELD_CACHE.get(key)
    if field is None:
        field = FiniteField(*key)
        _FIELD_CACHE[key] = field
    return field


class FieldElement:
    """A field element with operator sugar; wraps (field, canonical rep)."""

    __slots__ = ("field", "rep")

    def __init__(self, field: FiniteField, rep: int):
        self.field = field
        self.rep = int(rep) % field.order

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.rep
        return int(other) % self.field.order

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.rep, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.rep, self._coerce(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._coerce(other), self.rep))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.rep, self._coerce(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.rep, self._coerce(other)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.rep))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.rep, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.rep))

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field is other.field and self.rep == other.rep
        return self.rep == int(other) % self.field.order

    def __hash__(self):
        return hash((id(self.field), self.rep))

    def __repr__(self):
        return f"{self.field}({self.rep})"


class Matrix:
    """Dense matrix over a finite field; entries stored as canonical int reps."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: FiniteField, data: Sequence[Sequence[int]],
                 rows: int | None = None, cols: int | None = None):
        self.field = field
        self.data = [[int(x) % field.order for x in row] for row in data]
        self.rows = len(self.data) if rows is None else rows
        self.cols = (len(self.data[0]) if self.data else 0) if cols is None else cols
        for row in self.data:
            if len(row) != self.cols:
                raise DimensionMismatch("ragged rows")

    # --- constructors -------------------------------------------------------

    @staticmethod
    def identity(field: FiniteField, n: int) -> "Matrix":
        return Matrix(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def zero(field: FiniteField, rows: int, cols: int) -> "Matrix":
        return Matrix(field, [[0] * cols for _ in range(rows)], rows, cols)

    @staticmethod
    def column(field: FiniteField, entries: Sequence[int]) -> "Matrix":
        return Matrix(field, [[int(e)] for e in entries])

    # --- accessors ------------------------------------------------------------

    def at(self, i: int, j: int) -> int:
        return self.data[i][j]

    def element(self, i: int, j: int) -> FieldElement:
        return FieldElement(self.field, self.data[i][j])

    def row(self, i: int) -> list[int]:
        return list(self.data[i])

    def col(self, j: int) -> list[int]:
        return [row[j] for row in self.data]

    def restrict_cols(self, cols: Sequence[int]) -> "Matrix":
        cols = list(cols)
        return Matrix(self.field, [[row[j] for j in cols] for row in self.data],
                      self.rows, len(cols))

    def restrict_rows(self, rows: Sequence[int]) -> "Matrix":
        return Matrix(self.field, [self.data[i] for i in rows])

    def transpose(self) -> "Matrix":
        return Matrix(self.field, [list(col) for col in zip(*self.data)] if self.data else [],
                      self.cols, self.rows)

    def stack(self, other: "Matrix") -> "Matrix":
        if other.cols != self.cols:
            raise DimensionMismatch("stack: column counts differ")
        if other.field is not self.field:
            raise FieldMismatch("stack: fields differ")
        return Matrix(self.field, self.data + other.data)

    def copy(self) -> "Matrix":
        return Matrix(self.field, self.data, self.rows, self.cols)

    def lift(self, ext: FiniteField) -> "Matrix":
        """This matrix with entries embedded into the extension field `ext`."""
        if ext is self.field:
            return self
        table = ext.embedding_from(self.field)
        return Matrix(ext, [[table[x] for x in row] for row in self.data],
                      self.rows, self.cols)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Matrix) and other.field is self.field
                and other.data == self.data)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self.data)
        return f"Matrix({self.field}, {self.rows}x{self.cols}: {body})"

    # --- JSON wire format -------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {"q": self.field.order, "rows": self.rows, "cols": self.cols,
                "entries": [list(row) for row in self.data]}

    @staticmethod
    def from_json_dict(obj: dict) -> "Matrix":
        q = int(obj["q"])
        p, alpha = _factor_prime_power(q)
        field = field_make(p, alpha)
        m = Matrix(field, obj["entries"])
        if m.rows != obj["rows"] or m.cols != obj["cols"]:
            raise DimensionMismatch("JSON header disagrees with entries")
        return m


def _factor_prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if _is_prime(p) and q % p == 0:
            alpha = 0
            t = q
            while t % p == 0:
                t //= p
                alpha += 1
            if t != 1:
                raise NonPrime(f"{q} is not a prime power")
            return p, alpha
    raise NonPrime(f"{q} is not a prime power")


# --- elimination -------------------------------------------------------------

def mat_rref(M: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the ordered pivot column indices (0-based)."""
    f = M.field
    a = [list(row) for row in M.data]
    rows, cols = M.rows, M.cols
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot_row = None
        for i in range(r, rows):
            if a[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        a[r], a[pivot_row] = a[pivot_row], a[r]
        inv = f.inv(a[r][c])
        if inv != 1:
            a[r] = [f.mul(inv, x) for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                coef = a[i][c]
                arow = a[r]
                irow = a[i]
                for j in range(c, cols):
                    if arow[j]:
                        irow[j] = f.sub(irow[j], f.mul(coef, arow[j]))
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return Matrix(f, a, rows, cols), pivots


def mat_rank(M: Matrix) -> int:
    """Rank over the matrix's field; 0 for an all-zero or empty matrix."""
    f = M.field
    a = [list(row) for row in M.data]
    rows, cols = M.rows, M.cols
    rank = 0
    for c in range(cols):
        pivot_row = None
        for i in range(rank, rows):
            if a[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        a[rank], a[pivot_row] = a[pivot_row], a[rank]
        inv = f.inv(a[rank][c])
        prow = a[rank]
        if inv != 1:
            for j in range(c, cols):
                if prow[j]:
                    prow[j] = f.mul(inv, prow[j])
        for i in range(rank + 1, rows):
            if a[i][c]:
                coef = a[i][c]
                irow = a[i]
                for j in range(c, cols):
                    if prow[j]:
                        irow[j] = f.sub(irow[j], f.mul(coef, prow[j]))
        rank += 1
        if rank == rows:
            break
    return rank


def _common_field(a: FiniteField, b: FiniteField) -> FiniteField:
    if a is b:
        return a
    if a.has_subfield(b):
        return a
    if b.has_subfield(a):
        return b
    raise FieldMismatch(f"{a} and {b} are not nested")


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    """Product in the larger of the two fields (one must embed in the other)."""
    if A.cols != B.rows:
        raise DimensionMismatch(f"{A.rows}x{A.cols} times {B.rows}x{B.cols}")
    field = _common_field(A.field, B.field)
    A = A.lift(field)
    B = B.lift(field)
    f = field
    bt = list(zip(*B.data)) if B.data else []
    out = []
    for arow in A.data:
        orow = []
        for bcol in bt:
            acc = 0
            for x, y in zip(arow, bcol):
                if x and y:
                    acc = f.add(acc, f.mul(x, y))
            orow.append(acc)
        out.append(orow)
    return Matrix(f, out, A.rows, B.cols)


def mat_solve(A: Matrix, b: Matrix) -> Matrix:
    """The unique x with A x = b; RankDeficient if none or not unique.

    `b` may live in an extension of A's field (subfield scalar action); the
    solution is returned over b's field.
    """
    if b.cols != 1 or b.rows != A.rows:
        raise DimensionMismatch("b must be a column matching A's row count")
    field = _common_field(A.field, b.field)
    A = A.lift(field)
    b = b.lift(field)
    f = field
    aug = Matrix(f, [arow + brow for arow, brow in zip(A.data, b.data)],
                 A.rows, A.cols + 1)
    red, pivots = mat_rref(aug)
    if A.cols in pivots:
        raise RankDeficient("inconsistent system")
    if len(pivots) < A.cols:
        raise RankDeficient("rank-deficient system: no unique solution")
    x = [0] * A.cols
    for r, c in enumerate(pivots):
        x[c] = red.data[r][A.cols]
    return Matrix.column(f, x)


def null_space(M: Matrix) -> Matrix:
    """Matrix whose rows span {x : M x^T = 0}; may have zero rows."""
    f = M.field
    red, pivots = mat_rref(M)
    free = [c for c in range(M.cols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [0] * M.cols
        vec[fc] = 1
        for r, pc in enumerate(pivots):
            vec[pc] = f.neg(red.data[r][fc])
        basis.append(vec)
    return Matrix(f, basis, len(basis), M.cols)


def mat_inverse(M: Matrix) -> Matrix:
    if M.rows != M.cols:
        raise DimensionMismatch("inverse of non-square matrix")
    f = M.field
    aug = Matrix(f, [row + [1 if i == j else 0 for j in range(M.rows)]
                     for i, row in enumerate(M.data)], M.rows, 2 * M.rows)
    red, pivots = mat_rref(aug)
    if pivots != list(range(M.rows)):
        raise RankDeficient("matrix is singular")
    return Matrix(f, [row[M.rows:] for row in red.data], M.rows, M.rows)
