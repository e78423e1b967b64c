"""[n,k] linear codes over GF(q) and the code-level predicates the protocols use.

A `LinearCode` is an immutable pair (G, H) with rank(G) = k, rank(H) = n-k and
G H^T = 0. Coordinates are 0-based everywhere in code; the wire formats and CLI
render 1-based coordinates to match the usual coding-theory convention.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import (
    DimensionMismatch,
    EmptySupport,
    NotCorrectable,
    RankDeficientGenerator,
    TooLarge,
)
from .fields import (
    FiniteField,
    Matrix,
    mat_inverse,
    mat_mul,
    mat_rank,
    mat_rref,
    mat_solve,
    null_space,
)

ENUM_BUDGET = 1 << 21          # codeword-enumeration ceiling for q^k
COLUMN_SEARCH_BUDGET = 5_000_000  # cumulative column-subset ceiling
SUBSPACE_BUDGET = 2_000_000    # s-dimensional subspace enumeration ceiling


@dataclass(frozen=True)
class ErasurePattern:
    """Binary erasure mask of length n; 1 marks an erased position."""

    n: int
    mask: tuple[int, ...]

    def __post_init__(self):
        if len(self.mask) != self.n or any(b not in (0, 1) for b in self.mask):
            raise DimensionMismatch("mask must be 0/1 of length n")

    @property
    def weight(self) -> int:
        return sum(self.mask)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(j for j, b in enumerate(self.mask) if b)

    @staticmethod
    def from_support(n: int, support: Iterable[int]) -> "ErasurePattern":
        mask = [0] * n
        for j in support:
            mask[j] = 1
        return ErasurePattern(n, tuple(mask))


def _as_support(n: int, pattern) -> tuple[int, ...]:
    """Accept an ErasurePattern, a 0/1 mask, or an iterable of positions."""
    if isinstance(pattern, ErasurePattern):
        if pattern.n != n:
            raise DimensionMismatch("pattern length differs from code length")
        return pattern.support
    seq = list(pattern)
    if len(seq) == n and all(x in (0, 1) for x in seq):
        return tuple(j for j, b in enumerate(seq) if b)
    return tuple(sorted(int(j) for j in seq))


def gaussian_binomial(k: int, s: int, q: int) -> int:
    """Number of s-dimensional subspaces of GF(q)^k."""
    if s < 0 or s > k:
        return 0
    num = den = 1
    for i in range(s):
        num *= q ** (k - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


class LinearCode:
    """An [n,k] code over GF(q), carried by generator and parity-check matrices."""

    def __init__(self, G: Matrix, H: Matrix, meta: dict | None = None,
                 known_dmin: int | None = None, check: bool = True):
        self.field: FiniteField = G.field
        self.G = G
        self.H = H
        self.n = G.cols
        self.k = G.rows
        self.meta = dict(meta or {})
        self.known_dmin = known_dmin
        if check:
            if mat_rank(G) != self.k:
                raise RankDeficientGenerator("generator rows are dependent")
            if H.cols != self.n or H.rows != self.n - self.k:
                raise DimensionMismatch("parity-check shape mismatch")
            if self.n - self.k > 0 and mat_rank(H) != self.n - self.k:
                raise RankDeficientGenerator("parity-check rows are dependent")
            prod = mat_mul(G, H.transpose())
            if any(any(x for x in row) for row in prod.data):
                raise DimensionMismatch("G H^T != 0")
        # column views of H used by the hot correctability test
        if self.field.order == 2:
            self._hcols_gf2 = [
                sum(self.H.data[i][j] << i for i in range(self.H.rows))
                for j in range(self.n)
            ]
        else:
            self._hcols_gf2 = None

    # --- constructors ---------------------------------------------------------

    @staticmethod
    def from_generator(G: Matrix, meta: dict | None = None,
                       known_dmin: int | None = None) -> "LinearCode":
        if mat_rank(G) != G.rows:
            raise RankDeficientGenerator("generator rows are dependent")
        H = null_space(G)
        return LinearCode(G, H, meta=meta, known_dmin=known_dmin, check=False)

    @staticmethod
    def from_parity_check(H: Matrix, meta: dict | None = None,
                          known_dmin: int | None = None) -> "LinearCode":
        if H.rows and mat_rank(H) != H.rows:
            raise RankDeficientGenerator("parity-check rows are dependent")
        G = null_space(H)
        return LinearCode(G, H, meta=meta, known_dmin=known_dmin, check=False)

    def __repr__(self) -> str:
        return f"LinearCode[{self.n},{self.k}] over {self.field}"

    @property
    def rate(self):
        from fractions import Fraction
        return Fraction(self.k, self.n)

    # --- basic predicates -------------------------------------------------------

    def dual(self) -> "LinearCode":
        meta: dict = {}
        dmin = None
        fam = self.meta.get("family")
        if fam == "grs":
            # the dual of a GRS code is GRS, hence MDS
            dmin = self.k + 1
        elif fam == "reed-muller":
            v, m = self.meta["v"], self.meta["m"]
            if m - v - 1 >= 0:
                meta = {"family": "reed-muller", "v": m - v - 1, "m": m}
                dmin = 2 ** (v + 1)
        return LinearCode(self.H, self.G, meta=meta, known_dmin=dmin, check=False)

    def is_information_set(self, coords: Iterable[int]) -> bool:
        coords = sorted(set(int(j) for j in coords))
        if len(coords) != self.k:
            return False
        return mat_rank(self.G.restrict_cols(coords)) == self.k

    def contains_information_set(self, coords: Iterable[int]) -> bool:
        coords = sorted(set(int(j) for j in coords))
        return mat_rank(self.G.restrict_cols(coords)) == self.k

    def information_set(self) -> tuple[int, ...]:
        _, pivots = mat_rref(self.G)
        return tuple(pivots)

    def random_information_set(self, rng) -> tuple[int, ...]:
        """Pivot columns of G under a random column permutation."""
        perm = list(range(self.n))
        rng.shuffle(perm)
        _, pivots = mat_rref(self.G.restrict_cols(perm))
        return tuple(sorted(perm[c] for c in pivots))

    def erasure_correctable(self, pattern) -> bool:
        support = _as_support(self.n, pattern)
        w = len(support)
        if w == 0:
            return True
        if w > self.n - self.k:
            return False
        if self._hcols_gf2 is not None:
            basis: list[int] = []
            for j in support:
                v = self._hcols_gf2[j]
                for b in basis:
                    v = min(v, v ^ b)
                if v == 0:
                    return False
                basis.append(v)
                basis.sort(reverse=True)
            return True
        return mat_rank(self.H.restrict_cols(support)) == w

    # --- encoding / decoding ------------------------------------------------------

    def encode(self, message: Matrix) -> Matrix:
        """message (rows x k, possibly over an extension field) times G."""
        return mat_mul(message, self.G)

    def message_from_information_set(self, coords: Sequence[int],
                                     values: Sequence[int],
                                     value_field: FiniteField) -> list[int]:
        """Solve m G|_I = values for the message row (values over GF(q^ell))."""
        sub = self.G.restrict_cols(list(coords)).transpose()
        sol = mat_solve(sub, Matrix.column(value_field, list(values)))
        return [row[0] for row in sol.data]

    def decode_erasures(self, word: Sequence[int], erased: Iterable[int],
                        value_field: FiniteField | None = None) -> list[int]:
        """The unique codeword agreeing with `word` off the erased positions."""
        field = value_field or self.field
        erased = sorted(set(int(j) for j in erased))
        if not self.erasure_correctable(ErasurePattern.from_support(self.n, erased)):
            raise NotCorrectable(f"pattern {erased} not correctable")
        if not erased:
            return list(word)
        known = [j for j in range(self.n) if j not in erased]
        h_known = self.H.restrict_cols(known)
        rhs = mat_mul(h_known, Matrix.column(field, [word[j] for j in known]))
        neg_rhs = Matrix.column(rhs.field, [rhs.field.neg(row[0]) for row in rhs.data])
        sol = mat_solve(self.H.restrict_cols(erased), neg_rhs)
        out = list(word)
        for idx, j in enumerate(erased):
            out[j] = sol.data[idx][0]
        return out

    def codewords(self, budget: int = ENUM_BUDGET) -> Iterator[tuple[int, ...]]:
        """All codewords; guarded by q^k <= budget."""
        q = self.field.order
        if q ** self.k > budget:
            raise TooLarge(f"q^k = {q}^{self.k} exceeds enumeration budget")
        f = self.field
        grows = self.G.data
        msg = [0] * self.k
        while True:
            cw = [0] * self.n
            for i, m in enumerate(msg):
                if m:
                    row = grows[i]
                    cw = [f.add(c, f.mul(m, g)) for c, g in zip(cw, row)]
            yield tuple(cw)
            i = 0
            while i < self.k:
                msg[i] += 1
                if msg[i] < q:
                    break
                msg[i] = 0
                i += 1
            else:
                return

    # --- distances ---------------------------------------------------------------

    def min_distance(self, budget: int = ENUM_BUDGET) -> int:
        """Minimum Hamming weight over nonzero codewords (exact)."""
        if self.known_dmin is not None:
            return self.known_dmin
        if self.k == 0:
            raise TooLarge("zero code has no nonzero codeword")
        q = self.field.order
        if q == 2 and (1 << self.k) <= budget:
            d = self._min_distance_gf2()
        elif q ** self.k <= budget:
            d = min(sum(1 for x in cw if x) for cw in self.codewords()
                    if any(cw))
        else:
            d = self._min_distance_column_search(budget=COLUMN_SEARCH_BUDGET)
        self.known_dmin = d
        return d

    def _min_distance_gf2(self) -> int:
        rows = [sum(bit << j for j, bit in enumerate(row)) for row in self.G.data]
        best = self.n + 1
        cw = 0
        # Gray-code walk over all 2^k messages
        prev = 0
        for m in range(1, 1 << self.k):
            gray = m ^ (m >> 1)
            cw ^= rows[(prev ^ gray).bit_length() - 1]
            prev = gray
            w = bin(cw).count("1")
            if 0 < w < best:
                best = w
        return best

    def _min_distance_column_search(self, budget: int) -> int:
        """Smallest w such that some w parity-check columns are dependent."""
        spent = 0
        for w in range(1, self.n - self.k + 2):
            count = 0
            for cols in itertools.combinations(range(self.n), w):
                count += 1
                if mat_rank(self.H.restrict_cols(cols)) < w:
                    return w
            spent += count
            if spent > budget:
                raise TooLarge("column-dependency search exceeded budget")
        raise AssertionError("Singleton bound violated (unreachable)")

    def generalized_hamming_weight(self, s: int,
                                   budget: int = SUBSPACE_BUDGET) -> int:
        """d_s: smallest support of an s-dimensional subcode (exhaustive)."""
        if not 1 <= s <= self.k:
            raise DimensionMismatch(f"s={s} outside 1..{self.k}")
        if s == self.k:
            # the only k-dimensional subcode is the code itself
            return len(self._code_support())
        q = self.field.order
        count = gaussian_binomial(self.k, s, q)
        if count > budget:
            raise TooLarge(f"{count} subspaces exceed budget")
        if q == 2:
            return self._ghw_gf2(s)
        return self._ghw_generic(s)

    def _code_support(self) -> tuple[int, ...]:
        return tuple(j for j in range(self.n)
                     if any(self.G.data[i][j] for i in range(self.k)))

    def _ghw_gf2(self, s: int) -> int:
        k = self.k
        rows = [sum(bit << j for j, bit in enumerate(row)) for row in self.G.data]
        best = self.n
        for pivots in itertools.combinations(range(k), s):
            pivot_set = set(pivots)
            free_pos = [[j for j in range(p + 1, k) if j not in pivot_set]
                        for p in pivots]
            nfree = sum(len(f) for f in free_pos)
            for assign in range(1 << nfree):
                support = 0
                bitpos = 0
                for i, p in enumerate(pivots):
                    u = 1 << p
                    for j in free_pos[i]:
                        if (assign >> bitpos) & 1:
                            u |= 1 << j
                        bitpos += 1
                    cw = 0
                    uu = u
                    while uu:
                        low = uu & -uu
                        cw ^= rows[low.bit_length() - 1]
                        uu ^= low
                    support |= cw
                w = bin(support).count("1")
                if w < best:
                    best = w
        return best

    def _ghw_generic(self, s: int) -> int:
        f = self.field
        q = f.order
        k = self.k
        best = self.n
        for pivots in itertools.combinations(range(k), s):
            pivot_set = set(pivots)
            free_pos = [(i, j) for i, p in enumerate(pivots)
                        for j in range(p + 1, k) if j not in pivot_set]
            nfree = len(free_pos)
            assign = [0] * nfree
            while True:
                rows_u = [[0] * k for _ in range(s)]
                for i, p in enumerate(pivots):
                    rows_u[i][p] = 1
                for (i, j), val in zip(free_pos, assign):
                    rows_u[i][j] = val
                support = [False] * self.n
                for u in rows_u:
                    cw = [0] * self.n
                    for idx, coef in enumerate(u):
                        if coef:
                            grow = self.G.data[idx]
                            cw = [f.add(c, f.mul(coef, g)) for c, g in zip(cw, grow)]
                    for j, x in enumerate(cw):
                        if x:
                            support[j] = True
                w = sum(support)
                if w < best:
                    best = w
                pos = 0
                while pos < nfree:
                    assign[pos] += 1
                    if assign[pos] < q:
                        break
                    assign[pos] = 0
                    pos += 1
                else:
                    break
        return best

    # --- derived codes ---------------------------------------------------------------

    def hadamard_product(self, other: "LinearCode") -> "LinearCode":
        """Code spanned by componentwise products of codewords of the two codes."""
        if other.n != self.n:
            raise DimensionMismatch("lengths differ")
        if other.field is not self.field:
            raise DimensionMismatch("fields differ")
        f = self.field
        products = []
        for a in self.G.data:
            for b in other.G.data:
                products.append([f.mul(x, y) for x, y in zip(a, b)])
        stacked = Matrix(f, products, len(products), self.n)
        red, pivots = mat_rref(stacked)
        basis = [red.data[i] for i in range(len(pivots))]
        G = Matrix(f, basis, len(pivots), self.n)
        return LinearCode(G, null_space(G), check=False)

    def puncture(self, coords: Iterable[int]) -> "LinearCode":
        coords = sorted(set(int(j) for j in coords))
        if not coords:
            raise EmptySupport("puncture onto empty coordinate set")
        sub = self.G.restrict_cols(coords)
        red, pivots = mat_rref(sub)
        basis = [red.data[i] for i in range(len(pivots))]
        G = Matrix(self.field, basis, len(pivots), len(coords))
        return LinearCode(G, null_space(G), check=False)

    def shorten(self, coords: Iterable[int]) -> "LinearCode":
        """Codewords vanishing outside `coords`, restricted to `coords`."""
        coords = sorted(set(int(j) for j in coords))
        if not coords:
            raise EmptySupport("shorten onto empty coordinate set")
        outside = [j for j in range(self.n) if j not in coords]
        if outside:
            msgs = null_space(self.G.restrict_cols(outside).transpose())
        else:
            msgs = Matrix.identity(self.field, self.k)
        if msgs.rows == 0:
            G = Matrix(self.field, [], 0, len(coords))
            return LinearCode(G, Matrix.identity(self.field, len(coords)), check=False)
        cw = mat_mul(msgs, self.G.restrict_cols(coords))
        red, pivots = mat_rref(cw)
        basis = [red.data[i] for i in range(len(pivots))]
        G = Matrix(self.field, basis, len(pivots), len(coords))
        return LinearCode(G, null_space(G), check=False)

    def is_automorphism(self, perm: Sequence[int]) -> bool:
        """True iff permuting coordinates by `perm` preserves the codeword set.

        `perm[j]` is the new position of coordinate j. Equality of codeword
        sets is tested by the rank of the stacked generators.
        """
        perm = list(perm)
        if sorted(perm) != list(range(self.n)):
            raise DimensionMismatch("not a permutation of 0..n-1")
        permuted = [[0] * self.n for _ in range(self.k)]
        for i in range(self.k):
            row = self.G.data[i]
            for j in range(self.n):
                permuted[i][perm[j]] = row[j]
        stacked = Matrix(self.field, self.G.data + permuted, 2 * self.k, self.n)
        return mat_rank(stacked) == self.k

    # --- wire format -------------------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {"family": "raw", "q": self.field.order,
                "generator": [list(r) for r in self.G.data]}


def code_from_generator(G: Matrix, meta: dict | None = None,
                        known_dmin: int | None = None) -> LinearCode:
    """LinearCode with H spanning the null space of G."""
    return LinearCode.from_generator(G, meta=meta, known_dmin=known_dmin)


def standard_form_parity(code: LinearCode,
                         info: Sequence[int] | None = None) -> tuple[Matrix, list[int]]:
    """Row-reduce H so the columns off the information set become I_{n-k}.

    Returns (P, info) where P is H restricted to the information coordinates
    after the reduction; the code with parity-check P is the C' of the
    high-rate shortcut (systematic codes of rate > 1/2).
    """
    if info is None:
        info = list(code.information_set())
    info = sorted(info)
    comp = [j for j in range(code.n) if j not in info]
    h_comp = code.H.restrict_cols(comp)
    transform = mat_inverse(h_comp)
    h_std = mat_mul(transform, code.H)
    return h_std.restrict_cols(info), list(info)
