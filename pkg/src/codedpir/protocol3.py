"""Retrieval protocol private against up to T colluding nodes.

Each subquery sends every node one coordinate of a fresh batch of beta*f
random codewords of a query code, plus a deterministic unit offset on the
nodes that should leak one desired symbol. The response vector of a subquery
is a codeword of the Hadamard product of storage and query codes plus the
offset symbols, so multiplying by the product code's parity check exposes
exactly those symbols. T is one less than the minimum distance of the query
code's dual.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .codes import ErasurePattern, LinearCode
from .errors import (
    DecodeFailure,
    DimensionMismatch,
    OrderOverflow,
    RateOneProduct,
    StructureViolation,
)
from .fields import FiniteField, Matrix, mat_mul, mat_rank, mat_solve
from .families import rm_code, rm_information_set, rm_translate
from .rng import rng_for

Mask = tuple[int, ...]


@dataclass(frozen=True)
class P3Setup:
    """Validated (storage code, query code, structure) triple."""

    code: LinearCode
    query_code: LinearCode
    product: LinearCode
    collusion_threshold: int
    ehat: tuple[Mask, ...]
    info_sets: tuple[tuple[int, ...], ...]
    gamma: int

    @property
    def beta(self) -> int:
        return len(self.info_sets)

    @property
    def d(self) -> int:
        return len(self.ehat)

    @property
    def rate(self) -> Fraction:
        return Fraction(self.gamma, self.code.n)

    @property
    def rate_upper_bound(self) -> Fraction:
        return Fraction(self.code.n - self.product.k, self.code.n)

    @property
    def rate_nonopt(self) -> Fraction:
        """Rate of the unimproved retrieval scheme: (d_min(product) - 1)/n."""
        return Fraction(self.product.min_distance() - 1, self.code.n)

    def f_set(self, node: int) -> list[int]:
        return [t for t, iset in enumerate(self.info_sets) if node in iset]

    def stripe_assignment(self, node: int) -> list[int | None]:
        available = iter(self.f_set(node))
        out: list[int | None] = []
        for i in range(self.d):
            out.append(next(available) if self.ehat[i][node] else None)
        return out

    def to_json_dict(self) -> dict:
        from .families import spec_from_code
        return {"code": spec_from_code(self.code),
                "query_code": spec_from_code(self.query_code),
                "ehat": [list(r) for r in self.ehat],
                "info_sets": [list(s) for s in self.info_sets],
                "T": self.collusion_threshold}


def collusion_threshold(query_code: LinearCode) -> int:
    """T = d_min(dual of the query code) - 1."""
    return query_code.dual().min_distance() - 1


def p3_setup(code: LinearCode, query_code: LinearCode,
             ehat: Sequence[Sequence[int]],
             info_sets: Sequence[Sequence[int]]) -> P3Setup:
    """Validate the structure: rows correctable by the Hadamard product code,
    column profile matching the information sets of the storage code."""
    if query_code.n != code.n or query_code.field is not code.field:
        raise DimensionMismatch("storage and query codes must share length and field")
    product = code.hadamard_product(query_code)
    if product.k >= code.n:
        raise RateOneProduct("Hadamard product has rate 1; no redundancy to exploit")
    ehat = tuple(tuple(int(b) for b in row) for row in ehat)
    info_sets = tuple(tuple(sorted(int(j) for j in s)) for s in info_sets)
    n = code.n
    if not ehat or any(len(row) != n for row in ehat):
        raise StructureViolation("Ehat must be nonempty with n columns")
    gamma = sum(ehat[0])
    if gamma < 1:
        raise StructureViolation("zero-weight subquery row")
    for i, row in enumerate(ehat):
        if sum(row) != gamma:
            raise StructureViolation(f"row {i} weight {sum(row)} != {gamma}")
        if not product.erasure_correctable(ErasurePattern(n, row)):
            raise StructureViolation(f"row {i} not correctable by the product code")
    for t, iset in enumerate(info_sets):
        if not code.is_information_set(iset):
            raise StructureViolation(f"set {t} is not an information set of the storage code")
    for l in range(n):
        expected = sum(1 for iset in info_sets if l in iset)
        got = sum(row[l] for row in ehat)
        if got != expected:
            raise StructureViolation(f"column {l} weight {got}, expected {expected}")
    beta, d = len(info_sets), len(ehat)
    if beta * code.k != gamma * d:
        raise StructureViolation(f"beta*k != Gamma*d ({beta * code.k} vs {gamma * d})")
    setup = P3Setup(code=code, query_code=query_code, product=product,
                    collusion_threshold=collusion_threshold(query_code),
                    ehat=ehat, info_sets=info_sets, gamma=gamma)
    assert setup.rate <= setup.rate_upper_bound
    return setup


def p3_queries(setup: P3Setup, f: int, m: int, seed: int) -> list[Matrix]:
    """d x (beta*f) query matrix per node; fresh codeword batch per subquery."""
    if not 1 <= m <= f:
        raise DimensionMismatch(f"m={m} outside 1..{f}")
    code, qcode = setup.code, setup.query_code
    field = code.field
    q = field.order
    n, beta, d = code.n, setup.beta, setup.d
    assignments = [setup.stripe_assignment(l) for l in range(n)]
    rows_per_node: list[list[list[int]]] = [[] for _ in range(n)]
    for i in range(d):
        rng = rng_for(seed, "p3", "codewords", i)
        batch = []
        for _ in range(beta * f):
            msg = Matrix(field, [[rng.randrange(q) for _ in range(qcode.k)]])
            batch.append(qcode.encode(msg).data[0])
        for l in range(n):
            row = [batch[t][l] for t in range(beta * f)]
            stripe = assignments[l][i]
            if setup.ehat[i][l]:
                col = (m - 1) * beta + stripe
                row[col] = field.add(row[col], 1)
            rows_per_node[l].append(row)
    return [Matrix(field, rows, d, beta * f) for rows in rows_per_node]


def p3_respond(dss, queries: Sequence[Matrix]) -> list[list[int]]:
    """Per-node responses: subquery dot products with the stored column."""
    out = []
    for l, Q in enumerate(queries):
        content = Matrix.column(dss.msg_field, dss.node_content(l))
        out.append([row[0] for row in mat_mul(Q, content).data])
    return out


def p3_decode(setup: P3Setup, responses: Sequence[Sequence[int]],
              f: int, m: int, msg_field: FiniteField) -> Matrix:
    """Post-process each subquery's response vector through the product code's
    parity check and solve for the exposed symbols."""
    code = setup.code
    n, k = code.n, code.k
    if len(responses) != n or any(len(r) != setup.d for r in responses):
        raise DecodeFailure("incomplete responses")
    h_tilde = setup.product.H
    assignments = [setup.stripe_assignment(l) for l in range(n)]
    symbols: dict[tuple[int, int], int] = {}
    for i in range(setup.d):
        rho = Matrix.column(msg_field, [responses[l][i] for l in range(n)])
        z = mat_mul(h_tilde, rho)
        support = [l for l in range(n) if setup.ehat[i][l]]
        sol = mat_solve(h_tilde.restrict_cols(support), z)
        for idx, l in enumerate(support):
            stripe = assignments[l][i]
            if stripe is None or (stripe, l) in symbols:
                raise DecodeFailure("stripe assignment inconsistent")
            symbols[(stripe, l)] = sol.data[idx][0]
    rows = []
    for t, iset in enumerate(setup.info_sets):
        try:
            values = [symbols[(t, l)] for l in iset]
        except KeyError as exc:
            raise DecodeFailure(f"missing symbol for stripe {t}") from exc
        rows.append(code.message_from_information_set(iset, values, msg_field))
    return Matrix(msg_field, rows, setup.beta, k)


# --- maximum-rate matrices ----------------------------------------------------------

@dataclass(frozen=True)
class MaxRateReport:
    ok: bool
    violation: str | None = None
    witness: int | None = None


def validate_max_rate_matrix(code: LinearCode, query_code: LinearCode,
                             rows: Sequence[Sequence[int]]) -> MaxRateReport:
    """Check the maximum-rate-matrix conditions: k-column regularity, first k
    row supports information sets of the product, the rest of the storage code."""
    product = code.hadamard_product(query_code)
    n, k = code.n, code.k
    if product.k >= n:
        return MaxRateReport(False, violation="rate-one-product")
    rows = [tuple(int(b) for b in r) for r in rows]
    if len(rows) != k + n - product.k or any(len(r) != n for r in rows):
        return MaxRateReport(False, violation="shape")
    for j in range(n):
        if sum(r[j] for r in rows) != k:
            return MaxRateReport(False, violation="column-regularity", witness=j)
    for i in range(k):
        if not product.is_information_set([j for j, b in enumerate(rows[i]) if b]):
            return MaxRateReport(False, violation="product-information-set", witness=i)
    for i in range(k, len(rows)):
        if not code.is_information_set([j for j, b in enumerate(rows[i]) if b]):
            return MaxRateReport(False, violation="storage-information-set", witness=i)
    return MaxRateReport(True)


def p3_rm_max_rate(v: int, vbar: int, m: int) -> P3Setup:
    """Reed-Muller setup achieving the upper bound (n - ktilde)/n.

    Takes the weight-bounded information sets of the product code R(v+vbar, m)
    and the storage code R(v, m), and translates them: product sets by the k
    points of the storage information set, storage sets by the n - ktilde
    points outside the product information set.
    """
    if v + vbar > m:
        raise OrderOverflow(f"v + vbar = {v + vbar} exceeds m = {m}")
    code = rm_code(v, m)
    query_code = rm_code(vbar, m)
    product = code.hadamard_product(query_code)
    expected = rm_code(v + vbar, m)
    if product.k != expected.k or mat_rank(
            Matrix(code.field, product.G.data + expected.G.data)) != product.k:
        raise StructureViolation("product is not the expected Reed-Muller code")
    n = code.n
    i_tilde = rm_information_set(v + vbar, m)
    i_store = rm_information_set(v, m)
    tilde_sets = [rm_translate(i_tilde, mu) for mu in i_store]
    outside = [sigma for sigma in range(n) if sigma not in i_tilde]
    store_sets = [rm_translate(i_store, sigma) for sigma in outside]
    rows = [tuple(1 if j in set(s) else 0 for j in range(n)) for s in tilde_sets]
    rows += [tuple(1 if j in set(s) else 0 for j in range(n)) for s in store_sets]
    report = validate_max_rate_matrix(code, query_code, rows)
    if not report.ok:
        raise StructureViolation(f"max-rate matrix invalid: {report.violation}")
    ehat = [tuple(1 - b for b in row) for row in rows[:code.k]]
    setup = p3_setup(code, query_code, ehat, store_sets)
    assert setup.rate == setup.rate_upper_bound
    return setup


@dataclass(frozen=True)
class P3ConditionReport:
    ok: bool
    which: str | None = None
    witness_s: int | None = None
    witness_value: int | None = None


def necessary_condition_p3(code: LinearCode, query_code: LinearCode,
                           exhaustive_limit: int = 50_000) -> P3ConditionReport:
    """GHW conditions for a maximum-rate matrix to exist:
    d_s(storage) >= (n - ktilde) s / k and d_s(product) >= s.

    The product-side inequality is certified through strict GHW monotonicity
    (d_s >= d_1 + s - 1) whenever full enumeration would exceed the budget.
    """
    from .codes import gaussian_binomial
    product = code.hadamard_product(query_code)
    n, k, ktilde = code.n, code.k, product.k
    for s in range(1, k + 1):
        ds = code.generalized_hamming_weight(s)
        if ds * k < (n - ktilde) * s:
            return P3ConditionReport(False, which="storage", witness_s=s,
                                     witness_value=ds)
    if product.k > 0:
        d1 = product.min_distance()
        for s in range(1, product.k + 1):
            if gaussian_binomial(product.k, s, product.field.order) <= exhaustive_limit:
                ds = product.generalized_hamming_weight(s)
            else:
                ds = d1 + s - 1  # strict monotonicity lower bound
            if ds < s:
                return P3ConditionReport(False, which="product", witness_s=s,
                                         witness_value=ds)
    return P3ConditionReport(True)
