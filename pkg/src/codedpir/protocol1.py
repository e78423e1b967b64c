"""File-dependent retrieval protocol achieving the finite MDS-PIR capacity.

The plan downloads symbol sums over kappa repetitions of f rounds. Round 1
fetches desired rows and single-file side information; round l+1 fetches sums
of one new desired row with side-information sums of l other files, whose
aligned values were made decodable by round l's downloads. Stripe indices are
privately permuted per file and the per-node query order is shuffled, which is
what the privacy of the scheme rests on.

Row indices inside atoms are 1-based logical rows into the interleaved array;
nodes only ever see physical rows (the private permutation applied).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .codes import LinearCode
from .errors import DecodeFailure, DimensionMismatch, InvalidLambda, KappaEqualsNu, OutOfRange
from .fields import FiniteField, Matrix
from .ratematrix import RateMatrix, interference_matrices, validate_rate_matrix
from .rng import rng_for

MAX_STRIPES = 10 ** 6


def u_of(l: int, kappa: int, nu: int, f: int) -> int:
    """Block-count prefix sum for undesired downloads through round l."""
    if not 1 <= l <= f - 1:
        raise OutOfRange(f"l={l} outside 1..{f - 1}")
    return _u(l, kappa, nu, f)


def _u(l: int, kappa: int, nu: int, f: int) -> int:
    return sum(kappa ** (f - h - 1) * (nu - kappa) ** (h - 1)
               for h in range(1, l + 1))


def d_of(l: int, kappa: int, nu: int, f: int) -> int:
    """Desired stripe-block count through round l+1."""
    if not 0 <= l <= f - 1:
        raise OutOfRange(f"l={l} outside 0..{f - 1}")
    return kappa ** (f - 1) + sum(
        comb(f - 1, h) * kappa ** (f - h - 1) * (nu - kappa) ** h
        for h in range(1, l + 1))


def n_of(l: int, f: int) -> int:
    """Number of l-sized side-information file subsets."""
    if not 1 <= l <= f - 1:
        raise OutOfRange(f"l={l} outside 1..{f - 1}")
    return comb(f - 1, l)


def _colex_subsets(universe: Sequence[int], size: int) -> list[tuple[int, ...]]:
    import itertools
    subs = [tuple(sorted(s)) for s in itertools.combinations(sorted(universe), size)]
    subs.sort(key=lambda s: tuple(reversed(s)))
    return subs


@dataclass(frozen=True)
class P1Atom:
    """One requested symbol sum: sum over `terms` of y^(file)_(row) at a node."""

    kind: str                      # "desired1" | "undesired" | "desired"
    rep: int                       # repetition, 1..kappa
    rnd: int                       # round, 1..f
    subset: tuple[int, ...]        # side-information files (empty for desired1)
    terms: tuple[tuple[int, int], ...]  # (file 1-based, logical row 1-based)
    block: int = -1                # side-information block index (if any)
    srow: int = -1                 # B-row index used (desired atoms)


@dataclass
class P1Plan:
    code: LinearCode
    lam: RateMatrix
    f: int
    m: int
    seed: int
    kappa: int
    nu: int
    beta: int
    d: int
    A: tuple[tuple[int, ...], ...]
    B: tuple[tuple[int, ...], ...]
    perms: tuple[tuple[int, ...], ...]     # per file: logical row-1 -> physical row (0-based); user-private
    node_atoms: list[list[P1Atom]]         # canonical order per node
    shuffles: list[list[int]]              # visible position -> canonical index

    @property
    def rate(self) -> Fraction:
        return Fraction(self.beta * self.code.k, self.code.n * self.d)

    def node_query(self, node: int) -> list[tuple[tuple[int, int], ...]]:
        """Node-visible query list: physical rows, shuffled order, no labels."""
        atoms = self.node_atoms[node]
        out = []
        for idx in self.shuffles[node]:
            atom = atoms[idx]
            out.append(tuple(sorted((mp, self.perms[mp - 1][row - 1])
                                    for mp, row in atom.terms)))
        return out

    def unshuffle(self, node: int, responses: Sequence[int]) -> list[int]:
        canonical = [0] * len(responses)
        for pos, idx in enumerate(self.shuffles[node]):
            canonical[idx] = responses[pos]
        return canonical


def p1_plan(code: LinearCode, lam: RateMatrix, f: int, m: int, seed: int) -> P1Plan:
    """Full request schedule for retrieving file m (1-based) out of f."""
    report = validate_rate_matrix(code, lam.rows)
    if not report.ok:
        raise InvalidLambda(f"{report.violation} at {report.witness}")
    if f < 1 or not 1 <= m <= f:
        raise DimensionMismatch(f"bad f={f}, m={m}")
    kappa, nu = lam.kappa, lam.nu
    if kappa == nu and f > 1:
        raise KappaEqualsNu("side information needs kappa < nu")
    n = code.n
    beta = nu ** f
    if beta > MAX_STRIPES:
        raise DimensionMismatch(f"nu^f = {beta} stripes exceed the memory guard")
    ab = interference_matrices(lam)
    A, B = ab.A, ab.B
    d = kappa if f == 1 else (kappa * (nu ** f - kappa ** f)) // (nu - kappa)

    others = [x for x in range(1, f + 1) if x != m]
    kf1 = kappa ** (f - 1)
    uf1 = _u(f - 1, kappa, nu, f) if f >= 2 else 0
    node_atoms: list[list[P1Atom]] = [[] for _ in range(n)]

    for i in range(1, kappa + 1):
        base = (i - 1) * uf1
        # round 1: desired rows, then single-file side information
        for s in range(1, kf1 + 1):
            for j in range(n):
                row = kf1 * (A[i - 1][j] - 1) + s
                node_atoms[j].append(P1Atom("desired1", i, 1, (), ((m, row),)))
        if f >= 2:
            for subset in _colex_subsets(others, 1):
                for block in range(base, base + _u(1, kappa, nu, f)):
                    for t in range(1, kappa + 1):
                        for j in range(n):
                            row = block * nu + A[t - 1][j]
                            node_atoms[j].append(P1Atom(
                                "undesired", i, 1, subset,
                                tuple((mp, row) for mp in subset), block=block))
        for l in range(1, f):
            # round l+1 desired sums, one new stripe block per (subset, block, srow)
            mu = d_of(l - 1, kappa, nu, f)
            for subset in _colex_subsets(others, l):
                for block in range(base + _u(l - 1, kappa, nu, f),
                                   base + _u(l, kappa, nu, f)):
                    for srow in range(1, nu - kappa + 1):
                        for j in range(n):
                            terms = ((m, mu * nu + A[i - 1][j]),) + tuple(
                                (mp, block * nu + B[srow - 1][j]) for mp in subset)
                            node_atoms[j].append(P1Atom(
                                "desired", i, l + 1, subset, terms,
                                block=block, srow=srow))
                        mu += 1
            if l + 1 <= f - 1:
                for subset in _colex_subsets(others, l + 1):
                    for block in range(base + _u(l, kappa, nu, f),
                                       base + _u(l + 1, kappa, nu, f)):
                        for t in range(1, kappa + 1):
                            for j in range(n):
                                row = block * nu + A[t - 1][j]
                                node_atoms[j].append(P1Atom(
                                    "undesired", i, l + 1, subset,
                                    tuple((mp, row) for mp in subset), block=block))

    for j in range(n):
        if len(node_atoms[j]) != d:
            raise DecodeFailure(
                f"schedule for node {j} has {len(node_atoms[j])} requests, expected {d}")

    perms = []
    for mp in range(1, f + 1):
        rng = rng_for(seed, "p1", "perm", mp)
        perm = list(range(beta))
        rng.shuffle(perm)
        perms.append(tuple(perm))
    shuffles = []
    for j in range(n):
        rng = rng_for(seed, "p1", "shuffle", j)
        order = list(range(d))
        rng.shuffle(order)
        shuffles.append(order)
    return P1Plan(code=code, lam=lam, f=f, m=m, seed=seed, kappa=kappa, nu=nu,
                  beta=beta, d=d, A=A, B=B, perms=tuple(perms),
                  node_atoms=node_atoms, shuffles=shuffles)


def p1_answer(dss, node: int, visible_query: Sequence[Sequence[tuple[int, int]]]) -> list[int]:
    """Node-side evaluation: each entry is a sum of stored symbols."""
    f = dss.msg_field
    out = []
    for terms in visible_query:
        if not terms:
            raise DimensionMismatch("empty symbol sum is not a legal request")
        acc = 0
        for mp, phys_row in terms:
            acc = f.add(acc, dss.arrays[mp - 1].data[phys_row][node])
        out.append(acc)
    return out


def p1_decode(plan: P1Plan, responses: Sequence[Sequence[int]],
              msg_field: FiniteField) -> Matrix:
    """Reconstruct all nu^f stripes of the requested file from the responses."""
    code = plan.code
    n, k = code.n, code.k
    if len(responses) != n or any(len(r) != plan.d for r in responses):
        raise DecodeFailure("incomplete responses")
    canonical = [plan.unshuffle(j, responses[j]) for j in range(n)]

    # phase 1: coordinates of aligned side-information sums, then decode each
    aligned_coords: dict[tuple, dict[int, int]] = {}
    desired_coords: dict[int, dict[int, int]] = {}
    for j in range(n):
        for idx, atom in enumerate(plan.node_atoms[j]):
            value = canonical[j][idx]
            if atom.kind == "undesired":
                u = atom.terms[0][1] - atom.block * plan.nu
                aligned_coords.setdefault((atom.subset, atom.block, u), {})[j] = value
            elif atom.kind == "desired1":
                desired_coords.setdefault(atom.terms[0][1], {})[j] = value

    aligned_full: dict[tuple, list[int]] = {}
    for key, coords in aligned_coords.items():
        aligned_full[key] = _codeword_from_coords(code, coords, msg_field)

    # phase 2: cancel side information from higher-round desired sums
    for j in range(n):
        for idx, atom in enumerate(plan.node_atoms[j]):
            if atom.kind != "desired":
                continue
            value = canonical[j][idx]
            b_row = plan.B[atom.srow - 1][j]
            side = aligned_full[(atom.subset, atom.block, b_row)][j]
            row = atom.terms[0][1]
            desired_coords.setdefault(row, {})[j] = msg_field.sub(value, side)

    if len(desired_coords) != plan.beta:
        raise DecodeFailure(
            f"recovered {len(desired_coords)} stripes, expected {plan.beta}")

    # phase 3: solve every stripe on an information set and place it physically
    out = [[0] * k for _ in range(plan.beta)]
    perm = plan.perms[plan.m - 1]
    for row, coords in desired_coords.items():
        known = sorted(coords)
        info = _info_subset(code, known)
        message = code.message_from_information_set(
            info, [coords[j] for j in info], msg_field)
        out[perm[row - 1]] = message
    return Matrix(msg_field, out, plan.beta, k)


def _info_subset(code: LinearCode, coords: list[int]) -> list[int]:
    from .fields import mat_rref
    sub = code.G.restrict_cols(coords)
    _, pivots = mat_rref(sub)
    if len(pivots) != code.k:
        raise DecodeFailure(f"coordinates {coords} contain no information set")
    return [coords[c] for c in pivots]


def _codeword_from_coords(code: LinearCode, coords: dict[int, int],
                          msg_field: FiniteField) -> list[int]:
    """Decode a full codeword from coordinate values covering an information set."""
    known = sorted(coords)
    info = _info_subset(code, known)
    message = code.message_from_information_set(
        info, [coords[j] for j in info], msg_field)
    cw = code.encode(Matrix(msg_field, [message]))
    full = cw.data[0]
    for j, v in coords.items():
        if full[j] != v:
            raise DecodeFailure("inconsistent aligned-sum coordinates")
    return full


@dataclass
class SymmetryReport:
    ok: bool
    violations: list[str]
    counts: dict  # (node, rep, rnd) -> {frozenset(files): count}


def p1_symmetry_audit(plan: P1Plan) -> SymmetryReport:
    """File symmetry within nodes and symmetry across nodes, plus per-file
    request-frequency balance over each node's full query list."""
    counts: dict = {}
    for j in range(plan.code.n):
        for atom in plan.node_atoms[j]:
            files = frozenset(mp for mp, _ in atom.terms)
            key = (j, atom.rep, atom.rnd)
            counts.setdefault(key, {}).setdefault(files, 0)
            counts[key][files] += 1
    violations = []
    n = plan.code.n
    for j in range(n):
        for (jj, rep, rnd), table in list(counts.items()):
            if jj != j:
                continue
            by_size: dict[int, set[int]] = {}
            for files, c in table.items():
                by_size.setdefault(len(files), set()).add(c)
            for size, values in by_size.items():
                if len(values) != 1:
                    violations.append(
                        f"node {j} rep {rep} round {rnd}: unequal counts for "
                        f"{size}-file sums: {sorted(values)}")
        # same (rep, rnd) tables must agree across nodes
    reference = {key[1:]: table for key, table in counts.items() if key[0] == 0}
    for (j, rep, rnd), table in counts.items():
        if table != reference.get((rep, rnd)):
            violations.append(f"node {j} differs from node 0 at rep {rep} round {rnd}")
    freq: dict[int, set[int]] = {}
    for j in range(n):
        per_file = {mp: 0 for mp in range(1, plan.f + 1)}
        for atom in plan.node_atoms[j]:
            for mp, _ in atom.terms:
                per_file[mp] += 1
        if len(set(per_file.values())) != 1:
            violations.append(f"node {j}: per-file request frequencies {per_file}")
    return SymmetryReport(ok=not violations, violations=violations, counts=counts)
