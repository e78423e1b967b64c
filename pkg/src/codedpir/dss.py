"""Simulated distributed storage system, protocol runner, privacy auditor, and
table reproduction reports.

The Dss holds f files of beta stripes each, encoded row-by-row with the
storage code; node l stores the l-th coordinate of every encoded stripe
(f coded chunks of beta symbols). Nodes are read-only after init.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from .codes import LinearCode
from .errors import BadParams, DecodeFailure
from .fields import FiniteField, Matrix, mat_mul
from .rng import rng_for


class Dss:
    """n-node storage system holding f encoded files of beta stripes."""

    def __init__(self, code: LinearCode, f: int, beta: int, ell: int = 1,
                 seed: int = 0, files: list[Matrix] | None = None):
        if f < 1 or beta < 1 or ell < 1:
            raise BadParams(f"need f, beta, ell >= 1; got {f}, {beta}, {ell}")
        self.code = code
        self.f = f
        self.beta = beta
        self.ell = ell
        self.seed = seed
        self.msg_field: FiniteField = code.field.extension(ell)
        if files is None:
            rng = rng_for(seed, "dss", "files")
            order = self.msg_field.order
            files = [Matrix(self.msg_field,
                            [[rng.randrange(order) for _ in range(code.k)]
                             for _ in range(beta)])
                     for _ in range(f)]
        else:
            if len(files) != f or any(x.rows != beta or x.cols != code.k
                                      for x in files):
                raise BadParams("files must be f matrices of beta x k")
        self.files = files
        self.arrays = [code.encode(x) for x in files]  # beta x n each
        h_lift = code.H.lift(self.msg_field)
        for arr in self.arrays:
            prod = mat_mul(arr, h_lift.transpose())
            if any(any(v for v in row) for row in prod.data):
                raise BadParams("encoded stripe is not a codeword")

    def node_content(self, node: int) -> list[int]:
        """The f coded chunks stored by a node: file-major, stripe-minor."""
        return [self.arrays[m].data[i][node]
                for m in range(self.f) for i in range(self.beta)]

    def file_hash(self, m: int) -> str:
        """Canonical digest of file m (1-based) for transcript comparison."""
        payload = json.dumps(self.files[m - 1].data).encode()
        return hashlib.sha256(payload).hexdigest()


def dss_init(code: LinearCode, f: int, beta: int, ell: int = 1,
             seed: int = 0) -> Dss:
    return Dss(code, f, beta, ell=ell, seed=seed)


@dataclass
class Transcript:
    """One protocol round trip: node views, responses, and the achieved rate."""

    protocol: str
    n: int
    f: int
    requested: int
    seed: int
    queries: list            # per-node, node-visible form
    responses: list          # per-node response symbols
    decoded_hash: str = ""
    downloaded: int = 0
    rate: Fraction = Fraction(0)
    user: dict = dc_field(default_factory=dict)  # user-private bookkeeping

    def to_json_dict(self, include_user: bool = True) -> dict:
        out = {
            "protocol": self.protocol,
            "n": self.n,
            "files": self.f,
            "seed": self.seed,
            "queries": self.queries,
            "responses": self.responses,
            "decoded_hash": self.decoded_hash,
            "downloaded": self.downloaded,
            "rate": [self.rate.numerator, self.rate.denominator],
        }
        if include_user:
            out["requested"] = self.requested
            out["user"] = self.user
        return out


def matrices_equal(a: Matrix, b: Matrix) -> bool:
    return a.field is b.field and a.data == b.data


# --- protocol runner -----------------------------------------------------------

def run(protocol: int, dss: Dss, config: dict) -> Transcript:
    """One full round trip; raises DecodeFailure if the file is not recovered.

    config keys: "m" (1-based requested file), "seed", and the protocol
    structure: "lam" (protocol 1), "structure" (protocol 2), "setup"
    (protocol 3).
    """
    from .protocol1 import p1_answer, p1_decode, p1_plan
    from .protocol2 import p2_decode, p2_queries, p2_respond
    from .protocol3 import p3_decode, p3_queries, p3_respond

    m = int(config.get("m", 1))
    seed = int(config.get("seed", dss.seed))
    n = dss.code.n
    if protocol == 1:
        plan = p1_plan(dss.code, config["lam"], dss.f, m, seed)
        if plan.beta != dss.beta:
            raise BadParams(f"plan wants beta={plan.beta}, storage has {dss.beta}")
        queries = [plan.node_query(j) for j in range(n)]
        responses = [p1_answer(dss, j, queries[j]) for j in range(n)]
        decoded = p1_decode(plan, responses, dss.msg_field)
        downloaded = sum(len(q) for q in queries)
        user = {"perms": [list(p) for p in plan.perms],
                "shuffles": [list(s) for s in plan.shuffles]}
        tx_queries = [[[list(term) for term in atom] for atom in q] for q in queries]
    elif protocol == 2:
        structure = config["structure"]
        if structure.beta != dss.beta:
            raise BadParams("structure and storage disagree on beta")
        qs = p2_queries(structure, dss.f, m, seed)
        responses = p2_respond(dss, qs)
        decoded = p2_decode(structure, responses, dss.f, m, dss.msg_field)
        downloaded = sum(len(r) for r in responses)
        user = {"ehat": [list(r) for r in structure.ehat],
                "info_sets": [list(s) for s in structure.info_sets],
                "seed": seed}
        tx_queries = [q.Q.to_json_dict() for q in qs]
    elif protocol == 3:
        setup = config["setup"]
        if setup.beta != dss.beta:
            raise BadParams("setup and storage disagree on beta")
        qs = p3_queries(setup, dss.f, m, seed)
        responses = p3_respond(dss, qs)
        decoded = p3_decode(setup, responses, dss.f, m, dss.msg_field)
        downloaded = sum(len(r) for r in responses)
        user = {"ehat": [list(r) for r in setup.ehat],
                "info_sets": [list(s) for s in setup.info_sets],
                "T": setup.collusion_threshold, "seed": seed}
        tx_queries = [q.to_json_dict() for q in qs]
    else:
        raise BadParams(f"unknown protocol {protocol}")

    if not matrices_equal(decoded, dss.files[m - 1]):
        raise DecodeFailure("decoded file differs from stored file")
    rate = Fraction(dss.beta * dss.code.k, downloaded)
    tx = Transcript(protocol=f"p{protocol}", n=n, f=dss.f, requested=m,
                    seed=seed, queries=tx_queries, responses=responses,
                    decoded_hash=dss.file_hash(m), downloaded=downloaded,
                    rate=rate, user=user)
    return tx
