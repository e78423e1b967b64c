"""Empirical privacy auditing.

The protocols' privacy is exact by construction; these audits are regression
tripwires. Exact mode enumerates the query randomness for tiny parameter sets
and compares the per-collusion-set query distributions across requested files
symbol by symbol. Statistical mode samples protocol runs and chi-squares the
per-position (joint, for colluding sets) query-symbol histograms across the
requested file index, passing when every p-value clears a Bonferroni-corrected
0.01 threshold.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.stats import chi2 as _chi2_dist

from .dss import Dss
from .errors import BadParams, TooLarge
from .protocol1 import p1_plan, p1_symmetry_audit
from .protocol2 import P2Structure, p2_queries
from .protocol3 import P3Setup
from .rng import derive_seed

EXACT_SPACE_LIMIT = 1 << 16


@dataclass
class AuditOutcome:
    collusion: tuple[int, ...]
    position: str
    p_value: float | None   # None in exact mode
    identical: bool | None  # None in statistical mode
    flagged: bool


@dataclass
class PrivacyReport:
    protocol: int
    mode: str
    trials: int
    threshold: float        # per-test threshold after Bonferroni
    outcomes: list[AuditOutcome] = dc_field(default_factory=list)
    controls: list[AuditOutcome] = dc_field(default_factory=list)
    notes: list[str] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not any(o.flagged for o in self.outcomes)

    def worst(self) -> AuditOutcome | None:
        stat = [o for o in self.outcomes if o.p_value is not None]
        return min(stat, key=lambda o: o.p_value) if stat else None


def _homogeneity_p(counts: np.ndarray) -> float:
    counts = np.asarray(counts, dtype=float)
    keep = counts.sum(axis=0) > 0
    counts = counts[:, keep]
    if counts.shape[1] <= 1:
        return 1.0
    row = counts.sum(axis=1, keepdims=True)
    col = counts.sum(axis=0, keepdims=True)
    expected = row @ col / counts.sum()
    stat = float(((counts - expected) ** 2 / expected).sum())
    dof = (counts.shape[0] - 1) * (counts.shape[1] - 1)
    return float(_chi2_dist.sf(stat, dof))


def _default_sets(n: int, t: int) -> list[tuple[int, ...]]:
    sets: list[tuple[int, ...]] = []
    for size in range(1, t + 1):
        sets.extend(itertools.combinations(range(n), size))
    return sets


def privacy_audit(protocol: int, dss: Dss, config: dict,
                  collusion_sets=None, trials: int = 10_000, seed: int = 0,
                  mode: str = "statistical",
                  control_sets=()) -> PrivacyReport:
    """Audit query distributions across all requested-file indices.

    `control_sets` are audited and reported but never counted toward pass/fail
    (used for oversized collusion sets that are expected to leak).
    """
    if dss.f < 2:
        raise BadParams("privacy audit needs at least two files to compare")
    if protocol == 1:
        return _audit_p1(dss, config, collusion_sets, trials, seed)
    if protocol == 2:
        if mode == "exact":
            return _audit_p2_exact(dss, config, collusion_sets)
        return _audit_p23_statistical(2, dss, config, collusion_sets, trials,
                                      seed, control_sets)
    if protocol == 3:
        if mode == "exact":
            return _audit_p3_exact(dss, config, collusion_sets, control_sets)
        return _audit_p23_statistical(3, dss, config, collusion_sets, trials,
                                      seed, control_sets)
    raise BadParams(f"unknown protocol {protocol}")


# --- protocol 2: exact enumeration over the uniform mask -----------------------

def _audit_p2_exact(dss: Dss, config: dict, collusion_sets) -> PrivacyReport:
    structure: P2Structure = config["structure"]
    code = structure.code
    q = code.field.order
    d, bf = structure.d, structure.beta * dss.f
    space = q ** (d * bf)
    if space > EXACT_SPACE_LIMIT:
        raise TooLarge(f"exact mode would enumerate {space} masks")
    sets = collusion_sets or _default_sets(code.n, 1)
    report = PrivacyReport(protocol=2, mode="exact", trials=space, threshold=0.0)
    assigns = [structure.stripe_assignment(l) for l in range(code.n)]
    for tset in sets:
        dists = []
        for m in range(1, dss.f + 1):
            hist: dict[tuple, int] = {}
            for idx in range(space):
                u = []
                t = idx
                for _ in range(d * bf):
                    u.append(t % q)
                    t //= q
                key = []
                for l in tset:
                    cells = list(u)
                    for i, stripe in enumerate(assigns[l]):
                        if stripe is not None:
                            col = (m - 1) * structure.beta + stripe
                            cells[i * bf + col] = code.field.add(
                                cells[i * bf + col], 1)
                    key.extend(cells)
                key = tuple(key)
                hist[key] = hist.get(key, 0) + 1
            dists.append(hist)
        identical = all(h == dists[0] for h in dists[1:])
        report.outcomes.append(AuditOutcome(
            collusion=tuple(tset), position="joint-query",
            p_value=None, identical=identical, flagged=not identical))
    return report


# --- protocol 3: exact per-subquery enumeration -------------------------------

def _audit_p3_exact(dss: Dss, config: dict, collusion_sets,
                    control_sets) -> PrivacyReport:
    setup: P3Setup = config["setup"]
    code, qcode = setup.code, setup.query_code
    q = code.field.order
    bf = setup.beta * dss.f
    space = (q ** qcode.k) ** bf
    if space > EXACT_SPACE_LIMIT:
        raise TooLarge(f"exact mode would enumerate {space} codeword batches")
    sets = collusion_sets or _default_sets(code.n, setup.collusion_threshold)
    report = PrivacyReport(protocol=3, mode="exact", trials=space, threshold=0.0)
    assigns = [setup.stripe_assignment(l) for l in range(code.n)]

    def outcome(tset) -> AuditOutcome:
        per_sub_identical = True
        for i in range(setup.d):
            dists = []
            for m in range(1, dss.f + 1):
                hist: dict[tuple, int] = {}
                for idx in range(space):
                    msgs = []
                    t = idx
                    for _ in range(bf):
                        msgs.append(t % (q ** qcode.k))
                        t //= q ** qcode.k
                    key = []
                    for l in tset:
                        row = []
                        for b, msg_idx in enumerate(msgs):
                            msg = []
                            mm = msg_idx
                            for _ in range(qcode.k):
                                msg.append(mm % q)
                                mm //= q
                            cw = code.field
                            val = 0
                            for r, coef in enumerate(msg):
                                if coef:
                                    val = cw.add(val, cw.mul(
                                        coef, qcode.G.data[r][l]))
                            row.append(val)
                        stripe = assigns[l][i]
                        if setup.ehat[i][l]:
                            col = (m - 1) * setup.beta + stripe
                            row[col] = code.field.add(row[col], 1)
                        key.extend(row)
                    hist[tuple(key)] = hist.get(tuple(key), 0) + 1
                dists.append(hist)
            if not all(h == dists[0] for h in dists[1:]):
                per_sub_identical = False
                break
        return AuditOutcome(collusion=tuple(tset), position="joint-subqueries",
                            p_value=None, identical=per_sub_identical,
                            flagged=not per_sub_identical)

    for tset in sets:
        report.outcomes.append(outcome(tset))
    for tset in control_sets:
        report.controls.append(outcome(tset))
    return report


# --- protocols 2 and 3: statistical sampling -----------------------------------

def _collect_queries(protocol: int, dss: Dss, config: dict, m: int,
                     trials: int, seed: int) -> np.ndarray:
    """Query tensors: shape (trials, n, d, beta*f), entries in [0, q)."""
    from .protocol3 import p3_queries
    n = dss.code.n
    first = None
    out = None
    for t in range(trials):
        child = derive_seed(seed, "audit", protocol, m, t)
        if protocol == 2:
            qs = [query.Q for query in p2_queries(config["structure"], dss.f, m, child)]
        else:
            qs = p3_queries(config["setup"], dss.f, m, child)
        if first is None:
            first = (len(qs[0].data), len(qs[0].data[0]))
            out = np.empty((trials, n, first[0], first[1]), dtype=np.int64)
        for l, Q in enumerate(qs):
            out[t, l] = Q.data
    return out


def _audit_p23_statistical(protocol: int, dss: Dss, config: dict,
                           collusion_sets, trials: int, seed: int,
                           control_sets) -> PrivacyReport:
    q = dss.code.field.order
    n = dss.code.n
    if collusion_sets is None:
        t_max = 1 if protocol == 2 else config["setup"].collusion_threshold
        collusion_sets = _default_sets(n, t_max)
    tensors = [_collect_queries(protocol, dss, config, m, trials, seed)
               for m in range(1, dss.f + 1)]
    d, bf = tensors[0].shape[2], tensors[0].shape[3]
    n_tests = (len(collusion_sets)) * d * bf
    threshold = 0.01 / max(n_tests, 1)
    report = PrivacyReport(protocol=protocol, mode="statistical", trials=trials,
                           threshold=threshold)

    def outcomes_for(tset, sink):
        size = len(tset)
        vmax = q ** size
        for i in range(d):
            for j in range(bf):
                counts = np.zeros((dss.f, vmax), dtype=np.int64)
                for g, tensor in enumerate(tensors):
                    joint = np.zeros(trials, dtype=np.int64)
                    for pos, l in enumerate(tset):
                        joint = joint * q + tensor[:, l, i, j]
                    counts[g] = np.bincount(joint, minlength=vmax)
                p = _homogeneity_p(counts)
                sink.append(AuditOutcome(
                    collusion=tuple(tset), position=f"subquery {i} col {j}",
                    p_value=p, identical=None, flagged=p <= threshold))

    for tset in collusion_sets:
        outcomes_for(tset, report.outcomes)
    for tset in control_sets:
        outcomes_for(tset, report.controls)
    return report


# --- protocol 1: positional subset distributions plus exact balance checks -------

def _audit_p1(dss: Dss, config: dict, collusion_sets, trials: int,
              seed: int) -> PrivacyReport:
    lam = config["lam"]
    n = dss.code.n
    if collusion_sets is None:
        collusion_sets = _default_sets(n, 1)
    subset_index: dict[tuple, int] = {}
    plans = {}
    for m in range(1, dss.f + 1):
        plans[m] = p1_plan(dss.code, lam, dss.f, m, seed)
    d = plans[1].d
    # exact structural audits on one plan per file index
    notes = []
    for m, plan in plans.items():
        sym = p1_symmetry_audit(plan)
        if not sym.ok:
            notes.extend(f"m={m}: {v}" for v in sym.violations)
    samples = np.empty((dss.f, trials, n, d), dtype=np.int64)
    for m in range(1, dss.f + 1):
        for t in range(trials):
            child = derive_seed(seed, "audit-p1", m, t)
            plan = p1_plan(dss.code, lam, dss.f, m, child)
            for j in range(n):
                atoms = plan.node_atoms[j]
                for pos, idx in enumerate(plan.shuffles[j]):
                    files = tuple(sorted(mp for mp, _ in atoms[idx].terms))
                    code_idx = subset_index.setdefault(files, len(subset_index))
                    samples[m - 1, t, j, pos] = code_idx
    vmax = len(subset_index)
    n_tests = len(collusion_sets) * d
    threshold = 0.01 / max(n_tests, 1)
    report = PrivacyReport(protocol=1, mode="statistical", trials=trials,
                           threshold=threshold, notes=notes)
    for tset in collusion_sets:
        if len(tset) != 1:
            report.notes.append(f"skipping non-singleton set {tset}: the "
                                "noncolluding protocol defends single spies")
            continue
        (j,) = tset
        for pos in range(d):
            counts = np.zeros((dss.f, vmax), dtype=np.int64)
            for g in range(dss.f):
                counts[g] = np.bincount(samples[g, :, j, pos], minlength=vmax)
            p = _homogeneity_p(counts)
            report.outcomes.append(AuditOutcome(
                collusion=(j,), position=f"position {pos}",
                p_value=p, identical=None, flagged=p <= threshold))
    if notes:
        for note in notes:
            report.outcomes.append(AuditOutcome(
                collusion=(), position=f"structural: {note}", p_value=None,
                identical=False, flagged=True))
    return report
