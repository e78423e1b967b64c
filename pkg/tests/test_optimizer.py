from fractions import Fraction

import pytest

from codedpir.codes import ErasurePattern, code_from_generator
from codedpir.errors import RateOneProduct
from codedpir.families import grs_code, uuv_code
from codedpir.fields import Matrix, field_make
from codedpir.optimizer import (compute_erasure_pattern_list, compute_matrix,
                                compute_matrix_bruteforce, optimize_rate,
                                optimize_rate_colluding)
from codedpir.protocol2 import p2_build_structure
from codedpir.protocol3 import p3_setup
from codedpir.ratematrix import beta_d_minimal

f2 = field_make(2)
f13 = field_make(13)


def test_pattern_lists(good532, bad532, rs53):
    assert len(compute_erasure_pattern_list(rs53, 2)) == 10
    bad_list = compute_erasure_pattern_list(bad532, 2)
    assert 0 < len(bad_list) < 10
    assert all(bad532.erasure_correctable(p) for p in bad_list.patterns)
    assert len(compute_erasure_pattern_list(good532, 0)) == 1
    assert len(compute_erasure_pattern_list(good532, 3)) == 0  # above n - k


def test_pattern_list_sampled_mode(code124):
    """Force the randomized pivot route and check soundness + determinism."""
    full = compute_erasure_pattern_list(code124, 8)
    sampled = compute_erasure_pattern_list(code124, 8, budget=10,
                                           sample_budget=80, seed=5)
    again = compute_erasure_pattern_list(code124, 8, budget=10,
                                         sample_budget=80, seed=5)
    assert [p.support for p in sampled.patterns] == [p.support for p in again.patterns]
    full_set = {p.support for p in full.patterns}
    assert 0 < len(sampled) and {p.support for p in sampled.patterns} <= full_set


@pytest.mark.parametrize("gamma", [1, 2])
def test_solver_vs_bruteforce_small(good532, bad532, gamma):
    for code in (good532, bad532):
        lg = compute_erasure_pattern_list(code, gamma)
        lnk = compute_erasure_pattern_list(code, code.n - code.k)
        beta, d = beta_d_minimal(code.k, gamma)
        fast = compute_matrix(lg, lnk, d, beta)
        slow = compute_matrix_bruteforce(lg, lnk, d, beta)
        assert (fast is None) == (slow is None)
        if fast is not None:
            _check_valid(code, fast, gamma, beta, d)


def test_solver_vs_bruteforce_n7_n9(code73):
    c9 = _tamo_barg_9_4()
    cases = [(code73, 3), (code73, 4), (c9, 1), (c9, 2)]
    for code, gamma in cases:
        lg = compute_erasure_pattern_list(code, gamma)
        lnk = compute_erasure_pattern_list(code, code.n - code.k)
        beta, d = beta_d_minimal(code.k, gamma)
        fast = compute_matrix(lg, lnk, d, beta)
        slow = compute_matrix_bruteforce(lg, lnk, d, beta)
        assert (fast is None) == (slow is None), (code, gamma)
        if fast is not None:
            _check_valid(code, fast, gamma, beta, d)


def _tamo_barg_9_4():
    points = sorted({1, 3, 9, 2, 6, 5, 4, 12, 10})
    G = Matrix(f13, [[f13.pow(a, e) for a in points] for e in [0, 1, 3, 4]])
    return code_from_generator(G)


def _check_valid(code, e, gamma, beta, d):
    assert e.d == d and e.beta == beta and e.gamma == gamma
    rows = e.stacked()
    n = code.n
    for j in range(n):
        assert sum(r[j] for r in rows) == beta
    for r in e.ehat:
        assert code.erasure_correctable(ErasurePattern(n, r))
    for iset in e.info_sets():
        assert code.is_information_set(iset)


def test_optimize_rate_worked_codes(good532, bad532, code73):
    e, g = optimize_rate(good532)
    assert g == 2 and e is not None
    structure = p2_build_structure(good532, e.info_sets(), e.ehat)
    assert structure.rate == Fraction(2, 5)
    e8, g8 = optimize_rate(code73)
    assert g8 == 4
    # the bad [5,3,2] code cannot reach Gamma = 2 (capacity condition fails)
    eb, gb = optimize_rate(bad532)
    assert gb == 1
    # MDS rate > 1/2: single main-loop iteration lands at Gamma = n - k
    em, gm = optimize_rate(grs_code(field_make(7), 5, 3))
    assert gm == 2


def test_optimize_rate_gamma_k_rule(good532):
    e, g = optimize_rate(good532, beta_d_rule="gamma-k")
    assert g == 2
    assert e.d == good532.k and e.beta == 2


def test_optimize_rate_colluding_worked(code124):
    e, g = optimize_rate_colluding(code124, code124)
    assert g == 2 and Fraction(g, 12) == Fraction(1, 6)
    setup = p3_setup(code124, code124, e.ehat, e.info_sets())
    assert setup.rate == Fraction(1, 6)
    whole = code_from_generator(Matrix.identity(f2, 4))
    with pytest.raises(RateOneProduct):
        optimize_rate_colluding(whole, whole)


def test_optimize_rate_colluding_uuv():
    hcols = [[(c >> b) & 1 for c in range(1, 16)] for b in range(4)]
    from codedpir.codes import LinearCode
    H = Matrix(f2, [row + [0] for row in hcols] + [[1] * 16])
    u = LinearCode.from_parity_check(H).shorten(list(range(13)))
    c13 = uuv_code(u)
    assert (c13.n, c13.k, c13.min_distance()) == (26, 9, 8)
    prod = c13.hadamard_product(c13)
    assert prod.min_distance() == 1  # the unimproved scheme gets rate 0
    e, g = optimize_rate_colluding(c13, c13, sample_budget=1500)
    assert g == 4 and Fraction(g, 26) == Fraction(2, 13)
    setup = p3_setup(c13, c13, e.ehat, e.info_sets())
    assert setup.collusion_threshold == 3


def test_monotone_gamma_examination(good532, monkeypatch):
    """Feasibility at Gamma implies the loop examined every smaller value."""
    import codedpir.optimizer as opt
    seen = []
    original = opt.compute_erasure_pattern_list

    def spy(code, w, **kwargs):
        seen.append(w)
        return original(code, w, **kwargs)

    monkeypatch.setattr(opt, "compute_erasure_pattern_list", spy)
    opt.optimize_rate(good532)
    assert seen[0] == good532.n - good532.k  # the info-set list comes first
    assert seen[1:] == [1, 2]  # every Gamma from the floor up, none skipped
