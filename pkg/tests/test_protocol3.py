from fractions import Fraction

import pytest

from codedpir.dss import Dss, matrices_equal
from codedpir.errors import OrderOverflow, RateOneProduct, StructureViolation
from codedpir.families import grs_code, rm_code
from codedpir.fields import Matrix, field_make, mat_rank
from codedpir.protocol3 import (collusion_threshold, necessary_condition_p3,
                                p3_decode, p3_queries, p3_respond,
                                p3_rm_max_rate, p3_setup,
                                validate_max_rate_matrix)
from codedpir.rng import rng_for
from conftest import EHAT_P3, ISETS_P3


@pytest.fixture(scope="module")
def setup_vb(code124):
    return p3_setup(code124, code124, EHAT_P3, ISETS_P3)


def test_setup_worked_example(setup_vb):
    assert setup_vb.collusion_threshold == 2
    assert (setup_vb.gamma, setup_vb.beta, setup_vb.d) == (2, 1, 2)
    assert setup_vb.rate == Fraction(1, 6) == setup_vb.rate_upper_bound
    assert setup_vb.rate_nonopt == Fraction(1, 12)
    assert (setup_vb.product.n, setup_vb.product.k) == (12, 10)


def test_setup_rejections(code124, good532, f2):
    from codedpir.codes import code_from_generator
    whole = code_from_generator(Matrix.identity(f2, 12))
    with pytest.raises(RateOneProduct):
        p3_setup(whole, whole, EHAT_P3, ISETS_P3)
    with pytest.raises(StructureViolation):
        p3_setup(code124, code124, [(1,) * 12, (0,) * 11 + (1,)], ISETS_P3)
    with pytest.raises(StructureViolation):
        p3_setup(code124, code124, EHAT_P3, [(0, 1, 2, 3)])


def test_repetition_query_code_degenerates(code124, f2):
    from codedpir.codes import code_from_generator
    rep = code_from_generator(Matrix(f2, [[1] * 12]))
    prod = code124.hadamard_product(rep)
    assert mat_rank(Matrix(f2, prod.G.data + code124.G.data)) == code124.k
    assert collusion_threshold(rep) == 1  # noncolluding-like setup


def test_query_offsets_match_worked_example(setup_vb, code124, f2):
    qs = p3_queries(setup_vb, f=1, m=1, seed=0)
    rng = rng_for(0, "p3", "codewords", 0)
    msg = [[rng.randrange(2) for _ in range(4)]]
    cw = code124.encode(Matrix(f2, msg)).data[0]
    for l in range(12):
        expected = cw[l] ^ (1 if l in (8, 11) else 0)
        assert qs[l].data[0][0] == expected
    # beta = 1 forces s = 1 on every accessed node
    assert setup_vb.stripe_assignment(8) == [0, None]
    assert setup_vb.stripe_assignment(2) == [None, 0]


def test_response_decomposition(setup_vb, code124):
    """rho decomposes as a product-code codeword plus the offset symbols."""
    dss = Dss(code124, f=1, beta=1, seed=1)
    qs = p3_queries(setup_vb, 1, 1, seed=4)
    responses = p3_respond(dss, qs)
    rho1 = [responses[l][0] for l in range(12)]
    offsets = [dss.arrays[0].data[0][l] if l in (8, 11) else 0 for l in range(12)]
    diff = Matrix.column(dss.msg_field,
                         [dss.msg_field.sub(a, b) for a, b in zip(rho1, offsets)])
    from codedpir.fields import mat_mul
    h_lift = setup_vb.product.H.lift(dss.msg_field)
    assert all(row == [0] for row in mat_mul(h_lift, diff).data)


def test_all_zero_files_give_zero_offsets(setup_vb, code124):
    zero = Matrix(code124.field, [[0] * 4])
    dss = Dss(code124, f=1, beta=1, seed=0, files=[zero])
    qs = p3_queries(setup_vb, 1, 1, seed=2)
    responses = p3_respond(dss, qs)
    assert all(v == 0 for r in responses for v in r)


@pytest.mark.parametrize("f", [1, 2])
@pytest.mark.parametrize("seed", range(5))
def test_end_to_end_worked_example(code124, setup_vb, f, seed):
    for m in range(1, f + 1):
        dss = Dss(code124, f=f, beta=1, seed=seed)
        qs = p3_queries(setup_vb, f, m, seed)
        responses = p3_respond(dss, qs)
        decoded = p3_decode(setup_vb, responses, f, m, dss.msg_field)
        assert matrices_equal(decoded, dss.files[m - 1])


def test_rm_max_rate_small():
    setup = p3_rm_max_rate(1, 1, 3)
    assert setup.product.k == 7
    assert setup.rate == Fraction(1, 8) == setup.rate_upper_bound
    dss = Dss(setup.code, f=2, beta=setup.beta, seed=3)
    qs = p3_queries(setup, 2, 2, seed=9)
    responses = p3_respond(dss, qs)
    decoded = p3_decode(setup, responses, 2, 2, dss.msg_field)
    assert matrices_equal(decoded, dss.files[1])


def test_rm_max_rate_16():
    setup = p3_rm_max_rate(1, 1, 4)
    assert setup.rate == Fraction(5, 16)
    dss = Dss(setup.code, f=1, beta=setup.beta, seed=1)
    qs = p3_queries(setup, 1, 1, seed=1)
    responses = p3_respond(dss, qs)
    assert matrices_equal(p3_decode(setup, responses, 1, 1, dss.msg_field),
                          dss.files[0])


def test_rm_degenerate_repetition():
    setup = p3_rm_max_rate(0, 0, 3)
    assert setup.rate == Fraction(7, 8)
    with pytest.raises(OrderOverflow):
        p3_rm_max_rate(2, 2, 3)


def test_validate_max_rate_matrix(code124):
    setup = p3_rm_max_rate(1, 1, 3)
    code, query = setup.code, setup.query_code
    rows = [tuple(1 - b for b in row) for row in setup.ehat]
    rows += [tuple(1 if j in set(s) else 0 for j in range(code.n))
             for s in setup.info_sets]
    report = validate_max_rate_matrix(code, query, rows)
    assert report.ok
    corrupted = [list(r) for r in rows]
    corrupted[0][0] ^= 1
    report = validate_max_rate_matrix(code, query, corrupted)
    assert not report.ok and report.violation == "column-regularity"
    # ktilde = n is rejected
    from codedpir.codes import code_from_generator
    whole = code_from_generator(Matrix.identity(field_make(2), 12))
    report = validate_max_rate_matrix(whole, whole, rows)
    assert not report.ok and report.violation == "rate-one-product"


def test_necessary_condition_p3(code124):
    assert necessary_condition_p3(code124, code124).ok
    # RM pair satisfies the condition as well (it achieves the bound)
    assert necessary_condition_p3(rm_code(1, 3), rm_code(1, 3)).ok


def test_collusion_thresholds():
    f13 = field_make(13)
    assert collusion_threshold(grs_code(f13, 9, 2)) == 2
    assert collusion_threshold(grs_code(f13, 12, 2)) == 2
    assert collusion_threshold(rm_code(1, 5)) == 3


def test_zero_codeword_hook_exposes_offsets(code124, setup_vb):
    """With the random codewords forced to zero the queries are the bare unit
    offsets and responses are exactly the masked file symbols."""
    dss = Dss(code124, f=1, beta=1, seed=8)
    queries = []
    for l in range(12):
        rows = [[0] * 1 for _ in range(2)]
        for i, stripe in enumerate(setup_vb.stripe_assignment(l)):
            if setup_vb.ehat[i][l]:
                rows[i][stripe] = 1
        queries.append(Matrix(code124.field, rows, 2, 1))
    responses = p3_respond(dss, queries)
    for l in range(12):
        for i in range(2):
            if setup_vb.ehat[i][l]:
                assert responses[l][i] == dss.arrays[0].data[0][l]
            else:
                assert responses[l][i] == 0


def test_end_to_end_extension_field(code124, setup_vb):
    """Message symbols in GF(4), query symbols in GF(2)."""
    dss = Dss(code124, f=2, beta=1, ell=2, seed=6)
    qs = p3_queries(setup_vb, 2, 1, seed=6)
    responses = p3_respond(dss, qs)
    decoded = p3_decode(setup_vb, responses, 2, 1, dss.msg_field)
    assert matrices_equal(decoded, dss.files[0])


def test_necessary_condition_p3_zero_column_product(f2):
    """A product code with an identically-zero coordinate sits exactly on the
    d_s >= s boundary; the checker reports it as satisfied."""
    from codedpir.codes import code_from_generator
    c = code_from_generator(Matrix(f2, [[1, 0, 1]]))
    cbar = code_from_generator(Matrix(f2, [[0, 1, 1]]))
    prod = c.hadamard_product(cbar)
    assert prod.k == 1 and prod.min_distance() == 1  # support shrank to {2}
    report = necessary_condition_p3(c, cbar)
    assert report.ok
