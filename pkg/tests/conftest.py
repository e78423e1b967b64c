import pytest

from codedpir.codes import LinearCode, code_from_generator
from codedpir.families import grs_code
from codedpir.fields import Matrix, field_make

GOOD_G = [[1, 0, 0, 1, 0], [0, 1, 0, 1, 1], [0, 0, 1, 0, 1]]
BAD_G = [[1, 0, 0, 1, 0], [0, 1, 0, 1, 0], [0, 0, 1, 0, 1]]
H73 = [[0, 1, 1, 1, 0, 0, 0], [1, 0, 1, 0, 1, 0, 0],
       [1, 1, 0, 0, 0, 1, 0], [1, 1, 1, 0, 0, 0, 1]]
# systematic generator matching the published code array (c_4 = x_2 + x_3, ...)
G73 = [[1, 0, 0, 0, 1, 1, 1], [0, 1, 0, 1, 0, 1, 1], [0, 0, 1, 1, 1, 0, 1]]
H124 = [[0, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0],
        [1, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0],
        [1, 1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0],
        [1, 1, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0],
        [1, 0, 1, 1, 0, 0, 0, 0, 1, 0, 0, 0],
        [0, 1, 1, 1, 0, 0, 0, 0, 0, 1, 0, 0],
        [1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 1, 0],
        [0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 1]]

# the structure pair of the first file-independent worked example
EHAT_EX5 = [[1, 0, 1, 0, 0], [1, 1, 0, 0, 0], [0, 1, 1, 0, 0]]
ISETS_EX5 = [[0, 1, 2], [0, 1, 2]]
# and of the [7,3,4] one
EHAT_EX6 = [[0, 0, 1, 1, 1, 1, 0], [1, 1, 0, 1, 0, 1, 0], [1, 0, 1, 0, 0, 1, 1]]
ISETS_EX6 = [[2, 3, 5], [1, 5, 6], [0, 2, 3], [0, 4, 5]]

LAM35 = [(1, 1, 1, 0, 0), (1, 0, 0, 1, 1), (0, 1, 0, 1, 1),
         (0, 1, 1, 1, 0), (1, 0, 1, 0, 1)]
LAM23 = [(0, 1, 1, 1, 1), (1, 0, 0, 1, 1), (1, 1, 1, 0, 0)]

# structure of the colluding worked example (0-based)
EHAT_P3 = [(0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1),
           (0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0)]
ISETS_P3 = [(1, 2, 8, 11)]


@pytest.fixture(scope="session")
def f2():
    return field_make(2)


@pytest.fixture(scope="session")
def good532(f2):
    return code_from_generator(Matrix(f2, GOOD_G))


@pytest.fixture(scope="session")
def bad532(f2):
    return code_from_generator(Matrix(f2, BAD_G))


@pytest.fixture(scope="session")
def code73(f2):
    return LinearCode(Matrix(f2, G73), Matrix(f2, H73))


@pytest.fixture(scope="session")
def code124(f2):
    return LinearCode.from_parity_check(Matrix(f2, H124))


@pytest.fixture(scope="session")
def rs53():
    return grs_code(field_make(7), 5, 3)
