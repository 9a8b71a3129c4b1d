import random

from hypothesis import given, settings, strategies as st

from hqdeform.exact_linalg import Matrix, check_certificate, check_solution, rank, solve, solve_sparse
from hqdeform.scalars import FieldSpec

Q = FieldSpec(0)
F7 = FieldSpec(7)


def test_identity_solve():
    out = solve(Matrix.identity(Q, 2), [1, 0])
    assert out.feasible and out.solution_vector(2, Q.zero) == [1, 0]


def test_duplicate_row_certificate():
    A = Matrix.from_rows(Q, [[1], [1]])
    out = solve(A, [1, 2])
    assert not out.feasible
    y = out.certificate_vector(2, Q.zero)
    assert y in ([1, -1], [-1, 1])
    assert check_certificate(Q, A.sparse_rows(), [Q(1), Q(2)], out.certificate)


def test_back_substitution_f7():
    A = Matrix.from_rows(F7, [[1, 1], [0, 1]])
    out = solve(A, [3, 5])
    assert out.solution_vector(2, F7.zero) == [F7(5), F7(5)]


def test_rank_examples():
    assert rank(Matrix.zeros(Q, 3, 3)) == 0
    assert rank(Matrix.identity(Q, 4)) == 4
    assert rank(Matrix.from_rows(Q, [[1, 2], [2, 4]])) == 1


def _det_rank(rows, p):
    # independent oracle: rank by brute-force row reduction on plain ints mod p
    m = [list(r) for r in rows]
    r = 0
    for c in range(len(m[0]) if m else 0):
        piv = next((i for i in range(r, len(m)) if m[i][c] % p), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] % p:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        r += 1
    return r


@settings(max_examples=60)
@given(st.lists(st.lists(st.integers(0, 6), min_size=4, max_size=4), min_size=1, max_size=6),
       st.lists(st.integers(0, 6), min_size=6, max_size=6))
def test_solve_outcome_is_verifiable(rows, b):
    A = Matrix.from_rows(F7, rows)
    rhs = [F7(x) for x in b[: len(rows)]]
    out = solve_sparse(F7, A.sparse_rows(), rhs)
    if out.feasible:
        assert check_solution(F7, A.sparse_rows(), rhs, out.solution)
    else:
        assert check_certificate(F7, A.sparse_rows(), rhs, out.certificate)
    assert rank(A) == _det_rank(rows, 7)


def test_certificate_checker_rejects_bogus():
    A = Matrix.from_rows(Q, [[1, 0], [0, 1]])
    assert not check_certificate(Q, A.sparse_rows(), [Q(1), Q(1)], {0: Q(1)})
    assert not check_solution(Q, A.sparse_rows(), [Q(1), Q(1)], {0: Q(1)})


def test_random_rational_systems():
    rng = random.Random(5)
    for _ in range(30):
        rows = [[rng.randint(-3, 3) for _ in range(5)] for _ in range(7)]
        x = [rng.randint(-2, 2) for _ in range(5)]
        A = Matrix.from_rows(Q, rows)
        b = A @ [Q(v) for v in x]
        out = solve(A, b)
        assert out.feasible and check_solution(Q, A.sparse_rows(), b, out.solution)
