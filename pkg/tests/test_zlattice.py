import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qe2 import zlattice as Z

matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)))


def test_snf_example():
    S, U, V = Z.snf([[2, 0], [0, 3]])
    assert S == [[1, 0], [0, 6]]


@settings(max_examples=300, deadline=None)
@given(matrices)
def test_snf_properties(M):
    S, U, V = Z.snf(M)
    r, c = Z.shape(M)
    assert Z.matmul(Z.matmul(U, M), V) == S
    assert abs(Z.det(U)) == 1 and abs(Z.det(V)) == 1
    assert all(S[i][j] == 0 for i in range(r) for j in range(c) if i != j)
    diag = [S[i][i] for i in range(min(r, c)) if S[i][i]]
    assert all(x > 0 for x in diag)
    assert all(diag[k + 1] % diag[k] == 0 for k in range(len(diag) - 1))
    K = Z.kernel(M)
    assert len(K) + len(diag) == c
    for v in K:
        assert all(sum(M[i][j] * v[j] for j in range(c)) == 0 for i in range(r))


def test_det_oracle():
    assert Z.det([[1, 2], [3, 4]]) == -2
    assert Z.det([[0, 1, 2], [1, 0, 3], [4, -3, 8]]) == -2
    assert Z.det(Z.builtin("D")) == 16


def test_d_has_full_rank():
    assert Z.rank(Z.builtin("D")) == 6
    assert Z.kernel(Z.builtin("D")) == []
    assert Z.torus_center(Z.builtin("D")) == []


def test_d56_trivial_center():
    assert Z.torus_center(Z.builtin("D56")) == []


def test_cx_center_is_k_axis():
    M = Z.builtin("CX")
    assert M[0] == [0, 0, 0, 0, 0]
    basis = Z.torus_center(M)
    assert len(basis) == 1 and [abs(x) for x in basis[0]] == [1, 0, 0, 0, 0]


def test_uq_torus_simple():
    assert Z.builtin("UqE") == [[0, -2], [2, 0]]
    assert Z.torus_center(Z.builtin("UqE")) == []


def test_center_requires_antisymmetry():
    with pytest.raises(ValueError):
        Z.torus_center([[0, 1], [1, 0]])


def test_kernel_edge_cases():
    assert sorted(Z.kernel([[0, 0], [0, 0]])) == [[0, 1], [1, 0]]
    assert Z.torus_center([[0]]) == [[1]]


def test_load_json(tmp_path):
    p = tmp_path / "m.json"
    p.write_text(json.dumps([[0, 2], [-2, 0]]))
    assert Z.load(str(p)) == [[0, 2], [-2, 0]]
    p.write_text(json.dumps([[0, 1.5]]))
    with pytest.raises(ValueError):
        Z.load(str(p))
    with pytest.raises(KeyError):
        Z.builtin("nope")
