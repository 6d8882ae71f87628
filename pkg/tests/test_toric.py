"""Weight-matrix models, vertex enumeration, integer lattice kernels."""

import itertools
import json
import random
from fractions import Fraction

import pytest

from mirrorkit import toric
from mirrorkit.errors import EmptyChamber, RankDeficient, UnknownModel, ZeroColumn


def _solve_fraction(A, b):
    """Plain Gaussian elimination over Fraction; None when singular."""
    n = len(b)
    M = [[Fraction(A[r][c]) for c in range(n)] + [Fraction(b[r])] for r in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        M[col] = [x / M[col][col] for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]


def _brute_force_vertices(model):
    out = []
    for J in itertools.combinations(range(model.N), model.K):
        A = [[model.weights[i][j] for j in J] for i in range(model.K)]
        # columns J as a K x K system: coefficients c with sum_j c_j col_j = chamber
        sol = _solve_fraction(
            [[model.weights[i][J[a]] for a in range(model.K)] for i in range(model.K)],
            list(model.chamber),
        )
        if sol is not None and all(c > 0 for c in sol):
            out.append(J)
    return tuple(out)


@pytest.mark.parametrize("name", ["pt", "P1", "P2", "P1xP1"])
def test_vertices_match_brute_force(name):
    model = toric.catalog_model(name)
    assert toric.enumerate_vertices(model) == _brute_force_vertices(model)


def test_vertex_minors_unimodular_on_catalog():
    for name in ("pt", "P1", "P2", "P1xP1"):
        model = toric.catalog_model(name)
        for J, minor in toric.vertex_minors(model).items():
            assert minor in (-1, 1)


def test_validate_rejects_zero_column():
    with pytest.raises(ZeroColumn):
        toric.validate_model(toric.ToricModel(weights=((1, 0),)))


def test_validate_rejects_rank_deficient():
    with pytest.raises(RankDeficient):
        toric.validate_model(toric.ToricModel(weights=((1, 1), (2, 2))))


def test_validate_rejects_unrepresentable_chamber():
    with pytest.raises(EmptyChamber):
        toric.validate_model(toric.ToricModel(weights=((-1, -1),), chamber=(1,)))


def test_smith_normal_form_random():
    rng = random.Random(11)
    for _ in range(25):
        rows = rng.choice([2, 3])
        cols = rng.choice([2, 3, 4])
        A = [[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)]
        U, D, V = toric.smith_normal_form([tuple(r) for r in A])
        # U A V == D, exactly
        UA = [[sum(U[i][k] * A[k][j] for k in range(rows)) for j in range(cols)] for i in range(rows)]
        UAV = [[sum(UA[i][k] * V[k][j] for k in range(cols)) for j in range(cols)] for i in range(rows)]
        assert [list(r) for r in UAV] == [list(r) for r in D]
        assert abs(toric.int_det([list(r) for r in U])) == 1
        assert abs(toric.int_det([list(r) for r in V])) == 1
        diag = [D[i][i] for i in range(min(rows, cols))]
        for a, b in zip(diag, diag[1:]):
            if a and b:
                assert b % a == 0
        assert all(d >= 0 for d in diag)


def test_fiber_chart_inverts():
    for name in ("P1", "P2", "P1xP1"):
        model = toric.catalog_model(name)
        chart = toric.fiber_parametrization(model)
        Q = tuple(0.7 + 0.1 * k for k in range(model.K))
        t = tuple(1.3 + 0.2 * b for b in range(chart.fiber_dim))
        x = chart.x_values(Q, t)
        # weight products recover Q
        for i in range(model.K):
            prod = 1.0
            for j in range(model.N):
                prod *= x[j] ** model.weights[i][j]
            assert abs(prod - Q[i]) < 1e-12
        back = chart.t_values(x)
        assert all(abs(a - b) < 1e-12 for a, b in zip(back, t))


def test_p1_chart_explicit():
    chart = toric.fiber_parametrization(toric.catalog_model("P1"))
    x = chart.x_values((4.0,), (2.0,))
    assert x == (2.0, 2.0)


def test_model_json_roundtrip(tmp_path):
    model = toric.catalog_model("P1xP1")
    data = toric.model_to_json(model)
    again = toric.model_from_json(json.loads(json.dumps(data)))
    assert again.weights == model.weights
    assert again.chamber == model.chamber
    path = tmp_path / "model.json"
    path.write_text(json.dumps(data))
    assert toric.resolve_model(str(path)).weights == model.weights


def test_resolve_model_unknown():
    with pytest.raises(UnknownModel):
        toric.resolve_model("no-such-model")


def test_expected_point_count():
    assert toric.expected_point_count(toric.catalog_model("P2")) == 3
    custom = toric.ToricModel(weights=((1, 2),), chamber=(1,))
    assert toric.expected_point_count(custom) is None
