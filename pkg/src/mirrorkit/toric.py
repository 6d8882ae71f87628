"""Toric quotient data.

A model is an integer weight matrix (K torus factors acting on N coordinates)
with an optional chamber vector, optional bundle weights (one row per line
bundle summand), and an equivariance mode. All structural computations here
are exact: ranks and cone memberships over big rationals, Smith normal form
over the integers.
"""

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import EmptyChamber, MissingBundleData, RankDeficient, UnknownModel, ZeroColumn

MODES = ("none", "coh", "k")


@dataclass(frozen=True)
class ToricModel:
    """Weight data for X = C^N // T^K with optional bundle summands."""

    weights: tuple  # K rows x N columns of ints
    chamber: tuple = None  # K rationals or None
    bundle_weights: tuple = ()  # L rows x K columns of ints
    equivariance: str = "none"
    smooth: bool = None
    name: str = None

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(tuple(int(x) for x in row) for row in self.weights))
        if self.chamber is not None:
            object.__setattr__(self, "chamber", tuple(Fraction(x) for x in self.chamber))
        object.__setattr__(
            self, "bundle_weights", tuple(tuple(int(x) for x in row) for row in self.bundle_weights)
        )

    @property
    def K(self):
        return len(self.weights)

    @property
    def N(self):
        return len(self.weights[0]) if self.weights else 0

    @property
    def L(self):
        return len(self.bundle_weights)

    def column(self, j):
        """Weight column of coordinate j: (m_1j, ..., m_Kj)."""
        return tuple(row[j] for row in self.weights)

    def bundle_column(self, a):
        """Weights of bundle summand a: (l_1a, ..., l_Ka)."""
        return tuple(int(x) for x in self.bundle_weights[a])

    def mori_degrees(self, d):
        """D_j(d) = sum_i d_i m_ij for every coordinate j."""
        return tuple(sum(d[i] * self.weights[i][j] for i in range(self.K)) for j in range(self.N))

    def bundle_degrees(self, d):
        """Delta_a(d) = sum_i d_i l_ia for every bundle summand a."""
        return tuple(sum(d[i] * self.bundle_weights[a][i] for i in range(self.K)) for a in range(self.L))

    def require_bundle(self):
        if not self.bundle_weights:
            raise MissingBundleData(f"model {self.name or self.weights} carries no bundle weights")


# -- exact linear algebra helpers --------------------------------------


def _rank_rational(rows):
    """Row rank over Q, exact."""
    m = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    col = 0
    for col in range(ncols):
        piv = None
        for r in range(rank, len(m)):
            if m[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][col]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                f = m[r][col] / pv
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank

def int_det(rows):
    """Determinant of a square integer matrix, exact (fraction-free Bareiss)."""
    a = [[int(x) for x in row] for row in rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def _solve_square_exact(mat, rhs):
    """Solve mat x = rhs over Q for square invertible mat; None if singular."""
    n = len(mat)
    a = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(mat)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if a[r][col] != 0:
                piv = r
                break
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


# -- validation and vertices -------------------------------------------


def validate_model(model):
    """Structural checks; raises on malformed data, returns None."""
    K, N = model.K, model.N
    if K == 0 or N == 0:
        raise RankDeficient("empty weight matrix")
    if any(len(row) != N for row in model.weights):
        raise RankDeficient("ragged weight matrix")
    for j in range(N):
        if all(model.weights[i][j] == 0 for i in range(K)):
            raise ZeroColumn(f"coordinate {j} has zero weight column")
    if _rank_rational(model.weights) != K:
        raise RankDeficient("weight matrix rank is below the torus rank")
    if model.chamber is not None:
        if len(model.chamber) != K:
            raise EmptyChamber("chamber vector has wrong length")
        if not _chamber_representable(model):
            raise EmptyChamber("chamber vector is not in the weight cone")
    for row in model.bundle_weights:
        if len(row) != K:
            raise MissingBundleData("bundle weight row has wrong length")
    if model.equivariance not in MODES:
        raise UnknownModel(f"unknown equivariance mode {model.equivariance!r}")
    if model.smooth:
        for J in enumerate_vertices(model):
            d = int_det([[model.weights[i][j] for j in J] for i in range(model.K)])
            if abs(d) != 1:
                raise RankDeficient(
                    f"model declared smooth but vertex {J} has minor {d} (need +-1)"
                )


def _chamber_representable(model):
    for J in itertools.combinations(range(model.N), model.K):
        sub = [[model.weights[i][j] for j in J] for i in range(model.K)]
        if int_det(sub) == 0:
            continue
        c = _solve_square_exact(sub, model.chamber)
        if c is not None and all(x >= 0 for x in c):
            return True
    return False


@lru_cache(maxsize=None)
def enumerate_vertices(model):
    """K-subsets J whose weight columns span the chamber in their open cone.

    Sorted lexicographically; exact rational membership test.
    """
    if model.chamber is None:
        raise EmptyChamber("vertex enumeration needs a chamber vector")
    out = []
    for J in itertools.combinations(range(model.N), model.K):
        sub = [[model.weights[i][j] for j in J] for i in range(model.K)]
        if int_det(sub) == 0:
            continue
        c = _solve_square_exact(sub, model.chamber)
        if c is not None and all(x > 0 for x in c):
            out.append(J)
    return tuple(out)


@lru_cache(maxsize=None)
def vertex_minors(model):
    """All nonzero K x K minors of the weight matrix, keyed by column set."""
    out = {}
    for J in itertools.combinations(range(model.N), model.K):
        d = int_det([[model.weights[i][j] for j in J] for i in range(model.K)])
        if d != 0:
            out[J] = d
    return out


# -- Smith normal form --------------------------------------------------


def smith_normal_form(rows):
    """U, D, V with U @ A @ V = D diagonal, U and V unimodular.

    Deterministic pivoting: smallest absolute nonzero entry, ties by
    position. Diagonal entries are nonnegative with d_t | d_{t+1}.
    """
    A = [[int(x) for x in row] for row in rows]
    k = len(A)
    n = len(A[0]) if A else 0
    U = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
    V = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def swap_rows(i1, i2):
        A[i1], A[i2] = A[i2], A[i1]
        U[i1], U[i2] = U[i2], U[i1]

    def swap_cols(j1, j2):
        for r in A:
            r[j1], r[j2] = r[j2], r[j1]
        for r in V:
            r[j1], r[j2] = r[j2], r[j1]

    def add_row(dst, src, c):
        A[dst] = [a + c * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, c):
        for r in A:
            r[dst] += c * r[src]
        for r in V:
            r[dst] += c * r[src]

    def neg_row(i):
        A[i] = [-x for x in A[i]]
        U[i] = [-x for x in U[i]]

    t = 0
    while t < min(k, n):
        # pivot: smallest |value| among nonzero entries of the trailing block
        best = None
        for i in range(t, k):
            for j in range(t, n):
                v = abs(A[i][j])
                if v and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            break
        _, bi, bj = best
        if bi != t:
            swap_rows(t, bi)
        if bj != t:
            swap_cols(t, bj)
        while True:
            # clear column t
            dirty = False
            for i in range(t + 1, k):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    add_row(i, t, -q)
                    if A[i][t]:
                        swap_rows(t, i)
                        dirty = True
            if dirty:
                continue
            # clear row t
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    add_col(j, t, -q)
                    if A[t][j]:
                        swap_cols(t, j)
                        dirty = True
            if dirty:
                continue
            # enforce divisibility of the trailing block by the pivot
            fixed = True
            for i in range(t + 1, k):
                for j in range(t + 1, n):
                    if A[i][j] % A[t][t]:
                        add_row(t, i, 1)
                        fixed = False
                        break
                if not fixed:
                    break
            if fixed:
                break
        if A[t][t] < 0:
            neg_row(t)
        t += 1
    return U, A, V


# -- fiber parametrization ----------------------------------------------


@dataclass(frozen=True)
class FiberChart:
    """Monomial coordinates on the constraint torus.

    x_j = prod_i Q_i^{section[i][j]} * prod_b t_b^{kernel[b][j]} solves the
    weight constraints identically; t_from_x inverts for the fiber
    coordinates, and the weight matrix itself recovers Q from x.
    """

    model: ToricModel
    section: tuple  # K x N ints
    kernel: tuple  # (N-K) x N ints
    t_from_x: tuple  # (N-K) x N ints

    @property
    def fiber_dim(self):
        return len(self.kernel)

    def x_values(self, q_vals, t_vals):
        out = []
        for j in range(self.model.N):
            v = 1.0 + 0.0j
            for i, q in enumerate(q_vals):
                e = self.section[i][j]
                if e:
                    v *= complex(q) ** e
            for b, tv in enumerate(t_vals):
                e = self.kernel[b][j]
                if e:
                    v *= complex(tv) ** e
            out.append(v)
        return tuple(out)

    def t_values(self, x_vals):
        out = []
        for b in range(self.fiber_dim):
            v = 1.0 + 0.0j
            for j, x in enumerate(x_vals):
                e = self.t_from_x[b][j]
                if e:
                    v *= complex(x) ** e
            out.append(v)
        return tuple(out)


def _column_hnf(cols, nrows):
    """Canonical column form of an integer column list (echelon, positive pivots)."""
    cols = [list(c) for c in cols]
    ncols = len(cols)
    done = 0
    for r in range(nrows):
        piv = None
        for ci in range(done, ncols):
            if cols[ci][r]:
                piv = ci
                break
        if piv is None:
            continue
        cols[done], cols[piv] = cols[piv], cols[done]
        # Euclid on row r: pivot column ends with +-gcd, later columns with 0
        for ci in range(done + 1, ncols):
            while cols[ci][r]:
                q = cols[done][r] // cols[ci][r]
                cols[done] = [a - q * b for a, b in zip(cols[done], cols[ci])]
                cols[done], cols[ci] = cols[ci], cols[done]
        if cols[done][r] < 0:
            cols[done] = [-x for x in cols[done]]
        # normalize earlier columns' entries in this pivot row
        for ci in range(done):
            q = cols[ci][r] // cols[done][r]
            if q:
                cols[ci] = [a - q * b for a, b in zip(cols[ci], cols[done])]
        done += 1
        if done == ncols:
            break
    return [tuple(c) for c in cols]


@lru_cache(maxsize=None)
def fiber_parametrization(model):
    """Integer monomial chart for the constraint torus, canonical form.

    Raises RankDeficient when the weight matrix has no integer right
    inverse (rank below K, or a nontrivial invariant factor).
    """
    K, N = model.K, model.N
    if _rank_rational(model.weights) != K:
        raise RankDeficient("weight matrix rank is below the torus rank")
    U, D, V = smith_normal_form(model.weights)
    for t in range(K):
        if D[t][t] != 1:
            raise RankDeficient(
                f"invariant factor {D[t][t]} at position {t}: no integer monomial chart"
            )
    # right inverse R = V[:, :K] @ U  (N x K), kernel basis = columns V[:, K:]
    R = [[sum(V[j][s] * U[s][i] for s in range(K)) for i in range(K)] for j in range(N)]
    kern_cols = [tuple(V[j][K + b] for j in range(N)) for b in range(N - K)]
    kern_cols = _column_hnf(kern_cols, N)
    # canonicalize the section: reduce each Q-column modulo the kernel lattice
    sec_cols = [[R[j][i] for j in range(N)] for i in range(K)]
    for g in kern_cols:
        piv_row = next(r for r in range(N) if g[r])
        piv = g[piv_row]
        for c in sec_cols:
            q = c[piv_row] // piv
            if q:
                for r in range(N):
                    c[r] -= q * g[r]
    section = tuple(tuple(col) for col in sec_cols)  # K rows x N cols
    kernel = tuple(kern_cols)  # (N-K) rows x N cols

    # integer inverse of the full exponent matrix for the backward map
    full = [[0] * N for _ in range(N)]
    for j in range(N):
        for i in range(K):
            full[j][i] = section[i][j]
        for b in range(N - K):
            full[j][K + b] = kernel[b][j]
    det = int_det(full)
    if abs(det) != 1:
        raise RankDeficient("parametrization matrix is not unimodular")
    inv = _int_inverse(full, det)
    t_from_x = tuple(tuple(inv[K + b][j] for j in range(N)) for b in range(N - K))
    chart = FiberChart(model=model, section=section, kernel=kernel, t_from_x=t_from_x)
    _check_chart(model, chart)
    return chart


def _int_inverse(mat, det):
    """Inverse of a unimodular integer matrix via exact elimination."""
    n = len(mat)
    a = [[Fraction(x) for x in row] for row in mat]
    inv = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        inv[col] = [x / pv for x in inv[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    out = [[int(x) for x in row] for row in inv]
    return out


def _check_chart(model, chart):
    K, N = model.K, model.N
    for i in range(K):
        for i2 in range(K):
            s = sum(model.weights[i][j] * chart.section[i2][j] for j in range(N))
            assert s == (1 if i == i2 else 0), "section is not a right inverse"
        for b in range(N - K):
            s = sum(model.weights[i][j] * chart.kernel[b][j] for j in range(N))
            assert s == 0, "kernel row is not in the kernel"


# -- catalog and serialization ------------------------------------------


def _build_catalog():
    return {
        "pt": ToricModel(weights=((1,),), chamber=(1,), name="pt"),
        "P1": ToricModel(weights=((1, 1),), chamber=(1,), smooth=True, name="P1"),
        "P2": ToricModel(weights=((1, 1, 1),), chamber=(1,), smooth=True, name="P2"),
        "P1xP1": ToricModel(
            weights=((1, 1, 0, 0), (0, 0, 1, 1)), chamber=(1, 1), smooth=True, name="P1xP1"
        ),
        "P1_O(-1)+O(-1)": ToricModel(
            weights=((1, 1),),
            chamber=(1,),
            bundle_weights=((1,), (1,)),
            smooth=True,
            name="P1_O(-1)+O(-1)",
        ),
    }


CATALOG_DIMENSIONS = {"pt": 1, "P1": 2, "P2": 3, "P1xP1": 4, "P1_O(-1)+O(-1)": 2}


def catalog_model(name):
    cat = _build_catalog()
    if name not in cat:
        raise UnknownModel(f"no catalog model named {name!r}; known: {sorted(cat)}")
    m = cat[name]
    validate_model(m)
    return m


def expected_point_count(model):
    """Catalog critical point count (rank of the relevant cohomology), or None."""
    if model.name in CATALOG_DIMENSIONS:
        return CATALOG_DIMENSIONS[model.name]
    return None


def model_to_json(model):
    out = {
        "K": model.K,
        "N": model.N,
        "weights": [list(row) for row in model.weights],
        "equivariance": model.equivariance,
    }
    if model.chamber is not None:
        out["chamber"] = [str(x) for x in model.chamber]
    if model.bundle_weights:
        out["bundle_weights"] = [list(row) for row in model.bundle_weights]
    if model.smooth is not None:
        out["smooth"] = bool(model.smooth)
    if model.name:
        out["name"] = model.name
    return out


def model_from_json(data):
    if isinstance(data, str):
        with open(data) as fh:
            data = json.load(fh)
    weights = data["weights"]
    if len(weights) != data.get("K", len(weights)):
        raise RankDeficient("K does not match the number of weight rows")
    if weights and len(weights[0]) != data.get("N", len(weights[0])):
        raise RankDeficient("N does not match the number of weight columns")
    model = ToricModel(
        weights=tuple(tuple(row) for row in weights),
        chamber=tuple(Fraction(str(x)) for x in data["chamber"]) if "chamber" in data else None,
        bundle_weights=tuple(tuple(row) for row in data.get("bundle_weights", ())),
        equivariance=data.get("equivariance", "none"),
        smooth=data.get("smooth"),
        name=data.get("name"),
    )
    validate_model(model)
    return model


def resolve_model(spec):
    """Catalog name, JSON file path, or dict -> validated model."""
    if isinstance(spec, ToricModel):
        return spec
    if isinstance(spec, dict):
        return model_from_json(spec)
    if isinstance(spec, str):
        try:
            return catalog_model(spec)
        except UnknownModel:
            pass
        import os

        if os.path.exists(spec):
            return model_from_json(spec)
        raise UnknownModel(f"{spec!r} is neither a catalog name nor a model file")
    raise UnknownModel(f"cannot interpret model spec {spec!r}")
