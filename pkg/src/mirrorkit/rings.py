"""Finite-dimensional commutative rings given by structure-constant tables.

A presentation lists a basis, rational structure constants, and distinguished
generators (divisor classes in cohomology mode, line-bundle classes in
K-theory mode). Elements carry coordinate vectors over a CoefficientField.
Inverses of units are finite geometric series in the nilpotent part.
"""

import json
from fractions import Fraction

from .errors import DivisionByZero, NotAUnit, RingMismatch, UnknownModel
from .field import CoefficientField, RatFun


class RingPresentation:
    """Basis, structure constants, generators; the unit must be a basis element."""

    __slots__ = ("basis", "table", "generators", "name", "unit_index", "field")

    def __init__(self, basis, table, generators=(), name=None, field=None):
        self.basis = tuple(str(b) for b in basis)
        dim = len(self.basis)
        self.table = tuple(
            tuple(tuple(Fraction(c) for c in vec) for vec in row) for row in table
        )
        if len(self.table) != dim or any(
            len(row) != dim or any(len(vec) != dim for vec in row) for row in self.table
        ):
            raise UnknownModel("structure constant table shape does not match the basis")
        if isinstance(generators, dict):
            generators = tuple(sorted(generators.items()))
        self.generators = tuple((str(n), tuple(Fraction(c) for c in v)) for n, v in generators)
        self.name = name
        self.unit_index = self._find_unit()
        self.field = field

    @property
    def dim(self):
        return len(self.basis)

    def _find_unit(self):
        for e in range(self.dim):
            ok = True
            for b in range(self.dim):
                want = tuple(Fraction(1 if k == b else 0) for k in range(self.dim))
                if self.table[e][b] != want:
                    ok = False
                    break
            if ok:
                return e
        raise UnknownModel("no basis element acts as the unit")

    def __eq__(self, other):
        return (
            isinstance(other, RingPresentation)
            and self.basis == other.basis
            and self.table == other.table
        )

    def __hash__(self):
        return hash((self.basis, self.table))

    def validate(self):
        """Exhaustive commutativity and associativity over basis pairs/triples."""
        dim = self.dim
        for a in range(dim):
            for b in range(dim):
                if self.table[a][b] != self.table[b][a]:
                    raise UnknownModel(f"table not commutative at ({self.basis[a]},{self.basis[b]})")
        for a in range(dim):
            for b in range(dim):
                ab = self.table[a][b]
                for c in range(dim):
                    # (a*b)*c
                    left = [Fraction(0)] * dim
                    for k, s in enumerate(ab):
                        if s:
                            for t, u in enumerate(self.table[k][c]):
                                if u:
                                    left[t] += s * u
                    bc = self.table[b][c]
                    right = [Fraction(0)] * dim
                    for k, s in enumerate(bc):
                        if s:
                            for t, u in enumerate(self.table[a][k]):
                                if u:
                                    right[t] += s * u
                    if left != right:
                        raise UnknownModel(
                            f"table not associative at ({self.basis[a]},{self.basis[b]},{self.basis[c]})"
                        )

    # -- element constructors --------------------------------------

    def element(self, field, coords):
        vec = tuple(field.coerce(c) for c in coords)
        if len(vec) != self.dim:
            raise RingMismatch("coordinate vector length does not match the basis")
        return RingElement(self, field, vec)

    def zero(self, field):
        return RingElement(self, field, (field.zero,) * self.dim)

    def unit(self, field):
        coords = [field.zero] * self.dim
        coords[self.unit_index] = field.one
        return RingElement(self, field, tuple(coords))

    def scalar(self, field, c):
        coords = [field.zero] * self.dim
        coords[self.unit_index] = field.coerce(c)
        return RingElement(self, field, tuple(coords))

    def generator(self, field, gname):
        for n, v in self.generators:
            if n == gname:
                return self.element(field, v)
        # single-factor models: allow the unindexed alias
        if gname in ("p", "P"):
            return self.generator(field, gname + "1")
        raise UnknownModel(f"presentation has no generator named {gname!r}")

    def generator_names(self):
        return tuple(n for n, _ in self.generators)


class RingElement:
    """Coordinate vector in a presentation basis over a coefficient field."""

    __slots__ = ("ring", "field", "coords")

    def __init__(self, ring, field, coords):
        self.ring = ring
        self.field = field
        self.coords = coords

    def _compat(self, other):
        if self.ring != other.ring or self.field is not other.field:
            raise RingMismatch("elements live in different rings or fields")

    def __add__(self, other):
        self._compat(other)
        return RingElement(
            self.ring, self.field, tuple(a + b for a, b in zip(self.coords, other.coords))
        )

    def __sub__(self, other):
        self._compat(other)
        return RingElement(
            self.ring, self.field, tuple(a - b for a, b in zip(self.coords, other.coords))
        )

    def __neg__(self):
        return RingElement(self.ring, self.field, tuple(-a for a in self.coords))

    def scale(self, c):
        c = self.field.coerce(c)
        return RingElement(self.ring, self.field, tuple(a * c for a in self.coords))

    def __mul__(self, other):
        if not isinstance(other, RingElement):
            return self.scale(other)
        self._compat(other)
        dim = self.ring.dim
        field = self.field
        table = self.ring.table
        out = [field.zero] * dim
        for a, xa in enumerate(self.coords):
            if xa.is_zero:
                continue
            for b, yb in enumerate(other.coords):
                if yb.is_zero:
                    continue
                s = xa * yb
                for k, c in enumerate(table[a][b]):
                    if c:
                        out[k] = out[k] + s * field.const(c)
        return RingElement(self.ring, field, tuple(out))

    def __pow__(self, n):
        if n < 0:
            return invert_unit(self) ** (-n)
        out = self.ring.unit(self.field)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other):
        return (
            isinstance(other, RingElement)
            and self.ring == other.ring
            and self.field is other.field
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((self.ring, self.coords))

    @property
    def is_zero(self):
        return all(c.is_zero for c in self.coords)

    def scalar_part(self):
        return self.coords[self.ring.unit_index]

    def __str__(self):
        parts = []
        for name, c in zip(self.ring.basis, self.coords):
            if c.is_zero:
                continue
            cs = str(c)
            if name == self.ring.basis[self.ring.unit_index]:
                parts.append(cs)
            elif cs == "1":
                parts.append(name)
            else:
                parts.append(f"({cs})*{name}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"RingElement({self})"

    def dump(self):
        """Basis-name -> coefficient-string map, zero coordinates omitted."""
        return {
            name: str(c) for name, c in zip(self.ring.basis, self.coords) if not c.is_zero
        }


def invert_unit(x):
    """Inverse of c*(1 + nilpotent) by finite geometric series; exact check."""
    ring, field = x.ring, x.field
    s = x.scalar_part()
    if s.is_zero:
        raise NotAUnit("scalar part is zero")
    try:
        sinv = field.one / s
    except DivisionByZero:
        raise NotAUnit("scalar part is zero") from None
    unit = ring.unit(field)
    n = x - unit.scale(s)
    acc = unit
    pw = unit
    for _ in range(ring.dim - 1):
        pw = (pw * n).scale(-sinv)
        if pw.is_zero:
            break
        acc = acc + pw
    inv = acc.scale(sinv)
    if inv * x != unit:
        raise NotAUnit("element has non-nilpotent reduced part")
    return inv


# -- catalog presentations ----------------------------------------------


def _nilpotent_chain_tables(dim, gen_name):
    """Truncated polynomial ring on one nilpotent generator: g^dim = 0."""
    basis = ["1"]
    if dim > 1:
        basis.append(gen_name)
    for k in range(2, dim):
        basis.append(f"{gen_name}^{k}")
    table = [
        [
            tuple(
                Fraction(1 if t == a + b else 0) for t in range(dim)
            )
            for b in range(dim)
        ]
        for a in range(dim)
    ]
    return basis, table


def _tensor_square_tables(gen1, gen2):
    """Two commuting nilpotents of square zero: basis 1, g1, g2, g1*g2."""
    basis = ["1", gen1, gen2, f"{gen1}*{gen2}"]
    deg = {0: (0, 0), 1: (1, 0), 2: (0, 1), 3: (1, 1)}
    index = {v: k for k, v in deg.items()}
    table = []
    for a in range(4):
        row = []
        for b in range(4):
            e = (deg[a][0] + deg[b][0], deg[a][1] + deg[b][1])
            vec = [Fraction(0)] * 4
            if e in index:
                vec[index[e]] = Fraction(1)
            row.append(tuple(vec))
        table.append(tuple(row))
    return basis, table


def _catalog_tables(weights, mode):
    """Known quotient presentations keyed by the weight matrix."""
    if weights == ((1,),):
        if mode == "cohomology":
            return ["1"], [[(Fraction(1),)]], {"p1": (Fraction(0),)}
        return ["1"], [[(Fraction(1),)]], {"P1": (Fraction(1),)}
    if weights == ((1, 1),) or weights == ((1, 1, 1),):
        dim = 2 if weights == ((1, 1),) else 3
        if mode == "cohomology":
            basis, table = _nilpotent_chain_tables(dim, "p")
            gens = {"p1": tuple(Fraction(1 if k == 1 else 0) for k in range(dim))}
        else:
            basis, table = _nilpotent_chain_tables(dim, "(1-P)")
            gens = {"P1": tuple(Fraction(1 if k == 0 else -1 if k == 1 else 0) for k in range(dim))}
        return basis, table, gens
    if weights == ((1, 1, 0, 0), (0, 0, 1, 1)):
        if mode == "cohomology":
            basis, table = _tensor_square_tables("p1", "p2")
            gens = {
                "p1": (Fraction(0), Fraction(1), Fraction(0), Fraction(0)),
                "p2": (Fraction(0), Fraction(0), Fraction(1), Fraction(0)),
            }
        else:
            basis, table = _tensor_square_tables("(1-P1)", "(1-P2)")
            gens = {
                "P1": (Fraction(1), Fraction(-1), Fraction(0), Fraction(0)),
                "P2": (Fraction(1), Fraction(0), Fraction(-1), Fraction(0)),
            }
        return basis, table, gens
    return None


def coefficient_field_for(model, mode, equivariant=False):
    """Field variables: z or q, plus one parameter per coordinate when equivariant."""
    if mode == "cohomology":
        names = ("z",)
        if equivariant:
            names += tuple(f"lam{j + 1}" for j in range(model.N))
    elif mode == "k_theory":
        names = ("q",)
        if equivariant:
            names += tuple(f"Lam{j + 1}" for j in range(model.N))
    else:
        raise UnknownModel(f"unknown ring mode {mode!r}")
    return CoefficientField(names)


def catalog_ring(model, mode, equivariant=False, table=None):
    """Presentation for a catalog model, or from a user-supplied table.

    The returned presentation carries the recommended coefficient field
    (q or z, plus equivariant parameters) on its .field attribute.
    """
    field = coefficient_field_for(model, mode, equivariant)
    if table is not None:
        pres = presentation_from_json(table) if not isinstance(table, RingPresentation) else table
        pres.field = field
        pres.validate()
        return pres
    got = _catalog_tables(model.weights, mode)
    if got is None:
        raise UnknownModel(
            f"no built-in ring table for weights {model.weights}; supply a table"
        )
    basis, tab, gens = got
    pres = RingPresentation(
        basis, tab, generators=gens, name=f"{model.name or 'model'}:{mode}", field=field
    )
    pres.validate()
    return pres


def presentation_from_json(data):
    """Load {"basis":[...], "table":{"a*b":[coords]}, "generators":{...}}."""
    if isinstance(data, str):
        with open(data) as fh:
            data = json.load(fh)
    basis = [str(b) for b in data["basis"]]
    dim = len(basis)
    idx = {b: i for i, b in enumerate(basis)}
    table = [[None] * dim for _ in range(dim)]
    for key, coords in data["table"].items():
        pair = _split_product_key(key, idx)
        if pair is None:
            raise UnknownModel(f"table key {key!r} does not name two basis elements")
        a, b = pair
        vec = tuple(Fraction(str(c)) for c in coords)
        table[a][b] = vec
        table[b][a] = vec
    # products with the unit may be omitted
    if "1" in idx:
        e = idx["1"]
        for b in range(dim):
            if table[e][b] is None:
                vec = tuple(Fraction(1 if k == b else 0) for k in range(dim))
                table[e][b] = vec
                table[b][e] = vec
    for a in range(dim):
        for b in range(dim):
            if table[a][b] is None:
                raise UnknownModel(f"table is missing the product {basis[a]!r}*{basis[b]!r}")
    gens = {
        str(n): tuple(Fraction(str(c)) for c in v) for n, v in data.get("generators", {}).items()
    }
    pres = RingPresentation(basis, table, generators=gens, name=data.get("name"))
    pres.validate()
    return pres


def _split_product_key(key, idx):
    for i, ch in enumerate(key):
        if ch == "*":
            left, right = key[:i], key[i + 1 :]
            if left in idx and right in idx:
                return idx[left], idx[right]
    return None


# -- distinguished classes attached to a model ---------------------------


def divisor_classes(model, ring, field, equivariant=False):
    """Cohomology coordinate classes u_j = sum_i m_ij p_i (minus a parameter
    per coordinate in equivariant mode)."""
    ps = [ring.generator(field, f"p{i + 1}") for i in range(model.K)]
    out = []
    for j in range(model.N):
        u = ring.zero(field)
        for i in range(model.K):
            mij = model.weights[i][j]
            if mij:
                u = u + ps[i].scale(mij)
        if equivariant:
            u = u - ring.unit(field).scale(field.var(f"lam{j + 1}"))
        out.append(u)
    return tuple(out)


def line_classes(model, ring, field, equivariant=False):
    """K-theory coordinate classes prod_i P_i^{m_ij}, with the reciprocal
    equivariant multiplier folded in when present."""
    Ps = [ring.generator(field, f"P{i + 1}") for i in range(model.K)]
    out = []
    for j in range(model.N):
        u = ring.unit(field)
        for i in range(model.K):
            mij = model.weights[i][j]
            if mij:
                u = u * (Ps[i] ** mij)
        if equivariant:
            u = u.scale(field.monomial(f"Lam{j + 1}", -1))
        out.append(u)
    return tuple(out)


def bundle_classes(model, ring, field):
    """Line bundle summand classes prod_i P_i^{l_ia}."""
    model.require_bundle()
    Ps = [ring.generator(field, f"P{i + 1}") for i in range(model.K)]
    out = []
    for a in range(model.L):
        v = ring.unit(field)
        for i in range(model.K):
            lia = model.bundle_weights[a][i]
            if lia:
                v = v * (Ps[i] ** lia)
        out.append(v)
    return tuple(out)
