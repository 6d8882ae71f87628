"""Shift-operator algebra and the annihilator systems of the series.

Operators are finite sums of normal-form terms. Every term bundles a field
coefficient, a ring multiplier, a translation part (q-power in the degree, or
a product of Euler factors linear in the degree for the differential case),
and a nonnegative Novikov shift. Composition is exact and closed: commuting a
translation across a Novikov monomial produces the q-power prefactor
q^{<v,e>}; commuting an Euler factor shifts its constant offset.
"""

import itertools
from fractions import Fraction

from . import rings as _rings
from . import toric as _toric
from .errors import MissingBundleData, RingMismatch
from .series import E_KIND, H_KIND, K_KIND, PIE_KIND, TruncatedSeries, series_K

APPLIED_KIND = "applied"


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


class Term:
    """coeff * q^{<qshift,d>} * prod_f z*(<w_f,d>+c_f) * mult, then shift by novikov.

    The action reads the input degree d; the contribution lands at d+novikov.
    """

    __slots__ = ("coeff", "mult", "qshift", "zfactors", "novikov")

    def __init__(self, coeff, mult, qshift, zfactors, novikov):
        self.coeff = coeff
        self.mult = mult
        self.qshift = tuple(int(v) for v in qshift)
        self.zfactors = tuple(
            sorted((tuple(int(x) for x in w), Fraction(c0)) for w, c0 in zfactors)
        )
        self.novikov = tuple(int(e) for e in novikov)
        if any(e < 0 for e in self.novikov):
            raise ValueError("Novikov shift must be nonnegative")

    def key(self):
        return (self.novikov, self.qshift, self.zfactors, self.mult.coords)

    def sort_key(self):
        return (
            self.novikov,
            self.qshift,
            self.zfactors,
            tuple(str(c) for c in self.mult.coords),
            str(self.coeff),
        )


class ShiftOperator:
    """Finite sum of terms over a fixed ring/field, canonically merged."""

    __slots__ = ("ring", "field", "nvars", "terms")

    def __init__(self, ring, field, nvars, terms):
        self.ring = ring
        self.field = field
        self.nvars = int(nvars)
        self.terms = self._merge(terms)

    def _merge(self, terms):
        acc = {}
        order = {}
        for t in terms:
            if t.coeff.is_zero or t.mult.is_zero:
                continue
            k = t.key()
            if k in acc:
                acc[k] = Term(acc[k].coeff + t.coeff, t.mult, t.qshift, t.zfactors, t.novikov)
            else:
                acc[k] = t
                order[k] = t.sort_key()
        kept = [t for t in acc.values() if not t.coeff.is_zero]
        kept.sort(key=Term.sort_key)
        return tuple(kept)

    # -- constructors ------------------------------------------------

    @classmethod
    def zero(cls, ring, field, nvars):
        return cls(ring, field, nvars, ())

    @classmethod
    def identity(cls, ring, field, nvars):
        z = (0,) * nvars
        return cls(ring, field, nvars, (Term(field.one, ring.unit(field), z, (), z),))

    @classmethod
    def scalar(cls, ring, field, nvars, c):
        z = (0,) * nvars
        return cls(ring, field, nvars, (Term(field.coerce(c), ring.unit(field), z, (), z),))

    @classmethod
    def ring_multiplier(cls, ring, field, nvars, elem):
        z = (0,) * nvars
        return cls(ring, field, nvars, (Term(field.one, elem, z, (), z),))

    @classmethod
    def novikov(cls, ring, field, nvars, e):
        z = (0,) * nvars
        return cls(ring, field, nvars, (Term(field.one, ring.unit(field), z, (), tuple(e)),))

    @classmethod
    def q_translation(cls, ring, field, nvars, v):
        z = (0,) * nvars
        return cls(ring, field, nvars, (Term(field.one, ring.unit(field), tuple(v), (), z),))

    @classmethod
    def euler_factor(cls, ring, field, nvars, w, c0):
        """The scalar factor z*(<w,d> + c0)."""
        z = (0,) * nvars
        return cls(
            ring, field, nvars,
            (Term(field.one, ring.unit(field), z, ((tuple(w), Fraction(c0)),), z),),
        )

    # -- algebra -----------------------------------------------------

    def _compat(self, other):
        if self.ring != other.ring or self.field is not other.field or self.nvars != other.nvars:
            raise RingMismatch("operators live over different rings or fields")

    def __add__(self, other):
        self._compat(other)
        return ShiftOperator(self.ring, self.field, self.nvars, self.terms + other.terms)

    def __neg__(self):
        return ShiftOperator(
            self.ring, self.field, self.nvars,
            tuple(Term(-t.coeff, t.mult, t.qshift, t.zfactors, t.novikov) for t in self.terms),
        )

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = self.field.coerce(c)
        return ShiftOperator(
            self.ring, self.field, self.nvars,
            tuple(Term(t.coeff * c, t.mult, t.qshift, t.zfactors, t.novikov) for t in self.terms),
        )

    def __mul__(self, other):
        """Composition; the right factor acts first."""
        self._compat(other)
        field = self.field
        out = []
        for t1 in self.terms:
            for t2 in other.terms:
                k = _dot(t1.qshift, t2.novikov)
                coeff = t1.coeff * t2.coeff
                if k:
                    coeff = coeff * field.monomial("q", k)
                zf = tuple(
                    (w, c0 + _dot(w, t2.novikov)) for w, c0 in t1.zfactors
                ) + t2.zfactors
                out.append(
                    Term(
                        coeff,
                        t1.mult * t2.mult,
                        tuple(a + b for a, b in zip(t1.qshift, t2.qshift)),
                        zf,
                        tuple(a + b for a, b in zip(t1.novikov, t2.novikov)),
                    )
                )
        return ShiftOperator(self.ring, self.field, self.nvars, out)

    def __pow__(self, n):
        out = ShiftOperator.identity(self.ring, self.field, self.nvars)
        for _ in range(int(n)):
            out = out * self
        return out

    def max_shift(self):
        return max((max(t.novikov, default=0) for t in self.terms), default=0)

    # -- action ------------------------------------------------------

    def term_value(self, t, din, cin):
        """Contribution of term t reading input degree din with coefficient cin."""
        field = self.field
        scalar = t.coeff
        k = _dot(t.qshift, din)
        if k:
            scalar = scalar * field.monomial("q", k)
        for w, c0 in t.zfactors:
            a = Fraction(_dot(w, din)) + c0
            if a == 0:
                return None
            scalar = scalar * (field.const(a) * field.var("z"))
        return (t.mult * cin).scale(scalar)

    def apply(self, s):
        if self.ring != s.ring or self.field is not s.field:
            raise RingMismatch("operator and series live over different rings or fields")
        new_dmax = s.dmax - self.max_shift()
        terms = self.terms
        ring, field = self.ring, self.field

        def coeff(d):
            out = ring.zero(field)
            for t in terms:
                din = tuple(a - b for a, b in zip(d, t.novikov))
                v = self.term_value(t, din, s.coefficient(din))
                if v is not None:
                    out = out + v
            return out

        return TruncatedSeries(s.model, s.mode, ring, field, new_dmax, APPLIED_KIND, coeff)

    # -- display -----------------------------------------------------

    def describe(self):
        """Deterministic JSON-ready term list."""
        rows = []
        for t in self.terms:
            rows.append(
                {
                    "coeff": str(t.coeff),
                    "mult": t.mult.dump(),
                    "q_shift": list(t.qshift),
                    "euler": [[list(w), str(c0)] for w, c0 in t.zfactors],
                    "novikov": list(t.novikov),
                }
            )
        return rows

    def __str__(self):
        parts = []
        for t in self.terms:
            bits = [f"({t.coeff})"]
            md = t.mult.dump()
            if md != {"1": "1"} and md != {self.ring.basis[self.ring.unit_index]: "1"}:
                bits.append("[" + str(t.mult) + "]")
            if any(t.qshift):
                bits.append("T^" + str(list(t.qshift)))
            for w, c0 in t.zfactors:
                bits.append(f"z*({list(w)}.d+{c0})")
            if any(t.novikov):
                bits.append("Q^" + str(list(t.novikov)))
            parts.append("*".join(bits))
        return " + ".join(parts) if parts else "0"


def apply(op, s):
    """Module-level alias for ShiftOperator.apply."""
    return op.apply(s)


# -- system builders ------------------------------------------------------


class OperatorSystem:
    """One equation (left side, right side) per torus factor, plus metadata."""

    __slots__ = ("model", "kind", "representation", "ring", "field", "equations",
                 "notes", "signature")

    def __init__(self, model, kind, representation, ring, field, equations, notes, signature):
        self.model = model
        self.kind = kind
        self.representation = representation
        self.ring = ring
        self.field = field
        self.equations = tuple(equations)
        self.notes = tuple(notes)
        self.signature = tuple(signature)

    def max_shift(self):
        return max(
            max(lhs.max_shift(), rhs.max_shift()) for lhs, rhs in self.equations
        )

    def describe(self):
        return {
            "kind": self.kind,
            "representation": self.representation,
            "equations": [
                {"index": i, "lhs": lhs.describe(), "rhs": rhs.describe()}
                for i, (lhs, rhs) in enumerate(self.equations)
            ],
            "normalization_notes": list(self.notes),
        }

    def pretty(self):
        lines = []
        for i, (lhs, rhs) in enumerate(self.equations):
            lines.append(f"equation {i}: {lhs} = {rhs}")
        return "\n".join(lines)


def _base_column_factor(model, ring, field, kind, representation, us, j, r):
    """One factor of the annihilator for weight column j at level r."""
    K = model.K
    col = model.column(j)
    if kind == H_KIND:
        # (u_j - z*D_j(theta) + r z): Euler part plus multiplier
        fac = ShiftOperator.euler_factor(ring, field, K, tuple(-c for c in col), r)
        if representation == "vector":
            fac = fac + ShiftOperator.ring_multiplier(ring, field, K, us[j])
        elif _is_field_equivariant(field, "lam"):
            fac = fac + ShiftOperator.scalar(ring, field, K, -field.var(f"lam{j + 1}"))
        return fac
    # K-type factor: 1 - q^{-r} * U_j * T^{col}
    ident = ShiftOperator.identity(ring, field, K)
    coeff = field.monomial("q", -r) if r else field.one
    if representation == "vector":
        mult = us[j]
    else:
        mult = ring.unit(field)
        if _is_field_equivariant(field, "Lam"):
            coeff = coeff * field.monomial(f"Lam{j + 1}", -1)
    z = (0,) * K
    t = Term(coeff, mult, tuple(col), (), z)
    return ident - ShiftOperator(ring, field, K, (t,))


def _bundle_factor(model, ring, field, variant, vs, a, r):
    """Bundle-summand factor: parity E uses (1 - q^{-r} V_a T^{-l_a}), the
    dual parity uses (1 - q^{+r} V_a T^{+l_a})."""
    K = model.K
    la = model.bundle_column(a)
    ident = ShiftOperator.identity(ring, field, K)
    if variant == E_KIND:
        coeff = field.monomial("q", -r) if r else field.one
        shift = tuple(-c for c in la)
    else:
        coeff = field.monomial("q", r) if r else field.one
        shift = tuple(la)
    z = (0,) * K
    t = Term(coeff, vs[a], shift, (), z)
    return ident - ShiftOperator(ring, field, K, (t,))


def _is_field_equivariant(field, prefix):
    return any(n.startswith(prefix) for n in field.names)


def _build_system(model, kind, representation, ring):
    if representation not in ("vector", "scalar"):
        raise ValueError(f"unknown representation {representation!r}")
    mode = "cohomology" if kind == H_KIND else "k_theory"
    if ring is None:
        ring = _rings.catalog_ring(model, mode)
    field = ring.field
    K = model.K
    if kind == H_KIND:
        us = _rings.divisor_classes(model, ring, field, _is_field_equivariant(field, "lam")) \
            if representation == "vector" else None
    else:
        us = _rings.line_classes(model, ring, field, _is_field_equivariant(field, "Lam")) \
            if representation == "vector" else None
    vs = None
    if kind in (E_KIND, PIE_KIND):
        model.require_bundle()
        vs = _rings.bundle_classes(model, ring, field) if representation == "vector" else None

    equations = []
    notes = []
    signature = []
    for i in range(K):
        lhs = ShiftOperator.identity(ring, field, K)
        rhs = ShiftOperator.identity(ring, field, K)
        sig_l, sig_r = [], []
        moved_cols, moved_bundle = [], []
        for j in range(model.N):
            mij = model.weights[i][j]
            if mij == 0:
                continue
            for r in range(abs(mij)):
                fac = _base_column_factor(model, ring, field, kind, representation, us, j, r)
                if mij > 0:
                    lhs = lhs * fac
                    sig_l.append(("column", j, r))
                else:
                    rhs = rhs * fac
                    sig_r.append(("column", j, r))
            if mij < 0:
                moved_cols.append((j, -mij))
        if kind in (E_KIND, PIE_KIND):
            for a in range(model.L):
                lia = model.bundle_weights[a][i]
                if lia == 0:
                    continue
                rng = range(abs(lia)) if kind == E_KIND else range(1, abs(lia) + 1)
                for r in rng:
                    fac = _bundle_factor(model, ring, field, kind, vs, a, r)
                    if lia > 0:
                        rhs = rhs * fac
                        sig_r.append(("bundle", a, r))
                    else:
                        lhs = lhs * fac
                        sig_l.append(("bundle", a, r))
                moved_bundle.append((a, lia))
        e_i = tuple(1 if t == i else 0 for t in range(K))
        rhs = ShiftOperator.novikov(ring, field, K, e_i) * rhs
        for j, cnt in moved_cols:
            notes.append(
                f"equation {i}: {cnt} reciprocal factor(s) of column {j} rewritten "
                f"inverse-free on the right side (commuted across the degree shift)"
            )
        for a, lia in moved_bundle:
            side = "right" if lia > 0 else "left"
            notes.append(
                f"equation {i}: bundle summand {a} contributes {abs(lia)} factor(s) "
                f"on the {side} side"
            )
        equations.append((lhs, rhs))
        signature.append((tuple(sig_l), tuple(sig_r)))
    return OperatorSystem(model, kind, representation, ring, field, equations, notes, signature)


def build_system_H(model, representation="vector", ring=None):
    """Differential annihilator: equation i has factors (u_j - z D_j + r z)
    for positive weights on the left, matching factors for negative weights
    on the right behind the degree shift."""
    return _build_system(model, H_KIND, representation, ring)


def build_system_K(model, representation="vector", ring=None):
    """q-difference annihilator with factors (1 - q^{-r} U_j T^{m_j})."""
    return _build_system(model, K_KIND, representation, ring)


def build_system_E(model, ring=None):
    """Bundle-twisted annihilator: the base system plus bundle factors
    (1 - q^{-r} V_a T^{-l_a}), r = 0..|l_ia|-1, on the side set by the sign."""
    return _build_system(model, E_KIND, "vector", ring)


def build_system_PiE(model, ring=None):
    """Dual-parity annihilator with bundle factors (1 - q^{r} V_a T^{l_a}),
    r = 1..|l_ia|."""
    return _build_system(model, PIE_KIND, "vector", ring)


# -- verification ---------------------------------------------------------


class VerificationReport:
    """Per-equation, per-degree exact residual record."""

    __slots__ = ("model_name", "kind", "representation", "dmax", "window", "entries", "notes")

    def __init__(self, model_name, kind, representation, dmax, window, entries, notes):
        self.model_name = model_name
        self.kind = kind
        self.representation = representation
        self.dmax = dmax
        self.window = window
        self.entries = tuple(entries)
        self.notes = tuple(notes)

    @property
    def passed(self):
        return all(e["status"] == "pass" for e in self.entries)

    @property
    def checked(self):
        return len(self.entries)

    def failures(self):
        return [e for e in self.entries if e["status"] != "pass"]

    def to_json_dict(self):
        return {
            "model": self.model_name,
            "kind": self.kind,
            "representation": self.representation,
            "dmax": self.dmax,
            "safe_window": self.window,
            "degrees_checked": self.checked,
            "all_pass": self.passed,
            "normalization_notes": list(self.notes),
            "entries": [dict(e) for e in self.entries],
        }


def verify(system, s):
    """Exact annihilation check of a system on a truncated series.

    Degrees run over the box shrunk by the system's maximal Novikov shift;
    the residual at each degree must be the ring zero exactly.
    """
    if system.ring != s.ring or system.field is not s.field:
        raise RingMismatch("system and series live over different rings or fields")
    window = s.dmax - system.max_shift()
    entries = []
    for i, (lhs, rhs) in enumerate(system.equations):
        left = lhs.apply(s)
        right = rhs.apply(s)
        rng = range(-window, window + 1)
        for d in itertools.product(rng, repeat=system.model.K):
            residual = left.coefficient(d) - right.coefficient(d)
            ok = residual.is_zero
            entry = {"equation": i, "d": list(d), "status": "pass" if ok else "fail"}
            if not ok:
                entry["residual"] = residual.dump()
            entries.append(entry)
    return VerificationReport(
        s.model.name or "custom",
        system.kind,
        system.representation,
        s.dmax,
        window,
        entries,
        system.notes,
    )


# -- the scalar shift identity on the trivial quotient --------------------


def scalar_shift_identity_check(r_max=4, order=8):
    """For the one-variable base series with coefficients 1/((1-q)...(1-q^D)):
    composing (1 - q^{-r} T) with multiplication by the r-th Novikov power
    reproduces the (r+1)-st power, exactly on truncations.

    Returns a list of {"r": r, "ok": bool, "window": n} entries.
    """
    model = _toric.catalog_model("pt")
    ring = _rings.catalog_ring(model, "k_theory")
    field = ring.field
    s = series_K(model, ring, order)
    out = []
    for r in range(r_max + 1):
        ident = ShiftOperator.identity(ring, field, 1)
        tr = ShiftOperator.q_translation(ring, field, 1, (1,))
        op = ident - tr.scale(field.monomial("q", -r) if r else field.one)
        xr = ShiftOperator.novikov(ring, field, 1, (r,))
        xr1 = ShiftOperator.novikov(ring, field, 1, (r + 1,))
        lhs = (op * xr).apply(s)
        rhs = xr1.apply(s)
        window = min(lhs.dmax, rhs.dmax)
        ok = True
        for d in range(-window, window + 1):
            if not (lhs.coefficient((d,)) - rhs.coefficient((d,))).is_zero:
                ok = False
                break
        out.append({"r": r, "ok": ok, "window": window})
    return out
