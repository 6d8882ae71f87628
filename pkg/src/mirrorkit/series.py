"""Truncated hypergeometric and q-hypergeometric series.

Coefficients are exact ring elements indexed by integer degree vectors in the
box of sup-norm at most Dmax. The reciprocal-product factors follow the
telescoping convention: a product with upper bound below its lower bound is
the reciprocal of the reflected product, so the r = 0 factor shows up as a
multiplier exactly when the degree is negative.
"""

import itertools

from . import rings as _rings
from .errors import MissingBundleData, RingMismatch

H_KIND = "H"
K_KIND = "K"
E_KIND = "E"
PIE_KIND = "PiE"


class TruncatedSeries:
    """Lazy memoized coefficient map over a degree box."""

    __slots__ = ("model", "mode", "ring", "field", "dmax", "kind", "_fn", "_memo")

    def __init__(self, model, mode, ring, field, dmax, kind, fn):
        self.model = model
        self.mode = mode
        self.ring = ring
        self.field = field
        self.dmax = int(dmax)
        self.kind = kind
        self._fn = fn
        self._memo = {}

    def box(self):
        """All degree vectors with sup-norm <= dmax, lexicographic order."""
        rng = range(-self.dmax, self.dmax + 1)
        return itertools.product(rng, repeat=self.model.K)

    def in_support(self, d):
        """Bundle series are supported where every column degree is >= 0."""
        if self.kind in (E_KIND, PIE_KIND):
            return all(D >= 0 for D in self.model.mori_degrees(d))
        return True

    def degrees(self):
        return (d for d in self.box() if self.in_support(d))

    def coefficient(self, d):
        d = tuple(int(x) for x in d)
        if len(d) != self.model.K:
            raise ValueError(f"degree vector {d} has wrong length")
        if any(abs(x) > self.dmax for x in d):
            raise ValueError(f"degree {d} is outside the truncation box (Dmax={self.dmax})")
        got = self._memo.get(d)
        if got is None:
            if self.in_support(d):
                got = self._fn(d)
            else:
                got = self.ring.zero(self.field)
            self._memo[d] = got
        return got

    def dump(self):
        """JSON-ready rows {"d": [...], "coeff": {basis: string}}, zero rows skipped."""
        rows = []
        for d in self.degrees():
            c = self.coefficient(d)
            if not c.is_zero:
                rows.append({"d": list(d), "coeff": c.dump()})
        return rows


def _is_equivariant(field, prefix):
    return any(n.startswith(prefix) for n in field.names)


def series_H(model, ring, dmax):
    """Cohomology-valued series: coefficient at d is the product over
    coordinates of reciprocal factors (u_j - r z), r = 1..D_j(d), with the
    reflected multiplier convention at negative column degree."""
    if ring is None:
        ring = _rings.catalog_ring(model, "cohomology")
    field = ring.field
    equivariant = _is_equivariant(field, "lam")
    us = _rings.divisor_classes(model, ring, field, equivariant)
    z = field.var("z")
    unit = ring.unit(field)
    memo = {}

    def column_factor(j, D):
        key = (j, D)
        got = memo.get(key)
        if got is not None:
            return got
        u = us[j]
        prod = unit
        if D >= 0:
            for r in range(1, D + 1):
                prod = prod * (u - unit.scale(field.const(r) * z))
            val = _rings.invert_unit(prod) if D > 0 else unit
        else:
            for r in range(D + 1, 1):
                prod = prod * (u - unit.scale(field.const(r) * z))
            val = prod
        memo[key] = val
        return val

    def coeff(d):
        c = unit
        for j, D in enumerate(model.mori_degrees(d)):
            c = c * column_factor(j, D)
        return c

    return TruncatedSeries(model, "cohomology", ring, field, dmax, H_KIND, coeff)


def series_K(model, ring, dmax, equivariant=False):
    """K-theory-valued series: factors (1 - U_j q^r) with the same
    telescoping convention; equivariant mode folds the reciprocal parameter
    into each line class."""
    if ring is None:
        ring = _rings.catalog_ring(model, "k_theory", equivariant=equivariant)
    field = ring.field
    if equivariant and not _is_equivariant(field, "Lam"):
        raise RingMismatch("equivariant series needs the parameters in the coefficient field")
    Us = _rings.line_classes(model, ring, field, equivariant)
    unit = ring.unit(field)
    memo = {}

    def column_factor(j, D):
        key = (j, D)
        got = memo.get(key)
        if got is not None:
            return got
        U = Us[j]
        prod = unit
        if D >= 0:
            for r in range(1, D + 1):
                prod = prod * (unit - U.scale(field.monomial("q", r)))
            val = _rings.invert_unit(prod) if D > 0 else unit
        else:
            for r in range(D + 1, 1):
                prod = prod * (unit - U.scale(field.monomial("q", r)))
            val = prod
        memo[key] = val
        return val

    def coeff(d):
        c = unit
        for j, D in enumerate(model.mori_degrees(d)):
            c = c * column_factor(j, D)
        return c

    return TruncatedSeries(model, "k_theory", ring, field, dmax, K_KIND, coeff)


def _bundle_series(model, ring, dmax, variant):
    model.require_bundle()
    if ring is None:
        ring = _rings.catalog_ring(model, "k_theory")
    field = ring.field
    base = series_K(model, ring, dmax)
    vs = _rings.bundle_classes(model, ring, field)
    unit = ring.unit(field)
    memo = {}

    def summand_factor(a, delta):
        key = (a, delta)
        got = memo.get(key)
        if got is not None:
            return got
        V = vs[a]
        if variant == E_KIND:
            lo, hi, sign = 0, delta - 1, -1
        else:
            lo, hi, sign = 1, delta, +1
        prod = unit
        if hi >= lo:
            for r in range(lo, hi + 1):
                prod = prod * (unit - V.scale(field.monomial("q", sign * r)))
            val = prod
        elif hi == lo - 1:
            val = unit
        else:
            # negative-length product: reciprocal of the reflected range
            for r in range(hi + 1, lo):
                prod = prod * (unit - V.scale(field.monomial("q", sign * r)))
            val = _rings.invert_unit(prod)
        memo[key] = val
        return val

    def coeff(d):
        c = base.coefficient(d)
        for a, delta in enumerate(model.bundle_degrees(d)):
            c = c * summand_factor(a, delta)
        return c

    return TruncatedSeries(model, "k_theory", ring, field, dmax, variant, coeff)


def series_E(model, ring, dmax):
    """Bundle-twisted series: K-theory coefficient times the factor
    (1 - q^{-r} V_a), r = 0..Delta_a(d)-1, per summand; support restricted
    to nonnegative column degrees."""
    return _bundle_series(model, ring, dmax, E_KIND)


def series_PiE(model, ring, dmax):
    """Dual-parity bundle series: factor (1 - q^{r} V_a), r = 1..Delta_a(d)."""
    return _bundle_series(model, ring, dmax, PIE_KIND)


# -- closed forms for the trivial quotient -------------------------------


def closed_form_pt_H(field, degrees):
    """Product of 1/((-z)^D D!) over the degree entries; zero if any D < 0."""
    z = field.var("z")
    out = field.one
    for D in degrees:
        if D < 0:
            return field.zero
        fact = 1
        for r in range(1, D + 1):
            fact *= r
        out = out / ((-z) ** D * field.const(fact))
    return out


def closed_form_pt_K(field, degrees):
    """Product of 1/((1-q)...(1-q^D)) over the degree entries; zero if any D < 0."""
    q = field.var("q")
    out = field.one
    for D in degrees:
        if D < 0:
            return field.zero
        for r in range(1, D + 1):
            out = out / (field.one - q ** r)
    return out
