"""Exact coefficient arithmetic.

Sparse multivariate polynomials over big rationals and the fraction field
built from them. Every rational function is kept in a canonical form: the
numerator/denominator pair is gcd-reduced and the denominator is monic in the
leading coefficient under graded lexicographic order. Canonical form makes
equality structural and serialization byte-stable.
"""

from fractions import Fraction
from math import gcd as _int_gcd

from .errors import DivisionByZero

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _as_fraction(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"not an exact scalar: {c!r}")


def _grlex_key(exp):
    return (sum(exp), exp)


class Poly:
    """Multivariate polynomial with Fraction coefficients, sparse terms."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars, terms):
        self.vars = vars
        self.terms = {e: c for e, c in terms.items() if c}
        self._hash = None

    # -- constructors -------------------------------------------------

    @staticmethod
    def const(vars, c):
        c = _as_fraction(c)
        zero = (0,) * len(vars)
        return Poly(vars, {zero: c} if c else {})

    @staticmethod
    def variable(vars, name):
        i = vars.index(name)
        exp = tuple(1 if k == i else 0 for k in range(len(vars)))
        return Poly(vars, {exp: _ONE})

    @staticmethod
    def monomial(vars, exp, c=_ONE):
        c = _as_fraction(c)
        return Poly(vars, {tuple(exp): c} if c else {})

    # -- structure ----------------------------------------------------

    @property
    def is_zero(self):
        return not self.terms

    @property
    def is_constant(self):
        return all(all(x == 0 for x in e) for e in self.terms)

    @property
    def is_one(self):
        zero = (0,) * len(self.vars)
        return self.terms == {zero: _ONE}

    def constant_value(self):
        zero = (0,) * len(self.vars)
        return self.terms.get(zero, _ZERO)

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def leading(self):
        """(exponent, coefficient) of the graded-lex leading term."""
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def __eq__(self, other):
        return isinstance(other, Poly) and self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # -- arithmetic ---------------------------------------------------

    def _check(self, other):
        if self.vars != other.vars:
            raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")

    def __add__(self, other):
        self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e, _ZERO) + c
            if s:
                t[e] = s
            elif e in t:
                del t[e]
        return Poly(self.vars, t)

    def __neg__(self):
        return Poly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        if self.is_zero or other.is_zero:
            return Poly(self.vars, {})
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = t.get(e, _ZERO) + c1 * c2
                if s:
                    t[e] = s
                elif e in t:
                    del t[e]
        return Poly(self.vars, t)

    def scale(self, c):
        c = _as_fraction(c)
        if not c:
            return Poly(self.vars, {})
        return Poly(self.vars, {e: x * c for e, x in self.terms.items()})

    def shift_exp(self, exp):
        exp = tuple(exp)
        return Poly(self.vars, {tuple(a + b for a, b in zip(e, exp)): c for e, c in self.terms.items()})

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.const(self.vars, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def evaluate(self, values):
        """Numeric evaluation; values maps variable name -> complex."""
        out = 0j
        vals = [values[v] for v in self.vars]
        for e, c in self.terms.items():
            m = complex(c)
            for x, k in zip(vals, e):
                if k:
                    m *= x ** k
            out += m
        return out

    # -- formatting ---------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=_grlex_key, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                f"{v}^{k}" if k > 1 else v
                for v, k in zip(self.vars, e)
                if k
            )
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        sign0, body0 = parts[0]
        out = ("-" if sign0 == "-" else "") + body0
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    __repr__ = __str__


# -- gcd machinery ----------------------------------------------------


def _content_fraction(p):
    """Positive Fraction c with p/c integer, content 1; sign from leading."""
    num = 0
    den = 1
    for c in p.terms.values():
        num = _int_gcd(num, abs(c.numerator))
        den = den * c.denominator // _int_gcd(den, c.denominator)
    c = Fraction(num, den)
    _, lead = p.leading()
    return -c if lead < 0 else c


def _canonical(p):
    """Primitive part with positive leading coefficient."""
    if p.is_zero:
        return p
    return p.scale(1 / _content_fraction(p))


def exact_div(a, b):
    """Exact polynomial division a/b; raises if b does not divide a."""
    if b.is_zero:
        raise ZeroDivisionError("polynomial division by zero")
    if a.is_zero:
        return a
    vars = a.vars
    eb, cb = b.leading()
    q = {}
    r = a
    while not r.is_zero:
        er, cr = r.leading()
        e = tuple(x - y for x, y in zip(er, eb))
        if any(x < 0 for x in e):
            raise ArithmeticError("division is not exact")
        c = cr / cb
        q[e] = q.get(e, _ZERO) + c
        r = r - b.shift_exp(e).scale(c)
    return Poly(vars, q)


def _mono_gcd(a, b):
    """gcd when at least one argument is a single term."""
    if len(a.terms) != 1:
        a, b = b, a
    (ea,) = a.terms
    e = tuple(min(x, min(eb[i] for eb in b.terms)) for i, x in enumerate(ea))
    return Poly.monomial(a.vars, e)


def _active_vars(p):
    n = len(p.vars)
    act = [False] * n
    for e in p.terms:
        for i, k in enumerate(e):
            if k:
                act[i] = True
    return act


def _to_univar(p, i):
    """View p as univariate in vars[i] with Poly coefficients (var i zeroed)."""
    coeffs = {}
    for e, c in p.terms.items():
        d = e[i]
        rest = e[:i] + (0,) + e[i + 1:]
        coeffs.setdefault(d, {})[rest] = c
    return {d: Poly(p.vars, t) for d, t in coeffs.items()}


def _from_univar(coeffs, i, vars):
    t = {}
    for d, p in coeffs.items():
        for e, c in p.terms.items():
            t[e[:i] + (d,) + e[i + 1:]] = c
    return Poly(vars, t)


def _uni_deg(u):
    return max(u) if u else -1


def _uni_scale(u, p):
    return {d: c * p for d, c in u.items() if not (c * p).is_zero}


def _uni_sub(u, v):
    out = dict(u)
    for d, c in v.items():
        s = out.get(d)
        s = (-c) if s is None else s - c
        if s.is_zero:
            out.pop(d, None)
        else:
            out[d] = s
    return out


def _pseudo_rem(u, v, i, vars):
    """Pseudo-remainder of u by v, both univariate views in var i."""
    dv = _uni_deg(v)
    lv = v[dv]
    r = dict(u)
    while r and _uni_deg(r) >= dv:
        dr = _uni_deg(r)
        lr = r[dr]
        shifted = {d + dr - dv: c * lr for d, c in v.items()}
        r = _uni_sub(_uni_scale(r, lv), shifted)
    return r


# -- dense single-variable fast path ----------------------------------


def _single_common_var(a, b):
    """Index of the only active variable when a and b share it; else None."""
    act_a, act_b = _active_vars(a), _active_vars(b)
    merged = [x or y for x, y in zip(act_a, act_b)]
    if sum(merged) == 1:
        return merged.index(True)
    return None


def _dense_int_coeffs(p, i):
    """Primitive integer coefficient list (low to high) of p in vars[i]."""
    deg = max(e[i] for e in p.terms)
    lcm = 1
    for c in p.terms.values():
        lcm = lcm * c.denominator // _int_gcd(lcm, c.denominator)
    out = [0] * (deg + 1)
    for e, c in p.terms.items():
        out[e[i]] = int(c * lcm)
    g = 0
    for x in out:
        g = _int_gcd(g, abs(x))
    if g > 1:
        out = [x // g for x in out]
    if out[-1] < 0:
        out = [-x for x in out]
    return out


def _int_eval(u, x):
    acc = 0
    for c in reversed(u):
        acc = acc * x + c
    return acc


def _int_content(u):
    g = 0
    for x in u:
        g = _int_gcd(g, abs(x))
    return g


def _trim(u):
    while u and u[-1] == 0:
        u.pop()
    return u


def _balanced_digits(g, xi):
    out = []
    while g:
        d = g % xi
        if d > xi // 2:
            d -= xi
        out.append(d)
        g = (g - d) // xi
    return out


def _divides_int_poly(d, u):
    """Exact divisibility of u by d over the rationals (dense int lists)."""
    if not d:
        return False
    dd = len(d) - 1
    if len(u) - 1 < dd:
        return not any(u)
    r = [Fraction(x) for x in u]
    lead = Fraction(d[-1])
    for k in range(len(r) - 1, dd - 1, -1):
        c = r[k]
        if not c:
            continue
        c = c / lead
        off = k - dd
        for t in range(dd + 1):
            r[off + t] -= c * d[t]
    return not any(r[:dd])


def _int_prs_gcd(u, v):
    """Primitive pseudo-remainder sequence over the integers."""
    u, v = u[:], v[:]
    if len(u) < len(v):
        u, v = v, u
    while True:
        dv = len(v) - 1
        lv = v[-1]
        r = u[:]
        while len(r) - 1 >= dv:
            if r[-1] == 0:
                r.pop()
                continue
            lr = r[-1]
            r = [c * lv for c in r]
            off = len(r) - 1 - dv
            for t in range(dv + 1):
                r[off + t] -= lr * v[t]
            _trim(r)
        _trim(r)
        if not r:
            g = _int_content(v)
            v = [x // g for x in v] if g > 1 else v
            return [-x for x in v] if v[-1] < 0 else v
        g = _int_content(r)
        if g > 1:
            r = [x // g for x in r]
        u, v = v, r


def _int_poly_gcd(u, v):
    """gcd of primitive integer polynomials: evaluation-reconstruction
    heuristic with trial-division acceptance, integer PRS fallback."""
    if len(u) == 1 or len(v) == 1:
        return [1]
    xi = 2 * max(max(map(abs, u)), max(map(abs, v))) + 2
    for _ in range(5):
        g = _int_gcd(abs(_int_eval(u, xi)), abs(_int_eval(v, xi)))
        if g == 0:
            xi = xi * xi + 1
            continue
        cand = _balanced_digits(g, xi)
        _trim(cand)
        if cand:
            cg = _int_content(cand)
            if cg > 1:
                cand = [x // cg for x in cand]
            if cand[-1] < 0:
                cand = [-x for x in cand]
            if len(cand) == 1:
                return [1]
            if _divides_int_poly(cand, u) and _divides_int_poly(cand, v):
                return cand
        xi = xi * xi + 1
    return _int_prs_gcd(u, v)


def _gcd_single_var(a, b, i):
    u = _dense_int_coeffs(a, i)
    v = _dense_int_coeffs(b, i)
    g = _int_poly_gcd(u, v)
    vars = a.vars
    zero = [0] * len(vars)
    terms = {}
    for d, c in enumerate(g):
        if c:
            e = zero[:]
            e[i] = d
            terms[tuple(e)] = Fraction(c)
    return Poly(vars, terms)


def _strip_frac_dict(u):
    """Divide a univariate-view dict through by its overall rational content."""
    num = 0
    den = 1
    for p in u.values():
        c = abs(_content_fraction(p))
        num = _int_gcd(num, c.numerator)
        den = den * c.denominator // _int_gcd(den, c.denominator)
    if num == 0:
        return u
    cf = Fraction(num, den)
    if cf == 1:
        return u
    return {d: p.scale(1 / cf) for d, p in u.items()}


def poly_gcd(a, b):
    """gcd of two polynomials, canonical (primitive, positive leading)."""
    if a.is_zero:
        return _canonical(b)
    if b.is_zero:
        return _canonical(a)
    if a == b:
        return _canonical(a)
    if a.is_constant or b.is_constant:
        return Poly.const(a.vars, 1)
    if len(a.terms) == 1 or len(b.terms) == 1:
        return _mono_gcd(a, b)

    act_a, act_b = _active_vars(a), _active_vars(b)
    common = [i for i in range(len(a.vars)) if act_a[i] and act_b[i]]
    if not common:
        return Poly.const(a.vars, 1)
    sv = _single_common_var(a, b)
    if sv is not None:
        return _gcd_single_var(a, b, sv)
    i = common[-1]

    ua, ub = _to_univar(a, i), _to_univar(b, i)
    cont_a = _poly_list_gcd(list(ua.values()))
    cont_b = _poly_list_gcd(list(ub.values()))
    cont = poly_gcd(cont_a, cont_b)
    ua = _strip_frac_dict({d: exact_div(c, cont_a) for d, c in ua.items()})
    ub = _strip_frac_dict({d: exact_div(c, cont_b) for d, c in ub.items()})

    if _uni_deg(ua) < _uni_deg(ub):
        ua, ub = ub, ua
    while True:
        r = _pseudo_rem(ua, ub, i, a.vars)
        if not r:
            break
        rc = _poly_list_gcd(list(r.values()))
        r = _strip_frac_dict({d: exact_div(c, rc) for d, c in r.items()})
        ua, ub = ub, r
    prim = _from_univar(ub, i, a.vars)
    return _canonical(cont * _canonical(prim))


def _poly_list_gcd(ps):
    g = ps[0]
    for p in ps[1:]:
        if g.is_constant:
            break
        g = poly_gcd(g, p)
    return _canonical(g) if not g.is_zero else g


# -- rational functions ---------------------------------------------


class RatFun:
    """Rational function in canonical form over a CoefficientField."""

    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, field, num, den, _normalized=False):
        self.field = field
        if _normalized:
            self.num, self.den = num, den
        else:
            if den.is_zero:
                raise DivisionByZero("zero denominator")
            if num.is_zero:
                num = field._zero_poly
                den = field._one_poly
            else:
                g = poly_gcd(num, den)
                if not g.is_one:
                    num = exact_div(num, g)
                    den = exact_div(den, g)
                _, lc = den.leading()
                if lc != 1:
                    num = num.scale(1 / lc)
                    den = den.scale(1 / lc)
            self.num, self.den = num, den
        self._hash = None

    # -- predicates ---------------------------------------------------

    @property
    def is_zero(self):
        return self.num.is_zero

    @property
    def is_one(self):
        return self.num.is_one and self.den.is_one

    def __eq__(self, other):
        if not isinstance(other, RatFun):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        other = self.field.coerce(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        g = poly_gcd(self.den, other.den)
        if g.is_one:
            num = self.num * other.den + other.num * self.den
            den = self.den * other.den
        else:
            da = exact_div(self.den, g)
            db = exact_div(other.den, g)
            num = self.num * db + other.num * da
            den = da * other.den
        return RatFun(self.field, num, den)

    def __radd__(self, other):
        return self + other

    def __neg__(self):
        return RatFun(self.field, -self.num, self.den, _normalized=True)

    def __sub__(self, other):
        return self + (-self.field.coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self.field.coerce(other)
        if self.is_zero or other.is_zero:
            return self.field.zero
        # cross-cancel before multiplying to keep gcd work small
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        n1 = self.num if g1.is_one else exact_div(self.num, g1)
        d2 = other.den if g1.is_one else exact_div(other.den, g1)
        n2 = other.num if g2.is_one else exact_div(other.num, g2)
        d1 = self.den if g2.is_one else exact_div(self.den, g2)
        return RatFun(self.field, n1 * n2, d1 * d2)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        other = self.field.coerce(other)
        if other.is_zero:
            raise DivisionByZero("division by zero rational function")
        return self * RatFun(self.field, other.den, other.num)

    def __rtruediv__(self, other):
        return self.field.coerce(other) / self

    def __pow__(self, n):
        if n == 0:
            return self.field.one
        if n < 0:
            if self.is_zero:
                raise DivisionByZero("negative power of zero")
            return RatFun(self.field, self.den, self.num) ** (-n)
        out = self.field.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def evaluate(self, values):
        den = self.den.evaluate(values)
        if den == 0:
            raise DivisionByZero("denominator vanishes at evaluation point")
        return self.num.evaluate(values) / den

    def __str__(self):
        if self.den.is_one:
            return str(self.num)
        num = str(self.num)
        den = str(self.den)
        return f"({num})/({den})"

    __repr__ = __str__


class CoefficientField:
    """Field of rational functions in a fixed tuple of variables.

    Instances are interned by variable tuple so elements built anywhere
    combine freely.
    """

    _registry = {}

    def __new__(cls, names):
        names = tuple(names)
        inst = cls._registry.get(names)
        if inst is None:
            inst = super().__new__(cls)
            inst.names = names
            inst._zero_poly = Poly(names, {})
            inst._one_poly = Poly.const(names, 1)
            inst.zero = RatFun(inst, inst._zero_poly, inst._one_poly, _normalized=True)
            inst.one = RatFun(inst, inst._one_poly, inst._one_poly, _normalized=True)
            cls._registry[names] = inst
        return inst

    def const(self, c):
        return RatFun(self, Poly.const(self.names, c), self._one_poly, _normalized=True)

    def var(self, name):
        return RatFun(self, Poly.variable(self.names, name), self._one_poly, _normalized=True)

    def monomial(self, name, k):
        """name**k as a rational function; k may be negative."""
        if k == 0:
            return self.one
        p = Poly.variable(self.names, name)
        if k > 0:
            return RatFun(self, p ** k, self._one_poly, _normalized=True)
        return RatFun(self, self._one_poly, p ** (-k), _normalized=True)

    def coerce(self, x):
        if isinstance(x, RatFun):
            if x.field is not self:
                raise ValueError("rational function from a different field")
            return x
        return self.const(_as_fraction(x))

    def poly(self, terms):
        return Poly(self.names, {tuple(e): _as_fraction(c) for e, c in terms.items()})

    def __repr__(self):
        return f"CoefficientField{self.names}"
