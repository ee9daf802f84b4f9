"""Exact scalars, Laurent polynomials, truncated series and rational functions.

Everything here is exact: coefficients are :class:`fractions.Fraction`,
quadratic irrationalities are pairs of fractions, and the formal symbols
are invertible so monomials may carry negative exponents.

The symbol set is fixed::

    lam    the character value at (b + sqrt(-d))/2
    zeta1  the additive character value at c/p
    A, B   the two normalized Satake parameters of a GL(2) form
    b1..b4 the four normalized Satake parameters of a GSp(4) form
    T      the series variable p^(-3s-1/2)

Monomials are stored as packed integers (one 16 bit field per symbol), so
multiplying two monomials is a single integer addition.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from numbers import Rational as _RationalABC

Rational = Fraction

SYMBOLS = ("lam", "zeta1", "A", "B", "b1", "b2", "b3", "b4", "T")
_INDEX = {name: i for i, name in enumerate(SYMBOLS)}
_NSYM = len(SYMBOLS)
_BITS = 16
_OFF = 1 << (_BITS - 1)
_MASK = (1 << _BITS) - 1
_BIAS = sum(_OFF << (_BITS * i) for i in range(_NSYM))
_T_SHIFT = _BITS * _INDEX["T"]


class NotIntegral(ArithmeticError):
    pass


class NonUnitConstantTerm(ArithmeticError):
    pass


class DegenerateRatio(ArithmeticError):
    pass


def _lcm(a, b):
    return a // gcd(a, b) * b


def vp(x, p):
    """p-adic valuation of a nonzero rational; None for zero."""
    x = Fraction(x)
    if x == 0:
        return None
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def mod_p(x, p):
    """Reduce a p-integral rational to an integer in [0, p)."""
    x = Fraction(x)
    if x.denominator % p == 0:
        raise NotIntegral(f"{x} is not {p}-integral")
    return x.numerator * pow(x.denominator, -1, p) % p


# ---------------------------------------------------------------- quadratic


class QuadElement:
    """u + v*sqrt(-d) with rational u, v."""

    __slots__ = ("u", "v", "d")

    def __init__(self, u, v=0, d=1):
        self.u = Fraction(u)
        self.v = Fraction(v)
        self.d = d

    def _coerce(self, other):
        if isinstance(other, QuadElement):
            if other.d != self.d:
                raise ValueError("mixing different quadratic fields")
            return other
        if isinstance(other, (int, _RationalABC)):
            return QuadElement(other, 0, self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadElement(self.u + o.u, self.v + o.v, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadElement(-self.u, -self.v, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadElement(self.u - o.u, self.v - o.v, self.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadElement(self.u * o.u - self.d * self.v * o.v,
                           self.u * o.v + self.v * o.u, self.d)

    __rmul__ = __mul__

    def conj(self):
        return QuadElement(self.u, -self.v, self.d)

    def norm(self):
        return self.u * self.u + self.d * self.v * self.v

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return QuadElement(self.u / n, -self.v / n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def is_rational(self):
        return self.v == 0

    def __eq__(self, other):
        if isinstance(other, QuadElement):
            return self.u == other.u and self.v == other.v and self.d == other.d
        if isinstance(other, (int, _RationalABC)):
            return self.v == 0 and self.u == other
        return NotImplemented

    def __hash__(self):
        if self.v == 0:
            return hash(self.u)
        return hash((self.u, self.v, self.d))

    def __bool__(self):
        return self.u != 0 or self.v != 0

    def __repr__(self):
        if self.v == 0:
            return f"{self.u}"
        return f"({self.u} + {self.v}*sqrt(-{self.d}))"


def qvp(x, p):
    """Valuation at an inert prime: min of the component valuations."""
    if isinstance(x, QuadElement):
        vals = [v for v in (vp(x.u, p), vp(x.v, p)) if v is not None]
        return min(vals) if vals else None
    return vp(x, p)


def quad_reduce_mod_p(x, p):
    """Image of an integral element of Z_L in F_{p^2} = F_p[sqrt(-d)]."""
    if not isinstance(x, QuadElement):
        x = QuadElement(x)
    for part in (x.u, x.v):
        if part != 0 and vp(part, p) < 0:
            raise NotIntegral(f"{x} is not integral at {p}")
    return (mod_p(x.u, p), mod_p(x.v, p))


# ---------------------------------------------------------------- monomials


def pack(exps):
    key = _BIAS
    for i, e in enumerate(exps):
        if not -_OFF < e < _OFF:
            raise OverflowError("exponent out of range")
        key += e << (_BITS * i)
    return key


def unpack(key):
    return tuple(((key >> (_BITS * i)) & _MASK) - _OFF for i in range(_NSYM))


def _t_degree(key):
    return ((key >> _T_SHIFT) & _MASK) - _OFF


def _strip_t(key):
    return key - (_t_degree(key) << _T_SHIFT)


_ONE_KEY = _BIAS


def _num(c):
    """Store integral coefficients as int: far cheaper than Fraction, and
    equal and hash-equal to it."""
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


class SymPoly:
    """Laurent polynomial over Q in the fixed symbol set.

    Immutable; zero coefficients are never stored.
    """

    __slots__ = ("_t", "_hash")

    def __init__(self, terms=None):
        self._t = {}
        self._hash = None
        if terms:
            for k, c in terms.items():
                if c:
                    self._t[k] = _num(c)

    @classmethod
    def _raw(cls, d):
        obj = cls.__new__(cls)
        obj._t = d
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c):
        c = _num(c)
        return cls._raw({_ONE_KEY: c} if c else {})

    @classmethod
    def var(cls, name, power=1):
        exps = [0] * _NSYM
        exps[_INDEX[name]] = power
        return cls._raw({pack(exps): 1})

    @classmethod
    def monomial(cls, coeff=1, **powers):
        exps = [0] * _NSYM
        for name, e in powers.items():
            exps[_INDEX[name]] = e
        c = _num(coeff)
        return cls._raw({pack(exps): c} if c else {})

    @classmethod
    def coerce(cls, x):
        if isinstance(x, SymPoly):
            return x
        if isinstance(x, (int, _RationalABC)):
            return cls.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to SymPoly")

    # arithmetic

    def __add__(self, other):
        try:
            other = SymPoly.coerce(other)
        except TypeError:
            return NotImplemented
        if len(other._t) > len(self._t):
            a, b = other._t, self._t
        else:
            a, b = self._t, other._t
        res = dict(a)
        for k, c in b.items():
            v = res.get(k)
            if v is None:
                res[k] = c
            else:
                v += c
                if v:
                    res[k] = v
                else:
                    del res[k]
        return SymPoly._raw(res)

    __radd__ = __add__

    def __neg__(self):
        return SymPoly._raw({k: -c for k, c in self._t.items()})

    def __sub__(self, other):
        try:
            other = SymPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return SymPoly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, _RationalABC)):
            c = _num(other)
            if not c:
                return SymPoly._raw({})
            return SymPoly._raw({k: v * c for k, v in self._t.items()})
        if not isinstance(other, SymPoly):
            return NotImplemented
        if len(other._t) == 1:
            (k2, c2), = other._t.items()
            shift = k2 - _BIAS
            return SymPoly._raw({k + shift: c * c2 for k, c in self._t.items()})
        if len(self._t) == 1:
            return other * self
        res = {}
        get = res.get
        for k1, c1 in self._t.items():
            shift = k1 - _BIAS
            for k2, c2 in other._t.items():
                k = k2 + shift
                v = get(k)
                res[k] = c1 * c2 if v is None else v + c1 * c2
        return SymPoly._raw({k: c for k, c in res.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return self.inverse_monomial() ** (-n)
        result = SymPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def is_monomial(self):
        return len(self._t) == 1

    def inverse_monomial(self):
        if len(self._t) != 1:
            raise ArithmeticError("only monomials are invertible")
        (k, c), = self._t.items()
        return SymPoly._raw({2 * _BIAS - k: _num(1 / Fraction(c))})

    def __truediv__(self, other):
        if isinstance(other, (int, _RationalABC)):
            return self * (1 / Fraction(other))
        if isinstance(other, SymPoly):
            return self * other.inverse_monomial()
        return NotImplemented

    # inspection

    def __eq__(self, other):
        if isinstance(other, (int, _RationalABC)):
            other = SymPoly.const(other)
        if not isinstance(other, SymPoly):
            return NotImplemented
        return self._t == other._t

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    def __bool__(self):
        return bool(self._t)

    def is_zero(self):
        return not self._t

    def __len__(self):
        return len(self._t)

    def terms(self):
        """Sorted list of (exponent tuple, coefficient)."""
        return sorted((unpack(k), c) for k, c in self._t.items())

    def items(self):
        return self._t.items()

    def degree(self, name):
        """(min, max) exponent of a symbol; None for the zero polynomial."""
        i = _INDEX[name]
        es = [unpack(k)[i] for k in self._t]
        return (min(es), max(es)) if es else None

    def symbols(self):
        used = set()
        for k in self._t:
            for name, e in zip(SYMBOLS, unpack(k)):
                if e:
                    used.add(name)
        return used

    def uses(self, name):
        """True if some monomial has a nonzero exponent of the symbol."""
        shift = _BITS * _INDEX[name]
        return any(((k >> shift) & _MASK) != _OFF for k in self._t)

    def constant(self):
        return Fraction(self._t.get(_ONE_KEY, 0))

    def by_t_degree(self):
        """Split into {k: coefficient of T^k}, each coefficient T-free."""
        out = {}
        for key, c in self._t.items():
            out.setdefault(_t_degree(key), {})[_strip_t(key)] = c
        return {k: SymPoly._raw(v) for k, v in out.items()}

    def subs(self, **values):
        """Substitute rational numbers or SymPolys for symbols."""
        result = SymPoly._raw({})
        for key, c in self._t.items():
            exps = list(unpack(key))
            factor = SymPoly.const(c)
            for name, val in values.items():
                i = _INDEX[name]
                e = exps[i]
                if e:
                    exps[i] = 0
                    if isinstance(val, SymPoly):
                        factor = factor * val ** e
                    else:
                        factor = factor * Fraction(val) ** e
            result = result + factor * SymPoly._raw({pack(exps): 1})
        return result

    def __repr__(self):
        return f"SymPoly({self})"

    def __str__(self):
        if not self._t:
            return "0"
        parts = []
        for exps, c in self.terms():
            mono = "*".join(name if e == 1 else f"{name}^{e}"
                            for name, e in zip(SYMBOLS, exps) if e)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self):
        return [{"coeff": str(c),
                 "monomial": {n: e for n, e in zip(SYMBOLS, exps) if e}}
                for exps, c in self.terms()]


ONE = SymPoly.const(1)
ZERO = SymPoly.const(0)
T = SymPoly.var("T")


def sym(name, power=1):
    return SymPoly.var(name, power)


def complete_homogeneous(degree, variables):
    """h_k of the given SymPolys (0 for negative degree)."""
    if degree < 0:
        return ZERO
    if not variables:
        return ONE if degree == 0 else ZERO
    first, rest = variables[0], variables[1:]
    total = ZERO
    power = ONE
    for i in range(degree + 1):
        total = total + power * complete_homogeneous(degree - i, rest)
        power = power * first
    return total


def complete_homogeneous_monomials(degree, names):
    """h_k of plain symbols, built directly from the exponent vectors."""
    idx = [_INDEX[n] for n in names]
    out = {}

    def rec(pos, left, key):
        if pos == len(idx) - 1:
            out[key + (left << (_BITS * idx[pos]))] = 1
            return
        for e in range(left + 1):
            rec(pos + 1, left - e, key + (e << (_BITS * idx[pos])))

    if degree < 0:
        return ZERO
    rec(0, degree, _BIAS)
    return SymPoly._raw(out)


# ---------------------------------------------------------------- series


class SymSeries:
    """Power series in T truncated after T^order.

    ``coeffs[k]`` is the T-free SymPoly multiplying T^k.
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order):
        coeffs = list(coeffs)[: order + 1]
        coeffs += [ZERO] * (order + 1 - len(coeffs))
        self.coeffs = tuple(coeffs)
        self.order = order

    @classmethod
    def from_poly(cls, poly, order):
        poly = SymPoly.coerce(poly)
        coeffs = [ZERO] * (order + 1)
        for k, c in poly.by_t_degree().items():
            if k < 0:
                raise ValueError("negative power of T in a power series")
            if k <= order:
                coeffs[k] = c
        return cls(coeffs, order)

    def to_poly(self):
        total = ZERO
        for k, c in enumerate(self.coeffs):
            if c:
                total = total + c * T ** k
        return total

    def _check(self, other):
        if not isinstance(other, SymSeries):
            other = SymSeries.from_poly(other, self.order)
        return other, min(self.order, other.order)

    def __add__(self, other):
        other, n = self._check(other)
        return SymSeries([self.coeffs[k] + other.coeffs[k] for k in range(n + 1)], n)

    __radd__ = __add__

    def __neg__(self):
        return SymSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-other if isinstance(other, SymSeries) else -SymPoly.coerce(other))

    def __mul__(self, other):
        if isinstance(other, (int, _RationalABC)):
            return SymSeries([c * other for c in self.coeffs], self.order)
        other, n = self._check(other)
        out = []
        for k in range(n + 1):
            acc = ZERO
            for i in range(k + 1):
                a = self.coeffs[i]
                if a:
                    b = other.coeffs[k - i]
                    if b:
                        acc = acc + a * b
            out.append(acc)
        return SymSeries(out, n)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SymSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.order))

    def first_difference(self, other):
        """Smallest k whose T^k coefficients differ, or None."""
        n = min(self.order, other.order)
        for k in range(n + 1):
            if self.coeffs[k] != other.coeffs[k]:
                return k
        return None

    def __repr__(self):
        shown = [f"({c})*T^{k}" for k, c in enumerate(self.coeffs) if c]
        return "SymSeries(" + " + ".join(shown or ["0"]) + f"; order {self.order})"


def series_invert(s):
    """Inverse of a series whose T^0 coefficient is a nonzero monomial."""
    c0 = s.coeffs[0]
    if not c0.is_monomial():
        raise NonUnitConstantTerm(f"constant term {c0} is not a unit")
    inv0 = c0.inverse_monomial()
    out = [inv0]
    nonzero = [j for j in range(1, s.order + 1) if s.coeffs[j]]
    for k in range(1, s.order + 1):
        acc = ZERO
        for j in nonzero:
            if j > k:
                break
            prev = out[k - j]
            if prev:
                acc = acc + s.coeffs[j] * prev
        out.append(-(acc * inv0))
    return SymSeries(out, s.order)


# ---------------------------------------------------------------- ratfns


def _canonical(num, den):
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        return ZERO, ONE
    keys = list(num._t) + list(den._t)
    exps = [unpack(k) for k in keys]
    lows = [min(e[i] for e in exps) for i in range(_NSYM)]
    shift = pack([-x for x in lows]) - _BIAS
    num_t = {k + shift: c for k, c in num._t.items()}
    den_t = {k + shift: c for k, c in den._t.items()}
    coeffs = list(num_t.values()) + list(den_t.values())
    L = 1
    for c in coeffs:
        L = _lcm(L, c.denominator)
    G = 0
    for c in coeffs:
        G = gcd(G, (c * L).numerator)
    scale = Fraction(L, G)
    lead = min(den_t, key=unpack)
    if den_t[lead] < 0:
        scale = -scale
    return (SymPoly._raw({k: c * scale for k, c in num_t.items()}),
            SymPoly._raw({k: c * scale for k, c in den_t.items()}))


class SymRatFn:
    """Quotient of two SymPolys kept in content-primitive canonical form.

    No polynomial gcd is cancelled, so equality is decided by
    cross-multiplication (:func:`ratfn_eq`), never by comparing fields.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = SymPoly.coerce(num)
        den = ONE if den is None else SymPoly.coerce(den)
        self.num, self.den = _canonical(num, den)

    @classmethod
    def coerce(cls, x):
        return x if isinstance(x, SymRatFn) else cls(x)

    def __add__(self, other):
        try:
            o = SymRatFn.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == o.den:
            return SymRatFn(self.num + o.num, self.den)
        return SymRatFn(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return SymRatFn(-self.num, self.den)

    def __sub__(self, other):
        return self + (-SymRatFn.coerce(other))

    def __rsub__(self, other):
        return SymRatFn.coerce(other) - self

    def __mul__(self, other):
        try:
            o = SymRatFn.coerce(other)
        except TypeError:
            return NotImplemented
        return SymRatFn(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = SymRatFn.coerce(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return SymRatFn(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return SymRatFn.coerce(other) / self

    def __pow__(self, n):
        if n < 0:
            return SymRatFn(self.den ** (-n), self.num ** (-n))
        return SymRatFn(self.num ** n, self.den ** n)

    def is_zero(self):
        return self.num.is_zero()

    def to_series(self, order):
        # make the denominator's constant term 1 so the inversion recurrence
        # stays in integers when the denominator is integral
        c0 = SymSeries.from_poly(self.den, 0).coeffs[0]
        if not c0.is_monomial():
            raise NonUnitConstantTerm(f"constant term {c0} is not a unit")
        inv = c0.inverse_monomial()
        den = SymPoly._raw({k: _num(c) for k, c in (self.den * inv)._t.items()})
        num = SymSeries.from_poly(self.num * inv, order)
        return num * series_invert(SymSeries.from_poly(den, order))

    def symbols(self):
        return self.num.symbols() | self.den.symbols()

    def __eq__(self, other):
        if isinstance(other, (SymRatFn, SymPoly, int, _RationalABC)):
            return ratfn_eq(self, SymRatFn.coerce(other))
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"SymRatFn(({self.num}) / ({self.den}))"


def ratfn_eq(x, y):
    x, y = SymRatFn.coerce(x), SymRatFn.coerce(y)
    return (x.num * y.den - y.num * x.den).is_zero()


def geometric_sum_closed(ratio, first):
    """Closed form first/(1 - ratio) of first * sum_{k>=0} ratio^k."""
    ratio = SymRatFn.coerce(ratio)
    if ratfn_eq(ratio, ONE):
        raise DegenerateRatio("ratio is 1")
    return SymRatFn.coerce(first) / (1 - ratio)


class GeometricFamily:
    """Finite sum of geometric terms coeff * r_l^l * r_m^m.

    Ratios are monomial SymPolys; coefficients are SymRatFns.  This is the
    bookkeeping that lets a double sum over (l, m) be summed in closed form
    term by term with :func:`geometric_sum_closed`.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        acc = {}
        for (rl, rm), c in (terms.items() if isinstance(terms, dict) else terms or []):
            key = (rl, rm)
            acc[key] = acc[key] + c if key in acc else SymRatFn.coerce(c)
        self.terms = {k: v for k, v in acc.items() if not v.is_zero()}

    @classmethod
    def single(cls, coeff, rl=ONE, rm=ONE):
        return cls([((SymPoly.coerce(rl), SymPoly.coerce(rm)), coeff)])

    @classmethod
    def h_sequence(cls, a, b, rl=ONE):
        """l -> h_l(a, b) * rl^l, written as two geometric terms."""
        a, b, rl = SymPoly.coerce(a), SymPoly.coerce(b), SymPoly.coerce(rl)
        diff = SymRatFn(a - b)
        return cls([((a * rl, ONE), SymRatFn(a) / diff),
                    ((b * rl, ONE), -SymRatFn(b) / diff)])

    def __add__(self, other):
        return GeometricFamily(list(self.terms.items()) + list(other.terms.items()))

    def __mul__(self, other):
        if not isinstance(other, GeometricFamily):
            return GeometricFamily([(k, c * other) for k, c in self.terms.items()])
        out = []
        for (rl1, rm1), c1 in self.terms.items():
            for (rl2, rm2), c2 in other.terms.items():
                out.append(((rl1 * rl2, rm1 * rm2), c1 * c2))
        return GeometricFamily(out)

    __rmul__ = __mul__

    def is_zero(self):
        return not self.terms

    def at(self, l, m=0):
        total = SymRatFn(ZERO)
        for (rl, rm), c in self.terms.items():
            total = total + c * (rl ** l * rm ** m)
        return total

    def total(self, l0=0, m0=0):
        """Closed form of sum over l >= l0, m >= m0."""
        total = SymRatFn(ZERO)
        for (rl, rm), c in self.terms.items():
            inner = geometric_sum_closed(rl, c * rl ** l0)
            total = total + geometric_sum_closed(rm, inner * rm ** m0)
        return total

    def total_l(self, l0=0):
        """Closed form of the sum over l >= l0 at fixed m = 0."""
        total = SymRatFn(ZERO)
        for (rl, _rm), c in self.terms.items():
            total = total + geometric_sum_closed(rl, c * rl ** l0)
        return total
