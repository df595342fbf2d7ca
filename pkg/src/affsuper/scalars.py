# Exact scalar arithmetic: Gaussian rationals and Laurent polynomials in q.
#
# Everything downstream (supermatrices, loop brackets, shuffle pairings) is
# exact, so the scalar layer never touches floats.  Laurent exponents are
# Fractions rather than ints because the one-parameter family D(2,1;x) puts
# the rational parameter x into the bilinear form, and q^x powers with
# x = -1/3 must stay exact.

from fractions import Fraction


def _frac(a):
    """Coerce ints/Fractions (and strings like '1/3') to Fraction."""
    if isinstance(a, Fraction):
        return a
    return Fraction(a)


class GaussRational:
    """A Gaussian rational a + b*i with exact Fraction components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def _coerce(self, other):
        if isinstance(other, GaussRational):
            return other
        if isinstance(other, (int, Fraction, str)):
            return GaussRational(_frac(other), 0)
        return None

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return GaussRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return gauss(other) + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return GaussRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise ZeroDivisionError("division by zero GaussRational")
        return GaussRational(
            (self.re * other.re + self.im * other.im) / n,
            (self.im * other.re - self.re * other.im) / n,
        )

    def __rtruediv__(self, other):
        return gauss(other) / self

    def conjugate(self):
        return GaussRational(self.re, -self.im)

    def __repr__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return "%s*i" % self.im
        return "(%s%s%s*i)" % (self.re, "+" if self.im > 0 else "-", abs(self.im))


def gauss(a):
    if isinstance(a, GaussRational):
        return a
    return GaussRational(_frac(a), 0)


G_ZERO = GaussRational(0, 0)
G_ONE = GaussRational(1, 0)
G_I = GaussRational(0, 1)


class LaurentQ:
    """Laurent polynomial in q with Fraction exponents and coefficients.

    Stored as {exponent: coefficient} with zero coefficients dropped.
    """

    __slots__ = ("c",)

    def __init__(self, c=None):
        self.c = {}
        if c:
            for e, v in c.items():
                v = _frac(v)
                if v:
                    self.c[_frac(e)] = v

    @staticmethod
    def const(v):
        v = _frac(v)
        return LaurentQ({Fraction(0): v} if v else {})

    @staticmethod
    def q_power(e):
        return LaurentQ({_frac(e): Fraction(1)})

    def is_zero(self):
        return not self.c

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        other = laurent(other)
        return self.c == other.c

    def __hash__(self):
        return hash(frozenset(self.c.items()))

    def __add__(self, other):
        other = laurent(other)
        out = dict(self.c)
        for e, v in other.c.items():
            w = out.get(e, 0) + v
            if w:
                out[e] = w
            else:
                out.pop(e, None)
        r = LaurentQ()
        r.c = out
        return r

    __radd__ = __add__

    def __neg__(self):
        r = LaurentQ()
        r.c = {e: -v for e, v in self.c.items()}
        return r

    def __sub__(self, other):
        return self + (-laurent(other))

    def __rsub__(self, other):
        return laurent(other) + (-self)

    def __mul__(self, other):
        other = laurent(other)
        out = {}
        for e1, v1 in self.c.items():
            for e2, v2 in other.c.items():
                e = e1 + e2
                w = out.get(e, 0) + v1 * v2
                if w:
                    out[e] = w
                else:
                    out.pop(e, None)
        r = LaurentQ()
        r.c = out
        return r

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0 or n != int(n):
            raise ValueError("only nonnegative integer powers")
        r = LaurentQ.const(1)
        for _ in range(int(n)):
            r = r * self
        return r

    def bar(self):
        """The bar involution q -> q^-1."""
        r = LaurentQ()
        r.c = {-e: v for e, v in self.c.items()}
        return r

    def subs(self, q_value):
        """Evaluate at an exact rational q (exponents must be integers)."""
        q_value = _frac(q_value)
        total = Fraction(0)
        for e, v in self.c.items():
            if e.denominator != 1:
                raise ValueError("fractional exponent %s cannot be evaluated" % e)
            total += v * q_value ** int(e)
        return total

    def divide(self, other):
        """Exact division; raises ValueError when the quotient is not Laurent."""
        other = laurent(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if self.is_zero():
            return LaurentQ()
        # Rescale exponents to integers (common denominator), then do ordinary
        # long division from the top degree after clearing the valuation.
        exps = list(self.c) + list(other.c)
        lcm = 1
        for e in exps:
            d = e.denominator
            lcm = lcm * d // _gcd(lcm, d)
        num = {int(e * lcm): v for e, v in self.c.items()}
        den = {int(e * lcm): v for e, v in other.c.items()}
        nv, dv = min(num), min(den)
        num = {e - nv: v for e, v in num.items()}
        den = {e - dv: v for e, v in den.items()}
        dtop = max(den)
        dlead = den[dtop]
        quot = {}
        while num:
            ntop = max(num)
            if ntop < dtop:
                raise ValueError("inexact Laurent division")
            shift = ntop - dtop
            coef = num[ntop] / dlead
            quot[shift] = coef
            for e, v in den.items():
                w = num.get(e + shift, 0) - coef * v
                if w:
                    num[e + shift] = w
                else:
                    num.pop(e + shift, None)
        out = LaurentQ()
        out.c = {
            Fraction(e + nv - dv, lcm): v for e, v in quot.items()
        }
        return out

    def __repr__(self):
        if not self.c:
            return "0"
        parts = []
        for e in sorted(self.c):
            v = self.c[e]
            if e == 0:
                parts.append(str(v))
            elif e == 1:
                parts.append("%s*q" % v)
            else:
                parts.append("%s*q^(%s)" % (v, e))
        return " + ".join(parts)


def laurent(a):
    if isinstance(a, LaurentQ):
        return a
    return LaurentQ.const(a)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


L_ZERO = LaurentQ()
L_ONE = LaurentQ.const(1)


def q_sinh(a):
    """q^a - q^-a as a Laurent polynomial (a may be any rational)."""
    a = _frac(a)
    if a == 0:
        return LaurentQ()
    return LaurentQ({a: 1, -a: -1})


def q_int(n):
    """The symmetric q-integer [n] = (q^n - q^-n)/(q - q^-1), n an integer."""
    n = int(n)
    if n == 0:
        return LaurentQ()
    sign = 1 if n > 0 else -1
    m = abs(n)
    # q^(m-1) + q^(m-3) + ... + q^(1-m)
    return LaurentQ({Fraction(m - 1 - 2 * k): sign for k in range(m)})


def q_int_factorial(n):
    r = LaurentQ.const(1)
    for k in range(1, int(n) + 1):
        r = r * q_int(k)
    return r


def q_capital(v, k=1):
    """Q_{v,k} = (q^(kv) - q^(-kv)) / (q - q^-1) for integer k*v."""
    kv = _frac(v) * k
    if kv.denominator != 1:
        raise ValueError("q_capital needs an integer total exponent")
    return q_int(int(kv))


def brace(n):
    """{n} = (q^n - 1)/(q - 1) = 1 + q + ... + q^(n-1), n >= 0."""
    n = int(n)
    if n < 0:
        raise ValueError("brace needs n >= 0")
    return LaurentQ({Fraction(k): 1 for k in range(n)})


def brace_factorial(n):
    r = LaurentQ.const(1)
    for k in range(1, int(n) + 1):
        r = r * brace(k)
    return r


def brace_binomial(n, m):
    """{n choose m} = {n}! / ({m}! {n-m}!), exact (a polynomial in q)."""
    n, m = int(n), int(m)
    if m < 0 or m > n:
        return LaurentQ()
    return brace_factorial(n).divide(brace_factorial(m) * brace_factorial(n - m))


def angle_bracket(k, m, parity):
    """The structure scalar <k; m> of repeated-bracket contractions.

    m plays the role of -a_ij.  For an even node it is k(m - k + 1); for an
    odd node it alternates between k (k even) and m - k + 1 (k odd).
    """
    if parity == 0:
        return _frac(k) * (_frac(m) - k + 1)
    if k % 2 == 0:
        return _frac(k)
    return _frac(m) - k + 1


def angle_bracket_factorial(k, m, parity):
    r = Fraction(1)
    for s in range(1, int(k) + 1):
        r *= angle_bracket(s, m, parity)
    return r


def lowering_factorial(a, parity):
    """(a)_s! with a = -a_ij: plain a! for an even node, (a/2)! 2^(a/2) odd."""
    a = int(a)
    if a < 0:
        raise ValueError("negative argument")
    if parity == 0:
        r = 1
        for s in range(2, a + 1):
            r *= s
        return Fraction(r)
    if a % 2:
        raise ValueError("odd node needs an even Cartan integer")
    half = a // 2
    r = 1
    for s in range(2, half + 1):
        r *= s
    return Fraction(r * 2 ** half)
