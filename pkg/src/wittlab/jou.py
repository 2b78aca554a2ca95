"""The Jouanolou dg algebra J_d (polynomial model of punctured affine d-space).

Generators: even z^1..z^d, x^1..x^d subject to sum_i z^i x^i = 1, the odd
degree-1 generator P (only for d = 2 here), and odd form generators
dz^1..dz^d.  Normal form eliminates the pair z^d x^d via the rewrite
z^d x^d -> 1 - sum_{i<d} z^i x^i.

Differentials:
  dbar  : dbar(x^1) = -z^2 P, dbar(x^2) = z^1 P, dbar(z) = dbar(P) = 0
  partial(i): d/dz^i with  partial_i z^j = delta, partial_i x^j = -x^i x^j,
          partial_i P = -2 x^i P
  hol_d : a |-> sum_i partial(i, a) * dz^i

The residue functional is normalized by Res(P dz^1 dz^2) = 1 (d=2) and
Res(x dz) = 1 (d=1); the general monomial rule is validated against a
quotient-space oracle in the test suite.
"""

from fractions import Fraction
from math import comb, factorial

# Odd generator encoding: P == 0, dz^i == i  (so the canonical order is
# P < dz^1 < ... < dz^d and sorting gives the canonical monomial).
P_GEN = 0


class JMonomial:
    """Normal-form monomial: z-exponents, x-exponents, sorted odd part."""

    __slots__ = ("zexp", "xexp", "odd", "_hash")

    def __init__(self, zexp, xexp, odd=()):
        self.zexp = tuple(zexp)
        self.xexp = tuple(xexp)
        self.odd = tuple(odd)
        self._hash = hash((self.zexp, self.xexp, self.odd))

    @property
    def d(self):
        return len(self.zexp)

    @property
    def degree(self):
        """Cohomological degree: 1 if P is present else 0."""
        return 1 if P_GEN in self.odd else 0

    @property
    def formpart(self):
        return tuple(g for g in self.odd if g != P_GEN)

    @property
    def form_degree(self):
        return len(self.formpart)

    def weight(self):
        """Bi-weight: wt(z^i)=+e_i, wt(x^i)=-e_i, wt(P)=(-1,..,-1), wt(dz^i)=+e_i."""
        w = [self.zexp[i] - self.xexp[i] for i in range(self.d)]
        if P_GEN in self.odd:
            w = [c - 1 for c in w]
        for g in self.odd:
            if g != P_GEN:
                w[g - 1] += 1
        return tuple(w)

    def is_constant(self):
        return not any(self.zexp) and not any(self.xexp) and not self.odd

    def __eq__(self, other):
        return (
            self.zexp == other.zexp
            and self.xexp == other.xexp
            and self.odd == other.odd
        )

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        return (self.zexp, self.xexp, self.odd)

    def __repr__(self):
        return jm_str(self)


def jm_str(m):
    parts = []
    for i, e in enumerate(m.zexp):
        if e == 1:
            parts.append(f"z{i+1}")
        elif e:
            parts.append(f"z{i+1}^{e}")
    for i, e in enumerate(m.xexp):
        if e == 1:
            parts.append(f"x{i+1}")
        elif e:
            parts.append(f"x{i+1}^{e}")
    for g in m.odd:
        parts.append("P" if g == P_GEN else f"dz{g}")
    return "*".join(parts) if parts else "1"


def merge_odd(a, b):
    """Merge two sorted odd tuples; return (sign, merged) or (0, None) on repeat."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    if set(a) & set(b):
        return 0, None
    merged = []
    sign = 1
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] < b[j]:
            merged.append(a[i])
            i += 1
        else:
            # b[j] jumps over the remaining elements of a
            if (len(a) - i) % 2:
                sign = -sign
            merged.append(b[j])
            j += 1
    merged.extend(a[i:])
    merged.extend(b[j:])
    return sign, tuple(merged)


def _reduce_monomial(zexp, xexp, odd, coeff, out):
    """Apply the rewrite z^d x^d -> 1 - sum_{i<d} z^i x^i to exhaustion.

    Accumulates normal-form terms into the dict out.
    """
    d = len(zexp)
    last = d - 1
    stack = [(tuple(zexp), tuple(xexp), coeff)]
    while stack:
        z, x, c = stack.pop()
        if z[last] and x[last]:
            z2 = list(z)
            x2 = list(x)
            z2[last] -= 1
            x2[last] -= 1
            z2, x2 = tuple(z2), tuple(x2)
            # one factor z^d x^d replaced by 1 - sum_{i<d} z^i x^i
            stack.append((z2, x2, c))
            for i in range(last):
                zi = list(z2)
                xi = list(x2)
                zi[i] += 1
                xi[i] += 1
                stack.append((tuple(zi), tuple(xi), -c))
        else:
            key = JMonomial(z, x, odd)
            v = out.get(key, Fraction(0)) + c
            if v:
                out[key] = v
            elif key in out:
                del out[key]


class JElement:
    """Element of J_d tensored with holomorphic forms: dict monomial -> Fraction."""

    __slots__ = ("d", "terms")

    def __init__(self, d, terms=None, normalize=True):
        self.d = d
        if terms is None:
            self.terms = {}
        elif normalize:
            out = {}
            for m, c in terms.items():
                c = Fraction(c)
                if c:
                    _reduce_monomial(m.zexp, m.xexp, m.odd, c, out)
            self.terms = out
        else:
            self.terms = {m: Fraction(c) for m, c in terms.items() if c}

    # -- construction helpers ------------------------------------------------

    @classmethod
    def zero(cls, d):
        return cls(d, {}, normalize=False)

    @classmethod
    def const(cls, d, c):
        m = JMonomial((0,) * d, (0,) * d)
        return cls(d, {m: Fraction(c)}, normalize=False)

    @classmethod
    def gen_z(cls, d, i):
        z = [0] * d
        z[i - 1] = 1
        return cls(d, {JMonomial(z, (0,) * d): Fraction(1)}, normalize=False)

    @classmethod
    def gen_x(cls, d, i):
        x = [0] * d
        x[i - 1] = 1
        return cls(d, {JMonomial((0,) * d, x): Fraction(1)}, normalize=False)

    @classmethod
    def gen_P(cls, d):
        return cls(d, {JMonomial((0,) * d, (0,) * d, (P_GEN,)): Fraction(1)}, normalize=False)

    @classmethod
    def gen_dz(cls, d, i):
        return cls(d, {JMonomial((0,) * d, (0,) * d, (i,)): Fraction(1)}, normalize=False)

    # -- ring structure ------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = JElement.const(self.d, other)
        return self.d == other.d and self.terms == other.terms

    def __hash__(self):
        return hash((self.d, frozenset(self.terms.items())))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = JElement.const(self.d, other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, Fraction(0)) + c
            if v:
                out[m] = v
            elif m in out:
                del out[m]
        return JElement(self.d, out, normalize=False)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return JElement(self.d, {m: -c for m, c in self.terms.items()}, normalize=False)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = JElement.const(self.d, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return JElement(
                self.d, {m: c * other for m, c in self.terms.items()}, normalize=False
            )
        if self.d != other.d:
            raise ValueError("dimension mismatch")
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                sign, odd = merge_odd(m1.odd, m2.odd)
                if sign == 0:
                    continue
                z = tuple(a + b for a, b in zip(m1.zexp, m2.zexp))
                x = tuple(a + b for a, b in zip(m1.xexp, m2.xexp))
                _reduce_monomial(z, x, odd, sign * c1 * c2, out)
        return JElement(self.d, out, normalize=False)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.__mul__(other)
        return NotImplemented

    # -- gradings ------------------------------------------------------------

    def degrees(self):
        return sorted({m.degree for m in self.terms})

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def degree(self):
        """Cohomological degree of a homogeneous element (0 for zero)."""
        degs = self.degrees()
        if len(degs) > 1:
            raise ValueError("not homogeneous")
        return degs[0] if degs else 0

    def weight_component(self, w):
        w = tuple(w)
        return JElement(
            self.d,
            {m: c for m, c in self.terms.items() if m.weight() == w},
            normalize=False,
        )

    def weights(self):
        return sorted({m.weight() for m in self.terms})

    def __repr__(self):
        return jel_str(self)


def jel_str(a):
    if not a.terms:
        return "0"
    parts = []
    for m in sorted(a.terms, key=JMonomial.sort_key):
        c = a.terms[m]
        s = jm_str(m)
        if s == "1":
            parts.append(f"{c}")
        elif c == 1:
            parts.append(s)
        elif c == -1:
            parts.append(f"-{s}")
        else:
            parts.append(f"{c}*{s}")
    out = parts[0]
    for p in parts[1:]:
        out += f"+{p}" if not p.startswith("-") else p
    return out


# -- differentials -----------------------------------------------------------


def dbar(a):
    """Dolbeault-type differential of J_2 (zero for d = 1)."""
    if a.d == 1:
        return JElement.zero(1)
    if a.d != 2:
        raise ValueError("dbar implemented for d in {1, 2}")
    out = {}
    for m, c in a.terms.items():
        if P_GEN in m.odd:
            continue  # P * P = 0 in every dbar image of such a term
        sign, odd = merge_odd((P_GEN,), m.odd)
        if sign == 0:
            continue
        k1, k2 = m.xexp
        a1, a2 = m.zexp
        # dbar(x1) = -z2 P
        if k1:
            _reduce_monomial((a1, a2 + 1), (k1 - 1, k2), odd, -sign * c * k1, out)
        # dbar(x2) = z1 P
        if k2:
            _reduce_monomial((a1 + 1, a2), (k1, k2 - 1), odd, sign * c * k2, out)
    return JElement(2, out, normalize=False)


def partial(i, a):
    """The even derivation d/dz^i (1-based axis index)."""
    d = a.d
    ii = i - 1
    out = {}
    for m, c in a.terms.items():
        az = m.zexp[ii]
        if az:
            z = list(m.zexp)
            z[ii] -= 1
            _reduce_monomial(z, m.xexp, m.odd, c * az, out)
        drop = sum(m.xexp) + (2 if P_GEN in m.odd else 0)
        if drop:
            x = list(m.xexp)
            x[ii] += 1
            _reduce_monomial(m.zexp, x, m.odd, -c * drop, out)
    return JElement(d, out, normalize=False)


def hol_d(a):
    """Holomorphic de Rham differential: sum_i partial(i, a) * dz^i."""
    d = a.d
    out = JElement.zero(d)
    for i in range(1, d + 1):
        out = out + partial(i, a) * JElement.gen_dz(d, i)
    return out


# -- residue -----------------------------------------------------------------


def residue(a):
    """The residue functional.

    For d=2 reads the full-form-degree, odd-degree, bi-weight-(0,0) part:
        Res((z1)^a (z2)^b (x1)^k (x2)^l P dz1 dz2)
            = delta_{a,k} delta_{b,l} k! l! / (k+l+1)!
    For d=1: Res(x dz) = 1 (the coefficient of z^{-1} dz).
    The coefficient rule is validated against a quotient oracle in tests.
    """
    d = a.d
    res = Fraction(0)
    if d == 1:
        target_form = (1,)
        for m, c in a.terms.items():
            if m.odd == target_form and m.zexp == (0,) and m.xexp == (1,):
                res += c
        return res
    if d != 2:
        raise ValueError("residue implemented for d in {1, 2}")
    full = (P_GEN, 1, 2)
    for m, c in a.terms.items():
        if m.odd != full:
            continue
        az, bz = m.zexp
        kx, lx = m.xexp
        if az == kx and bz == lx:
            res += c * Fraction(
                factorial(kx) * factorial(lx), factorial(kx + lx + 1)
            )
    return res


# -- convenient d=2 generator aliases ---------------------------------------

z1 = JElement.gen_z(2, 1)
z2 = JElement.gen_z(2, 2)
x1 = JElement.gen_x(2, 1)
x2 = JElement.gen_x(2, 2)
P = JElement.gen_P(2)
dz1 = JElement.gen_dz(2, 1)
dz2 = JElement.gen_dz(2, 2)
one = JElement.const(2, 1)
