"""Vector fields: the dg Witt algebra witt_d (J_d-coefficients), the plain
weight-graded algebras w_2 / L_k of formal polynomial vector fields, and the
tensor modules (the P-module of H^1 classes, its symmetric powers, and
Omega^1 (x) Omega^2).

The P-module action is implemented in closed form,

    z^c d_t . (D1^(k) D2^(l) P d_j)
        = -(b_t + 1) * Sym(b + e_t - c) d_j  -  c_j * Sym(b + e_j - c) d_t

with b = (k, l), Sym(m) = 0 whenever a component of m is negative.  This
reproduces the four displayed special cases of the module-action
proposition (with two superscripts corrected; see h1_action_check, which
recomputes the action from scratch inside J_2 and is the arbiter).
"""

from fractions import Fraction
from math import factorial

from . import jou
from .jou import JElement, JMonomial, P_GEN, dbar, partial


class VectorField:
    """J_d-coefficient vector field: comps[i] is the coefficient of d_{i+1}."""

    __slots__ = ("d", "comps")

    def __init__(self, comps):
        self.comps = list(comps)
        self.d = self.comps[0].d

    @classmethod
    def zero(cls, d):
        return cls([JElement.zero(d) for _ in range(d)])

    @classmethod
    def single(cls, coeff, axis):
        """coeff * d_axis (1-based axis)."""
        d = coeff.d
        comps = [JElement.zero(d) for _ in range(d)]
        comps[axis - 1] = coeff
        return cls(comps)

    def is_zero(self):
        return all(c.is_zero() for c in self.comps)

    def __eq__(self, other):
        return self.d == other.d and all(
            a == b for a, b in zip(self.comps, other.comps)
        )

    def __hash__(self):
        return hash(tuple(self.comps))

    def __add__(self, other):
        return VectorField([a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other):
        return VectorField([a - b for a, b in zip(self.comps, other.comps)])

    def __neg__(self):
        return VectorField([-a for a in self.comps])

    def __mul__(self, c):
        return VectorField([a * c for a in self.comps])

    __rmul__ = __mul__

    def degrees(self):
        out = set()
        for c in self.comps:
            out.update(c.degrees())
        return sorted(out)

    def degree(self):
        degs = self.degrees()
        if len(degs) > 1:
            raise ValueError("not homogeneous")
        return degs[0] if degs else 0

    def degree_part(self, k):
        return VectorField(
            [
                JElement(
                    self.d,
                    {m: c for m, c in comp.terms.items() if m.degree == k},
                    normalize=False,
                )
                for comp in self.comps
            ]
        )

    def weights(self):
        out = set()
        for i, comp in enumerate(self.comps):
            for m in comp.terms:
                w = list(m.weight())
                w[i] -= 1
                out.add(tuple(w))
        return sorted(out)

    def weight(self):
        ws = self.weights()
        if len(ws) > 1:
            raise ValueError("not weight homogeneous")
        return ws[0] if ws else None

    def __repr__(self):
        parts = []
        for i, c in enumerate(self.comps):
            if not c.is_zero():
                parts.append(f"({c})*d{i+1}")
        return " + ".join(parts) if parts else "0"


def vf_act(T, f):
    """Action of T on f in J_d: sum_i T^i * partial(i, f)."""
    out = JElement.zero(T.d)
    for i in range(T.d):
        out = out + T.comps[i] * partial(i + 1, f)
    return out


def _bracket_hom(T, S, degT, degS):
    # sign = -(-1)^{|T||S|} for the S-partial-T term
    sign = 1 if (degT and degS) else -1
    comps = []
    for i in range(T.d):
        c = JElement.zero(T.d)
        for j in range(T.d):
            c = c + T.comps[j] * partial(j + 1, S.comps[i])
            c = c + sign * (S.comps[j] * partial(j + 1, T.comps[i]))
        comps.append(c)
    return VectorField(comps)


def bracket(T, S):
    """Graded Lie bracket on witt_d.

    [T,S]^i = sum_j T^j partial_j(S^i) - (-1)^{|T||S|} S^j partial_j(T^i),
    extended bilinearly over the degree decomposition.
    """
    out = VectorField.zero(T.d)
    for dT in (0, 1):
        Tp = T.degree_part(dT)
        if Tp.is_zero():
            continue
        for dS in (0, 1):
            Sp = S.degree_part(dS)
            if Sp.is_zero():
                continue
            out = out + _bracket_hom(Tp, Sp, dT, dS)
    return out


def dbar_vf(T):
    return VectorField([dbar(c) for c in T.comps])


def jacobian(T):
    """Matrix with entry (j,k) = partial(j+1, T^{k+1}) (0-based indices)."""
    return [
        [partial(j + 1, T.comps[k]) for k in range(T.d)] for j in range(T.d)
    ]


def divergence(T):
    out = JElement.zero(T.d)
    for i in range(T.d):
        out = out + partial(i + 1, T.comps[i])
    return out


# -- convenient field constructors (d = 2) ----------------------------------


def vf(coeff, axis):
    return VectorField.single(coeff, axis)


def euler():
    """Eu = z1 d1 + z2 d2."""
    return vf(jou.z1, 1) + vf(jou.z2, 2)


# -- formal polynomial vector fields (w_2^poly and the ideals L_k) ----------
#
# Represented lightly: a FormalVF is a dict (a1, a2, i) -> Fraction meaning
# (z1)^a1 (z2)^a2 d_i, with i in {1, 2}.  These avoid the full JElement
# machinery inside the big homology sweeps.


def fvf_weight(key):
    a1, a2, i = key
    return (a1 - (1 if i == 1 else 0), a2 - (1 if i == 2 else 0))


def fvf_bracket(k1, k2):
    """Bracket of two basis fields; returns dict key -> int coefficient.

    [z^a d_i, z^b d_j] = b_i z^{a+b-e_i} d_j - a_j z^{a+b-e_j} d_i
    """
    a1, a2, i = k1
    b1, b2, j = k2
    out = {}
    bi = (b1, b2)[i - 1]
    if bi:
        e = [a1 + b1, a2 + b2]
        e[i - 1] -= 1
        key = (e[0], e[1], j)
        out[key] = out.get(key, 0) + bi
    aj = (a1, a2)[j - 1]
    if aj:
        e = [a1 + b1, a2 + b2]
        e[j - 1] -= 1
        key = (e[0], e[1], i)
        out[key] = out.get(key, 0) - aj
    return {k: v for k, v in out.items() if v}


def fvf_basis_weight(w, min_order=0):
    """Basis keys of w_2^poly at bi-weight w; min_order = k+1 restricts to L_k.

    min_order is the minimal total z-degree of the coefficient monomial
    (0 for w_2, 2 for L_1, ...).
    """
    w1, w2 = w
    out = []
    for i in (1, 2):
        a1 = w1 + (1 if i == 1 else 0)
        a2 = w2 + (1 if i == 2 else 0)
        if a1 >= 0 and a2 >= 0 and a1 + a2 >= min_order:
            out.append((a1, a2, i))
    return out


def fvf_to_vf(key):
    a1, a2, i = key
    coeff = JElement(
        2, {JMonomial((a1, a2), (0, 0)): Fraction(1)}, normalize=False
    )
    return VectorField.single(coeff, i)


def vf_to_fvf(T):
    """Inverse of fvf_to_vf on z-polynomial fields; raises on x/P terms."""
    out = {}
    for i, comp in enumerate(T.comps):
        for m, c in comp.terms.items():
            if any(m.xexp) or m.odd:
                raise ValueError("not a formal (z-polynomial) vector field")
            key = (m.zexp[0], m.zexp[1], i + 1)
            out[key] = out.get(key, Fraction(0)) + c
    return {k: v for k, v in out.items() if v}


# -- enumeration of witt_2 weight pieces (truncated in x-degree) ------------


def witt2_basis_weight(w, deg, max_xdeg):
    """Monomial basis fields of witt_2 at bi-weight w and degree deg,
    truncated to coefficient x-degree <= max_xdeg.

    Basis elements are (JMonomial, axis) pairs in normal form.
    """
    w1, w2 = w
    out = []
    for axis in (1, 2):
        for b1 in range(max_xdeg + 1):
            for b2 in range(max_xdeg + 1 - b1):
                a1 = w1 + b1 + deg + (1 if axis == 1 else 0)
                a2 = w2 + b2 + deg + (1 if axis == 2 else 0)
                if a1 < 0 or a2 < 0:
                    continue
                if a2 and b2:
                    continue  # not normal form (z2 x2 pair)
                odd = (P_GEN,) if deg else ()
                out.append((JMonomial((a1, a2), (b1, b2), odd), axis))
    out.sort(key=lambda t: (t[0].sort_key(), t[1]))
    return out


# -- the P-module (symbols D1^(k) D2^(l) P d_j) and friends ------------------


def p_weight(sym):
    """Bi-weight of the symbol (k, l, j)."""
    k, l, j = sym
    return (-k - 1 - (1 if j == 1 else 0), -l - 1 - (1 if j == 2 else 0))


def p_basis_weight(w):
    """Symbols (k, l, j) of bi-weight w (at most two)."""
    out = []
    for j in (1, 2):
        k = -w[0] - 1 - (1 if j == 1 else 0)
        l = -w[1] - 1 - (1 if j == 2 else 0)
        if k >= 0 and l >= 0:
            out.append((k, l, j))
    return out


def p_action(field_key, sym):
    """Action of z^c d_t on the symbol (k, l, j); dict symbol -> Fraction.

    Closed form derived from the bracket in witt_2 and the z-module
    structure of H^1; validated exhaustively by h1_action_check.
    """
    c1, c2, t = field_key
    k, l, j = sym
    b = [k, l]
    c = [c1, c2]
    out = {}
    bt = b[t - 1]
    m = list(b)
    m[t - 1] += 1
    m = [m[0] - c1, m[1] - c2]
    if m[0] >= 0 and m[1] >= 0:
        key = (m[0], m[1], j)
        out[key] = out.get(key, Fraction(0)) - (bt + 1)
    cj = c[j - 1]
    if cj:
        m = list(b)
        m[j - 1] += 1
        m = [m[0] - c1, m[1] - c2]
        if m[0] >= 0 and m[1] >= 0:
            key = (m[0], m[1], t)
            out[key] = out.get(key, Fraction(0)) - cj
    return {k2: v for k2, v in out.items() if v}


def p_representative(sym):
    """witt_2 representative ((k+l+1)!/(k! l!)) (x1)^k (x2)^l P d_j."""
    k, l, j = sym
    n = Fraction(factorial(k + l + 1), factorial(k) * factorial(l))
    coeff = JElement(
        2, {JMonomial((0, 0), (k, l), (P_GEN,)): n}, normalize=False
    )
    return VectorField.single(coeff, j)


def h1_action_check(field_key, sym, slack=2):
    """Recompute the action of z^c d_t on a P-class from first principles.

    Acts by the witt_2 bracket on the representative, then reduces the
    degree-1 result modulo Im(dbar) at its weight (solving an exact linear
    system over an x-degree-truncated slice of J_2) and re-expresses the
    class in the P-basis.  Returns dict symbol -> Fraction.
    """
    from . import linalg

    T = fvf_to_vf(field_key)
    R = p_representative(sym)
    B = bracket(T, R)

    out = {}
    for axis in (1, 2):
        comp = B.comps[axis - 1]
        if comp.is_zero():
            continue
        # reduce [comp * P-part] modulo Im(dbar), weight by weight
        for w in comp.weights():
            part = comp.weight_component(w)
            # candidate class representatives at this weight
            syms = []
            wneg = (-w[0] - 1, -w[1] - 1)
            if wneg[0] >= 0 and wneg[1] >= 0:
                syms.append(wneg)  # class (x1)^k (x2)^l P
            max_x = max(
                [sum(m.xexp) for m in part.terms] + [sum(s) for s in syms] + [0]
            ) + slack
            # degree-1 monomial slice at weight w, x-degree <= max_x.
            # witt2_basis_weight enumerates coefficient monomials of fields;
            # an axis-1 field of weight (w1-1, w2) has coefficient weight w.
            deg1 = [
                m
                for (m, ax) in witt2_basis_weight((w[0] - 1, w[1]), 1, max_x)
                if ax == 1
            ]
            index = {m: r for r, m in enumerate(deg1)}
            # columns: class representatives then dbar images of degree-0 slice
            cols = []
            for s in syms:
                mono = JMonomial((0, 0), s, (P_GEN,))
                col = {}
                if mono in index:
                    col[index[mono]] = Fraction(1)
                cols.append(col)
            deg0 = [
                m
                for (m, ax) in witt2_basis_weight((w[0] - 1, w[1]), 0, max_x + 1)
                if ax == 1
            ]
            for m in deg0:
                img = dbar(JElement(2, {m: Fraction(1)}, normalize=False))
                col = {}
                for mm, cc in img.terms.items():
                    if mm in index:
                        col[index[mm]] = cc
                    else:
                        col = None
                        break
                if col is not None:
                    cols.append(col)
            mat = linalg.SparseMat.from_columns(cols, len(deg1))
            rhs = [Fraction(0)] * len(deg1)
            ok = True
            for m, c in part.terms.items():
                if m in index:
                    rhs[index[m]] = c
                else:
                    ok = False
            if not ok:
                raise RuntimeError("truncation slice too small")
            sol = linalg.solve(mat, rhs)
            if sol is None:
                raise RuntimeError("reduction failed (slice too small?)")
            for idx, s in enumerate(syms):
                if sol[idx]:
                    k, l = s
                    n = Fraction(
                        factorial(k + l + 1), factorial(k) * factorial(l)
                    )
                    key = (k, l, axis)
                    out[key] = out.get(key, Fraction(0)) + sol[idx] / n
    return {k2: v for k2, v in out.items() if v}
