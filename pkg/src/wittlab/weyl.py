"""Differential operators on the punctured disk model and the Weyl algebra.

Two isomorphic dg algebras built on the same coefficient ring:

* DiffOp -- polynomial differential operators with Jouanolou-model
  coefficients, kept in normal order (all coefficients to the left of all
  d/dz's); composition re-normal-orders with [d_i, f] = partial(i, f).
* WeylOp -- the same underlying space in symbol variables (q <-> z,
  p <-> d/dz) with the Moyal star product.

The symbol map sends an operator to its totally symmetrized symbol and is
an algebra isomorphism; on first-order operators it is T - div(T)/2.
"""

from fractions import Fraction
from math import comb, factorial

from . import jou
from .jou import JElement, JMonomial
from .witt import VectorField, divergence


def _jel(d, m, c=1):
    return JElement(d, {m: Fraction(c)}, normalize=False)


def _iter_partial(exps, e):
    """Apply partial(i, .)^exps[i] for every axis to the JElement e."""
    for i, k in enumerate(exps):
        for _ in range(k):
            e = jou.partial(i + 1, e)
            if e.is_zero():
                return e
    return e


class _OpBase:
    """Shared container: terms maps (JMonomial, p-exponents) -> Fraction."""

    __slots__ = ("d", "terms")

    def __init__(self, d, terms=None):
        self.d = d
        out = {}
        if terms:
            for (m, e), c in terms.items():
                c = Fraction(c)
                if not c:
                    continue
                key = (m, tuple(e))
                v = out.get(key, Fraction(0)) + c
                if v:
                    out[key] = v
                elif key in out:
                    del out[key]
        self.terms = out

    @classmethod
    def zero(cls, d):
        return cls(d)

    @classmethod
    def const(cls, d, c):
        m = JMonomial((0,) * d, (0,) * d)
        return cls(d, {(m, (0,) * d): Fraction(c)})

    @classmethod
    def from_coeff(cls, coeff, pexp=None):
        """Multiplication operator (or coeff * p^pexp) from a JElement."""
        e = tuple(pexp) if pexp is not None else (0,) * coeff.d
        return cls(coeff.d, {(m, e): c for m, c in coeff.terms.items()})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, self.__class__)
            and self.d == other.d
            and self.terms == other.terms
        )

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.__class__.const(self.d, other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, Fraction(0)) + c
            if v:
                out[k] = v
            elif k in out:
                del out[k]
        res = self.__class__(self.d)
        res.terms = out
        return res

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        res = self.__class__(self.d)
        res.terms = {k: -c for k, c in self.terms.items()}
        return res

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.__class__.const(self.d, other)
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        res = self.__class__(self.d)
        if c:
            res.terms = {k: c * v for k, v in self.terms.items()}
        return res

    def degrees(self):
        return sorted({m.degree for (m, _e) in self.terms})

    def degree(self):
        degs = self.degrees()
        if len(degs) != 1:
            raise ValueError("inhomogeneous operator")
        return degs[0]

    def degree_part(self, k):
        res = self.__class__(self.d)
        res.terms = {
            (m, e): c for (m, e), c in self.terms.items() if m.degree == k
        }
        return res

    def weights(self):
        out = set()
        for (m, e) in self.terms:
            w = m.weight()
            out.add(tuple(w[i] - e[i] for i in range(self.d)))
        return sorted(out)

    def coefficient(self, pexp):
        """The JElement multiplying the given p/derivative exponents."""
        pexp = tuple(pexp)
        out = JElement.zero(self.d)
        for (m, e), c in self.terms.items():
            if e == pexp:
                out = out + _jel(self.d, m, c)
        return out

    def _sym(self):
        raise NotImplementedError

    def __repr__(self):
        if not self.terms:
            return "0"
        sym = self._sym()
        parts = []
        for (m, e) in sorted(
            self.terms, key=lambda k: (k[1], JMonomial.sort_key(k[0]))
        ):
            c = self.terms[(m, e)]
            body = jou.jm_str(m)
            ds = " ".join(
                f"{sym}{i + 1}" + (f"^{k}" if k > 1 else "")
                for i, k in enumerate(e)
                if k
            )
            txt = body if body != "1" or not ds else ""
            if txt and ds:
                txt = f"{txt} {ds}"
            elif ds:
                txt = ds
            elif not txt:
                txt = "1"
            parts.append(f"({c})*{txt}" if c != 1 else txt)
        return " + ".join(parts)


class DiffOp(_OpBase):
    """Normal-ordered differential operator: sum of f(z,x,P) * d^e terms."""

    def _sym(self):
        return "d"


class WeylOp(_OpBase):
    """Weyl-algebra element: sum of f(q,x,P) * p^e terms (Moyal product)."""

    def _sym(self):
        return "p"


def dop(text):
    """Parse the operator grammar "z1^a z2^b x1^c x2^e [P] d1^m d2^n"."""
    d = 2
    zexp = [0, 0]
    xexp = [0, 0]
    pexp = [0, 0]
    hasP = False
    for tok in text.split():
        if tok == "P":
            hasP = True
            continue
        base, _, exp = tok.partition("^")
        k = int(exp) if exp else 1
        kind, axis = base[0], int(base[1:])
        if kind == "z":
            zexp[axis - 1] += k
        elif kind == "x":
            xexp[axis - 1] += k
        elif kind == "d":
            pexp[axis - 1] += k
        else:
            raise ValueError(f"bad token {tok!r}")
    m = JMonomial(tuple(zexp), tuple(xexp), (jou.P_GEN,) if hasP else ())
    return DiffOp(d, {(m, tuple(pexp)): Fraction(1)})


def dop_compose(D1, D2):
    """Composition of differential operators, re-normal-ordered.

    (f d^a)(g d^b) = sum_{al <= a} prod_i C(a_i, al_i)
                     f * partial^al(g) d^(a - al + b).
    """
    if D1.d != D2.d:
        raise ValueError("dimension mismatch")
    d = D1.d
    out = DiffOp.zero(d)
    for (m1, a), c1 in D1.terms.items():
        f1 = _jel(d, m1, c1)
        for (m2, b), c2 in D2.terms.items():
            # enumerate al <= a componentwise
            alphas = [()]
            for ai in a:
                alphas = [al + (j,) for al in alphas for j in range(ai + 1)]
            for al in alphas:
                g = _iter_partial(al, _jel(d, m2, c2))
                if g.is_zero():
                    continue
                mult = 1
                for ai, ali in zip(a, al):
                    mult *= comb(ai, ali)
                coeff = f1 * g * Fraction(mult)
                e = tuple(a[i] - al[i] + b[i] for i in range(d))
                out = out + DiffOp.from_coeff(coeff, e)
    return out


def dop_bracket(D1, D2):
    """Graded commutator; operator parity is the coefficient parity."""
    s = Fraction(-1) if (D1.degree() % 2) and (D2.degree() % 2) else Fraction(1)
    return dop_compose(D1, D2) + dop_compose(D2, D1).scale(-s)


def dop_dbar(D):
    """Coefficientwise Dolbeault differential (the d/dz's are dbar-closed)."""
    out = DiffOp.zero(D.d)
    for (m, e), c in D.terms.items():
        img = jou.dbar(_jel(D.d, m, c))
        if not img.is_zero():
            out = out + DiffOp.from_coeff(img, e)
    return out


def vf_to_dop(T):
    """The embedding of vector fields as first-order operators."""
    d = len(T.comps)
    out = DiffOp.zero(d)
    for i, comp in enumerate(T.comps):
        e = [0] * d
        e[i] = 1
        out = out + DiffOp.from_coeff(comp, e)
    return out


def moyal(A, B):
    """Moyal star product on Weyl symbols.

    m o exp((1/2)(d_p (x) d_q  -  d_q (x) d_p)) applied to A (x) B; the
    expansion is finite because symbols are polynomial in p.
    """
    if A.d != B.d:
        raise ValueError("dimension mismatch")
    d = A.d
    out = WeylOp.zero(d)
    for (m1, a), c1 in A.terms.items():
        for (m2, b), c2 in B.terms.items():
            # al: d_p on A / d_q on B, be: d_q on A / d_p on B
            alphas = [()]
            for ai in a:
                alphas = [al + (j,) for al in alphas for j in range(ai + 1)]
            betas = [()]
            for bi in b:
                betas = [be + (j,) for be in betas for j in range(bi + 1)]
            for al in alphas:
                ca = Fraction(1)
                for ai, ali in zip(a, al):
                    ca *= Fraction(factorial(ai), factorial(ai - ali) * factorial(ali))
                ca *= Fraction(1, 2 ** sum(al))
                g2 = _iter_partial(al, _jel(d, m2, c2))
                if g2.is_zero():
                    continue
                for be in betas:
                    cb = Fraction(1)
                    for bi, bei in zip(b, be):
                        cb *= Fraction(
                            factorial(bi), factorial(bi - bei) * factorial(bei)
                        )
                    cb *= Fraction((-1) ** sum(be), 2 ** sum(be))
                    g1 = _iter_partial(be, _jel(d, m1, c1))
                    if g1.is_zero():
                        continue
                    coeff = g1 * g2 * (ca * cb)
                    e = tuple(
                        a[i] - al[i] + b[i] - be[i] for i in range(d)
                    )
                    out = out + WeylOp.from_coeff(coeff, e)
    return out


def moyal_bracket(A, B):
    s = Fraction(-1) if (A.degree() % 2) and (B.degree() % 2) else Fraction(1)
    return moyal(A, B) + moyal(B, A).scale(-s)


def symbol(D):
    """The symbol isomorphism DiffOp -> WeylOp.

    sigma(f d^e) = exp(-(1/2) sum_s d_{p_s} d_{q_s}) (f(q) p^e), expanded
    termwise; on a vector field this is T - div(T)/2.
    """
    d = D.d
    out = WeylOp.zero(d)
    for (m, e), c in D.terms.items():
        gammas = [()]
        for ei in e:
            gammas = [g + (j,) for g in gammas for j in range(ei + 1)]
        for ga in gammas:
            coeff = _iter_partial(ga, _jel(d, m, c))
            if coeff.is_zero():
                continue
            mult = Fraction((-1) ** sum(ga), 2 ** sum(ga))
            for ei, gi in zip(e, ga):
                mult *= Fraction(factorial(ei), factorial(ei - gi) * factorial(gi))
            pe = tuple(e[i] - ga[i] for i in range(d))
            out = out + WeylOp.from_coeff(coeff * mult, pe)
    return out


def vf_symbol(T):
    """Direct first-order symbol T - div(T)/2, as a WeylOp (oracle form)."""
    out = symbol(vf_to_dop(T))
    return out


def symbol_linear_identity(T):
    """sigma(T) - (T(q,p) - div(T)/2); zero for every vector field."""
    d = len(T.comps)
    lin = WeylOp.zero(d)
    for i, comp in enumerate(T.comps):
        e = [0] * d
        e[i] = 1
        lin = lin + WeylOp.from_coeff(comp, e)
    lin = lin + WeylOp.from_coeff(divergence(T) * Fraction(-1, 2))
    return symbol(vf_to_dop(T)) - lin


# -- displayed reduction identities and the generator's cycle property -------


def _mono_op(zexp, xexp, pexp, withP=False):
    m = JMonomial(tuple(zexp), tuple(xexp), (jou.P_GEN,) if withP else ())
    return DiffOp(2, {(m, tuple(pexp)): Fraction(1)})


def diffops_identity_suite(max_exp=4):
    """Verify the commutator reduction identities and the generator cycle.

    Returns a list of (name, ok) pairs covering:
      * z^M d^l = 1/(l1+1) [z^M d^(l1+1,l2), z1]   (and the axis-2 mirror)
      * P d^(m1-1, m2-1) = 1/m1 [P, z1 d^(m1, m2-1)]
      * z^l d^r = -1/(r1+1) [z1, z^l d^(r1+1, r2)]
      * (z2)^k d2^(k-1) = -1/k [z2, (z2)^k d2^k]
      * P wedge z1 wedge z2 is a cycle: all pairwise brackets and all
        dbar images vanish.
    """
    checks = []

    ok = True
    for M1 in range(max_exp + 1):
        for M2 in range(max_exp + 1):
            for l1 in range(max_exp):
                for l2 in range(max_exp + 1):
                    lhs = _mono_op((M1, M2), (0, 0), (l1, l2))
                    A = _mono_op((M1, M2), (0, 0), (l1 + 1, l2))
                    z1 = dop("z1")
                    rhs = dop_bracket(A, z1).scale(Fraction(1, l1 + 1))
                    if lhs != rhs:
                        ok = False
    checks.append(("ladder raise against z1", ok))

    ok = True
    for m1 in range(1, max_exp + 1):
        for m2 in range(1, max_exp + 1):
            lhs = _mono_op((0, 0), (0, 0), (m1 - 1, m2 - 1), withP=True)
            A = _mono_op((1, 0), (0, 0), (m1, m2 - 1))
            rhs = dop_bracket(dop("P"), A).scale(Fraction(1, m1))
            if lhs != rhs:
                ok = False
    checks.append(("P against z1-weighted raise", ok))

    ok = True
    for l1 in range(max_exp + 1):
        for l2 in range(max_exp + 1):
            for r1 in range(max_exp):
                for r2 in range(max_exp + 1):
                    lhs = _mono_op((l1, l2), (0, 0), (r1, r2))
                    A = _mono_op((l1, l2), (0, 0), (r1 + 1, r2))
                    rhs = dop_bracket(dop("z1"), A).scale(Fraction(-1, r1 + 1))
                    if lhs != rhs:
                        ok = False
    checks.append(("z1 lowers the d1 count", ok))

    ok = True
    for k in range(1, max_exp + 1):
        lhs = _mono_op((0, k), (0, 0), (0, k - 1))
        A = _mono_op((0, k), (0, 0), (0, k))
        rhs = dop_bracket(dop("z2"), A).scale(Fraction(-1, k))
        if lhs != rhs:
            ok = False
    checks.append(("z2 lowers the d2 count", ok))

    gens = (dop("P"), dop("z1"), dop("z2"))
    ok = all(
        dop_bracket(gens[i], gens[j]).is_zero()
        for i in range(3)
        for j in range(i + 1, 3)
    ) and all(dop_dbar(g).is_zero() for g in gens)
    checks.append(("P wedge z1 wedge z2 is a total cycle", ok))

    return checks
