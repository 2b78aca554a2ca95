"""Chevalley-Eilenberg chains on witt_2 (and its plain subalgebras).

A chain lives in the graded symmetric algebra of g[1]: letters are monomial
vector fields (JMonomial, axis); a letter of cohomological degree q has
shifted parity (q+1) mod 2, so ordinary (degree-0) fields anticommute and
P-coefficient fields commute.  Words are stored canonically sorted with the
Koszul sign folded into the coefficient.

The boundary maps:
    ce_boundary: d(x_1 ^...^ x_q) = sum_{i<j} -K(i,j) [x_i,x_j] ^ rest
        (K(i,j) = Koszul sign of extracting x_i, x_j to the front; for
        ordinary fields this is the classical sum (-1)^{i+j} [x_i,x_j]^rest)
    total_boundary = dbar-extension + ce_boundary, square zero on witt_2.

Also hosts the explicit chains appearing in the verification suites
(the four bracket families with their correctors, the closed chains X and
Xt, and the alpha/beta/gamma/eta chains of the coefficient-cohomology
computation).
"""

from fractions import Fraction

from . import jou, witt
from .jou import JElement, JMonomial, P_GEN
from .witt import VectorField, bracket, dbar_vf, vf


def letter_parity(letter):
    """Shifted parity: 1 (anticommuting) for even fields, 0 for P-fields."""
    mono, _axis = letter
    return (mono.degree + 1) % 2


def letter_key(letter):
    mono, axis = letter
    return (mono.sort_key(), axis)


def canonical_word(letters):
    """Sort letters, returning (sign, tuple) or (0, None) for a square."""
    letters = list(letters)
    sign = 1
    # insertion sort, tracking Koszul swaps of adjacent letters
    for i in range(1, len(letters)):
        j = i
        while j > 0 and letter_key(letters[j]) < letter_key(letters[j - 1]):
            if letter_parity(letters[j]) and letter_parity(letters[j - 1]):
                sign = -sign
            letters[j], letters[j - 1] = letters[j - 1], letters[j]
            j -= 1
    for a, b in zip(letters, letters[1:]):
        if a == b and letter_parity(a):
            return 0, None
    return sign, tuple(letters)


class CEChain:
    """Linear combination of canonical wedge words of witt_2 letters."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for word, c in terms.items():
                c = Fraction(c)
                if c:
                    self.terms[word] = c

    @classmethod
    def from_words(cls, raw):
        """raw: iterable of (letters, coefficient); canonicalizes."""
        out = {}
        for letters, c in raw:
            sign, word = canonical_word(letters)
            if sign == 0:
                continue
            v = out.get(word, Fraction(0)) + sign * c
            if v:
                out[word] = v
            elif word in out:
                del out[word]
        return cls(out)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = out.get(w, Fraction(0)) + c
            if v:
                out[w] = v
            elif w in out:
                del out[w]
        return CEChain(out)

    def __sub__(self, other):
        return self + (-1) * other

    def __mul__(self, c):
        return CEChain({w: v * c for w, v in self.terms.items()})

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def degrees(self):
        """Total degrees sum(|x_i|) - length occurring in this chain."""
        return sorted(
            {
                sum(m.degree for m, _ in w) - len(w)
                for w in self.terms
            }
        )

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for w in sorted(self.terms, key=lambda w: [letter_key(l) for l in w]):
            c = self.terms[w]
            ws = "^".join(
                f"{jou.jm_str(m)}*d{ax}" for m, ax in w
            ) or "()"
            bits.append(f"{c} * {ws}")
        return " + ".join(bits)


def field_letters(T):
    """Expand a VectorField into (letter, coefficient) pairs."""
    out = []
    for axis in (1, 2):
        comp = T.comps[axis - 1]
        for m, c in comp.terms.items():
            out.append(((m, axis), c))
    return out


def wedge(*fields):
    """The wedge of VectorFields as a canonical CEChain."""
    combos = [((), Fraction(1))]
    for T in fields:
        letters = field_letters(T)
        combos = [
            (word + (l,), c * lc) for word, c in combos for l, lc in letters
        ]
    return CEChain.from_words(combos)


def letter_field(letter):
    mono, axis = letter
    return VectorField.single(
        JElement(2, {mono: Fraction(1)}, normalize=False), axis
    )


def _extract_sign(parities, i, j):
    """Koszul sign of moving letters i then j (i<j) to the front."""
    s = 1
    pi, pj = parities[i], parities[j]
    for p in range(i):
        if pi and parities[p]:
            s = -s
    for p in range(j):
        if p == i:
            continue
        if pj and parities[p]:
            s = -s
    return s


def ce_boundary(chain):
    """The Chevalley-Eilenberg boundary (trivial coefficients)."""
    raw = []
    for word, c in chain.terms.items():
        parities = [letter_parity(l) for l in word]
        n = len(word)
        degs = [m.degree for m, _ in word]
        for i in range(n):
            for j in range(i + 1, n):
                # -K(i,j) times the desuspension sign (-1)^{|x_i|}
                s = -_extract_sign(parities, i, j)
                if degs[i] % 2:
                    s = -s
                br = bracket(letter_field(word[i]), letter_field(word[j]))
                if br.is_zero():
                    continue
                rest = word[:i] + word[i + 1 : j] + word[j + 1 :]
                for l, lc in field_letters(br):
                    raw.append(((l,) + rest, s * c * lc))
    return CEChain.from_words(raw)


def dbar_chain(chain):
    """dbar extended to wedge words as an odd derivation."""
    raw = []
    for word, c in chain.terms.items():
        pref = 1
        for i, letter in enumerate(word):
            img = dbar_vf(letter_field(letter))
            if not img.is_zero():
                for l, lc in field_letters(img):
                    raw.append(
                        (word[:i] + (l,) + word[i + 1 :], pref * c * lc)
                    )
            # passing the odd operator dbar over letter i
            if letter_parity(letter):
                pref = -pref
    return CEChain.from_words(raw)


def total_boundary(chain):
    """(dbar + d^Lie) on chains over witt_2; square zero."""
    return dbar_chain(chain) + ce_boundary(chain)


class CECochain:
    """Multilinear graded-alternating functional on tuples of VectorFields."""

    __slots__ = ("arity", "fn", "name")

    def __init__(self, arity, fn, name=""):
        self.arity = arity
        self.fn = fn
        self.name = name

    def __call__(self, *fields):
        return self.fn(*fields)


def evaluate(phi, chain):
    """Pair a cochain with a chain: sum coeff * phi(canonical word)."""
    total = Fraction(0)
    for word, c in chain.terms.items():
        if len(word) != phi.arity:
            continue
        total += c * phi(*[letter_field(l) for l in word])
    return total


# ---------------------------------------------------------------------------
# The explicit chains of the verification suites.
# ---------------------------------------------------------------------------


def _zmono(a1, a2):
    return JElement(2, {JMonomial((a1, a2), (0, 0)): Fraction(1)}, normalize=False)


def _mono(a1, a2, b1, b2, p=False):
    odd = (P_GEN,) if p else ()
    return JElement(2, {JMonomial((a1, a2), (b1, b2), odd): Fraction(1)}, normalize=False)


def paper_chains():
    """All named fields and chains used by the bracket/pairing suites.

    Returns a dict with the four families (X1..X3 and the correctors Y12,
    Y13 per family), the top wedges XX/XXt, the closed chains X/Xt, and
    the alpha/beta/gamma/eta chains.
    """
    z1, z2 = jou.z1, jou.z2
    x1v, x2v = jou.x1, jou.x2
    Pv = jou.P

    fam = {}
    fam["I"] = {
        "X1": vf(Pv, 1),
        "X2": vf(z1 * z1 * z1, 1),
        "X3": vf(z2 * z2, 2),
        "Y12": vf(4 * z1 * x2v + z1 * z1 * x1v * x2v, 1),
        "Y13": vf(-(z2 * x1v * x2v) - x1v, 1),
    }
    fam["II"] = {
        "X1": vf(Pv, 1),
        "X2": vf(z1 * z1, 1),
        "X3": vf(z1 * z2 * z2, 2),
        "Y12": vf(3 * x2v + z1 * x1v * x2v, 1),
        "Y13": vf(-(z2 * x1v), 2) + vf(z2 * z2 * x2v * x2v, 1),
    }
    fam["III"] = {
        "X1": vf(Pv, 1),
        "X2": vf(z1 * z2, 1),
        "X3": vf(z1 * z1 * z2, 2),
        "Y12": vf(-x1v - z1 * x1v * x1v, 1),
        "Y13": vf(2 * z2 * x2v, 2) + vf(z1 * z2 * x2v * x2v, 1),
    }
    fam["IV"] = {
        "X1": vf(Pv, 1),
        "X2": vf(z1 * z1 * z2, 1),
        "X3": vf(z1 * z2, 2),
        "Y12": vf(2 * x2v * z2 - z1 * z1 * x1v * x1v, 1),
        "Y13": vf(-x1v, 2) + vf(z2 * x2v * x2v, 1),
    }

    out = {"fam": fam}

    def triple(f):
        return wedge(f["X1"], f["X2"], f["X3"])

    def corrector(f):
        return wedge(f["Y12"], f["X3"]) - wedge(f["Y13"], f["X2"])

    out["XX"] = triple(fam["I"])
    out["XXt"] = triple(fam["II"]) - triple(fam["III"]) + triple(fam["IV"])

    d1_z1sq = wedge(vf(jou.one, 1), vf(z1 * z1, 1))
    d2_z2sq = wedge(vf(jou.one, 2), vf(z2 * z2, 2))

    out["X"] = out["XX"] - corrector(fam["I"]) + 2 * d1_z1sq
    # The quadratic corrector closing Xt: the linear residual of the
    # II - III + IV combination is z1 d1 + 5 z2 d2, and each d_i ^ (z^i)^2 d_i
    # has total boundary -2 z^i d_i.
    out["Xt"] = (
        out["XXt"]
        - corrector(fam["II"])
        + corrector(fam["III"])
        - corrector(fam["IV"])
        + Fraction(1, 2) * d1_z1sq
        + Fraction(5, 2) * d2_z2sq
    )

    # -- the L_1 chains of the coefficient-cohomology computation ---------
    Eu = witt.euler()

    def zvf(a1, a2, i):
        return vf(_zmono(a1, a2), i)

    z1Eu = zvf(2, 0, 1) + zvf(1, 1, 2)
    z2Eu = zvf(1, 1, 1) + zvf(0, 2, 2)
    z1z2Eu = zvf(2, 1, 1) + zvf(1, 2, 2)
    z1sqEu = zvf(3, 0, 1) + zvf(2, 1, 2)
    z2sqEu = zvf(1, 2, 1) + zvf(0, 3, 2)

    out["alpha"] = wedge(z1Eu, z1z2Eu) - wedge(z2Eu, z1sqEu)

    # recurring weight-1 combinations
    h0 = zvf(2, 0, 2)                      # (z1)^2 d2
    h1 = zvf(2, 0, 1) - 2 * zvf(1, 1, 2)   # (z1)^2 d1 - 2 z1 z2 d2
    h2 = 2 * zvf(1, 1, 1) - zvf(0, 2, 2)   # 2 z1 z2 d1 - (z2)^2 d2

    out["beta"] = (
        3 * wedge(h0, z2sqEu)
        + 2 * wedge(h1, z1z2Eu)
        - wedge(h2, z1sqEu)
    )

    # gamma is the normalized highest-weight vector of the remaining
    # irreducible summand of 2-chains at this weight (lowering-operator
    # ladder from (z1)^2 d2 and (z1)^3 d2); it is a cycle, unlike some
    # printed variants of its coefficients.
    out["gamma"] = (
        wedge(h0, 3 * zvf(1, 2, 1) - zvf(0, 3, 2))
        + 2 * wedge(h1, zvf(2, 1, 1) - zvf(1, 2, 2))
        - wedge(h2, zvf(3, 0, 1) - 3 * zvf(2, 1, 2))
        - 4 * wedge(zvf(0, 2, 1), zvf(3, 0, 2))
    )

    # overall sign fixed by the identity ce_boundary(eta) = (-beta+gamma)/4
    out["eta"] = -(
        wedge(z1Eu, h0, zvf(0, 2, 1))
        + Fraction(1, 3) * wedge(z1Eu, h1, h2)
    )

    out["Eu"] = Eu
    return out


def lemma_identities():
    """The 10 displayed bracket identities; list of (id, holds) pairs."""
    ch = paper_chains()
    fam = ch["fam"]
    out = []

    # part 1: the [X2, X3] combination identities
    b_I = bracket(fam["I"]["X2"], fam["I"]["X3"])
    out.append(("[X2_I,X3_I]=0", b_I.is_zero()))
    comb = (
        bracket(fam["II"]["X2"], fam["II"]["X3"])
        - bracket(fam["III"]["X2"], fam["III"]["X3"])
        + bracket(fam["IV"]["X2"], fam["IV"]["X3"])
    )
    out.append(("[X2,X3]_II-III+IV=0", comb.is_zero()))

    # part 2: the eight dbar-exactness identities [X1, Xi] = dbar(Y1i)
    for name in ("I", "II", "III", "IV"):
        f = fam[name]
        for i, Y in (("2", f["Y12"]), ("3", f["Y13"])):
            lhs = bracket(f["X1"], f["X" + i])
            rhs = dbar_vf(Y)
            out.append((f"[X1_{name},X{i}_{name}]=dbar(Y1{i}_{name})", lhs == rhs))
    return out
