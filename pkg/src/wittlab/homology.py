"""Weight-graded Lie algebra homology of w_2^poly and L_1 with coefficients.

Chains are M (x) Lambda^q(g) where g is spanned by the light field keys
(a1, a2, i) of wittlie and M is one of:

    trivial  -- one generator of bi-weight (0, 0),
    P        -- the module of H^1 classes (symbols (k, l, j)),
    S2P      -- its symmetric square (sorted pairs of symbols).

P doubles as the dual of Omega^1 (x) Omega^2: the dual-module action
  z^c d_t . e*_{b,m} = -(b_t+1) e*_{b-c+e_t, m} - c_m e*_{b-c+e_m, t}
is the same closed form as the H^1 action, so cohomology with
Omega^1 (x) Omega^2 coefficients is computed as homology with P
coefficients (block by block, dimensions agree by duality).

The boundary is the standard homological one,

  d(m (x) x_1^...^x_q) = sum_i (-1)^(i+1) x_i.m (x) rest
                       + sum_{i<j} (-1)^(i+j) m (x) [x_i,x_j] ^ rest,

assembled per bi-weight block and fed to the exact linear algebra in
linalg.  Infinite modules (P, S2P) are truncated by module scaling depth;
results carry an "ok" / "inconclusive" status from a depth-stability
check, never a silent zero.
"""

from fractions import Fraction
from itertools import combinations_with_replacement

from . import linalg
from .witt import fvf_weight, fvf_bracket, p_weight, p_action


# -- modules -----------------------------------------------------------------


class TrivialModule:
    name = "trivial"
    finite = True

    def keys_at_weight(self, w):
        return [()] if w == (0, 0) else []

    def weight(self, key):
        return (0, 0)

    def act(self, field_key, key):
        return {}


def _symbols_with_scaling(s):
    """P-symbols (k, l, j) whose weight scaling is -s (s = k + l + 3)."""
    out = []
    for j in (1, 2):
        for k in range(s - 2):
            l = s - 3 - k
            if l >= 0:
                out.append((k, l, j))
    return out


class PModule:
    name = "P"
    finite = False

    def keys_at_weight(self, w):
        from .witt import p_basis_weight

        return p_basis_weight(w)

    def weight(self, key):
        return p_weight(key)

    def act(self, field_key, key):
        return p_action(field_key, key)

    def keys_with_depth(self, depth):
        """All symbols of weight scaling >= -depth."""
        out = []
        for s in range(3, depth + 1):
            out.extend(_symbols_with_scaling(s))
        return out


class S2PModule:
    name = "S2P"
    finite = False

    def weight(self, key):
        w1 = p_weight(key[0])
        w2 = p_weight(key[1])
        return (w1[0] + w2[0], w1[1] + w2[1])

    def act(self, field_key, key):
        out = {}
        a, b = key
        for s, c in p_action(field_key, a).items():
            k2 = tuple(sorted((s, b)))
            out[k2] = out.get(k2, Fraction(0)) + c
        for s, c in p_action(field_key, b).items():
            k2 = tuple(sorted((a, s)))
            out[k2] = out.get(k2, Fraction(0)) + c
        return {k: v for k, v in out.items() if v}

    def keys_with_depth(self, depth):
        syms = []
        for s in range(3, depth - 2):
            syms.extend(_symbols_with_scaling(s))
        out = []
        for a, b in combinations_with_replacement(sorted(syms), 2):
            w = self.weight((a, b))
            if -(w[0] + w[1]) <= depth:
                out.append((a, b))
        return out

    def keys_at_weight(self, w):
        return [k for k in self.keys_with_depth(-(w[0] + w[1])) if self.weight(k) == w]


MODULES = {"trivial": TrivialModule(), "P": PModule(), "S2P": S2PModule()}

# minimal coefficient z-degree and minimal field scaling weight per algebra
ALGEBRAS = {"w2": (0, -1), "L1": (2, 1)}


# -- chain bases -------------------------------------------------------------


def _fields_in_box(min_order, smin, smax, c1max, c2max):
    """All field keys with scaling in [smin, smax] and components <= bounds."""
    out = []
    for i in (1, 2):
        for a1 in range(0, c1max + 2):
            for a2 in range(0, c2max + 2):
                if a1 + a2 < min_order:
                    continue
                key = (a1, a2, i)
                w = fvf_weight(key)
                if smin <= w[0] + w[1] <= smax and w[0] <= c1max and w[1] <= c2max:
                    out.append(key)
    out.sort()
    return out


def field_words(q, target, min_order, smin):
    """Strictly increasing q-words of field keys with total bi-weight target."""
    t1, t2 = target
    ts = t1 + t2
    if q == 0:
        return [()] if target == (0, 0) else []
    smax = ts - (q - 1) * smin
    pool = _fields_in_box(min_order, smin, smax, t1 + (q - 1), t2 + (q - 1))
    weights = [fvf_weight(k) for k in pool]
    out = []

    def rec(start, left, w1, w2):
        k = len(left)
        if k == 0:
            if (w1, w2) == (0, 0):
                out.append(tuple(left_stack))
            return
        for idx in range(start, len(pool) - k + 1):
            fw = weights[idx]
            r1, r2 = w1 - fw[0], w2 - fw[1]
            # remaining k-1 fields have components >= -1 and scaling >= smin
            if r1 + r2 < (k - 1) * smin or r1 < -(k - 1) or r2 < -(k - 1):
                continue
            left_stack.append(pool[idx])
            rec(idx + 1, left[1:], r1, r2)
            left_stack.pop()

    left_stack = []
    rec(0, list(range(q)), t1, t2)
    return out


def chain_basis(q, weight, module, min_order, smin, depth=None):
    """Basis (module key, word) of C_q at total bi-weight `weight`.

    depth bounds the module scaling (-(m1+m2) <= depth) for infinite modules.
    """
    out = []
    if module.finite:
        mkey_list = [((), (0, 0))]
    else:
        if depth is None:
            raise ValueError("depth required for infinite module")
        mkey_list = [(m, module.weight(m)) for m in module.keys_with_depth(depth)]
    for mkey, mw in mkey_list:
        rest = (weight[0] - mw[0], weight[1] - mw[1])
        for word in field_words(q, rest, min_order, smin):
            out.append((mkey, word))
    out.sort()
    return out


def boundary_terms(mkey, word, module):
    """Boundary of a basis chain as dict (module key, sorted word) -> coeff."""
    out = {}

    def add(m, w, c):
        # canonically sort w, folding the permutation sign into c
        w = list(w)
        sign = 1
        for i in range(1, len(w)):
            j = i
            while j > 0 and w[j] < w[j - 1]:
                w[j], w[j - 1] = w[j - 1], w[j]
                sign = -sign
                j -= 1
        for a, b in zip(w, w[1:]):
            if a == b:
                return
        key = (m, tuple(w))
        v = out.get(key, Fraction(0)) + sign * c
        if v:
            out[key] = v
        elif key in out:
            del out[key]

    n = len(word)
    for i in range(n):
        acted = module.act(word[i], mkey)
        if acted:
            rest = word[:i] + word[i + 1 :]
            s = Fraction((-1) ** i)  # (-1)^(i+1) with 1-based i
            s = -s
            for m2, c in acted.items():
                add(m2, rest, s * c)
    for i in range(n):
        for j in range(i + 1, n):
            br = fvf_bracket(word[i], word[j])
            if not br:
                continue
            rest = word[:i] + word[i + 1 : j] + word[j + 1 :]
            s = Fraction((-1) ** (i + j))  # 0-based == (-1)^(i+j) 1-based
            for fk, c in br.items():
                add(mkey, (fk,) + rest, s * c)
    return out


def boundary_matrix(basis_q, basis_qm1, module):
    """Sparse matrix of d: C_q -> C_{q-1} on the given bases.

    Raises if a boundary term escapes basis_qm1 (the caller must pass a
    receiving basis that contains the full image).
    """
    index = {bc: r for r, bc in enumerate(basis_qm1)}
    cols = []
    for mkey, word in basis_q:
        col = {}
        for key, c in boundary_terms(mkey, word, module).items():
            if key not in index:
                raise ValueError(f"boundary term {key} outside receiving basis")
            col[index[key]] = c
        cols.append(col)
    return linalg.SparseMat.from_columns(cols, len(basis_qm1))


# -- homology dimensions -----------------------------------------------------


def _block_dim(q, weight, module, min_order, smin, depth):
    """dim H_q at one bi-weight block (with module depth bound if needed).

    For infinite modules the cycle space is honest (kernel against the full
    receiving space) while boundaries come from a depth-reduced C_{q+1}, so
    the returned value can only overestimate the block dimension.
    """
    if module.finite:
        Cq = chain_basis(q, weight, module, min_order, smin)
        if not Cq:
            return 0
        Cqm1 = chain_basis(q - 1, weight, module, min_order, smin)
        Cqp1 = chain_basis(q + 1, weight, module, min_order, smin)
        # d^2 = 0 (verified separately) makes Im(d_{q+1}) <= Ker(d_q), so
        # dim H_q = dim C_q - rank(d_q) - rank(d_{q+1}).
        dim = len(Cq)
        if Cqm1:
            dim -= linalg.rank_fast(boundary_matrix(Cq, Cqm1, module))
        if Cqp1:
            dim -= linalg.rank_fast(boundary_matrix(Cqp1, Cq, module))
        return dim
    # Infinite module: cycles supported at module depth <= depth, compared
    # against the boundaries of a C_{q+1} truncated at the same depth.
    # Since d^2 = 0, every boundary landing entirely inside the depth
    # window is automatically a cycle there, so
    #
    #   dim = dim ker(d_q) - (rank d_{q+1} - rank d_{q+1}^out)
    #
    # where d^out keeps only the rows outside the window.  rank d_{q+1}
    # is computed modulo a large fixed prime -- a certified lower bound
    # for the rational rank -- while the other two terms are exact, so
    # the value can only overestimate the truncated block dimension and
    # a result of 0 is an exact vanishing certificate.
    Cq = chain_basis(q, weight, module, min_order, smin, depth)
    if not Cq:
        return 0
    Cqm1 = chain_basis(q - 1, weight, module, min_order, smin, depth + 1)
    mat_q = boundary_matrix(Cq, Cqm1, module)
    ker_dim = len(Cq) - linalg.rank_fast(mat_q)
    if ker_dim == 0:
        return 0
    Cqp1 = chain_basis(q + 1, weight, module, min_order, smin, depth)
    if not Cqp1:
        return ker_dim
    Cq_big = chain_basis(q, weight, module, min_order, smin, depth + 1)
    bnd = boundary_matrix(Cqp1, Cq_big, module)
    cols = [dict() for _ in range(bnd.cols)]
    for (r, c), v in bnd.entries.items():
        cols[c][r] = v
    out_rows = set()
    for i, (mkey, _) in enumerate(Cq_big):
        mw = module.weight(mkey)
        if -(mw[0] + mw[1]) > depth:
            out_rows.add(i)
    cols_out = []
    for col in cols:
        oc = {r: v for r, v in col.items() if r in out_rows}
        if oc:
            cols_out.append(oc)
    rank_b = linalg.rank_cols_mod(cols)
    rank_out = linalg.rank_cols_exact(cols_out)
    return ker_dim - (rank_b - rank_out)


def _blocks_for_scaling(q, s, module, min_order, smin, depth):
    """Feasible bi-weight blocks (w1, w2) with w1 + w2 = s."""
    qq = q + 1  # boundaries come from C_{q+1}
    if module.finite:
        # each field weight component is >= -1, so w1 in [-q-1, s+q+1]
        return [(w1, s - w1) for w1 in range(-qq, s + qq + 1)]
    # module weight components are <= -1 and scaling >= -depth;
    # field components >= -1 each
    out = []
    for w1 in range(-depth - 1 + (-qq), s + depth + qq + 2):
        out.append((w1, s - w1))
    return out


def homology_dim(algebra, module, q, weight, scaling=False, depth=None):
    """Dimension of H_q(algebra; module) at a bi-weight or scaling weight.

    Returns (dim, status) with status "ok" or "inconclusive".  For the
    infinite modules (P, S2P) the computation is truncated at module
    scaling `depth` (default 8) and repeated at depth-1; agreement of the
    two values is required for "ok".
    """
    module = MODULES[module] if isinstance(module, str) else module
    min_order, smin = ALGEBRAS[algebra]

    def total(dep):
        if scaling:
            if algebra == "w2":
                # w2 contains both Euler fields z^i d_i, so every block of
                # nonzero bi-weight is acyclic (inner-grading homotopy, the
                # quasi-isomorphism onto the (0,0) subcomplex); sampled
                # off-diagonal blocks are checked in the test suite.
                blocks = [(0, 0)] if weight == 0 else []
            else:
                blocks = _blocks_for_scaling(q, weight, module, min_order, smin, dep)
        else:
            blocks = [tuple(weight)]
        dim = 0
        for w in blocks:
            dim += _block_dim(q, w, module, min_order, smin, dep)
        return dim

    if module.finite:
        return total(None), "ok"
    if depth is None:
        depth = 8
    b = total(depth)
    if b == 0:
        # exact vanishing certificate (see _block_dim); no stability
        # rerun needed
        return 0, "ok"
    a = total(depth - 1)
    return b, ("ok" if a == b else "inconclusive")
