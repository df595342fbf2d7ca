"""Radical-membership engine for the quantized relations.

The positive half of the quantized algebra is the free algebra on the
letters E_i modulo the radical of a Hopf pairing.  The pairing on basis
words obeys a one-letter peeling recursion (``pair``); a relation holds
iff its expansion pairs to zero against every word of its weight, which
is decided here by building the dual functional (``shuffle_image``)
bottom-up over the bracket tree with early coefficient merging, instead
of pairing word by word.

Quantum brackets: [[X,Y]] = XY - (-1)^{p(X)p(Y)} q^{-(wt X, wt Y)} YX,
and the deformed [X,Y]_a with an explicit q-power a (words carry the
exponent).  The plain [X,Y] is the a = 1 case.
"""

from fractions import Fraction

from .datum import datum_string
from .relcheck import instantiate
from .scalars import L_ONE, L_ZERO, LaurentQ, laurent, q_sinh
from .words import Word, br, qbr

F0 = Fraction(0)


def _tables(datum):
    n = datum.n + 1
    bil = [
        [datum.bil(datum.simple[i], datum.simple[j]) for j in range(n)]
        for i in range(n)
    ]
    par = [datum.p(i) for i in range(n)]
    return bil, par


class NCPoly:
    """Finitely supported map from words (tuples of letter indices) to
    Laurent scalars; represents an element of the free algebra."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for w, c in terms.items():
                c = laurent(c)
                if c:
                    self.terms[tuple(w)] = c

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, NCPoly) and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w, L_ZERO) + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        p = NCPoly()
        p.terms = out
        return p

    def __sub__(self, other):
        return self + other.scale(Fraction(-1))

    def scale(self, a):
        a = laurent(a)
        p = NCPoly()
        if a:
            p.terms = {w: c * a for w, c in self.terms.items()}
        return p

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        items = sorted(self.terms.items())[:4]
        body = " + ".join("(%r)*%s" % (c, ".".join(map(str, w)))
                          for w, c in items)
        if len(self.terms) > 4:
            body += " + ..."
        return "NCPoly(%s)" % (body or "0")


def _concat(A, B):
    out = {}
    for wa, ca in A.terms.items():
        for wb, cb in B.terms.items():
            w = wa + wb
            s = out.get(w, L_ZERO) + ca * cb
            if s:
                out[w] = s
            else:
                out.pop(w, None)
    p = NCPoly()
    p.terms = out
    return p


def _flavor(word, datum):
    """The twist scalar of a bracket node: q-power exponent e with
    [X,Y] = XY - (-1)^{pp} q^e YX."""
    if word.kind == "br":
        return F0
    if word.kind == "qbr":
        return -datum.bil(word.left.weight(datum), word.right.weight(datum))
    if word.kind == "abr":
        return Fraction(word.a)
    raise ValueError("not a bracket node: %r" % word)


def expand(word, datum):
    """Expansion of a bracket tree over E-leaves into an NCPoly."""
    if word.kind == "gen":
        if word.tag != "E":
            raise ValueError("quantum expansion is E-side only")
        return NCPoly({(word.index,): L_ONE})
    L = expand(word.left, datum)
    R = expand(word.right, datum)
    e = _flavor(word, datum)
    sign = (-1) ** (word.left.parity(datum) * word.right.parity(datum))
    twist = LaurentQ.q_power(e) * Fraction(-sign)
    return _concat(L, R) + _concat(R, L).scale(twist)


def pair(u, w, datum):
    """Hopf pairing of two basis words (tuples of letter indices).

    Peels the first letter of u against each matching position x of w
    with the factor (-1)^{p(u0) p(tail)} q^{-(u0, tail)}, tail = the part
    of w after x.  Zero unless the letter multisets agree.
    """
    u, w = tuple(u), tuple(w)
    if len(u) != len(w) or sorted(u) != sorted(w):
        return L_ZERO
    bil, par = _tables(datum)
    memo = {}

    def rec(ui, positions):
        if ui == len(u):
            return L_ONE
        key = (ui, positions)
        got = memo.get(key)
        if got is not None:
            return got
        a = u[ui]
        total = L_ZERO
        for t, x in enumerate(positions):
            if w[x] != a:
                continue
            e, s = F0, 0
            for y in positions[t + 1:]:
                e += bil[a][w[y]]
                s += par[w[y]]
            f = LaurentQ.q_power(-e) * Fraction((-1) ** (par[a] * s))
            total = total + f * rec(ui + 1, positions[:t] + positions[t + 1:])
        memo[key] = total
        return total

    return rec(0, tuple(range(len(w))))


def _insert_front(M, a, bil, par):
    """Dual of prepending letter a: insert a into every word at every
    position with the tail factor (-1)^{p(a)p(tail)} q^{-(a, tail)}."""
    out = {}
    pa = par[a]
    row = bil[a]
    for wrd, c in M.items():
        e, s = F0, 0
        facts = [(e, s)]
        for x in range(len(wrd) - 1, -1, -1):
            e = e + row[wrd[x]]
            s = s + par[wrd[x]]
            facts.append((e, s))
        facts.reverse()
        for x in range(len(wrd) + 1):
            e, s = facts[x]
            f = c * LaurentQ.q_power(-e)
            if (pa * s) % 2:
                f = -f
            nw = wrd[:x] + (a,) + wrd[x:]
            v = out.get(nw)
            v = f if v is None else v + f
            if v:
                out[nw] = v
            else:
                out.pop(nw, None)
    return out


def _insert_back(M, a, bil, par):
    """Dual of appending letter a: head factor over the part before the
    insertion point."""
    out = {}
    pa = par[a]
    row = bil[a]
    for wrd, c in M.items():
        e, s = F0, 0
        for x in range(len(wrd) + 1):
            f = c * LaurentQ.q_power(-e)
            if (pa * s) % 2:
                f = -f
            nw = wrd[:x] + (a,) + wrd[x:]
            v = out.get(nw)
            v = f if v is None else v + f
            if v:
                out[nw] = v
            else:
                out.pop(nw, None)
            if x < len(wrd):
                e = e + row[wrd[x]]
                s = s + par[wrd[x]]
    return out


def _merge(acc, M, scalar):
    for w, c in M.items():
        v = acc.get(w, L_ZERO) + c * scalar
        if v:
            acc[w] = v
        else:
            acc.pop(w, None)
    return acc


def _phi_concat(phiX, polyX, phiY, polyY, bil, par):
    """Functional of the product X*Y from the functionals and expansions
    of the factors, inserting the letters of the thinner factor."""
    acc = {}
    if len(polyY.terms) <= len(polyX.terms):
        for b, cb in polyY.terms.items():
            M = phiX
            for letter in b:
                M = _insert_back(M, letter, bil, par)
            _merge(acc, M, cb)
    else:
        for a, ca in polyX.terms.items():
            M = phiY
            for letter in reversed(a):
                M = _insert_front(M, letter, bil, par)
            _merge(acc, M, ca)
    return acc


def shuffle_image(x, datum):
    """The dual functional of an element: coefficient of w equals
    pair(x, w) for every basis word w of the weight.

    x may be a bracket Word or an NCPoly; the tree form is preferred
    (the functional is built bottom-up with shared accumulators, which is
    what makes the long chain relations tractable)."""
    bil, par = _tables(datum)
    if isinstance(x, NCPoly):
        acc = {}
        for wrd, c in x.terms.items():
            M = {(): L_ONE}
            for letter in reversed(wrd):
                M = _insert_front(M, letter, bil, par)
            _merge(acc, M, c)
        p = NCPoly()
        p.terms = acc
        return p

    def go(node):
        if node.kind == "gen":
            if node.tag != "E":
                raise ValueError("quantum expansion is E-side only")
            one = NCPoly({(node.index,): L_ONE})
            return dict(one.terms), one
        phiL, polyL = go(node.left)
        phiR, polyR = go(node.right)
        e = _flavor(node, datum)
        sign = (-1) ** (node.left.parity(datum) * node.right.parity(datum))
        twist = LaurentQ.q_power(e) * Fraction(sign)
        acc = _phi_concat(phiL, polyL, phiR, polyR, bil, par)
        back = _phi_concat(phiR, polyR, phiL, polyL, bil, par)
        _merge(acc, back, -twist)
        poly = _concat(polyL, polyR) + _concat(polyR, polyL).scale(-twist)
        return acc, poly

    phi, _ = go(x)
    p = NCPoly()
    p.terms = phi
    return p


def radical_member(x, datum):
    """Is x in the pairing radical?  x is a Word, an NCPoly, or a list of
    (scalar, Word) terms.  Returns a report with a witness word and its
    nonzero pairing value on failure."""
    if isinstance(x, (list, tuple)):
        total = NCPoly()
        for c, wrd in x:
            total = total + shuffle_image(wrd, datum).scale(c)
    else:
        total = shuffle_image(x, datum)
    if total.is_zero():
        return {"member": True, "witness": None}
    wit = min(total.terms)
    return {"member": False, "witness": (wit, total.terms[wit])}


# ---------------------------------------------------------------------------
# the quantum relation catalog
# ---------------------------------------------------------------------------

# relation ids whose first term carries a plain outermost bracket (the
# displayed [ ..., E ] with no q-twist); every inner node is [[ , ]]
_PLAIN_ROOT = {
    "iv": (0,),
    "v": (0,),
    "vi": (0,),
    "ix": (0,),
    "xi": (0,),
    "xiii": (0,),
    "xxi": (0,),
}


def _quantize_word(w, plain_root):
    if w.kind == "gen":
        return w
    left = _quantize_word(w.left, False)
    right = _quantize_word(w.right, False)
    return br(left, right) if plain_root else qbr(left, right)


class QuantumInstance:
    """A grounded quantum relation: (Laurent scalar, bracket word) terms
    whose combined shuffle image must vanish."""

    def __init__(self, rid, indices, terms):
        self.id = rid
        self.indices = tuple(indices)
        self.terms = tuple(terms)

    def max_length(self):
        return max(w.length() for _, w in self.terms)

    def __repr__(self):
        return "QuantumInstance(%s, %s)" % (self.id, self.indices)


def _star_quantum(datum):
    """Quantum form of the star relation (gray node j with three pairwise
    orthogonal neighbours whose pairings with j sum to zero).

    Unlike its classical shadow the quantum statement is not scale
    invariant in the neighbour roles: it requires the normalized picture
    (a_j,a_k) = -1, (a_j,a_l) = -x, (a_j,a_i) = x+1 with x not in
    {0, 1, -1}, reads [[E_j,E_i]] in the first factor, and carries the
    q-number [x]:
        [[[[[[E_j,E_i]],[[E_j,E_k]]]],[[E_j,E_l]]]]
            = [x] [[[[[[E_j,E_i]],[[E_j,E_l]]]],[[E_j,E_k]]]].
    """
    from .words import E

    n = datum.n + 1
    B = lambda a, b: datum.bil(datum.simple[a], datum.simple[b])
    for j in range(n):
        if B(j, j) != 0:
            continue
        nbrs = [a for a in range(n) if a != j and B(j, a) != 0]
        if len(nbrs) != 3:
            continue
        if any(B(a, b) != 0 for a in nbrs for b in nbrs if a < b):
            continue
        if sum(B(j, a) for a in nbrs) != 0:
            continue
        for k in nbrs:
            if B(j, k) != -1:
                continue
            for l in nbrs:
                if l == k:
                    continue
                x = -B(j, l)
                if x in (0, 1, -1):
                    continue
                i = next(a for a in nbrs if a not in (k, l))
                ji, jk, jl = qbr(E(j), E(i)), qbr(E(j), E(k)), qbr(E(j), E(l))
                terms = [
                    (q_sinh(1), qbr(qbr(ji, jk), jl)),
                    (-q_sinh(x), qbr(qbr(ji, jl), jk)),
                ]
                yield QuantumInstance("viii", (j, i, k, l), terms)


def quantum_catalog(datum):
    """The grounded quantum relations of a datum.

    Shapes and index predicates are shared with the classical catalog;
    brackets become q-brackets (except the displayed plain outermost
    ones) and every classical coefficient c becomes q^c - q^{-c}, i.e.
    the q-integer [c] up to one overall unit -- so mixed-coefficient
    relations keep their exact q-proportions.  The star relation is the
    one shape with its own quantum grounding (see _star_quantum).
    """
    out = []
    for inst in instantiate(datum, mirror=False):
        if inst.id == "viii":
            continue
        plain = _PLAIN_ROOT.get(inst.id, ())
        terms = []
        for t, (c, w) in enumerate(inst.terms):
            terms.append((q_sinh(c), _quantize_word(w, t in plain)))
        out.append(QuantumInstance(inst.id, inst.indices, terms))
    out.extend(_star_quantum(datum))
    return out


def verify_quantum(datum, max_letters=None, expensive=False):
    """Radical-membership check of every quantum relation instance."""
    results = []
    for inst in quantum_catalog(datum):
        if max_letters is not None and inst.max_length() > max_letters:
            continue
        if not expensive and inst.max_length() > 10:
            continue
        rep = radical_member(list(inst.terms), datum)
        row = {
            "id": inst.id,
            "tuple": list(inst.indices),
            "pass": rep["member"],
        }
        if not rep["member"]:
            w, v = rep["witness"]
            row["witness"] = {"word": list(w), "value": repr(v)}
        results.append(row)
    return {"datum": datum_string(datum), "engine": "radical",
            "results": results}


# ---------------------------------------------------------------------------
# deformed bracket identities
# ---------------------------------------------------------------------------


def _word_weight(wrd, datum):
    out = [F0] * len(datum.labels)
    for a in wrd:
        out = [x + y for x, y in zip(out, datum.simple[a])]
    return tuple(out)


def _word_parity(wrd, par):
    return sum(par[a] for a in wrd) % 2


def _br_exp(A, pA, B, pB, e):
    """[A, B]_{q^e} on NCPoly operands with given parities."""
    twist = LaurentQ.q_power(e) * Fraction((-1) ** (pA * pB))
    return _concat(A, B) + _concat(B, A).scale(-twist)


def bracket_identities_check(datum, trials=50, seed=0):
    """Replay the rebracketing identities on random homogeneous words.

    Checks, for random words X, Y, Z and random integer q-powers a, b, c:
      [[X,Y]_a, Z]_b = [X,[Y,Z]_c]_{ab/c} + (-1)^{p(Y)p(Z)} c [[X,Z]_{b/c}, Y]_{a/c}
      [X,[Y,Z]_a]_b = [[X,Y]_c, Z]_{ab/c} + (-1)^{p(X)p(Y)} c [Y,[X,Z]_{b/c}]_{a/c}
    and the two weighted-bracket rearrangements they specialize to:
      [[[[Xn,Xm]],Xh]] = [[Xn,[[Xm,Xh]]]] + (-1)^{p(m)p(h)} q^{-(m,h)} [[[Xn,Xh]],Xm]_{q^{(m,h-n)}}
      [[Xn,[[Xm,Xh]]]] = [[[[Xn,Xm]],Xh]] + (-1)^{p(m)p(n)} q^{-(m,n)} [Xm,[[Xn,Xh]]]_{q^{(m,n-h)}}
    Returns a report; any failure carries the offending triple.
    """
    import random

    rng = random.Random(seed)
    bil, par = _tables(datum)
    n = datum.n + 1
    failures = []
    for t in range(trials):
        X, Y, Z = (
            tuple(rng.randrange(n) for _ in range(rng.randint(1, 3)))
            for _ in range(3)
        )
        ea, eb, ec = (Fraction(rng.randint(-3, 3)) for _ in range(3))
        pX, pY, pZ = (_word_parity(w, par) for w in (X, Y, Z))
        A = NCPoly({X: L_ONE})
        B = NCPoly({Y: L_ONE})
        C = NCPoly({Z: L_ONE})

        lhs = _br_exp(_br_exp(A, pX, B, pY, ea), (pX + pY) % 2, C, pZ, eb)
        rhs = _br_exp(A, pX, _br_exp(B, pY, C, pZ, ec), (pY + pZ) % 2,
                      ea + eb - ec)
        alt = _br_exp(_br_exp(A, pX, C, pZ, eb - ec), (pX + pZ) % 2,
                      B, pY, ea - ec)
        rhs = rhs + alt.scale(LaurentQ.q_power(ec)
                              * Fraction((-1) ** (pY * pZ)))
        if lhs != rhs:
            failures.append(("assoc-left", t, X, Y, Z, (ea, eb, ec)))

        lhs = _br_exp(A, pX, _br_exp(B, pY, C, pZ, ea), (pY + pZ) % 2, eb)
        rhs = _br_exp(_br_exp(A, pX, B, pY, ec), (pX + pY) % 2, C, pZ,
                      ea + eb - ec)
        alt = _br_exp(B, pY, _br_exp(A, pX, C, pZ, eb - ec), (pX + pZ) % 2,
                      ea - ec)
        rhs = rhs + alt.scale(LaurentQ.q_power(ec)
                              * Fraction((-1) ** (pX * pY)))
        if lhs != rhs:
            failures.append(("assoc-right", t, X, Y, Z, (ea, eb, ec)))

        # the weighted specializations (q-brackets on homogeneous slots)
        nu, mu, eta = (_word_weight(w, datum) for w in (X, Y, Z))
        bnm = datum.bil(nu, mu)
        bnh = datum.bil(nu, eta)
        bmh = datum.bil(mu, eta)
        qXY = _br_exp(A, pX, B, pY, -bnm)
        qYZ = _br_exp(B, pY, C, pZ, -bmh)
        qXZ = _br_exp(A, pX, C, pZ, -bnh)

        lhs = _br_exp(qXY, (pX + pY) % 2, C, pZ, -(bnh + bmh))
        rhs = _br_exp(A, pX, qYZ, (pY + pZ) % 2, -(bnm + bnh))
        alt = _br_exp(qXZ, (pX + pZ) % 2, B, pY, bmh - bnm)
        rhs = rhs + alt.scale(LaurentQ.q_power(-bmh)
                              * Fraction((-1) ** (pY * pZ)))
        if lhs != rhs:
            failures.append(("rebracket-left", t, X, Y, Z))

        lhs = _br_exp(A, pX, qYZ, (pY + pZ) % 2, -(bnm + bnh))
        rhs = _br_exp(qXY, (pX + pY) % 2, C, pZ, -(bnh + bmh))
        alt = _br_exp(B, pY, qXZ, (pX + pZ) % 2, bnm - bmh)
        rhs = rhs + alt.scale(LaurentQ.q_power(-bnm)
                              * Fraction((-1) ** (pX * pY)))
        if lhs != rhs:
            failures.append(("rebracket-right", t, X, Y, Z))
    return {"pass": not failures, "trials": trials, "failures": failures}
