"""Root data for affine contragredient Lie superalgebras.

A datum is a triple (E, Pi, p): a vector space E carrying a symmetric
bilinear form, a tuple Pi = (alpha_0, ..., alpha_n) of simple roots, and a
parity bit for each simple root.  Everything downstream (relation catalogs,
reflections, the quantum pairing) only consumes the datum through the
pairing matrix (alpha_i, alpha_j) and the parities, but the explicit
coordinates matter for reflections, which act linearly on E.

For the matrix families E has basis (eps_1, ..., eps_N, delta, Lambda_0)
with (eps_i, eps_j) = d_i delta_ij for signs d_i = e(-1)^{p~(i)},
(delta, delta) = (Lambda_0, Lambda_0) = 0 and (delta, Lambda_0) = 1.
The finite simple roots are eps_i - eps_{i+1} plus one family-specific end
root, and alpha_0 = delta + psi where psi is the lowest weight of the
degree-one piece of the corresponding (possibly twisted) loop realization.

Exceptional families use the basis (a_1, ..., a_n, delta, Lambda_0) where
a_i are the finite simple roots themselves, with a hardcoded Gram matrix.

Family tokens
-------------
A     cyclic general-linear family (untwisted loop of gl)
B     odd orthosymplectic, untwisted                (odd size 2N+1)
B2    odd special linear with the order-2 flip twist
CD    even orthosymplectic, untwisted               (even size 2N)
CD2   even special linear with the order-2 flip twist
D2    even orthosymplectic with the middle-swap order-2 twist
A4    special linear with the order-4 twist         (size 2N+2)
D21X  one-parameter rank-3 exceptional (parameter x)
F4    40-dimensional exceptional
G3    31-dimensional exceptional

Datum strings look like ``B2@N=3;p=101;e=-`` or ``D21X@x=-1/3`` or ``G3``:
``p`` gives the index parities p~(1..N), ``d`` optionally gives the sign
string of the d_i (it must be consistent with ``p`` and ``e``), ``x`` is an
exact rational.
"""

from fractions import Fraction

from .linalg import rank, solve

F0 = Fraction(0)
F1 = Fraction(1)

WHITE, GRAY, BLACK = "white", "gray", "black"


class RootDatum:
    """A bilinear space with a distinguished tuple of simple roots.

    gram    -- Gram matrix of the chosen basis of E (tuple of tuples).
    simple  -- coordinates of alpha_0..alpha_n in that basis.
    parity  -- parity bit p(alpha_i) for each simple root.
    labels  -- basis labels, ending with ("delta", "Lambda0").
    family  -- preset token, or "custom" for reflected data.
    params  -- construction parameters (N, ptilde, e, x, ...) when known.
    """

    def __init__(self, gram, simple, parity, labels, family="custom", params=None):
        self.gram = tuple(tuple(Fraction(x) for x in row) for row in gram)
        self.simple = tuple(tuple(Fraction(x) for x in v) for v in simple)
        self.parity = tuple(int(b) % 2 for b in parity)
        self.labels = tuple(labels)
        self.family = family
        self.params = dict(params or {})
        if len(self.parity) != len(self.simple):
            raise ValueError("parity vector and simple roots disagree in length")
        for v in self.simple:
            if len(v) != len(self.labels):
                raise ValueError("simple root has wrong coordinate length")
        self._pairs = None

    # -- basic accessors ---------------------------------------------------

    @property
    def n(self):
        """Index of the last simple root (roots are alpha_0..alpha_n)."""
        return len(self.simple) - 1

    def bil(self, u, v):
        acc = F0
        for i, ui in enumerate(u):
            if not ui:
                continue
            row = self.gram[i]
            acc += ui * sum(row[j] * vj for j, vj in enumerate(v) if vj)
        return acc

    def pairing_matrix(self):
        if self._pairs is None:
            self._pairs = tuple(
                tuple(self.bil(a, b) for b in self.simple) for a in self.simple
            )
        return self._pairs

    def pair(self, i, j):
        return self.pairing_matrix()[i][j]

    def norm(self, i):
        return self.pair(i, i)

    def p(self, i):
        return self.parity[i]

    def root_parity(self, coeffs):
        """Parity of sum c_i alpha_i (coefficients must be integers)."""
        return sum(int(c) * p for c, p in zip(coeffs, self.parity)) % 2

    def root_vector(self, coeffs):
        v = [F0] * len(self.labels)
        for c, a in zip(coeffs, self.simple):
            if c:
                for k, ak in enumerate(a):
                    v[k] += Fraction(c) * ak
        return tuple(v)

    def dot_class(self, i):
        if self.norm(i):
            return BLACK if self.p(i) else WHITE
        if self.p(i):
            return GRAY
        raise ValueError("isotropic even simple root at position %d" % i)

    # -- affine structure --------------------------------------------------

    def delta_coeffs(self):
        """Positive integer coefficients c with sum c_i alpha_i = delta.

        Obtained by solving sum c_i alpha_i = delta in coordinates: the
        simple roots of an affine datum are linearly independent, so the
        solution is unique when it exists (the pairing matrix alone can
        have nullity 2, e.g. when the diagonal signs sum to zero, so a
        nullspace computation would be ambiguous).
        """
        ncoord = len(self.labels)
        nb = ncoord - 2
        rows = [[a[k] for a in self.simple] for k in range(ncoord)]
        if rank(rows) != len(self.simple):
            raise ValueError("simple roots are linearly dependent")
        target = [F0] * ncoord
        target[nb] = F1
        c = solve(rows, target, F0)
        if c is None:
            raise ValueError("delta is not spanned by the simple roots")
        ints = []
        for x in c:
            if x.denominator != 1 or x <= 0:
                raise ValueError("null root coefficients %r not positive integers" % (c,))
            ints.append(int(x))
        return tuple(ints)

    def delta_two_rho(self):
        """(delta, 2 rho) = sum of c_i (alpha_i, alpha_i) over the null root."""
        c = self.delta_coeffs()
        return sum(Fraction(ci) * self.norm(i) for i, ci in enumerate(c))

    def weight_filter(self, coeffs):
        """Does gamma = sum c_i alpha_i satisfy (gamma, gamma) = 2 (rho, gamma)?"""
        pm = self.pairing_matrix()
        cs = [Fraction(c) for c in coeffs]
        gg = sum(
            ci * cj * pm[i][j]
            for i, ci in enumerate(cs)
            if ci
            for j, cj in enumerate(cs)
            if cj
        )
        two_rho = sum(ci * pm[i][i] for i, ci in enumerate(cs))
        return gg == two_rho

    # -- diagram -----------------------------------------------------------

    def diagram(self):
        return DynkinDiagram.from_datum(self)

    def xy_tag(self):
        """Two-letter end classification for matrix-family data.

        The first letter reads off alpha_0 = delta + psi (psi one of
        -eps_1-eps_2 -> D, -2 eps_1 -> C, -eps_1 -> B, eps_N - eps_1 -> A),
        the second reads the finite end root alpha_n.  Returns e.g.
        ("CB", 1) where the integer is the total parity sum mod 2.
        """
        nb = len(self.labels) - 2  # number of eps coordinates
        sub = sum(self.parity) % 2
        a0 = self.simple[0]
        an = self.simple[-1]
        if a0[nb] != 1 or any(a0[nb + 1 :][1:]):
            raise ValueError("alpha_0 is not of the form delta + psi")
        psi = a0[:nb]
        first = _end_letter(psi, nb, start=True)
        if first == "A":
            return ("AA", sub)
        last = _end_letter(an[:nb], nb, start=False)
        return (first + last, sub)

    # -- serialization -----------------------------------------------------

    def to_json(self):
        return {
            "family": self.family,
            "labels": list(self.labels),
            "gram": [[str(x) for x in row] for row in self.gram],
            "simple": [[str(x) for x in v] for v in self.simple],
            "parity": list(self.parity),
            "params": {k: _param_out(v) for k, v in self.params.items()},
        }

    @classmethod
    def from_json(cls, obj):
        return cls(
            [[Fraction(x) for x in row] for row in obj["gram"]],
            [[Fraction(x) for x in v] for v in obj["simple"]],
            obj["parity"],
            obj["labels"],
            family=obj.get("family", "custom"),
            params={k: _param_in(k, v) for k, v in obj.get("params", {}).items()},
        )

    def __eq__(self, other):
        return (
            isinstance(other, RootDatum)
            and self.gram == other.gram
            and self.simple == other.simple
            and self.parity == other.parity
        )

    def __hash__(self):
        return hash((self.gram, self.simple, self.parity))

    def __repr__(self):
        return "RootDatum(%s, n=%d)" % (self.family, self.n)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _param_out(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, tuple):
        return list(v)
    return v


def _param_in(key, v):
    if key == "x":
        return Fraction(v)
    if isinstance(v, list):
        return tuple(v)
    return v


def _end_letter(psi, nb, start):
    """Classify an end root by its eps-coordinate pattern."""
    nz = {i: c for i, c in enumerate(psi) if c}
    if start:
        if nz == {0: -1, 1: -1}:
            return "D"
        if nz == {0: -2}:
            return "C"
        if nz == {0: -1}:
            return "B"
        if nz == {0: -1, nb - 1: 1}:
            return "A"
    else:
        if nz == {nb - 2: 1, nb - 1: 1}:
            return "D"
        if nz == {nb - 1: 2}:
            return "C"
        if nz == {nb - 1: 1}:
            return "B"
    raise ValueError("unrecognized end root %r" % (psi,))


class DynkinDiagram:
    """Node/edge view of a datum: node data and pairwise pairing values.

    nodes -- tuple of (dot_class, parity, norm) per simple root.
    edges -- dict mapping frozenset({i, j}) to (alpha_i, alpha_j) != 0.
    """

    def __init__(self, nodes, edges):
        self.nodes = tuple(nodes)
        self.edges = dict(edges)

    @classmethod
    def from_datum(cls, datum):
        nodes = [
            (datum.dot_class(i), datum.p(i), datum.norm(i))
            for i in range(datum.n + 1)
        ]
        edges = {}
        for i in range(datum.n + 1):
            for j in range(i + 1, datum.n + 1):
                v = datum.pair(i, j)
                if v:
                    edges[frozenset((i, j))] = v
        return cls(nodes, edges)

    def neighbors(self, i):
        out = []
        for e in self.edges:
            if i in e:
                (j,) = e - {i}
                out.append(j)
        return sorted(out)

    def is_cycle(self):
        n = len(self.nodes)
        return n >= 3 and all(len(self.neighbors(i)) == 2 for i in range(n))

    def canonical_key(self):
        """Hashable form invariant under diagram symmetry.

        For cycles the node/edge sequence is minimized over rotations and
        reflections; everything else keeps its given indexing (the finite
        end of a path datum is structurally distinct from the affine end,
        so flips are not symmetries there).
        """
        if self.is_cycle():
            n = len(self.nodes)
            order = [0, self.neighbors(0)[0]]
            while len(order) < n:
                a, b = self.neighbors(order[-1])
                order.append(b if a == order[-2] else a)
            best = None
            for flip in (False, True):
                idx = order[::-1] if flip else order
                for s in range(n):
                    seq = tuple(
                        (
                            self.nodes[idx[(s + k) % n]],
                            self.edges[
                                frozenset(
                                    (idx[(s + k) % n], idx[(s + k + 1) % n])
                                )
                            ],
                        )
                        for k in range(n)
                    )
                    if best is None or seq < best:
                        best = seq
            return ("cycle", best)
        flat = tuple(
            (tuple(sorted(e)), v) for e, v in sorted(self.edges.items(), key=lambda kv: tuple(sorted(kv[0])))
        )
        return ("graph", self.nodes, flat)

    def to_dot(self):
        shape = {WHITE: "circle", GRAY: "Mcircle", BLACK: "doublecircle"}
        lines = ["graph dynkin {"]
        for i, (cls_, par, norm) in enumerate(self.nodes):
            lines.append(
                '  n%d [shape=%s, label="%d\\n(%s|%s)"];'
                % (i, shape[cls_], i, norm, par)
            )
        for e, v in sorted(self.edges.items(), key=lambda kv: tuple(sorted(kv[0]))):
            i, j = sorted(e)
            lines.append('  n%d -- n%d [label="%s"];' % (i, j, v))
        lines.append("}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# Matrix-family presets
# ---------------------------------------------------------------------------

MATRIX_FAMILIES = ("A", "B", "B2", "CD", "CD2", "D2", "A4")
EXCEPTIONAL_FAMILIES = ("D21X", "F4", "G3")
MIN_RANK = {"A": 2, "B": 2, "B2": 1, "CD": 2, "CD2": 2, "D2": 1, "A4": 1}


def _eps_basis(dbar):
    """Gram matrix and labels for (eps_1..eps_N, delta, Lambda0)."""
    nb = len(dbar)
    size = nb + 2
    gram = [[F0] * size for _ in range(size)]
    for i, d in enumerate(dbar):
        gram[i][i] = Fraction(d)
    gram[nb][nb + 1] = F1
    gram[nb + 1][nb] = F1
    labels = tuple("eps%d" % (i + 1) for i in range(nb)) + ("delta", "Lambda0")
    return gram, labels


def _unit(size, idx, coeff=F1):
    v = [F0] * size
    v[idx] = coeff
    return v


def build_preset(family, N=None, ptilde=None, e=1, x=None):
    """Construct a preset datum.

    family -- one of the tokens in MATRIX_FAMILIES / EXCEPTIONAL_FAMILIES.
    N      -- datum rank for matrix families (number of eps coordinates).
    ptilde -- index parities p~(1..N); the realization-level parities at the
              extra matrix indices are fixed by the family and not given.
    e      -- overall sign of the supertrace form, +1 or -1.
    x      -- exact rational parameter, D21X only.
    """
    if family in EXCEPTIONAL_FAMILIES:
        return _build_exceptional(family, x)
    if family not in MATRIX_FAMILIES:
        raise ValueError("unknown family %r" % (family,))
    if x is not None:
        raise ValueError("x parameter is only meaningful for D21X")
    if N is None:
        raise ValueError("matrix families need N")
    N = int(N)
    if N < MIN_RANK[family]:
        raise ValueError("family %s needs N >= %d" % (family, MIN_RANK[family]))
    if N == 2 and ptilde is not None:
        bits = tuple(int(b) % 2 for b in ptilde)
        if family == "CD" and bits == (0, 0):
            # both ends come out D-shaped and alpha_1 decouples from the rest
            # of the diagram; the rank-2 all-even case is not in the family
            raise ValueError("CD family at N = 2 needs at least one odd index")
        if family == "CD2" and bits == (1, 0):
            # alpha_0 = delta - eps_1 - eps_2 collides with the end root and
            # alpha_1 drops out of the support of delta
            raise ValueError("CD2 family at N = 2 is degenerate for p~ = 10")
    if ptilde is None:
        ptilde = (0,) * N
    ptilde = tuple(int(b) % 2 for b in ptilde)
    if len(ptilde) != N:
        raise ValueError("ptilde must have length N")
    if e not in (1, -1):
        raise ValueError("e must be +1 or -1")
    dbar = tuple(e * (1 if b == 0 else -1) for b in ptilde)
    gram, labels = _eps_basis(dbar)
    size = N + 2
    params = {"N": N, "ptilde": ptilde, "e": e, "dbar": dbar}

    # chain roots eps_i - eps_{i+1}
    chain = []
    chain_p = []
    for i in range(N - 1):
        v = [F0] * size
        v[i] = F1
        v[i + 1] = -F1
        chain.append(v)
        chain_p.append((ptilde[i] + ptilde[i + 1]) % 2)

    if family == "A":
        a0 = [F0] * size
        a0[0] = -F1
        a0[N - 1] += F1
        a0[N] = F1
        simple = [a0] + chain
        parity = [(ptilde[0] + ptilde[N - 1]) % 2] + chain_p
        return RootDatum(gram, simple, parity, labels, family, params)

    # finite end root
    if family in ("B", "B2", "D2", "A4"):
        # realization index parities continue with p~ = 0 past position N
        end = _unit(size, N - 1)
        end_p = ptilde[N - 1]
    elif family in ("CD", "CD2"):
        if ptilde[N - 1]:
            end = _unit(size, N - 1, Fraction(2))
            end_p = 0
        else:
            end = [F0] * size
            end[N - 2] = F1
            end[N - 1] = F1
            end_p = (ptilde[N - 2] + ptilde[N - 1]) % 2
    simple_fin = chain + [end]
    parity_fin = chain_p + [end_p]

    # affine root alpha_0 = delta + psi.  For the untwisted families psi is
    # the lowest root of the fixed subalgebra; its -2 eps_1 form exists there
    # exactly when the (1',1) matrix position survives the flip, i.e. when
    # p~(1) = 1.  The twist modules get the complementary form.
    if family in ("D2", "A4"):
        psi_kind = "B"
    elif family in ("B", "CD"):
        psi_kind = "C" if ptilde[0] else "D"
    elif family == "B2" and N == 1:
        psi_kind = "B" if ptilde[0] else "C"
    else:  # B2 (N >= 2), CD2
        psi_kind = "D" if ptilde[0] else "C"

    a0 = [F0] * size
    a0[N] = F1
    if psi_kind == "D":
        a0[0] = -F1
        a0[1] = -F1
        p0 = (ptilde[0] + ptilde[1]) % 2
    elif psi_kind == "C":
        a0[0] = -Fraction(2)
        p0 = 0
    else:  # "B"
        a0[0] = -F1
        p0 = (ptilde[0] + (1 if family == "A4" else 0)) % 2

    simple = [a0] + simple_fin
    parity = [p0] + parity_fin
    return RootDatum(gram, simple, parity, labels, family, params)


def _build_exceptional(family, x):
    if family == "G3":
        fin = [[0, -1, 0], [-1, 2, -3], [0, -3, 6]]
        pfin = (1, 0, 0)
        theta = (2, 4, 2)
    elif family == "F4":
        fin = [[-4, 2, 0, 0], [2, -4, 2, 0], [0, 2, -2, 1], [0, 0, 1, 0]]
        pfin = (0, 0, 0, 1)
        theta = (1, 2, 3, 2)
    elif family == "D21X":
        if x is None:
            raise ValueError("D21X needs the parameter x")
        x = Fraction(x)
        if x in (0, -1):
            raise ValueError("D21X is degenerate at x in {0, -1}")
        fin = [[2, -1, 0], [-1, 0, -x], [0, -x, 2 * x]]
        pfin = (0, 1, 0)
        theta = (1, 2, 1)
    else:
        raise ValueError("unknown family %r" % (family,))
    n = len(fin)
    size = n + 2
    gram = [[F0] * size for _ in range(size)]
    for i in range(n):
        for j in range(n):
            gram[i][j] = Fraction(fin[i][j])
    gram[n][n + 1] = F1
    gram[n + 1][n] = F1
    labels = tuple("a%d" % (i + 1) for i in range(n)) + ("delta", "Lambda0")
    a0 = [-Fraction(c) for c in theta] + [F1, F0]
    simple = [a0] + [_unit(size, i) for i in range(n)]
    p0 = sum(c * p for c, p in zip(theta, pfin)) % 2
    parity = [p0] + list(pfin)
    params = {} if x is None else {"x": x}
    return RootDatum(gram, simple, parity, labels, family, params)


# ---------------------------------------------------------------------------
# Datum strings
# ---------------------------------------------------------------------------


def parse_datum(text):
    """Parse strings like ``CD2@N=3;p=010;e=-`` or ``D21X@x=2`` or ``F4``."""
    text = text.strip()
    if "@" in text:
        family, rest = text.split("@", 1)
        fields = [f for f in rest.split(";") if f]
    else:
        family, fields = text, []
    family = family.strip()
    kv = {}
    for f in fields:
        if "=" not in f:
            raise ValueError("malformed field %r" % f)
        k, v = f.split("=", 1)
        k = k.strip()
        if k in kv:
            raise ValueError("duplicate field %r" % k)
        kv[k] = v.strip()
    unknown = set(kv) - {"N", "p", "d", "e", "x"}
    if unknown:
        raise ValueError("unknown fields %s" % sorted(unknown))

    x = Fraction(kv["x"]) if "x" in kv else None
    if family in EXCEPTIONAL_FAMILIES:
        extra = set(kv) - {"x"}
        if extra:
            raise ValueError("fields %s not valid for %s" % (sorted(extra), family))
        return build_preset(family, x=x)

    if "N" not in kv:
        raise ValueError("matrix families need N=<int>")
    N = int(kv["N"])
    bits = kv.get("p", "0" * N)
    if not all(c in "01" for c in bits):
        raise ValueError("p must be a bit string")
    ptilde = tuple(int(c) for c in bits)
    e = None
    if "e" in kv:
        if kv["e"] not in ("+", "-", "+1", "-1", "1"):
            raise ValueError("e must be + or -")
        e = -1 if kv["e"].startswith("-") else 1
    if "d" in kv:
        signs = kv["d"]
        if len(signs) != N or not all(c in "+-" for c in signs):
            raise ValueError("d must be a +/- string of length N")
        dbar = tuple(1 if c == "+" else -1 for c in signs)
        e_from_d = dbar[0] * (1 if ptilde[0] == 0 else -1)
        expect = tuple(e_from_d * (1 if b == 0 else -1) for b in ptilde)
        if expect != dbar:
            raise ValueError("d signs inconsistent with p (no constant e fits)")
        if e is not None and e != e_from_d:
            raise ValueError("d and e disagree")
        e = e_from_d
    if e is None:
        e = 1
    return build_preset(family, N=N, ptilde=ptilde, e=e, x=x)


def datum_string(datum):
    """Inverse of parse_datum for preset-built data."""
    if datum.family in EXCEPTIONAL_FAMILIES:
        if "x" in datum.params:
            return "%s@x=%s" % (datum.family, datum.params["x"])
        return datum.family
    p = datum.params
    s = "%s@N=%d;p=%s" % (
        datum.family,
        p["N"],
        "".join(str(b) for b in p["ptilde"]),
    )
    if p.get("e", 1) == -1:
        s += ";e=-"
    return s


# ---------------------------------------------------------------------------
# The sharp root list of the G3 family
# ---------------------------------------------------------------------------

# positive roots of the finite part, as coefficients on (a1, a2, a3)
G3_FINITE_POSITIVE = (
    (1, 0, 0),
    (1, 1, 0),
    (1, 1, 1),
    (1, 2, 1),
    (1, 3, 1),
    (1, 3, 2),
    (1, 4, 2),
    (2, 4, 2),
    (0, 0, 1),
    (0, 1, 1),
    (0, 3, 2),
    (0, 2, 1),
    (0, 3, 1),
    (0, 1, 0),
)


def phi_sharp_g3(datum=None, kmax=5):
    """Solutions of (gamma, gamma) = 2 (rho, gamma) in the broadened
    positive root set of the G3 family.

    The broadened set is Phi+ together with the translates beta + alpha_i
    of the positive roots beta whose finite part is positive (beta = f +
    k delta with f in the finite positive system or f = 0), restricted to
    interacting pairs: (beta, alpha_i) != 0, or beta = alpha_i (the
    isotropic doubling 2 alpha_1).  Translating past a negative finite
    part, or along an orthogonal alpha_i, produces no new constraint and
    is excluded.  Coefficients are on (alpha_0, ..., alpha_3).  The growth
    of 2 (rho, delta) = 12 per delta-step bounds the search; kmax is a
    safety margin well past where solutions can exist.
    """
    if datum is None:
        datum = build_preset("G3")
    delta = datum.delta_coeffs()
    pm = datum.pairing_matrix()

    positive = set()  # all positive roots
    upward = set()  # those with positive finite part
    for k in range(kmax + 1):
        base = tuple(k * c for c in delta)
        if k >= 1:
            positive.add(base)
            upward.add(base)
        for f in G3_FINITE_POSITIVE:
            plus = (base[0],) + tuple(b + c for b, c in zip(base[1:], f))
            positive.add(plus)
            upward.add(plus)
            if k >= 1:
                minus = (base[0],) + tuple(b - c for b, c in zip(base[1:], f))
                positive.add(minus)

    broadened = set(positive)
    simples = [tuple(1 if j == i else 0 for j in range(4)) for i in range(4)]
    for beta in upward:
        for i in range(4):
            pairing = sum(c * pm[j][i] for j, c in enumerate(beta) if c)
            if pairing or beta == simples[i]:
                t = list(beta)
                t[i] += 1
                broadened.add(tuple(t))

    return sorted(g for g in broadened if datum.weight_filter(g))


# ---------------------------------------------------------------------------
# Classification summary
# ---------------------------------------------------------------------------


def classify(datum):
    """Summary dict: diagram tag, parities, null root, (delta, 2 rho)."""
    out = {
        "family": datum.family,
        "n": datum.n,
        "parity": list(datum.parity),
        "dot_classes": [datum.dot_class(i) for i in range(datum.n + 1)],
        "delta_coeffs": list(datum.delta_coeffs()),
        "delta_two_rho": str(datum.delta_two_rho()),
    }
    if datum.family in EXCEPTIONAL_FAMILIES or datum.labels[0].startswith("a"):
        out["tag"] = datum.family
    else:
        tag, sub = datum.xy_tag()
        out["tag"] = "(%s)_%d" % (tag, sub)
    return out
