"""Matrix realizations of the affine data as (twisted) loop algebras.

The finite-dimensional layer is gl/sl/osp built from elementary matrices
E_{ij} over Gaussian rationals, with index parities p~(i), the supertrace
str(E_{ij}) = delta_{ij} dbar_i, and the superbracket
[X,Y] = XY - (-1)^{p(X)p(Y)} YX.  On top of it sit the involutions

    Omega(X)_{ij} = -(-1)^{p~(i)p~(j) + p~(j)} g_i g_j X_{j'i'}

(whose fixed subalgebra of sl is osp), the flip omega swapping the middle
index pair of an even-size osp, and the order-4 map Xi on a size-(2N+2)
sl mixing a distinguished 0th row/column into the osp block.

A LoopElement is a finite sum of X (x) t^k plus central and derivation
coordinates; the bracket is

    [X(x)t^m + a1 c + b1 d, Y(x)t^n + a2 c + b2 d]
        = [X,Y](x)t^{m+n} + m delta_{m+n,0} (X|Y) c
          + b1 n Y(x)t^n - b2 m X(x)t^m

with the invariant form (X|Y) = kappa str(XY), kappa fixed per family so
that (H_{eps_j}|H_{eps_k}) = (eps_j, eps_k).  Twisted membership (degree-n
component in the zeta^n eigenspace of the twist) and the sl constraint are
validated at construction and after every bracket; degrees escaping the
truncation window raise instead of clipping.

Affine generators: E_i, F_i (i >= 1) sit at degree 0 and come from the
explicit per-family matrix tables; E_0 = V (x) t and F_0 = W (x) t^{-1}
where V is the lowest-root/lowest-weight vector of the degree-1 eigenspace
and W is solved from [V, W] = H_psi (the printed partner formulas have
unreliable indices in the flipped family; solving pins them exactly).
"""

from fractions import Fraction

from .linalg import row_reduce, solve
from .scalars import G_I, G_ONE, G_ZERO, GaussRational, gauss

F0 = Fraction(0)
F1 = Fraction(1)


class TruncationOverflow(Exception):
    """A bracket produced a loop degree outside the window."""


# ---------------------------------------------------------------------------
# supermatrices


class SuperMatrix:
    """Sparse matrix over Gaussian rationals with index parities.

    `entries` maps (row, col) 0-based pairs to nonzero GaussRationals.
    The entry parity of position (i, j) is p~(i) + p~(j) mod 2 and the
    supertrace weights the diagonal by dbar_i = e (-1)^{p~(i)}.
    """

    __slots__ = ("size", "iparity", "e", "entries")

    def __init__(self, size, iparity, e, entries=None):
        if len(iparity) != size:
            raise ValueError("index parity vector must have length size")
        self.size = size
        self.iparity = tuple(iparity)
        self.e = e
        self.entries = {}
        if entries:
            for pos, v in entries.items():
                v = gauss(v)
                if v:
                    self.entries[pos] = v

    def _like(self, entries):
        m = SuperMatrix(self.size, self.iparity, self.e)
        m.entries = entries
        return m

    def _compatible(self, other):
        if (
            self.size != other.size
            or self.iparity != other.iparity
            or self.e != other.e
        ):
            raise ValueError("supermatrix shape mismatch")

    def is_zero(self):
        return not self.entries

    def __eq__(self, other):
        if not isinstance(other, SuperMatrix):
            return NotImplemented
        return (
            self.size == other.size
            and self.iparity == other.iparity
            and self.entries == other.entries
        )

    __hash__ = None

    def __add__(self, other):
        self._compatible(other)
        out = dict(self.entries)
        for pos, v in other.entries.items():
            w = out.get(pos, G_ZERO) + v
            if w:
                out[pos] = w
            else:
                out.pop(pos, None)
        return self._like(out)

    def __neg__(self):
        return self._like({pos: -v for pos, v in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, a):
        a = gauss(a)
        if not a:
            return self._like({})
        return self._like({pos: a * v for pos, v in self.entries.items()})

    __rmul__ = scale
    __mul__ = scale

    def mat(self, other):
        """Ordinary matrix product."""
        self._compatible(other)
        by_row = {}
        for (i, j), v in other.entries.items():
            by_row.setdefault(i, []).append((j, v))
        out = {}
        for (i, k), v in self.entries.items():
            for j, w in by_row.get(k, ()):
                acc = out.get((i, j), G_ZERO) + v * w
                if acc:
                    out[(i, j)] = acc
                else:
                    out.pop((i, j), None)
        return self._like(out)

    def dbar(self, i):
        return self.e * (1 if self.iparity[i] == 0 else -1)

    def supertrace(self):
        t = G_ZERO
        for (i, j), v in self.entries.items():
            if i == j:
                t = t + self.dbar(i) * v
        return t

    def entry_parity(self, pos):
        i, j = pos
        return (self.iparity[i] + self.iparity[j]) % 2

    def parity(self):
        """0 or 1 for homogeneous matrices, None if mixed (zero counts even)."""
        ps = {self.entry_parity(pos) for pos in self.entries}
        if not ps:
            return 0
        if len(ps) > 1:
            return None
        return ps.pop()

    def graded_parts(self):
        ev, od = {}, {}
        for pos, v in self.entries.items():
            (od if self.entry_parity(pos) else ev)[pos] = v
        out = []
        if ev:
            out.append((self._like(ev), 0))
        if od:
            out.append((self._like(od), 1))
        return out

    def flatten(self):
        """Row vector of all size^2 entries (for exact linear algebra)."""
        return [
            self.entries.get((i, j), G_ZERO)
            for i in range(self.size)
            for j in range(self.size)
        ]

    def __repr__(self):
        items = ", ".join(
            "(%d,%d): %r" % (i, j, v) for (i, j), v in sorted(self.entries.items())
        )
        return "SuperMatrix(%d, {%s})" % (self.size, items)


def super_bracket(X, Y):
    """[X,Y] = XY - (-1)^{p(X)p(Y)} YX, extended bilinearly to mixed inputs."""
    X._compatible(Y)
    total = X._like({})
    for xp, xpar in X.graded_parts():
        for yp, ypar in Y.graded_parts():
            prod = xp.mat(yp)
            back = yp.mat(xp)
            if xpar and ypar:
                total = total + prod + back
            else:
                total = total + prod - back
    return total


# ---------------------------------------------------------------------------
# realization configurations


class RealizationConfig:
    """Everything needed to realize one affine datum with matrices.

    Positions are 0-based rows/columns of size-Ntilde matrices; `labels`
    maps them back to the bookkeeping indices (1..N, primes, and the
    distinguished 0 of the order-4 family).  `weight_vecs[pos]` is the
    eps-coordinate vector (over the datum's labels) carried by row `pos`,
    so E_{ij} has weight weight_vecs[i] - weight_vecs[j].
    """

    def __init__(self, datum, window=6):
        params = datum.params
        if params is None or "ptilde" not in params:
            raise ValueError("matrix realizations exist only for preset data")
        self.datum = datum
        self.family = datum.family
        self.window = window
        self.N = params["N"]
        self.e = params["e"]
        fam, N, e = self.family, self.N, self.e
        pt = params["ptilde"]

        if fam == "A":
            self.Ntilde = N
            self.iparity = tuple(pt)
            self.g = None
        elif fam in ("B", "B2", "A4"):
            inner = tuple(pt) + (0,) + tuple(reversed(pt))
            if fam == "A4":
                # distinguished odd 0th index in front of the osp block
                self.Ntilde = 2 * N + 2
                self.iparity = (1,) + inner
            else:
                self.Ntilde = 2 * N + 1
                self.iparity = inner
        elif fam in ("CD", "CD2"):
            self.Ntilde = 2 * N
            self.iparity = tuple(pt) + tuple(reversed(pt))
        elif fam == "D2":
            # osp of rank N+1 with an extra even eps direction to flip
            self.Ntilde = 2 * N + 2
            self.iparity = tuple(pt) + (0, 0) + tuple(reversed(pt))
        else:
            raise ValueError("no matrix realization for family %r" % (fam,))

        # g_i g_{i'} = (-1)^{p~(i)}, normalized to 1 on the first half
        if fam == "A":
            gvec = None
        else:
            gvec = [1] * self.Ntilde
            for pos in range(self.Ntilde):
                pr = self.prime(pos)
                if pr is not None and pr < pos:
                    gvec[pos] = 1 if self.iparity[pos] == 0 else -1
        self.g = tuple(gvec) if gvec else None

        self.weight_vecs = tuple(self._weight_vec(pos) for pos in range(self.Ntilde))

    def prime(self, pos):
        """0-based position of the primed partner index, or None (family A)."""
        if self.family == "A":
            return None
        if self.family == "A4":
            if pos == 0:
                return None
            return self.Ntilde - pos
        return self.Ntilde - 1 - pos

    def dbar(self, pos):
        return self.e * (1 if self.iparity[pos] == 0 else -1)

    def _weight_vec(self, pos):
        n_coord = len(self.datum.labels)
        vec = [F0] * n_coord
        fam, N = self.family, self.N
        if fam == "A":
            vec[pos] = F1
            return tuple(vec)
        if fam == "A4":
            if pos == 0 or pos == N + 1:
                return tuple(vec)
            if pos <= N:
                vec[pos - 1] = F1
            else:
                vec[self.prime(pos) - 1] = -F1
            return tuple(vec)
        half = (self.Ntilde - 1) // 2 if self.Ntilde % 2 else self.Ntilde // 2
        if pos < N:
            vec[pos] = F1
        elif self.prime(pos) < N:
            vec[self.prime(pos)] = -F1
        # fixed/flipped middle indices carry weight zero
        return tuple(vec)

    def zero(self):
        return SuperMatrix(self.Ntilde, self.iparity, self.e)

    def unit(self, i, j, coeff=1):
        """E_{ij} scaled; i, j are 0-based positions."""
        return SuperMatrix(
            self.Ntilde, self.iparity, self.e, {(i, j): gauss(coeff)}
        )

    def weight_of_matrix(self, X):
        """Common eps-weight of all entries, or None if mixed/zero."""
        w = None
        for (i, j) in X.entries:
            vec = tuple(
                a - b for a, b in zip(self.weight_vecs[i], self.weight_vecs[j])
            )
            if w is None:
                w = vec
            elif w != vec:
                return None
        return w


# ---------------------------------------------------------------------------
# automorphisms and eigenspace projectors


def omega_big(cfg):
    """The order-2 involution whose fixed subalgebra of sl is osp."""
    g, pt, prime = cfg.g, cfg.iparity, cfg.prime

    def act(X):
        out = {}
        for (a, b), v in X.entries.items():
            # the source entry X_{j'i'} lands at (i, j) = (b', a')
            if prime(a) is None or prime(b) is None:
                raise ValueError("index without a primed partner")
            i, j = prime(b), prime(a)
            sign = -1 if (pt[i] * pt[j] + pt[j]) % 2 == 0 else 1
            c = sign * g[i] * g[j] * v
            acc = out.get((i, j), G_ZERO) + c
            if acc:
                out[(i, j)] = acc
            else:
                out.pop((i, j), None)
        return X._like(out)

    return act


def omega_inner(cfg):
    """Omega acting on the osp block (positions >= 1) of the order-4 family."""
    g, pt = cfg.g, cfg.iparity
    prime = cfg.prime

    def act_block(X, out):
        for (a, b), v in X.entries.items():
            if a == 0 or b == 0:
                continue
            i, j = prime(b), prime(a)
            sign = -1 if (pt[i] * pt[j] + pt[j]) % 2 == 0 else 1
            c = sign * g[i] * g[j] * v
            acc = out.get((i, j), G_ZERO) + c
            if acc:
                out[(i, j)] = acc
            else:
                out.pop((i, j), None)

    return act_block


def flip_middle(cfg):
    """The relabeling involution swapping the two weight-zero middle rows."""
    N = cfg.N
    a, b = N, N + 1  # 0-based positions of the flipped index pair

    def swap(pos):
        if pos == a:
            return b
        if pos == b:
            return a
        return pos

    def act(X):
        out = {}
        for (i, j), v in X.entries.items():
            out[(swap(i), swap(j))] = v
        return X._like(out)

    return act


def xi_map(cfg):
    """The order-4 automorphism on the (2N+2)-size sl of the A4 family."""
    g = cfg.g
    prime = cfg.prime
    block = omega_inner(cfg)

    def act(X):
        out = {}
        for (a, b), v in X.entries.items():
            if a == 0 and b == 0:
                out[(0, 0)] = out.get((0, 0), G_ZERO) - v
            elif a == 0:
                # column entries a_{j'} feed the new column: -i g_{j'} a_{j'}
                j = prime(b)
                c = -G_I * g[b] * v
                acc = out.get((j, 0), G_ZERO) + c
                if acc:
                    out[(j, 0)] = acc
                else:
                    out.pop((j, 0), None)
            elif b == 0:
                # row entries b_{j'} feed the new row: -i g_j b_{j'}
                j = prime(a)
                c = -G_I * g[j] * v
                acc = out.get((0, j), G_ZERO) + c
                if acc:
                    out[(0, j)] = acc
                else:
                    out.pop((0, j), None)
        block(X, out)
        return X._like({pos: v for pos, v in out.items() if v})

    return act


def twist_for(cfg):
    """(map, order, zeta) of the twist; identity twists return (None, 1, 1)."""
    fam = cfg.family
    if fam in ("A", "B", "CD"):
        return None, 1, G_ONE
    if fam in ("B2", "CD2"):
        return omega_big(cfg), 2, gauss(-1)
    if fam == "D2":
        return flip_middle(cfg), 2, gauss(-1)
    if fam == "A4":
        return xi_map(cfg), 4, G_I
    raise ValueError("unknown family %r" % (fam,))


def _zpow(z, k):
    out = G_ONE
    for _ in range(k):
        out = out * z
    return out


def eigen_projector(auto, order, zeta, k):
    """(1/r) sum_m zeta^{-km} auto^m, projecting onto the zeta^k eigenspace."""
    zk = _zpow(zeta, (-k) % order)

    def proj(X):
        acc = X._like({})
        cur = X
        lam = G_ONE
        for m in range(order):
            acc = acc + lam * cur
            if m + 1 < order:
                cur = auto(cur)
                lam = lam * zk
        return Fraction(1, order) * acc

    return proj


# ---------------------------------------------------------------------------
# loop elements


class LoopElement:
    """Finite sum of matrix components X_k (x) t^k plus c and d coordinates."""

    __slots__ = ("ctx", "comps", "c", "d")

    def __init__(self, ctx, comps, c=G_ZERO, d=G_ZERO):
        self.ctx = ctx
        self.comps = {}
        for k, X in comps.items():
            if X.is_zero():
                continue
            if abs(k) > ctx.cfg.window:
                raise TruncationOverflow("degree %d outside window %d" % (k, ctx.cfg.window))
            ctx.check_component(k, X)
            self.comps[k] = X
        self.c = gauss(c)
        self.d = gauss(d)

    def is_zero(self):
        return not self.comps and not self.c and not self.d

    def __eq__(self, other):
        if not isinstance(other, LoopElement):
            return NotImplemented
        return (
            self.comps == other.comps and self.c == other.c and self.d == other.d
        )

    __hash__ = None

    def __add__(self, other):
        comps = dict(self.comps)
        for k, X in other.comps.items():
            Y = comps.get(k)
            Z = X if Y is None else Y + X
            if Z.is_zero():
                comps.pop(k, None)
            else:
                comps[k] = Z
        return LoopElement(self.ctx, comps, self.c + other.c, self.d + other.d)

    def __neg__(self):
        return LoopElement(
            self.ctx, {k: -X for k, X in self.comps.items()}, -self.c, -self.d
        )

    def __sub__(self, other):
        return self + (-other)

    def scale(self, a):
        a = gauss(a)
        if not a:
            return LoopElement(self.ctx, {})
        return LoopElement(
            self.ctx,
            {k: a * X for k, X in self.comps.items()},
            a * self.c,
            a * self.d,
        )

    __rmul__ = scale
    __mul__ = scale

    def bracket(self, other):
        ctx = self.ctx
        comps = {}
        cc = G_ZERO
        for m, X in self.comps.items():
            for n, Y in other.comps.items():
                B = super_bracket(X, Y)
                if not B.is_zero():
                    k = m + n
                    if abs(k) > ctx.cfg.window:
                        raise TruncationOverflow(
                            "bracket degree %d outside window %d" % (k, ctx.cfg.window)
                        )
                    Z = comps.get(k)
                    Z = B if Z is None else Z + B
                    if Z.is_zero():
                        comps.pop(k, None)
                    else:
                        comps[k] = Z
                if m + n == 0 and m != 0:
                    cc = cc + m * ctx.form(X, Y)
        if self.d:
            for n, Y in other.comps.items():
                if n:
                    Z = comps.get(n)
                    B = (self.d * n) * Y
                    Z = B if Z is None else Z + B
                    if Z.is_zero():
                        comps.pop(n, None)
                    else:
                        comps[n] = Z
        if other.d:
            for m, X in self.comps.items():
                if m:
                    Z = comps.get(m)
                    B = (-other.d * m) * X
                    Z = B if Z is None else Z + B
                    if Z.is_zero():
                        comps.pop(m, None)
                    else:
                        comps[m] = Z
        return LoopElement(ctx, comps, cc, G_ZERO)

    def weight(self):
        """Coordinate vector of the common weight, or None if not a
        weight vector.  The delta coordinate carries the loop degree;
        c/d coordinates are weight zero."""
        ctx = self.ctx
        n_coord = len(ctx.datum.labels)
        dslot = n_coord - 2
        w = None
        for k, X in self.comps.items():
            fin = ctx.cfg.weight_of_matrix(X)
            if fin is None:
                return None
            vec = list(fin)
            vec[dslot] += k
            vec = tuple(vec)
            if w is None:
                w = vec
            elif w != vec:
                return None
        zero = tuple([F0] * n_coord)
        if self.c or self.d:
            if w is None:
                w = zero
            elif w != zero:
                return None
        return w if w is not None else zero

    def __repr__(self):
        bits = ["t^%d: %r" % (k, X) for k, X in sorted(self.comps.items())]
        if self.c:
            bits.append("c: %r" % (self.c,))
        if self.d:
            bits.append("d: %r" % (self.d,))
        return "LoopElement(%s)" % ("; ".join(bits) or "0")


# ---------------------------------------------------------------------------
# generator assembly


def _chain_pair(cfg, pos, P, i):
    """E_i, F_i for the eps_i - eps_{i+1} root of a doubled realization."""
    pt, g, e = cfg.iparity, cfg.g, cfg.e
    pi, pj = pt[pos(i)], pt[pos(i + 1)]
    gi, gj = g[pos(i)], g[pos(i + 1)]
    s_e = -1 if (pi * pj + pj) % 2 else 1
    s_f = -1 if (pi * pj) % 2 else 1
    Em = cfg.unit(pos(i), pos(i + 1)) + cfg.unit(P(i + 1), P(i), -s_e * gi * gj)
    Fm = cfg.unit(pos(i + 1), pos(i), e * (-1 if pi else 1)) + cfg.unit(
        P(i), P(i + 1), -e * s_f * gi * gj
    )
    return Em, Fm


def _psi_kind(datum):
    """Which lowest root/weight shape the 0th simple root encodes."""
    a0 = datum.simple[0]
    n = datum.params["N"]
    fin = list(a0[:n])
    if fin == [F0] * n:
        raise ValueError("affine root has no finite part")
    if fin[0] == -2:
        return "C"
    if n >= 2 and fin[1] == -F1:
        return "D"
    return "B"


def build_generators(cfg):
    """Matrices for H_{eps_j}, the finite E_i/F_i, and the degree-one pair.

    Returns a dict with keys "H" (list, j = 1..N), "E"/"F" (lists indexed
    like the datum's simple roots; slot 0 holds the degree +1/-1 matrices
    E0fin/F0fin), and "psi" (the finite weight of E0fin).
    """
    fam, N, e = cfg.family, cfg.N, cfg.e
    datum = cfg.datum
    pt, g = cfg.iparity, cfg.g

    if fam == "A4":
        def pos(lab):
            return lab
    else:
        def pos(lab):
            return lab - 1

    def P(lab):
        # 0-based position of the primed partner of a label
        return cfg.prime(pos(lab))

    def db(lab):
        return cfg.dbar(pos(lab))

    H = []
    for j in range(1, N + 1):
        if fam == "A":
            H.append(cfg.unit(pos(j), pos(j), db(j)))
        else:
            H.append(
                cfg.unit(pos(j), pos(j), db(j)) + cfg.unit(P(j), P(j), -db(j))
            )

    E, F = [], []
    if fam == "A":
        for i in range(1, N):
            E.append(cfg.unit(pos(i), pos(i + 1)))
            F.append(cfg.unit(pos(i + 1), pos(i), db(i)))
    else:
        for i in range(1, N):
            Em, Fm = _chain_pair(cfg, pos, P, i)
            E.append(Em)
            F.append(Fm)
        # end generator
        if fam in ("B", "B2", "A4"):
            pn = pt[pos(N)]
            gn = g[pos(N)]
            E.append(cfg.unit(pos(N), pos(N + 1)) + cfg.unit(P(N + 1), P(N), -gn))
            F.append(
                cfg.unit(pos(N + 1), pos(N), e * (-1 if pn else 1))
                + cfg.unit(P(N), P(N + 1), -e * gn)
            )
        elif fam in ("CD", "CD2"):
            pn = pt[pos(N)]
            if pn:  # symplectic-shaped end
                E.append(cfg.unit(pos(N), P(N)))
                F.append(cfg.unit(P(N), pos(N), 2 * e * (-1 if pn else 1)))
            else:  # orthogonal-shaped end
                gprod = g[pos(N - 1)] * g[P(N)]
                E.append(
                    cfg.unit(pos(N - 1), P(N)) + cfg.unit(pos(N), P(N - 1), -gprod)
                )
                F.append(None)  # printed sign breaks for odd p~(N-1); solved below
        elif fam == "D2":
            N1 = N + 1
            gprod = g[pos(N)] * g[P(N1)]
            Em = (
                cfg.unit(pos(N), pos(N1))
                + cfg.unit(pos(N), P(N1))
                + cfg.unit(pos(N1), P(N), -gprod)
                + cfg.unit(P(N1), P(N), -gprod)
            )
            E.append(Em)
            F.append(None)  # solved below from [E_N, F_N] = H_{alpha_N}
        else:
            raise ValueError("unknown family %r" % (fam,))

    # degree +1 generator matrix
    kind = "A" if fam == "A" else _psi_kind(datum)
    if fam == "A":
        E0 = cfg.unit(pos(N), pos(1))
    elif fam == "D2":
        # the flip swaps the middle index pair, so the degree-1 module
        # takes the antisymmetric combinations; derived from the
        # eigenspace (the printed table shows the symmetric ones)
        E0 = _unique_weight_vector(cfg, _psi_vec(datum), 1)
    elif fam == "A4":
        E0 = cfg.unit(P(1), 0) + cfg.unit(0, pos(1), -g[pos(1)])
    elif kind == "C":
        E0 = cfg.unit(P(1), pos(1))
    elif kind == "D":
        p1, p2 = pt[pos(1)], pt[pos(2)]
        s = (-1 if (p1 * p2 + p2) % 2 else 1) * g[P(1)] * g[pos(2)]
        # theta vectors (untwisted) mix with a minus sign, psi vectors
        # (flip-twisted) with a plus sign
        sign = -1 if fam in ("B", "CD") else 1
        E0 = cfg.unit(P(1), pos(2)) + cfg.unit(P(2), pos(1), sign * s)
    else:  # kind "B": rank-1 flipped family, derived from the eigenspace
        E0 = _unique_weight_vector(cfg, _psi_vec(datum), 1)

    # solve the partners that the tables leave under-determined
    gens = {"H": H, "E": E, "F": F, "E0": E0}
    psi = _psi_vec(datum)
    Hpsi = _h_of_finite(cfg, H, psi)
    gens["F0"] = _solve_partner(cfg, E0, Hpsi, tuple(-x for x in psi), -1)
    gens["psi"] = psi
    for idx, Fm in enumerate(F):
        if Fm is None:
            alpha = datum.simple[idx + 1]
            Ha = _h_of_finite(cfg, H, alpha[: len(psi)])
            F[idx] = _solve_partner(
                cfg, E[idx], Ha, tuple(-x for x in alpha[: len(psi)]), 0
            )
    return gens


def _psi_vec(datum):
    n = datum.params["N"]
    return tuple(datum.simple[0][:n])


def _h_of_finite(cfg, H, coeffs):
    out = cfg.zero()
    for c, Hm in zip(coeffs, H):
        if c:
            out = out + c * Hm
    return out


def _membership_projector(cfg, k):
    """Projector onto the matrices allowed in the degree-k component."""
    fam = cfg.family
    auto, order, zeta = twist_for(cfg)
    if fam == "A":
        return lambda X: X
    if fam in ("B", "CD"):
        fix = eigen_projector(omega_big(cfg), 2, gauss(-1), 0)
        return fix
    if fam in ("B2", "CD2"):
        return eigen_projector(auto, 2, zeta, k)
    if fam == "D2":
        fix = eigen_projector(omega_big(cfg), 2, gauss(-1), 0)
        flip = eigen_projector(auto, 2, zeta, k)
        return lambda X: flip(fix(X))
    if fam == "A4":
        return eigen_projector(auto, 4, zeta, k)
    raise ValueError("unknown family %r" % (fam,))


def _weight_positions(cfg, wvec):
    n = len(wvec)
    out = []
    for i in range(cfg.Ntilde):
        for j in range(cfg.Ntilde):
            vi, vj = cfg.weight_vecs[i], cfg.weight_vecs[j]
            if all(vi[a] - vj[a] == wvec[a] for a in range(n)):
                out.append((i, j))
    return out


def _wvec_full(cfg, fin):
    n_coord = len(cfg.datum.labels)
    return tuple(fin) + (F0,) * (n_coord - len(fin))


def _unique_weight_vector(cfg, fin_weight, k):
    """The (validated unique) weight vector in the degree-k eigenclass."""
    proj = _membership_projector(cfg, k)
    wfull = _wvec_full(cfg, fin_weight)
    rows = []
    for (i, j) in _weight_positions(cfg, wfull):
        Y = proj(cfg.unit(i, j))
        if not Y.is_zero():
            rows.append(Y)
    flat = [Y.flatten() for Y in rows]
    red, pivots = row_reduce(flat)
    if len(pivots) != 1:
        raise ValueError(
            "weight space of %r has dimension %d, expected 1"
            % (fin_weight, len(pivots))
        )
    vec = red[0]
    out = cfg.zero()
    n = cfg.Ntilde
    for idx, v in enumerate(vec):
        if v:
            out = out + cfg.unit(idx // n, idx % n, v)
    return out


def _solve_partner(cfg, Emat, Hmat, fin_weight, k):
    """The W in the degree-k class of the given weight with [Emat, W] = Hmat."""
    proj = _membership_projector(cfg, k)
    wfull = _wvec_full(cfg, fin_weight)
    cand = []
    flats = set()
    for (i, j) in _weight_positions(cfg, wfull):
        Y = proj(cfg.unit(i, j))
        if Y.is_zero():
            continue
        key = tuple(repr(v) for v in Y.flatten())
        if key in flats:
            continue
        flats.add(key)
        cand.append(Y)
    if not cand:
        raise ValueError("empty candidate space for the bracket partner")
    cols = [super_bracket(Emat, Y).flatten() for Y in cand]
    rows = [[col[r] for col in cols] for r in range(len(cols[0]))]
    xs = solve(rows, Hmat.flatten(), G_ZERO)
    if xs is None:
        raise ValueError("no bracket partner in the candidate space")
    W = cfg.zero()
    for x, Y in zip(xs, cand):
        if x:
            W = W + x * Y
    if super_bracket(Emat, W) != Hmat:
        raise ValueError("bracket partner verification failed")
    return W


# ---------------------------------------------------------------------------
# the loop context


class LoopContext:
    """A realized affine algebra: generators, bracket, and bookkeeping."""

    def __init__(self, datum, window=6):
        self.datum = datum
        self.cfg = RealizationConfig(datum, window)
        self.auto, self.order, self.zeta = twist_for(self.cfg)
        self.kappa = F1 if datum.family == "A" else Fraction(1, 2)
        fam = datum.family
        self._fixed = (
            omega_big(self.cfg) if fam in ("B", "CD", "D2") else None
        )
        gens = build_generators(self.cfg)
        self.psi = gens["psi"]
        self.H_eps = [
            LoopElement(self, {0: Hm}) for Hm in gens["H"]
        ]
        self.E = [LoopElement(self, {1: gens["E0"]})]
        self.F = [LoopElement(self, {-1: gens["F0"]})]
        for Em in gens["E"]:
            self.E.append(LoopElement(self, {0: Em}))
        for Fm in gens["F"]:
            self.F.append(LoopElement(self, {0: Fm}))
        self.c = LoopElement(self, {}, c=G_ONE)
        self.d = LoopElement(self, {}, d=G_ONE)
        self.validate_generators()

    # -- membership ---------------------------------------------------------

    def check_component(self, k, X):
        fam = self.datum.family
        if self._fixed is not None and self._fixed(X) != X:
            raise ValueError("degree-%d component not in the fixed subalgebra" % k)
        if self.order > 1:
            lam = _zpow(self.zeta, k % self.order)
            if self.auto(X) != lam * X:
                raise ValueError("degree-%d component in the wrong eigenspace" % k)
        if fam in ("B2", "CD2", "A4") or (fam == "A" and k != 0):
            if X.supertrace():
                raise ValueError("degree-%d component has nonzero supertrace" % k)

    def form(self, X, Y):
        return self.kappa * X.mat(Y).supertrace()

    def zero(self):
        return LoopElement(self, {})

    def element(self, comps, c=G_ZERO, d=G_ZERO):
        return LoopElement(self, comps, c, d)

    def matrix_at(self, k, X):
        return LoopElement(self, {k: X})

    def bracket(self, x, y):
        return x.bracket(y)

    def H_of(self, coeffs):
        """H_lambda for lambda given in coordinates (eps_1..eps_N, delta, Lambda_0)."""
        n = len(self.H_eps)
        out = self.zero()
        for c, Hl in zip(coeffs[:n], self.H_eps):
            if c:
                out = out + c * Hl
        if coeffs[n]:
            out = out + coeffs[n] * self.c
        if coeffs[n + 1]:
            out = out + coeffs[n + 1] * self.d
        return out

    def H_alpha(self, i):
        return self.H_of(self.datum.simple[i])

    # -- structural validation ----------------------------------------------

    def validate_generators(self):
        datum = self.datum
        n1 = len(datum.simple)
        if len(self.E) != n1 or len(self.F) != n1:
            raise ValueError("generator count mismatch")
        for i in range(n1):
            wE = self.E[i].weight()
            if wE is None or tuple(wE) != tuple(datum.simple[i]):
                raise ValueError("E_%d has the wrong weight" % i)
            par = {
                X.parity() for X in self.E[i].comps.values()
            } | {X.parity() for X in self.F[i].comps.values()}
            if par != {datum.parity[i] % 2}:
                raise ValueError("generator %d has the wrong parity" % i)
            for j in range(n1):
                got = self.E[i].bracket(self.F[j])
                want = self.H_alpha(i) if i == j else self.zero()
                if got != want:
                    raise ValueError(
                        "[E_%d, F_%d] fails the Cartan normalization" % (i, j)
                    )

    def generators_json(self):
        """Row-major matrix dumps of all generators, entries as a+bi strings."""

        def dump_g(el):
            return {
                str(k): [
                    [_gstr(X.entries.get((i, j), G_ZERO)) for j in range(X.size)]
                    for i in range(X.size)
                ]
                for k, X in sorted(el.comps.items())
            }

        return {
            "family": self.datum.family,
            "size": self.cfg.Ntilde,
            "E": [dump_g(x) for x in self.E],
            "F": [dump_g(x) for x in self.F],
            "H_eps": [dump_g(x) for x in self.H_eps],
        }


def _gstr(v):
    if not v.im:
        return str(v.re)
    return "%s%+si" % (v.re, v.im)


# ---------------------------------------------------------------------------
# kernel witnesses and multiplicities


def kernel_j_witness(ctx, k):
    """The central witness I (x) t^k killed by every ad E_i / ad F_i.

    Only the balanced (zero total supertrace) sl-based realizations have
    one; the flip-twisted sl family carries it at odd degrees and the
    order-4 family at degrees congruent to 2 mod 4.
    """
    cfg = ctx.cfg
    fam = cfg.family
    if k == 0 or abs(k) > cfg.window:
        raise ValueError("degree must be nonzero and inside the window")
    if fam == "A":
        if sum(cfg.dbar(i) for i in range(cfg.Ntilde)):
            raise ValueError("total supertrace is nonzero; no kernel")
        ent = {(i, i): G_ONE for i in range(cfg.Ntilde)}
    elif fam == "CD2":
        if sum(cfg.dbar(i) for i in range(cfg.N)):
            raise ValueError("total supertrace is nonzero; no kernel")
        if k % 2 == 0:
            raise ValueError("kernel components sit at odd degrees")
        ent = {(i, i): G_ONE for i in range(cfg.Ntilde)}
    elif fam == "A4":
        if sum(cfg.dbar(i) for i in range(1, cfg.N + 1)):
            raise ValueError("total supertrace is nonzero; no kernel")
        if k % 4 != 2:
            raise ValueError("kernel components sit at degrees 2 mod 4")
        ent = {(i, i): G_ONE for i in range(1, cfg.Ntilde)}
        ent[(0, 0)] = gauss(
            sum(-1 if cfg.iparity[i] else 1 for i in range(1, cfg.Ntilde))
        )
    else:
        raise ValueError("family %s has no loop kernel" % fam)
    I = SuperMatrix(cfg.Ntilde, cfg.iparity, cfg.e, ent)
    return ctx.matrix_at(k, I)


def weight_multiplicities(ctx, kmax=None):
    """Exact dimension of every weight space within the degree window."""
    cfg = ctx.cfg
    K = cfg.window if kmax is None else kmax
    fam = cfg.family
    sl_based = fam in ("A", "B2", "CD2", "A4")
    out = {}
    n_coord = len(ctx.datum.labels)
    dslot = n_coord - 2
    for k in range(-K, K + 1):
        proj = _membership_projector(cfg, k)
        groups = {}
        for i in range(cfg.Ntilde):
            for j in range(cfg.Ntilde):
                Y = proj(cfg.unit(i, j))
                if Y.is_zero():
                    continue
                fin = cfg.weight_of_matrix(Y)
                if fin is None:
                    raise ValueError("projector mixed distinct weights")
                groups.setdefault(fin, []).append(Y)
        for fin, mats in groups.items():
            flat = [Y.flatten() for Y in mats]
            red, pivots = row_reduce(flat)
            dim = len(pivots)
            if sl_based and not (fam == "A" and k == 0):
                # cut by the supertrace functional where it is nonzero
                basis = _unflatten_rows(cfg, red[: len(pivots)])
                if any(Y.supertrace() for Y in basis):
                    dim -= 1
            if dim:
                w = list(fin)
                w[dslot] += k
                key = tuple(w)
                out[key] = out.get(key, 0) + dim
    return out


def _unflatten_rows(cfg, rows):
    n = cfg.Ntilde
    mats = []
    for vec in rows:
        ent = {}
        for idx, v in enumerate(vec):
            if v:
                ent[(idx // n, idx % n)] = v
        mats.append(SuperMatrix(n, cfg.iparity, cfg.e, ent))
    return mats


def build_loop(datum, window=6):
    """Convenience constructor for the realized affine algebra."""
    return LoopContext(datum, window)
