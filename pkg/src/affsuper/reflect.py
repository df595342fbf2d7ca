"""Reflections of root data: diagram moves, orbits, and generator images.

A datum can be transformed at each node i.  At an isotropic node whose
root has a mixed-sign finite part this is the odd reflection (the diagram
changes); everywhere else the datum is fixed and the transformation is a
genuine reflection of the weight space.  Either way the map recorded on E
is the reflection in the "dagger" root of the node -- the companion root
obtained by replacing a same-sign pair +-(eps_a + eps_b) with the doubled
root +-2 eps_x -- taken with respect to the auxiliary symmetric form that
is the identity on the eps block.  The dagger roots of all nodes form an
ordinary (non-super) affine root system, invariant along every orbit, and
the reflections generate its affine Weyl group.

Realization-level isomorphisms covering each move are produced by
``lift_images`` with exact scalars, and ``verify_homomorphism`` replays
the presentation axioms and the relation catalog on the images inside a
matrix loop realization.
"""

from fractions import Fraction

from .datum import RootDatum, DynkinDiagram
from .linalg import solve
from .relcheck import instantiate
from .words import E, F, Word, br, breve, eval_classical

F0 = Fraction(0)
F1 = Fraction(1)


# ---------------------------------------------------------------------------
# the auxiliary form (( , )) and dagger roots
# ---------------------------------------------------------------------------


def dd_bil(datum, u, v):
    """The auxiliary form: identity on the eps block, and on the last two
    coordinates (delta, Lambda0) the matrix [[0, 1], [1, 1]]."""
    nb = len(datum.labels) - 2
    acc = sum((u[a] * v[a] for a in range(nb)), F0)
    return acc + u[nb] * v[nb + 1] + u[nb + 1] * v[nb] + u[nb + 1] * v[nb + 1]


def _finite_support(datum, v):
    nb = len(datum.labels) - 2
    return {a: v[a] for a in range(nb) if v[a]}


def is_tine(datum, i):
    """Is the finite part of alpha_i a same-sign unit pair +-(eps_a+eps_b)?

    Such roots sit at a forked (D-shaped) end of the diagram.
    """
    nz = _finite_support(datum, datum.simple[i])
    if len(nz) != 2:
        return False
    c1, c2 = nz.values()
    return abs(c1) == 1 and c1 == c2


def tine_partner(datum, i):
    """The other fork root sharing the finite support of tine i, plus the
    index at which the two tines carry opposite signs."""
    nz = _finite_support(datum, datum.simple[i])
    for j in range(datum.n + 1):
        if j == i:
            continue
        nzj = _finite_support(datum, datum.simple[j])
        if set(nzj) != set(nz):
            continue
        diff = [a for a in nz if nz[a] * nzj[a] < 0]
        if len(diff) == 1:
            return j, diff[0]
    raise ValueError("fork root at node %d has no partner tine" % i)


def dagger_root(datum, i):
    """The companion root of node i: the root itself, except that a
    same-sign pair +-(eps_a + eps_b) is replaced by +-2 eps_x at the index
    x where the partner tine differs in sign."""
    v = list(datum.simple[i])
    if not is_tine(datum, i):
        return tuple(v)
    _, x = tine_partner(datum, i)
    for a in _finite_support(datum, v):
        v[a] = F0
    v[x] = 2 * datum.simple[i][x]
    return tuple(v)


def dagger_datum(datum):
    """The ordinary affine datum spanned by the dagger roots.

    Carried as a RootDatum whose gram matrix is the auxiliary form and
    whose parities are all even.
    """
    nb = len(datum.labels) - 2
    size = nb + 2
    gram = [[F0] * size for _ in range(size)]
    for a in range(nb):
        gram[a][a] = F1
    gram[nb][nb + 1] = gram[nb + 1][nb] = F1
    gram[nb + 1][nb + 1] = F1
    roots = [dagger_root(datum, i) for i in range(datum.n + 1)]
    return RootDatum(gram, roots, [0] * (datum.n + 1), datum.labels,
                     family="dagger")


_END_LETTER = {1: "B", 2: "A", 4: "C"}


def dagger_type(datum):
    """Two-letter type of the dagger diagram, an orbit invariant.

    Cycles are "AA"; otherwise the letters read off the squared lengths of
    the two leaf roots (1 -> B, 4 -> C), longest first.
    """
    dag = dagger_datum(datum)
    dia = dag.diagram()
    if dia.is_cycle() or dag.n == 1 and all(
        dag.norm(i) == 2 for i in range(dag.n + 1)
    ):
        return "AA"
    letters = [
        _END_LETTER[dag.norm(i)]
        for i in range(dag.n + 1)
        if len(dia.neighbors(i)) == 1
    ]
    return "".join(sorted(letters, reverse=True))


def dagger_expansion(datum):
    """Coefficients of each simple root over the dagger roots.

    All entries are nonnegative integers: the positive cone of the datum
    sits inside the positive cone of its dagger companion.
    """
    roots = [dagger_root(datum, i) for i in range(datum.n + 1)]
    ncoord = len(datum.labels)
    rows = [[r[k] for r in roots] for k in range(ncoord)]
    out = []
    for i in range(datum.n + 1):
        c = solve(rows, list(datum.simple[i]), F0)
        if c is None:
            raise ValueError("simple root %d outside the dagger span" % i)
        if any(x.denominator != 1 or x < 0 for x in c):
            raise ValueError(
                "simple root %d is not a nonnegative integer combination "
                "of dagger roots: %r" % (i, c)
            )
        out.append(tuple(int(x) for x in c))
    return tuple(out)


# ---------------------------------------------------------------------------
# reflections
# ---------------------------------------------------------------------------


def _identity(size):
    return tuple(
        tuple(F1 if r == c else F0 for c in range(size)) for r in range(size)
    )


def _mat_apply(m, v):
    return tuple(sum((m[r][c] * v[c] for c in range(len(v))), F0)
                 for r in range(len(m)))


def _mat_mul(a, b):
    size = len(a)
    return tuple(
        tuple(sum((a[r][k] * b[k][c] for k in range(size)), F0)
              for c in range(size))
        for r in range(size)
    )


def _reflection_matrix(datum, u, form=dd_bil):
    """Matrix of v |-> v - 2 form(v,u)/form(u,u) u on coordinates."""
    size = len(datum.labels)
    nn = form(datum, u, u)
    if not nn:
        raise ValueError("cannot reflect in an isotropic vector")
    cols = []
    for c in range(size):
        e = [F0] * size
        e[c] = F1
        val = 2 * form(datum, e, u) / nn
        cols.append([e[r] - val * u[r] for r in range(size)])
    return tuple(tuple(cols[c][r] for c in range(size)) for r in range(size))


class ReflectionMap:
    """A node move: source and target datum, and the reflection on E.

    kind is "isotropic" when the diagram changes (odd reflection at a
    mixed-sign isotropic root) and "dagger-reflection" when the datum is fixed and
    only the weight space moves.  ``dbar_prime`` records the relabelled
    diagonal of the eps block: the odd reflection swaps the two entries
    supporting its root.
    """

    def __init__(self, source, target, index, kind, matrix, dbar_prime):
        self.source = source
        self.target = target
        self.index = index
        self.kind = kind
        self.matrix = matrix
        self.dbar_prime = tuple(dbar_prime)
        if _mat_mul(matrix, matrix) != _identity(len(matrix)):
            raise AssertionError("reflection at node %d is not involutive"
                                 % index)

    def apply(self, v):
        return _mat_apply(self.matrix, v)

    def __repr__(self):
        return "ReflectionMap(i=%d, %s)" % (self.index, self.kind)


def reflect_datum(datum, i):
    """Transform a datum at node i; returns (new datum, ReflectionMap).

    At an isotropic mixed-sign node the simple roots move by the odd
    reflection (alpha_i negated, alpha_i added to every neighbor) and the
    two supporting diagonal entries swap in the relabelled bookkeeping; at
    every other node the datum is unchanged.  Raises ValueError if the
    move would create an even isotropic root.
    """
    nb = len(datum.labels) - 2
    dbar = [datum.gram[a][a] for a in range(nb)]
    iso = datum.norm(i) == 0
    if iso and not is_tine(datum, i):
        ai = datum.simple[i]
        simple, parity = [], []
        for j in range(datum.n + 1):
            if j == i:
                simple.append(tuple(-x for x in ai))
                parity.append(datum.p(i))
            elif datum.pair(i, j):
                simple.append(tuple(x + y for x, y in zip(datum.simple[j], ai)))
                parity.append((datum.p(j) + datum.p(i)) % 2)
            else:
                simple.append(datum.simple[j])
                parity.append(datum.p(j))
        target = RootDatum(datum.gram, simple, parity, datum.labels,
                           family="custom", params=dict(datum.params))
        for j in range(target.n + 1):
            target.dot_class(j)  # raises on an even isotropic root
        a, b = sorted(_finite_support(datum, ai))
        dbar[a], dbar[b] = dbar[b], dbar[a]
        kind = "isotropic"
    else:
        target = datum
        kind = "dagger-reflection"
    matrix = _reflection_matrix(datum, dagger_root(datum, i))
    if kind == "identity" or matrix == _identity(len(datum.labels)):
        kind = "identity"
    return target, ReflectionMap(datum, target, i, kind, matrix, dbar)


def compose_reflections(datum, indices):
    """Apply reflections left to right; returns (final datum, matrix).

    The matrix is the product of the individual reflections, acting on
    coordinates of the seed datum.
    """
    m = _identity(len(datum.labels))
    d = datum
    for i in indices:
        d, rmap = reflect_datum(d, i)
        m = _mat_mul(rmap.matrix, m)
    return d, m


def sigma_matrix(datum, i):
    """Matrix of the reflection in the dagger root of node i, with respect
    to the auxiliary form.  These matrices, taken once and for all on a
    fixed datum, generate the Weyl group of its dagger system."""
    return _reflection_matrix(datum, dagger_root(datum, i))


def transport_clean(datum, i):
    """Does the node reflection transport the simple roots the same way the
    datum move does?

    The two bookkeepings agree except at nodes whose neighbors pair
    differently under the datum form and the auxiliary form: neighbors of
    a fork, doubled-root ends one step away, or a balanced two-node cycle.
    ``lift_images`` weights match ``ReflectionMap.apply`` exactly on the
    nodes this predicate accepts.
    """
    iso = datum.norm(i) == 0
    if iso and not is_tine(datum, i):
        return all(
            dd_bil(datum, datum.simple[j], datum.simple[i]) in (0, -1)
            and (dd_bil(datum, datum.simple[j], datum.simple[i]) == -1)
            == (datum.pair(i, j) != 0)
            for j in range(datum.n + 1)
            if j != i
        )
    u = dagger_root(datum, i)
    nn = dd_bil(datum, u, u)
    if iso:
        jj, _ = tine_partner(datum, i)
        swap = {i: jj, jj: i}
        return all(
            tuple(_mat_apply(sigma_matrix(datum, i), datum.simple[j]))
            == datum.simple[swap.get(j, j)]
            for j in range(datum.n + 1)
        )
    return all(
        2 * datum.pair(i, j) / datum.norm(i)
        == 2 * dd_bil(datum, datum.simple[j], u) / nn
        for j in range(datum.n + 1)
        if j != i
    )


def braid_compatible(datum, i, j):
    """Check the Coxeter relations of the two dagger reflections on E.

    Returns the braid length verified: 2 when the dagger roots are
    orthogonal (the reflections commute), 3 when they pair to +-1.
    Raises ValueError for other pairings.
    """
    v = dd_bil(datum, dagger_root(datum, i), dagger_root(datum, j))
    if v == 0:
        word_a, word_b, m = (i, j), (j, i), 2
    elif abs(v) == 1:
        word_a, word_b, m = (i, j, i), (j, i, j), 3
    else:
        raise ValueError("no Coxeter relation for pairing %s" % (v,))
    si, sj = sigma_matrix(datum, i), sigma_matrix(datum, j)
    ident = _identity(len(datum.labels))
    ma = mb = ident
    for a, b in zip(word_a, word_b):
        ma = _mat_mul(ma, si if a == i else sj)
        mb = _mat_mul(mb, si if b == i else sj)
    if ma != mb:
        raise AssertionError(
            "braid relation fails at (%d, %d) with pairing %s" % (i, j, v)
        )
    return m


# ---------------------------------------------------------------------------
# orbit enumeration
# ---------------------------------------------------------------------------


class OrbitOverflow(RuntimeError):
    """Raised when an orbit exceeds the enumeration cap."""


def _diagram_label(datum):
    """Compact one-line rendering of a decorated diagram."""
    dia = datum.diagram()
    dots = "".join(
        {"white": "o", "gray": "x", "black": "*"}[datum.dot_class(i)]
        for i in range(datum.n + 1)
    )
    edges = ",".join(
        "%d-%d:%s" % (min(e), max(e), v)
        for e, v in sorted(dia.edges.items(), key=lambda kv: sorted(kv[0]))
    )
    return dots + ("|" + edges if edges else "")


class Orbit:
    """BFS closure of a seed datum under all node moves.

    nodes maps canonical diagram keys to representative data; edges are
    (source key, node index, target key) triples, self-loops included.
    """

    def __init__(self, seed, nodes, edges):
        self.seed = seed
        self.seed_key = seed.diagram().canonical_key()
        self.nodes = nodes
        self.edges = edges

    @property
    def size(self):
        return len(self.nodes)

    def __contains__(self, item):
        if isinstance(item, RootDatum):
            item = item.diagram().canonical_key()
        elif isinstance(item, DynkinDiagram):
            item = item.canonical_key()
        return item in self.nodes

    def to_dot(self):
        keys = sorted(self.nodes, key=repr)
        idx = {k: n for n, k in enumerate(keys)}
        lines = ["digraph orbit {"]
        for k in keys:
            lines.append('  n%d [label="%s"];'
                         % (idx[k], _diagram_label(self.nodes[k])))
        for src, i, dst in sorted(self.edges, key=repr):
            lines.append('  n%d -> n%d [label="s(%d)"];'
                         % (idx[src], idx[dst], i))
        lines.append("}")
        return "\n".join(lines)

    def to_json(self):
        keys = sorted(self.nodes, key=repr)
        idx = {k: n for n, k in enumerate(keys)}
        return {
            "seed": idx[self.seed_key],
            "nodes": [
                {
                    "label": _diagram_label(self.nodes[k]),
                    "datum": self.nodes[k].to_json(),
                }
                for k in keys
            ],
            "edges": [
                {"from": idx[s], "index": i, "to": idx[t]}
                for s, i, t in sorted(self.edges, key=repr)
            ],
        }


def enumerate_orbit(seed, cap=10 ** 6):
    """Close a datum under all node moves, up to diagram equivalence."""
    key = seed.diagram().canonical_key()
    nodes = {key: seed}
    edges = []
    queue = [key]
    while queue:
        k = queue.pop(0)
        d = nodes[k]
        for i in range(d.n + 1):
            try:
                target, _ = reflect_datum(d, i)
            except ValueError:
                continue  # degenerate move, e.g. an even isotropic image
            k2 = target.diagram().canonical_key()
            edges.append((k, i, k2))
            if k2 not in nodes:
                if len(nodes) >= cap:
                    raise OrbitOverflow("orbit exceeds %d diagrams" % cap)
                nodes[k2] = target
                queue.append(k2)
    return Orbit(seed, nodes, edges)


# ---------------------------------------------------------------------------
# generator images
# ---------------------------------------------------------------------------


class GeneratorImages:
    """Images of the Chevalley generators under a node isomorphism.

    e_imgs / f_imgs hold one (scalar, word) pair per node; cartan holds
    the coordinate weight of each E-image (the simple roots of the image
    presentation); h_matrix transports Cartan coordinates.
    """

    def __init__(self, source, target, index, kind, e_imgs, f_imgs,
                 cartan, h_matrix):
        self.source = source
        self.target = target
        self.index = index
        self.kind = kind
        self.e_imgs = tuple(e_imgs)
        self.f_imgs = tuple(f_imgs)
        self.cartan = tuple(tuple(v) for v in cartan)
        self.h_matrix = h_matrix

    def presentation(self):
        """The image presentation as a datum: same space, image roots."""
        d = self.source
        parity = [w.parity(d) for _, w in self.e_imgs]
        return RootDatum(d.gram, self.cartan, parity, d.labels,
                         family="custom")

    def __repr__(self):
        return "GeneratorImages(i=%d, %s)" % (self.index, self.kind)


def _factorial(k):
    out = 1
    for t in range(2, k + 1):
        out *= t
    return out


def lift_images(rmap):
    """Exact generator images realizing a node move.

    Isotropic node i (mixed-sign root): E_i -> -(-1)^{p_i} F_i,
    F_i -> -E_i, and on neighbors E_j -> -(-1)^{p_i p_j}/(a_i,a_j)
    [E_j,E_i], F_j -> -[F_j,F_i]; the Cartan is fixed pointwise.

    Non-isotropic node i: E_i -> -(-1)^{p_i} F_i, F_i -> -E_i, and
    E_j -> (1/((-a_ij)_s! d_i^{-a_ij})) times the (-a_ij)-fold lowering
    string of E_j by E_i, F_j -> ((-1)^{a_ij}/(-a_ij)_s!) times the same
    string in F; the Cartan reflects in alpha_i.  Requires all a_ij to be
    nonpositive integers, even ones when p_i = 1.

    A fork tine moves by the transposition with its partner tine.
    """
    datum, i = rmap.source, rmap.index
    n1 = datum.n + 1
    size = len(datum.labels)
    e_imgs, f_imgs, cartan = [], [], []

    if datum.norm(i) == 0 and is_tine(datum, i):
        j, _ = tine_partner(datum, i)
        if datum.parity[j] != datum.parity[i] or datum.norm(j) != datum.norm(i):
            raise ValueError("tine swap at node %d is not an isomorphism" % i)
        perm = {i: j, j: i}
        for k in range(n1):
            t = perm.get(k, k)
            e_imgs.append((F1, E(t)))
            f_imgs.append((F1, F(t)))
            cartan.append(datum.simple[t])
        return GeneratorImages(datum, rmap.target, i, "permutation",
                               e_imgs, f_imgs, cartan, rmap.matrix)

    p_i = datum.p(i)
    if datum.norm(i) == 0:
        for j in range(n1):
            if j == i:
                e_imgs.append((Fraction(-((-1) ** p_i)), F(i)))
                f_imgs.append((Fraction(-1), E(i)))
                cartan.append(tuple(-x for x in datum.simple[i]))
            elif datum.pair(i, j):
                sgn = (-1) ** (p_i * datum.p(j))
                e_imgs.append((Fraction(-sgn) / datum.pair(i, j),
                               br(E(j), E(i))))
                f_imgs.append((Fraction(-1), br(F(j), F(i))))
                cartan.append(tuple(x + y for x, y in
                                    zip(datum.simple[j], datum.simple[i])))
            else:
                e_imgs.append((F1, E(j)))
                f_imgs.append((F1, F(j)))
                cartan.append(datum.simple[j])
        return GeneratorImages(datum, rmap.target, i, "isotropic",
                               e_imgs, f_imgs, cartan, _identity(size))

    d_i = datum.norm(i) / 2
    h_matrix = _reflection_matrix(
        datum, datum.simple[i], form=lambda d, u, v: d.bil(u, v)
    )
    for j in range(n1):
        if j == i:
            e_imgs.append((Fraction(-((-1) ** p_i)), F(i)))
            f_imgs.append((Fraction(-1), E(i)))
            cartan.append(tuple(-x for x in datum.simple[i]))
            continue
        a = 2 * datum.pair(i, j) / datum.norm(i)
        if a.denominator != 1 or a > 0:
            raise ValueError(
                "node %d is not reflectable: a_%d%d = %s" % (i, i, j, a)
            )
        a = int(a)
        if p_i and a % 2:
            raise ValueError(
                "node %d is odd but a_%d%d = %d is not even" % (i, i, j, a)
            )
        if p_i:
            fs = Fraction(_factorial(-a // 2) * 2 ** (-a // 2))
        else:
            fs = Fraction(_factorial(-a))
        e_imgs.append((F1 / (fs * d_i ** (-a)), breve("E", i, j, -a)))
        f_imgs.append((Fraction((-1) ** a) / fs, breve("F", i, j, -a)))
        cartan.append(tuple(
            x - a * y for x, y in zip(datum.simple[j], datum.simple[i])
        ))
    return GeneratorImages(datum, rmap.target, i, "reflection",
                           e_imgs, f_imgs, cartan, h_matrix)


def permutation_images(datum, perm):
    """Images for a relabelling of the nodes that preserves the pairing
    matrix and parities."""
    n1 = datum.n + 1
    if sorted(perm) != list(range(n1)):
        raise ValueError("not a permutation of the nodes")
    for i in range(n1):
        if datum.parity[perm[i]] != datum.parity[i]:
            raise ValueError("permutation breaks parities at %d" % i)
        for j in range(n1):
            if datum.pair(perm[i], perm[j]) != datum.pair(i, j):
                raise ValueError("permutation breaks the pairing at (%d, %d)"
                                 % (i, j))
    e_imgs = [(F1, E(perm[i])) for i in range(n1)]
    f_imgs = [(F1, F(perm[i])) for i in range(n1)]
    cartan = [datum.simple[perm[i]] for i in range(n1)]
    return GeneratorImages(datum, datum, -1, "permutation",
                           e_imgs, f_imgs, cartan, _identity(len(datum.labels)))


# ---------------------------------------------------------------------------
# homomorphism verification
# ---------------------------------------------------------------------------


def eval_images(images, ctx):
    """Evaluate the image words to loop elements of the source context."""
    eb = [eval_classical(w, ctx).scale(c) for c, w in images.e_imgs]
    fb = [eval_classical(w, ctx).scale(c) for c, w in images.f_imgs]
    return eb, fb


def verify_homomorphism(images, ctx, mirror=True, max_letters=None):
    """Check that generator images satisfy the image presentation.

    Evaluates the images in the given realization and checks the
    presentation axioms ([E_j, F_k] = delta_jk H_{beta_j} and the weight
    equations under the Cartan) plus the full relation catalog of the
    image presentation.  Returns a report dict with per-check results.
    """
    datum = images.source
    n1 = datum.n + 1
    eb, fb = eval_images(images, ctx)
    failures = []

    for j in range(n1):
        for k in range(n1):
            got = eb[j].bracket(fb[k])
            want = ctx.H_of(images.cartan[j]) if j == k else ctx.zero()
            if got != want:
                failures.append(("pairing", j, k, repr(got - want)))

    for t in range(n1):
        ht = ctx.H_alpha(t)
        for j in range(n1):
            lam = datum.bil(datum.simple[t], images.cartan[j])
            if ht.bracket(eb[j]) != eb[j].scale(lam):
                failures.append(("weight-E", t, j))
            if ht.bracket(fb[j]) != fb[j].scale(-lam):
                failures.append(("weight-F", t, j))

    pres = images.presentation()
    checked = 0
    for inst in instantiate(pres, mirror=mirror):
        if inst.quantum_only:
            continue
        if max_letters is not None and inst.max_length() > max_letters:
            continue
        acc = ctx.zero()
        for coeff, word in inst.terms:
            acc = acc + eval_classical(word, ctx, ebank=eb, fbank=fb).scale(coeff)
        checked += 1
        if not acc.is_zero():
            failures.append(("catalog", inst.id, inst.indices))
    return {
        "pass": not failures,
        "catalog_checked": checked,
        "failures": failures,
    }


# ---------------------------------------------------------------------------
# deformed-symmetry images at the classical limit (cyclic data only)
# ---------------------------------------------------------------------------


def _cycle_eps_pair(datum, i):
    """The (a, b) eps indices supporting node i of a standard cycle datum,
    with a carrying the positive coefficient."""
    nz = _finite_support(datum, datum.simple[i])
    if len(nz) != 2 or sorted(nz.values()) != [-1, 1]:
        raise ValueError("node %d is not a difference root" % i)
    (a, ca), (b, cb) = nz.items()
    return (a, b) if ca > 0 else (b, a)


def braid_images_classical(datum, i):
    """Deformed-symmetry generator images at the classical limit, for a
    cyclic (type-A affine) datum.

    Returns a dict with "fwd" and "inv" image tables (index -> (scalar,
    word)) and the moved datum.  The scalars follow the relabelled
    diagonal d' and parity p' of the moved datum; composing "fwd" after
    "inv" (or conversely) is the identity on every generator.
    """
    if not datum.diagram().is_cycle():
        raise ValueError("deformed-symmetry images need a cyclic datum")
    target, rmap = reflect_datum(datum, i)
    nb = len(datum.labels) - 2
    dbar = [datum.gram[a][a] for a in range(nb)]
    a_idx, b_idx = _cycle_eps_pair(datum, i)
    d_a, d_b = dbar[a_idx], dbar[b_idx]
    n1 = datum.n + 1
    prev, nxt = (i - 1) % n1, (i + 1) % n1
    p_i = datum.p(i)
    pp_prev = (datum.p(prev) + p_i) % 2
    pp_next = (datum.p(nxt) + p_i) % 2

    fwd = {j: {"E": (F1, E(j)), "F": (F1, F(j))} for j in range(n1)}
    fwd[i] = {"E": (-d_a, F(i)), "F": (-d_b, E(i))}
    fwd[prev] = {
        "E": (d_b, br(E(prev), E(i))),
        "F": (-Fraction((-1) ** (p_i * pp_prev)), br(F(prev), F(i))),
    }
    fwd[nxt] = {
        "E": (d_a * (-1) ** (p_i * pp_next), br(E(nxt), E(i))),
        "F": (-F1, br(F(nxt), F(i))),
    }

    # The inverse map lands back on the original datum, so its d' and p'
    # symbols denote the original diagonal and parities.
    inv = {j: {"E": (F1, E(j)), "F": (F1, F(j))} for j in range(n1)}
    inv[i] = {"E": (-d_b, F(i)), "F": (-d_a, E(i))}
    inv[prev] = {
        "E": (d_a * (-1) ** (p_i * datum.p(prev)), br(E(i), E(prev))),
        "F": (-F1, br(F(i), F(prev))),
    }
    inv[nxt] = {
        "E": (d_b, br(E(i), E(nxt))),
        "F": (-Fraction((-1) ** (p_i * datum.p(nxt))), br(F(i), F(nxt))),
    }
    return {"fwd": fwd, "inv": inv, "target": target, "map": rmap}


def substitute(word, table):
    """Replace generator leaves by (scalar, word) images; returns the
    combined (scalar, word) pair.  Scalars multiply up the tree since
    every image is a single term."""
    if word.kind == "gen":
        return table[word.index][word.tag]
    if word.kind == "cartan":
        return F1, word
    cl, wl = substitute(word.left, table)
    cr, wr = substitute(word.right, table)
    return cl * cr, Word(word.kind, left=wl, right=wr, a=word.a)


def rotation_images(datum, shift):
    """Images E_j -> E_{j+shift} for a cyclic datum, together with the
    rotated datum (diagonal and parities move along)."""
    if not datum.diagram().is_cycle():
        raise ValueError("rotation needs a cyclic datum")
    n1 = datum.n + 1
    perm = [(j + shift) % n1 for j in range(n1)]
    nb = len(datum.labels) - 2
    gram = [list(row) for row in datum.gram]
    # eps index a supports nodes a-1 and a; rotating nodes by `shift`
    # rotates the eps diagonal the same way.
    diag = [datum.gram[a][a] for a in range(nb)]
    for a in range(nb):
        gram[a][a] = diag[(a - shift) % nb]
    parity = [datum.parity[(j - shift) % n1] for j in range(n1)]
    target = RootDatum(gram, datum.simple, parity, datum.labels,
                       family=datum.family, params=dict(datum.params))
    e_imgs = [(F1, E(perm[j])) for j in range(n1)]
    f_imgs = [(F1, F(perm[j])) for j in range(n1)]
    cartan = [target.simple[perm[j]] for j in range(n1)]
    return GeneratorImages(datum, target, shift, "rotation",
                           e_imgs, f_imgs, cartan, _identity(len(datum.labels)))
