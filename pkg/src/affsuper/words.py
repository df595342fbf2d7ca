"""Bracket-word expression trees.

A word is an immutable tree whose leaves are generator symbols (raising
E_i, lowering F_i, or a Cartan element given by coordinates) and whose
internal nodes are brackets.  Three bracket flavors exist:

* ``br``   -- the plain super bracket [x, y],
* ``qbr``  -- the q-deformed super bracket [[x, y]],
* ``abr``  -- the a-twisted bracket [x, y]_a with an explicit scalar a.

Classical evaluation sends both deformed flavors to the plain super
bracket (the deformation parameter goes to 1); they matter only for the
quantum-shuffle side, which interprets words in the free algebra.
"""

from fractions import Fraction


class Word:
    __slots__ = ("kind", "tag", "index", "coeffs", "left", "right", "a")

    def __init__(self, kind, tag=None, index=None, coeffs=None, left=None,
                 right=None, a=None):
        self.kind = kind
        self.tag = tag
        self.index = index
        self.coeffs = coeffs
        self.left = left
        self.right = right
        self.a = a

    # -- constructors -------------------------------------------------

    @classmethod
    def gen(cls, tag, index):
        if tag not in ("E", "F"):
            raise ValueError("generator tag must be E or F")
        return cls("gen", tag=tag, index=int(index))

    @classmethod
    def cartan(cls, coeffs):
        return cls("cartan", coeffs=tuple(Fraction(c) for c in coeffs))

    def __repr__(self):
        if self.kind == "gen":
            return "%s%d" % (self.tag, self.index)
        if self.kind == "cartan":
            return "H(%s)" % (",".join(str(c) for c in self.coeffs))
        if self.kind == "br":
            return "[%r,%r]" % (self.left, self.right)
        if self.kind == "qbr":
            return "[[%r,%r]]" % (self.left, self.right)
        return "[%r,%r]_%s" % (self.left, self.right, self.a)

    def __eq__(self, other):
        if not isinstance(other, Word):
            return NotImplemented
        return (self.kind, self.tag, self.index, self.coeffs, self.a,
                self.left, self.right) == (
                    other.kind, other.tag, other.index, other.coeffs,
                    other.a, other.left, other.right)

    def __hash__(self):
        return hash((self.kind, self.tag, self.index, self.coeffs, self.a,
                     self.left, self.right))

    # -- structure ----------------------------------------------------

    def leaves(self):
        if self.kind in ("gen", "cartan"):
            yield self
        else:
            yield from self.left.leaves()
            yield from self.right.leaves()

    def length(self):
        return sum(1 for _ in self.leaves())

    def weight(self, datum):
        """Coordinate weight: sum of leaf weights."""
        n_coord = len(datum.labels)
        total = [Fraction(0)] * n_coord
        for leaf in self.leaves():
            if leaf.kind == "cartan":
                continue
            sgn = 1 if leaf.tag == "E" else -1
            for a, c in enumerate(datum.simple[leaf.index]):
                total[a] += sgn * c
        return tuple(total)

    def parity(self, datum):
        par = 0
        for leaf in self.leaves():
            if leaf.kind == "gen":
                par ^= datum.parity[leaf.index]
        return par

    def mirror(self):
        """Swap every E leaf with the F leaf of the same index."""
        if self.kind == "gen":
            return Word.gen("F" if self.tag == "E" else "E", self.index)
        if self.kind == "cartan":
            return self
        return Word(self.kind, left=self.left.mirror(),
                    right=self.right.mirror(), a=self.a)


def E(i):
    return Word.gen("E", i)


def F(i):
    return Word.gen("F", i)


def H(coeffs):
    return Word.cartan(coeffs)


def br(x, y):
    return Word("br", left=x, right=y)


def qbr(x, y):
    return Word("qbr", left=x, right=y)


def abr(x, y, a):
    return Word("abr", left=x, right=y, a=a)


def left_comb(first, *rest, node=br):
    """[...[[x0, x1], x2], ..., xk] — the default nesting convention."""
    acc = first
    for w in rest:
        acc = node(acc, w)
    return acc


def right_comb(*args, node=br):
    """[x0, [x1, [..., xk]...]]."""
    acc = args[-1]
    for w in reversed(args[:-1]):
        acc = node(w, acc)
    return acc


def breve(tag, i, j, k, node=br):
    """The k-fold lowering string [...[[G_j, G_i], G_i], ..., G_i]."""
    gi = Word.gen(tag, i)
    acc = Word.gen(tag, j)
    for _ in range(k):
        acc = node(acc, gi)
    return acc


def ad_power(tag, i, j, m, node=br):
    """[G_i, [G_i, ..., [G_i, G_j]...]] with G_i appearing m times."""
    gi = Word.gen(tag, i)
    acc = Word.gen(tag, j)
    for _ in range(m):
        acc = node(gi, acc)
    return acc


def eval_classical(word, ctx, ebank=None, fbank=None):
    """Evaluate a word in a matrix loop realization.

    Deformed bracket flavors collapse to the plain super bracket.  The
    generator banks default to the context's Chevalley generators but can
    be overridden, e.g. to evaluate a word on reflection images.
    """
    if word.kind == "gen":
        if word.tag == "E":
            bank = ctx.E if ebank is None else ebank
        else:
            bank = ctx.F if fbank is None else fbank
        return bank[word.index]
    if word.kind == "cartan":
        return ctx.H_of(word.coeffs)
    return eval_classical(word.left, ctx, ebank, fbank).bracket(
        eval_classical(word.right, ctx, ebank, fbank)
    )
