"""Exact arithmetic for almost automorphisms of forests of rooted q-ary trees.

An element is stored as a tree pair: a partition of the domain forest into
balls (a complete prefix code per tree), a partition of the codomain forest,
a bijection between the two leaf sets, and one finitely supported labeled
isometry per leaf describing how the ball is carried over.  Every permutation
label is required to lie in a fixed subgroup D of Sym(q), which makes the
induced boundary map D-admissible.

Only elements whose labels have finite support are representable.  They form
a dense subgroup of the full topological group and are closed under
composition and inversion, so all computations below stay exact.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from enum import Enum
from random import Random

from .perms import (
    Perm,
    close_under_group_ops,
    compose_perms,
    full_symmetric,
    identity_perm,
    invert_perm,
    is_perm,
    perm_to_word,
    word_to_perm,
)

Word = tuple[int, ...]
Address = tuple[int, Word]  # (summand 1-based, digit word)

#: Sentinel returned by common_prefix_length for points in different summands;
#: chosen so that exp(-result) is literally the (infinite) visual distance.
INFINITE_DISTANCE = float("-inf")


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class Config:
    """Branching degree q, number of boundary copies r, and the label group D."""

    q: int
    r: int
    generators: tuple[Perm, ...]

    def __post_init__(self):
        if self.q < 2:
            raise ValueError("q must be at least 2")
        if self.r < 1:
            raise ValueError("r must be at least 1")
        object.__setattr__(self, "_elements", close_under_group_ops(self.generators, self.q))

    @property
    def group(self) -> frozenset[Perm]:
        return self._elements  # type: ignore[attr-defined]

    @property
    def group_order(self) -> int:
        return len(self.group)

    def sorted_group(self) -> list[Perm]:
        return sorted(self.group)

    @staticmethod
    def make(q: int, r: int, subgroup: str | list[str] = "sym") -> "Config":
        """Build a Config from a subgroup spec.

        Accepts "sym", "triv", or a list of 1-based permutation words.
        """
        if subgroup == "sym":
            gens = tuple(sorted(full_symmetric(q)))
        elif subgroup == "triv":
            gens = (identity_perm(q),)
        else:
            gens = tuple(word_to_perm(w) for w in subgroup)
            for g in gens:
                if len(g) != q:
                    raise ValueError(f"generator {perm_to_word(g)} is not on {q} letters")
        return Config(q, r, gens)


# ---------------------------------------------------------------------------
# addresses and leaf partitions


def format_address(a: Address) -> str:
    s, w = a
    return f"{s}:" + "".join(str(d) for d in w)


def parse_address(text: str) -> Address:
    s_str, _, w_str = text.partition(":")
    return (int(s_str), tuple(int(ch) for ch in w_str))


def common_prefix_length(x: Address, y: Address) -> int | float:
    """Length of the common initial segment of two boundary points.

    Points in different summands are infinitely far apart, so the sentinel
    INFINITE_DISTANCE is returned there; the visual distance is exp(-result)
    in every case.
    """
    if x[0] != y[0]:
        return INFINITE_DISTANCE
    n = 0
    for a, b in zip(x[1], y[1]):
        if a != b:
            break
        n += 1
    return n


def visual_distance(x: Address, y: Address) -> float:
    return math.exp(-common_prefix_length(x, y))


def _check_complete_prefix_code(words: list[Word], q: int) -> bool:
    """True iff words form a complete prefix code of the rooted q-ary tree."""
    if len(words) == 1:
        return words[0] == ()
    if not words:
        return False
    groups: list[list[Word]] = [[] for _ in range(q)]
    for w in words:
        if not w:  # root together with other words: overlap
            return False
        groups[w[0]].append(w[1:])
    return all(_check_complete_prefix_code(g, q) for g in groups)


@dataclass(frozen=True)
class LeafPartition:
    """Partition of an n-summand forest boundary into balls.

    Leaves are addresses, canonically sorted by (summand, word); per summand
    they form a complete prefix code.
    """

    n: int
    leaves: tuple[Address, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("summand count must be at least 1")
        if list(self.leaves) != sorted(self.leaves):
            raise ValueError("leaves must be canonically sorted")

    def validate(self, q: int) -> None:
        by_summand: dict[int, list[Word]] = {s: [] for s in range(1, self.n + 1)}
        for s, w in self.leaves:
            if s not in by_summand:
                raise ValueError(f"summand {s} out of range 1..{self.n}")
            if any(d < 0 or d >= q for d in w):
                raise ValueError(f"digit out of range in {w}")
            by_summand[s].append(w)
        for s, words in by_summand.items():
            if not _check_complete_prefix_code(words, q):
                raise ValueError(f"summand {s}: leaves are not a complete prefix code")

    @staticmethod
    def roots(n: int) -> "LeafPartition":
        return LeafPartition(n, tuple((s, ()) for s in range(1, n + 1)))

    def leaf_index_of(self, a: Address) -> int:
        """Index of the unique leaf that is a prefix of address a."""
        s, w = a
        # a prefix sorts immediately before all of its extensions
        i = bisect_right(self.leaves, a) - 1
        if i >= 0:
            ls, lw = self.leaves[i]
            if ls == s and len(lw) <= len(w) and w[: len(lw)] == lw:
                return i
        raise KeyError(f"no leaf above {format_address(a)}")

    def max_depth(self) -> int:
        return max((len(w) for _, w in self.leaves), default=0)


def common_refinement(p1: LeafPartition, p2: LeafPartition) -> LeafPartition:
    """Coarsest partition refining both; every leaf extends a leaf of each."""
    if p1.n != p2.n:
        raise ValueError("partitions live on different summand counts")
    set1, set2 = set(p1.leaves), set(p2.leaves)
    out: list[Address] = []
    for a in p1.leaves:
        s, w = a
        if a in set2:
            out.append(a)
            continue
        # a is strictly nested with some leaves of p2
        deeper = [b for b in p2.leaves if b[0] == s and len(b[1]) > len(w) and b[1][: len(w)] == w]
        if deeper:
            out.extend(deeper)
        else:
            out.append(a)  # a sits below a leaf of p2
    out = sorted(set(out))
    return LeafPartition(p1.n, tuple(out))


# ---------------------------------------------------------------------------
# labeled isometries (finitely supported portraits)


@dataclass(frozen=True)
class LabeledIsometry:
    """D-admissible automorphism of one rooted q-ary tree with finite support.

    labels maps tree vertices (digit words) to non-identity permutations; the
    action on a word applies the label at each visited domain vertex.
    """

    q: int
    labels: tuple[tuple[Word, Perm], ...]  # sorted, identity labels omitted

    @staticmethod
    def make(q: int, labels: dict[Word, Perm]) -> "LabeledIsometry":
        ident = identity_perm(q)
        items = tuple(sorted((w, p) for w, p in labels.items() if p != ident))
        for w, p in items:
            if len(p) != q or not is_perm(p):
                raise ValueError(f"label at {w} is not a permutation of {q} letters")
        return LabeledIsometry(q, items)

    @staticmethod
    def identity(q: int) -> "LabeledIsometry":
        return LabeledIsometry(q, ())

    def label_dict(self) -> dict[Word, Perm]:
        return dict(self.labels)

    @property
    def is_identity(self) -> bool:
        return not self.labels

    def min_support_depth(self) -> int | float:
        """Depth of the shallowest non-identity label (inf if identity)."""
        return min((len(w) for w, _ in self.labels), default=math.inf)

    def check_labels_in(self, group: frozenset[Perm]) -> None:
        for w, p in self.labels:
            if p not in group:
                raise ValueError(f"label {perm_to_word(p)} at {w} is outside D")

    def apply_word(self, word: Word) -> Word:
        if not self.labels:
            return word
        table = self.label_dict()
        prefixes = {w[:i] for w, _ in self.labels for i in range(len(w) + 1)}
        out: list[int] = []
        cur: Word = ()
        for i, d in enumerate(word):
            if cur not in prefixes:
                out.extend(word[i:])
                break
            p = table.get(cur)
            out.append(p[d] if p else d)
            cur = cur + (d,)
        return tuple(out)

    def restrict(self, u: Word) -> "LabeledIsometry":
        """The induced automorphism of the subtree below u, rebased to a root."""
        if not self.labels:
            return self
        sub = {w[len(u):]: p for w, p in self.labels if w[: len(u)] == u}
        return LabeledIsometry.make(self.q, sub)

    def compose(self, other: "LabeledIsometry") -> "LabeledIsometry":
        """self after other."""
        if self.q != other.q:
            raise ValueError("mismatched arities")
        if not other.labels:
            return self
        if not self.labels:
            return other
        mine = self.label_dict()
        theirs = other.label_dict()
        support = set(theirs)
        inv_other = other.inverse()
        support |= {inv_other.apply_word(w) for w in mine}
        ident = identity_perm(self.q)
        out: dict[Word, Perm] = {}
        for v in support:
            p = compose_perms(mine.get(other.apply_word(v), ident), theirs.get(v, ident))
            if p != ident:
                out[v] = p
        return LabeledIsometry.make(self.q, out)

    def inverse(self) -> "LabeledIsometry":
        if not self.labels:
            return self
        out = {self.apply_word(w): invert_perm(p) for w, p in self.labels}
        return LabeledIsometry.make(self.q, out)

    def prepend(self, digit: int, root_label: Perm | None = None) -> dict[Word, Perm]:
        """Labels of this portrait reattached below child `digit` (helper for merges)."""
        out = {(digit,) + w: p for w, p in self.labels}
        if root_label is not None and root_label != identity_perm(self.q):
            out[()] = root_label
        return out


# ---------------------------------------------------------------------------
# tree pairs


class ArrowKind(Enum):
    MERGE = "merge"
    VERY_ELEMENTARY_MERGE = "very_elementary_merge"
    TRANSFORMATION = "transformation"
    STRICT_TRANSFORMATION = "strict_transformation"
    NOT_AN_ARROW = "not_an_arrow"


def is_merge_kind(kind: ArrowKind) -> bool:
    return kind in (ArrowKind.MERGE, ArrowKind.VERY_ELEMENTARY_MERGE)


def is_transformation_kind(kind: ArrowKind) -> bool:
    return kind in (ArrowKind.TRANSFORMATION, ArrowKind.STRICT_TRANSFORMATION)


@dataclass(frozen=True)
class TreePair:
    """A D-admissible local similarity from an n-summand to an m-summand forest.

    Group elements have n = m = config.r; maps with codomain over config.r
    summands play the role of vertices acted on by the group, with
    level = n the number of domain summands.
    """

    config: Config
    domain: LeafPartition
    codomain: LeafPartition
    leaf_map: tuple[int, ...]  # domain leaf i -> index into codomain.leaves
    decorations: tuple[LabeledIsometry, ...]  # one per domain leaf

    def __post_init__(self):
        k = len(self.domain.leaves)
        if len(self.codomain.leaves) != k:
            raise ValueError("leaf counts differ")
        if sorted(self.leaf_map) != list(range(k)):
            raise ValueError("leaf map is not a bijection")
        if len(self.decorations) != k:
            raise ValueError("need one decoration per domain leaf")
        self.domain.validate(self.config.q)
        self.codomain.validate(self.config.q)
        for dec in self.decorations:
            if dec.q != self.config.q:
                raise ValueError("decoration arity mismatch")
            dec.check_labels_in(self.config.group)

    @property
    def level(self) -> int:
        return self.domain.n

    @property
    def is_group_shaped(self) -> bool:
        return self.domain.n == self.codomain.n == self.config.r

    def image_leaf(self, i: int) -> Address:
        return self.codomain.leaves[self.leaf_map[i]]

    def apply(self, a: Address) -> Address:
        """Image of a boundary point given by a sufficiently deep finite address."""
        i = self.domain.leaf_index_of(a)
        s, w = self.domain.leaves[i]
        ms, mw = self.image_leaf(i)
        tail = a[1][len(w):]
        return (ms, mw + self.decorations[i].apply_word(tail))

    def act_on_depth(self, depth: int) -> dict[Address, Address]:
        """The full action on all addresses of the given depth."""
        q = self.config.q
        out: dict[Address, Address] = {}
        for i, (s, w) in enumerate(self.domain.leaves):
            if len(w) > depth:
                raise ValueError("depth is shallower than the domain partition")
            ms, mw = self.image_leaf(i)
            dec = self.decorations[i]
            for tail in _all_words(q, depth - len(w)):
                out[(s, w + tail)] = (ms, mw + dec.apply_word(tail))
        return out


def _all_words(q: int, length: int):
    if length == 0:
        yield ()
        return
    for w in _all_words(q, length - 1):
        for d in range(q):
            yield w + (d,)


def identity_element(config: Config, n: int | None = None) -> TreePair:
    n = config.r if n is None else n
    part = LeafPartition.roots(n)
    decs = tuple(LabeledIsometry.identity(config.q) for _ in range(n))
    return TreePair(config, part, part, tuple(range(n)), decs)


def isometry_element(config: Config, portraits: list[LabeledIsometry] | None = None,
                     n: int | None = None) -> TreePair:
    """The strict transformation acting by the given portrait in each summand."""
    n = config.r if n is None else n
    if portraits is None:
        portraits = [LabeledIsometry.identity(config.q)] * n
    if len(portraits) != n:
        raise ValueError("need one portrait per summand")
    part = LeafPartition.roots(n)
    return TreePair(config, part, part, tuple(range(n)), tuple(portraits))


def _raw_inverse(g: TreePair) -> TreePair:
    k = len(g.domain.leaves)
    inv_map = [0] * k
    for i, j in enumerate(g.leaf_map):
        inv_map[j] = i
    decs = tuple(g.decorations[inv_map[j]].inverse() for j in range(k))
    return TreePair(g.config, g.codomain, g.domain, tuple(inv_map), decs)


def inverse(g: TreePair) -> TreePair:
    return canonical_form(_raw_inverse(g))


def refine_domain(g: TreePair, refined: LeafPartition) -> TreePair:
    """Rewrite g on a finer domain partition without changing the boundary map."""
    if refined.n != g.domain.n:
        raise ValueError("summand count mismatch")
    new_entries = []  # (domain address, image address, decoration)
    for a in refined.leaves:
        i = g.domain.leaf_index_of(a)
        s, w = g.domain.leaves[i]
        u = a[1][len(w):]
        dec = g.decorations[i]
        ms, mw = g.image_leaf(i)
        new_entries.append((a, (ms, mw + dec.apply_word(u)), dec.restrict(u)))
    new_entries.sort(key=lambda e: e[0])
    images = sorted(e[1] for e in new_entries)
    index = {a: i for i, a in enumerate(images)}
    codomain = LeafPartition(g.codomain.n, tuple(images))
    leaf_map = tuple(index[e[1]] for e in new_entries)
    decs = tuple(e[2] for e in new_entries)
    return TreePair(g.config, refined, codomain, leaf_map, decs)


def compose(g: TreePair, h: TreePair) -> TreePair:
    """The element g∘h (h applied first), in canonical form."""
    if g.config != h.config:
        raise ValueError("config mismatch")
    if g.domain.n != h.codomain.n:
        raise ValueError("summand counts do not compose")
    mid = common_refinement(h.codomain, g.domain)
    h_ref = _raw_inverse(refine_domain(_raw_inverse(h), mid))
    g_ref = refine_domain(g, mid)
    # h_ref.codomain == g_ref.domain == mid up to canonical sorting
    entries = []
    mid_index = {a: i for i, a in enumerate(g_ref.domain.leaves)}
    for i, a in enumerate(h_ref.domain.leaves):
        j = mid_index[h_ref.image_leaf(i)]
        img = g_ref.image_leaf(j)
        dec = g_ref.decorations[j].compose(h_ref.decorations[i])
        entries.append((a, img, dec))
    images = sorted(e[1] for e in entries)
    index = {a: i for i, a in enumerate(images)}
    result = TreePair(
        g.config,
        h_ref.domain,
        LeafPartition(g.codomain.n, tuple(images)),
        tuple(index[e[1]] for e in entries),
        tuple(e[2] for e in entries),
    )
    return canonical_form(result)


def expand_leaf(g: TreePair, leaf_index: int) -> TreePair:
    """Split one domain leaf (and its image) one level down; inverse of a cherry merge."""
    q = g.config.q
    s, w = g.domain.leaves[leaf_index]
    ms, mw = g.image_leaf(leaf_index)
    dec = g.decorations[leaf_index]
    root = dec.label_dict().get((), identity_perm(q))
    dom = [a for i, a in enumerate(g.domain.leaves) if i != leaf_index]
    cod = [a for j, a in enumerate(g.codomain.leaves) if j != g.leaf_map[leaf_index]]
    pairs = {g.domain.leaves[i]: (g.image_leaf(i), g.decorations[i])
             for i in range(len(g.domain.leaves)) if i != leaf_index}
    for d in range(q):
        da = (s, w + (d,))
        ia = (ms, mw + (root[d],))
        dom.append(da)
        cod.append(ia)
        pairs[da] = (ia, dec.restrict((d,)))
    dom.sort()
    cod.sort()
    cod_index = {a: i for i, a in enumerate(cod)}
    leaf_map = tuple(cod_index[pairs[a][0]] for a in dom)
    decs = tuple(pairs[a][1] for a in dom)
    return TreePair(g.config, LeafPartition(g.domain.n, tuple(dom)),
                    LeafPartition(g.codomain.n, tuple(cod)), leaf_map, decs)


def canonical_form(g: TreePair) -> TreePair:
    """The unique reduced representative of the boundary map of g.

    A cherry (q sibling domain leaves mapped onto q sibling codomain leaves)
    is merged one level up whenever the induced sibling permutation lies in D;
    the merged decoration absorbs the permutation and the child decorations.
    Reduction is repeated until no cherry qualifies.
    """
    q = g.config.q
    D = g.config.group
    dom = list(g.domain.leaves)
    pairs = {a: (g.image_leaf(i), g.decorations[i]) for i, a in enumerate(dom)}
    changed = True
    while changed:
        changed = False
        parents: dict[Address, list[Address]] = {}
        leafset = set(dom)
        for (s, w) in dom:
            if w:
                parents.setdefault((s, w[:-1]), []).append((s, w))
        for (s, pw), children in parents.items():
            if len(children) != q:
                continue
            if any((s, pw + (d,)) not in leafset for d in range(q)):
                continue
            imgs = [pairs[(s, pw + (d,))][0] for d in range(q)]
            words = [w for _, w in imgs]
            if any(not w for w in words):
                continue
            t = imgs[0][0]
            if any(a[0] != t for a in imgs):
                continue
            stem = words[0][:-1]
            if any(w[:-1] != stem for w in words):
                continue
            tau = tuple(words[d][-1] for d in range(q))
            if not is_perm(tau) or tau not in D:
                continue
            # merge the cherry
            merged_labels: dict[Word, Perm] = {}
            if tau != identity_perm(q):
                merged_labels[()] = tau
            for d in range(q):
                child = (s, pw + (d,))
                for w2, p in pairs[child][1].labels:
                    merged_labels[(d,) + w2] = p
                del pairs[child]
                dom.remove(child)
            new_leaf = (s, pw)
            dom.append(new_leaf)
            pairs[new_leaf] = ((t, stem), LabeledIsometry.make(q, merged_labels))
            changed = True
            break
    dom.sort()
    cod = sorted(pairs[a][0] for a in dom)
    cod_index = {a: i for i, a in enumerate(cod)}
    return TreePair(
        g.config,
        LeafPartition(g.domain.n, tuple(dom)),
        LeafPartition(g.codomain.n, tuple(cod)),
        tuple(cod_index[pairs[a][0]] for a in dom),
        tuple(pairs[a][1] for a in dom),
    )


# ---------------------------------------------------------------------------
# decision procedures


def forest_portraits(g: TreePair) -> list[LabeledIsometry] | None:
    """Portraits of g as a strict transformation, or None if g is not one.

    g lies in the product of the D-admissible isometry groups of the summands
    iff each summand maps to itself by a tree automorphism all of whose vertex
    permutations (including those induced above the leaves) lie in D.
    """
    if g.domain.n != g.codomain.n:
        return None
    q = g.config.q
    D = g.config.group
    by_summand: dict[int, list[tuple[Word, Word, LabeledIsometry]]] = {}
    for i, (s, w) in enumerate(g.domain.leaves):
        ms, mw = g.image_leaf(i)
        if ms != s or len(mw) != len(w):
            return None
        by_summand.setdefault(s, []).append((w, mw, g.decorations[i]))

    def extract(entries: list[tuple[Word, Word, LabeledIsometry]]) -> dict[Word, Perm] | None:
        # entries: (domain word, image word, decoration), words relative to a ball
        if len(entries) == 1 and entries[0][0] == ():
            return entries[0][2].label_dict()
        tau = [None] * q
        groups: list[list[tuple[Word, Word, LabeledIsometry]]] = [[] for _ in range(q)]
        for w, mw, dec in entries:
            d, e = w[0], mw[0]
            if tau[d] is None:
                tau[d] = e
            elif tau[d] != e:
                return None
            groups[d].append((w[1:], mw[1:], dec))
        tau_p = tuple(tau)
        if None in tau or not is_perm(tau_p) or tau_p not in D:
            return None
        labels: dict[Word, Perm] = {}
        if tau_p != identity_perm(q):
            labels[()] = tau_p
        for d in range(q):
            sub = extract(groups[d])
            if sub is None:
                return None
            for w, p in sub.items():
                labels[(d,) + w] = p
        return labels

    portraits = []
    for s in range(1, g.domain.n + 1):
        labels = extract(by_summand.get(s, []))
        if labels is None:
            return None
        portraits.append(LabeledIsometry.make(q, labels))
    return portraits


def depth_triviality(g: TreePair) -> int | float | None:
    """Largest k with g trivial on all vertices to depth k in every summand.

    Returns None when g is not a D-admissible isometry of each summand, and
    math.inf for the identity.
    """
    portraits = forest_portraits(g)
    if portraits is None:
        return None
    return min((p.min_support_depth() for p in portraits), default=math.inf)


def classify_arrow(alpha: TreePair) -> ArrowKind:
    """Most specific kind of a local similarity as a poset arrow."""
    a = canonical_form(alpha)
    n, m = a.domain.n, a.codomain.n
    if n == m:
        if all(w == () for _, w in a.domain.leaves) and all(w == () for _, w in a.codomain.leaves):
            sigma = tuple(a.image_leaf(i)[0] for i in range(n))
            if sigma == tuple(range(1, n + 1)):
                return ArrowKind.STRICT_TRANSFORMATION
            return ArrowKind.TRANSFORMATION
        return ArrowKind.NOT_AN_ARROW
    if n > m:
        if any(w != () for _, w in a.domain.leaves):
            return ArrowKind.NOT_AN_ARROW
        counts = [0] * (m + 1)
        for i in range(n):
            counts[a.image_leaf(i)[0]] += 1
        if all(c in (1, a.config.q) for c in counts[1:]):
            return ArrowKind.VERY_ELEMENTARY_MERGE
        return ArrowKind.MERGE
    return ArrowKind.NOT_AN_ARROW


def stabilizer_test(gamma: TreePair, phi: TreePair) -> bool:
    """Whether gamma fixes the class of phi under postcomposition.

    The stabilizer consists exactly of the conjugates of strict
    transformations, so the test conjugates gamma back through phi and
    classifies the result.
    """
    if gamma.config != phi.config:
        raise ValueError("config mismatch")
    if phi.codomain.n != phi.config.r or gamma.domain.n != phi.config.r:
        raise ValueError("gamma must act on the codomain forest of phi")
    conj = compose(inverse(phi), compose(gamma, phi))
    return classify_arrow(conj) == ArrowKind.STRICT_TRANSFORMATION


def _internal_vertices(part: LeafPartition) -> list[Address]:
    """Proper ancestors of the leaves (vertices above the partition)."""
    out = set()
    for s, w in part.leaves:
        for i in range(len(w)):
            out.add((s, w[:i]))
    return sorted(out)


def _single_label_isometry(config: Config, n: int, vertex: Address, label: Perm) -> TreePair:
    portraits = [LabeledIsometry.identity(config.q) for _ in range(n)]
    portraits[vertex[0] - 1] = LabeledIsometry.make(config.q, {vertex[1]: label})
    return isometry_element(config, portraits, n)


def conjugates_into(phi: TreePair, kprime: int, k: int) -> bool:
    """Whether phi carries every depth-kprime-trivial strict transformation of
    its domain forest into a depth-k-trivial one of its codomain forest.

    Labels strictly below a domain leaf conjugate to labels at a computable
    depth, so only those cases are checked analytically; the finitely many
    labels above the leaves are conjugated explicitly.
    """
    phi_inv = inverse(phi)
    for i, (s, w) in enumerate(phi.domain.leaves):
        dm = len(phi.image_leaf(i)[1])
        # a label at relative depth t >= max(0, kprime - len(w)) below this leaf
        # lands at depth dm + t in the codomain
        if dm + max(0, kprime - len(w)) < k:
            return False
    gens = [p for p in phi.config.sorted_group() if p != identity_perm(phi.config.q)]
    for v in _internal_vertices(phi.domain):
        if len(v[1]) < kprime:
            continue
        for p in gens:
            nu = _single_label_isometry(phi.config, phi.domain.n, v, p)
            conj = compose(phi, compose(nu, phi_inv))
            dt = depth_triviality(conj)
            if dt is None or dt < k:
                return False
    return True


def subnormal_depth(phi: TreePair, k: int) -> int:
    """Minimal k' such that conjugation by phi maps depth-k'-trivial strict
    transformations into depth-k-trivial ones.

    Searches upward from 0; the leaf depth offsets of phi give a guaranteed
    sufficient upper bound, so the search terminates.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    bound = 0
    for i, (s, w) in enumerate(phi.domain.leaves):
        dm = len(phi.image_leaf(i)[1])
        bound = max(bound, len(w), k - dm + len(w))
    for kprime in range(0, bound + 1):
        if conjugates_into(phi, kprime, k):
            return kprime
    return bound  # unreachable: the bound always satisfies the containment


def thompson_membership(g: TreePair) -> dict[str, bool]:
    """Flags for the canonical representative of a group element.

    in_v: every decoration of the canonical form is trivial.
    in_f: additionally the leaf bijection is order-preserving.
    """
    c = canonical_form(g)
    in_v = all(dec.is_identity for dec in c.decorations)
    in_f = in_v and c.leaf_map == tuple(range(len(c.leaf_map)))
    return {"in_v": in_v, "in_f": in_f}


# ---------------------------------------------------------------------------
# serialization

def element_to_json(g: TreePair) -> dict:
    return {
        "q": g.config.q,
        "r": g.config.r,
        "D": [perm_to_word(p) for p in g.config.sorted_group()],
        "domain": [format_address(a) for a in g.domain.leaves],
        "codomain": [format_address(a) for a in g.codomain.leaves],
        "map": list(g.leaf_map),
        "decorations": [
            {"".join(str(d) for d in w): perm_to_word(p) for w, p in dec.labels}
            for dec in g.decorations
        ],
    }


def element_from_json(data: dict) -> TreePair:
    try:
        q = int(data["q"])
        r = int(data["r"])
        gens = tuple(word_to_perm(w) for w in data["D"])
        config = Config(q, r, gens)
        domain = [parse_address(t) for t in data["domain"]]
        codomain = [parse_address(t) for t in data["codomain"]]
        n_dom = max((a[0] for a in domain), default=r)
        n_cod = max((a[0] for a in codomain), default=r)
        decs = tuple(
            LabeledIsometry.make(q, {tuple(int(ch) for ch in w): word_to_perm(p)
                                     for w, p in d.items()})
            for d in data["decorations"]
        )
        return TreePair(
            config,
            LeafPartition(max(n_dom, 1), tuple(sorted(domain))),
            LeafPartition(max(n_cod, 1), tuple(sorted(codomain))),
            tuple(int(i) for i in data["map"]),
            decs,
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise ValueError(f"malformed element JSON: {exc}") from exc


# ---------------------------------------------------------------------------
# random elements (seeded; used by property tests and the CLI self-checks)


def random_partition(rng: Random, config: Config, n: int, max_depth: int) -> LeafPartition:
    leaves: list[Address] = []

    def grow(s: int, w: Word):
        if len(w) < max_depth and rng.random() < 0.45:
            for d in range(config.q):
                grow(s, w + (d,))
        else:
            leaves.append((s, w))

    for s in range(1, n + 1):
        grow(s, ())
    return LeafPartition(n, tuple(sorted(leaves)))


def random_labeled_isometry(rng: Random, config: Config, max_depth: int = 2) -> LabeledIsometry:
    labels: dict[Word, Perm] = {}
    if config.group_order > 1 and rng.random() < 0.5:
        elems = config.sorted_group()
        for _ in range(rng.randrange(1, 3)):
            depth = rng.randrange(0, max_depth + 1)
            w = tuple(rng.randrange(config.q) for _ in range(depth))
            labels[w] = elems[rng.randrange(len(elems))]
    return LabeledIsometry.make(config.q, labels)


def random_partition_with_leaf_count(rng: Random, config: Config, n: int,
                                     count: int, tries: int = 200) -> LeafPartition:
    """A partition of an n-summand forest with exactly `count` leaves."""
    q = config.q
    if count < n or (count - n) % (q - 1) != 0:
        raise ValueError(f"no partition of {n} summands with {count} leaves")
    splits = (count - n) // (q - 1)
    for _ in range(tries):
        leaves = {(s, ()) for s in range(1, n + 1)}
        for _ in range(splits):
            a = sorted(leaves)[rng.randrange(len(leaves))]
            leaves.remove(a)
            for d in range(q):
                leaves.add((a[0], a[1] + (d,)))
        if len(leaves) == count:
            return LeafPartition(n, tuple(sorted(leaves)))
    raise RuntimeError("could not sample a partition")


def random_element(rng: Random, config: Config, max_depth: int = 4,
                   n: int | None = None, m: int | None = None) -> TreePair:
    """Random tree pair nB -> mB (defaults to a group element)."""
    n = config.r if n is None else n
    m = config.r if m is None else m
    q = config.q
    if (n - m) % (q - 1) != 0:
        raise ValueError("no local similarities between these summand counts")
    dom = random_partition(rng, config, n, max_depth)
    count = len(dom.leaves)
    if count < m:
        # grow to a leaf count compatible with both sides
        count += (q - 1) * (-(-(m - count) // (q - 1)))
        dom = random_partition_with_leaf_count(rng, config, n, count)
    cod = random_partition_with_leaf_count(rng, config, m, count)
    perm = list(range(count))
    rng.shuffle(perm)
    decs = tuple(random_labeled_isometry(rng, config) for _ in range(count))
    return canonical_form(TreePair(config, dom, cod, tuple(perm), decs))
