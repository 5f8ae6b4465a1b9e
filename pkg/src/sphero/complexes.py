"""Decorated disjoint-support complexes and the split-class posets around them.

The flag complex on q-subsets of {1..n} decorated by cosets of D in Sym(q)
models the space of very elementary splittings; its connectivity grows
linearly in n.  The full poset of splitting classes, the cut posets that
contract onto depth-one cuts, and the orbit counts of the level-filtered
vertex category are enumerated here at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations

from .groups import (
    Address,
    Config,
    LabeledIsometry,
    LeafPartition,
    TreePair,
    Word,
    compose,
    inverse,
    isometry_element,
)
from .homology import ChainComplex, flag_complex
from .perms import Perm, compose_perms, identity_perm, perm_to_word
from .posets import GenPoset


class EnumerationCap(RuntimeError):
    """Raised when an enumeration would exceed its configured cap."""


# ---------------------------------------------------------------------------
# decorated complexes


def coset_representative(sigma: Perm, group: frozenset[Perm]) -> Perm:
    """Lexicographically minimal element of the left coset sigma D."""
    return min(compose_perms(sigma, d) for d in group)


def decorations_for(config: Config) -> list[Perm]:
    """Canonical representatives of Sym(q)/D, sorted."""
    reps = {coset_representative(p, config.group) for p in permutations(range(config.q))}
    return sorted(reps)


@dataclass(frozen=True)
class DecoratedVertex:
    support: tuple[int, ...]  # sorted q-subset of {1..n}
    decoration: Perm  # minimal coset representative


@dataclass(frozen=True)
class DecoratedComplex:
    """Flag complex with decorated q-subset vertices, edges on disjoint supports."""

    n: int
    config: Config
    vertices: tuple[DecoratedVertex, ...]
    edges: tuple[tuple[int, int], ...]

    def vertex_index(self) -> dict[DecoratedVertex, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "q": self.config.q,
            "D": [perm_to_word(p) for p in self.config.sorted_group()],
            "vertices": [
                {"support": list(v.support), "decoration": perm_to_word(v.decoration)}
                for v in self.vertices
            ],
            "edges": [list(e) for e in self.edges],
        }

    def chain_complex(self, max_dim: int) -> ChainComplex:
        ids = list(range(len(self.vertices)))
        return flag_complex(ids, list(self.edges), max_dim)


def build_complex(config: Config, n: int) -> DecoratedComplex:
    """All decorated q-subsets of {1..n} with edges between disjoint supports."""
    if n < 1:
        raise ValueError("n must be at least 1")
    decs = decorations_for(config)
    vertices = tuple(
        DecoratedVertex(tuple(sup), dec)
        for sup in combinations(range(1, n + 1), config.q)
        for dec in decs
    )
    edges = []
    for i, v in enumerate(vertices):
        si = set(v.support)
        for j in range(i + 1, len(vertices)):
            if not (si & set(vertices[j].support)):
                edges.append((i, j))
    return DecoratedComplex(n, config, vertices, tuple(edges))


def connectivity_bound(config: Config, n: int) -> int:
    """The linear lower bound for the connectivity of the complex on n elements."""
    return (n - config.q) // (2 * config.q - 1) - 1


def morse_value(vertex: DecoratedVertex, config: Config) -> int:
    """Binary number with q digits; digit i (most significant first) marks i in the support."""
    base = set(range(1, config.q + 1))
    if not (base & set(vertex.support)):
        raise ValueError("vertex is disjoint from the base support; it has no Morse value")
    return sum(1 << (config.q - i) for i in base & set(vertex.support))


def vertex_descending_link(cx: DecoratedComplex, a: DecoratedVertex) -> tuple[DecoratedComplex, dict[int, int]]:
    """Full subcomplex on vertices disjoint from a with larger minimum, relabeled.

    Returns the relabeled complex on {1..k} together with the order-preserving
    relabeling of the ground set; the result is asserted to coincide with the
    freshly built complex on k elements.
    """
    config = cx.config
    base = set(range(1, config.q + 1))
    if not (base & set(a.support)):
        raise ValueError("vertex must meet the base support")
    min_a = min(a.support)
    avail = [x for x in range(min_a + 1, cx.n + 1) if x not in a.support]
    relabel = {x: i + 1 for i, x in enumerate(avail)}
    k = len(avail)
    keep = [v for v in cx.vertices
            if not (set(v.support) & set(a.support)) and min_a < min(v.support)]
    relabeled = sorted(
        (DecoratedVertex(tuple(sorted(relabel[x] for x in v.support)), v.decoration)
         for v in keep),
        key=lambda v: (v.support, v.decoration),
    )
    edges = []
    for i, v in enumerate(relabeled):
        si = set(v.support)
        for j in range(i + 1, len(relabeled)):
            if not (si & set(relabeled[j].support)):
                edges.append((i, j))
    sub = DecoratedComplex(max(k, 1), config, tuple(relabeled), tuple(edges))
    if k >= 1:
        if sub != build_complex(config, k):
            raise AssertionError("descending link does not match the complex on k elements")
    elif relabeled:
        raise AssertionError("descending link should be empty")
    return sub, relabel


# ---------------------------------------------------------------------------
# splitting records


Tile = tuple[Word, int]  # (word of the ball, target summand in 1..n)
Block = tuple[Tile, ...]  # one domain summand: labeled tiling, sorted by word


def tilings(q: int, t: int) -> list[tuple[Word, ...]]:
    """Complete prefix codes of the rooted q-ary tree with exactly t leaves."""
    if t == 1:
        return [((),)]
    if (t - 1) % (q - 1) != 0 or t < 1:
        return []
    out = []
    for split in _compositions(t, q):
        parts = [tilings(q, c) for c in split]
        for combo in _product_lists(parts):
            words = []
            for d, sub in enumerate(combo):
                words.extend((d,) + w for w in sub)
            out.append(tuple(sorted(words)))
    return out


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _product_lists(lists):
    if not lists:
        yield ()
        return
    for head in lists[0]:
        for tail in _product_lists(lists[1:]):
            yield (head,) + tail


def _block_internal_vertices(block: Block) -> list[Word]:
    out = set()
    for w, _ in block:
        for i in range(len(w)):
            out.add(w[:i])
    return sorted(out)


def canonical_block(config: Config, block: Block) -> Block:
    """Minimal representative of the block under the D-admissible isometry action.

    Only labels at internal vertices of the tiling move the tiles, so the
    orbit is closed under single-label moves there.
    """
    if len(block) == 1:
        return block
    gens = [p for p in config.sorted_group() if p != identity_perm(config.q)]
    if not gens:
        return block
    seen = {block}
    frontier = [block]
    while frontier:
        cur = frontier.pop()
        for v in _block_internal_vertices(cur):
            for p in gens:
                iso = LabeledIsometry.make(config.q, {v: p})
                moved = tuple(sorted((iso.apply_word(w), t) for w, t in cur))
                if moved not in seen:
                    seen.add(moved)
                    frontier.append(moved)
    return min(seen)


@dataclass(frozen=True)
class SplitRecord:
    """A splitting class: blocks of targets, each with a labeled tiling.

    Blocks are canonically sorted; each block's tiling is the minimal orbit
    representative under D-admissible isometries.
    """

    config: Config
    n: int
    blocks: tuple[Block, ...]

    @property
    def k(self) -> int:
        return len(self.blocks)

    @property
    def is_very_elementary(self) -> bool:
        for block in self.blocks:
            if len(block) == 1:
                continue
            if len(block) != self.config.q or any(len(w) != 1 for w, _ in block):
                return False
        return True

    def object_id(self) -> str:
        parts = []
        for block in self.blocks:
            tiles = ",".join(("".join(map(str, w)) or "e") + ">" + str(t) for w, t in block)
            parts.append("(" + tiles + ")")
        return f"k{self.k}:" + "|".join(parts)


def make_record(config: Config, n: int, raw_blocks) -> SplitRecord:
    blocks = tuple(sorted(canonical_block(config, tuple(sorted(b))) for b in raw_blocks))
    targets = sorted(t for b in blocks for _, t in b)
    if targets != list(range(1, n + 1)):
        raise ValueError("blocks do not partition the target set")
    return SplitRecord(config, n, blocks)


def _set_partitions(items: list[int]):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def split_records(config: Config, n: int, cap: int = 6) -> list[SplitRecord]:
    """All splitting classes with fewer than n blocks, canonicalized and sorted."""
    if n > cap:
        raise EnumerationCap(f"n={n} exceeds the enumeration cap {cap}")
    out = set()
    for part in _set_partitions(list(range(1, n + 1))):
        if len(part) >= n:
            continue  # the all-singletons partition is the identity, not a split
        block_choices = []
        for group in part:
            group = sorted(group)
            if len(group) == 1:
                block_choices.append([(((), group[0]),)])
                continue
            choices = []
            for tiling in tilings(config.q, len(group)):
                for perm in permutations(group):
                    block = tuple(sorted(zip(tiling, perm)))
                    choices.append(canonical_block(config, block))
            block_choices.append(sorted(set(choices)))
        for combo in _product_lists(block_choices):
            out.add(SplitRecord(config, n, tuple(sorted(combo))))
    return sorted(out, key=lambda r: (r.k, r.object_id()))


# cuts of a block: tilings at or above the tiles


def _cuts_of_words(words: set[Word], prefix: Word, q: int):
    if prefix in words:
        yield (prefix,)
        return
    yield (prefix,)
    child_cuts = []
    for d in range(q):
        child_cuts.append(list(_cuts_of_words(words, prefix + (d,), q)))
    for combo in _product_lists(child_cuts):
        yield tuple(sorted(w for sub in combo for w in sub))


def block_cuts(config: Config, block: Block) -> list[tuple[Word, ...]]:
    """All ball partitions of the block's tree sitting at or above its tiles."""
    words = {w for w, _ in block}
    return sorted(set(_cuts_of_words(words, (), config.q)))


def _induced_blocks(config: Config, block: Block, cut: tuple[Word, ...]) -> list[Block]:
    out = []
    for c in cut:
        tiles = tuple(sorted((w[len(c):], t) for w, t in block if w[: len(c)] == c))
        out.append(canonical_block(config, tiles))
    return out


def has_arrow(r1: SplitRecord, r2: SplitRecord) -> bool:
    """Whether r1 factors through r2, i.e. r1 arises by cutting r2's trees."""
    if r1.k <= r2.k or r1.n != r2.n:
        return False
    targets1 = [frozenset(t for _, t in b) for b in r1.blocks]
    blocks1 = list(r1.blocks)
    for b2 in r2.blocks:
        t2 = frozenset(t for _, t in b2)
        members = [blocks1[i] for i, t1 in enumerate(targets1) if t1 <= t2]
        covered = frozenset(t for b in members for _, t in b)
        if covered != t2:
            return False
        want = sorted(members)
        found = False
        for cut in block_cuts(r2.config, b2):
            if len(cut) != len(members):
                continue
            if sorted(_induced_blocks(r2.config, b2, cut)) == want:
                found = True
                break
        if not found:
            return False
    return True


def split_class_poset(config: Config, n: int, cap: int = 6) -> GenPoset:
    """Poset of splitting classes below a level-n vertex, arrows by factorization."""
    if n <= 1:
        return GenPoset.make([], [])
    records = split_records(config, n, cap)
    by_id = {r.object_id(): r for r in records}
    arrows = []
    recs = list(records)
    for r1 in recs:
        for r2 in recs:
            if r1.k > r2.k and has_arrow(r1, r2):
                arrows.append((r1.object_id(), r2.object_id()))
    return GenPoset.make(list(by_id), arrows).require_valid()


def elementary_split_poset(config: Config, n: int, cap: int = 6) -> tuple[GenPoset, dict[str, str]]:
    """Subposet of very elementary splitting classes, with its inclusion map."""
    full = split_class_poset(config, n, cap)
    records = split_records(config, n, cap) if n > 1 else []
    keep = {r.object_id() for r in records if r.is_very_elementary}
    sub = full.full_subcategory(keep)
    inclusion = {o: o for o in sub.objects}
    return sub, inclusion


def elementary_record_to_simplex(record: SplitRecord) -> tuple[DecoratedVertex, ...]:
    """The simplex of the decorated complex carried by a very elementary record."""
    if not record.is_very_elementary:
        raise ValueError("record is not very elementary")
    verts = []
    for block in record.blocks:
        if len(block) == 1:
            continue
        support = tuple(sorted(t for _, t in block))
        order = {t: w[0] for w, t in block}  # element -> which child ball
        sigma = tuple(order[support[i]] for i in range(len(support)))
        # decoration: the coset of the permutation sending position i to child sigma[i]
        verts.append(DecoratedVertex(support, coset_representative(sigma, record.config.group)))
    return tuple(sorted(verts, key=lambda v: (v.support, v.decoration)))


# ---------------------------------------------------------------------------
# cut posets (descending links of non-elementary records)


@dataclass(frozen=True)
class CutPoset:
    """Refinement poset of the intermediate ball partitions of a record.

    Elements are per-block cuts, excluding the all-roots and all-tiles
    partitions; p_top is the depth-one cut on split blocks and retract maps
    every element to the depth-one cut on the blocks it divides.
    """

    record: SplitRecord
    elements: tuple[tuple[tuple[Word, ...], ...], ...]
    poset: GenPoset
    p_top: tuple[tuple[Word, ...], ...]
    retract: dict[tuple, tuple]


def _cut_refines(c1: tuple[Word, ...], c2: tuple[Word, ...]) -> bool:
    return all(any(w[: len(v)] == v for v in c2) for w in c1)


def element_id(elem) -> str:
    return "|".join(",".join("".join(map(str, w)) or "e" for w in cut) for cut in elem)


def cut_poset(record: SplitRecord) -> CutPoset:
    """Build the cut poset of a non-very-elementary record and its cone data."""
    if record.is_very_elementary:
        raise ValueError("very elementary records have no depth-one top element here")
    q = record.config.q
    per_block = [block_cuts(record.config, b) for b in record.blocks]
    k = record.k
    n = record.n
    elems = []
    for combo in _product_lists(per_block):
        size = sum(len(c) for c in combo)
        if size == k or size == n:
            continue  # the trivial partition and the full tile partition
        elems.append(tuple(combo))
    depth_one = tuple(
        tuple((d,) for d in range(q)) if len(b) > 1 else ((),)
        for b in record.blocks
    )
    retract = {}
    for e in elems:
        retract[e] = tuple(
            (tuple((d,) for d in range(q)) if cut != ((),) else ((),))
            for cut in e
        )
    arrows = []
    for e1 in elems:
        for e2 in elems:
            if e1 != e2 and all(_cut_refines(c1, c2) for c1, c2 in zip(e1, e2)):
                arrows.append((element_id(e1), element_id(e2)))
    poset = GenPoset.make([element_id(e) for e in elems], arrows).require_valid()
    return CutPoset(record, tuple(elems), poset, depth_one, retract)


def check_cone_relations(cp: CutPoset) -> None:
    """Assert the three retraction relations that cone off the cut poset."""
    ids = {e: element_id(e) for e in cp.elements}
    if cp.p_top not in set(cp.elements):
        raise AssertionError("depth-one cut is not an element of the poset")
    for e in cp.elements:
        f = cp.retract[e]
        if f not in ids:
            raise AssertionError("retract image leaves the poset")
        if not all(_cut_refines(c1, c2) for c1, c2 in zip(e, f)):
            raise AssertionError("element does not refine its retract image")
        if not all(_cut_refines(c1, c2) for c1, c2 in zip(cp.p_top, f)):
            raise AssertionError("the depth-one cut does not refine a retract image")
    for e1 in cp.elements:
        for e2 in cp.elements:
            if all(_cut_refines(a, b) for a, b in zip(e1, e2)):
                f1, f2 = cp.retract[e1], cp.retract[e2]
                if not all(_cut_refines(a, b) for a, b in zip(f1, f2)):
                    raise AssertionError("retract is not order preserving")


# ---------------------------------------------------------------------------
# level-filtered vertex category modulo strict transformations


def _forest_tilings(config: Config, n_summands: int, total_tiles: int,
                    max_depth: int | None = None) -> list[tuple[Address, ...]]:
    """Ordered partitions of an n-summand forest into total_tiles balls."""
    per_summand: list[list[tuple[Word, ...]]] = []
    out: list[tuple[Address, ...]] = []

    def rec(s: int, remaining: int, acc: list[Address]):
        if s > n_summands:
            if remaining == 0:
                out.append(tuple(acc))
            return
        max_here = remaining - (n_summands - s)
        for t in range(1, max_here + 1):
            for tl in tilings(config.q, t):
                if max_depth is not None and any(len(w) > max_depth for w in tl):
                    continue
                rec(s + 1, remaining - t, acc + [(s, w) for w in tl])

    rec(1, total_tiles, [])
    return out


def strict_class_poset(config: Config, max_level: int, max_depth: int = 2) -> tuple[GenPoset, dict[str, TreePair]]:
    """Truncation of the level-filtered vertex category modulo strict transformations.

    Objects are ordered tilings of the codomain forest with at most max_level
    tiles of depth at most max_depth; arrows are refinements (merges) and
    reorderings (transformations).  Returns the poset and a representative
    tree pair per object.
    """
    objects: dict[str, tuple[Address, ...]] = {}
    for m in range(1, max_level + 1):
        if (m - config.r) % (config.q - 1) != 0:
            continue
        for tiling in _forest_tilings(config, config.r, m, max_depth):
            for order in permutations(tiling):
                oid = tiling_id(order)
                objects[oid] = order
    arrows = []
    items = sorted(objects.items())
    for id1, t1 in items:
        s1 = set(t1)
        for id2, t2 in items:
            if id1 == id2:
                continue
            if len(t1) == len(t2):
                if s1 == set(t2):
                    arrows.append((id1, id2))
            elif len(t1) > len(t2):
                if all(any(a[0] == b[0] and a[1][: len(b[1])] == b[1] for b in t2) for a in t1):
                    arrows.append((id1, id2))
    poset = GenPoset.make(list(objects), arrows).require_valid()
    reps = {oid: _tiling_rep(config, tiling) for oid, tiling in objects.items()}
    return poset, reps


def tiling_id(order: tuple[Address, ...]) -> str:
    return f"L{len(order)}:" + "|".join(f"{s}:" + "".join(map(str, w)) for s, w in order)


def parse_tiling_id(oid: str) -> tuple[Address, ...]:
    _, rest = oid.split(":", 1)
    out = []
    for part in rest.split("|"):
        s, w = part.split(":")
        out.append((int(s), tuple(int(ch) for ch in w)))
    return tuple(out)


def _tiling_rep(config: Config, order: tuple[Address, ...]) -> TreePair:
    m = len(order)
    dom = LeafPartition.roots(m)
    cod = sorted(order)
    index = {a: i for i, a in enumerate(cod)}
    leaf_map = tuple(index[order[i]] for i in range(m))
    decs = tuple(LabeledIsometry.identity(config.q) for _ in range(m))
    return TreePair(config, dom, LeafPartition(config.r, tuple(cod)), leaf_map, decs)


def act_on_tiling_object(gamma_portraits: list[LabeledIsometry], oid_tiling: tuple[Address, ...]) -> tuple[Address, ...]:
    """Postcompose an object by a strict transformation of the codomain forest."""
    return tuple((s, gamma_portraits[s - 1].apply_word(w)) for s, w in oid_tiling)


# ---------------------------------------------------------------------------
# orbit counting of chains


def _strip_strict_factor(arrow: TreePair) -> tuple[TreePair, TreePair]:
    """Write a canonical merge/transformation as (decoration-free map, strict factor)."""
    if any(w != () for _, w in arrow.domain.leaves):
        raise ValueError("arrow is not merge- or transformation-shaped")
    comb = TreePair(
        arrow.config, arrow.domain, arrow.codomain, arrow.leaf_map,
        tuple(LabeledIsometry.identity(arrow.config.q) for _ in arrow.decorations),
    )
    nu = isometry_element(arrow.config, list(arrow.decorations), arrow.domain.n)
    return comb, nu


def _arrow_key(arrow: TreePair) -> tuple:
    return tuple(arrow.image_leaf(i) for i in range(len(arrow.domain.leaves)))


def _chain_key(chain: list[TreePair]) -> tuple:
    return tuple(_arrow_key(a) for a in chain)


def _normalize_chain(chain: list[TreePair]) -> list[TreePair]:
    out = list(chain)
    for i in range(len(out) - 1, -1, -1):
        comb, nu = _strip_strict_factor(out[i])
        out[i] = comb
        if i >= 1:
            out[i - 1] = compose(nu, out[i - 1])
    return out


def _chain_orbit_canonical(config: Config, chain: list[TreePair]) -> tuple:
    """Minimal key of the orbit of a chain under simultaneous strict twists."""
    gens = [p for p in config.sorted_group() if p != identity_perm(config.q)]
    start = _chain_key(chain)
    if not gens:
        return start
    levels = [chain[0].domain.n] + [a.codomain.n for a in chain]
    max_depth = max((len(w) for a in chain for _, w in a.codomain.leaves), default=0)
    seen = {start: chain}
    frontier = [chain]
    while frontier:
        cur = frontier.pop()
        for level_pos in range(len(levels)):
            m = levels[level_pos]
            for s in range(1, m + 1):
                for v in _words_up_to(config.q, max_depth):
                    for p in gens:
                        portraits = [LabeledIsometry.identity(config.q) for _ in range(m)]
                        portraits[s - 1] = LabeledIsometry.make(config.q, {v: p})
                        chi = isometry_element(config, portraits, m)
                        new = list(cur)
                        if level_pos >= 1:
                            new[level_pos - 1] = compose(chi, new[level_pos - 1])
                        if level_pos <= len(new) - 1:
                            new[level_pos] = compose(new[level_pos], inverse(chi))
                        new = _normalize_chain(new)
                        key = _chain_key(new)
                        if key not in seen:
                            seen[key] = new
                            frontier.append(new)
    return min(seen)


def _words_up_to(q: int, depth: int):
    out = [()]
    frontier = [()]
    for _ in range(depth):
        frontier = [w + (d,) for w in frontier for d in range(q)]
        out.extend(frontier)
    return out


def _merge_arrows(config: Config, lvl_from: int, lvl_to: int) -> list[TreePair]:
    """Decoration-free merges from lvl_from summands onto lvl_to summands."""
    out = []
    for tiling in _forest_tilings(config, lvl_to, lvl_from):
        for order in permutations(range(lvl_from)):
            cod = sorted(tiling)
            index = {a: i for i, a in enumerate(cod)}
            leaf_map = tuple(index[tiling[order[i]]] for i in range(lvl_from))
            decs = tuple(LabeledIsometry.identity(config.q) for _ in range(lvl_from))
            out.append(TreePair(config, LeafPartition.roots(lvl_from),
                                LeafPartition(lvl_to, tuple(cod)), leaf_map, decs))
    return _dedupe_arrows(out)


def _transformation_arrows(config: Config, lvl: int) -> list[TreePair]:
    out = []
    for sigma in permutations(range(lvl)):
        if sigma == tuple(range(lvl)):
            continue
        part = LeafPartition.roots(lvl)
        decs = tuple(LabeledIsometry.identity(config.q) for _ in range(lvl))
        out.append(TreePair(config, part, part, sigma, decs))
    return out


def _dedupe_arrows(arrows: list[TreePair]) -> list[TreePair]:
    seen = {}
    for a in arrows:
        seen.setdefault(_arrow_key(a), a)
    return [seen[k] for k in sorted(seen)]


def count_cell_orbits(config: Config, k: int, d: int, max_level: int = 3) -> int:
    """Orbits of nondegenerate d-chains in the nerve of the level-k truncation.

    Chains are enumerated in decoration-free form and identified up to the
    simultaneous strict twists that survive the quotient.
    """
    if k < 1 or d < 0:
        raise ValueError("need k >= 1 and d >= 0")
    if d >= 1 and k > max_level:
        raise EnumerationCap(f"k={k} exceeds the enumeration cap {max_level}")
    populated = [m for m in range(1, k + 1) if (m - config.r) % (config.q - 1) == 0]
    if d == 0:
        return len(populated)
    total = 0
    seqs = _level_sequences(populated, d)
    for seq in seqs:
        arrow_pools = []
        for i in range(d):
            a, b = seq[i], seq[i + 1]
            pool = _transformation_arrows(config, a) if a == b else _merge_arrows(config, a, b)
            arrow_pools.append(pool)
        canonicals = set()
        for combo in _product_lists(arrow_pools):
            chain = _normalize_chain(list(combo))
            canonicals.add(_chain_orbit_canonical(config, chain))
        total += len(canonicals)
    return total


def _level_sequences(populated: list[int], d: int):
    out = []

    def rec(acc):
        if len(acc) == d + 1:
            out.append(tuple(acc))
            return
        for m in populated:
            if not acc or m <= acc[-1]:
                rec(acc + [m])

    rec([])
    return out
