"""Permutations of {0..q-1} as image tuples, and subgroup closure.

A permutation p maps i to p[i].  Serialized form is the 1-based image word:
the swap on two letters is "21".
"""

from __future__ import annotations

from itertools import permutations

Perm = tuple[int, ...]


def identity_perm(q: int) -> Perm:
    return tuple(range(q))


def is_perm(p: Perm) -> bool:
    return sorted(p) == list(range(len(p)))


def compose_perms(p1: Perm, p2: Perm) -> Perm:
    """p1 after p2: i -> p1[p2[i]]."""
    return tuple(p1[p2[i]] for i in range(len(p1)))


def invert_perm(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def perm_to_word(p: Perm) -> str:
    """1-based image word, e.g. (1,0) -> "21"."""
    return "".join(str(i + 1) for i in p)


def word_to_perm(word: str) -> Perm:
    p = tuple(int(ch) - 1 for ch in word)
    if not is_perm(p):
        raise ValueError(f"not a permutation word: {word!r}")
    return p


def close_under_group_ops(gens: list[Perm] | tuple[Perm, ...], q: int) -> frozenset[Perm]:
    """Subgroup of Sym(q) generated by gens, by naive closure."""
    for g in gens:
        if len(g) != q or not is_perm(g):
            raise ValueError(f"generator {g} is not a permutation of {q} letters")
    elems = {identity_perm(q)}
    frontier = set(gens)
    while frontier:
        new = set()
        for g in frontier:
            for h in list(elems) + list(frontier):
                for p in (compose_perms(g, h), compose_perms(h, g)):
                    if p not in elems and p not in frontier and p not in new:
                        new.add(p)
            inv = invert_perm(g)
            if inv not in elems and inv not in frontier and inv not in new:
                new.add(inv)
        elems |= frontier
        frontier = new
    return frozenset(elems)


def full_symmetric(q: int) -> frozenset[Perm]:
    return frozenset(permutations(range(q)))
