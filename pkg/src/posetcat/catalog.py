"""Enumeration engines: posets up to isomorphism, monotone maps, retracts.

The monotone-map enumerator is the performance-critical core: images are
assigned along a fixed linear extension of the domain, with the candidate set
for each element obtained by intersecting the up-sets of the images of its
already-assigned predecessors.  Counting shares the same search tree without
materializing maps.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Iterator, Optional

from .errors import BoundExceeded
from .poset import (
    MonotoneMap,
    Poset,
    Retract,
    identity_map,
    induced_subposet,
    is_complete,
)

POSET_SIZE_BOUND = 7
RETRACT_SIZE_BOUND = 5


def _linear_extension(P: Poset) -> list[int]:
    # |down-set| strictly increases along the order, so this sort is a linear
    # extension; index tiebreak makes it deterministic.
    return sorted(range(P.size), key=lambda i: (P.down[i].bit_count(), i))


# ---------------------------------------------------------------------------
# canonical forms


def _refined_invariants(P: Poset) -> list[tuple]:
    n = P.size
    inv: list[tuple] = [
        (P.down[i].bit_count(), P.up[i].bit_count()) for i in range(n)
    ]
    for _ in range(2):
        inv = [
            inv[i]
            + (
                tuple(sorted(inv[j] for j in range(n) if P.up[i] >> j & 1 and j != i)),
                tuple(sorted(inv[j] for j in range(n) if P.down[i] >> j & 1 and j != i)),
            )
            for i in range(n)
        ]
    return inv


def _canonical_order(P: Poset) -> tuple[bytes, tuple[int, ...]]:
    """Minimal relabeled relation matrix over invariant-respecting relabelings.

    The first invariant component is the down-set size, so every ordering that
    sorts invariants ascending is automatically a linear extension; elements
    sharing a full invariant tuple are pairwise incomparable and we try all
    interleavings within such blocks.
    """
    n = P.size
    if n == 0:
        return bytes([0]), ()
    inv = _refined_invariants(P)
    by_inv = sorted(range(n), key=lambda i: inv[i])
    blocks: list[list[int]] = [[by_inv[0]]]
    for i in by_inv[1:]:
        if inv[i] == inv[blocks[-1][-1]]:
            blocks[-1].append(i)
        else:
            blocks.append([i])
    up = P.up
    nbytes = (n * n + 7) // 8
    best_code: Optional[int] = None
    best_order: tuple[int, ...] = ()

    def rec(b: int, prefix: list[int]):
        nonlocal best_code, best_order
        if b == len(blocks):
            code = 0
            shift = 0
            for i in prefix:
                row = up[i]
                for bpos, j in enumerate(prefix):
                    if row >> j & 1:
                        code |= 1 << (shift + bpos)
                shift += n
            if best_code is None or code < best_code:
                best_code = code
                best_order = tuple(prefix)
            return
        block = blocks[b]
        if len(block) == 1:
            rec(b + 1, prefix + block)
            return
        for perm in permutations(block):
            rec(b + 1, prefix + list(perm))

    rec(0, [])
    assert best_code is not None
    return bytes([n]) + best_code.to_bytes(nbytes, "big"), best_order


def canonical_key(P: Poset) -> bytes:
    """Byte string equal for two posets iff they are isomorphic."""
    return _canonical_order(P)[0]


@dataclass(frozen=True)
class CanonicalPoset:
    """Isomorphism-class representative in canonical labeling, with its key."""

    poset: Poset
    key: bytes

    @classmethod
    def canonicalize(cls, P: Poset) -> "CanonicalPoset":
        key, order = _canonical_order(P)
        n = P.size
        up = []
        for a in range(n):
            row = 0
            for b in range(n):
                if P.up[order[a]] >> order[b] & 1:
                    row |= 1 << b
            up.append(row)
        return cls(Poset(n, tuple(up)), key)


def _natural_posets(n: int) -> Iterator[Poset]:
    """All posets on 0..n-1 whose index order is a linear extension.

    Element k is appended with a down-closed strict down-set among 0..k-1;
    every isomorphism class appears (at least once) this way.
    """
    if n == 0:
        yield Poset(0, ())
        return

    def rec(k: int, up: list[int], dn: list[int]):
        if k == n:
            yield Poset(n, tuple(up))
            return
        bit = 1 << k
        for D in range(1 << k):
            ok = True
            m = D
            while m:
                i = (m & -m).bit_length() - 1
                m &= m - 1
                if dn[i] & ~D:
                    ok = False
                    break
            if not ok:
                continue
            up2 = list(up)
            up2.append(bit)
            dnk = bit
            m = D
            while m:
                i = (m & -m).bit_length() - 1
                m &= m - 1
                up2[i] |= bit
                dnk |= 1 << i
            yield from rec(k + 1, up2, dn + [dnk])

    yield from rec(0, [], [])


@lru_cache(maxsize=None)
def enumerate_posets(n: int, bound: int = POSET_SIZE_BOUND) -> tuple[CanonicalPoset, ...]:
    """One canonical representative per isomorphism class of n-element posets."""
    if n > bound:
        raise BoundExceeded(f"poset enumeration capped at size {bound}")
    seen: dict[bytes, CanonicalPoset] = {}
    for P in _natural_posets(n):
        cp = CanonicalPoset.canonicalize(P)
        seen.setdefault(cp.key, cp)
    return tuple(seen[k] for k in sorted(seen))


@lru_cache(maxsize=None)
def enumerate_lattices(n: int, bound: int = POSET_SIZE_BOUND) -> tuple[CanonicalPoset, ...]:
    """Representatives of complete (= bounded-lattice) posets of size n."""
    return tuple(cp for cp in enumerate_posets(n, bound) if is_complete(cp.poset))


# ---------------------------------------------------------------------------
# monotone-map enumeration


def _map_search(P: Poset, Q: Poset, emit: bool, root_filter=None):
    """Backtracking core; yields image tuples (emit=True) or leaf counts per root."""
    n = P.size
    if n == 0:
        if emit:
            yield ()
        else:
            yield 1
        return
    order = _linear_extension(P)
    preds = []
    for e in order:
        preds.append([p for p in order if P.down[e] >> p & 1 and p != e])
    full = (1 << Q.size) - 1
    qup = Q.up
    img = [0] * n

    def cand_mask(t: int) -> int:
        c = full
        for p in preds[t]:
            c &= qup[img[p]]
            if not c:
                break
        return c

    def rec(t: int):
        if t == n:
            yield tuple(img) if emit else 1
            return
        e = order[t]
        m = cand_mask(t)
        while m:
            q = (m & -m).bit_length() - 1
            m &= m - 1
            img[e] = q
            yield from rec(t + 1)

    e0 = order[0]
    roots = range(Q.size) if root_filter is None else root_filter
    for q0 in roots:
        img[e0] = q0
        if emit:
            yield from rec(1)
        else:
            yield sum(rec(1))


def enumerate_monotone_maps(
    P: Poset, Q: Poset, workers: int = 1
) -> Iterator[MonotoneMap]:
    """Every monotone map P -> Q exactly once, in a deterministic order.

    Order is lexicographic in the image tuple read along the fixed linear
    extension of P.  With workers > 1 the search tree is split at the first
    assignment level; results are merged back in root order, so the stream is
    identical for any worker count.
    """
    if P.size == 0:
        yield MonotoneMap(P, Q, ())
        return
    if workers <= 1 or Q.size <= 1:
        for image in _map_search(P, Q, emit=True):
            yield MonotoneMap(P, Q, image)
        return
    with ThreadPoolExecutor(max_workers=min(workers, Q.size)) as pool:
        chunks = pool.map(
            lambda q0: list(_map_search(P, Q, emit=True, root_filter=[q0])),
            range(Q.size),
        )
        for chunk in chunks:
            for image in chunk:
                yield MonotoneMap(P, Q, image)


def count_monotone_maps(P: Poset, Q: Poset, workers: int = 1) -> int:
    """Number of monotone maps P -> Q; same search tree, nothing materialized."""
    if P.size == 0:
        return 1
    if workers <= 1 or Q.size <= 1:
        return sum(_map_search(P, Q, emit=False))
    with ThreadPoolExecutor(max_workers=min(workers, Q.size)) as pool:
        counts = pool.map(
            lambda q0: sum(_map_search(P, Q, emit=False, root_filter=[q0])),
            range(Q.size),
        )
        return sum(counts)


@lru_cache(maxsize=None)
def monotone_maps(P: Poset, Q: Poset) -> tuple[MonotoneMap, ...]:
    """Cached materialized hom-set, in enumeration order."""
    return tuple(enumerate_monotone_maps(P, Q))


def random_monotone_map(P: Poset, Q: Poset, rng) -> MonotoneMap:
    """Seeded random monotone map; requires every candidate set nonempty
    (guaranteed when Q has a top element, e.g. Q complete)."""
    n = P.size
    order = _linear_extension(P)
    full = (1 << Q.size) - 1
    img = [0] * n
    for t, e in enumerate(order):
        c = full
        for p in order[:t]:
            if P.down[e] >> p & 1:
                c &= Q.up[img[p]]
        choices = []
        m = c
        while m:
            choices.append((m & -m).bit_length() - 1)
            m &= m - 1
        img[e] = rng.choice(choices)
    return MonotoneMap(P, Q, tuple(img))


# ---------------------------------------------------------------------------
# isomorphism search


def find_isomorphism(P: Poset, Q: Poset) -> Optional[MonotoneMap]:
    """An order-isomorphism P -> Q (monotone with monotone inverse), or None."""
    n = P.size
    if n != Q.size:
        return None
    inv_p = [(P.down[i].bit_count(), P.up[i].bit_count()) for i in range(n)]
    inv_q = [(Q.down[i].bit_count(), Q.up[i].bit_count()) for i in range(n)]
    if sorted(inv_p) != sorted(inv_q):
        return None
    order = _linear_extension(P)
    img = [-1] * n

    def rec(t: int, used: int):
        if t == n:
            return True
        e = order[t]
        for q in range(n):
            if used >> q & 1 or inv_p[e] != inv_q[q]:
                continue
            ok = True
            for e2 in order[:t]:
                q2 = img[e2]
                if (P.up[e] >> e2 & 1) != (Q.up[q] >> q2 & 1):
                    ok = False
                    break
                if (P.up[e2] >> e & 1) != (Q.up[q2] >> q & 1):
                    ok = False
                    break
            if not ok:
                continue
            img[e] = q
            if rec(t + 1, used | 1 << q):
                return True
            img[e] = -1
        return False

    if rec(0, 0):
        return MonotoneMap(P, Q, tuple(img))
    return None


# ---------------------------------------------------------------------------
# retract enumeration


def _retractions_onto(A: Poset, keep: list[int], B: Poset) -> Iterator[tuple[int, ...]]:
    """Monotone maps A -> B fixing the kept elements pointwise (B = A|keep)."""
    n = A.size
    pos = {e: i for i, e in enumerate(keep)}
    order = _linear_extension(A)
    full = (1 << B.size) - 1
    img = [0] * n

    def rec(t: int):
        if t == n:
            yield tuple(img)
            return
        e = order[t]
        c = full
        for p in order[:t]:
            if A.down[e] >> p & 1:
                c &= B.up[img[p]]
        if e in pos:
            if not c >> pos[e] & 1:
                return
            img[e] = pos[e]
            yield from rec(t + 1)
            return
        m = c
        while m:
            q = (m & -m).bit_length() - 1
            m &= m - 1
            img[e] = q
            yield from rec(t + 1)

    yield from rec(0)


def enumerate_retracts(
    max_size: int, bound: int = RETRACT_SIZE_BOUND
) -> Iterator[Retract]:
    """All retract diagrams (A, B, r, s) with rs = id and |A| <= max_size.

    A runs over isomorphism-class representatives; B runs over all induced
    subposets of A (sections of poset retracts are order-embeddings, so every
    retract appears this way), r over all monotone retractions fixing B.
    """
    if max_size > bound:
        raise BoundExceeded(f"retract enumeration capped at outer size {bound}")
    for n in range(max_size + 1):
        for cp in enumerate_posets(n):
            A = cp.poset
            if n == 0:
                yield Retract(A, A, identity_map(A), identity_map(A))
                continue
            for mask in range(1, 1 << n):
                keep = [e for e in range(n) if mask >> e & 1]
                B, incl = induced_subposet(A, keep)
                for image in _retractions_onto(A, keep, B):
                    yield Retract(A, B, incl, MonotoneMap(A, B, image))
