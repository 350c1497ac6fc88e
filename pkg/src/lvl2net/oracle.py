"""Brute-force enumeration of binary phylogenetic networks with labelled leaves.

Networks are grown constructively: all binary trees on n leaves by leaf
insertion, then reticulations one at a time by subdividing two arcs (a, b),
(c, d) with new vertices u, h and adding the arc u -> h. Every binary network
with r reticulations arises this way from one with r - 1 (delete any
reticulation arc and suppress the two degree-2 vertices), so the layers are
complete. Properties that survive the reverse step (level <= k, tree-child,
outer planarity) prune intermediate layers; everything else, including the
"two cut arcs below every blob" condition, is only applied to the output.

Isomorphism classes (root and every leaf label fixed) are deduplicated by a
canonical certificate from colour refinement plus individualisation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator, Optional

import networkx as nx

from .netclass import NetworkClassSpec

# internal representation: (nv, arcs, labels); vertex 0 is the root,
# labels[v] is the leaf label of v or 0 for a non-leaf
_Raw = tuple[int, tuple[tuple[int, int], ...], tuple[int, ...]]


class BudgetExceeded(RuntimeError):
    def __init__(self, progress: dict):
        self.progress = progress
        super().__init__(f"enumeration budget exceeded: {progress}")


class InvalidNetwork(ValueError):
    pass


# ---------------------------------------------------------------------------
# Public network type
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PhyloNetwork:
    """Rooted binary network; vertices are 0..nv-1 and ``leaf_labels`` maps leaf vertices to 1..n."""

    nv: int
    arcs: tuple[tuple[int, int], ...]
    root: int
    leaf_labels: tuple[tuple[int, int], ...]  # sorted (vertex, label) pairs

    @classmethod
    def from_arcs(cls, arcs: Iterable[tuple], leaf_labels: dict, root=None) -> "PhyloNetwork":
        """Build from arbitrary hashable vertex names; leaf_labels maps vertex -> label."""
        arcs = [tuple(a) for a in arcs]
        names = []
        seen = set()
        if root is not None:
            names.append(root)
            seen.add(root)
        for u, v in arcs:
            for x in (u, v):
                if x not in seen:
                    seen.add(x)
                    names.append(x)
        for x in leaf_labels:
            if x not in seen:
                seen.add(x)
                names.append(x)
        index = {x: i for i, x in enumerate(names)}
        if root is None:
            heads = {v for _, v in arcs}
            sources = [x for x in names if x not in heads]
            if len(sources) != 1:
                raise InvalidNetwork(f"expected one source, found {len(sources)}")
            root = sources[0]
        perm = [index[root]] + [i for i in range(len(names)) if i != index[root]]
        relabel = {old: new for new, old in enumerate(perm)}
        new_arcs = tuple((relabel[index[u]], relabel[index[v]]) for u, v in arcs)
        labels = tuple(sorted((relabel[index[x]], int(lab)) for x, lab in leaf_labels.items()))
        return cls(len(names), new_arcs, 0, labels)

    @classmethod
    def _from_raw(cls, raw: _Raw) -> "PhyloNetwork":
        nv, arcs, labels = raw
        return cls(nv, arcs, 0, tuple((v, lab) for v, lab in enumerate(labels) if lab))

    def _raw(self) -> _Raw:
        if self.root != 0:
            perm = [self.root] + [v for v in range(self.nv) if v != self.root]
            pos = {v: i for i, v in enumerate(perm)}
        else:
            pos = {v: v for v in range(self.nv)}
        labels = [0] * self.nv
        for v, lab in self.leaf_labels:
            labels[pos[v]] = lab
        return (self.nv, tuple((pos[u], pos[v]) for u, v in self.arcs), tuple(labels))

    @property
    def n(self) -> int:
        return len(self.leaf_labels)

    @cached_property
    def children(self) -> list[list[int]]:
        ch = [[] for _ in range(self.nv)]
        for u, v in self.arcs:
            ch[u].append(v)
        return ch

    @cached_property
    def parents(self) -> list[list[int]]:
        pa = [[] for _ in range(self.nv)]
        for u, v in self.arcs:
            pa[v].append(u)
        return pa

    @property
    def reticulations(self) -> list[int]:
        return [v for v in range(self.nv) if len(self.parents[v]) == 2]

    @property
    def tree_nodes(self) -> list[int]:
        return [v for v in range(self.nv) if len(self.parents[v]) == 1 and len(self.children[v]) == 2]

    def label_of(self, v: int) -> Optional[int]:
        return dict(self.leaf_labels).get(v)

    def validate(self) -> None:
        """Raise InvalidNetwork unless all structural conditions hold (including the blob condition)."""
        problems = _structural_problems(self._raw())
        if problems:
            raise InvalidNetwork("; ".join(problems))

    def certificate(self) -> bytes:
        return canonical_certificate(self)

    def to_arclist(self) -> str:
        return to_arclist(self)


# ---------------------------------------------------------------------------
# Graph helpers on the raw representation
# ---------------------------------------------------------------------------


def _adjacency(nv, arcs):
    ch = [[] for _ in range(nv)]
    pa = [[] for _ in range(nv)]
    for u, v in arcs:
        ch[u].append(v)
        pa[v].append(u)
    return ch, pa


def _topological(nv, ch, pa) -> Optional[list[int]]:
    indeg = [len(p) for p in pa]
    order = [v for v in range(nv) if indeg[v] == 0]
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        for w in ch[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                order.append(w)
    return order if len(order) == nv else None


def _descendants(nv, ch, order) -> list[int]:
    """Bitmask of descendants (including self) per vertex."""
    desc = [0] * nv
    for v in reversed(order):
        m = 1 << v
        for w in ch[v]:
            m |= desc[w]
        desc[v] = m
    return desc


def _blocks(nv, arcs) -> list[list[int]]:
    """Biconnected components of the underlying multigraph, as lists of arc indices."""
    adj = [[] for _ in range(nv)]
    for eid, (u, v) in enumerate(arcs):
        adj[u].append((v, eid))
        adj[v].append((u, eid))
    disc = [-1] * nv
    low = [0] * nv
    t = 0
    estack: list[int] = []
    blocks = []
    for s in range(nv):
        if disc[s] != -1:
            continue
        disc[s] = low[s] = t
        t += 1
        stack = [(s, -1, iter(adj[s]))]
        while stack:
            v, pe, it = stack[-1]
            advanced = False
            for w, eid in it:
                if eid == pe:
                    continue
                if disc[w] == -1:
                    estack.append(eid)
                    disc[w] = low[w] = t
                    t += 1
                    stack.append((w, eid, iter(adj[w])))
                    advanced = True
                    break
                if disc[w] < disc[v]:
                    estack.append(eid)
                    if disc[w] < low[v]:
                        low[v] = disc[w]
            if advanced:
                continue
            stack.pop()
            if stack:
                u = stack[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
                if low[v] >= disc[u]:
                    comp = []
                    while True:
                        e = estack.pop()
                        comp.append(e)
                        if e == pe:
                            break
                    blocks.append(comp)
    return blocks


def _level(nv, arcs, pa, blocks=None) -> int:
    blocks = _blocks(nv, arcs) if blocks is None else blocks
    best = 0
    for comp in blocks:
        if len(comp) < 2:
            continue
        rets = {arcs[e][1] for e in comp if len(pa[arcs[e][1]]) == 2}
        if len(rets) > best:
            best = len(rets)
    return best


def _blob_condition(nv, arcs, blocks) -> bool:
    bridges = {comp[0] for comp in blocks if len(comp) == 1}
    for comp in blocks:
        if len(comp) < 2:
            continue
        verts = set()
        for e in comp:
            verts.update(arcs[e])
        if len(verts) < 3:
            continue
        out = sum(1 for e in bridges if arcs[e][0] in verts and arcs[e][1] not in verts)
        if out < 2:
            return False
    return True


def _is_tree_child(nv, ch, pa) -> bool:
    for v in range(nv):
        if ch[v] and not any(len(pa[w]) < 2 for w in ch[v]):
            return False
    return True


def _tree_cycle_count(h, ch, pa) -> int:
    """Pairs of arc-disjoint directed paths from a common tree node to h through tree nodes only."""
    def is_tree_node(v):
        return len(pa[v]) == 1 and len(ch[v]) == 2

    p, q = pa[h]
    if p == q:
        return 1 if is_tree_node(p) else 0

    def chain(v):
        out = []
        while is_tree_node(v):
            out.append(v)
            v = pa[v][0]
        return out

    cp, cq = chain(p), chain(q)
    count = 0
    for i, s in enumerate(cp):
        if s in cq:
            j = cq.index(s)
            # arcs above the first meeting point are shared by both paths
            if set(cp[:i]).isdisjoint(cq[:j]):
                count += 1
    return count


def _is_galled(nv, ch, pa) -> bool:
    return all(_tree_cycle_count(h, ch, pa) == 1 for h in range(nv) if len(pa[h]) == 2)


def _simple_undirected(nv, arcs) -> tuple[nx.Graph, bool]:
    g = nx.Graph()
    g.add_nodes_from(range(nv))
    parallel = False
    for u, v in arcs:
        if g.has_edge(u, v):
            parallel = True
        g.add_edge(u, v)
    return g, parallel


def is_outerplanar(graph) -> bool:
    """Outerplanarity of the simple graph underlying `graph`.

    Accepts a networkx (multi)graph, a PhyloNetwork, or an iterable of edges.
    Decided as: graph plus one vertex adjacent to everything is planar.
    """
    if isinstance(graph, PhyloNetwork):
        g, _ = _simple_undirected(graph.nv, graph.arcs)
    elif isinstance(graph, nx.Graph):
        g = nx.Graph(graph)
    else:
        g = nx.Graph()
        g.add_edges_from(graph)
    g.remove_edges_from(list(nx.selfloop_edges(g)))
    apex = ("apex",)
    g.add_edges_from((apex, v) for v in list(g.nodes))
    planar, _ = nx.check_planarity(g)
    return planar


def _raw_outerplanar(nv, arcs) -> bool:
    g, _ = _simple_undirected(nv, arcs)
    return is_outerplanar(g)


def _structural_problems(raw: _Raw) -> list[str]:
    nv, arcs, labels = raw
    ch, pa = _adjacency(nv, arcs)
    n = sum(1 for x in labels if x)
    problems = []
    if sorted(x for x in labels if x) != list(range(1, n + 1)):
        problems.append("leaf labels are not a bijection onto 1..n")
    if _topological(nv, ch, pa) is None:
        problems.append("not acyclic")
    sources = [v for v in range(nv) if not pa[v]]
    if sources != [0]:
        problems.append(f"expected the root as the only source, got {sources}")
    if n == 1 and nv == 1:
        return problems
    if len(ch[0]) != 1:
        problems.append("root must have exactly one child")
    for v in range(1, nv):
        indeg, outdeg = len(pa[v]), len(ch[v])
        if labels[v]:
            if indeg != 1 or outdeg != 0:
                problems.append(f"leaf {v} must have in-degree 1 and no children")
        elif (indeg, outdeg) not in ((1, 2), (2, 1)):
            problems.append(f"vertex {v} is neither a tree node nor a reticulation")
        elif outdeg == 0:
            problems.append(f"unlabelled sink {v}")
    if problems:
        return problems
    r = sum(1 for v in range(nv) if len(pa[v]) == 2)
    t = sum(1 for v in range(1, nv) if len(pa[v]) == 1 and len(ch[v]) == 2)
    if t != n + r - 1:
        problems.append(f"degree identity fails: {t} tree nodes, expected {n + r - 1}")
    if not _blob_condition(nv, arcs, _blocks(nv, arcs)):
        problems.append("a blob has fewer than two outgoing cut arcs")
    return problems


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassFlags:
    level: int
    tree_child: bool
    galled: bool
    blob_condition: bool
    outer_planar: bool
    parallel_arcs: bool = False
    reticulations: int = 0


def _classify_raw(raw: _Raw) -> ClassFlags:
    nv, arcs, labels = raw
    ch, pa = _adjacency(nv, arcs)
    blocks = _blocks(nv, arcs)
    g, parallel = _simple_undirected(nv, arcs)
    return ClassFlags(
        level=_level(nv, arcs, pa, blocks),
        tree_child=_is_tree_child(nv, ch, pa),
        galled=_is_galled(nv, ch, pa),
        blob_condition=_blob_condition(nv, arcs, blocks),
        outer_planar=is_outerplanar(g),
        parallel_arcs=parallel,
        reticulations=sum(1 for p in pa if len(p) == 2),
    )


def classify(net: PhyloNetwork) -> ClassFlags:
    return _classify_raw(net._raw())


# ---------------------------------------------------------------------------
# Canonical certificates
# ---------------------------------------------------------------------------


def _rank(keys) -> list[int]:
    index = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [index[k] for k in keys]


def _refine(col, ch, pa):
    ncol = len(set(col))
    while True:
        keys = [(col[v], tuple(sorted(col[w] for w in ch[v])), tuple(sorted(col[w] for w in pa[v])))
                for v in range(len(col))]
        new = _rank(keys)
        m = len(set(new))
        if m == ncol:
            return new
        col, ncol = new, m


def _canonical_key(raw: _Raw) -> tuple:
    nv, arcs, labels = raw
    ch, pa = _adjacency(nv, arcs)
    init = [(0 if v == 0 else 1 if labels[v] else 2 if len(pa[v]) == 1 else 3, labels[v])
            for v in range(nv)]

    def encode(col):
        return (nv, col[0], tuple(labels[v] for v in sorted(range(nv), key=col.__getitem__)),
                tuple(sorted((col[u], col[v]) for u, v in arcs)))

    def search(col):
        col = _refine(col, ch, pa)
        if len(set(col)) == nv:
            return encode(col)
        sizes: dict[int, int] = {}
        for c in col:
            sizes[c] = sizes.get(c, 0) + 1
        target = min(c for c, k in sizes.items() if k > 1)
        best = None
        for v in range(nv):
            if col[v] != target:
                continue
            trial = [2 * c for c in col]
            trial[v] -= 1
            enc = search(_rank(trial))
            if best is None or enc < best:
                best = enc
        return best

    return search(_rank(init))


def _key_bytes(key: tuple) -> bytes:
    nv, root, labels, arcs = key
    out = [nv, root, *labels, len(arcs)]
    for u, v in arcs:
        out.extend((u, v))
    return b"".join(x.to_bytes(2, "big") for x in out)


def canonical_certificate(net: PhyloNetwork) -> bytes:
    """Equal iff the networks are isomorphic by a map fixing the root and every leaf label."""
    return _key_bytes(_canonical_key(net._raw()))


def certificate_hex(net: PhyloNetwork) -> str:
    return canonical_certificate(net).hex()


def _canonical_raw(raw: _Raw) -> _Raw:
    """Representative with vertices renumbered in canonical order."""
    nv, root, labels, arcs = _canonical_key(raw)
    perm = list(range(nv))
    # move the root to vertex 0
    perm[root], perm[0] = 0, root
    new_arcs = tuple(sorted((perm[u], perm[v]) for u, v in arcs))
    new_labels = [0] * nv
    for i, lab in enumerate(labels):
        new_labels[perm[i]] = lab
    return (nv, new_arcs, tuple(new_labels))


# ---------------------------------------------------------------------------
# Generation
# ---------------------------------------------------------------------------


def _trees(n: int) -> list[_Raw]:
    if n == 1:
        return [(1, (), (1,))]
    layer = [(4, ((0, 1), (1, 2), (1, 3)), (0, 0, 1, 2))]
    for k in range(3, n + 1):
        nxt = []
        for nv, arcs, labels in layer:
            for i, (a, b) in enumerate(arcs):
                w, leaf = nv, nv + 1
                new = arcs[:i] + arcs[i + 1:] + ((a, w), (w, b), (w, leaf))
                nxt.append((nv + 2, new, labels + (0, k)))
        layer = nxt
    return layer


@dataclass
class Pruning:
    """Cuts for intermediate layers.

    ``max_level``, ``tree_child`` and ``outer_planar`` are closed under deleting
    a reticulation arc. ``defects`` is sound for simple outputs that satisfy
    the blob condition: a defective block (a doubled arc, or a blob with fewer
    than two outgoing cut arcs) only stops being defective by absorbing a new
    reticulation, so a defective block already holding ``max_level``
    reticulations is dead, and one added arc repairs at most
    ``max_level - 1`` defective blocks.
    """

    max_level: Optional[int] = None
    tree_child: bool = False
    outer_planar: bool = False
    defects: bool = False

    @classmethod
    def for_class(cls, spec: NetworkClassSpec, allow_parallel: bool = False) -> "Pruning":
        return cls(max_level=spec.level, tree_child=spec.tree_child,
                   outer_planar=spec.outer_planar, defects=not allow_parallel)


def _block_profile(nv, arcs, pa):
    """(level, retic counts of defective blocks) for the cyclic blocks."""
    blocks = _blocks(nv, arcs)
    bridges = [arcs[comp[0]] for comp in blocks if len(comp) == 1]
    level = 0
    defective = []
    for comp in blocks:
        if len(comp) < 2:
            continue
        rets = {arcs[e][1] for e in comp if len(pa[arcs[e][1]]) == 2}
        level = max(level, len(rets))
        verts = set()
        for e in comp:
            verts.update(arcs[e])
        if len(verts) == 2:
            defective.append(len(rets))
        elif sum(1 for x, y in bridges if x in verts and y not in verts) < 2:
            defective.append(len(rets))
    return level, defective


def _extensions(raw: _Raw, tree_child: bool) -> Iterator[_Raw]:
    nv, arcs, labels = raw
    ch, pa = _adjacency(nv, arcs)
    order = _topological(nv, ch, pa)
    desc = _descendants(nv, ch, order)
    is_ret = [len(p) == 2 for p in pa]
    m = len(arcs)
    u, h = nv, nv + 1
    new_labels = labels + (0, 0)
    for i in range(m):
        a, b = arcs[i]
        if tree_child and is_ret[b]:
            continue
        rest_i = arcs[:i] + arcs[i + 1:]
        for j in range(m):
            c, d = arcs[j]
            if i == j:
                if tree_child:
                    continue
                yield (nv + 2, rest_i + ((a, u), (u, h), (u, h), (h, b)), new_labels)
                continue
            if (desc[d] >> a) & 1:
                continue  # h would be an ancestor of u
            if tree_child:
                if is_ret[d]:
                    continue
                if c != a:
                    if len(ch[c]) != 2:
                        continue
                    other = ch[c][1] if ch[c][0] == d else ch[c][0]
                    if is_ret[other]:
                        continue
            jj = j if j < i else j - 1
            rest = rest_i[:jj] + rest_i[jj + 1:]
            yield (nv + 2, rest + ((a, u), (u, b), (c, h), (h, d), (u, h)), new_labels)


def _passes_pruning(raw: _Raw, prune: Pruning, remaining: Optional[int]) -> bool:
    nv, arcs, _ = raw
    if prune.max_level is not None:
        _, pa = _adjacency(nv, arcs)
        level, defective = _block_profile(nv, arcs, pa)
        if level > prune.max_level:
            return False
        if prune.defects and defective:
            if max(defective) >= prune.max_level:
                return False
            if remaining is not None and len(defective) > (prune.max_level - 1) * remaining:
                return False
    if prune.outer_planar and not _raw_outerplanar(nv, arcs):
        return False
    return True


@dataclass
class Layers:
    """Canonical representatives per reticulation number (before the output filter)."""

    n: int
    layers: list[dict[tuple, _Raw]] = field(default_factory=list)
    candidates: int = 0

    @property
    def r_max(self) -> int:
        return len(self.layers) - 1


def build_layers(n: int, r_max: int, prune: Optional[Pruning] = None,
                 budget: Optional[int] = None) -> Layers:
    """Enumerate layers 0..r_max of canonical representatives."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if r_max < 0:
        raise ValueError("r_max must be >= 0")
    prune = prune or Pruning()
    layers = Layers(n)
    first: dict[tuple, _Raw] = {}
    for t in _trees(n):
        first.setdefault(_canonical_key(t), t)
    layers.layers.append(first)
    if n == 1:
        while len(layers.layers) <= r_max:
            layers.layers.append({})
        return layers
    while len(layers.layers) <= r_max:
        r = len(layers.layers)
        nxt: dict[tuple, _Raw] = {}
        for raw in layers.layers[-1].values():
            for cand in _extensions(raw, prune.tree_child):
                layers.candidates += 1
                if budget is not None and layers.candidates > budget:
                    raise BudgetExceeded({
                        "n": n, "reticulations": len(layers.layers),
                        "candidates": layers.candidates,
                        "layer_sizes": [len(x) for x in layers.layers] + [len(nxt)],
                    })
                if not _passes_pruning(cand, prune, r_max - r):
                    continue
                key = _canonical_key(cand)
                if key not in nxt:
                    nxt[key] = cand
        layers.layers.append(nxt)
    return layers


def _has_parallel_arcs(arcs) -> bool:
    return len(set(arcs)) != len(arcs)


def _output_filter(raw: _Raw, allow_parallel: bool) -> bool:
    nv, arcs, _ = raw
    if nv == 1:
        return True
    if not allow_parallel and _has_parallel_arcs(arcs):
        return False
    return _blob_condition(nv, arcs, _blocks(nv, arcs))


def generate_networks(n: int, r_max: int, budget: Optional[int] = None,
                      prune: Optional[Pruning] = None,
                      allow_parallel: bool = False) -> Iterator[PhyloNetwork]:
    """One representative per isomorphism class of valid networks with <= r_max reticulations.

    Parallel arcs only occur in intermediate layers unless ``allow_parallel``;
    with them, chains of doubled arcs make every class infinite.
    """
    layers = build_layers(n, r_max, prune, budget)
    for layer in layers.layers[: r_max + 1]:
        for key in sorted(layer):
            raw = layer[key]
            if _output_filter(raw, allow_parallel):
                yield PhyloNetwork._from_raw(_canonical_raw(raw))


def class_predicate(spec: NetworkClassSpec,
                    allow_parallel: bool = False) -> Callable[[ClassFlags], bool]:
    def accept(flags: ClassFlags) -> bool:
        return (flags.blob_condition
                and (allow_parallel or not flags.parallel_arcs)
                and flags.level <= spec.level
                and (flags.tree_child or not spec.tree_child)
                and (flags.galled or not spec.galled)
                and (flags.outer_planar or not spec.outer_planar))
    return accept


def default_r_max(n: int, spec: NetworkClassSpec) -> int:
    """Tree-child: n - 1. Otherwise level * (n - 1): at most n - 1 blobs, each with <= level reticulations.

    The second bound needs simple networks; see ``generate_networks``.
    """
    if n == 1:
        return 0
    if spec.tree_child:
        return min(n - 1, spec.level * (n - 1))
    return spec.level * (n - 1)


@dataclass
class CountResult:
    n: int
    class_name: str
    r_max: int
    count: int
    by_reticulations: list[int]
    saturated: Optional[bool] = None
    extra_at_r_max_plus_1: Optional[int] = None
    networks: Optional[list[PhyloNetwork]] = None


def count_class(n: int, spec: NetworkClassSpec, r_max: Optional[int] = None,
                saturated: bool = False, budget: Optional[int] = None,
                keep_networks: bool = False, allow_parallel: bool = False) -> CountResult:
    """Number of isomorphism classes in the class with <= r_max reticulations.

    With ``saturated=True`` the enumeration is extended to r_max + 1 and the
    number of extra class members found there is reported (it must be zero).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if r_max is None:
        r_max = default_r_max(n, spec)
    accept = class_predicate(spec, allow_parallel)
    prune = Pruning.for_class(spec, allow_parallel)
    top = r_max + 1 if saturated else r_max
    layers = build_layers(n, top, prune, budget)
    by_r = []
    kept = [] if keep_networks else None
    for r, layer in enumerate(layers.layers[: top + 1]):
        k = 0
        for key in sorted(layer):
            raw = layer[key]
            if accept(_classify_raw(raw)):
                k += 1
                if kept is not None and r <= r_max:
                    kept.append(PhyloNetwork._from_raw(_canonical_raw(raw)))
        by_r.append(k)
    result = CountResult(n=n, class_name=spec.name, r_max=r_max,
                         count=sum(by_r[: r_max + 1]), by_reticulations=by_r[: r_max + 1],
                         networks=kept)
    if saturated:
        result.extra_at_r_max_plus_1 = by_r[r_max + 1]
        result.saturated = by_r[r_max + 1] == 0
    return result


# ---------------------------------------------------------------------------
# Serialisation
# ---------------------------------------------------------------------------


def to_arclist(net: PhyloNetwork) -> str:
    """``n=<leaves> r=<retics>`` header, then one ``u -> v`` per arc; leaves written L<label>."""
    labels = dict(net.leaf_labels)
    internal = [v for v in range(net.nv) if v not in labels]
    internal.sort(key=lambda v: (v != net.root, v))
    names = {v: str(i) for i, v in enumerate(internal)}
    names.update({v: f"L{lab}" for v, lab in labels.items()})
    r = len(net.reticulations)
    lines = [f"n={net.n} r={r}"]
    lines.extend(f"{names[u]} -> {names[v]}" for u, v in sorted(net.arcs))
    return "\n".join(lines) + "\n"


_HEADER = re.compile(r"^n=(\d+)\s+r=(\d+)$")
_ARC = re.compile(r"^(L?\d+)\s*->\s*(L?\d+)$")


def from_arclist(text: str) -> PhyloNetwork:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    m = _HEADER.match(lines[0]) if lines else None
    if not m:
        raise ValueError("missing 'n=<leaves> r=<retics>' header")
    n = int(m.group(1))
    arcs = []
    for ln in lines[1:]:
        am = _ARC.match(ln)
        if not am:
            raise ValueError(f"bad arc line {ln!r}")
        arcs.append((am.group(1), am.group(2)))
    if not arcs:
        if n != 1:
            raise ValueError("only the one-leaf network has no arcs")
        return PhyloNetwork(1, (), 0, ((0, 1),))
    leaves = {x: int(x[1:]) for arc in arcs for x in arc if x.startswith("L")}
    return PhyloNetwork.from_arcs(arcs, leaves, root="0")


def iter_arclist_records(stream: Iterable[str]) -> Iterator[PhyloNetwork]:
    """Split a stream of records (blank-line separated) back into networks."""
    buf: list[str] = []
    for line in stream:
        if line.strip():
            buf.append(line)
        elif buf:
            yield from_arclist("".join(buf))
            buf = []
    if buf:
        yield from_arclist("".join(buf))
