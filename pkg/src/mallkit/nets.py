"""Unit-free MALL proof-nets: linkings over a cut sequent.

A net is a set of axiom linkings on the syntactic forest of a cut sequent
[Σ] Γ.  Correctness (P0–P3) is checked, not built in.  Cut elimination works
pairwise on the ∗-vertices; composition, desequentialization of sequent
proofs, identity nets and sequentialization round out the toolkit.
"""

from __future__ import annotations

import itertools
import json
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .formulas import (
    Formula, PosAtom, NegAtom, Tensor, Par, With, Plus, _BINARY,
    dual, fmt, parse, is_unit_free, paths_of, leaf_paths, subformula_at,
)
from .proofs import ProofTree, ax_, par_, tensor_, cut_, with_, plus1_, \
    plus2_, align_to

__all__ = [
    "LeafAddr", "CutSequent", "LinkingSet", "NetGraph", "NetCheck",
    "UnitsPresent", "NonAtomicAxiom", "InvalidLinking", "PairNotFound",
    "ConclusionMismatch", "SizeCapExceeded", "NotAProofNet",
    "NoSequentializingVertex",
    "make_net", "net_eq", "leaves_of", "additive_resolution",
    "toggled_withs", "depends", "build_graph", "is_proof_net",
    "identity_net", "desequentialize", "compose", "eliminate_cut",
    "normalize_net", "matches", "turbo_eliminate", "is_bipartite",
    "is_full", "is_ax_unique", "restrict_left", "find_sequentializing",
    "sequentialize", "almost_reduced_composition",
    "net_to_json", "net_from_json", "net_to_dot",
]


class UnitsPresent(ValueError):
    pass


class NonAtomicAxiom(ValueError):
    pass


class InvalidLinking(ValueError):
    pass


class PairNotFound(ValueError):
    pass


class ConclusionMismatch(ValueError):
    pass


class SizeCapExceeded(RuntimeError):
    pass


class NotAProofNet(ValueError):
    pass


class NoSequentializingVertex(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class LeafAddr:
    """Address of an atom occurrence: tree index (cut pairs first, then
    conclusions), side within a cut pair (0 for conclusions), and the
    L/R path from that tree's root."""
    tree: int
    side: int
    path: str


@dataclass(frozen=True)
class CutSequent:
    cuts: tuple            # tuple of (Formula, dual Formula)
    conclusions: tuple     # tuple of Formula

    def __post_init__(self):
        for a, b in self.cuts:
            if dual(a) != b:
                raise InvalidLinking(
                    f"cut pair {fmt(a)} ∗ {fmt(b)}: components not dual")

    def trees(self) -> Iterator[tuple[int, int, Formula]]:
        for i, (a, b) in enumerate(self.cuts):
            yield i, 0, a
            yield i, 1, b
        for j, c in enumerate(self.conclusions):
            yield len(self.cuts) + j, 0, c

    def formula_at(self, tree: int, side: int) -> Formula:
        if tree < len(self.cuts):
            return self.cuts[tree][side]
        return self.conclusions[tree - len(self.cuts)]


@dataclass(frozen=True)
class LinkingSet:
    cut_sequent: CutSequent
    linkings: tuple        # tuple of frozenset of frozenset({LeafAddr, LeafAddr})


def make_net(cuts, conclusions, linkings) -> LinkingSet:
    cs = CutSequent(tuple(cuts), tuple(conclusions))
    lks, seen = [], set()
    for lam in linkings:
        lam = frozenset(frozenset(link) for link in lam)
        if lam not in seen:
            seen.add(lam)
            lks.append(lam)
    return LinkingSet(cs, tuple(lks))


def net_eq(a: LinkingSet, b: LinkingSet) -> bool:
    """Equality up to reordering of cut pairs (addresses follow)."""
    ca, cb = a.cut_sequent, b.cut_sequent
    if ca.conclusions != cb.conclusions or len(ca.cuts) != len(cb.cuts):
        return False
    sa = set(a.linkings)
    n = len(ca.cuts)
    for perm in itertools.permutations(range(n)):
        if tuple(cb.cuts[p] for p in perm) != ca.cuts:
            continue
        inv = {p: i for i, p in enumerate(perm)}

        def remap(addr: LeafAddr) -> LeafAddr:
            if addr.tree < n:
                return LeafAddr(inv[addr.tree], addr.side, addr.path)
            return addr

        sb = {frozenset(frozenset(remap(x) for x in link) for link in lam)
              for lam in b.linkings}
        if sa == sb:
            return True
    return n == 0 and ca.cuts == cb.cuts and sa == set(b.linkings)


def leaves_of(cs: CutSequent) -> list[tuple[LeafAddr, Formula]]:
    out = []
    for t, s, f in cs.trees():
        for p, g in leaf_paths(f):
            out.append((LeafAddr(t, s, p), g))
    return out


def _endpoints(lam) -> set[LeafAddr]:
    return {a for link in lam for a in link}


def _flip(path: str) -> str:
    return path.translate(str.maketrans("LR", "RL"))


# ---------------------------------------------------------------------------
# resolutions and the graph G_Λ

def _resolve_tree(f: Formula, pts: set[str], t: int, s: int,
                  path: str = "") -> set:
    """Kept vertices of the additive resolution of one tree, given the
    endpoint paths ``pts`` falling in this tree."""
    if isinstance(f, (PosAtom, NegAtom)):
        if path not in pts:
            raise InvalidLinking(f"leaf {path!r} of tree {t} not linked")
        return {("v", t, s, path)}
    if isinstance(f, (Tensor, Par)):
        return {("v", t, s, path)} \
            | _resolve_tree(f.left, pts, t, s, path + "L") \
            | _resolve_tree(f.right, pts, t, s, path + "R")
    if isinstance(f, (With, Plus)):
        lh = any(q.startswith(path + "L") for q in pts)
        rh = any(q.startswith(path + "R") for q in pts)
        if lh == rh:
            raise InvalidLinking(
                f"additive at {path!r} of tree {t}: endpoints pick "
                f"{'both' if lh else 'neither'} argument")
        child = (f.left, path + "L") if lh else (f.right, path + "R")
        return {("v", t, s, path)} | _resolve_tree(child[0], pts, t, s,
                                                   child[1])
    raise UnitsPresent(f"unit {fmt(f)} in a net tree")


def additive_resolution(ls: LinkingSet, lam) -> frozenset:
    """Kept vertices (("v", tree, side, path) and ("star", i)) of the unique
    additive resolution whose leaves are lam's endpoints."""
    if lam not in ls.linkings:
        raise InvalidLinking("linking not part of the net")
    cs = ls.cut_sequent
    pts = _endpoints(lam)
    bytree = defaultdict(set)
    for a in pts:
        bytree[(a.tree, a.side)].add(a.path)
    kept = set()
    for i in range(len(cs.cuts)):
        h0, h1 = bool(bytree[(i, 0)]), bool(bytree[(i, 1)])
        if h0 != h1:
            raise InvalidLinking(f"cut pair {i}: endpoints on one side only")
        if h0:
            kept.add(("star", i))
    for t, s, f in cs.trees():
        p = bytree[(t, s)]
        if p:
            kept |= _resolve_tree(f, p, t, s)
    return frozenset(kept)


def _union_resolution(ls: LinkingSet, Lam) -> set:
    out: set = set()
    for lam in Lam:
        out |= additive_resolution(ls, lam)
    return out


def toggled_withs(ls: LinkingSet, Lam) -> set:
    union = _union_resolution(ls, Lam)
    out = set()
    for t, s, f in ls.cut_sequent.trees():
        for p, g in paths_of(f):
            if isinstance(g, With) and ("v", t, s, p + "L") in union \
                    and ("v", t, s, p + "R") in union:
                out.add(("v", t, s, p))
    return out


def depends(ls: LinkingSet, link, w, Lam) -> bool:
    Lam = list(Lam)
    for lam1, lam2 in itertools.combinations(Lam, 2):
        for a, b in ((lam1, lam2), (lam2, lam1)):
            if link in a and link not in b and \
                    toggled_withs(ls, [a, b]) == {w}:
                return True
    return False


@dataclass(frozen=True)
class NetGraph:
    vertices: frozenset
    edges: tuple   # (eid, u, v, kind, owner); owner owns it as a switch edge


def build_graph(ls: LinkingSet, Lam) -> NetGraph:
    Lam = list(Lam)
    cs = ls.cut_sequent
    kept = _union_resolution(ls, Lam)
    edges = []

    def vertex_formula(v):
        return subformula_at(cs.formula_at(v[1], v[2]), v[3])

    for v in kept:
        if v[0] == "star":
            for s in (0, 1):
                r = ("v", v[1], s, "")
                if r in kept:
                    edges.append((v, r, "tree", None))
            continue
        f = vertex_formula(v)
        if isinstance(f, _BINARY):
            owner = v if isinstance(f, (Par, With)) else None
            for step in ("L", "R"):
                c = ("v", v[1], v[2], v[3] + step)
                if c in kept:
                    edges.append((v, c, "tree", owner))
    links = {link for lam in Lam for link in lam}
    for link in links:
        a, b = sorted(link)
        edges.append((("v", a.tree, a.side, a.path),
                      ("v", b.tree, b.side, b.path), "link", None))
    if len(Lam) >= 2:
        withs = [v for v in kept if v[0] == "v"
                 and isinstance(vertex_formula(v), With)]
        for link in links:
            for w in withs:
                if depends(ls, link, w, Lam):
                    for a in link:
                        u = ("v", a.tree, a.side, a.path)
                        # a jump duplicating the premise edge adds nothing:
                        # both are switch edges of the same &
                        if u[1:3] == w[1:3] and a.path in \
                                (w[3] + "L", w[3] + "R"):
                            continue
                        edges.append((u, w, "jump", w))
    return NetGraph(frozenset(kept),
                    tuple((i, u, v, k, o)
                          for i, (u, v, k, o) in enumerate(edges)))


def _adjacency(edges):
    adj = defaultdict(list)
    for eid, u, v, kind, owner in edges:
        adj[u].append((v, eid, owner))
        adj[v].append((u, eid, owner))
    return adj


def _is_tree(vertices, edges) -> bool:
    if not vertices:
        return True
    if len(edges) != len(vertices) - 1:
        return False
    adj = _adjacency(edges)
    seen = set()
    stack = [next(iter(vertices))]
    while stack:
        u = stack.pop()
        if u in seen:
            continue
        seen.add(u)
        for v, _, _ in adj[u]:
            if v not in seen:
                stack.append(v)
    return seen == set(vertices)


def _on_switching_cycle(g: NetGraph, w) -> bool:
    """Is w on a cycle using at most one switch edge per ⅋/&-vertex?

    Cycles are simple, so the constraint is local: at every vertex of the
    cycle, at most one of its two incident cycle edges may be owned by it.
    """
    adj = _adjacency(g.edges)

    def ok(vertex, e_in_owner, e_out_owner):
        owned = (e_in_owner == vertex) + (e_out_owner == vertex)
        return owned <= 1

    first_owner = {}

    def dfs(cur, in_owner, in_eid, visited):
        for nxt, eid, owner in adj[cur]:
            if eid == in_eid:
                continue
            if not ok(cur, in_owner, owner):
                continue
            if nxt == w:
                if ok(w, owner, first_owner["o"]):
                    return True
                continue
            if nxt in visited:
                continue
            if dfs(nxt, owner, eid, visited | {nxt}):
                return True
        return False

    for nxt, eid, owner in adj[w]:
        first_owner["o"] = owner
        if nxt == w:
            continue
        if dfs(nxt, owner, eid, {w, nxt}):
            return True
    return False


# ---------------------------------------------------------------------------
# correctness (P0–P3)

@dataclass(frozen=True)
class NetCheck:
    ok: bool
    violation: Optional[str] = None
    witness: object = None


def _amp_resolutions(f: Formula, path: str = "") -> list[frozenset]:
    """Leaf sets after deleting one argument of each &-connective only."""
    if isinstance(f, (PosAtom, NegAtom)):
        return [frozenset({path})]
    if isinstance(f, With):
        return _amp_resolutions(f.left, path + "L") + \
            _amp_resolutions(f.right, path + "R")
    if isinstance(f, _BINARY):
        return [l | r for l in _amp_resolutions(f.left, path + "L")
                for r in _amp_resolutions(f.right, path + "R")]
    raise UnitsPresent(fmt(f))


def is_proof_net(ls: LinkingSet, par_cap: int = 20,
                 linking_cap: int = 12) -> NetCheck:
    cs = ls.cut_sequent
    leaf_map = dict(leaves_of(cs))
    for lam in ls.linkings:
        for link in lam:
            if len(link) != 2:
                raise InvalidLinking("link is not a pair")
            a, b = link
            fa, fb = leaf_map.get(a), leaf_map.get(b)
            if fa is None or fb is None or dual(fa) != fb:
                raise InvalidLinking(
                    f"link does not join complementary atoms: {a}, {b}")
        additive_resolution(ls, lam)       # raises if malformed

    # P0: every cut pair has a leaf in some linking
    for i in range(len(cs.cuts)):
        if not any(a.tree == i for lam in ls.linkings
                   for a in _endpoints(lam)):
            return NetCheck(False, "P0", i)

    # P1: exactly one linking on each &-resolution
    per_tree = [[frozenset(LeafAddr(t, s, p) for p in leaves)
                 for leaves in _amp_resolutions(f)]
                for t, s, f in cs.trees()]
    for combo in itertools.product(*per_tree):
        res_leaves = frozenset().union(*combo) if combo else frozenset()
        on = [lam for lam in ls.linkings
              if _endpoints(lam) <= res_leaves]
        if len(on) != 1:
            return NetCheck(False, "P1", combo)

    # P2: every ⅋-switching of every single linking is a tree
    for lam in ls.linkings:
        g = build_graph(ls, [lam])
        owned = defaultdict(list)
        for e in g.edges:
            if e[4] is not None:
                v = e[4]
                f = subformula_at(cs.formula_at(v[1], v[2]), v[3])
                if isinstance(f, Par):
                    owned[v].append(e[0])
        pars = [v for v in owned if len(owned[v]) == 2]
        if len(pars) > par_cap:
            raise SizeCapExceeded(f"{len(pars)} ⅋-vertices exceeds the "
                                  f"P2 cap of {par_cap}")
        for choice in itertools.product(*(owned[v] for v in pars)):
            drop = {owned[v][1 - owned[v].index(c)]
                    for v, c in zip(pars, choice)}
            sub = [e for e in g.edges if e[0] not in drop]
            if not _is_tree(g.vertices, sub):
                return NetCheck(False, "P2", (lam, choice))

    # P3: every Λ of ≥2 linkings toggles a & on no switching cycle
    if len(ls.linkings) > linking_cap:
        raise SizeCapExceeded(f"{len(ls.linkings)} linkings exceeds the "
                              f"P3 cap of {linking_cap}")
    for r in range(2, len(ls.linkings) + 1):
        for Lam in itertools.combinations(ls.linkings, r):
            toggles = toggled_withs(ls, Lam)
            g = build_graph(ls, Lam)
            if not any(not _on_switching_cycle(g, w) for w in toggles):
                return NetCheck(False, "P3", Lam)
    return NetCheck(True)


# ---------------------------------------------------------------------------
# identity nets and desequentialization

def _additive_choices(f: Formula, path: str = "") -> list[frozenset]:
    """Leaf sets of the additive resolutions of a single formula tree."""
    if isinstance(f, (PosAtom, NegAtom)):
        return [frozenset({path})]
    if isinstance(f, (With, Plus)):
        return _additive_choices(f.left, path + "L") + \
            _additive_choices(f.right, path + "R")
    if isinstance(f, _BINARY):
        return [l | r for l in _additive_choices(f.left, path + "L")
                for r in _additive_choices(f.right, path + "R")]
    raise UnitsPresent(fmt(f))


def identity_net(a: Formula) -> LinkingSet:
    """The net on ⊢ a⊥, a linking every leaf l to its dual leaf l⊥, one
    linking per additive resolution of a (dual choices on a⊥)."""
    if not is_unit_free(a):
        raise UnitsPresent(fmt(a))
    linkings = []
    for leaves in _additive_choices(a):
        linkings.append(frozenset(
            frozenset({LeafAddr(1, 0, p), LeafAddr(0, 0, _flip(p))})
            for p in leaves))
    return make_net((), (dual(a), a), linkings)


def _remap(linkings, fn) -> tuple:
    out, seen = [], set()
    for lam in linkings:
        lam2 = frozenset(frozenset(fn(a) for a in link) for link in lam)
        if lam2 not in seen:
            seen.add(lam2)
            out.append(lam2)
    return tuple(out)


def _concl_mapper(node: ProofTree, premise: ProofTree, ncuts_premise: int,
                  ncuts_result: int, active_to):
    """Address translation for one premise of a sequent rule.

    ``active_to`` maps an active occurrence id to (result tree, prefix).
    Context occurrences follow their id into the node's conclusion."""
    pos = {i: k for k, (i, _) in enumerate(node.conclusion)}
    prem_ids = [i for i, _ in premise.conclusion]

    def fn(addr: LeafAddr) -> LeafAddr:
        if addr.tree < ncuts_premise:
            return addr
        i = prem_ids[addr.tree - ncuts_premise]
        if i in active_to:
            t, prefix = active_to[i]
            return LeafAddr(t, 0, prefix + addr.path)
        return LeafAddr(ncuts_result + pos[i], 0, addr.path)

    return fn


def desequentialize(p: ProofTree) -> LinkingSet:
    """Translate an η-normal unit-free sequent proof to a linking set.
    Parallel &-branches never share cut pairs."""
    r = p.rule
    forms = tuple(f for _, f in p.conclusion)
    if r == "ax":
        (i, fa), (j, fb) = p.conclusion
        if not isinstance(fa, (PosAtom, NegAtom)):
            raise NonAtomicAxiom(fmt(fa))
        return make_net((), forms, [
            [frozenset({LeafAddr(0, 0, ""), LeafAddr(1, 0, "")})]])
    if r in ("one", "bot", "top"):
        raise UnitsPresent(f"{r} rule has no proof-net translation")
    if r in ("par", "plus1", "plus2"):
        sub = desequentialize(p.premises[0])
        nc = len(sub.cut_sequent.cuts)
        k = p.principal[0]
        pos = {i: t for t, (i, _) in enumerate(p.conclusion)}
        if r == "par":
            a, b = p.actives[0]
            act = {a: (nc + pos[k], "L"), b: (nc + pos[k], "R")}
        else:
            act = {p.actives[0][0]: (nc + pos[k], "L" if r == "plus1"
                                     else "R")}
        fn = _concl_mapper(p, p.premises[0], nc, nc, act)
        return make_net(sub.cut_sequent.cuts, forms,
                        _remap(sub.linkings, fn))
    if r in ("tensor", "cut"):
        n1 = desequentialize(p.premises[0])
        n2 = desequentialize(p.premises[1])
        c1, c2 = len(n1.cut_sequent.cuts), len(n2.cut_sequent.cuts)
        a1, a2 = p.actives[0][0], p.actives[1][0]
        if r == "tensor":
            cuts = n1.cut_sequent.cuts + n2.cut_sequent.cuts
            nc = c1 + c2
            k = p.principal[0]
            pos = {i: t for t, (i, _) in enumerate(p.conclusion)}
            act1 = {a1: (nc + pos[k], "L")}
            act2 = {a2: (nc + pos[k], "R")}
        else:
            pair = (p.premises[0].formula(a1), p.premises[1].formula(a2))
            cuts = n1.cut_sequent.cuts + n2.cut_sequent.cuts + (pair,)
            nc = c1 + c2 + 1
            act1 = {a1: (c1 + c2, "")}
            act2 = {a2: (c1 + c2, "")}
        fn1 = _concl_mapper(p, p.premises[0], c1, nc, act1)
        raw2 = _concl_mapper(p, p.premises[1], c2, nc, act2)

        def fn2(addr: LeafAddr) -> LeafAddr:
            if addr.tree < c2:
                return LeafAddr(addr.tree + c1, addr.side, addr.path)
            a = raw2(addr)
            if r == "cut" and a.tree == c1 + c2:
                return LeafAddr(a.tree, 1, a.path)
            return a

        l1 = _remap(n1.linkings, fn1)
        l2 = _remap(n2.linkings, fn2)
        return make_net(cuts, forms,
                        [lam | mu for lam in l1 for mu in l2])
    if r == "with":
        n1 = desequentialize(p.premises[0])
        n2 = desequentialize(p.premises[1])
        c1, c2 = len(n1.cut_sequent.cuts), len(n2.cut_sequent.cuts)
        cuts = n1.cut_sequent.cuts + n2.cut_sequent.cuts
        nc = c1 + c2
        k = p.principal[0]
        pos = {i: t for t, (i, _) in enumerate(p.conclusion)}
        fn1 = _concl_mapper(p, p.premises[0], c1, nc,
                            {p.actives[0][0]: (nc + pos[k], "L")})
        raw2 = _concl_mapper(p, p.premises[1], c2, nc,
                             {p.actives[1][0]: (nc + pos[k], "R")})

        def fn2(addr: LeafAddr) -> LeafAddr:
            if addr.tree < c2:
                return LeafAddr(addr.tree + c1, addr.side, addr.path)
            return raw2(addr)

        return make_net(cuts, forms,
                        list(_remap(n1.linkings, fn1))
                        + list(_remap(n2.linkings, fn2)))
    raise ValueError(f"cannot desequentialize rule {r!r}")


# ---------------------------------------------------------------------------
# composition and cut elimination

def compose(theta: LinkingSet, psi: LinkingSet, over: Formula) -> LinkingSet:
    ct, cp = theta.cut_sequent, psi.cut_sequent
    if over not in ct.conclusions:
        raise ConclusionMismatch(f"{fmt(over)} is not a conclusion of θ")
    if dual(over) not in cp.conclusions:
        raise ConclusionMismatch(f"{fmt(dual(over))} is not a conclusion of ψ")
    i = len(ct.conclusions) - 1 - ct.conclusions[::-1].index(over)
    j = len(cp.conclusions) - 1 - cp.conclusions[::-1].index(dual(over))
    c1, c2 = len(ct.cuts), len(cp.cuts)
    nc = c1 + c2 + 1
    gamma = [c for t, c in enumerate(ct.conclusions) if t != i]
    delta = [c for t, c in enumerate(cp.conclusions) if t != j]

    def fn1(addr: LeafAddr) -> LeafAddr:
        if addr.tree < c1:
            return addr
        t = addr.tree - c1
        if t == i:
            return LeafAddr(c1 + c2, 0, addr.path)
        return LeafAddr(nc + t - (t > i), 0, addr.path)

    def fn2(addr: LeafAddr) -> LeafAddr:
        if addr.tree < c2:
            return LeafAddr(addr.tree + c1, addr.side, addr.path)
        t = addr.tree - c2
        if t == j:
            return LeafAddr(c1 + c2, 1, addr.path)
        return LeafAddr(nc + len(gamma) + t - (t > j), 0, addr.path)

    l1 = _remap(theta.linkings, fn1)
    l2 = _remap(psi.linkings, fn2)
    return make_net(ct.cuts + cp.cuts + ((over, dual(over)),),
                    gamma + delta,
                    [lam | mu for lam in l1 for mu in l2])


def _drop_pair(linkings, i):
    def fn(addr: LeafAddr) -> LeafAddr:
        if addr.tree > i:
            return LeafAddr(addr.tree - 1, addr.side, addr.path)
        return addr
    return _remap(linkings, fn)


def _gc(cuts, conclusions, linkings) -> LinkingSet:
    """Delete cut pairs with no leaf in any remaining linking."""
    while True:
        for i in range(len(cuts)):
            if not any(a.tree == i for lam in linkings
                       for a in _endpoints(lam)):
                cuts = cuts[:i] + cuts[i + 1:]
                linkings = _drop_pair(linkings, i)
                break
        else:
            return make_net(cuts, conclusions, linkings)


def eliminate_cut(ls: LinkingSet, pair: int) -> LinkingSet:
    cs = ls.cut_sequent
    if not 0 <= pair < len(cs.cuts):
        raise PairNotFound(pair)
    f, g = cs.cuts[pair]
    if isinstance(f, (PosAtom, NegAtom)):
        a0, a1 = LeafAddr(pair, 0, ""), LeafAddr(pair, 1, "")
        new = []
        for lam in ls.linkings:
            l0 = next((l for l in lam if a0 in l), None)
            l1 = next((l for l in lam if a1 in l), None)
            if l0 is None and l1 is None:
                new.append(lam)
                continue
            if l0 is l1:
                new.append(lam - {l0})
                continue
            (x,) = l0 - {a0}
            (y,) = l1 - {a1}
            new.append((lam - {l0, l1}) | {frozenset({x, y})})
        cuts = cs.cuts[:pair] + cs.cuts[pair + 1:]
        return make_net(cuts, cs.conclusions, _drop_pair(new, pair))
    # split a compound pair in two; dual reverses operands, so the L
    # subtree of side 0 pairs with the R subtree of side 1
    la, lb = f.left, f.right
    newcuts = cs.cuts[:pair] + ((la, dual(la)), (lb, dual(lb))) \
        + cs.cuts[pair + 1:]

    def fn(addr: LeafAddr) -> LeafAddr:
        if addr.tree == pair:
            if addr.side == 0:
                t = pair if addr.path[0] == "L" else pair + 1
            else:
                t = pair + 1 if addr.path[0] == "L" else pair
            return LeafAddr(t, addr.side, addr.path[1:])
        if addr.tree > pair:
            return LeafAddr(addr.tree + 1, addr.side, addr.path)
        return addr

    linkings = ls.linkings
    if isinstance(f, (With, Plus)):
        keep = []
        for lam in linkings:
            side = {s: {a.path[0] for a in _endpoints(lam)
                        if a.tree == pair and a.side == s} for s in (0, 1)}
            if not side[0] and not side[1]:
                keep.append(lam)
            elif side[0] in ({"L"}, {"R"}) and \
                    side[1] == {_flip(next(iter(side[0])))}:
                keep.append(lam)
        linkings = tuple(keep)
        return _gc(newcuts, cs.conclusions, _remap(linkings, fn))
    return make_net(newcuts, cs.conclusions, _remap(linkings, fn))


def normalize_net(ls: LinkingSet) -> LinkingSet:
    while ls.cut_sequent.cuts:
        for i, (f, _) in enumerate(ls.cut_sequent.cuts):
            if not isinstance(f, (PosAtom, NegAtom)):
                ls = eliminate_cut(ls, i)
                break
        else:
            ls = eliminate_cut(ls, 0)
    return ls


def almost_reduced_composition(theta: LinkingSet, psi: LinkingSet,
                               over: Formula) -> LinkingSet:
    ls = compose(theta, psi, over)
    while True:
        for i, (f, _) in enumerate(ls.cut_sequent.cuts):
            if not isinstance(f, (PosAtom, NegAtom)):
                ls = eliminate_cut(ls, i)
                break
        else:
            return ls


def _pair_mirrored(lam, i) -> bool:
    p0 = {a.path for a in _endpoints(lam) if a.tree == i and a.side == 0}
    p1 = {a.path for a in _endpoints(lam) if a.tree == i and a.side == 1}
    return {_flip(p) for p in p0} == p1


def matches(ls: LinkingSet, lam) -> bool:
    """Leaf-mirroring across every cut pair: the additive choices made on
    the two sides of each pair are dual."""
    return all(_pair_mirrored(lam, i)
               for i in range(len(ls.cut_sequent.cuts)))


def turbo_eliminate(ls: LinkingSet, pair: int) -> LinkingSet:
    cs = ls.cut_sequent
    if not 0 <= pair < len(cs.cuts):
        raise PairNotFound(pair)
    new = []
    for lam in ls.linkings:
        if not _pair_mirrored(lam, pair):
            continue
        links = set(lam)
        while True:
            hit = next((l for l in links
                        if any(a.tree == pair for a in l)), None)
            if hit is None:
                break
            a = next(a for a in hit if a.tree == pair)
            mirror = LeafAddr(pair, 1 - a.side, _flip(a.path))
            other = next(l for l in links if mirror in l)
            if other is hit:
                links.remove(hit)
                continue
            fused = (hit | other) - {a, mirror}
            links -= {hit, other}
            links.add(frozenset(fused))
        new.append(frozenset(links))
    cuts = cs.cuts[:pair] + cs.cuts[pair + 1:]
    return make_net(cuts, cs.conclusions, _drop_pair(new, pair))


# ---------------------------------------------------------------------------
# structural predicates

def is_bipartite(ls: LinkingSet) -> bool:
    cs = ls.cut_sequent
    if cs.cuts or len(cs.conclusions) != 2:
        raise ValueError("bipartiteness needs a cut-free two-conclusion net")
    n = len(cs.cuts)
    return all({a.tree for a in link} == {n, n + 1}
               for lam in ls.linkings for link in lam)


def is_full(ls: LinkingSet) -> bool:
    linked = {a for lam in ls.linkings for a in _endpoints(lam)}
    return all(addr in linked for addr, _ in leaves_of(ls.cut_sequent))


def is_ax_unique(ls: LinkingSet) -> bool:
    on = defaultdict(set)
    for lam in ls.linkings:
        for link in lam:
            for a in link:
                on[a].add(link)
    return all(len(s) <= 1 for s in on.values())


def restrict_left(ls: LinkingSet, Lam, w) -> list:
    _, t, s, path = w
    return [lam for lam in Lam
            if not any(a.tree == t and a.side == s
                       and a.path.startswith(path + "R")
                       for a in _endpoints(lam))]


# ---------------------------------------------------------------------------
# sequentialization

def _components(g: NetGraph, removed) -> list[set]:
    adj = _adjacency([e for e in g.edges if removed not in (e[1], e[2])])
    left = set(g.vertices) - {removed}
    comps = []
    while left:
        stack = [next(iter(left))]
        comp = set()
        while stack:
            u = stack.pop()
            if u in comp:
                continue
            comp.add(u)
            for v, _, _ in adj[u]:
                if v not in comp:
                    stack.append(v)
        comps.append(comp)
        left -= comp
    return comps


def find_sequentializing(ls: LinkingSet) -> list:
    """Terminal sequentializing vertices: each is ("star", i) or the root
    ("v", tree, 0, "") of a conclusion."""
    cs = ls.cut_sequent
    nc = len(cs.cuts)
    out = []
    g = None
    for j, f in enumerate(cs.conclusions):
        v = ("v", nc + j, 0, "")
        if isinstance(f, (Par, With)):
            out.append(v)
        elif isinstance(f, Plus):
            pts = {a.path for lam in ls.linkings
                   for a in _endpoints(lam) if a.tree == nc + j}
            if not any(p.startswith("L") for p in pts) or \
                    not any(p.startswith("R") for p in pts):
                out.append(v)
        elif isinstance(f, Tensor):
            if g is None:
                g = build_graph(ls, ls.linkings)
            if len(_components(g, v)) == 2:
                out.append(v)
    for i in range(nc):
        if g is None:
            g = build_graph(ls, ls.linkings)
        if ("star", i) in g.vertices and \
                len(_components(g, ("star", i))) == 2:
            out.append(("star", i))
    return out


def _restrict_component(ls: LinkingSet, comp: set,
                        split) -> tuple[LinkingSet, list, list]:
    """Sub-net of the trees lying in ``comp``; ``split`` = (tree, prefix)
    re-roots that tree at the given subtree."""
    cs = ls.cut_sequent
    nc = len(cs.cuts)
    cut_keep = [i for i in range(nc) if ("star", i) in comp
                or ("v", i, 0, "") in comp]
    concl_keep = [j for j in range(len(cs.conclusions))
                  if ("v", nc + j, 0, "") in comp
                  or (split and split[0] == nc + j)]
    newnc = len(cut_keep)
    cutpos = {i: k for k, i in enumerate(cut_keep)}
    conclpos = {j: k for k, j in enumerate(concl_keep)}
    cuts = tuple(cs.cuts[i] for i in cut_keep)
    concls = []
    for j in concl_keep:
        f = cs.conclusions[j]
        if split and split[0] == nc + j:
            f = subformula_at(f, split[1])
        concls.append(f)

    def fn(addr: LeafAddr) -> LeafAddr:
        if addr.tree < nc:
            return LeafAddr(cutpos[addr.tree], addr.side, addr.path)
        j = addr.tree - nc
        path = addr.path
        if split and split[0] == addr.tree:
            path = path[len(split[1]):]
        return LeafAddr(newnc + conclpos[j], 0, path)

    keep_trees = set(cut_keep) | {nc + j for j in concl_keep}
    new = []
    for lam in ls.linkings:
        lam2 = frozenset(link for link in lam
                         if all(a.tree in keep_trees for a in link))
        new.append(lam2)
    return make_net(cuts, concls, _remap(new, fn)), cut_keep, concl_keep


def sequentialize(ls: LinkingSet) -> ProofTree:
    check = is_proof_net(ls)
    if not check.ok:
        raise NotAProofNet(f"{check.violation} violated")
    return _seq(ls)


def _seq(ls: LinkingSet) -> ProofTree:
    cs = ls.cut_sequent
    nc = len(cs.cuts)
    forms = list(cs.conclusions)
    if nc == 0 and all(isinstance(f, (PosAtom, NegAtom)) for f in forms):
        # P2 forces a single two-atom link here
        pos = next(f for f in forms if isinstance(f, PosAtom))
        return align_to(ax_(pos), forms)
    terminals = find_sequentializing(ls)
    if not terminals:
        raise NoSequentializingVertex(
            "no sequentializing vertex on a checked proof-net")

    def universal(i: int) -> bool:
        return all(any(a.tree == i for a in _endpoints(lam))
                   for lam in ls.linkings)

    # a cut touched by every linking came from a cut rule below every
    # additive split; undoing it first keeps &-splits from sharing pairs
    rank = {Par: 1, Plus: 2, With: 3, Tensor: 4}

    def key(v):
        if v[0] == "star":
            return 0 if universal(v[1]) else 5
        return rank[type(cs.conclusions[v[1] - nc])]

    terminals.sort(key=key)
    v = terminals[0]
    if v[0] == "star":
        return _seq_split(ls, v, None)
    t = v[1] - nc
    f = cs.conclusions[t]
    if isinstance(f, Par):
        def fn(addr: LeafAddr) -> LeafAddr:
            if addr.tree == v[1]:
                if addr.path[0] == "L":
                    return LeafAddr(addr.tree, 0, addr.path[1:])
                return LeafAddr(addr.tree + 1, 0, addr.path[1:])
            if addr.tree > v[1]:
                return LeafAddr(addr.tree + 1, 0, addr.path)
            return addr
        sub = make_net(cs.cuts,
                       forms[:t] + [f.left, f.right] + forms[t + 1:],
                       _remap(ls.linkings, fn))
        return par_(_seq(sub), t, t + 1)
    if isinstance(f, Plus):
        pts = {a.path for lam in ls.linkings
               for a in _endpoints(lam) if a.tree == v[1]}
        step = "L" if any(p.startswith("L") for p in pts) else "R"

        def fn(addr: LeafAddr) -> LeafAddr:
            if addr.tree == v[1]:
                return LeafAddr(addr.tree, 0, addr.path[1:])
            return addr
        sub = make_net(cs.cuts,
                       forms[:t] + [f.left if step == "L" else f.right]
                       + forms[t + 1:],
                       _remap(ls.linkings, fn))
        if step == "L":
            return plus1_(_seq(sub), t, f.right)
        return plus2_(_seq(sub), t, f.left)
    if isinstance(f, With):
        sides = []
        for step in ("L", "R"):
            side_lks = [lam for lam in ls.linkings
                        if any(a.tree == v[1]
                               and a.path.startswith(step)
                               for a in _endpoints(lam))]

            def fn(addr: LeafAddr) -> LeafAddr:
                if addr.tree == v[1]:
                    return LeafAddr(addr.tree, 0, addr.path[1:])
                return addr
            kid = f.left if step == "L" else f.right
            sub = _gc(cs.cuts, tuple(forms[:t] + [kid] + forms[t + 1:]),
                      _remap(side_lks, fn))
            sides.append(_seq(sub))
        return with_(sides[0], t, sides[1], t)
    # terminal tensor: split into the two components
    return _seq_split(ls, v, f)


def _seq_split(ls: LinkingSet, v, f: Optional[Formula]) -> ProofTree:
    cs = ls.cut_sequent
    g = build_graph(ls, ls.linkings)
    comps = _components(g, v)
    if len(comps) != 2:
        raise NoSequentializingVertex("split vertex is not sequentializing")
    if v[0] == "star":
        i = v[1]
        anchors = (("v", i, 0, ""), ("v", i, 1, ""))
        splits = ((v[1], ""), (v[1], ""))
    else:
        anchors = (("v", v[1], v[2], "L"), ("v", v[1], v[2], "R"))
        splits = ((v[1], "L"), (v[1], "R"))
    if anchors[0] in comps[1]:
        comps = [comps[1], comps[0]]
    subs = []
    for comp, anchor, split in zip(comps, anchors, splits):
        if v[0] == "star":
            # the pair side becomes an extra conclusion of its component
            i, side = v[1], 0 if anchor[2] == 0 else 1
            nc = len(cs.cuts)
            sf = cs.cuts[i][side]
            cut_keep = [k for k in range(nc) if k != i
                        and (("star", k) in comp or ("v", k, 0, "") in comp)]
            concl_keep = [j for j in range(len(cs.conclusions))
                          if ("v", nc + j, 0, "") in comp]
            cutpos = {k: x for x, k in enumerate(cut_keep)}
            conclpos = {j: x for x, j in enumerate(concl_keep)}
            newnc = len(cut_keep)

            def fn(addr: LeafAddr) -> LeafAddr:
                if addr.tree == i:
                    return LeafAddr(newnc + len(concl_keep), 0, addr.path)
                if addr.tree < nc:
                    return LeafAddr(cutpos[addr.tree], addr.side, addr.path)
                return LeafAddr(newnc + conclpos[addr.tree - nc], 0,
                                addr.path)

            keep_trees = set(cut_keep) | {nc + j for j in concl_keep}
            lks = [frozenset(link for link in lam
                             if all(a.tree in keep_trees
                                    or (a.tree == i and a.side == side)
                                    for a in link))
                   for lam in ls.linkings]
            sub = make_net(tuple(cs.cuts[k] for k in cut_keep),
                           tuple(cs.conclusions[j] for j in concl_keep)
                           + (sf,),
                           _remap(lks, fn))
            subs.append(_seq(sub))
        else:
            sub, _, _ = _restrict_component(ls, comp, split)
            subs.append(_seq(sub))
    if v[0] == "star":
        p1, p2 = subs
        q = cut_(p1, len(p1.conclusion) - 1, p2, len(p2.conclusion) - 1)
        return align_to(q, cs.conclusions)
    p1, p2 = subs
    i1 = next(t for t, (_, h) in enumerate(p1.conclusion) if h == f.left)
    i2 = next(t for t, (_, h) in enumerate(p2.conclusion) if h == f.right)
    q = tensor_(p1, i1, p2, i2)
    return align_to(q, cs.conclusions)


# ---------------------------------------------------------------------------
# serialization

def _addr_json(a: LeafAddr) -> dict:
    return {"tree": a.tree, "side": a.side, "path": a.path}


def net_to_json(ls: LinkingSet) -> dict:
    cs = ls.cut_sequent
    return {
        "cutPairs": [[fmt(a), fmt(b)] for a, b in cs.cuts],
        "conclusions": [fmt(c) for c in cs.conclusions],
        "linkings": [
            [sorted((_addr_json(x) for x in link),
                    key=lambda d: (d["tree"], d["side"], d["path"]))
             for link in sorted(lam, key=lambda l: sorted(
                 (a.tree, a.side, a.path) for a in l))]
            for lam in ls.linkings],
    }


def net_from_json(d: dict) -> LinkingSet:
    cuts = tuple((parse(a), parse(b)) for a, b in d["cutPairs"])
    concls = tuple(parse(c) for c in d["conclusions"])
    linkings = [
        [frozenset(LeafAddr(x["tree"], x["side"], x["path"]) for x in link)
         for link in lam]
        for lam in d["linkings"]]
    return make_net(cuts, concls, linkings)


def net_to_dot(ls: LinkingSet) -> str:
    cs = ls.cut_sequent
    palette = ["blue", "red", "darkgreen", "orange", "purple", "brown",
               "cyan4", "magenta"]
    lines = ["graph net {", "  rankdir=TB;"]

    def vid(t, s, p):
        return f"v_{t}_{s}_{p or 'root'}"

    for t, s, f in cs.trees():
        for p, g in paths_of(f):
            label = fmt(g) if not isinstance(g, _BINARY) else \
                {"Tensor": "*", "Par": "|", "With": "&", "Plus": "+"}[
                    type(g).__name__]
            lines.append(f'  {vid(t, s, p)} [label="{label}"];')
            if p:
                lines.append(f"  {vid(t, s, p[:-1])} -- {vid(t, s, p)};")
    for i in range(len(cs.cuts)):
        lines.append(f'  star_{i} [label="*" shape=diamond];')
        lines.append(f"  star_{i} -- {vid(i, 0, '')};")
        lines.append(f"  star_{i} -- {vid(i, 1, '')};")
    for n, lam in enumerate(ls.linkings):
        color = palette[n % len(palette)]
        for link in lam:
            a, b = sorted(link)
            lines.append(
                f"  {vid(a.tree, a.side, a.path)} -- "
                f"{vid(b.tree, b.side, b.path)} "
                f'[color={color} constraint=false];')
    if len(ls.linkings) >= 2:
        g = build_graph(ls, ls.linkings)
        for _, u, v, kind, _ in g.edges:
            if kind == "jump":
                lines.append(
                    f"  {vid(u[1], u[2], u[3])} -- {vid(v[1], v[2], v[3])} "
                    "[style=dashed constraint=false];")
    lines.append("}")
    return "\n".join(lines)
