"""Sequent-calculus proof trees for MALL.

A sequent is an ordered list of *occurrences* ``(id, formula)``.  Occurrence
ids thread through rule applications: a context occurrence keeps its id from
premise to conclusion, a rule's principal occurrence gets a fresh id, and the
occurrences consumed by a rule (its *actives*) are listed per premise.  With
this bookkeeping exchange is just reordering a conclusion tuple, and every
transformation downstream (cut elimination, rule commutations,
desequentialization) can track occurrences without positional arithmetic.

Rules: ax ⊢A⊥,A · cut · tensor · par · one · bot · with (shared context) ·
plus1/plus2 · top.  The with-rule's two premises share their context
occurrences (same ids, same formulas).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterator, Optional

from .formulas import (
    Formula, PosAtom, NegAtom, Tensor, Par, With, Plus, One, Bot, Top, Zero,
    ONE, BOT, TOP, ZERO, dual, fmt, parse,
)

__all__ = [
    "ProofTree", "ProofError", "ax_", "one_", "top_", "par_", "tensor_",
    "cut_", "with_", "plus1_", "plus2_", "bot_", "exchange", "align_to",
    "check_proof", "assert_valid", "is_cut_free", "get_node", "replace_node",
    "node_paths", "eta_step", "eta_normalize", "id_proof", "tidy",
    "canonical", "proof_eq", "slices", "slice_cut_step", "SliceFailure",
    "NoCut", "to_json", "from_json", "conclusion_formulas", "premise_maps",
]

Occ = tuple[int, Formula]


class ProofError(ValueError):
    pass


@dataclass(frozen=True)
class ProofTree:
    conclusion: tuple[Occ, ...]
    rule: str
    principal: tuple[int, ...]                 # occurrence ids in conclusion
    actives: tuple[tuple[int, ...], ...]       # per premise: ids consumed there
    cut_formula: Optional[Formula]
    premises: tuple["ProofTree", ...]

    # -- occurrence helpers -------------------------------------------------
    def ids(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.conclusion)

    def formula(self, occ_id: int) -> Formula:
        for i, f in self.conclusion:
            if i == occ_id:
                return f
        raise KeyError(occ_id)

    def pos(self, occ_id: int) -> int:
        for k, (i, _) in enumerate(self.conclusion):
            if i == occ_id:
                return k
        raise KeyError(occ_id)

    def __repr__(self) -> str:
        seq = ", ".join(fmt(f) for _, f in self.conclusion)
        return f"<{self.rule}: ⊢ {seq}>"


def conclusion_formulas(p: ProofTree) -> tuple[Formula, ...]:
    return tuple(f for _, f in p.conclusion)


def _max_id(p: ProofTree) -> int:
    out = max((i for i, _ in p.conclusion), default=-1)
    for q in p.premises:
        out = max(out, _max_id(q))
    return out


def _all_ids(p: ProofTree) -> set[int]:
    out = {i for i, _ in p.conclusion}
    for q in p.premises:
        out |= _all_ids(q)
    return out


def _rename(p: ProofTree, m: dict[int, int]) -> ProofTree:
    """Apply an id renaming throughout the tree (identity where unmapped)."""
    return ProofTree(
        conclusion=tuple((m.get(i, i), f) for i, f in p.conclusion),
        rule=p.rule,
        principal=tuple(m.get(i, i) for i in p.principal),
        actives=tuple(tuple(m.get(i, i) for i in a) for a in p.actives),
        cut_formula=p.cut_formula,
        premises=tuple(_rename(q, m) for q in p.premises),
    )


def _disjoin(p: ProofTree, taken: set[int]) -> ProofTree:
    """Rename ids of ``p`` away from ``taken``."""
    mine = _all_ids(p)
    clash = mine & taken
    if not clash:
        return p
    base = max(mine | taken) + 1
    m = {i: base + k for k, i in enumerate(sorted(clash))}
    return _rename(p, m)


# ---------------------------------------------------------------------------
# builders (arguments address conclusion *positions*)

def ax_(a: Formula) -> ProofTree:
    return ProofTree(((0, dual(a)), (1, a)), "ax", (0, 1), (), None, ())


def one_() -> ProofTree:
    return ProofTree(((0, ONE),), "one", (0,), (), None, ())


def top_(seq, principal_index: int) -> ProofTree:
    seq = tuple(seq)
    if not isinstance(seq[principal_index], Top):
        raise ProofError("top rule: principal must be ⊤")
    concl = tuple((k, f) for k, f in enumerate(seq))
    return ProofTree(concl, "top", (principal_index,), (), None, ())


def par_(p: ProofTree, i: int, j: int) -> ProofTree:
    """⅋ with left component at position ``i`` and right at ``j``."""
    (ai, fa), (aj, fb) = p.conclusion[i], p.conclusion[j]
    k = _max_id(p) + 1
    concl = []
    for t, occ in enumerate(p.conclusion):
        if t == i:
            concl.append((k, Par(fa, fb)))
        elif t != j:
            concl.append(occ)
    return ProofTree(tuple(concl), "par", (k,), ((ai, aj),), None, (p,))


def tensor_(p1: ProofTree, i1: int, p2: ProofTree, i2: int) -> ProofTree:
    p2 = _disjoin(p2, _all_ids(p1))
    (a1, fa), (a2, fb) = p1.conclusion[i1], p2.conclusion[i2]
    k = max(_max_id(p1), _max_id(p2)) + 1
    ctx1 = tuple(o for t, o in enumerate(p1.conclusion) if t != i1)
    ctx2 = tuple(o for t, o in enumerate(p2.conclusion) if t != i2)
    concl = ctx1 + ctx2 + ((k, Tensor(fa, fb)),)
    return ProofTree(concl, "tensor", (k,), ((a1,), (a2,)), None, (p1, p2))


def cut_(p1: ProofTree, i1: int, p2: ProofTree, i2: int) -> ProofTree:
    p2 = _disjoin(p2, _all_ids(p1))
    (a1, fa), (a2, fb) = p1.conclusion[i1], p2.conclusion[i2]
    if dual(fa) != fb:
        raise ProofError(f"cut: {fmt(fb)} is not the dual of {fmt(fa)}")
    ctx1 = tuple(o for t, o in enumerate(p1.conclusion) if t != i1)
    ctx2 = tuple(o for t, o in enumerate(p2.conclusion) if t != i2)
    return ProofTree(ctx1 + ctx2, "cut", (), ((a1,), (a2,)), fa, (p1, p2))


def with_(p1: ProofTree, i1: int, p2: ProofTree, i2: int) -> ProofTree:
    """& rule; the premises' contexts must agree formula-wise in order."""
    (a1, fa), (a2, fb) = p1.conclusion[i1], p2.conclusion[i2]
    ctx1 = [o for t, o in enumerate(p1.conclusion) if t != i1]
    ctx2 = [o for t, o in enumerate(p2.conclusion) if t != i2]
    if [f for _, f in ctx1] != [f for _, f in ctx2]:
        raise ProofError("with rule: contexts differ")
    # share context ids: rename p2's context occurrences onto p1's and
    # move every other p2 id out of the way
    base = max(_max_id(p1), _max_id(p2)) + 1
    m = {i2_: i1_ for (i1_, _), (i2_, _) in zip(ctx1, ctx2)}
    for k, i in enumerate(sorted(_all_ids(p2) - set(m))):
        m[i] = base + k
    p2 = _rename(p2, m)
    a2 = m.get(a2, a2)
    k = max(_max_id(p1), _max_id(p2)) + 1
    concl = []
    for t, occ in enumerate(p1.conclusion):
        concl.append((k, With(fa, fb)) if t == i1 else occ)
    return ProofTree(tuple(concl), "with", (k,), ((a1,), (a2,)), None, (p1, p2))


def _plus(p: ProofTree, i: int, other: Formula, which: int) -> ProofTree:
    (a, fa) = p.conclusion[i]
    k = _max_id(p) + 1
    princ = Plus(fa, other) if which == 1 else Plus(other, fa)
    concl = tuple((k, princ) if t == i else occ
                  for t, occ in enumerate(p.conclusion))
    return ProofTree(concl, f"plus{which}", (k,), ((a,),), None, (p,))


def plus1_(p: ProofTree, i: int, right: Formula) -> ProofTree:
    return _plus(p, i, right, 1)


def plus2_(p: ProofTree, i: int, left: Formula) -> ProofTree:
    return _plus(p, i, left, 2)


def bot_(p: ProofTree, at: Optional[int] = None) -> ProofTree:
    k = _max_id(p) + 1
    at = len(p.conclusion) if at is None else at
    concl = list(p.conclusion)
    concl.insert(at, (k, BOT))
    return ProofTree(tuple(concl), "bot", (k,), ((),), None, (p,))


def exchange(p: ProofTree, order) -> ProofTree:
    """Reorder the conclusion; ``order`` lists current positions."""
    if sorted(order) != list(range(len(p.conclusion))):
        raise ProofError(f"bad permutation {order!r}")
    return replace(p, conclusion=tuple(p.conclusion[t] for t in order))


def align_to(p: ProofTree, formulas) -> ProofTree:
    """Exchange so the conclusion formulas read as ``formulas``."""
    want = list(formulas)
    have = [f for _, f in p.conclusion]
    used: list[int] = []
    for w in want:
        for t, h in enumerate(have):
            if t not in used and h == w:
                used.append(t)
                break
        else:
            raise ProofError(f"no occurrence of {fmt(w)} left to align")
    return exchange(p, used)


# ---------------------------------------------------------------------------
# validity

_UNARY = {"par", "plus1", "plus2", "bot"}


def check_proof(p: ProofTree) -> list[str]:
    """Validate every node against its rule schema; [] means ok."""
    errs: list[str] = []
    _check(p, (), errs)
    return errs


def assert_valid(p: ProofTree) -> ProofTree:
    errs = check_proof(p)
    if errs:
        raise ProofError("; ".join(errs))
    return p


def _check(p: ProofTree, path, errs: list[str]) -> None:
    here = f"node {'/'.join(map(str, path)) or 'root'} ({p.rule})"
    ids = [i for i, _ in p.conclusion]
    if len(set(ids)) != len(ids):
        errs.append(f"{here}: duplicate occurrence ids")
        return
    byid = dict(p.conclusion)

    def principal_formula():
        return byid.get(p.principal[0]) if p.principal else None

    n_prem = {"ax": 0, "one": 0, "top": 0, "cut": 2, "tensor": 2, "with": 2,
              "par": 1, "plus1": 1, "plus2": 1, "bot": 1}.get(p.rule)
    if n_prem is None:
        errs.append(f"{here}: unknown rule")
        return
    if len(p.premises) != n_prem or len(p.actives) != n_prem:
        errs.append(f"{here}: expected {n_prem} premises")
        return

    if p.rule == "ax":
        if len(p.conclusion) != 2 or byid.get(p.principal[0]) is None \
                or len(p.principal) != 2:
            errs.append(f"{here}: ax concludes exactly ⊢A⊥,A")
            return
        f0, f1 = p.conclusion[0][1], p.conclusion[1][1]
        if dual(f0) != f1:
            errs.append(f"{here}: ax formulas are not dual")
        if set(p.principal) != set(ids):
            errs.append(f"{here}: ax principal must cover both occurrences")
        return
    if p.rule == "one":
        if len(p.conclusion) != 1 or not isinstance(p.conclusion[0][1], One):
            errs.append(f"{here}: one rule concludes exactly ⊢1")
        return
    if p.rule == "top":
        f = principal_formula()
        if not isinstance(f, Top):
            errs.append(f"{here}: top principal must be ⊤")
        return

    # rules with premises --------------------------------------------------
    for q in p.premises:
        qids = [i for i, _ in q.conclusion]
        if len(set(qids)) != len(qids):
            errs.append(f"{here}: premise has duplicate ids")
            return

    def active_formulas(which: int):
        q = p.premises[which]
        d = dict(q.conclusion)
        try:
            return [d[a] for a in p.actives[which]]
        except KeyError:
            errs.append(f"{here}: active id missing from premise {which}")
            return None

    def context(which: int):
        q = p.premises[which]
        act = set(p.actives[which])
        return [(i, f) for i, f in q.conclusion if i not in act]

    if p.rule == "cut":
        fa = active_formulas(0)
        fb = active_formulas(1)
        if fa is None or fb is None:
            return
        if len(fa) != 1 or len(fb) != 1 or p.cut_formula != fa[0] \
                or dual(fa[0]) != fb[0]:
            errs.append(f"{here}: cut formulas are not dual to cut_formula")
        expected = context(0) + context(1)
        if sorted(expected) != sorted(p.conclusion):
            errs.append(f"{here}: conclusion ≠ union of premise contexts")
    elif p.rule == "tensor":
        fa, fb = active_formulas(0), active_formulas(1)
        if fa is None or fb is None:
            return
        pf = principal_formula()
        if not isinstance(pf, Tensor) or [pf.left, pf.right] != fa + fb:
            errs.append(f"{here}: principal is not A⊗B of the actives")
        expected = context(0) + context(1) + [(p.principal[0], pf)]
        if sorted(expected, key=str) != sorted(p.conclusion, key=str):
            errs.append(f"{here}: conclusion mismatch")
    elif p.rule == "with":
        fa, fb = active_formulas(0), active_formulas(1)
        if fa is None or fb is None:
            return
        pf = principal_formula()
        if not isinstance(pf, With) or [pf.left, pf.right] != fa + fb:
            errs.append(f"{here}: principal is not A&B of the actives")
        if sorted(context(0)) != sorted(context(1)):
            errs.append(f"{here}: with premises must share their context")
        expected = context(0) + [(p.principal[0], pf)]
        if sorted(expected, key=str) != sorted(p.conclusion, key=str):
            errs.append(f"{here}: conclusion mismatch")
    elif p.rule == "par":
        fa = active_formulas(0)
        if fa is None:
            return
        pf = principal_formula()
        if len(fa) != 2 or not isinstance(pf, Par) \
                or [pf.left, pf.right] != fa:
            errs.append(f"{here}: principal is not A⅋B of the actives")
        expected = context(0) + [(p.principal[0], pf)]
        if sorted(expected, key=str) != sorted(p.conclusion, key=str):
            errs.append(f"{here}: conclusion mismatch")
    elif p.rule in ("plus1", "plus2"):
        fa = active_formulas(0)
        if fa is None:
            return
        pf = principal_formula()
        keep = pf.left if p.rule == "plus1" else pf.right
        if not isinstance(pf, Plus) or fa != [keep]:
            errs.append(f"{here}: {p.rule} exposes the wrong disjunct")
        expected = context(0) + [(p.principal[0], pf)]
        if sorted(expected, key=str) != sorted(p.conclusion, key=str):
            errs.append(f"{here}: conclusion mismatch")
    elif p.rule == "bot":
        pf = principal_formula()
        if not isinstance(pf, Bot):
            errs.append(f"{here}: bot principal must be ⊥")
        expected = context(0) + [(p.principal[0], pf)]
        if sorted(expected, key=str) != sorted(p.conclusion, key=str):
            errs.append(f"{here}: conclusion mismatch")

    for t, q in enumerate(p.premises):
        _check(q, path + (t,), errs)


def is_cut_free(p: ProofTree) -> bool:
    return p.rule != "cut" and all(is_cut_free(q) for q in p.premises)


# ---------------------------------------------------------------------------
# tree addressing

def get_node(p: ProofTree, path) -> ProofTree:
    for t in path:
        p = p.premises[t]
    return p


def replace_node(p: ProofTree, path, new: ProofTree) -> ProofTree:
    if not path:
        return new
    t, rest = path[0], path[1:]
    prem = list(p.premises)
    prem[t] = replace_node(prem[t], rest, new)
    return replace(p, premises=tuple(prem))


def node_paths(p: ProofTree, prefix=()) -> Iterator[tuple[tuple, ProofTree]]:
    yield prefix, p
    for t, q in enumerate(p.premises):
        yield from node_paths(q, prefix + (t,))


# ---------------------------------------------------------------------------
# axiom expansion

def _expand_ax(p: ProofTree) -> Optional[ProofTree]:
    """One axiom-expansion step at an ax node, preserving conclusion ids."""
    if p.rule != "ax":
        return None
    (g, fg), (h, fh) = p.conclusion
    # orient on the positive connective / unit
    if isinstance(fh, (Par, With, Bot, Top)):
        (g, fg), (h, fh) = (h, fh), (g, fg)
    base = max(g, h) + 1
    if isinstance(fh, Tensor):
        a, b = fh.left, fh.right
        t = tensor_(_rename(ax_(a), {0: base, 1: base + 1}),
                    1,
                    _rename(ax_(b), {0: base + 2, 1: base + 3}),
                    1)
        t = _rename(t, {t.principal[0]: h})
        out = par_(t, t.pos(base + 2), t.pos(base))   # B⊥ ⅋ A⊥
        out = _rename(out, {out.principal[0]: g})
    elif isinstance(fh, Plus):
        a, b = fh.left, fh.right
        q1 = plus2_(_rename(ax_(b), {0: base, 1: base + 1}), 1, a)
        q1 = _rename(q1, {q1.principal[0]: h})
        q2 = plus1_(_rename(ax_(a), {0: base + 2, 1: base + 3}), 1, b)
        q2 = _rename(q2, {q2.principal[0]: h})
        out = with_(q1, 0, q2, 0)                      # B⊥ & A⊥
        out = _rename(out, {out.principal[0]: g})
    elif isinstance(fh, One):
        out = bot_(_rename(one_(), {0: h}), at=0)
        out = _rename(out, {out.principal[0]: g})
    elif isinstance(fh, Zero):
        return ProofTree(p.conclusion, "top",
                         (g if isinstance(fg, Top) else h,), (), None, ())
    else:
        return None
    return align_to(out, [f for _, f in p.conclusion])


def eta_step(p: ProofTree) -> list[tuple[tuple, ProofTree]]:
    """All single axiom-expansion redexes as (path, expanded node)."""
    out = []
    for path, node in node_paths(p):
        exp = _expand_ax(node)
        if exp is not None:
            out.append((path, exp))
    return out


def eta_normalize(p: ProofTree, rng=None) -> ProofTree:
    """Expand axioms to atomic form; ``rng`` (if given) randomizes the order."""
    while True:
        redexes = eta_step(p)
        if not redexes:
            return p
        path, exp = rng.choice(redexes) if rng is not None else redexes[0]
        p = replace_node(p, path, exp)


def id_proof(a: Formula) -> ProofTree:
    """The η-normal proof of ⊢ a⊥, a (atomic axioms)."""
    return eta_normalize(ax_(a))


# ---------------------------------------------------------------------------
# structural equality (modulo exchange above every rule)

def tidy(p: ProofTree) -> ProofTree:
    """Normalize every sequent's occurrence order, bottom-up.

    Leaf rules sort by printed formula; other conclusions list premise
    contexts in premise order followed by the principal occurrence.  Two
    proofs equal modulo internal exchange get identical tidied shapes
    (the root conclusion order is normalized too).
    """
    if not p.premises:
        order = sorted(range(len(p.conclusion)),
                       key=lambda t: fmt(p.conclusion[t][1]))
        return exchange(p, order)
    prems = tuple(tidy(q) for q in p.premises)
    p = replace(p, premises=prems)
    byid = dict(p.conclusion)
    seen: list[int] = []
    for t, q in enumerate(prems):
        act = set(p.actives[t])
        for i, _ in q.conclusion:
            if i not in act and i not in seen:
                seen.append(i)
    seen.extend(i for i in p.principal if i in byid)
    concl = tuple((i, byid[i]) for i in seen)
    assert len(concl) == len(p.conclusion)
    return replace(p, conclusion=concl)


def canonical(p: ProofTree):
    """Hashable positional shape of a proof (ids erased)."""
    maps = premise_maps(p)
    return (
        p.rule,
        tuple(fmt(f) for _, f in p.conclusion),
        tuple(sorted(p.pos(i) for i in p.principal if any(
            i == j for j, _ in p.conclusion))),
        fmt(p.cut_formula) if p.cut_formula is not None else None,
        maps,
        tuple(canonical(q) for q in p.premises),
    )


def premise_maps(p: ProofTree) -> tuple:
    """Per premise: tuple over premise positions of (parent position | -1 for
    cut actives | parent principal position for other actives), plus the
    active positions in consumption order."""
    out = []
    parent = {i: t for t, (i, _) in enumerate(p.conclusion)}
    for t, q in enumerate(p.premises):
        act = p.actives[t]
        if p.rule == "cut":
            target = -1
        else:
            target = p.pos(p.principal[0])
        m = tuple(parent.get(i, target) if i not in act else target
                  for i, _ in q.conclusion)
        act_pos = tuple(q.pos(a) for a in act)
        out.append((m, act_pos))
    return tuple(out)


def proof_eq(p: ProofTree, q: ProofTree) -> bool:
    """Equality modulo exchange at every sequent."""
    return canonical(tidy(p)) == canonical(tidy(q))


# ---------------------------------------------------------------------------
# slices

class SliceFailure:
    """Result of a slice cut step hitting dual additive choices &ᵢ/⊕ᵢ."""

    def __repr__(self):
        return "SliceFailure"

    def __eq__(self, other):
        return isinstance(other, SliceFailure)

    def __hash__(self):
        return hash("SliceFailure")


class NoCut(ValueError):
    pass


def slices(p: ProofTree) -> list[ProofTree]:
    """All slices: each with-rule keeps one premise (rule with1/with2)."""
    if p.rule == "with":
        out = []
        for which, (q, a) in enumerate(zip(p.premises, p.actives), start=1):
            for s in slices(q):
                out.append(ProofTree(p.conclusion, f"with{which}",
                                     p.principal, (a,), None, (s,)))
        return out
    if not p.premises:
        return [p]
    parts = [slices(q) for q in p.premises]
    out = []

    def build(acc, rest):
        if not rest:
            out.append(replace(p, premises=tuple(acc)))
            return
        for s in rest[0]:
            build(acc + [s], rest[1:])

    build([], parts)
    return out


def slice_cut_step(s: ProofTree):
    """One cut-elimination step on a slice; SliceFailure on an &ᵢ/⊕ᵢ clash."""
    for path, node in node_paths(s):
        if node.rule != "cut":
            continue
        p1, p2 = node.premises
        a1, a2 = node.actives[0][0], node.actives[1][0]
        r1 = p1.rule if p1.principal and a1 in p1.principal else None
        r2 = p2.rule if p2.principal and a2 in p2.principal else None
        red = _slice_key(node, p1, a1, r1, p2, a2, r2)
        if red is None:
            red = _slice_key(node, p2, a2, r2, p1, a1, r1)
        if red is not None:
            if isinstance(red, SliceFailure):
                return red
            return replace_node(s, path, red)
    raise NoCut("no reducible cut in slice")


def _slice_key(node, p1, a1, r1, p2, a2, r2):
    """Key cases on slices; p1 is the side whose rule ``r1`` we pattern on."""
    if r1 == "ax":
        other = next(i for i, _ in p1.conclusion if i != a1)
        return _rename(p2, {a2: other})
    if r1 in ("with1", "with2") and r2 in ("plus1", "plus2"):
        # cut formula A1&A2 against A2⊥⊕A1⊥: &i clashes with ⊕i
        if r1[-1] == r2[-1]:
            return SliceFailure()
        q1, q2 = p1.premises[0], p2.premises[0]
        return ProofTree(node.conclusion, "cut", (),
                         ((p1.actives[0][0],), (p2.actives[0][0],)),
                         q1.formula(p1.actives[0][0]), (q1, q2))
    if r1 == "par" and r2 == "tensor":
        q = p1.premises[0]
        bq, aq = p1.actives[0][0], p1.actives[0][1]
        t1, t2 = p2.premises
        at, bt = p2.actives[0][0], p2.actives[1][0]
        # cut formula B⊥⅋A⊥ against A⊗B: cut A then cut B
        inner = ProofTree(
            tuple(o for o in t2.conclusion if o[0] != bt)
            + tuple(o for o in q.conclusion if o[0] != bq),
            "cut", (), ((bt,), (bq,)), t2.formula(bt), (t2, q))
        return ProofTree(node.conclusion, "cut", (),
                         ((at,), (aq,)), t1.formula(at), (t1, inner))
    if r1 == "bot" and r2 == "one":
        return p1.premises[0]
    return None


# ---------------------------------------------------------------------------
# JSON interchange

def to_json(p: ProofTree) -> dict:
    maps = premise_maps(p)
    return {
        "conclusion": [fmt(f) for _, f in p.conclusion],
        "rule": p.rule,
        "principal": [p.pos(i) for i in p.principal
                      if any(i == j for j, _ in p.conclusion)]
                     if p.rule != "cut" else [],
        "cutFormula": fmt(p.cut_formula) if p.cut_formula is not None else None,
        "premiseMaps": [list(m) for m, _ in maps],
        "actives": [list(a) for _, a in maps],
        "premises": [to_json(q) for q in p.premises],
    }


def from_json(d: dict) -> ProofTree:
    from itertools import count
    counter = count()

    def build(d: dict, concl: tuple[Occ, ...]) -> ProofTree:
        rule = d["rule"]
        actives: list[tuple[int, ...]] = []
        premises: list[ProofTree] = []
        for sub, pm, act in zip(d["premises"], d["premiseMaps"],
                                d["actives"], strict=True):
            sub_forms = [parse(s) for s in sub["conclusion"]]
            occs: list[Occ] = []
            for t, f in enumerate(sub_forms):
                if t in act:
                    occs.append((next(counter), f))
                else:
                    occs.append((concl[pm[t]][0], f))
            premises.append(build(sub, tuple(occs)))
            actives.append(tuple(occs[t][0] for t in act))
        if rule == "ax":
            principal = tuple(i for i, _ in concl)
        elif rule == "cut":
            principal = ()
        else:
            principal = tuple(concl[t][0] for t in d.get("principal", []))
        cf = d.get("cutFormula")
        return ProofTree(concl, rule, principal, tuple(actives),
                         parse(cf) if cf else None, tuple(premises))

    root = tuple((next(counter), parse(s)) for s in d["conclusion"])
    p = build(d, root)
    errs = check_proof(p)
    if errs:
        raise ProofError("invalid proof JSON: " + "; ".join(errs))
    return p
