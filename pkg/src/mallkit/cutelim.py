"""Cut elimination and rule commutations on sequent proofs.

β steps come in key cases (both cut actives principal) and commutative cases
(a rule above a cut slides below it).  β̄ is β without the cut-cut
commutation; it strictly decreases the density measure, which is how the
normalizer knows it terminates.  Rule commutations (≈c1) permute adjacent
non-cut rules with cut-free subproofs above; they preserve density.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Optional

from .formulas import (
    Formula, Tensor, Par, With, Plus, One, Bot, Top, Zero, TOP, ZERO,
    dual, fmt, mass, sequent_mass,
)
from .proofs import (
    ProofTree, ProofError, _rename, _all_ids, _max_id, get_node,
    replace_node, node_paths, is_cut_free, tidy, canonical,
    conclusion_formulas,
)

__all__ = [
    "BETA_KINDS", "BetaRedex", "CommRedex", "NotApplicable",
    "PatternPreconditionFailed", "enumerate_beta", "apply_beta",
    "normalize", "cut_mass", "density", "dm_greater",
    "enumerate_commutations", "apply_commutation", "eqc_search",
    "PatternReport", "detect_patterns", "compact_unit_patterns",
    "substitute_units_proof", "reduction_log_json",
]


class NotApplicable(ValueError):
    pass


class PatternPreconditionFailed(ValueError):
    pass


BETA_KINDS = (
    "KeyAx", "KeyParTensor", "KeyWithPlus1", "KeyWithPlus2", "KeyBotOne",
    "CommParCut", "CommTensorCut1", "CommTensorCut2", "CommWithCut",
    "CommPlus1Cut", "CommPlus2Cut", "CommBotCut", "CommTopCut", "CommCutCut",
)


@dataclass(frozen=True)
class BetaRedex:
    path: tuple          # path of the cut node
    kind: str
    side: int            # which cut premise the pattern is anchored on


def _cut_parts(node: ProofTree):
    p1, p2 = node.premises
    a1, a2 = node.actives[0][0], node.actives[1][0]
    return p1, a1, p2, a2


def enumerate_beta(p: ProofTree) -> list[BetaRedex]:
    out: list[BetaRedex] = []
    for path, node in node_paths(p):
        if node.rule != "cut":
            continue
        p1, a1, p2, a2 = _cut_parts(node)
        for side, (prem, act, other) in enumerate(
                [(p1, a1, p2), (p2, a2, p1)]):
            principal = act in prem.principal
            if prem.rule == "ax":
                out.append(BetaRedex(path, "KeyAx", side))
            elif principal and prem.rule == "tensor":
                # pairs with the dual par on the other side
                if other.rule == "par" and \
                        (p2 if side == 0 else p1).principal \
                        and (a2 if side == 0 else a1) in other.principal:
                    out.append(BetaRedex(path, "KeyParTensor", side))
            elif principal and prem.rule == "with":
                oact = a2 if side == 0 else a1
                if other.rule in ("plus1", "plus2") and oact in other.principal:
                    kind = "KeyWithPlus1" if other.rule == "plus1" \
                        else "KeyWithPlus2"
                    out.append(BetaRedex(path, kind, side))
            elif principal and prem.rule == "bot":
                if other.rule == "one":
                    out.append(BetaRedex(path, "KeyBotOne", side))
            elif not principal and prem.rule == "par":
                out.append(BetaRedex(path, "CommParCut", side))
            elif not principal and prem.rule == "tensor":
                which = 1 if any(i == act for i, _ in
                                 prem.premises[0].conclusion) else 2
                out.append(BetaRedex(path, f"CommTensorCut{which}", side))
            elif not principal and prem.rule == "with":
                out.append(BetaRedex(path, "CommWithCut", side))
            elif not principal and prem.rule in ("plus1", "plus2"):
                out.append(BetaRedex(path, f"CommPlus{prem.rule[-1]}Cut", side))
            elif not principal and prem.rule == "bot":
                out.append(BetaRedex(path, "CommBotCut", side))
            elif prem.rule == "top" and act != prem.principal[0]:
                out.append(BetaRedex(path, "CommTopCut", side))
            elif prem.rule == "cut":
                out.append(BetaRedex(path, "CommCutCut", side))
    return out


def _reduce_cut(node: ProofTree, kind: str, side: int) -> ProofTree:
    p1, a1, p2, a2 = _cut_parts(node)
    if side == 1:
        prem, act, other, oact = p2, a2, p1, a1
    else:
        prem, act, other, oact = p1, a1, p2, a2

    def mk_cut(q1, b1, q2, b2, concl=None):
        cf = q1.formula(b1)
        if concl is None:
            concl = tuple(o for o in q1.conclusion if o[0] != b1) + \
                tuple(o for o in q2.conclusion if o[0] != b2)
        return ProofTree(concl, "cut", (), ((b1,), (b2,)), cf, (q1, q2))

    if kind == "KeyAx":
        if prem.rule != "ax":
            raise NotApplicable(kind)
        keep = next(i for i, _ in prem.conclusion if i != act)
        if keep in _all_ids(other):
            other = _rename(other, {keep: _max_id(other) + 1 + keep})
        return _rename(other, {oact: keep})

    if kind == "KeyParTensor":
        pT, aT = (prem, act) if prem.rule == "tensor" else (other, oact)
        pP = other if prem.rule == "tensor" else prem
        if pT.rule != "tensor" or pP.rule != "par":
            raise NotApplicable(kind)
        t1, t2 = pT.premises
        at, bt = pT.actives[0][0], pT.actives[1][0]
        pl, pr = pP.actives[0]            # B⊥ then A⊥ for cut formula A⊗B
        q = pP.premises[0]
        inner = mk_cut(t2, bt, q, pl)
        return mk_cut(t1, at, inner, pr, concl=node.conclusion)

    if kind in ("KeyWithPlus1", "KeyWithPlus2"):
        pW = prem if prem.rule == "with" else other
        pP = other if prem.rule == "with" else prem
        if pW.rule != "with" or pP.rule not in ("plus1", "plus2"):
            raise NotApplicable(kind)
        w1, w2 = pW.premises
        # dual of A&B is B⊥⊕A⊥: ⊕₁ exposes B⊥ (pairs w2), ⊕₂ exposes A⊥
        w, aw = (w2, pW.actives[1][0]) if pP.rule == "plus1" \
            else (w1, pW.actives[0][0])
        q = pP.premises[0]
        aq = pP.actives[0][0]
        if pW is prem:
            return mk_cut(w, aw, q, aq, concl=node.conclusion)
        return mk_cut(q, aq, w, aw, concl=node.conclusion)

    if kind == "KeyBotOne":
        pB = prem if prem.rule == "bot" else other
        if pB.rule != "bot":
            raise NotApplicable(kind)
        return pB.premises[0]

    # commutative cases: slide rule `prem.rule` below the cut --------------
    if kind in ("CommParCut", "CommPlus1Cut", "CommPlus2Cut", "CommBotCut"):
        sub = prem.premises[0]
        inner = mk_cut(sub, act, other, oact) if side == 0 \
            else mk_cut(other, oact, sub, act)
        return ProofTree(node.conclusion, prem.rule, prem.principal,
                         prem.actives, None, (inner,))

    if kind in ("CommTensorCut1", "CommTensorCut2", "CommCutCut"):
        j = 0 if any(i == act for i, _ in prem.premises[0].conclusion) else 1
        sub = prem.premises[j]
        inner = mk_cut(sub, act, other, oact) if side == 0 \
            else mk_cut(other, oact, sub, act)
        prems = list(prem.premises)
        prems[j] = inner
        return ProofTree(node.conclusion, prem.rule, prem.principal,
                         prem.actives, prem.cut_formula, tuple(prems))

    if kind == "CommWithCut":
        w1, w2 = prem.premises
        inner1 = mk_cut(w1, act, other, oact) if side == 0 \
            else mk_cut(other, oact, w1, act)
        inner2 = mk_cut(w2, act, other, oact) if side == 0 \
            else mk_cut(other, oact, w2, act)
        return ProofTree(node.conclusion, "with", prem.principal,
                         prem.actives, None, (inner1, inner2))

    if kind == "CommTopCut":
        if prem.rule != "top" or act == prem.principal[0]:
            raise NotApplicable(kind)
        return ProofTree(node.conclusion, "top", prem.principal, (), None, ())

    raise NotApplicable(kind)


def apply_beta(p: ProofTree, path, kind: str, side: int = 0) -> ProofTree:
    node = get_node(p, path)
    if node.rule != "cut":
        raise NotApplicable(f"no cut at {path}")
    if BetaRedex(tuple(path), kind, side) not in enumerate_beta(p):
        raise NotApplicable(f"{kind} (side {side}) not enabled at {path}")
    return replace_node(p, path, _reduce_cut(node, kind, side))


# ---------------------------------------------------------------------------
# mass / density

def cut_mass(node: ProofTree) -> int:
    if node.rule != "cut":
        raise ValueError("not a cut")
    return mass(node.cut_formula) * sequent_mass(conclusion_formulas(node))


def density(p: ProofTree) -> tuple[int, ...]:
    """Multiset (sorted tuple) of per-cut densities: each cut's mass summed
    with the masses of all cuts below it (toward the root)."""
    out: list[int] = []

    def go(node: ProofTree, acc: int) -> None:
        if node.rule == "cut":
            acc += cut_mass(node)
            out.append(acc)
        for q in node.premises:
            go(q, acc)

    go(p, 0)
    return tuple(sorted(out))


def dm_greater(m1, m2) -> bool:
    """Dershowitz–Manna multiset order on multisets of naturals."""
    a, b = list(m1), list(m2)
    for x in list(a):
        if x in b:
            a.remove(x)
            b.remove(x)
    if not a:
        return False
    return all(any(x > y for x in a) for y in b)


# ---------------------------------------------------------------------------
# normalization

def normalize(p: ProofTree, strategy: str = "BetabarFirst") -> ProofTree:
    if strategy not in ("BetabarFirst", "PatternPreserving"):
        raise ValueError(f"unknown strategy {strategy!r}")
    while True:
        redexes = [r for r in enumerate_beta(p) if r.kind != "CommCutCut"]
        if strategy == "PatternPreserving":
            allowed = []
            for r in redexes:
                if r.kind != "CommTopCut":
                    allowed.append(r)
            deferred = [r for r in redexes if r.kind == "CommTopCut"
                        and _top_zero_cut(get_node(p, r.path))]
            redexes = allowed + deferred
            if not redexes and not is_cut_free(p):
                raise PatternPreconditionFailed(
                    "only pattern-breaking ⊤ steps remain")
        if not redexes:
            if not is_cut_free(p):
                raise NotApplicable("stuck proof: cuts remain with no redex")
            return p
        r = redexes[0]
        p = apply_beta(p, r.path, r.kind, r.side)


def _top_zero_cut(node: ProofTree) -> bool:
    want = sorted([fmt(TOP), fmt(ZERO)])
    return all(sorted(fmt(f) for f in conclusion_formulas(q)) == want
               for q in node.premises)


def reduction_log_json(p: ProofTree, strategy: str = "BetabarFirst") -> tuple[ProofTree, str]:
    """Normalize while emitting one JSON line per step."""
    lines = []
    while True:
        redexes = [r for r in enumerate_beta(p) if r.kind != "CommCutCut"]
        if not redexes:
            return p, "\n".join(lines)
        r = redexes[0]
        before = density(p)
        p = apply_beta(p, r.path, r.kind, r.side)
        lines.append(json.dumps({
            "position": list(r.path), "kind": r.kind,
            "densityBefore": list(before), "densityAfter": list(density(p)),
        }))


# ---------------------------------------------------------------------------
# rule commutations (≈c1)

_COMMUTABLE = ("par", "tensor", "with", "plus1", "plus2", "bot")


@dataclass(frozen=True)
class CommRedex:
    path: tuple                      # path of the lower node
    kind: str                        # "{above}_{below}" rule pair
    direction: str                   # promote | expand | swap
    detail: tuple = ()               # premise index / branch / occurrence id


def _mirror_ok(x: ProofTree) -> bool:
    """For a with-node: do both premises start with the same rule instance?"""
    y1, y2 = x.premises
    if y1.rule != y2.rule or not y1.principal or not y2.principal:
        return False
    if y1.principal[0] != y2.principal[0]:
        return False
    return True


def enumerate_commutations(p: ProofTree) -> list[CommRedex]:
    out: list[CommRedex] = []
    for path, x in node_paths(p):
        if not is_cut_free(x):
            continue
        if x.rule == "top":
            byid = dict(x.conclusion)
            k = x.principal[0]
            for c, f in x.conclusion:
                if c == k:
                    continue
                if isinstance(f, Top):
                    out.append(CommRedex(path, "top_top", "swap", (c,)))
                elif isinstance(f, Par):
                    out.append(CommRedex(path, "top_par", "expand", (c,)))
                elif isinstance(f, Plus):
                    out.append(CommRedex(path, "top_plus1", "expand", (c,)))
                    out.append(CommRedex(path, "top_plus2", "expand", (c,)))
                elif isinstance(f, With):
                    out.append(CommRedex(path, "top_with", "expand", (c,)))
                elif isinstance(f, Bot):
                    out.append(CommRedex(path, "top_bot", "expand", (c,)))
            continue
        if x.rule not in _COMMUTABLE:
            continue
        for i, y in enumerate(x.premises):
            if x.rule == "with" and i == 1:
                continue            # handled as a mirrored pair from i == 0
            if x.rule == "with":
                if not _mirror_ok(x):
                    continue
                dets = _with_hoist_details(x)
                for det in dets:
                    out.append(CommRedex(path, f"{y.rule}_{x.rule}",
                                         "promote", det))
                continue
            act = set(x.actives[i])
            if y.rule in ("ax", "one", "cut") or not y.principal:
                continue
            if y.principal[0] in act:
                continue
            if y.rule == "top":
                out.append(CommRedex(path, f"top_{x.rule}", "promote", (i,)))
            elif y.rule == "with":
                out.append(CommRedex(path, f"with_{x.rule}", "promote", (i,)))
            elif y.rule in ("par", "plus1", "plus2", "bot"):
                sub = y.premises[0]
                if act <= {o for o, _ in sub.conclusion}:
                    out.append(CommRedex(path, f"{y.rule}_{x.rule}",
                                         "promote", (i,)))
            elif y.rule == "tensor":
                for b, s in enumerate(y.premises):
                    if act <= {o for o, _ in s.conclusion}:
                        out.append(CommRedex(path, f"tensor_{x.rule}",
                                             "promote", (i, b)))
    return out


def _with_hoist_details(x: ProofTree) -> list[tuple]:
    """Hoistable configurations over a with-node with mirrored premises."""
    y1, y2 = x.premises
    al, ar = x.actives[0][0], x.actives[1][0]
    if y1.rule in ("ax", "one", "cut") or not y1.principal:
        return []
    if y1.principal[0] in (al, ar):
        return []
    if y1.rule == "top":
        return [()]
    if y1.rule in ("par", "plus1", "plus2", "bot"):
        if al in {o for o, _ in y1.premises[0].conclusion} and \
                ar in {o for o, _ in y2.premises[0].conclusion}:
            return [()]
        return []
    if y1.rule == "tensor":
        dets = []
        for b in (0, 1):
            if al in {o for o, _ in y1.premises[b].conclusion} and \
                    ar in {o for o, _ in y2.premises[b].conclusion} and \
                    canonical(tidy(y1.premises[1 - b])) == \
                    canonical(tidy(y2.premises[1 - b])):
                dets.append((b,))
        return dets
    if y1.rule == "with":
        if all(al in {o for o, _ in y1.premises[b].conclusion} and
               ar in {o for o, _ in y2.premises[b].conclusion}
               for b in (0, 1)):
            return [()]
        return []
    return []


def _apply_rule(x: ProofTree, i: int, new_premise: ProofTree) -> ProofTree:
    """Re-apply x's rule with premise ``i`` replaced, recomputing the
    conclusion from the new premise contexts."""
    prems = list(x.premises)
    prems[i] = new_premise
    concl: list = []
    seen: set[int] = set()
    byold = dict(x.conclusion)
    for t, q in enumerate(prems):
        act = set(x.actives[t])
        for o in q.conclusion:
            if o[0] not in act and o[0] not in seen:
                concl.append(o)
                seen.add(o[0])
    for k in x.principal:
        concl.append((k, byold[k]))
    return ProofTree(tuple(concl), x.rule, x.principal, x.actives,
                     x.cut_formula, tuple(prems))


def apply_commutation(p: ProofTree, path, kind: str, direction: str,
                      detail: tuple = (),
                      supplied: Optional[ProofTree] = None) -> ProofTree:
    node = get_node(p, path)
    if direction == "swap":
        if kind != "top_top" or node.rule != "top":
            raise NotApplicable(kind)
        (c,) = detail
        if not isinstance(node.formula(c), Top):
            raise NotApplicable("swap target is not ⊤")
        return replace_node(p, path, replace(node, principal=(c,)))
    if direction == "expand":
        return replace_node(p, path, _expand_top(node, kind, detail, supplied))
    if direction != "promote":
        raise NotApplicable(f"unknown direction {direction!r}")
    red = CommRedex(tuple(path), kind, direction, tuple(detail))
    if red not in enumerate_commutations(p):
        raise NotApplicable(f"{kind} not enabled at {path}")
    return replace_node(p, path, _hoist(node, detail))


def _hoist(x: ProofTree, detail: tuple) -> ProofTree:
    if x.rule == "with":
        return _hoist_over_with(x, detail)
    i = detail[0]
    y = x.premises[i]
    if y.rule == "top":
        # erase x; ⊤ keeps the whole conclusion as its context
        return ProofTree(x.conclusion, "top", y.principal, (), None, ())
    if y.rule in ("par", "plus1", "plus2", "bot"):
        inner = _apply_rule(x, i, y.premises[0])
        return ProofTree(x.conclusion, y.rule, y.principal, y.actives,
                         None, (inner,))
    if y.rule == "tensor":
        b = detail[1]
        inner = _apply_rule(x, i, y.premises[b])
        prems = list(y.premises)
        prems[b] = inner
        return ProofTree(x.conclusion, "tensor", y.principal, y.actives,
                         None, tuple(prems))
    if y.rule == "with":
        # y's premises already share context ids, and the only differing
        # occurrences are its own actives -- exactly the new with's actives
        inner1 = _apply_rule(x, i, y.premises[0])
        inner2 = _apply_rule(x, i, y.premises[1])
        return ProofTree(x.conclusion, "with", y.principal, y.actives,
                         None, (inner1, inner2))
    raise NotApplicable(f"cannot hoist {y.rule}")


def _hoist_over_with(x: ProofTree, detail: tuple) -> ProofTree:
    y1, y2 = x.premises
    al, ar = x.actives[0][0], x.actives[1][0]
    k = y1.principal[0]
    if y1.rule == "top":
        return ProofTree(x.conclusion, "top", (k,), (), None, ())
    if y1.rule in ("par", "plus1", "plus2", "bot"):
        s1, s2 = y1.premises[0], y2.premises[0]
        m = {o: n for o, n in zip(y2.actives[0], y1.actives[0])}
        s2 = _rename(s2, m) if m else s2
        inner = _with_node(x, s1, s2, al, ar)
        return ProofTree(x.conclusion, y1.rule, (k,), (y1.actives[0],),
                         None, (inner,))
    if y1.rule == "tensor":
        (b,) = detail
        s1, s2 = y1.premises[b], y2.premises[b]
        m = {y2.actives[b][0]: y1.actives[b][0]}
        s2 = _rename(s2, m)
        inner = _with_node(x, s1, s2, al, ar)
        d = y1.premises[1 - b]
        prems = (inner, d) if b == 0 else (d, inner)
        return ProofTree(x.conclusion, "tensor", (k,), y1.actives,
                         None, prems)
    if y1.rule == "with":
        inners = []
        for b in (0, 1):
            s1, s2 = y1.premises[b], y2.premises[b]
            m = {y2.actives[b][0]: y1.actives[b][0]}
            s2 = _rename(s2, m)
            inners.append(_with_node(x, s1, s2, al, ar))
        return ProofTree(x.conclusion, "with", (k,),
                         (y1.actives[0], (y1.actives[1][0],)), None,
                         tuple(inners))
    raise NotApplicable(f"cannot hoist {y1.rule} over with")


def _with_node(x: ProofTree, s1: ProofTree, s2: ProofTree,
               al: int, ar: int) -> ProofTree:
    """Rebuild x's with-rule over new premises s1 (holding al) and s2."""
    byold = dict(x.conclusion)
    k = x.principal[0]
    concl = [o for o in s1.conclusion if o[0] != al] + [(k, byold[k])]
    # context ids of s1 and s2 must already agree
    return ProofTree(tuple(concl), "with", (k,), ((al,), (ar,)), None,
                     (s1, s2))


def _expand_top(node: ProofTree, kind: str, detail: tuple,
                supplied: Optional[ProofTree]) -> ProofTree:
    if node.rule != "top":
        raise NotApplicable("expansion target is not a ⊤-rule")
    (c,) = detail
    f = node.formula(c)
    k = node.principal[0]
    rest = tuple(o for o in node.conclusion if o[0] != c)
    base = _max_id(node) + 1
    if kind == "top_par" and isinstance(f, Par):
        sub = ProofTree(rest + ((base, f.left), (base + 1, f.right)),
                        "top", (k,), (), None, ())
        return ProofTree(node.conclusion, "par", (c,),
                         ((base, base + 1),), None, (sub,))
    if kind in ("top_plus1", "top_plus2") and isinstance(f, Plus):
        keep = f.left if kind == "top_plus1" else f.right
        sub = ProofTree(rest + ((base, keep),), "top", (k,), (), None, ())
        return ProofTree(node.conclusion, "plus" + kind[-1], (c,),
                         ((base,),), None, (sub,))
    if kind == "top_with" and isinstance(f, With):
        sub1 = ProofTree(rest + ((base, f.left),), "top", (k,), (), None, ())
        sub2 = ProofTree(rest + ((base + 1, f.right),), "top", (k,), (),
                         None, ())
        return ProofTree(node.conclusion, "with", (c,),
                         ((base,), (base + 1,)), None, (sub1, sub2))
    if kind == "top_bot" and isinstance(f, Bot):
        sub = ProofTree(rest, "top", (k,), (), None, ())
        return ProofTree(node.conclusion, "bot", (c,), ((),), None, (sub,))
    if kind == "top_tensor" and isinstance(f, Tensor):
        if supplied is None:
            raise NotApplicable(
                "⊤–⊗ expansion requires a supplied cut-free proof")
        if not is_cut_free(supplied):
            raise NotApplicable("supplied proof must be cut-free")
        # supplied proves ⊢ Δ, B with Δ ⊆ the ⊤-rule's context
        want = list(conclusion_formulas(supplied))
        if not want or want[-1] != f.right:
            raise NotApplicable("supplied proof must conclude ⊢ Δ, B")
        delta = want[:-1]
        pool = [o for o in rest]
        chosen: list = []
        for d in delta:
            for o in pool:
                if o[1] == d and o not in chosen:
                    chosen.append(o)
                    break
            else:
                raise NotApplicable("Δ is not part of the ⊤-rule's context")
        keep = tuple(o for o in rest if o not in chosen)
        sub = ProofTree(keep + ((base, f.left),), "top", (k,), (), None, ())
        sup = supplied
        m = {}
        sup_ids = [o for o in sup.conclusion]
        for o, (i2, _) in zip(chosen, sup_ids):
            m[i2] = o[0]
        m[sup_ids[-1][0]] = base + 1
        clash = (_all_ids(sup) - set(m)) & ({o for o, _ in node.conclusion}
                                            | {base, base + 1})
        nxt = max(_max_id(node), _max_id(sup)) + 2
        for t, i in enumerate(sorted(clash)):
            m[i] = nxt + t
        sup = _rename(sup, m)
        return ProofTree(node.conclusion, "tensor", (c,),
                         ((base,), (base + 1,)), None, (sub, sup))
    raise NotApplicable(f"{kind} does not match context formula {fmt(f)}")


# ---------------------------------------------------------------------------
# bounded ≈c equality search

def eqc_search(p: ProofTree, q: ProofTree, budget: int = 100_000) -> str:
    """Bidirectional BFS over single rule commutations.

    Returns "Equal" (definitive) or "NotProvedEqual" (not a disproof).
    """
    kp, kq = canonical(tidy(p)), canonical(tidy(q))
    if kp == kq:
        return "Equal"
    seen_p, seen_q = {kp: p}, {kq: q}
    frontier_p, frontier_q = [p], [q]
    explored = 0
    while (frontier_p or frontier_q) and explored < budget:
        nxt_p: list[ProofTree] = []
        for cur in frontier_p:
            for red in enumerate_commutations(cur):
                if red.direction == "expand" and red.kind == "top_tensor":
                    continue
                new = apply_commutation(cur, red.path, red.kind,
                                        red.direction, red.detail)
                key = canonical(tidy(new))
                explored += 1
                if key in seen_q:
                    return "Equal"
                if key not in seen_p:
                    seen_p[key] = new
                    nxt_p.append(new)
                if explored >= budget:
                    return "NotProvedEqual"
        frontier_p = nxt_p
        nxt_q: list[ProofTree] = []
        for cur in frontier_q:
            for red in enumerate_commutations(cur):
                if red.direction == "expand" and red.kind == "top_tensor":
                    continue
                new = apply_commutation(cur, red.path, red.kind,
                                        red.direction, red.detail)
                key = canonical(tidy(new))
                explored += 1
                if key in seen_p:
                    return "Equal"
                if key not in seen_q:
                    seen_q[key] = new
                    nxt_q.append(new)
                if explored >= budget:
                    return "NotProvedEqual"
        frontier_q = nxt_q
    return "NotProvedEqual"


# ---------------------------------------------------------------------------
# unit patterns

@dataclass
class PatternReport:
    top_patterns: list      # paths of ⊤-rules concluding exactly ⊢⊤,0
    top_offenders: list
    one_patterns: list      # (path, plus_sequence_empty)
    one_offenders: list
    bot_patterns: list
    bot_offenders: list

    @property
    def all_ok(self) -> bool:
        return not (self.top_offenders or self.one_offenders
                    or self.bot_offenders)


def detect_patterns(p: ProofTree) -> PatternReport:
    rep = PatternReport([], [], [], [], [], [])
    parents = {(): None}
    for path, node in node_paths(p):
        for t, _ in enumerate(node.premises):
            parents[path + (t,)] = path
    nodes = dict(node_paths(p))
    for path, node in node_paths(p):
        if node.rule == "top":
            forms = sorted(fmt(f) for f in conclusion_formulas(node))
            if forms == sorted([fmt(TOP), fmt(ZERO)]):
                rep.top_patterns.append(path)
            else:
                rep.top_offenders.append(path)
        elif node.rule == "one":
            cur = path
            plus_count = 0
            ok = False
            while True:
                par = parents.get(cur)
                if par is None:
                    break
                rule = nodes[par].rule
                if rule in ("plus1", "plus2"):
                    plus_count += 1
                    cur = par
                    continue
                ok = rule == "bot"
                break
            if ok:
                rep.one_patterns.append((path, plus_count == 0))
            else:
                rep.one_offenders.append(path)
        elif node.rule == "bot":
            cur = node.premises[0]
            while cur.rule in ("plus1", "plus2"):
                cur = cur.premises[0]
            if cur.rule == "one":
                rep.bot_patterns.append(path)
            else:
                rep.bot_offenders.append(path)
    return rep


def compact_unit_patterns(p: ProofTree) -> ProofTree:
    """Slide ⊕ᵢ-rules below ⊥-rules so every 1/⊕/⊥ pattern becomes an
    adjacent 1/⊥ pair."""
    changed = True
    while changed:
        changed = False
        for path, node in node_paths(p):
            if node.rule == "bot" and node.premises[0].rule in \
                    ("plus1", "plus2") and is_cut_free(node):
                inner = node.premises[0]
                tail = inner
                while tail.rule in ("plus1", "plus2"):
                    tail = tail.premises[0]
                if tail.rule != "one":
                    continue
                p = apply_commutation(p, path, f"{inner.rule}_bot",
                                      "promote", (0,))
                changed = True
                break
    return p


def substitute_units_proof(p: ProofTree, x: str, y: str) -> ProofTree:
    """Replace unit patterns by axioms: ⊤/0-patterns become ⊢x⊥,x and
    adjacent 1/⊥ pairs become ⊢y⊥,y; unit formulas are substituted
    throughout.  Fails if any unit rule is outside such a pattern."""
    from .formulas import substitute_units, PosAtom, NegAtom

    p = compact_unit_patterns(p)
    rep = detect_patterns(p)
    if not rep.all_ok or any(not empty for _, empty in rep.one_patterns):
        raise PatternPreconditionFailed(
            "unit rules outside ⊤/0 or adjacent 1/⊥ patterns")

    def sub(f: Formula) -> Formula:
        return substitute_units(f, x, y)

    def go(node: ProofTree) -> ProofTree:
        concl = tuple((i, sub(f)) for i, f in node.conclusion)
        if node.rule == "top":
            ids = tuple(i for i, _ in node.conclusion)
            return ProofTree(concl, "ax", ids, (), None, ())
        if node.rule == "bot" and node.premises[0].rule == "one":
            ids = tuple(i for i, _ in node.conclusion)
            return ProofTree(concl, "ax", ids, (), None, ())
        cf = sub(node.cut_formula) if node.cut_formula is not None else None
        return ProofTree(concl, node.rule, node.principal, node.actives,
                         cf, tuple(go(q) for q in node.premises))

    return go(p)
