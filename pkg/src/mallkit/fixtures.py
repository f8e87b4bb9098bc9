"""Hand-built example nets and proofs used by the test-suite and the CLI.

Each fixture is small enough to check by eye; several decode published
diagrams of linkings on additive cut sequents.
"""

from __future__ import annotations

from .formulas import parse, dual, TOP, ZERO
from .proofs import ProofTree, ax_, cut_, with_, plus1_, top_
from .nets import LeafAddr, LinkingSet, make_net

__all__ = [
    "toggling_example_net", "nonbipartite_full_net", "bipartite_nonfull_net",
    "distributivity_witness_nets", "ambiguous_pair_nets", "five_cut_proof",
]


def _L(*addrs):
    return frozenset(frozenset(a) for a in addrs)


def toggling_example_net() -> LinkingSet:
    """Two linkings on [X ∗ X⊥] ⊢ X&X⊥, X⊕X⊥.

    The first linking threads the cut pair; the second drops it entirely.
    Together they toggle the & and every link depends on it."""
    X = parse("X")
    cut = (X, dual(X))                                   # tree 0
    withf = parse("X & ~X")                              # tree 1
    plusf = parse("X + ~X")                              # tree 2
    lam1 = _L({LeafAddr(1, 0, "L"), LeafAddr(0, 1, "")},
              {LeafAddr(2, 0, "R"), LeafAddr(0, 0, "")})
    lam2 = _L({LeafAddr(1, 0, "R"), LeafAddr(2, 0, "L")})
    return make_net((cut,), (withf, plusf), [lam1, lam2])


def nonbipartite_full_net() -> LinkingSet:
    """⊢ (X⅋X⊥)⊗Y, Y⊥&(Y⊥⅋(X⊗X⊥)): full but one linking links X to X⊥
    inside the first conclusion."""
    c0 = parse("(X | ~X) * Y")
    c1 = parse("~Y & (~Y | (X * ~X))")
    blue = _L({LeafAddr(0, 0, "LL"), LeafAddr(1, 0, "RRR")},
              {LeafAddr(0, 0, "LR"), LeafAddr(1, 0, "RRL")},
              {LeafAddr(0, 0, "R"), LeafAddr(1, 0, "RL")})
    red = _L({LeafAddr(0, 0, "LL"), LeafAddr(0, 0, "LR")},
             {LeafAddr(0, 0, "R"), LeafAddr(1, 0, "L")})
    return make_net((), (c0, c1), [blue, red])


def bipartite_nonfull_net() -> LinkingSet:
    """⊢ ((X⅋X⊥)⊗Y)⊕Y, Y⊥⅋(X⊗X⊥): the single linking picks the left of
    the ⊕, leaving the bare Y leaf unlinked."""
    c0 = parse("((X | ~X) * Y) + Y")
    c1 = parse("~Y | (X * ~X)")
    lam = _L({LeafAddr(0, 0, "LLL"), LeafAddr(1, 0, "RR")},
             {LeafAddr(0, 0, "LLR"), LeafAddr(1, 0, "RL")},
             {LeafAddr(0, 0, "LR"), LeafAddr(1, 0, "L")})
    return make_net((), (c0, c1), [lam])


def distributivity_witness_nets() -> tuple[LinkingSet, LinkingSet]:
    """The two cut-free nets whose compositions both normalize to identity
    nets, witnessing A⊗(B⊕C) ≅ (A⊗B)⊕(A⊗C).

    Left:  ⊢ A⊗(B⊕C), (C⊥⅋A⊥)&(B⊥⅋A⊥)
    Right: ⊢ (A⊗B)⊕(A⊗C), (C⊥&B⊥)⅋A⊥
    """
    left = make_net((), (parse("A * (B + C)"),
                         parse("(~C | ~A) & (~B | ~A)")), [
        _L({LeafAddr(0, 0, "L"), LeafAddr(1, 0, "RR")},
           {LeafAddr(0, 0, "RL"), LeafAddr(1, 0, "RL")}),
        _L({LeafAddr(0, 0, "L"), LeafAddr(1, 0, "LR")},
           {LeafAddr(0, 0, "RR"), LeafAddr(1, 0, "LL")}),
    ])
    right = make_net((), (parse("(A * B) + (A * C)"),
                          parse("(~C & ~B) | ~A")), [
        _L({LeafAddr(0, 0, "LL"), LeafAddr(1, 0, "R")},
           {LeafAddr(0, 0, "LR"), LeafAddr(1, 0, "LR")}),
        _L({LeafAddr(0, 0, "RL"), LeafAddr(1, 0, "R")},
           {LeafAddr(0, 0, "RR"), LeafAddr(1, 0, "LL")}),
    ])
    return left, right


def ambiguous_pair_nets() -> tuple[LinkingSet, LinkingSet]:
    """Two distinct bipartite ax-unique nets on ⊢ X⊥⊗X⊥, X⅋X — the
    ambiguity a repeated atom buys."""
    c0, c1 = parse("~X * ~X"), parse("X | X")
    straight = make_net((), (c0, c1), [
        _L({LeafAddr(0, 0, "L"), LeafAddr(1, 0, "R")},
           {LeafAddr(0, 0, "R"), LeafAddr(1, 0, "L")})])
    swapped = make_net((), (c0, c1), [
        _L({LeafAddr(0, 0, "L"), LeafAddr(1, 0, "L")},
           {LeafAddr(0, 0, "R"), LeafAddr(1, 0, "R")})])
    return straight, swapped


def five_cut_proof() -> ProofTree:
    """A proof of ⊢ X⊥, X stacked with five cuts of known masses.

    The cut tower exercises both key and commutative elimination steps and
    pins the density measure: masses (8, 8, 8, 36, 36), densities
    (8, 16, 44, 80, 88)."""
    X = parse("X")

    def pos(p, f):
        return next(t for t, (_, g) in enumerate(p.conclusion) if g == f)

    a1, a2 = ax_(X), ax_(X)
    c1 = cut_(a1, pos(a1, X), a2, pos(a2, dual(X)))          # ⊢ X⊥, X
    s1 = plus1_(c1, pos(c1, X), ZERO)                        # ⊢ X⊥, X⊕0
    a3 = ax_(X)
    c2 = cut_(a3, pos(a3, X), s1, pos(s1, dual(X)))          # ⊢ X⊥, X⊕0
    t = top_([TOP, X], 0)                                    # ⊢ ⊤, X
    a4 = ax_(X)
    w = with_(t, pos(t, TOP), a4, pos(a4, dual(X)))          # ⊢ ⊤&X⊥, X
    c3 = cut_(c2, pos(c2, parse("X + 0")), w, pos(w, parse("top & ~X")))
    a5, a6 = ax_(X), ax_(X)
    c4 = cut_(a5, pos(a5, X), a6, pos(a6, dual(X)))
    return cut_(c3, pos(c3, X), c4, pos(c4, dual(X)))        # ⊢ X⊥, X
