"""A short tour: roots, characters, a shuffle relation, a braid operator and a reflection.

Run with ``python3 demos/tour.py``.
"""

from __future__ import annotations

import random

from quiverlab.checks import check_identities, failures
from quiverlab.loop import EllipticLie, LoopElt, e_sym
from quiverlab.prep_rep import dump_rep, random_in_torsion, reflect
from quiverlab.quiver import builtin_quiver
from quiverlab.series import TruncationWindow, coha_character
from quiverlab.shuffle import ShuffleAlgebra, check_relation, relation_instances


def main() -> None:
    Q = builtin_quiver("A1~")
    print("Kronecker quiver, Cartan matrix", Q.cartan_matrix())

    ch = coha_character(Q, TruncationWindow.total(2, 2, 1))
    print("character coefficient at d=(1,1):", {k: str(ch[((1, 1), k)]) for k in (0, -1)})

    A = ShuffleAlgebra(Q)
    kind, idx, modes, edge = next(iter(relation_instances(A, 1)))
    ok, _ = check_relation(A, kind, idx, modes, edge)
    print(f"{kind} relation at modes {list(modes)} holds: {ok}")

    L = EllipticLie(Q)
    e = LoopElt.basis(e_sym((1,), 0))
    print("T_1(e) =", L.braid_T(1, e).terms)

    M = random_in_torsion(Q, 0, (2, 2), random.Random(0))
    print("module\n" + dump_rep(M))
    print("reflected at vertex 0\n" + dump_rep(reflect(M, 0, "S")))

    bad = failures(check_identities(3))
    print("generating-series identities up to order 3:", "pass" if not bad else bad)


if __name__ == "__main__":
    main()
