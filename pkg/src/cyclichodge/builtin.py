"""Algebras shipped with the package.

trivial    dim 1, the base field itself; the descendant potentials over
           it reproduce the classical intersection-number generating
           series in one set of couplings.
dual2      dim 2 even algebra Q[x]/(x^2) with integral picking the x
           coefficient; the smallest instance with a 2-dimensional H_0.
exterior2  dim 4 exterior algebra on two odd generators; every axiom
           holds but H_0 contains odd vectors, so potential assembly
           refuses it.  Useful for exercising the parity gate.
block6     dim 6 with H_0 = {1, t} purely even plus one genuine Hodge
           block (e odd, Qe, G_-e, QG_-e); the smallest shipped algebra
           on which Q, G_-, G_+ and the block machinery are all nonzero
           while potential assembly still applies.
block8     exterior algebra on two odd generators tensored with
           Q[x]/(x^2), carrying Q(theta1) = x and G_-(theta1) =
           theta1 theta2.  All axioms hold, H_4 is one block, but H_0
           contains odd vectors, so potential assembly refuses it.
"""

from __future__ import annotations

import json
from importlib import resources

from .algebra import parse_algebra

BUILTIN_NAMES = ("trivial", "dual2", "exterior2", "block6", "block8")


def load_builtin(name):
    if name not in BUILTIN_NAMES:
        raise KeyError(f"unknown builtin algebra {name!r}; "
                       f"choose from {', '.join(BUILTIN_NAMES)}")
    text = resources.files("cyclichodge.data").joinpath(f"{name}.json").read_text()
    return parse_algebra(json.loads(text), name=name)
