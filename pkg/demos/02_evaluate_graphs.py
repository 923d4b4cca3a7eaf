"""Evaluate marked graphs: couplings, Koszul signs, and the two
independent evaluation paths.

Run with: python3 demos/02_evaluate_graphs.py
"""

import random

from cyclichodge import (MarkedGraph, evaluate_graph, load_builtin,
                         oracle_evaluate, random_plan)

dual2 = load_builtin("dual2")
exterior2 = load_builtin("exterior2")
block6 = load_builtin("block6")

# A single trivalent vertex with three coupling leaves: the classical
# three-point function integral(phi^3) as a polynomial in the couplings.
g3 = MarkedGraph(1, [], [(0, "E0")] * 3)
print("three-point over dual2:   ", evaluate_graph(dual2, g3).to_text())

# An identity loop plus an arrow leaf: the handle window. Its level-1
# coefficient is the supertrace of the identity, so the two odd block
# directions of block6 cancel two of the even ones.
handle = MarkedGraph(1, [(0, 0, "IDLOOP")], [(0, "E1")])
print("handle over dual2:        ", evaluate_graph(dual2, handle).to_text())
print("handle over block6:       ", evaluate_graph(block6, handle).to_text())

# Koszul signs: two odd basis leaves paired through an identity edge.
# Swapping which germ is read first flips a crossing, and the engine
# keeps the result consistent for every contraction order.
odd_pair = MarkedGraph(2, [(0, 1, "ID")], [(0, "B2"), (1, "B3")])
print("odd pairing (exterior2):  ", evaluate_graph(exterior2, odd_pair).to_text())

# The oracle expands full tensor products and sorts germs pairwise; the
# engine eliminates one index at a time. They share nothing but the
# primitive tensors, and they agree on every graph and every plan.
rng = random.Random(7)
graph = MarkedGraph(2, [(0, 1, "GP")], [(0, "B4"), (1, "B6")])
ref = evaluate_graph(block6, graph)
print("engine:                   ", ref.to_text())
print("oracle:                   ", oracle_evaluate(block6, graph).to_text())
for trial in range(3):
    plan = random_plan(graph, rng)
    assert evaluate_graph(block6, graph, plan) == ref
print("3 random plans:            all equal")
