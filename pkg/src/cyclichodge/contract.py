"""Exact contraction of marked graphs over a cyclic Hodge algebra.

The value of a graph is a polynomial in the couplings T[n,i].  It is
the full tensor contraction of: one n-form (a1,..,an) -> integral of
a1*...*an per vertex (arguments in germ order), one bivector per edge,
and one vector per leaf.  Bivectors realize the operator named by the
edge mark through the scalar product: [A] is the unique bivector whose
contraction with (., x) on the first leg returns A(x).

Signs: with everything Z2-graded, the terms of the contraction acquire
the Koszul sign of the permutation taking the source word (edge factors
in edge order, first leg first, then leaf factors in leaf order, i.e.
plain half-edge order) to the target word (germs in plan order).  On a
chosen set of edges whose removal makes the graph a tree - one per
independent cycle - the operator is twisted by J: a -> (-1)^parity(a) a;
the result does not depend on the choice.

`evaluate_graph` eliminates half-edge variables one at a time over
sparse factor tables; `oracle_evaluate` recomputes the same value by
brute enumeration of all nonzero edge/leaf terms with signs from an
explicit bubble sort.  They share only the primitive tensors, so
agreement is a strong check of the bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .algebra import derive_ops
from .graded import identity_matrix, mat_mul, transpose
from .graphs import leaf_basis_index, leaf_level
from .poly import Poly


@dataclass(frozen=True)
class EvalPlan:
    """vertex_order: traversal order of vertices; germ_order[v]: the germ
    sequence of vertex v (indexed by vertex id, not by position);
    sign_edges: edge indices carrying the J twist."""

    vertex_order: tuple
    germ_order: tuple
    sign_edges: frozenset


def make_plan(graph):
    """Default plan: DFS from vertex 0 along increasing edge ids; tree
    edges untwisted, every other edge (loops included) twisted."""
    if not graph.is_connected():
        raise ValueError("plans exist for connected graphs only")
    incident = [[] for _ in range(graph.n_vertices)]
    for k, (u, v, _) in enumerate(graph.edges):
        incident[u].append((k, v))
        if u != v:
            incident[v].append((k, u))
    seen = {0}
    order = [0]
    tree = set()

    def dfs(u):
        for (k, w) in sorted(incident[u]):
            if w not in seen:
                seen.add(w)
                order.append(w)
                tree.add(k)
                dfs(w)

    dfs(0)
    return EvalPlan(
        vertex_order=tuple(order),
        germ_order=tuple(graph.vertex_germs(v) for v in range(graph.n_vertices)),
        sign_edges=frozenset(k for k in range(graph.n_edges) if k not in tree),
    )


def validate_plan(graph, plan):
    if sorted(plan.vertex_order) != list(range(graph.n_vertices)):
        raise ValueError("plan vertex order must be a permutation of the vertices")
    if len(plan.germ_order) != graph.n_vertices:
        raise ValueError("plan needs a germ order for every vertex")
    for v in range(graph.n_vertices):
        if tuple(sorted(plan.germ_order[v])) != graph.vertex_germs(v):
            raise ValueError(f"germ order of vertex {v + 1} does not match the graph")
    if not all(0 <= k < graph.n_edges for k in plan.sign_edges):
        raise ValueError("sign edge index out of range")
    parent = list(range(graph.n_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    merges = 0
    for k, (u, v, _) in enumerate(graph.edges):
        if k in plan.sign_edges:
            continue
        ru, rv = find(u), find(v)
        if ru == rv:
            raise ValueError("untwisted edges must not close a cycle")
        parent[ru] = rv
        merges += 1
    if merges != graph.n_vertices - 1:
        raise ValueError("untwisted edges must form a spanning tree")


def random_plan(graph, rng):
    """Uniform-ish random valid plan; rng is a random.Random."""
    if not graph.is_connected():
        raise ValueError("plans exist for connected graphs only")
    vertex_order = list(range(graph.n_vertices))
    rng.shuffle(vertex_order)
    germ_order = []
    for v in range(graph.n_vertices):
        germs = list(graph.vertex_germs(v))
        rng.shuffle(germs)
        germ_order.append(tuple(germs))
    edge_ids = list(range(graph.n_edges))
    rng.shuffle(edge_ids)
    parent = list(range(graph.n_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree = set()
    for k in edge_ids:
        u, v, _ = graph.edges[k]
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            tree.add(k)
    return EvalPlan(tuple(vertex_order), tuple(germ_order),
                    frozenset(k for k in range(graph.n_edges) if k not in tree))


# ---------------------------------------------------------------------------
# primitive tensors


def mark_matrix(alg, mark):
    """Matrix of the operator named by an edge mark."""
    der = derive_ops(alg)
    if mark in ("ID", "IDLOOP"):
        return identity_matrix(alg.dim)
    if mark == "GG":
        return mat_mul(alg.gminus, der.gplus.mat)
    if mark == "PI0":
        return der.pi0.mat
    if mark == "QGP":
        return mat_mul(alg.q, der.gplus.mat)
    if mark == "GPQ":
        return mat_mul(der.gplus.mat, alg.q)
    if mark == "GP":
        return der.gplus.mat
    if mark == "GM":
        return alg.gminus
    raise ValueError(f"unknown edge mark {mark!r}")


def bivector(alg, mat, twist):
    """Sparse bivector {(i, j): c} of the operator with matrix `mat`,
    optionally twisted by J.  Defining property: sum_i c[i][j] (e_i, x)
    equals the e_j-coordinate of the operator applied to x."""
    der = derive_ops(alg)
    if twist:
        mat = tuple(tuple(-x if alg.parity[i] else x for x in row)
                    for i, row in enumerate(mat))
    c = transpose(mat_mul(mat, der.gram_inv))
    return {(i, j): c[i][j]
            for i in range(alg.dim) for j in range(alg.dim) if c[i][j] != 0}


def leaf_vector(alg, mark):
    """Sparse vector {i: value}; values are Poly for coupling leaves."""
    lvl = leaf_level(mark)
    if lvl is not None:
        if any(alg.parity[i] for i in alg.h0):
            raise ValueError("coupling leaves need a purely even H_0; "
                             "odd couplings would not commute")
        return {idx: Poly.var(lvl, s + 1) for s, idx in enumerate(alg.h0)}
    if mark == "UNIT":
        return {alg.unit: Fraction(1)}
    i = leaf_basis_index(mark)
    if i is None:
        raise ValueError(f"unknown leaf mark {mark!r}")
    if i >= alg.dim:
        raise ValueError(f"leaf {mark} out of range for dimension {alg.dim}")
    return {i: Fraction(1)}


def _vertex_table(alg, germs):
    """Sparse table {(i_1,..,i_n): integral(e_i1 * .. * e_in)} over the
    germ slots, built by left-to-right folding with zero pruning."""
    entries = {}
    dim = alg.dim

    def rec(pos, vec, key):
        if pos == len(germs):
            if vec is None:
                vec = alg.basis_vector(alg.unit)
            val = alg.integrate(vec)
            if val != 0:
                entries[tuple(key)] = val
            return
        for i in range(dim):
            nv = alg.basis_vector(i) if vec is None \
                else alg.multiply_basis_right(vec, i)
            if nv:
                key.append(i)
                rec(pos + 1, nv, key)
                key.pop()

    rec(0, None, [])
    return entries


# ---------------------------------------------------------------------------
# engine


def _join(f1, f2):
    vars1, t1 = f1
    vars2, t2 = f2
    shared = [v for v in vars1 if v in vars2]
    out_vars = tuple(sorted(set(vars1) | set(vars2)))
    pos1 = {v: i for i, v in enumerate(vars1)}
    pos2 = {v: i for i, v in enumerate(vars2)}
    index2 = {}
    for key2, val2 in t2.items():
        sk = tuple(key2[pos2[v]] for v in shared)
        index2.setdefault(sk, []).append((key2, val2))
    out = {}
    for key1, val1 in t1.items():
        sk = tuple(key1[pos1[v]] for v in shared)
        for key2, val2 in index2.get(sk, ()):
            assign = {v: key1[i] for v, i in pos1.items()}
            assign.update({v: key2[i] for v, i in pos2.items()})
            key = tuple(assign[v] for v in out_vars)
            prod = val1 * val2
            if key in out:
                out[key] = out[key] + prod
            else:
                out[key] = prod
    return (out_vars, {k: v for k, v in out.items() if v != 0})


def _sum_out(factor, var):
    vars_, table = factor
    pos = vars_.index(var)
    out_vars = vars_[:pos] + vars_[pos + 1:]
    out = {}
    for key, val in table.items():
        k = key[:pos] + key[pos + 1:]
        if k in out:
            out[k] = out[k] + val
        else:
            out[k] = val
    return (out_vars, {k: v for k, v in out.items() if v != 0})


def _build_factors(alg, graph, plan):
    dim = alg.dim
    factors = []
    for v in plan.vertex_order:
        factors.append((tuple(plan.germ_order[v]),
                        _vertex_table(alg, plan.germ_order[v])))
    for k, (_, _, mark) in enumerate(graph.edges):
        biv = bivector(alg, mark_matrix(alg, mark), k in plan.sign_edges)
        factors.append(((2 * k, 2 * k + 1), dict(biv)))
    for j, (_, mark) in enumerate(graph.leaves):
        vec = leaf_vector(alg, mark)
        h = 2 * graph.n_edges + j
        factors.append(((h,), {(i,): val for i, val in vec.items()}))
    return factors


def _target_positions(graph, plan):
    target = [h for v in plan.vertex_order for h in plan.germ_order[v]]
    return {h: p for p, h in enumerate(target)}


def evaluate_graph(alg, graph, plan=None):
    """Value of a connected marked graph as a Poly in the couplings."""
    if not graph.is_connected():
        raise ValueError("evaluation is defined for connected graphs")
    if plan is None:
        plan = make_plan(graph)
    validate_plan(graph, plan)
    tpos = _target_positions(graph, plan)
    nhe = graph.n_half_edges
    factors = _build_factors(alg, graph, plan)
    par = alg.parity
    domain = {h: alg.dim for h in range(nhe)}
    if any(par):
        # Koszul signs through parity bits: half-edge h gets a bit
        # variable nhe + h tied to the parity of its index, and every
        # inverted pair contributes -1 when both bits are set.  Bit
        # variables have domain 2, so the elimination tables stay small
        # where dense (index, index) sign factors would blow up.
        flip = {(0, 0): Fraction(1), (0, 1): Fraction(1),
                (1, 0): Fraction(1), (1, 1): Fraction(-1)}
        touched = set()
        for h in range(nhe):
            for h2 in range(h + 1, nhe):
                if tpos[h] > tpos[h2]:
                    factors.append(((nhe + h, nhe + h2), dict(flip)))
                    touched.update((h, h2))
        for h in sorted(touched):
            factors.append(((h, nhe + h),
                            {(i, par[i]): Fraction(1) for i in range(alg.dim)}))
            domain[nhe + h] = 2
    remaining = set(domain)
    while remaining:
        # greedy: eliminate the variable whose merged factor is cheapest
        best, best_cost = None, None
        for v in remaining:
            scope = set()
            for vars_, _ in factors:
                if v in vars_:
                    scope.update(vars_)
            scope.discard(v)
            cost = 1
            for w in scope:
                cost *= domain[w]
            if best_cost is None or cost < best_cost or \
                    (cost == best_cost and v < best):
                best, best_cost = v, cost
        remaining.discard(best)
        involved = [f for f in factors if best in f[0]]
        rest = [f for f in factors if best not in f[0]]
        merged = involved[0]
        for f in involved[1:]:
            merged = _join(merged, f)
        rest.append(_sum_out(merged, best))
        factors = rest
    result = Poly.const(1)
    for vars_, table in factors:
        val = table.get((), Fraction(0))
        result = result * val
    return result if isinstance(result, Poly) else Poly.const(result)


def oracle_evaluate(alg, graph, plan=None):
    """Same value as evaluate_graph by exhaustive term enumeration.

    Meant for cross-checking on small graphs; cost is the product of the
    nonzero term counts of all edge bivectors and leaf vectors.
    """
    if not graph.is_connected():
        raise ValueError("evaluation is defined for connected graphs")
    if plan is None:
        plan = make_plan(graph)
    validate_plan(graph, plan)
    tpos = _target_positions(graph, plan)
    nhe = graph.n_half_edges
    par = alg.parity

    edge_terms = []
    for k, (_, _, mark) in enumerate(graph.edges):
        biv = bivector(alg, mark_matrix(alg, mark), k in plan.sign_edges)
        edge_terms.append([(i, j, c) for (i, j), c in sorted(biv.items())])
    leaf_terms = []
    for (_, mark) in graph.leaves:
        vec = leaf_vector(alg, mark)
        leaf_terms.append(sorted(vec.items()))

    total = Poly.zero()
    for combo in product(*edge_terms, *leaf_terms):
        assign = {}
        coeff = Poly.const(1)
        for k in range(graph.n_edges):
            i, j, c = combo[k]
            assign[2 * k] = i
            assign[2 * k + 1] = j
            coeff = coeff * c
        for jdx in range(graph.n_leaves):
            i, val = combo[graph.n_edges + jdx]
            assign[2 * graph.n_edges + jdx] = i
            coeff = coeff * val
        # Koszul sign: bubble the source word into target order, flipping
        # the sign whenever two odd symbols swap.
        cur = list(range(nhe))
        sign = 1
        changed = True
        while changed:
            changed = False
            for t in range(nhe - 1):
                if tpos[cur[t]] > tpos[cur[t + 1]]:
                    if par[assign[cur[t]]] and par[assign[cur[t + 1]]]:
                        sign = -sign
                    cur[t], cur[t + 1] = cur[t + 1], cur[t]
                    changed = True
        val = Fraction(sign)
        for v in plan.vertex_order:
            word = [assign[h] for h in plan.germ_order[v]]
            val *= alg.integrate_basis_word(word)
            if val == 0:
                break
        if val != 0:
            total = total + coeff * val
    return total
