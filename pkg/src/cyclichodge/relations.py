"""Differential identities of the potentials, checked as exact
polynomial statements over Q.

Every check compares both sides of an identity on a finite window: all
monomials of level-0 degree at most `degree` (and, where arrow
variables appear, at most one arrow factor).  Potentials enter through
leaf budgets chosen so that every kept monomial is computed exactly -
each level-0 derivative applied to a potential costs one extra leaf -
so a zero residual is a proof on the window and a nonzero residual is a
genuine counterexample, never a truncation artifact.

Contracted derivative pairs are summed against the inverse pairing on
H_0; the quadratic term of the string identity uses the pairing itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import derive_ops
from .graded import supertrace
from .poly import Poly, format_rational
from .potentials import PotentialTable

MAX_LEAF_BUDGET = 18


class BudgetError(ValueError):
    """The requested degree needs an infeasibly large graph enumeration."""


@dataclass
class Residual:
    """Outcome of one identity check.

    residuals maps a slice label to the (truncated) difference of the
    two sides on that slice; ok means every slice vanished.
    """

    relation: str
    degree: int
    params: dict
    ok: bool
    residuals: dict
    witness: tuple = None
    details: dict = field(default_factory=dict)

    def to_json_obj(self):
        obj = {
            "relation": self.relation,
            "degree": self.degree,
            "params": dict(self.params),
            "ok": self.ok,
            "residuals": {label: r.to_json_obj()
                          for label, r in self.residuals.items() if not r.is_zero()},
        }
        if self.witness is not None:
            label, mono, coeff = self.witness
            obj["witness"] = {"slice": label,
                              "monomial": [[n, i] for n, i in mono],
                              "coeff": format_rational(coeff)}
        if self.details:
            det = {}
            for k, v in self.details.items():
                det[k] = format_rational(v) if isinstance(v, Fraction) else v
            obj["details"] = det
        return obj

    def summary_line(self):
        status = "pass" if self.ok else "FAIL"
        params = " ".join(f"{k}={v}" for k, v in self.params.items())
        line = f"{status}  {self.relation}"
        if params:
            line += f" [{params}]"
        line += f" @ degree {self.degree}"
        if not self.ok and self.witness is not None:
            label, mono, coeff = self.witness
            mono_txt = Poly.monomial(mono, 1).to_text()
            line += f"  witness: slice {label}, {mono_txt} -> {format_rational(coeff)}"
        return line


def _finish(relation, degree, params, residuals, details=None):
    witness = None
    for label, r in residuals.items():
        if not r.is_zero():
            mono, coeff = r.leading_witness()
            witness = (label, mono, coeff)
            break
    return Residual(relation=relation, degree=degree, params=params,
                    ok=witness is None, residuals=residuals,
                    witness=witness, details=details or {})


class _Setup:
    """Shared context: potential table, pairing data, budget guard."""

    def __init__(self, alg, table, max_budget):
        self.alg = alg
        self.table = table if table is not None else PotentialTable(alg)
        self.max_budget = max_budget
        der = derive_ops(alg)
        self.s = len(alg.h0)
        self.eta = der.eta
        self.eta_inv = der.eta_inv
        self.str_pi0 = supertrace(der.pi0.mat, alg.parity)

    def F(self, g, n, budget):
        if budget > self.max_budget:
            raise BudgetError(
                f"degree requires a leaf budget of {budget} > {self.max_budget}; "
                "lower the degree or raise max_budget")
        return self.table.potential(g, n, budget)

    def pair(self, fn_left, fn_right):
        """sum_ij fn_left(i) eta^{-1}[i][j] fn_right(j) over H_0 slots."""
        total = Poly.zero()
        for i in range(self.s):
            li = fn_left(i + 1)
            if li.is_zero():
                continue
            for j in range(self.s):
                c = self.eta_inv[i][j]
                if c == 0:
                    continue
                total = total + li * fn_right(j + 1) * c
        return total


def check_wdvv(alg, degree, table=None, max_budget=MAX_LEAF_BUDGET):
    """Associativity identity for the genus-0 primary potential."""
    st = _Setup(alg, table, max_budget)
    F = st.F(0, 0, degree + 3)
    s = st.s
    third = {}
    for a in range(1, s + 1):
        for b in range(a, s + 1):
            for c in range(b, s + 1):
                third[(a, b, c)] = (F.partial((0, a)).partial((0, b))
                                    .partial((0, c)))

    def t3(a, b, c):
        return third[tuple(sorted((a, b, c)))]

    residuals = {}
    for a in range(1, s + 1):
        for b in range(1, s + 1):
            for c in range(1, s + 1):
                for d in range(1, s + 1):
                    lhs = st.pair(lambda i: t3(a, b, i), lambda j: t3(j, c, d))
                    rhs = st.pair(lambda i: t3(a, c, i), lambda j: t3(j, b, d))
                    residuals[f"a={a},b={b},c={c},d={d}"] = \
                        (lhs - rhs).truncate(total_degree=degree)
    return _finish("wdvv", degree, {}, residuals)


def check_const_relation(alg, degree, table=None, max_budget=MAX_LEAF_BUDGET):
    """Full double contraction of the genus-0 third derivatives; must be
    a constant.  The constant itself is reported, not constrained."""
    st = _Setup(alg, table, max_budget)
    F = st.F(0, 0, degree + 3)
    s = st.s
    u = []
    for i in range(1, s + 1):
        Fi = F.partial((0, i))
        acc = Poly.zero()
        for k in range(s):
            for ll in range(s):
                c = st.eta_inv[k][ll]
                if c != 0:
                    acc = acc + Fi.partial((0, k + 1)).partial((0, ll + 1)) * c
        u.append(acc)
    lhs = st.pair(lambda i: u[i - 1], lambda j: u[j - 1])
    const = lhs.constant_term()
    residuals = {"all": (lhs - const).truncate(total_degree=degree)}
    return _finish("const", degree, {}, residuals,
                   details={"constant": const})


def check_string(alg, genus, degree, table=None, max_level=None,
                 max_budget=MAX_LEAF_BUDGET):
    """Unit-direction derivative identity, compared per arrow level up
    to max_level (default degree + 2) with at most one arrow factor."""
    st = _Setup(alg, table, max_budget)
    M = degree + 2 if max_level is None else max_level
    s = st.s
    lhs = Poly.zero()
    for m in range(M + 1):
        lhs = lhs + st.F(genus, m, degree + 1).partial((0, 1))
    rhs = Poly.zero()
    # level n >= 1 sources keep one arrow; the n = 0 source only
    # contributes through the primary part, since an arrow factor on
    # F_{g,m>=1} would leave two arrows after multiplying by T[1,i]
    F_primary = st.F(genus, 0, degree + 1)
    for i in range(1, s + 1):
        rhs = rhs + Poly.var(1, i) * F_primary.partial((0, i))
    for n in range(1, M):
        Fn = st.F(genus, n, degree)
        for i in range(1, s + 1):
            rhs = rhs + Poly.var(n + 1, i) * Fn.partial((n, i))
    if genus == 0:
        quad = Poly.zero()
        for i in range(s):
            for j in range(s):
                c = st.eta[i][j]
                if c != 0:
                    quad = quad + Poly.var(0, i + 1) * Poly.var(0, j + 1) * c
        rhs = rhs + quad * Fraction(1, 2)
    diff = (lhs - rhs).truncate(total_degree=degree, arrow_degree=1,
                                max_level=M)
    residuals = {f"level={m}": diff.arrow_part(1).substitute_zero(
        lambda n, i, m=m: n >= 1 and n != m) for m in range(1, M + 1)}
    residuals["level=0"] = diff.arrow_part(0)
    return _finish("string", degree, {"genus": genus, "max_level": M},
                   residuals)


def check_dilaton(alg, genus, degree, table=None, max_budget=MAX_LEAF_BUDGET):
    st = _Setup(alg, table, max_budget)
    lhs = st.F(genus, 1, degree).partial((1, 1))
    F0 = st.F(genus, 0, degree)
    rhs = Poly.zero()
    for i in range(1, st.s + 1):
        rhs = rhs + Poly.var(0, i) * F0.partial((0, i))
    rhs = rhs + F0 * (2 * genus - 2)
    if genus == 1:
        rhs = rhs + Poly.const(st.str_pi0 * Fraction(1, 24))
    residuals = {"all": (lhs - rhs).truncate(total_degree=degree)}
    return _finish("dilaton", degree, {"genus": genus}, residuals,
                   details={"str_pi0": st.str_pi0})


def check_trr0(alg, n, degree, table=None, max_budget=MAX_LEAF_BUDGET):
    """Genus-0 recursion lowering the arrow level by one."""
    st = _Setup(alg, table, max_budget)
    s = st.s
    # when n = 0 the level-n derivative is itself a level-0 derivative
    # and costs one extra leaf of budget
    A = st.F(0, n + 1, degree + 2)
    B = st.F(0, n, degree + 1 + (1 if n == 0 else 0))
    C = st.F(0, 0, degree + 3)
    residuals = {}
    for a in range(1, s + 1):
        Ba = B.partial((n, a))
        for b in range(1, s + 1):
            for c in range(1, s + 1):
                lhs = (A.partial((n + 1, a)).partial((0, b)).partial((0, c)))
                rhs = st.pair(
                    lambda i: Ba.partial((0, i)),
                    lambda j: C.partial((0, j)).partial((0, b)).partial((0, c)))
                residuals[f"a={a},b={b},c={c}"] = \
                    (lhs - rhs).truncate(total_degree=degree)
    return _finish("trr0", degree, {"n": n}, residuals)


def check_trr1(alg, n, degree, table=None, max_budget=MAX_LEAF_BUDGET):
    """Genus-1 recursion; the 1/24 term is the self-contracted pair."""
    st = _Setup(alg, table, max_budget)
    lhs_F = st.F(1, n + 1, degree)
    B = st.F(0, n, degree + 2 + (1 if n == 0 else 0))
    F1 = st.F(1, 0, degree + 1)
    residuals = {}
    term_constants = {}
    for a in range(1, st.s + 1):
        Ba = B.partial((n, a))
        lhs = lhs_F.partial((n + 1, a))
        t1 = st.pair(lambda i: Ba.partial((0, i)),
                     lambda j: F1.partial((0, j)))
        # self-contraction: sum_ij (d^3 B / dT_na dT_0i dT_0j) eta^{-1}[ij]
        t2 = Poly.zero()
        for i in range(st.s):
            for j in range(st.s):
                c = st.eta_inv[i][j]
                if c != 0:
                    t2 = t2 + Ba.partial((0, i + 1)).partial((0, j + 1)) * c
        t2 = t2 * Fraction(1, 24)
        rhs = t1 + t2
        residuals[f"a={a}"] = (lhs - rhs).truncate(total_degree=degree)
        term_constants[f"a={a}"] = [format_rational(t.constant_term())
                                    for t in (t1, t2)]
        term_constants[f"a={a}"].append(format_rational(lhs.constant_term()))
    return _finish("trr1", degree, {"n": n}, residuals,
                   details={"term_constants": term_constants})


def check_trr2(alg, n, degree, table=None, max_budget=MAX_LEAF_BUDGET):
    """Genus-2 recursion lowering the arrow level by two: eight terms
    with the coefficients 1, 1, -1, 7/10, 1/10, -1/240, 13/240, 1/960."""
    st = _Setup(alg, table, max_budget)
    s = st.s

    def contract_self(p):
        out = Poly.zero()
        for i in range(s):
            for j in range(s):
                c = st.eta_inv[i][j]
                if c != 0:
                    out = out + p.partial((0, i + 1)).partial((0, j + 1)) * c
        return out

    bump = 1 if n == 0 else 0  # a level-0 arrow derivative costs budget
    F0n = st.F(0, n, degree + 4 + bump)
    F0n1 = st.F(0, n + 1, degree + 1)
    F00 = st.F(0, 0, degree + 3)
    F10 = st.F(1, 0, degree + 2)
    F1n = st.F(1, n, degree + 1 + bump)
    F20 = st.F(2, 0, degree + 1)
    F21 = st.F(2, 1, degree)
    F2n2 = st.F(2, n + 2, degree)

    residuals = {}
    term_constants = {}
    for a in range(1, s + 1):
        lhs = F2n2.partial((n + 2, a))
        Fa = F0n.partial((n, a))
        F1a = F1n.partial((n, a))

        t1 = st.pair(lambda i: F0n1.partial((n + 1, a)).partial((0, i)),
                     lambda j: F20.partial((0, j)))
        t2 = st.pair(lambda i: Fa.partial((0, i)),
                     lambda j: F21.partial((1, j)))
        t3 = -st.pair(
            lambda i: st.pair(lambda ii: Fa.partial((0, ii)),
                              lambda jj: F00.partial((0, jj)).partial((0, i))),
            lambda j: F20.partial((0, j)))
        t4 = st.pair(
            lambda i: st.pair(lambda ii: Fa.partial((0, ii)).partial((0, i)),
                              lambda jj: F10.partial((0, jj))),
            lambda j: F10.partial((0, j))) * Fraction(7, 10)
        # t5: both eta-legs join the third derivative to one genus-1 factor
        t5 = Poly.zero()
        for i in range(s):
            for j in range(s):
                cij = st.eta_inv[i][j]
                if cij == 0:
                    continue
                for ii in range(s):
                    for jj in range(s):
                        cij2 = st.eta_inv[ii][jj]
                        if cij2 == 0:
                            continue
                        t5 = t5 + (Fa.partial((0, i + 1)).partial((0, ii + 1))
                                   * F10.partial((0, j + 1)).partial((0, jj + 1))
                                   * (cij * cij2))
        t5 = t5 * Fraction(1, 10)
        t6 = st.pair(lambda i: F1a.partial((0, i)),
                     lambda j: contract_self(F00.partial((0, j)))) \
            * Fraction(-1, 240)
        t7 = st.pair(
            lambda i: contract_self(Fa).partial((0, i)),
            lambda j: F10.partial((0, j))) * Fraction(13, 240)
        t8 = contract_self(contract_self(Fa)) * Fraction(1, 960)

        rhs = t1 + t2 + t3 + t4 + t5 + t6 + t7 + t8
        residuals[f"a={a}"] = (lhs - rhs).truncate(total_degree=degree)
        term_constants[f"a={a}"] = [format_rational(t.constant_term())
                                    for t in (t1, t2, t3, t4, t5, t6, t7, t8)]
        term_constants[f"a={a}"].append(format_rational(lhs.constant_term()))
    return _finish("trr2", degree, {"n": n}, residuals,
                   details={"term_constants": term_constants})


RELATIONS = {
    "wdvv": ("genus-0", check_wdvv),
    "const": ("genus-0", check_const_relation),
    "string": ("per-genus", check_string),
    "dilaton": ("per-genus", check_dilaton),
    "trr0": ("per-level", check_trr0),
    "trr1": ("per-level", check_trr1),
    "trr2": ("per-level", check_trr2),
}


def run_check(alg, relation, degree, genus=None, n=None, table=None,
              max_budget=MAX_LEAF_BUDGET):
    """Dispatch a single named check with the parameters it needs."""
    if relation in ("wdvv", "const"):
        fn = RELATIONS[relation][1]
        return fn(alg, degree, table=table, max_budget=max_budget)
    if relation in ("string", "dilaton"):
        if genus is None:
            raise ValueError(f"{relation} needs a genus")
        fn = RELATIONS[relation][1]
        return fn(alg, genus, degree, table=table, max_budget=max_budget)
    if relation in ("trr0", "trr1", "trr2"):
        if n is None:
            raise ValueError(f"{relation} needs an arrow level n")
        fn = RELATIONS[relation][1]
        return fn(alg, n, degree, table=table, max_budget=max_budget)
    raise ValueError(f"unknown relation {relation!r}")


def run_battery(alg, degree_genus0, degree_higher, genera=(0, 1, 2),
                ns=(0, 1, 2), table=None, max_budget=MAX_LEAF_BUDGET):
    """The full battery: WDVV and the constant relation at the genus-0
    degree; string/dilaton per genus and the recursions per level at the
    higher-genus degree."""
    if table is None:
        table = PotentialTable(alg)
    out = [check_wdvv(alg, degree_genus0, table=table, max_budget=max_budget),
           check_const_relation(alg, degree_genus0, table=table,
                                max_budget=max_budget)]
    for g in genera:
        out.append(check_string(alg, g, degree_higher, table=table,
                                max_budget=max_budget))
        out.append(check_dilaton(alg, g, degree_higher, table=table,
                                 max_budget=max_budget))
    for n in ns:
        out.append(check_trr0(alg, n, degree_higher, table=table,
                              max_budget=max_budget))
        out.append(check_trr1(alg, n, degree_higher, table=table,
                              max_budget=max_budget))
        out.append(check_trr2(alg, n, degree_higher, table=table,
                              max_budget=max_budget))
    return out
