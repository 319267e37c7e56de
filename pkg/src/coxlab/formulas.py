"""Tiny first-order layer over a Coxeter group.

Terms are built from variables, word constants, products and inverses;
formulas from equality, boolean connectives and quantifiers.  Evaluation
relativizes every quantifier to the metric ball ``B_radius``, so results
are *bounded* truth values: sound for existential witnesses, refutations
only "at radius R".  The structural checkers in :mod:`coxlab.probes` are
the real decision procedures; this module exists so they can be
cross-validated against a dumb evaluator on desk-sized balls.
"""

from __future__ import annotations

from dataclasses import dataclass

from .system import CoxeterSystem
from .words import GroupElement, ball, identity, normalize


class FormulaError(ValueError):
    pass


# ---------------------------------------------------------------- terms

class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Const(Term):
    # a word in generator names ("" or "e" for the identity)
    word: str


@dataclass(frozen=True)
class Mul(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Inv(Term):
    arg: Term


E = Const("e")


def mul(*terms: Term) -> Term:
    if not terms:
        return E
    acc = terms[0]
    for t in terms[1:]:
        acc = Mul(acc, t)
    return acc


def conj(t: Term, by: Term) -> Term:
    """t^by = by^-1 * t * by."""
    return Mul(Mul(Inv(by), t), by)


def eval_term(sys: CoxeterSystem, term: Term, env: dict) -> GroupElement:
    if isinstance(term, Var):
        try:
            return env[term.name]
        except KeyError:
            raise FormulaError("unbound variable %r" % term.name)
    if isinstance(term, Const):
        return normalize(sys, term.word)
    if isinstance(term, Mul):
        return eval_term(sys, term.left, env) * eval_term(sys, term.right, env)
    if isinstance(term, Inv):
        return eval_term(sys, term.arg, env).inverse()
    raise FormulaError("not a term: %r" % (term,))


# ------------------------------------------------------------- formulas

class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    parts: tuple

    def __init__(self, *parts):
        object.__setattr__(self, "parts", tuple(parts))


@dataclass(frozen=True)
class Or(Formula):
    parts: tuple

    def __init__(self, *parts):
        object.__setattr__(self, "parts", tuple(parts))


@dataclass(frozen=True)
class Implies(Formula):
    premise: Formula
    conclusion: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


def Ne(left: Term, right: Term) -> Formula:
    return Not(Eq(left, right))


def commutes(a: Term, b: Term) -> Formula:
    return Eq(Mul(a, b), Mul(b, a))


def order_two(t: Term) -> Formula:
    return And(Ne(t, E), Eq(Mul(t, t), E))


def _term_vars(term: Term, out: set):
    if isinstance(term, Var):
        out.add(term.name)
    elif isinstance(term, Mul):
        _term_vars(term.left, out)
        _term_vars(term.right, out)
    elif isinstance(term, Inv):
        _term_vars(term.arg, out)


def free_vars(formula: Formula) -> frozenset:
    out: set = set()

    def walk(f, bound):
        if isinstance(f, Eq):
            local: set = set()
            _term_vars(f.left, local)
            _term_vars(f.right, local)
            out.update(local - bound)
        elif isinstance(f, Not):
            walk(f.body, bound)
        elif isinstance(f, (And, Or)):
            for p in f.parts:
                walk(p, bound)
        elif isinstance(f, Implies):
            walk(f.premise, bound)
            walk(f.conclusion, bound)
        elif isinstance(f, (Forall, Exists)):
            walk(f.body, bound | {f.var})
        else:
            raise FormulaError("not a formula: %r" % (f,))

    walk(formula, set())
    return frozenset(out)


@dataclass(frozen=True)
class BoundedResult:
    value: bool
    radius: int

    def __bool__(self):
        return self.value

    def __repr__(self):
        return "BoundedResult(%s, bounded at %d)" % (self.value, self.radius)


def fo_eval(sys: CoxeterSystem, formula: Formula, assignment=None,
            radius: int = 3) -> BoundedResult:
    """Evaluate with every quantifier ranging over B_radius."""
    env = dict(assignment or {})
    missing = free_vars(formula) - set(env)
    if missing:
        raise FormulaError("unassigned free variables: %s" % sorted(missing))
    domain, _ = ball(sys, radius)

    def ev(f, env):
        if isinstance(f, Eq):
            return eval_term(sys, f.left, env) == eval_term(sys, f.right, env)
        if isinstance(f, Not):
            return not ev(f.body, env)
        if isinstance(f, And):
            return all(ev(p, env) for p in f.parts)
        if isinstance(f, Or):
            return any(ev(p, env) for p in f.parts)
        if isinstance(f, Implies):
            return (not ev(f.premise, env)) or ev(f.conclusion, env)
        if isinstance(f, Forall):
            for el in domain:
                env2 = dict(env)
                env2[f.var] = el
                if not ev(f.body, env2):
                    return False
            return True
        if isinstance(f, Exists):
            for el in domain:
                env2 = dict(env)
                env2[f.var] = el
                if ev(f.body, env2):
                    return True
            return False
        raise FormulaError("not a formula: %r" % (f,))

    return BoundedResult(ev(formula, env), radius)


# --------------------------------------------------- stock formula shapes

def psi_formula(var: str = "x") -> Formula:
    """Reflection recognition: x is an involution and no other involution's
    centralizer (restricted to involutions) swallows that of x."""
    x, y, z = Var(var), Var("_y"), Var("_z")
    inner = Forall("_z", Implies(And(order_two(z), commutes(z, x)),
                                 commutes(z, y)))
    rival = Exists("_y", And(order_two(y), Ne(y, x), inner))
    return And(order_two(x), Not(rival))


def phi_gamma_formula(sys: CoxeterSystem, names=None) -> Formula:
    """Basis-likeness of a tuple (x_0 .. x_{n-1}) against the commutation
    graph: involutions, the graph's commutation pattern, and no member
    conjugate into products of conjugates of the others."""
    n = sys.rank
    if names is None:
        names = tuple("x%d" % i for i in range(n))
    if len(names) != n:
        raise FormulaError("need %d variable names" % n)
    xs = [Var(nm) for nm in names]
    parts = [order_two(x) for x in xs]
    for i in range(n):
        for j in range(i + 1, n):
            parts.append(Ne(xs[i], xs[j]))
            if sys.comm[i][j]:
                parts.append(commutes(xs[i], xs[j]))
            else:
                parts.append(Not(commutes(xs[i], xs[j])))
    ys = [Var("_y%d" % i) for i in range(n)]
    for ell in range(n):
        rest = [j for j in range(n) if j != ell]
        for bits in range(1 << len(rest)):
            factors = [conj(xs[j], ys[j])
                       for pos, j in enumerate(rest) if bits >> pos & 1]
            body = Ne(conj(xs[ell], ys[ell]), mul(*factors))
            for yv in reversed(ys):
                body = Forall(yv.name, body)
            parts.append(body)
    return And(*parts)
