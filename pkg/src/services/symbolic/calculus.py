"""
Covariant Calculus on Expressions

Derivations (d, d_ω, ι_ξ, L^ω_ξ, δ and [A, ·]) are pushed through
products by the graded Leibniz rule and end up as decorations of single
symbols. `normalize` is expansion followed by Koszul canonicalization.
"""

from typing import List, Optional, Sequence, Tuple

from src.services.base_service import ValidationError
from src.services.scalars import gq, sign_of
from src.services.symbolic.expression import (
    DEFAULT_TERM_CEILING,
    Angle,
    Apply,
    Atom,
    Bar,
    Br,
    Bracket,
    Contract,
    Deg,
    Expression,
    Gamma,
    Op,
    Paren,
    Sym,
    Term,
    atom_degree,
    atom_kind,
    canonical_term,
    collect,
    koszul,
)
from src.services.symbolic.registry import FieldRegistry

PAST_TOP = "past-top-degree"


class _Context:
    """Per-normalization state: registry and raised flags"""

    def __init__(self, registry: FieldRegistry):
        self.registry = registry
        self.flags: set = set()

    def degree(self, atom: Atom) -> Deg:
        return atom_degree(atom, self.registry)


# ============================================================================
# PASSING SIGNS
# ============================================================================

def op_parity_data(op: Op, ctx: _Context) -> Tuple:
    if op[0] == "br":
        d = ctx.degree(op[1])
        return d.k, d.l, d.p
    if op[0] in ("i", "L"):
        return ctx.registry.lookup(op[1]).parity.bit,
    return ()


def pass_sign(op: Op, deg: Deg, ctx: _Context) -> int:
    """Sign picked up by a derivation moving past a factor of degree deg"""
    k, l, p = deg.k, deg.l, deg.p
    kind = op[0]
    if kind == "d":
        return sign_of(k + p)
    if kind == "i":
        (q,) = op_parity_data(op, ctx)
        if ctx.registry.lookup(op[1]).transversal:
            return sign_of(q * (k + l + p))
        return sign_of(k + p + q * (k + l + p))
    if kind == "L":
        (q,) = op_parity_data(op, ctx)
        return sign_of(q * (k + l + p))
    if kind == "delta":
        return sign_of(p + k + l)
    if kind == "br":
        kb, lb, pb = op_parity_data(op, ctx)
        return sign_of(kb * (k + p) + pb * (k + l + p) + lb * (l + p))
    raise ValidationError(f"unknown decoration {op!r}")


# ============================================================================
# EXPANSION
# ============================================================================

def _product(factors: Sequence[List[Term]]) -> List[Term]:
    out = [Term(gq(1), ())]
    for options in factors:
        out = [Term(a.coefficient * b.coefficient, a.atoms + b.atoms) for a in out for b in options]
    return out


def expand_terms(expr: Expression, ctx: _Context) -> List[Term]:
    out: List[Term] = []
    for term in expr.terms:
        for t in _product([expand_atom(atom, ctx) for atom in term.atoms]):
            out.append(Term(t.coefficient * term.coefficient, t.atoms))
    return out


def expand_atom(atom: Atom, ctx: _Context) -> List[Term]:
    """Normal-form terms equal to one (possibly composite) factor"""
    if isinstance(atom, (Sym, Gamma, Br, Contract)):
        deg = ctx.degree(atom)
        if deg.k > ctx.registry.base_dim:
            ctx.flags.add(PAST_TOP)
            return []
        if deg.k < 0 or deg.l < 0 or deg.l > 4:
            return []
        return [Term(gq(1), (atom,))]
    if isinstance(atom, Paren):
        return expand_terms(atom.inner, ctx)
    if isinstance(atom, Apply):
        return apply_op_terms(atom.op, expand_terms(atom.inner, ctx), ctx)
    if isinstance(atom, Bracket):
        return bracket_terms(expand_terms(atom.left, ctx), expand_terms(atom.right, ctx), ctx)
    if isinstance(atom, Bar):
        return bar_terms(expand_terms(atom.inner, ctx), ctx)
    if isinstance(atom, Angle):
        return contract_terms(expand_terms(atom.inner, ctx), ctx)
    raise ValidationError(f"cannot expand {atom!r}")


def apply_op_terms(op: Op, terms: List[Term], ctx: _Context) -> List[Term]:
    """Graded Leibniz rule over each product"""
    out: List[Term] = []
    for term in terms:
        sign = 1
        for i, atom in enumerate(term.atoms):
            for t in apply_op_atom(op, atom, ctx):
                out.append(Term(term.coefficient * t.coefficient * sign,
                                term.atoms[:i] + t.atoms + term.atoms[i + 1:]))
            sign *= pass_sign(op, ctx.degree(atom), ctx)
    return out


def _decorate(atom: Sym, op: Op, ctx: _Context) -> List[Term]:
    # dx^n is closed, constant and annihilated by tangential contractions
    if ctx.registry.lookup(atom.name).bundle == "marker":
        return []
    if op[0] == "i" and ctx.degree(atom).k == 0:
        return []
    if op == ("delta",) and atom.ops and atom.ops[-1] == op:
        return []
    if atom.ops and op[0] == "d" and atom.ops[-1] == op:
        if op[1] is None:
            return []
        curvature = f"F[{op[1]}]"
        if curvature in ctx.registry:
            inner = Sym(atom.name, atom.ops[:-1], atom.bar)
            return [Term(gq(1), (Br(Sym(curvature), inner),))]
    new = Sym(atom.name, atom.ops + (op,), atom.bar)
    deg = ctx.degree(new)
    if deg.k > ctx.registry.base_dim:
        ctx.flags.add(PAST_TOP)
        return []
    if deg.k < 0:
        return []
    return [Term(gq(1), (new,))]


def apply_op_atom(op: Op, atom: Atom, ctx: _Context) -> List[Term]:
    if op[0] == "br":
        return _bracket_atom(op[1], atom, ctx)
    if isinstance(atom, Sym):
        return _decorate(atom, op, ctx)
    if isinstance(atom, Gamma):
        # γ^N is covariantly constant and carries no form degree
        return []
    if isinstance(atom, Br):
        left = apply_op_atom(op, atom.left, ctx)
        right = apply_op_atom(op, atom.right, ctx)
        s = pass_sign(op, ctx.degree(atom.left), ctx)
        out = [Term(t.coefficient, (Br(t.atoms[0], atom.right),)) for t in left if len(t.atoms) == 1]
        out += [Term(t.coefficient * s, (Br(atom.left, t.atoms[0]),)) for t in right if len(t.atoms) == 1]
        if any(len(t.atoms) != 1 for t in left + right):
            raise ValidationError(f"decoration {op[0]} of a bracket produced a product")
        return out
    raise ValidationError(f"decoration {op[0]} of {type(atom).__name__} is not supported")


def _bracket_atom(core: Atom, atom: Atom, ctx: _Context) -> List[Term]:
    """[core, atom] for a single normal-form atom"""
    lb = ctx.degree(core).l
    kind = atom_kind(atom, ctx.registry)
    if isinstance(atom, Gamma):
        return [] if lb == 2 else [Term(gq(1), (Br(core, atom),))]
    if isinstance(atom, Br):
        # graded Jacobi: [B,[A,X]] = [[B,A],X] + s [A,[B,X]]
        s = pass_sign(("br", core), ctx.degree(atom.left), ctx)
        out = [Term(t.coefficient, (Br(t.atoms[0], atom.right),)) for t in _bracket_atom(core, atom.left, ctx)]
        out += [Term(t.coefficient * s, (Br(atom.left, t.atoms[0]),)) for t in _bracket_atom(core, atom.right, ctx)]
        return out
    deg = ctx.degree(atom)
    if deg.l == 0 and (kind == "none" or lb == 1):
        return []
    if deg.l + lb - 2 < 0 or deg.l + lb - 2 > 4:
        return []
    return [Term(gq(1), (Br(core, atom),))]


def bracket_terms(left: List[Term], right: List[Term], ctx: _Context) -> List[Term]:
    """
    [A, X] for composite A and X. Each product in A must be V-scalar
    coefficients times one core factor of V-degree 1 or 2.

    Raises:
        ValidationError: if a product in A has no unique core
    """
    out: List[Term] = []
    for lt in left:
        scalars: List[Atom] = []
        core: Optional[Atom] = None
        sign = 1
        for atom in lt.atoms:
            deg = ctx.degree(atom)
            if deg.l == 0 and atom_kind(atom, ctx.registry) == "none":
                if core is not None:
                    sign *= koszul(ctx.degree(core), deg)
                scalars.append(atom)
                continue
            if core is not None:
                raise ValidationError("bracket with a product of V-valued factors")
            core = atom
        if core is None:
            continue
        if ctx.degree(core).l not in (1, 2):
            raise ValidationError("bracket needs a V-degree 1 or 2 left argument")
        for t in apply_op_terms(("br", core), right, ctx):
            out.append(Term(lt.coefficient * t.coefficient * sign, tuple(scalars) + t.atoms))
    return out


def bar_terms(terms: List[Term], ctx: _Context) -> List[Term]:
    """Dirac conjugate, pushed onto the single column factor of each product"""
    out: List[Term] = []
    for term in terms:
        spinors = [i for i, a in enumerate(term.atoms) if atom_kind(a, ctx.registry) != "none"]
        if not spinors:
            raise ValidationError("bar of a scalar")
        if len(spinors) > 1:
            raise ValidationError("bar of a product with several spinor factors")
        i = spinors[0]
        atoms = term.atoms[:i] + (_bar_atom(term.atoms[i], ctx),) + term.atoms[i + 1:]
        out.append(Term(term.coefficient, atoms))
    return out


def _bar_atom(atom: Atom, ctx: _Context) -> Atom:
    if isinstance(atom, Sym) and atom_kind(atom, ctx.registry) == "column":
        return Sym(atom.name, atom.ops, True)
    if isinstance(atom, Br):
        return Br(atom.left, _bar_atom(atom.right, ctx))
    raise ValidationError(f"bar needs a spinor column, got {atom!r}")


def contract_terms(terms: List[Term], ctx: _Context) -> List[Term]:
    out: List[Term] = []
    for term in terms:
        if len(term.atoms) != 1:
            raise ValidationError("⟨e, ·⟩ of a product is not supported")
        atom = term.atoms[0]
        if ctx.degree(atom).k == 0:
            continue
        out.append(Term(term.coefficient, (Contract(atom),)))
    return out


# ============================================================================
# NORMAL FORM
# ============================================================================

def normalize(expr: Expression, registry: FieldRegistry, ceiling: int = DEFAULT_TERM_CEILING) -> Expression:
    """
    Expand every composite factor, canonicalize each product and merge.

    Idempotent. Terms raised past the top form degree are dropped and the
    result carries the 'past-top-degree' flag.

    Raises:
        TermCeilingError: if the expansion passes the term ceiling
    """
    ctx = _Context(registry)
    canonical = []
    for term in expand_terms(expr, ctx):
        c = canonical_term(term, registry)
        if c is not None:
            canonical.append(c)
        if len(canonical) > ceiling:
            canonical = list(collect(canonical, ceiling, "during normalization"))
    return Expression(collect(canonical, ceiling, "during normalization"), expr.flags | frozenset(ctx.flags))


def _wrap(op: Op, x: Expression) -> Expression:
    return Expression.atom(Apply(op, x))


def apply_d(x: Expression, registry: FieldRegistry) -> Expression:
    return normalize(_wrap(("d", None), x), registry)


def apply_d_omega(x: Expression, registry: FieldRegistry, connection: str = "w") -> Expression:
    return normalize(_wrap(("d", connection), x), registry)


def apply_iota(vector: str, x: Expression, registry: FieldRegistry) -> Expression:
    return normalize(_wrap(("i", vector), x), registry)


def apply_lie(vector: str, connection: str, x: Expression, registry: FieldRegistry,
              cartan: bool = False) -> Expression:
    """
    L^{conn}_vec x. With cartan=True the result is expanded as
    ι d_conn + (-1)^q d_conn ι for a vector of parity q.
    """
    if not cartan:
        return normalize(_wrap(("L", vector, connection), x), registry)
    q = registry.lookup(vector).parity.bit
    inner = _wrap(("i", vector), _wrap(("d", connection), x))
    outer = _wrap(("d", connection), _wrap(("i", vector), x))
    return normalize(inner + outer.scaled(sign_of(q)), registry)


def apply_delta(x: Expression, registry: FieldRegistry) -> Expression:
    return normalize(_wrap(("delta",), x), registry)


def bracket(a: Expression, x: Expression, registry: FieldRegistry) -> Expression:
    return normalize(Expression.atom(Bracket(a, x)), registry)
