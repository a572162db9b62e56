"""Abstract-index tensor manipulation.

Tensors are opaque symbols carrying an ordered list of variance-marked
indices plus optional partial-derivative indices.  Nothing here knows about
components; expressions are simplified purely through index bookkeeping:
metric contraction, declared symmetries, canonical index ordering, covariant
and Lie differentiation, and exterior calculus.

Two user notations coexist.  In the ordered notation all indices live in a
single list with a minus sign marking contravariant entries
(``T([a,-b],[])`` for T_a^b), and raising or lowering an index keeps its
slot.  In the legacy notation covariant and contravariant indices live in
two separate lists (``T([a],[b])``); there, an index that is lowered and
raised again loses its original position, and this module reproduces that
historical placement.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace

import sympy as sp

from . import scalars
from .scalars import sym

KDELTA = "kdelta"


class IndexConflictError(ValueError):
    """An index label is used in a way that has no tensorial meaning."""


class TensorSyntaxError(ValueError):
    """Malformed textual tensor expression."""


# ---------------------------------------------------------------------------
# indexed objects


def split_indices(labels):
    """Split a minus-marked label list into (plain, marked) sublists."""
    plus, minus = [], []
    for item in labels:
        text = str(item)
        if text.startswith("-"):
            minus.append(text[1:])
        else:
            plus.append(text)
    return plus, minus


@dataclass(frozen=True)
class IndexedObject:
    """One tensor symbol with its indices.

    ``idx`` holds (label, contravariant?) pairs in slot order; ``deriv``
    holds partial-derivative labels (covariant, kept sorted since partials
    commute).  ``ordered`` records whether the slot order is trusted:
    objects entered with a legacy contravariant list get ``ordered=False``
    and contract with the historical placement rules.
    """

    name: str
    idx: tuple = ()
    deriv: tuple = ()
    ordered: bool = True

    def __post_init__(self):
        object.__setattr__(self, "idx", tuple((str(l), bool(u)) for l, u in self.idx))
        object.__setattr__(self, "deriv", tuple(sorted(str(d) for d in self.deriv)))

    @property
    def covariant(self):
        """Covariant slot labels, in order (the historical covi)."""
        return [l for l, up in self.idx if not up]

    @property
    def contravariant(self):
        """Contravariant slot labels, in order (the historical conti)."""
        return [l for l, up in self.idx if up]

    def labels(self):
        for l, up in self.idx:
            yield l, up
        for d in self.deriv:
            yield d, False

    def replace_slot(self, pos, slot):
        idx = list(self.idx)
        idx[pos] = slot
        return replace(self, idx=tuple(idx))

    def drop_slot_insert(self, pos, slot):
        """Legacy placement: remove slot ``pos`` and prepend the survivor to
        its variance block (covariant block first, contravariant second)."""
        idx = [s for i, s in enumerate(self.idx) if i != pos]
        if slot[1]:
            at = next((i for i, (_, up) in enumerate(idx) if up), len(idx))
        else:
            at = 0
        idx.insert(at, slot)
        return replace(self, idx=tuple(idx))

    def rename(self, mapping):
        idx = tuple((mapping.get(l, l), up) for l, up in self.idx)
        deriv = tuple(mapping.get(d, d) for d in self.deriv)
        return replace(self, idx=idx, deriv=deriv)

    def with_deriv(self, label):
        return replace(self, deriv=self.deriv + (str(label),))

    def sort_key(self):
        """Canonical ordering key; dummy names are masked so that renaming
        generated dummies cannot reorder factors."""
        slots = tuple(("*" if l.startswith("%") else l, up) for l, up in self.idx)
        ders = tuple("*" if d.startswith("%") else d for d in self.deriv)
        return (self.name, len(self.idx), slots, ders, not self.ordered)

    def __str__(self):
        if self.ordered:
            first = ",".join(("-" if up else "") + l for l, up in self.idx)
            parts = [f"[{first}]", "[]"]
        else:
            parts = [f"[{','.join(self.covariant)}]",
                     f"[{','.join(self.contravariant)}]"]
        parts.extend(self.deriv)
        return f"{self.name}({','.join(parts)})"


def iobj(name, first=(), second=(), *deriv):
    """Build an indexed object from the two-list notation.

    ``first`` is the ordered list (a leading minus marks a contravariant
    entry), ``second`` the legacy contravariant list; trailing arguments are
    derivative labels.  A non-empty ``second`` yields a legacy object.
    """
    idx = []
    for item in first:
        text = str(item)
        if text.startswith("-"):
            idx.append((text[1:], True))
        else:
            idx.append((text, False))
    legacy = [str(s) for s in second]
    idx.extend((l, True) for l in legacy)
    return IndexedObject(str(name), tuple(idx), tuple(str(d) for d in deriv),
                         ordered=not legacy)


def covariant_indices(t: IndexedObject):
    return t.covariant


def contravariant_indices(t: IndexedObject):
    return t.contravariant


# ---------------------------------------------------------------------------
# terms and expressions


def _label_census(factors):
    counts = {}
    for f in factors:
        for label, up in f.labels():
            c = counts.setdefault(label, [0, 0])
            c[1 if up else 0] += 1
    return counts


def _validate_term(factors):
    for label, (down, up) in _label_census(factors).items():
        if down + up > 2:
            raise IndexConflictError(f"index {label!r} occurs more than twice")
        if down == 2 or up == 2:
            raise IndexConflictError(
                f"index {label!r} repeated with the same variance")


def _free_indices(factors):
    free = []
    for label, (down, up) in _label_census(factors).items():
        if down + up == 1:
            free.append((label, up == 1))
    return frozenset(free)


def _dummy_labels(factors):
    return {label for label, (down, up) in _label_census(factors).items()
            if down == 1 and up == 1}


@dataclass(frozen=True)
class Term:
    coeff: sp.Expr
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeff", sp.sympify(self.coeff))
        object.__setattr__(self, "factors", tuple(self.factors))
        _validate_term(self.factors)


class IndexExpr:
    """A sum of scalar-weighted products of indexed objects."""

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        terms = tuple(t for t in terms if t.coeff != 0)
        frees = {_free_indices(t.factors) for t in terms}
        if len(frees) > 1:
            raise IndexConflictError(
                "terms of a sum carry different free indices: "
                + "; ".join(sorted(str(sorted(f)) for f in frees)))
        self.terms = terms

    # -- constructors ------------------------------------------------------

    @staticmethod
    def of(*factors, coeff=1):
        return IndexExpr((Term(coeff, factors),))

    @staticmethod
    def scalar(value):
        value = sp.sympify(value)
        return IndexExpr(() if value == 0 else (Term(value, ()),))

    # -- queries -----------------------------------------------------------

    @property
    def is_zero(self):
        return not self.terms

    def free_indices(self):
        if not self.terms:
            return frozenset()
        return _free_indices(self.terms[0].factors)

    def all_labels(self):
        out = set()
        for t in self.terms:
            for f in t.factors:
                out.update(l for l, _ in f.labels())
        return out

    def single_object(self):
        """The sole indexed object of a one-term, one-factor expression."""
        if len(self.terms) == 1 and len(self.terms[0].factors) == 1 \
                and self.terms[0].coeff == 1:
            return self.terms[0].factors[0]
        raise ValueError("expression is not a single indexed object")

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = _as_expr(other)
        return IndexExpr(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return IndexExpr(tuple(Term(-t.coeff, t.factors) for t in self.terms))

    def __sub__(self, other):
        return self + (-_as_expr(other))

    def __rsub__(self, other):
        return _as_expr(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, IndexedObject):
            other = IndexExpr.of(other)
        if isinstance(other, IndexExpr):
            out = []
            for a in self.terms:
                for b in other.terms:
                    out.append(Term(a.coeff * b.coeff, a.factors + b.factors))
            return IndexExpr(out)
        return IndexExpr(tuple(Term(t.coeff * sp.sympify(other), t.factors)
                               for t in self.terms))

    def __rmul__(self, other):
        return self * other

    def __eq__(self, other):
        if not isinstance(other, IndexExpr):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        chunks = []
        for t in self.terms:
            factors = "*".join(str(f) for f in t.factors)
            if t.coeff == 1 and factors:
                piece = factors
            elif t.coeff == -1 and factors:
                piece = "-" + factors
            else:
                coeff = scalars.render(t.coeff)
                if t.coeff.is_Add:
                    coeff = f"({coeff})"
                piece = coeff + ("*" + factors if factors else "")
            chunks.append(piece)
        text = chunks[0]
        for piece in chunks[1:]:
            text += " - " + piece[1:] if piece.startswith("-") else " + " + piece
        return text

    __repr__ = __str__


def _as_expr(x):
    if isinstance(x, IndexExpr):
        return x
    if isinstance(x, IndexedObject):
        return IndexExpr.of(x)
    return IndexExpr.scalar(x)


def _fresh_labels(used, n=1):
    out, i = [], 1
    while len(out) < n:
        cand = f"%{i}"
        if cand not in used:
            out.append(cand)
        i += 1
    return out


# ---------------------------------------------------------------------------
# context, symmetry declarations


@dataclass(frozen=True)
class SymmetryDeclaration:
    ncov: int
    ncontra: int
    cov_groups: tuple
    contra_groups: tuple


def _normalize_groups(groups, bound):
    """Groups are ('sym'|'anti', positions or 'all'); positions are 1-based."""
    out, seen = [], set()
    for kind, positions in groups:
        if kind not in ("sym", "anti"):
            raise ValueError(f"unknown symmetry kind {kind!r}")
        if positions in ("all", None):
            positions = tuple(range(1, bound + 1))
        positions = tuple(int(p) for p in positions)
        if any(p < 1 or p > bound for p in positions):
            raise ValueError(f"symmetry positions {positions} out of range 1..{bound}")
        if len(positions) < 2:
            raise ValueError("a symmetry group needs at least two positions")
        if seen & set(positions):
            raise ValueError("overlapping symmetry groups")
        seen.update(positions)
        out.append((kind, positions))
    return tuple(out)


def sym_group(*positions):
    return ("sym", positions or "all")


def anti_group(*positions):
    return ("anti", positions or "all")


@dataclass
class TensorContext:
    """Mutable-by-value manipulation context: metric name, mode flags, the
    symmetry registry, and registered vectors.  Clone before mutating when a
    context is shared."""

    metric: str = "g"
    dim: int | None = None
    torsion: bool = False
    nonmetricity: bool = False
    frame: bool = False
    geometric_wedge: bool = False
    torsion_name: str = "tau"
    nonmetricity_name: str = "mu"
    frame_connection: str = "gamma"
    symmetries: dict = field(default_factory=dict)
    vectors: set = field(default_factory=set)

    def __post_init__(self):
        self._register_builtins()

    def _register_builtins(self):
        for decl in (
            SymmetryDeclaration(2, 0, (("sym", (1, 2)),), ()),
            SymmetryDeclaration(0, 2, (), (("sym", (1, 2)),)),
        ):
            self.symmetries.setdefault((self.metric, decl.ncov, decl.ncontra), decl)
        # Christoffel symbols are symmetric in their first two (covariant)
        # indices; registering this up front lets canform use it.
        self.symmetries.setdefault(
            ("ichr1", 3, 0), SymmetryDeclaration(3, 0, (("sym", (1, 2)),), ()))
        self.symmetries.setdefault(
            ("ichr2", 2, 1), SymmetryDeclaration(2, 1, (("sym", (1, 2)),), ()))

    def clone(self):
        new = TensorContext(
            metric=self.metric, dim=self.dim, torsion=self.torsion,
            nonmetricity=self.nonmetricity, frame=self.frame,
            geometric_wedge=self.geometric_wedge,
            torsion_name=self.torsion_name,
            nonmetricity_name=self.nonmetricity_name,
            frame_connection=self.frame_connection,
            symmetries=dict(self.symmetries), vectors=set(self.vectors))
        return new

    def declare_vector(self, name):
        self.vectors.add(str(name))

    @property
    def dim_scalar(self):
        return sp.Integer(self.dim) if self.dim is not None else sym("dim")

    # -- symmetry registry -------------------------------------------------

    def decsym(self, name, ncov, ncontra, cov_groups=(), contra_groups=()):
        """Declare index symmetries for ``name`` at valence (ncov, ncontra)."""
        decl = SymmetryDeclaration(
            int(ncov), int(ncontra),
            _normalize_groups(cov_groups, ncov),
            _normalize_groups(contra_groups, ncontra))
        key = (str(name), decl.ncov, decl.ncontra)
        existing = self.symmetries.get(key)
        if existing is not None and existing != decl:
            raise ValueError(
                f"conflicting symmetry declaration for {name} at valence "
                f"({ncov},{ncontra})")
        self.symmetries[key] = decl

    def _declaration_for(self, obj: IndexedObject):
        """Match a declaration to an object.

        Ordered-notation objects prefer the single all-covariant declaration
        of their total valence (it covers every variance mixture); both fall
        back to the exact (ncov, ncontra) split.
        """
        total = len(obj.idx)
        ncov = len(obj.covariant)
        ncontra = total - ncov
        if obj.ordered:
            decl = self.symmetries.get((obj.name, total, 0))
            if decl is not None:
                return decl, "all"
        decl = self.symmetries.get((obj.name, ncov, ncontra))
        if decl is not None:
            return decl, "split"
        return None, None


# label ordering: named labels first (alphabetically), generated dummies
# (%1, %2, ...) afterwards in numeric order.

def _label_key(label):
    if label.startswith("%"):
        try:
            return (1, int(label[1:]), label)
        except ValueError:
            return (1, 0, label)
    return (0, 0, label)


def _sort_group(slots, kind):
    """Sort (label, up) slots; return (sorted, sign) with sign 0 collapsing
    an antisymmetric group holding two identical slots."""
    keyed = [( _label_key(l), up, (l, up)) for l, up in slots]
    sign = 1
    order = sorted(range(len(keyed)), key=lambda i: (keyed[i][0], keyed[i][1]))
    if kind == "anti":
        # parity of the sorting permutation
        perm = list(order)
        seen = [False] * len(perm)
        for i in range(len(perm)):
            if seen[i]:
                continue
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
        sorted_slots = [keyed[i][2] for i in order]
        for a, b in zip(sorted_slots, sorted_slots[1:]):
            if a == b:
                return sorted_slots, 0
        return sorted_slots, sign
    return [keyed[i][2] for i in order], 1


def _apply_symmetries(ctx, obj):
    """Canonically order the slots of one factor; returns (object, sign)."""
    decl, mode = ctx._declaration_for(obj)
    if decl is None:
        return obj, 1
    idx = list(obj.idx)
    sign = 1
    if mode == "all":
        groups = [(kind, [p - 1 for p in positions])
                  for kind, positions in decl.cov_groups]
    else:
        cov_positions = [i for i, (_, up) in enumerate(idx) if not up]
        con_positions = [i for i, (_, up) in enumerate(idx) if up]
        groups = [(kind, [cov_positions[p - 1] for p in positions])
                  for kind, positions in decl.cov_groups]
        groups += [(kind, [con_positions[p - 1] for p in positions])
                   for kind, positions in decl.contra_groups]
    for kind, positions in groups:
        slots = [idx[p] for p in positions]
        sorted_slots, s = _sort_group(slots, kind)
        if s == 0:
            return obj, 0
        sign *= s
        for p, slot in zip(positions, sorted_slots):
            idx[p] = slot
    return replace(obj, idx=tuple(idx)), sign


# ---------------------------------------------------------------------------
# canform


def canform(ctx: TensorContext, e) -> IndexExpr:
    """Canonical form: symmetry-sorted slots (with signs), canonically
    renamed dummies, deterministic factor order, merged terms."""
    e = _as_expr(e)
    merged = {}
    for term in e.terms:
        coeff, factors = term.coeff, list(term.factors)
        dead = False
        for _ in range(8):
            changed = False
            # canonical slot order within each factor
            for i, f in enumerate(factors):
                f2, s = _apply_symmetries(ctx, f)
                if s == 0:
                    dead = True
                    break
                if s == -1:
                    coeff = -coeff
                if f2 != f:
                    factors[i] = f2
                    changed = True
            if dead:
                break
            # deterministic factor order
            new_order = sorted(factors, key=IndexedObject.sort_key)
            if new_order != factors:
                factors = new_order
                changed = True
            # canonical dummy names, assigned left to right
            dummies = _dummy_labels(factors)
            if dummies:
                mapping, counter = {}, itertools.count(1)
                for f in factors:
                    for label, _ in f.labels():
                        if label in dummies and label not in mapping:
                            mapping[label] = f"%{next(counter)}"
                if any(k != v for k, v in mapping.items()):
                    factors = [f.rename(mapping) for f in factors]
                    changed = True
            if not changed:
                break
        if dead:
            continue
        key = tuple(factors)
        merged[key] = merged.get(key, sp.S.Zero) + coeff
    out = []
    for key in sorted(merged, key=lambda fs: tuple(f.sort_key() for f in fs)):
        coeff = sp.cancel(sp.together(merged[key]))
        if coeff != 0 and not scalars.is_zero(coeff):
            out.append(Term(coeff, key))
    return IndexExpr(out)


def equivalent(ctx, a, b) -> bool:
    """True when two expressions agree under canform."""
    return canform(ctx, _as_expr(a) - _as_expr(b)).is_zero


# ---------------------------------------------------------------------------
# contraction


def _is_contraction_metric(ctx, f):
    return (f.name == ctx.metric and len(f.idx) == 2 and not f.deriv)


def _find_dummy(f1, f2):
    """A label occurring in f1's slots and oppositely in f2's slots."""
    slots2 = {}
    for p, (l, up) in enumerate(f2.idx):
        slots2.setdefault((l, up), p)
    for p1, (l, up) in enumerate(f1.idx):
        p2 = slots2.get((l, not up))
        if p2 is not None:
            return p1, p2
    return None


def _metric_to_kdelta(f):
    """A mixed-variance metric is the Kronecker delta."""
    (l1, u1), (l2, u2) = f.idx
    cov, con = (l1, l2) if not u1 else (l2, l1)
    return IndexedObject(KDELTA, ((cov, False), (con, True)))


def contract(ctx: TensorContext, e) -> IndexExpr:
    """Eliminate every dummy pair formed with the metric (or a Kronecker
    delta), honouring ordered-notation slot preservation and legacy
    placement; the result is canonicalized."""
    e = canform(ctx, e)
    out = []
    for term in e.terms:
        coeff, factors = term.coeff, list(term.factors)
        coeff, factors = _contract_term(ctx, coeff, factors)
        if coeff != 0:
            out.append(Term(coeff, tuple(factors)))
    return canform(ctx, IndexExpr(out))


def _contract_term(ctx, coeff, factors):
    while True:
        # mixed-variance metrics become Kronecker deltas
        for i, f in enumerate(factors):
            if _is_contraction_metric(ctx, f):
                ups = [up for _, up in f.idx]
                if ups[0] != ups[1]:
                    factors[i] = _metric_to_kdelta(f)
        action = (_metric_step(ctx, factors, want_metric_target=False)
                  or _metric_step(ctx, factors, want_metric_target=True)
                  or _kdelta_step(ctx, factors))
        if action is None:
            return coeff, factors
        kind, payload = action
        if kind == "dim":
            coeff = coeff * ctx.dim_scalar
        # other actions mutate ``factors`` in place


def _metric_step(ctx, factors, want_metric_target):
    for i, f in enumerate(factors):
        if not _is_contraction_metric(ctx, f):
            continue
        for j, g in enumerate(factors):
            if i == j or g.name == KDELTA:  # deltas contract by renaming
                continue
            if _is_contraction_metric(ctx, g) != want_metric_target:
                continue
            hit = _find_dummy(f, g)
            if hit is None:
                continue
            pm, pt = hit
            survivor = f.idx[1 - pm]
            if want_metric_target and _is_contraction_metric(ctx, g):
                # metric-metric: the two survivors form a Kronecker delta
                other = g.idx[1 - pt]
                pair = (survivor, other)
                cov = next(s for s in pair if not s[1])
                con = next(s for s in pair if s[1])
                delta = IndexedObject(KDELTA, ((cov[0], False), (con[0], True)))
                for k in sorted((i, j), reverse=True):
                    del factors[k]
                factors.append(delta)
            else:
                if g.ordered:
                    factors[j] = g.replace_slot(pt, survivor)
                else:
                    factors[j] = g.drop_slot_insert(pt, survivor)
                del factors[i]
            return ("metric", None)
    return None


def _kdelta_step(ctx, factors):
    for i, f in enumerate(factors):
        if f.name != KDELTA:
            continue
        (cov, _), (con, _) = f.idx
        if cov == con:
            del factors[i]
            return ("dim", None)
        for j, g in enumerate(factors):
            if i == j:
                continue
            # delta^con_cov: rename a covariant occurrence of `con` to `cov`,
            # or a contravariant occurrence of `cov` to `con`.
            for p, (l, up) in enumerate(g.idx):
                if l == con and not up:
                    factors[j] = g.replace_slot(p, (cov, False))
                    del factors[i]
                    return ("kdelta", None)
                if l == cov and up:
                    factors[j] = g.replace_slot(p, (con, True))
                    del factors[i]
                    return ("kdelta", None)
            if con in g.deriv:
                deriv = list(g.deriv)
                deriv[deriv.index(con)] = cov
                factors[j] = replace(g, deriv=tuple(deriv))
                del factors[i]
                return ("kdelta", None)
    return None


# ---------------------------------------------------------------------------
# partial differentiation (Leibniz over factors; coefficients are constants)


def partial(e, label) -> IndexExpr:
    """Append a partial-derivative index to an expression."""
    e = _as_expr(e)
    out = []
    for term in e.terms:
        for i, f in enumerate(term.factors):
            factors = list(term.factors)
            factors[i] = f.with_deriv(label)
            out.append(Term(term.coeff, factors))
    return IndexExpr(out)


# ---------------------------------------------------------------------------
# Christoffel symbols


def ichr1(ctx: TensorContext, cov, deriv=()) -> IndexExpr:
    """First-kind Christoffel symbol expanded into metric derivatives."""
    if len(cov) != 3:
        raise ValueError("ichr1 takes exactly three covariant indices")
    h, k, l = (str(x) for x in cov)
    g = ctx.metric
    half = sp.Rational(1, 2)
    expr = (IndexExpr.of(iobj(g, [k, l], (), h), coeff=half)
            + IndexExpr.of(iobj(g, [l, h], (), k), coeff=half)
            + IndexExpr.of(iobj(g, [h, k], (), l), coeff=-half))
    for d in deriv:
        expr = partial(expr, d)
    return expr


def ichr2(ctx: TensorContext, cov, contra, deriv=()) -> IndexExpr:
    """Second-kind Christoffel symbol expanded into metric derivatives."""
    if len(cov) != 2 or len(contra) != 1:
        raise ValueError("ichr2 takes two covariant and one contravariant index")
    h, k = (str(x) for x in cov)
    j = str(contra[0])
    used = {h, k, j} | {str(d) for d in deriv}
    (m,) = _fresh_labels(used)
    expr = IndexExpr.of(iobj(ctx.metric, [f"-{j}", f"-{m}"])) * ichr1(ctx, [h, k, m])
    for d in deriv:
        expr = partial(expr, d)
    return expr


def expand_christoffels(ctx: TensorContext, e) -> IndexExpr:
    """Replace opaque ichr1/ichr2 symbols by their metric expansions."""
    e = _as_expr(e)
    out = IndexExpr()
    for term in e.terms:
        piece = IndexExpr.scalar(term.coeff)
        used = set()
        for f in term.factors:
            used.update(l for l, _ in f.labels())
        for f in term.factors:
            if f.name == "ichr1" and len(f.idx) == 3:
                sub = ichr1(ctx, [l for l, _ in f.idx], f.deriv)
            elif f.name == "ichr2" and len(f.idx) == 3:
                cov = [l for l, up in f.idx if not up]
                con = [l for l, up in f.idx if up]
                sub = ichr2(ctx, cov, con, f.deriv)
            else:
                piece = piece * f
                continue
            sub = _refresh_dummies(sub, used)
            used.update(sub.all_labels())
            piece = piece * sub
        out = out + piece
    return out


def _refresh_dummies(e, used):
    """Rename internal dummies of ``e`` away from the labels in ``used``.

    Free indices of ``e`` are left alone even when they are generated
    (%-prefixed) labels: they pair with indices outside the expression.
    """
    free = {l for l, _ in e.free_indices()}
    clash = sorted(l for l in e.all_labels()
                   if l.startswith("%") and l in used and l not in free)
    if not clash:
        return e
    fresh = _fresh_labels(used | e.all_labels(), len(clash))
    mapping = dict(zip(clash, fresh))
    return IndexExpr(tuple(Term(t.coeff, tuple(f.rename(mapping) for f in t.factors))
                           for t in e.terms))


# ---------------------------------------------------------------------------
# covariant and Lie derivatives


def _connection(ctx: TensorContext, a, b, c) -> IndexExpr:
    """Connection coefficient c_ab^c as used by covdiff.

    Plain coordinate mode yields the opaque second-kind Christoffel symbol;
    with torsion/nonmetricity the contortion and nonmetricity contributions
    are emitted expanded (c = Gamma - kappa - nu); in frame mode the frame
    connection replaces the Christoffel symbol (c = gamma - nu).
    """
    g = ctx.metric
    if ctx.frame:
        base = IndexExpr.of(iobj(ctx.frame_connection, [a, b], [c]))
    else:
        base = IndexExpr.of(iobj("ichr2", [a, b], [c]))
    expr = base
    if ctx.torsion and not ctx.frame:
        tau = ctx.torsion_name
        half = sp.Rational(1, 2)
        n, p = _fresh_labels({a, b, c}, 2)
        kt2 = (IndexExpr.of(iobj(tau, [a, b], [c]), coeff=-half)
               + IndexExpr.of(iobj(tau, [n, a], [p]), coeff=-half)
               * iobj(g, [b, p]) * iobj(g, [], [n, c])
               + IndexExpr.of(iobj(tau, [n, b], [p]), coeff=-half)
               * iobj(g, [a, p]) * iobj(g, [], [n, c]))
        expr = expr - kt2
    if ctx.nonmetricity:
        mu = ctx.nonmetricity_name
        half = sp.Rational(1, 2)
        (n,) = _fresh_labels({a, b, c})
        nm2 = (IndexExpr.of(iobj(mu, [b]), coeff=-half)
               * IndexedObject(KDELTA, ((a, False), (c, True)))
               + IndexExpr.of(iobj(mu, [a]), coeff=-half)
               * IndexedObject(KDELTA, ((b, False), (c, True)))
               + IndexExpr.of(iobj(mu, [n]), coeff=half)
               * iobj(g, [a, b]) * iobj(g, [], [n, c]))
        expr = expr - nm2
    return expr


def covdiff(ctx: TensorContext, e, k) -> IndexExpr:
    """Covariant derivative by index ``k``: the partial-derivative term plus
    one connection term per index (+ for contravariant, - for covariant;
    derivative indices count as covariant)."""
    e = _as_expr(e)
    k = str(k)
    if any(k == label for t in e.terms for f in t.factors
           for label, _ in f.labels()):
        raise IndexConflictError(f"derivative index {k!r} collides with an "
                                 f"existing label")
    out = partial(e, k)
    for term in e.terms:
        used = {l for f in term.factors for l, _ in f.labels()} | {k}
        for i, f in enumerate(term.factors):
            others = list(term.factors)
            for p, (x, up) in enumerate(f.idx):
                (m,) = _fresh_labels(used)
                swapped = others[:i] + [f.replace_slot(p, (m, up))] + others[i + 1:]
                if up:
                    conn = _connection(ctx, m, k, x)
                else:
                    conn = _connection(ctx, x, k, m)
                conn = _refresh_dummies(conn, used | {m})
                piece = IndexExpr((Term(term.coeff, swapped),)) * conn
                out = out + piece if up else out - piece
            for x in f.deriv:
                (m,) = _fresh_labels(used)
                deriv = list(f.deriv)
                deriv[deriv.index(x)] = m
                swapped = others[:i] + [replace(f, deriv=tuple(deriv))] + others[i + 1:]
                conn = _refresh_dummies(_connection(ctx, x, k, m), used | {m})
                out = out - IndexExpr((Term(term.coeff, swapped),)) * conn
    return out


def liediff(ctx: TensorContext, e, vname) -> IndexExpr:
    """Lie derivative along the registered vector ``vname``."""
    vname = str(vname)
    if vname not in ctx.vectors:
        raise ValueError(f"{vname!r} is not registered as a vector "
                         f"(use TensorContext.declare_vector)")
    e = _as_expr(e)
    out = IndexExpr()
    for term in e.terms:
        used = {l for f in term.factors for l, _ in f.labels()}
        (h,) = _fresh_labels(used)
        # transport term V^h dT/dx^h
        dterm = partial(IndexExpr((term,)), h)
        out = out + IndexExpr.of(iobj(vname, [], [h])) * dterm
        for i, f in enumerate(term.factors):
            others = list(term.factors)
            for p, (x, up) in enumerate(f.idx):
                swapped = others[:i] + [f.replace_slot(p, (h, up))] + others[i + 1:]
                piece = IndexExpr((Term(term.coeff, swapped),))
                if up:
                    out = out - piece * iobj(vname, [], [x], h)
                else:
                    out = out + piece * iobj(vname, [], [h], x)
            for x in f.deriv:
                deriv = list(f.deriv)
                deriv[deriv.index(x)] = h
                swapped = others[:i] + [replace(f, deriv=tuple(deriv))] + others[i + 1:]
                piece = IndexExpr((Term(term.coeff, swapped),))
                out = out + piece * iobj(vname, [], [h], x)
    return out


# ---------------------------------------------------------------------------
# exterior calculus


def _form_degree(ctx, e, operand="form"):
    e = _as_expr(e)
    degree = None
    for term in e.terms:
        if len(term.factors) != 1:
            raise ValueError(f"{operand} must be a sum of single indexed objects")
        f = term.factors[0]
        if f.deriv or any(up for _, up in f.idx):
            raise ValueError(f"{operand} must be fully covariant")
        p = len(f.idx)
        if degree is None:
            degree = p
        elif degree != p:
            raise ValueError(f"{operand} mixes degrees {degree} and {p}")
        if p >= 2:
            decl, _ = ctx._declaration_for(f)
            ok = decl is not None and any(
                kind == "anti" and len(positions) == p
                for kind, positions in decl.cov_groups)
            if not ok:
                raise ValueError(
                    f"{f.name} is not declared fully antisymmetric")
    if degree is None:
        raise ValueError(f"{operand} is the zero expression; degree unknown")
    return degree


def wedge(ctx: TensorContext, a, b) -> IndexExpr:
    """Wedge product of two forms.

    The tensorial convention divides the alternating sum by (p+q)!; with
    ``ctx.geometric_wedge`` set, by p!q! instead.
    """
    a, b = _as_expr(a), _as_expr(b)
    p = _form_degree(ctx, a, "left operand")
    q = _form_degree(ctx, b, "right operand")
    if ctx.dim is not None and p + q > ctx.dim:
        return IndexExpr()
    norm = (sp.Rational(1, math.factorial(p) * math.factorial(q))
            if ctx.geometric_wedge
            else sp.Rational(1, math.factorial(p + q)))
    out = []
    for ta in a.terms:
        fa = ta.factors[0]
        for tb in b.terms:
            fb = tb.factors[0]
            labels = [l for l, _ in fa.idx] + [l for l, _ in fb.idx]
            if len(set(labels)) != len(labels):
                raise IndexConflictError("wedge operands share index labels")
            coeff = ta.coeff * tb.coeff * norm
            for perm in itertools.permutations(range(p + q)):
                sign = _perm_sign(perm)
                la = [(labels[perm[i]], False) for i in range(p)]
                lb = [(labels[perm[p + i]], False) for i in range(q)]
                out.append(Term(
                    sign * coeff,
                    (replace(fa, idx=tuple(la)), replace(fb, idx=tuple(lb)))))
    return canform(ctx, IndexExpr(out))


def extdiff(ctx: TensorContext, a, label) -> IndexExpr:
    """Exterior derivative; ``label`` becomes the new covariant index."""
    a = _as_expr(a)
    p = _form_degree(ctx, a, "operand")
    label = str(label)
    if label in a.all_labels():
        raise IndexConflictError(f"index {label!r} already appears in the form")
    if ctx.dim is not None and p + 1 > ctx.dim:
        return IndexExpr()
    norm = (sp.Rational(1, math.factorial(p)) if ctx.geometric_wedge
            else sp.Rational(1, math.factorial(p + 1)))
    out = []
    for term in a.terms:
        f = term.factors[0]
        labels = [label] + [l for l, _ in f.idx]
        for perm in itertools.permutations(range(p + 1)):
            sign = _perm_sign(perm)
            slots = tuple((labels[perm[i + 1]], False) for i in range(p))
            obj = replace(f, idx=slots, deriv=f.deriv + (labels[perm[0]],))
            out.append(Term(sign * term.coeff * norm, (obj,)))
    return canform(ctx, IndexExpr(out))


def inner(ctx: TensorContext, vname, a) -> IndexExpr:
    """Contraction of a vector with the first slot of a form."""
    vname = str(vname)
    a = _as_expr(a)
    p = _form_degree(ctx, a, "operand")
    if p < 1:
        raise ValueError("cannot contract a vector with a 0-form")
    out = IndexExpr()
    for term in a.terms:
        f = term.factors[0]
        (h,) = _fresh_labels({l for l, _ in f.labels()})
        obj = f.replace_slot(0, (h, False))
        out = out + IndexExpr((Term(term.coeff, (iobj(vname, [], [h]), obj)),))
    return canform(ctx, out)


def _perm_sign(perm):
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


# ---------------------------------------------------------------------------
# textual tensor expressions (CLI surface)


def parse_tensor_expr(text: str) -> IndexExpr:
    """Parse ``T([a,-b],[c],d)``-style expression text."""
    parser = _TensorParser(text)
    return parser.parse()


class _TensorParser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def error(self, message):
        raise TensorSyntaxError(f"{message} (at position {self.pos})")

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eat(self, char):
        if self.peek() != char:
            self.error(f"expected {char!r}")
        self.pos += 1

    def name(self):
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum()
                                             or self.text[self.pos] == "_"):
            self.pos += 1
        if start == self.pos:
            self.error("expected a name")
        return self.text[start:self.pos]

    def integer(self):
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected an integer")
        return int(self.text[start:self.pos])

    def parse(self):
        e = self.sum()
        self.skip()
        if self.pos != len(self.text):
            self.error("trailing input")
        return e

    def sum(self):
        negative = False
        if self.peek() == "-":
            self.eat("-")
            negative = True
        elif self.peek() == "+":
            self.eat("+")
        e = self.product()
        if negative:
            e = -e
        while self.peek() in ("+", "-"):
            op = self.peek()
            self.eat(op)
            rhs = self.product()
            e = e + rhs if op == "+" else e - rhs
        return e

    def product(self):
        e = self.atom()
        while self.peek() == "*":
            self.eat("*")
            e = e * self.atom()
        return e

    def atom(self):
        c = self.peek()
        if c == "(":
            self.eat("(")
            e = self.sum()
            self.eat(")")
            return e
        if c.isdigit():
            num = self.integer()
            if self.peek() == "/":
                self.eat("/")
                den = self.integer()
                return IndexExpr.scalar(sp.Rational(num, den))
            return IndexExpr.scalar(num)
        name = self.name()
        self.eat("(")
        first = self.label_list()
        self.eat(",")
        second = self.label_list()
        deriv = []
        while self.peek() == ",":
            self.eat(",")
            deriv.append(self.name())
        self.eat(")")
        for label in itertools.chain(first, second, deriv):
            if label.lstrip("-").startswith("%"):
                self.error("labels beginning with % are reserved for dummies")
        return IndexExpr.of(iobj(name, first, second, *deriv))

    def label_list(self):
        self.eat("[")
        labels = []
        while self.peek() != "]":
            if labels:
                self.eat(",")
            self.skip()
            mark = ""
            if self.peek() == "-":
                self.eat("-")
                mark = "-"
            labels.append(mark + self.name())
        self.eat("]")
        return labels
