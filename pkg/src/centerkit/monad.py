"""The centralizer monad on ind-objects and its bimonadic structure.

For an ind-object ``X`` the centralizer is ``Z(X) = sum_a abar (x) X (x) a``
over the simple labels, with recorded slot decomposition.  This module builds
the monad data (unit, multiplication), the universal dinatural family ``rho``,
the couplings ``partial``, the free half-braidings, the op-lax structure
``(Z2, Z0)`` and the counit attached to a half-braiding.  Everything is a
concrete matrix family in the canonical fiber bases of :mod:`centerkit.ind`.

A :class:`Context` fixes the category, the basis mode (algebraic or unitary)
and the tolerance; mixing contexts is an error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fusion import (
    ComposeError,
    FusionCategory,
    Word,
    cap,
    compose,
    cup,
    dual_morphism,
    dual_word,
    identity,
    onb,
    tensor,
    word,
)
from .ind import (
    ALGEBRAIC,
    UNITARY,
    IndMorphism,
    IndObject,
    Product,
    compose_ind,
    dagger_ind,
    expand_factor,
    factor_embedding,
    ind_identity,
    ind_object,
    amplify_left,
    amplify_right,
    product_map,
    promote_word_factor,
    unit_ind,
)

__all__ = [
    "Context",
    "CentralizerDecomposition",
    "HalfBraiding",
    "ZModuleAction",
    "Z_object",
    "Z_morphism",
    "eta",
    "mu",
    "rho",
    "partial",
    "free_half_braiding",
    "Z2",
    "Z0",
    "epsilon",
    "factor_through_Z",
    "natural_extension",
    "monad_law_residuals",
    "bimonad_law_residuals",
]


class Context:
    """Computation context: category, basis mode, tolerance.

    Immutable by convention and safe to share; carries the caches for the
    monad data so repeated constructions are cheap.
    """

    def __init__(self, category: FusionCategory, mode: str = ALGEBRAIC, tolerance: float = 1e-9):
        if mode not in (ALGEBRAIC, UNITARY):
            raise ValueError(f"unknown mode {mode!r}")
        self.category = category
        self.mode = mode
        self.tolerance = float(tolerance)
        self._cache: dict = {}

    def product(self, factors) -> Product:
        return Product(self.category, factors, self.mode)

    def check(self, other: "Context"):
        if other is not self:
            raise ComposeError("mixing computation contexts (category/mode) is not allowed")

    def __repr__(self):
        return f"Context({self.category.name!r}, mode={self.mode!r}, tol={self.tolerance:g})"


class CentralizerDecomposition:
    """``Z(X)`` with its recorded identification ``sum_a abar (x) X (x) a``."""

    def __init__(self, ctx: Context, base: IndObject):
        self.ctx = ctx
        self.base = base
        cat = ctx.category
        self.summands: dict[str, Product] = {}
        for a in cat.labels:
            self.summands[a] = ctx.product((dual_word(cat, (a,)) if a != cat.unit else (),
                                            base,
                                            word(cat, (a,))))
        dims = {u: 0 for u in cat.labels}
        self.offsets: dict[str, dict[str, int]] = {}
        for a in cat.labels:
            self.offsets[a] = dict(dims)
            for u in cat.labels:
                dims[u] += self.summands[a].dim(u)
        self.total = ind_object(cat, dims)

    def summand(self, a: str) -> Product:
        return self.summands[a]

    def injection(self, a: str) -> IndMorphism:
        """Isometric inclusion of the slot-``a`` summand into the total."""
        cat = self.ctx.category
        small = self.summands[a].to_ind()
        blocks = {}
        for u in cat.labels:
            n = small.m(u)
            if n == 0:
                continue
            m = np.zeros((self.total.m(u), n), dtype=complex)
            off = self.offsets[a][u]
            m[off: off + n, :] = np.eye(n)
            blocks[u] = m
        return IndMorphism(small, self.total, blocks)

    def projection(self, a: str) -> IndMorphism:
        return dagger_ind(self.injection(a))

    def __repr__(self):
        return f"Z({self.base!r})"


def Z_object(ctx: Context, x: IndObject) -> CentralizerDecomposition:
    key = ("Z", x)
    hit = ctx._cache.get(key)
    if hit is None:
        hit = CentralizerDecomposition(ctx, x)
        ctx._cache[key] = hit
    return hit


def Z_morphism(ctx: Context, f: IndMorphism) -> IndMorphism:
    """Functorial action: ``Z(f) = sum_a id (x) f (x) id`` slotwise."""
    cat = ctx.category
    zx = Z_object(ctx, f.domain)
    zy = Z_object(ctx, f.codomain)
    out = IndMorphism(zx.total, zy.total, {})
    for a in cat.labels:
        sx, sy = zx.summand(a), zy.summand(a)
        if sx.to_ind().is_zero() or sy.to_ind().is_zero():
            continue
        ab = dual_word(cat, (a,)) if a != cat.unit else ()
        aw = word(cat, (a,))
        pm = product_map(sx, sy, [("mor", identity(cat, ab), 1, 1),
                                  ("ind", f),
                                  ("mor", identity(cat, aw), 1, 1)])
        out = out + compose_ind(zy.injection(a), compose_ind(pm, zx.projection(a)))
    return out


def eta(ctx: Context, x: IndObject) -> IndMorphism:
    """Monad unit: the unit-slot inclusion ``X -> Z(X)``."""
    return Z_object(ctx, x).injection(ctx.category.unit)


def _narrow_expand(ctx: Context, pre, zd: CentralizerDecomposition, a: str, post):
    """Isometry from ``[pre, Z-total, post]`` fibers onto ``[pre, abar, X, a, post]``.

    Returns ``(expanded_product, map)`` where ``map`` composes the slot
    projection with the recorded unfolding of the summand.
    """
    s = zd.summand(a)
    s_ind = s.to_ind()
    narrowed = ctx.product(tuple(pre) + (s_ind,) + tuple(post))
    k = len(pre)
    _, emb = factor_embedding(narrowed, k, zd.total, zd.offsets[a])
    expanded, unfold = expand_factor(narrowed, k, s)
    return expanded, compose_ind(unfold, dagger_ind(emb))


def mu(ctx: Context, x: IndObject) -> IndMorphism:
    """Monad multiplication ``Z(Z(X)) -> Z(X)``: contract adjacent slot pairs
    through orthonormal fusion vertices."""
    key = ("mu", x)
    hit = ctx._cache.get(key)
    if hit is not None:
        return hit
    cat = ctx.category
    zd = Z_object(ctx, x)
    z2 = Z_object(ctx, zd.total)
    out = IndMorphism(z2.total, zd.total, {})
    for b in cat.labels:
        bw = word(cat, (b,))
        bb = dual_word(cat, (b,)) if b != cat.unit else ()
        for a in cat.labels:
            if zd.summand(a).to_ind().is_zero():
                continue
            expanded, pull = _narrow_expand(ctx, (bb,), zd, a, (bw,))
            pull = compose_ind(pull, z2.projection(b))
            aw = word(cat, (a,))
            for c in cat.labels:
                if zd.summand(c).to_ind().is_zero():
                    continue
                for om in onb(cat, c, aw + bw):
                    wd = dual_morphism(cat, om)
                    pm = product_map(expanded, zd.summand(c),
                                     [("mor", wd, 2, 1),
                                      ("ind", None),
                                      ("mor", om.dagger(), 2, 1)])
                    out = out + compose_ind(zd.injection(c), compose_ind(pm, pull))
    ctx._cache[key] = out
    return out


def rho(ctx: Context, x: IndObject, u_word) -> IndMorphism:
    """The universal dinatural component ``ubar (x) X (x) u -> Z(X)``."""
    cat = ctx.category
    uw = word(cat, u_word)
    zd = Z_object(ctx, x)
    dom = ctx.product((dual_word(cat, uw), x, uw))
    out = IndMorphism(dom.to_ind(), zd.total, {})
    for a in cat.labels:
        if zd.summand(a).to_ind().is_zero():
            continue
        for om in onb(cat, a, uw):
            pm = product_map(dom, zd.summand(a),
                             [("mor", dual_morphism(cat, om), 1, 1),
                              ("ind", None),
                              ("mor", om.dagger(), 1, 1)])
            out = out + compose_ind(zd.injection(a), pm)
    return out


def partial(ctx: Context, x: IndObject, y: IndObject) -> IndMorphism:
    """The coupling ``X (x) Y -> Y (x) Z(X)``: a cap feeds each support label
    of ``Y`` into its own slot of the centralizer."""
    cat = ctx.category
    zd = Z_object(ctx, x)
    dom = ctx.product((x, y))
    cod = ctx.product((y, zd.total))
    out = IndMorphism(dom.to_ind(), cod.to_ind(), {})
    for c in y.support:
        cw = word(cat, (c,))
        cb = dual_word(cat, (c,)) if c != cat.unit else ()
        dom_c = ctx.product((x, cw))
        exp_c = ctx.product((cw, cb, x, cw))
        pm = product_map(dom_c, exp_c,
                         [("mor", cap(cat, c), 0, 2),
                          ("ind", None),
                          ("mor", identity(cat, cw), 1, 1)])
        nar = ctx.product((cw, zd.summand(c).to_ind()))
        _, unfold = expand_factor(nar, 1, zd.summand(c))
        nar2, emb = factor_embedding(nar, 1, zd.total, zd.offsets[c])
        for m in range(y.m(c)):
            _, pro_dom = promote_word_factor(dom_c, 1, y, c, m)
            _, pro_cod = promote_word_factor(nar2, 0, y, c, m)
            term = compose_ind(pro_cod, compose_ind(emb, compose_ind(
                dagger_ind(unfold), compose_ind(pm, dagger_ind(pro_dom)))))
            out = out + term
    return out


def free_half_braiding(ctx: Context, x: IndObject) -> "HalfBraiding":
    """The free half-braiding on ``Z(X)``.

    In unitary mode this is the dimension-weighted family (each ``(a, b)``
    component carries ``(d_a/d_b)^{1/2}``), which is unitary; in algebraic
    mode the weights are omitted and only the half-braiding axioms hold.
    """
    cat = ctx.category
    zd = Z_object(ctx, x)
    e: dict[str, IndMorphism] = {}
    for u in cat.labels:
        if u == cat.unit:
            continue
        uw = word(cat, (u,))
        dom = ctx.product((zd.total, uw))
        cod = ctx.product((uw, zd.total))
        out = IndMorphism(dom.to_ind(), cod.to_ind(), {})
        for a in cat.labels:
            if zd.summand(a).to_ind().is_zero():
                continue
            ab = dual_word(cat, (a,)) if a != cat.unit else ()
            aw = word(cat, (a,))
            exp_d, pull = _narrow_expand(ctx, (), zd, a, (uw,))
            for b in cat.labels:
                if zd.summand(b).to_ind().is_zero():
                    continue
                oms = onb(cat, b, aw + uw)
                if not oms:
                    continue
                exp_c, unfold_c = _narrow_expand(ctx, (uw,), zd, b, ())
                push = dagger_ind(unfold_c)
                weight = 1.0
                if ctx.mode == UNITARY:
                    weight = math.sqrt(cat.qdim[a] / cat.qdim[b])
                for om in oms:
                    lam = compose(tensor(identity(cat, uw), dual_morphism(cat, om)),
                                  tensor(cap(cat, u), identity(cat, ab)))
                    pm = product_map(exp_d, exp_c,
                                     [("mor", lam, 1, 2),
                                      ("ind", None),
                                      ("mor", om.dagger(), 2, 1)])
                    out = out + weight * compose_ind(push, compose_ind(pm, pull))
        e[u] = out
    return HalfBraiding(ctx, zd.total, e, unitary=(ctx.mode == UNITARY))


def Z2(ctx: Context, x1: IndObject, x2: IndObject) -> IndMorphism:
    """Op-lax tensorator ``Z(X1 (x) X2) -> Z(X1) (x) Z(X2)``."""
    cat = ctx.category
    p12 = ctx.product((x1, x2))
    w12 = p12.to_ind()
    zin = Z_object(ctx, w12)
    z1 = Z_object(ctx, x1)
    z2_ = Z_object(ctx, x2)
    dom = zin.total
    cod = ctx.product((z1.total, z2_.total))
    out = IndMorphism(dom, cod.to_ind(), {})
    for a in cat.labels:
        if zin.summand(a).to_ind().is_zero():
            continue
        ab = dual_word(cat, (a,)) if a != cat.unit else ()
        aw = word(cat, (a,))
        # unfold the middle to [abar, X1, X2, a], then split with a cap
        exp0, unfold0 = expand_factor(zin.summand(a), 1, p12)
        pull = compose_ind(unfold0, zin.projection(a))
        exp1 = ctx.product((ab, x1, aw, ab, x2, aw))
        pm = product_map(exp0, exp1,
                         [("mor", identity(cat, ab), 1, 1),
                          ("ind", None),
                          ("mor", cap(cat, a), 0, 2),
                          ("ind", None),
                          ("mor", identity(cat, aw), 1, 1)])
        # fold both groups and embed into the two totals
        s1 = z1.summand(a)
        s2 = z2_.summand(a)
        narrow1 = ctx.product((s1.to_ind(), ab, x2, aw))
        _, unfold1 = expand_factor(narrow1, 0, s1)
        narrow2 = ctx.product((s1.to_ind(), s2.to_ind()))
        _, unfold2 = expand_factor(narrow2, 1, s2)
        fold = compose_ind(dagger_ind(unfold2), dagger_ind(unfold1))
        m1, e1 = factor_embedding(narrow2, 0, z1.total, z1.offsets[a])
        _, e2 = factor_embedding(m1, 1, z2_.total, z2_.offsets[a])
        out = out + compose_ind(e2, compose_ind(e1, compose_ind(fold, compose_ind(pm, pull))))
    return out


def Z0(ctx: Context) -> IndMorphism:
    """Op-lax counit ``Z(1) -> 1``: the sum of the cup adjoints."""
    cat = ctx.category
    one = unit_ind(cat)
    zd = Z_object(ctx, one)
    out = IndMorphism(zd.total, one, {})
    for a in cat.labels:
        if zd.summand(a).to_ind().is_zero():
            continue
        ab = dual_word(cat, (a,)) if a != cat.unit else ()
        aw = word(cat, (a,))
        # the unit ind factor carries no letters, so reorder it harmlessly
        reordered = ctx.product((ab, aw, one))
        pm = product_map(reordered, ctx.product((one,)),
                         [("mor", cup(cat, a).dagger(), 2, 0), ("ind", None)])
        out = out + compose_ind(pm, zd.projection(a))
    return out


def epsilon(ctx: Context, hb: "HalfBraiding") -> IndMorphism:
    """Counit of the free/forget adjunction: ``Z(M) -> M`` from a half-braiding."""
    ctx.check(hb.ctx)
    cat = ctx.category
    m = hb.carrier
    zd = Z_object(ctx, m)
    out = IndMorphism(zd.total, m, {})
    for a in cat.labels:
        if zd.summand(a).to_ind().is_zero():
            continue
        ab = dual_word(cat, (a,)) if a != cat.unit else ()
        aw = word(cat, (a,))
        gamma = hb.component(a)
        dom_g = ctx.product((m, aw))
        cod_g = ctx.product((aw, m))
        amp = amplify_left(ab, gamma, dom_g, cod_g)
        close = product_map(ctx.product((ab, aw, m)), ctx.product((m,)),
                            [("mor", cup(cat, a).dagger(), 2, 0), ("ind", None)])
        out = out + compose_ind(close, compose_ind(amp, zd.projection(a)))
    return out


def factor_through_Z(ctx: Context, x: IndObject, y: IndObject,
                     xi: dict[str, IndMorphism],
                     xi_words: dict[Word, IndMorphism] | None = None) -> IndMorphism:
    """The unique ``r: Z(X) -> Y`` with ``xi_U = (id_U (x) r) partial_{X,U}``.

    ``xi`` maps each simple label ``u`` to a fiber map ``X (x) u -> u (x) X``
    -- shaped family; values supplied on longer words via ``xi_words`` are
    checked against the natural (additive) extension and a violation raises
    ``ComposeError`` naming the offending word.
    """
    cat = ctx.category
    zd = Z_object(ctx, x)
    out = IndMorphism(zd.total, y, {})
    for a in cat.labels:
        if zd.summand(a).to_ind().is_zero():
            continue
        comp = xi.get(a)
        aw = word(cat, (a,))
        ab = dual_word(cat, (a,)) if a != cat.unit else ()
        if comp is None:
            continue
        dom_g = ctx.product((x, aw))
        cod_g = ctx.product((aw, y))
        amp = amplify_left(ab, comp, dom_g, cod_g)
        close = product_map(ctx.product((ab, aw, y)), ctx.product((y,)),
                            [("mor", cup(cat, a).dagger(), 2, 0), ("ind", None)])
        out = out + compose_ind(close, compose_ind(amp, zd.projection(a)))
    if xi_words:
        for w, val in xi_words.items():
            ext = natural_extension(ctx, x, y, xi, w)
            if (ext - val).norm() > ctx.tolerance:
                raise ComposeError(f"family is not natural at word {w!r}")
    return out


def natural_extension(ctx: Context, x: IndObject, y: IndObject,
                      xi: dict[str, IndMorphism], w) -> IndMorphism:
    """Additive extension of a simple-indexed family to a word.

    ``sum_{c, t} (t (x) id) xi_c (id (x) t*)`` over the fusion trees of the
    word; this is the unique extension natural in the argument.
    """
    cat = ctx.category
    ww = word(cat, w)
    dom = ctx.product((x, ww))
    cod = ctx.product((ww, y))
    out = IndMorphism(dom.to_ind(), cod.to_ind(), {})
    for c in cat.labels:
        comp = xi.get(c)
        if comp is None:
            continue
        cw = word(cat, (c,))
        for t in onb(cat, c, ww):
            pre = product_map(dom, ctx.product((x, cw)),
                              [("ind", None), ("mor", t.dagger(), 1, 1)])
            post = product_map(ctx.product((cw, y)), cod,
                               [("mor", t, 1, 1), ("ind", None)])
            out = out + compose_ind(post, compose_ind(comp, pre))
    return out


def monad_law_residuals(ctx: Context, x: IndObject) -> dict[str, float]:
    """Residuals of the unit and associativity laws of the monad at ``x``."""
    key = ("monad_laws", x)
    hit = ctx._cache.get(key)
    if hit is not None:
        return hit
    zd = Z_object(ctx, x)
    m = mu(ctx, x)
    ident = ind_identity(zd.total)
    out = {
        "unit_left": (compose_ind(m, Z_morphism(ctx, eta(ctx, x))) - ident).norm(),
        "unit_right": (compose_ind(m, eta(ctx, zd.total)) - ident).norm(),
        "assoc": (compose_ind(m, Z_morphism(ctx, m))
                  - compose_ind(m, mu(ctx, zd.total))).norm(),
    }
    ctx._cache[key] = out
    return out


def bimonad_law_residuals(ctx: Context, x1: IndObject, x2: IndObject,
                          x3: IndObject) -> dict[str, float]:
    """Residuals of the op-lax laws: counit triangles, unit and multiplication
    compatibility, and coassociativity of the tensorator."""
    key = ("bimonad_laws", x1, x2, x3)
    hit = ctx._cache.get(key)
    if hit is not None:
        return hit
    cat = ctx.category
    one = unit_ind(cat)
    z0 = Z0(ctx)
    z1 = Z_object(ctx, x1)
    z2_ = Z_object(ctx, x2)
    out: dict[str, float] = {}

    # counit triangles
    zin_l = Z_object(ctx, ctx.product((one, x1)).to_ind())
    lhs = compose_ind(amplify_right(z0, ctx.product((Z_object(ctx, one).total,)),
                                    ctx.product((one,)), z1.total),
                      Z2(ctx, one, x1))
    out["counit_left"] = (IndMorphism(zin_l.total, z1.total, lhs.blocks)
                          - ind_identity(z1.total)).norm()
    zin_r = Z_object(ctx, ctx.product((x1, one)).to_ind())
    rhs = compose_ind(amplify_left(z1.total, z0, ctx.product((Z_object(ctx, one).total,)),
                                   ctx.product((one,))),
                      Z2(ctx, x1, one))
    out["counit_right"] = (IndMorphism(zin_r.total, z1.total, rhs.blocks)
                           - ind_identity(z1.total)).norm()

    # unit is op-lax
    p12 = ctx.product((x1, x2))
    x12 = p12.to_ind()
    lhs = compose_ind(Z2(ctx, x1, x2), eta(ctx, x12))
    step = amplify_right(eta(ctx, x1), ctx.product((x1,)), ctx.product((z1.total,)), x2)
    step2 = amplify_left(z1.total, eta(ctx, x2), ctx.product((x2,)), ctx.product((z2_.total,)))
    out["eta_oplax"] = (lhs - compose_ind(step2, step)).norm()

    # multiplication is op-lax
    lhs = compose_ind(Z2(ctx, x1, x2), mu(ctx, x12))
    zz = Z2(ctx, z1.total, z2_.total)
    route = compose_ind(zz, Z_morphism(ctx, Z2(ctx, x1, x2)))
    zz1 = Z_object(ctx, z1.total)
    zz2 = Z_object(ctx, z2_.total)
    merge = product_map(ctx.product((zz1.total, zz2.total)),
                        ctx.product((z1.total, z2_.total)),
                        [("ind", mu(ctx, x1)), ("ind", mu(ctx, x2))])
    out["mu_oplax"] = (lhs - compose_ind(merge, route)).norm()

    # coassociativity
    p23 = ctx.product((x2, x3))
    x23 = p23.to_ind()
    z3 = Z_object(ctx, x3)
    left_in = ctx.product((x12, x3))
    right_in = ctx.product((x1, x23))
    _, ul = expand_factor(left_in, 0, p12)
    _, ur = expand_factor(right_in, 1, p23)
    assoc = compose_ind(dagger_ind(ur), ul)
    lhs = compose_ind(amplify_right(Z2(ctx, x1, x2), ctx.product((Z_object(ctx, x12).total,)),
                                    ctx.product((z1.total, z2_.total)), z3.total),
                      Z2(ctx, x12, x3))
    rhs = compose_ind(amplify_left(z1.total, Z2(ctx, x2, x3),
                                   ctx.product((Z_object(ctx, x23).total,)),
                                   ctx.product((z2_.total, z3.total))),
                      compose_ind(Z2(ctx, x1, x23), Z_morphism(ctx, assoc)))
    out["coassoc"] = (lhs - rhs).norm()
    ctx._cache[key] = out
    return out


@dataclass
class HalfBraiding:
    """A half-braiding: per-label invertible fiber maps ``M (x) a -> a (x) M``.

    Values on words are generated by the braid relation; the axioms compare
    that against the natural additive extension.  ``unitary`` marks families
    meant to satisfy ``e* e = id`` in the unitary mode.
    """

    ctx: Context
    carrier: IndObject
    e: dict[str, IndMorphism]
    unitary: bool = False

    def component(self, a: str) -> IndMorphism:
        if a == self.ctx.category.unit:
            p = self.ctx.product((self.carrier, ()))
            return ind_identity(p.to_ind())
        return self.e[a]

    def on_word(self, w) -> IndMorphism:
        """Braid-composed value on a tensor word."""
        cat = self.ctx.category
        ww = word(cat, w)
        if len(ww) == 0:
            return self.component(cat.unit)
        if len(ww) == 1:
            return self.component(ww[0])
        head, tail = ww[:1], ww[1:]
        m = self.carrier
        first = amplify_right(self.component(head[0]),
                              self.ctx.product((m, head)),
                              self.ctx.product((head, m)),
                              tail)
        rest = amplify_left(head, self.on_word(tail),
                            self.ctx.product((m, tail)),
                            self.ctx.product((tail, m)))
        return compose_ind(rest, first)

    def on_word_additive(self, w) -> IndMorphism:
        """Naturality-generated value on a word (independent route)."""
        return natural_extension(self.ctx, self.carrier, self.carrier,
                                 {a: self.component(a) for a in self.ctx.category.labels
                                  if a == self.ctx.category.unit or a in self.e},
                                 w)

    def on_ind(self, y: IndObject) -> IndMorphism:
        """Value on an ind-object argument, assembled over its support."""
        ctx = self.ctx
        cat = ctx.category
        m = self.carrier
        dom = ctx.product((m, y))
        cod = ctx.product((y, m))
        out = IndMorphism(dom.to_ind(), cod.to_ind(), {})
        for c in y.support:
            cw = word(cat, (c,))
            comp = self.component(c)
            for k in range(y.m(c)):
                _, pd = promote_word_factor(ctx.product((m, cw)), 1, y, c, k)
                _, pc = promote_word_factor(ctx.product((cw, m)), 0, y, c, k)
                out = out + compose_ind(pc, compose_ind(comp, dagger_ind(pd)))
        return out

    def inverse_component(self, a: str) -> IndMorphism:
        """Numeric inverse of the ``a``-component."""
        comp = self.component(a)
        blocks = {}
        for u, b in comp.blocks.items():
            if b.shape[0] != b.shape[1]:
                raise ComposeError("component fibers are not square")
            blocks[u] = np.linalg.inv(b)
        return IndMorphism(comp.codomain, comp.domain, blocks)

    def braid_residual(self) -> float:
        """Max deviation between the braid route and the additive route on
        all two-letter words."""
        cat = self.ctx.category
        worst = 0.0
        for a in cat.labels:
            for b in cat.labels:
                if a == cat.unit and b == cat.unit:
                    continue
                lhs = self.on_word((a, b))
                rhs = self.on_word_additive((a, b))
                worst = max(worst, (lhs - rhs).norm())
        return worst

    def unitarity_residual(self) -> float:
        worst = 0.0
        for a in self.ctx.category.labels:
            comp = self.component(a)
            dev = compose_ind(dagger_ind(comp), comp) - ind_identity(comp.domain)
            worst = max(worst, dev.norm())
        return worst


@dataclass
class ZModuleAction:
    """A module over the centralizer monad: ``tau: Z(M) -> M``."""

    ctx: Context
    carrier: IndObject
    tau: IndMorphism

    def law_residuals(self) -> tuple[float, float]:
        """(unit law, associativity) residuals of the module axioms."""
        ctx = self.ctx
        unit_dev = (compose_ind(self.tau, eta(ctx, self.carrier)) - ind_identity(self.carrier)).norm()
        assoc_dev = (compose_ind(self.tau, mu(ctx, self.carrier))
                     - compose_ind(self.tau, Z_morphism(ctx, self.tau))).norm()
        return unit_dev, assoc_dev
