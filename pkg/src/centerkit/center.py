"""Half-braiding/module conversions and the Drinfeld-center solver.

The conversions realise the isomorphism between half-braidings and modules
over the centralizer monad; both directions are explicit and mutually
inverse on the stored data.  The center solver enumerates the simple objects
of the center as the irreducible blocks of the tube algebra, realised
concretely as the module endomorphisms of the direct sum of all free modules,
and certifies each block through the module laws and the braiding axioms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fusion import ComposeError, FusionCategory, cap, cup, identity, word, dual_word
from .ind import (
    UNITARY,
    IndMorphism,
    IndObject,
    amplify_left,
    amplify_right,
    compose_ind,
    dagger_ind,
    expand_factor,
    factor_embedding,
    ind_identity,
    ind_object,
    product_map,
    simple_ind,
)
from .monad import (
    Context,
    HalfBraiding,
    ZModuleAction,
    Z_morphism,
    Z_object,
    epsilon,
    mu,
)
from .parallel import parallel_map

__all__ = [
    "CenterSimple",
    "CenterSolverError",
    "phi",
    "psi",
    "psi_inverse_formula",
    "tensor_hb",
    "tensor_action_route",
    "intertwiner_space",
    "is_isomorphic",
    "solve_center",
]


class CenterSolverError(RuntimeError):
    """Raised when the block decomposition cannot be resolved numerically."""


def phi(hb: HalfBraiding, check: bool = True) -> ZModuleAction:
    """Module action attached to a half-braiding (the adjunction counit)."""
    ctx = hb.ctx
    if check and hb.braid_residual() > 1e3 * ctx.tolerance:
        raise ComposeError("input family violates the half-braiding axioms")
    return ZModuleAction(ctx, hb.carrier, epsilon(ctx, hb))


def psi(zm: ZModuleAction, check: bool = True) -> HalfBraiding:
    """Half-braiding attached to a module action over the centralizer monad."""
    ctx = zm.ctx
    cat = ctx.category
    if check:
        ru, ra = zm.law_residuals()
        if max(ru, ra) > 1e3 * ctx.tolerance:
            raise ComposeError("input violates the module laws")
    m = zm.carrier
    zd = Z_object(ctx, m)
    e: dict[str, IndMorphism] = {}
    for c in cat.labels:
        if c == cat.unit:
            continue
        cw = word(cat, (c,))
        cb = dual_word(cat, cw)
        dom = ctx.product((m, cw))
        exp = ctx.product((cw, cb, m, cw))
        pm = product_map(dom, exp,
                         [("mor", cap(cat, c), 0, 2),
                          ("ind", None),
                          ("mor", identity(cat, cw), 1, 1)])
        tau_c = compose_ind(zm.tau, zd.injection(c))
        amp = amplify_left(cw, tau_c, zd.summand(c), ctx.product((m,)))
        e[c] = compose_ind(amp, pm)
    hb = HalfBraiding(ctx, m, e, unitary=False)
    if ctx.mode == UNITARY and hb.unitarity_residual() <= 1e3 * ctx.tolerance:
        hb.unitary = True
    return hb


def psi_inverse_formula(hb: HalfBraiding, a: str) -> IndMorphism:
    """Closed-form inverse of a braiding component via the dual component.

    ``(cap* (x) id (x) id)(e_{abar} (x) id)(id (x) id (x) cup)`` inverts the
    ``a``-component; compare with the numeric inverse for certification.
    """
    ctx = hb.ctx
    cat = ctx.category
    m = hb.carrier
    aw = word(cat, (a,))
    ab = dual_word(cat, aw)
    s1 = product_map(ctx.product((aw, m)), ctx.product((aw, m, ab, aw)),
                     [("mor", identity(cat, aw), 1, 1),
                      ("ind", None),
                      ("mor", cup(cat, a), 0, 2)])
    inner = amplify_right(hb.component(cat.dual[a]),
                          ctx.product((m, ab)), ctx.product((ab, m)), aw)
    s2 = amplify_left(aw, inner,
                      ctx.product((m, ab, aw)), ctx.product((ab, m, aw)))
    s3 = product_map(ctx.product((aw, ab, m, aw)), ctx.product((m, aw)),
                     [("mor", cap(cat, a).dagger(), 2, 0),
                      ("ind", None),
                      ("mor", identity(cat, aw), 1, 1)])
    return compose_ind(s3, compose_ind(s2, s1))


def tensor_hb(h1: HalfBraiding, h2: HalfBraiding, check: bool = True) -> HalfBraiding:
    """Tensor product of half-braidings on the collapsed product carrier."""
    ctx = h1.ctx
    ctx.check(h2.ctx)
    cat = ctx.category
    m, n = h1.carrier, h2.carrier
    pmn = ctx.product((m, n))
    carrier = pmn.to_ind()
    e: dict[str, IndMorphism] = {}
    for c in cat.labels:
        if c == cat.unit:
            continue
        cw = word(cat, (c,))
        inner = amplify_left(m, h2.component(c),
                             ctx.product((n, cw)), ctx.product((cw, n)))
        outer = amplify_right(h1.component(c),
                              ctx.product((m, cw)), ctx.product((cw, m)), n)
        raw = compose_ind(outer, inner)
        # re-express on the collapsed carrier
        dnar = ctx.product((carrier, cw))
        _, ud = expand_factor(dnar, 0, pmn)
        cnar = ctx.product((cw, carrier))
        _, uc = expand_factor(cnar, 1, pmn)
        e[c] = compose_ind(dagger_ind(uc), compose_ind(raw, ud))
    out = HalfBraiding(ctx, carrier, e, unitary=h1.unitary and h2.unitary)
    if check and out.braid_residual() > 1e3 * ctx.tolerance:
        raise ComposeError("tensor product failed the half-braiding axioms")
    return out


def tensor_action_route(h1: HalfBraiding, h2: HalfBraiding) -> ZModuleAction:
    """The module action on the product carrier through the op-lax tensorator."""
    from .monad import Z2

    ctx = h1.ctx
    ctx.check(h2.ctx)
    m, n = h1.carrier, h2.carrier
    carrier = ctx.product((m, n)).to_ind()
    t1 = phi(h1, check=False).tau
    t2 = phi(h2, check=False).tau
    z2m = Z2(ctx, m, n)
    zm_, zn_ = Z_object(ctx, m), Z_object(ctx, n)
    join = product_map(ctx.product((zm_.total, zn_.total)), ctx.product((m, n)),
                       [("ind", t1), ("ind", t2)])
    return ZModuleAction(ctx, carrier, compose_ind(join, z2m))


# -- intertwiners and isomorphism ----------------------------------------------


def intertwiner_space(h1: HalfBraiding, h2: HalfBraiding) -> list[IndMorphism]:
    """Basis of the space of half-braiding morphisms ``h1 -> h2``.

    Solves ``(id_a (x) f) e1_a = e2_a (f (x) id_a)`` over all simple labels
    as one linear system on the fiber maps.
    """
    ctx = h1.ctx
    ctx.check(h2.ctx)
    cat = ctx.category
    m1, m2 = h1.carrier, h2.carrier
    unknowns = []
    for u in cat.labels:
        n1, n2 = m1.m(u), m2.m(u)
        for i in range(n2):
            for j in range(n1):
                unknowns.append((u, i, j))
    if not unknowns:
        return []

    def as_indmorphism(vec) -> IndMorphism:
        blocks: dict[str, np.ndarray] = {}
        for (u, i, j), val in zip(unknowns, vec):
            if m2.m(u) and m1.m(u):
                blocks.setdefault(u, np.zeros((m2.m(u), m1.m(u)), dtype=complex))
                blocks[u][i, j] += val
        return IndMorphism(m1, m2, {k: v for k, v in blocks.items() if np.any(v)})

    rows = []
    for col, (u, i, j) in enumerate(unknowns):
        f = as_indmorphism(np.eye(len(unknowns))[col])
        resid_cols = []
        for a in cat.labels:
            if a == cat.unit:
                continue
            aw = word(cat, (a,))
            left = amplify_left(aw, f, ctx.product((m1,)), ctx.product((m2,)))
            right = amplify_right(f, ctx.product((m1,)), ctx.product((m2,)), aw)
            dev = compose_ind(left, h1.component(a)) - compose_ind(h2.component(a), right)
            for uu in cat.labels:
                resid_cols.append(dev.block(uu).ravel())
        rows.append(np.concatenate(resid_cols) if resid_cols else np.zeros(0))
    sysmat = np.array(rows).T
    if sysmat.size == 0:
        null = np.eye(len(unknowns))
    else:
        _, s, vh = np.linalg.svd(sysmat)
        scale = (s[0] if s.size else 1.0) or 1.0
        rank = int(np.sum(s > 1e-9 * max(scale, 1.0)))
        null = vh[rank:].conj()
    return [as_indmorphism(v) for v in null]


def is_isomorphic(h1: HalfBraiding, h2: HalfBraiding, tries: int = 8):
    """Decide isomorphism of half-braidings; return (flag, witness or None)."""
    space = intertwiner_space(h1, h2)
    dims1 = {u: h1.carrier.m(u) for u in h1.ctx.category.labels}
    dims2 = {u: h2.carrier.m(u) for u in h2.ctx.category.labels}
    if dims1 != dims2 or not space:
        return False, None
    rng = np.random.Generator(np.random.Philox(key=0xC0FFEE))
    for _ in range(tries):
        coeffs = rng.standard_normal(len(space)) + 1j * rng.standard_normal(len(space))
        f = None
        for c, basis in zip(coeffs, space):
            term = complex(c) * basis
            f = term if f is None else f + term
        ok = True
        for u, n in dims1.items():
            if n == 0:
                continue
            b = f.block(u)
            if np.linalg.matrix_rank(b, tol=1e-9 * max(1.0, float(np.max(np.abs(b))))) < n:
                ok = False
                break
        if ok:
            return True, f
    return False, None


# -- tube algebra and the center solver ------------------------------------


@dataclass
class CenterSimple:
    """A simple object of the center: half-braiding, dimension, ordinal tag."""

    hb: HalfBraiding
    qdim: float
    id_tag: int

    @property
    def carrier(self) -> IndObject:
        return self.hb.carrier


class _Tube:
    """The tube algebra as module endomorphisms of the sum of free modules."""

    def __init__(self, ctx: Context):
        cat = ctx.category
        self.ctx = ctx
        self.cat = cat
        self.frees = {x: Z_object(ctx, simple_ind(cat, x)) for x in cat.labels}
        dims = {u: 0 for u in cat.labels}
        self.offsets: dict[str, dict[str, int]] = {}
        for x in cat.labels:
            self.offsets[x] = dict(dims)
            for u in cat.labels:
                dims[u] += self.frees[x].total.m(u)
        self.w = ind_object(cat, dims)
        self.basis = []  # (y, x, a, k): the k-th vertex of C(x, abar y a)
        for y in cat.labels:
            for x in cat.labels:
                for a in cat.labels:
                    s = self.frees[y].summand(a)
                    n = s.dim(x)
                    for k in range(n):
                        self.basis.append((y, x, a, k))
        # slot-diagonal weighting intertwining the bare multiplication action
        # with the unitary (dimension-weighted) one; conjugating by it makes
        # the realised algebra closed under the plain adjoint
        self.dweight = self._slot_weight()
        self.dweight_inv = self._slot_weight(invert=True)
        self.mats = parallel_map(lambda b: self._realize(*b), self.basis)
        self.action = self._module_action()

    def _slot_weight(self, invert: bool = False) -> IndMorphism:
        cat = self.cat
        blocks = {}
        for u in cat.labels:
            nw = self.w.m(u)
            if nw == 0:
                continue
            diag = np.ones(nw, dtype=complex)
            for x in cat.labels:
                zx = self.frees[x]
                for a in cat.labels:
                    na = zx.summand(a).dim(u)
                    if na == 0:
                        continue
                    off = self.offsets[x][u] + zx.offsets[a][u]
                    val = math.sqrt(cat.qdim[a])
                    diag[off: off + na] = 1.0 / val if invert else val
            blocks[u] = np.diag(diag)
        return IndMorphism(self.w, self.w, blocks)

    def _unit_map(self, y: str, x: str, a: str, k: int) -> IndMorphism:
        """The adjunct morphism ``x -> Z(y)`` of a tube basis vector."""
        zy = self.frees[y]
        col = np.zeros((zy.total.m(x), 1), dtype=complex)
        col[zy.offsets[a][x] + k, 0] = 1.0
        return IndMorphism(simple_ind(self.cat, x), zy.total, {x: col})

    def _realize(self, y, x, a, k) -> IndMorphism:
        """Module map ``Z(x) -> Z(y)`` induced by the basis vector, as a map
        of the ambient sum."""
        ctx = self.ctx
        v = self._unit_map(y, x, a, k)
        t = compose_ind(mu(ctx, simple_ind(self.cat, y)), Z_morphism(ctx, v))
        amb = self._ambient(t, x, y)
        return compose_ind(self.dweight_inv, compose_ind(amb, self.dweight))

    def _ambient(self, t: IndMorphism, x: str, y: str) -> IndMorphism:
        blocks = {}
        for u in self.cat.labels:
            nb = self.w.m(u)
            tb = t.block(u)
            if nb == 0 or not tb.size or not np.any(tb):
                continue
            m = np.zeros((nb, nb), dtype=complex)
            ox, oy = self.offsets[x][u], self.offsets[y][u]
            m[oy: oy + tb.shape[0], ox: ox + tb.shape[1]] = tb
            blocks[u] = m
        return IndMorphism(self.w, self.w, blocks)

    def _module_action(self) -> IndMorphism:
        """The module action on the ambient sum of free modules."""
        ctx = self.ctx
        cat = self.cat
        zw = Z_object(ctx, self.w)
        out = IndMorphism(zw.total, self.w, {})
        for x in cat.labels:
            zx = self.frees[x]
            zzx = Z_object(ctx, zx.total)
            # narrow each slot of Z(W) onto the x-part
            split = IndMorphism(zw.total, zzx.total, {})
            for a in cat.labels:
                nar = zzx.summand(a)
                if nar.to_ind().is_zero():
                    continue
                _, emb = factor_embedding(nar, 1, self.w, self.offsets[x])
                split = split + compose_ind(zzx.injection(a),
                                            compose_ind(dagger_ind(emb), zw.projection(a)))
            incl = IndMorphism(zx.total, self.w, {
                u: self._ambient(ind_identity(zx.total), x, x).block(u)[:, self.offsets[x][u]: self.offsets[x][u] + zx.total.m(u)]
                for u in cat.labels if zx.total.m(u)
            })
            out = out + compose_ind(incl, compose_ind(mu(ctx, simple_ind(cat, x)), split))
        return compose_ind(self.dweight_inv, compose_ind(out, Z_morphism(ctx, self.dweight)))

    def coefficients(self, t: IndMorphism) -> np.ndarray:
        """Coordinates of an ambient module map in the tube basis."""
        t = compose_ind(self.dweight, compose_ind(t, self.dweight_inv))
        out = np.zeros(len(self.basis), dtype=complex)
        for i, (y, x, a, k) in enumerate(self.basis):
            u = x
            b = t.blocks.get(u)
            if b is None:
                continue
            # adjunct: restrict to the unit slot of Z(x) inside the x-block
            zx = self.frees[x]
            col = self.offsets[x][u] + zx.offsets[self.cat.unit][u]
            row = self.offsets[y][u] + self.frees[y].offsets[a][u] + k
            out[i] = b[row, col]
        return out


def solve_center(cat: FusionCategory, seed: int = 0, tolerance: float = 1e-9,
                 gap: float = 1e-6, max_tries: int = 12) -> list[CenterSimple]:
    """Enumerate the simple objects of the center of a fusion category.

    Decomposes the tube algebra (module endomorphisms of the sum of all free
    modules) into matrix blocks by spectral analysis of a seeded random
    self-adjoint central element, extracts one simple module per block, and
    converts it into a unitary half-braiding.  Deterministic for a fixed seed.
    """
    ctx = Context(cat, mode=UNITARY, tolerance=tolerance)
    tube = _Tube(ctx)
    n = len(tube.basis)
    rng = np.random.Generator(np.random.Philox(key=seed))

    # products and structure constants
    prods = [[compose_ind(a, b) for b in tube.mats] for a in tube.mats]
    sc = np.zeros((n, n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            sc[i, j] = tube.coefficients(prods[i][j])

    # centre of the algebra: [z, T_j] = 0 for all j
    eqs = []
    for j in range(n):
        block = sc[:, j, :] - sc[j, :, :]
        eqs.append(block)
    sysmat = np.concatenate(eqs, axis=1)  # rows: i (unknown coeff), cols: equations
    _, s, vh = np.linalg.svd(sysmat.T)
    rank = int(np.sum(s > 1e-9 * (s[0] if s.size else 1.0)))
    centre = vh[rank:].conj()
    n_blocks = centre.shape[0]
    if n_blocks == 0:
        raise CenterSolverError("tube algebra has trivial centre; no blocks found")

    def lincomb(coeffs) -> IndMorphism:
        out = IndMorphism(tube.w, tube.w, {})
        for c, t in zip(coeffs, tube.mats):
            out = out + complex(c) * t
        return out

    def hermitian(t: IndMorphism) -> IndMorphism:
        return 0.5 * (t + dagger_ind(t))

    def cluster(vals, threshold):
        vals = np.sort(vals)
        groups = [[vals[0]]] if len(vals) else []
        for v in vals[1:]:
            if v - groups[-1][-1] > threshold:
                groups.append([v])
            else:
                groups[-1].append(v)
        return [float(np.mean(g)) for g in groups]

    def spectral_projectors(z: IndMorphism, centres, threshold):
        projs = []
        for c in centres:
            blocks = {}
            for u in cat.labels:
                b = z.blocks.get(u)
                if b is None:
                    if tube.w.m(u):
                        blocks[u] = np.zeros((tube.w.m(u), tube.w.m(u)), dtype=complex)
                    continue
                vals, vecs = np.linalg.eigh(b)
                sel = np.abs(vals - c) <= threshold
                blocks[u] = (vecs[:, sel] @ vecs[:, sel].conj().T)
            projs.append(IndMorphism(tube.w, tube.w, blocks))
        return projs

    last_gap = float("inf")
    for attempt in range(max_tries):
        coeffs = (rng.standard_normal(n_blocks) + 1j * rng.standard_normal(n_blocks)) @ centre
        z = hermitian(lincomb(coeffs))
        vals = np.concatenate([np.linalg.eigvalsh(z.block(u))
                               for u in cat.labels if tube.w.m(u)])
        centres = cluster(vals, gap)
        if len(centres) == n_blocks:
            gaps = np.diff(np.sort(np.asarray(centres)))
            if gaps.size == 0 or np.min(gaps) > 10 * gap:
                break
            last_gap = float(np.min(gaps)) if gaps.size else last_gap
    else:
        raise CenterSolverError(
            f"could not separate {n_blocks} central blocks; smallest spectral gap {last_gap:.3e}")
    projs = spectral_projectors(z, centres, gap)

    simples = []
    for p in projs:
        # dimension of the corner p A p gives the block size
        flat = []
        for t in tube.mats:
            corner = compose_ind(p, compose_ind(t, p))
            flat.append(np.concatenate([corner.block(u).ravel() for u in cat.labels]))
        fm = np.array(flat)
        svals = np.linalg.svd(fm, compute_uv=False)
        corner_dim = int(np.sum(svals > 1e-8 * (svals[0] if svals.size and svals[0] > 0 else 1.0)))
        ni = int(round(math.isqrt(corner_dim)))
        if ni * ni != corner_dim:
            raise CenterSolverError(f"corner dimension {corner_dim} is not a perfect square")
        # minimal projection: spectral projector of a generic corner element
        q = None
        for attempt in range(max_tries):
            coeffs_t = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            t = hermitian(compose_ind(p, compose_ind(lincomb(coeffs_t), p)))
            vals = np.concatenate([np.linalg.eigvalsh(t.block(u))
                                   for u in cat.labels if tube.w.m(u)])
            vals = vals[np.abs(vals) > gap]
            centres_t = cluster(vals, gap)
            if len(centres_t) == ni:
                q = spectral_projectors(t, centres_t[:1], gap)[0]
                break
        if q is None:
            raise CenterSolverError("could not isolate a minimal projection in a block")
        # carrier = range of q
        mult = {}
        isom: dict[str, np.ndarray] = {}
        for u in cat.labels:
            b = q.block(u)
            if not b.size:
                continue
            vals, vecs = np.linalg.eigh(b)
            sel = vals > 0.5
            r = int(np.sum(sel))
            if r:
                mult[u] = r
                isom[u] = vecs[:, sel]
        carrier = ind_object(cat, mult)
        v = IndMorphism(carrier, tube.w, isom)
        tau = compose_ind(dagger_ind(v), compose_ind(tube.action, Z_morphism(ctx, v)))
        zm = ZModuleAction(ctx, carrier, tau)
        hb = psi(zm, check=True)
        simples.append(hb)

    simples.sort(key=lambda h: (round(h.carrier.qdim(), 9),
                                tuple((lbl, h.carrier.m(lbl)) for lbl in cat.labels)))
    return [CenterSimple(hb=h, qdim=h.carrier.qdim(), id_tag=i) for i, h in enumerate(simples)]
