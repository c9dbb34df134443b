"""Monoidal opposites, Deligne products, and the multiplication functor.

The opposite category reverses the tensor order; its associator is the
planar flip of the original F-data (an explicit conjugate-transpose with
permuted arguments), so the result passes the same validation gate.  The
Deligne product carries pairwise labels with componentwise structure.  The
multiplication functor sends ``a (x) b`` to ``a @ c @ b``-style insertions:
on words it reverses the left components and concatenates the right ones.
"""

from __future__ import annotations

import itertools

import numpy as np

from .fusion import ComposeError, FusionCategory, Morphism, Word, word

__all__ = [
    "monoidal_opposite",
    "deligne_product",
    "pair_label",
    "split_label",
    "mult_functor_on_object",
    "mult_functor_on_morphism",
    "to_opposite_morphism",
    "morphism_pair",
]


def monoidal_opposite(cat: FusionCategory) -> FusionCategory:
    """The same labels with reversed tensor order and planar-flipped F-data."""
    fusion = {}
    for a, b in itertools.product(cat.labels, repeat=2):
        for c in cat.labels:
            n = cat.N(b, a, c)
            if n:
                fusion[(a, b, c)] = n
    fsym = {}
    for a, b, c in itertools.product(cat.labels, repeat=3):
        if cat.unit in (a, b, c):
            continue
        for d in cat.labels:
            # left slots of the opposite: (e, alpha in N(b,a,e), beta in N(c,e,d))
            lslots = [(e, al, be)
                      for e in cat.labels
                      for al in range(cat.N(b, a, e))
                      for be in range(cat.N(c, e, d))]
            rslots = [(f, mu, nu)
                      for f in cat.labels
                      for mu in range(cat.N(c, b, f))
                      for nu in range(cat.N(f, a, d))]
            if not lslots:
                continue
            src = cat.F(c, b, a, d)
            src_l = cat.f_left_slots(c, b, a, d)
            src_r = cat.f_right_slots(c, b, a, d)
            mat = np.zeros((len(lslots), len(rslots)), dtype=complex)
            for i, (e, al, be) in enumerate(lslots):
                for j, (f, mu, nu) in enumerate(rslots):
                    mat[i, j] = np.conj(src[src_l.index((f, mu, nu)), src_r.index((e, al, be))])
            fsym[(a, b, c, d)] = mat
    return FusionCategory(cat.labels, cat.unit, cat.dual, fusion, cat.qdim, fsym,
                          name=f"{cat.name}^mp")


def pair_label(left: str, right: str) -> str:
    return f"{left}|{right}"


def split_label(lbl: str) -> tuple[str, str]:
    left, _, right = lbl.partition("|")
    return left, right


def deligne_product(c1: FusionCategory, c2: FusionCategory) -> FusionCategory:
    """Product category with pairwise labels and componentwise data."""
    labels = [pair_label(a, b) for a in c1.labels for b in c2.labels]
    unit = pair_label(c1.unit, c2.unit)
    dual = {pair_label(a, b): pair_label(c1.dual[a], c2.dual[b])
            for a in c1.labels for b in c2.labels}
    qdim = {pair_label(a, b): c1.qdim[a] * c2.qdim[b]
            for a in c1.labels for b in c2.labels}
    fusion = {}
    for a1, b1 in itertools.product(c1.labels, c2.labels):
        for a2, b2 in itertools.product(c1.labels, c2.labels):
            for a3, b3 in itertools.product(c1.labels, c2.labels):
                n = c1.N(a1, a2, a3) * c2.N(b1, b2, b3)
                if n:
                    fusion[(pair_label(a1, b1), pair_label(a2, b2), pair_label(a3, b3))] = n

    def lslots(cat, a, b, c, d):
        return [(e, al, be) for e in cat.labels
                for al in range(cat.N(a, b, e)) for be in range(cat.N(e, c, d))]

    def rslots(cat, a, b, c, d):
        return [(f, mu, nu) for f in cat.labels
                for mu in range(cat.N(b, c, f)) for nu in range(cat.N(a, f, d))]

    fsym = {}
    for A, B, C in itertools.product(labels, repeat=3):
        if unit in (A, B, C):
            continue
        a1, b1 = split_label(A)
        a2, b2 = split_label(B)
        a3, b3 = split_label(C)
        for D in labels:
            d1, d2 = split_label(D)
            F1 = c1.F(a1, a2, a3, d1)
            F2 = c2.F(b1, b2, b3, d2)
            l1, r1 = lslots(c1, a1, a2, a3, d1), rslots(c1, a1, a2, a3, d1)
            l2, r2 = lslots(c2, b1, b2, b3, d2), rslots(c2, b1, b2, b3, d2)
            if not l1 or not l2:
                continue
            # product slots pair the component slots; vertex pairs are
            # enumerated with the second component fastest
            nl = len(l1) * len(l2)
            nr = len(r1) * len(r2)
            mat = np.zeros((nl, nr), dtype=complex)
            li = 0
            lmap = {}
            for e1, al1, be1 in l1:
                for e2, al2, be2 in l2:
                    lmap[(e1, al1, be1, e2, al2, be2)] = None
            # build with canonical (e, alpha, beta) order of the product category
            plslots = [(pair_label(e1, e2), al, be)
                       for e1 in c1.labels for e2 in c2.labels
                       for al in range(c1.N(a1, a2, e1) * c2.N(b1, b2, e2))
                       for be in range(c1.N(e1, a3, d1) * c2.N(e2, b3, d2))]
            prslots = [(pair_label(f1, f2), mu, nu)
                       for f1 in c1.labels for f2 in c2.labels
                       for mu in range(c1.N(a2, a3, f1) * c2.N(b2, b3, f2))
                       for nu in range(c1.N(a1, f1, d1) * c2.N(b1, f2, d2))]
            for i, (E, al, be) in enumerate(plslots):
                e1, e2 = split_label(E)
                na2 = c2.N(b1, b2, e2)
                nb2 = c2.N(e2, b3, d2)
                al1, al2 = divmod(al, na2)
                be1, be2 = divmod(be, nb2)
                i1 = l1.index((e1, al1, be1))
                i2 = l2.index((e2, al2, be2))
                for j, (Fl, mu, nu) in enumerate(prslots):
                    f1, f2 = split_label(Fl)
                    nm2 = c2.N(b2, b3, f2)
                    nn2 = c2.N(b1, f2, d2)
                    mu1, mu2 = divmod(mu, nm2)
                    nu1, nu2 = divmod(nu, nn2)
                    j1 = r1.index((f1, mu1, nu1))
                    j2 = r2.index((f2, mu2, nu2))
                    mat[i, j] = F1[i1, j1] * F2[i2, j2]
            fsym[(A, B, C, D)] = mat
    return FusionCategory(labels, unit, dual, fusion, qdim, fsym,
                          name=f"{c1.name} x {c2.name}")


def _component_words(cp: FusionCategory, w: Word) -> tuple[Word, Word]:
    lefts, rights = [], []
    for lbl in w:
        l, r = split_label(lbl)
        lefts.append(l)
        rights.append(r)
    return tuple(lefts), tuple(rights)


def mult_functor_on_object(cat: FusionCategory, cp: FusionCategory, w) -> Word:
    """Image of a product-category word under the multiplication functor.

    A word of pair letters acts on the unit by two-sided insertion, so the
    image is the reversed left components followed by the right components.
    """
    w = word(cp, w)
    lefts, rights = _component_words(cp, w)
    return word(cat, tuple(reversed(lefts)) + rights)


def _opposite_tree_matrix(cat: FusionCategory, cmp: FusionCategory, aw: Word, root: str) -> np.ndarray:
    """Transport opposite-category trees of ``aw`` to left-comb trees of the
    reversed word in the base category.

    An opposite left comb reads, in the base category, as a nested
    ``(id (x) t') o kappa`` chain; expanding it letter by letter is the attach
    primitive.
    """
    key = ("opp_trees", aw, root)
    hit = cat._cache.get(key)
    if hit is not None:
        return hit
    rev = tuple(reversed(aw))
    rows = cat.trees(rev, root)
    cols = cmp.trees(aw, root)
    mat = np.zeros((len(rows), len(cols)), dtype=complex)
    if len(aw) == 0:
        if rows and cols:
            mat[0, 0] = 1.0
    elif len(aw) == 1:
        if rows and cols:
            mat[0, 0] = 1.0
    else:
        head = aw[:-1]
        last = aw[-1]
        ridx = cat.tree_index(rev, root)
        for j, (chain, verts) in enumerate(cols):
            m_prev = chain[-2]
            kappa = verts[-1]
            # in the base category the final vertex lives in C(root, last (x) m_prev)
            sub = _opposite_tree_matrix(cat, cmp, head, m_prev)
            am = cat.attach_matrix(last, tuple(reversed(head)), root)
            acols = cat.attach_slots(last, tuple(reversed(head)), root)
            sub_trees = cat.trees(tuple(reversed(head)), m_prev)
            jj = cmp.tree_index(head, m_prev)[(chain[:-1], verts[:-1])]
            for i_sub in range(len(sub_trees)):
                w_sub = sub[i_sub, jj]
                if w_sub == 0:
                    continue
                jcol = acols.index((m_prev, i_sub, kappa))
                col = am[:, jcol]
                for i_full, val in enumerate(col):
                    if val == 0:
                        continue
                    full = cat.trees((last,) + tuple(reversed(head)), root)[i_full]
                    mat[ridx[full], j] += val * w_sub
    cat._cache[key] = mat
    return mat


def _transport(cat: FusionCategory, cmp: FusionCategory, cp: FusionCategory, w: Word, u: str):
    """Unitary from product-category tree bases (summed over pair roots with a
    joining vertex) onto base-category trees of the functor image word."""
    lefts, rights = _component_words(cp, w)
    la = tuple(reversed(lefts))
    jm = cat.join_matrix(la, rights, u)
    jslots = cat.join_slots(la, rights, u)
    cols = []
    blocksrc = []
    for u1 in cat.labels:
        o1 = _opposite_tree_matrix(cat, cmp, lefts, u1)
        n1 = len(cmp.trees(lefts, u1))
        if n1 == 0:
            continue
        for u2 in cat.labels:
            n2 = cat.tree_count(rights, u2)
            nk = cat.N(u1, u2, u)
            if n2 == 0 or nk == 0:
                continue
            for i1 in range(n1):
                for i2 in range(n2):
                    for k in range(nk):
                        cols.append((u1, i1, u2, i2, k))
                        blocksrc.append((u1, o1, i1, u2, i2, k))
    raw = np.zeros((cat.tree_count(la + rights, u), len(cols)), dtype=complex)
    jindex = {s: i for i, s in enumerate(jslots)}
    for jdx, (u1, o1, i1, u2, i2, k) in enumerate(blocksrc):
        for ia in range(o1.shape[0]):
            val = o1[ia, i1]
            if val == 0:
                continue
            raw[:, jdx] += val * jm[:, jindex[(u1, ia, u2, i2, k)]]
    # reindex rows onto the unit-stripped image word
    from .fusion import strip_unit_letters, word as _word

    target = _word(cat, la + rights)
    mat = np.zeros((cat.tree_count(target, u), len(cols)), dtype=complex)
    if raw.shape[0]:
        idx = strip_unit_letters(cat, la + rights, u)
        for i_raw, i_t in enumerate(idx):
            mat[i_t, :] += raw[i_raw, :]
    return mat, cols


def mult_functor_on_morphism(cat: FusionCategory, cmp: FusionCategory, cp: FusionCategory,
                             f: Morphism) -> Morphism:
    """Image of a product-category morphism under the multiplication functor."""
    if f.category is not cp:
        raise ComposeError("morphism does not live in the product category")
    dom = mult_functor_on_object(cat, cp, f.domain)
    cod = mult_functor_on_object(cat, cp, f.codomain)
    blocks = {}
    for u in cat.labels:
        nd, nc = cat.tree_count(dom, u), cat.tree_count(cod, u)
        if nd == 0 or nc == 0:
            continue
        td, cols_d = _transport(cat, cmp, cp, f.domain, u)
        tc, cols_c = _transport(cat, cmp, cp, f.codomain, u)
        mid = np.zeros((len(cols_c), len(cols_d)), dtype=complex)
        ci = {s: i for i, s in enumerate(cols_c)}
        cod_l, cod_r = _component_words(cp, f.codomain)
        # product-category trees factor through pair roots (u1, u2)
        for jdx, (u1, i1, u2, i2, k) in enumerate(cols_d):
            fb = f.blocks.get(pair_label(u1, u2))
            if fb is None:
                continue
            jd = _pair_tree_index(cat, cmp, cp, f.domain, u1, u2, i1, i2)
            for i1c in range(len(cmp.trees(cod_l, u1))):
                for i2c in range(cat.tree_count(cod_r, u2)):
                    jc = _pair_tree_index(cat, cmp, cp, f.codomain, u1, u2, i1c, i2c)
                    val = fb[jc, jd]
                    if val == 0:
                        continue
                    mid[ci[(u1, i1c, u2, i2c, k)], jdx] += val
        m = tc @ mid @ td.conj().T
        if np.any(m):
            blocks[u] = m
    return Morphism(cat, dom, cod, blocks)


def to_opposite_morphism(cat: FusionCategory, cmp: FusionCategory, f: Morphism) -> Morphism:
    """Reinterpret a base-category morphism as one of the opposite category.

    A morphism ``U -> V`` equals, in the opposite category, a morphism
    ``reversed(U) -> reversed(V)``; the blocks transform by the recorded
    opposite-tree transport.
    """
    dom = tuple(reversed(f.domain))
    cod = tuple(reversed(f.codomain))
    blocks = {}
    for u in cat.labels:
        fb = f.blocks.get(u)
        if fb is None or not fb.size:
            continue
        od = _opposite_tree_matrix(cat, cmp, dom, u)
        oc = _opposite_tree_matrix(cat, cmp, cod, u)
        m = oc.conj().T @ fb @ od
        if np.any(m):
            blocks[u] = m
    return Morphism(cmp, dom, cod, blocks)


def morphism_pair(cat: FusionCategory, cmp: FusionCategory, cp: FusionCategory,
                  dom_pair: Word, cod_pair: Word,
                  f_left: Morphism, f_right: Morphism) -> Morphism:
    """The product-category morphism with the given component morphisms.

    ``f_left`` lives in the opposite category on the (stripped) left
    components of the pair words, ``f_right`` in the base category on the
    right components.
    """
    from .fusion import strip_unit_letters

    dom_pair = word(cp, dom_pair)
    cod_pair = word(cp, cod_pair)
    dl, dr = _component_words(cp, dom_pair)
    cl, cr = _component_words(cp, cod_pair)
    if word(cmp, dl) != f_left.domain or word(cmp, cl) != f_left.codomain:
        raise ComposeError("left component words do not match f_left")
    if word(cat, dr) != f_right.domain or word(cat, cr) != f_right.codomain:
        raise ComposeError("right component words do not match f_right")
    blocks = {}
    for u1 in cmp.labels:
        lb = f_left.blocks.get(u1)
        if lb is None or not lb.size:
            continue
        sdl = strip_unit_letters(cmp, dl, u1)
        scl = strip_unit_letters(cmp, cl, u1)
        for u2 in cat.labels:
            rb = f_right.blocks.get(u2)
            if rb is None or not rb.size:
                continue
            sdr = strip_unit_letters(cat, dr, u2)
            scr = strip_unit_letters(cat, cr, u2)
            u_pair = pair_label(u1, u2)
            nd = cp.tree_count(dom_pair, u_pair)
            nc = cp.tree_count(cod_pair, u_pair)
            mat = np.zeros((nc, nd), dtype=complex)
            for i1 in range(len(sdl)):
                for i2 in range(len(sdr)):
                    jd = _pair_tree_index(cat, cmp, cp, dom_pair, u1, u2, i1, i2)
                    for o1 in range(len(scl)):
                        v1 = lb[scl[o1], sdl[i1]]
                        if v1 == 0:
                            continue
                        for o2 in range(len(scr)):
                            v2 = rb[scr[o2], sdr[i2]]
                            if v2 == 0:
                                continue
                            jc = _pair_tree_index(cat, cmp, cp, cod_pair, u1, u2, o1, o2)
                            mat[jc, jd] += v1 * v2
            if np.any(mat):
                blocks[u_pair] = mat
    return Morphism(cp, dom_pair, cod_pair, blocks)


def _pair_tree_index(cat: FusionCategory, cmp: FusionCategory, cp: FusionCategory,
                     w: Word, u1: str, u2: str, i1: int, i2: int) -> int:
    """Index of the product-category tree with component trees (i1, i2)."""
    lefts, rights = _component_words(cp, w)
    t1 = cmp.trees(lefts, u1)[i1]
    t2 = cat.trees(rights, u2)[i2]
    chain = tuple(pair_label(a, b) for a, b in zip(t1[0], t2[0])) if t1[0] else ()
    # vertex indices pair with the right component fastest
    verts = []
    for i in range(len(t1[1])):
        m2 = cat.N(t2[0][i], rights[i + 1], t2[0][i + 1])
        verts.append(t1[1][i] * m2 + t2[1][i])
    return cp.tree_index(word(cp, w), pair_label(u1, u2))[(chain, tuple(verts))]
