"""Finitely supported ind-objects, their morphisms, and tensor-product fibers.

An ind-object assigns a finite multiplicity to each simple label; a morphism
between ind-objects is a family of matrices over the shared support.  Tensor
products of ind-objects (and of fixed tensor words) are handled through
:class:`Product`, which fixes a canonical fiber basis at every simple root:
slots run over support-label assignments, left-comb fusion trees of the
flattened letter word, and multiplicity indices.  All structural morphisms are
realised as explicit matrices in these bases.

In the inner product of the unitary ind-completion a slot with root ``u``
and ind-factor support labels ``x_i`` has squared norm proportional to
``d_u / prod_i d_{x_i}``: tensor-word letters carry weight ``d`` and cancel
against the ``(d_b d_c)^{-1}`` summand scaling of the completion, and the
leftover factors are constant on every (root, assignment) block.  Since all
structural maps preserve roots and assignments, adjoints are plain conjugate
transposes in both the algebraic and the unitary convention, and the two
conventions share the recorded bases; they differ in which dimension weights
enter the free half-braiding family (see :mod:`centerkit.monad`).  The mode
flag still travels with every :class:`Product` because mixing conventions in
one computation is an error.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .fusion import (
    ComposeError,
    FusionCategory,
    Word,
    identity,
    tensor,
    word,
)

__all__ = [
    "IndObject",
    "IndMorphism",
    "Product",
    "ind_object",
    "simple_ind",
    "unit_ind",
    "ind_identity",
    "compose_ind",
    "dagger_ind",
    "direct_sum",
    "direct_sum_mor",
    "ind_norm",
    "product_map",
    "expand_factor",
    "factor_embedding",
    "amplify_left",
    "amplify_right",
    "TensorDecomposition",
    "tensor_ind",
    "hilb_inner_product",
    "ALGEBRAIC",
    "UNITARY",
]

ALGEBRAIC = "algebraic"
UNITARY = "unitary"


@dataclass(frozen=True)
class IndObject:
    """Finitely supported multiplicity assignment over the simple labels."""

    category: FusionCategory
    mult: tuple[tuple[str, int], ...]

    def m(self, a: str) -> int:
        for lbl, n in self.mult:
            if lbl == a:
                return n
        return 0

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(lbl for lbl, _ in self.mult)

    def total_dim(self) -> int:
        return sum(n for _, n in self.mult)

    def qdim(self) -> float:
        return sum(n * self.category.qdim[lbl] for lbl, n in self.mult)

    def is_zero(self) -> bool:
        return not self.mult

    def __repr__(self):
        inner = " + ".join(f"{n}*{lbl}" if n > 1 else lbl for lbl, n in self.mult)
        return f"Ind({inner or '0'})"


def ind_object(cat: FusionCategory, mult) -> IndObject:
    items = []
    for lbl in cat.labels:
        n = int(mult.get(lbl, 0))
        if n < 0:
            raise ValueError("negative multiplicity")
        if n:
            items.append((lbl, n))
    return IndObject(cat, tuple(items))


def simple_ind(cat: FusionCategory, a: str) -> IndObject:
    return ind_object(cat, {a: 1})


def unit_ind(cat: FusionCategory) -> IndObject:
    return simple_ind(cat, cat.unit)


@dataclass
class IndMorphism:
    """Blockwise linear map between the fibers of two ind-objects."""

    domain: IndObject
    codomain: IndObject
    blocks: dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def category(self) -> FusionCategory:
        return self.domain.category

    def block(self, a: str) -> np.ndarray:
        b = self.blocks.get(a)
        if b is None:
            return np.zeros((self.codomain.m(a), self.domain.m(a)), dtype=complex)
        return b

    def norm(self) -> float:
        """Sup (a max, by finite support) of the operator norms of the blocks."""
        vals = [np.linalg.norm(b, 2) for b in self.blocks.values() if b.size]
        return max(vals, default=0.0)

    def trim(self, tol: float = 0.0) -> "IndMorphism":
        return IndMorphism(self.domain, self.codomain,
                           {a: b for a, b in self.blocks.items() if b.size and np.max(np.abs(b)) > tol})

    def __add__(self, other: "IndMorphism") -> "IndMorphism":
        if self.domain != other.domain or self.codomain != other.codomain:
            raise ComposeError("ind-morphism shape mismatch in addition")
        out = {a: b.copy() for a, b in self.blocks.items()}
        for a, b in other.blocks.items():
            out[a] = out.get(a, 0) + b
        return IndMorphism(self.domain, self.codomain, out)

    def __sub__(self, other: "IndMorphism") -> "IndMorphism":
        return self + (-1.0) * other

    def __rmul__(self, c: complex) -> "IndMorphism":
        return IndMorphism(self.domain, self.codomain, {a: c * b for a, b in self.blocks.items()})

    def __matmul__(self, other: "IndMorphism") -> "IndMorphism":
        return compose_ind(self, other)

    def __repr__(self):
        return f"IndMorphism({self.domain!r} -> {self.codomain!r})"


def ind_identity(v: IndObject) -> IndMorphism:
    return IndMorphism(v, v, {a: np.eye(n, dtype=complex) for a, n in v.mult})


def compose_ind(g: IndMorphism, f: IndMorphism) -> IndMorphism:
    if f.codomain != g.domain:
        raise ComposeError("ind-morphism composition mismatch")
    blocks = {}
    for a, fb in f.blocks.items():
        gb = g.blocks.get(a)
        if gb is not None and fb.size and gb.size:
            blocks[a] = gb @ fb
    return IndMorphism(f.domain, g.codomain, blocks)


def dagger_ind(f: IndMorphism) -> IndMorphism:
    return IndMorphism(f.codomain, f.domain, {a: b.conj().T for a, b in f.blocks.items()})


def ind_norm(f: IndMorphism) -> float:
    return f.norm()


def direct_sum(v: IndObject, w: IndObject) -> IndObject:
    if v.category is not w.category:
        raise ComposeError("direct sum across categories")
    return ind_object(v.category, {a: v.m(a) + w.m(a) for a in v.category.labels})


def direct_sum_mor(f: IndMorphism, g: IndMorphism) -> IndMorphism:
    dom = direct_sum(f.domain, g.domain)
    cod = direct_sum(f.codomain, g.codomain)
    blocks = {}
    for a in dom.support:
        fb, gb = f.block(a), g.block(a)
        m = np.zeros((cod.m(a), dom.m(a)), dtype=complex)
        m[: fb.shape[0], : fb.shape[1]] = fb
        m[fb.shape[0]:, fb.shape[1]:] = gb
        blocks[a] = m
    return IndMorphism(dom, cod, blocks)


# -- tensor-product fiber spaces -------------------------------------------


class Product:
    """Canonical fiber bases for a tensor product of words and ind-objects.

    Factors are tensor words (tuples of labels) or ind-objects.  The fiber at
    a simple root ``u`` is a direct sum over assignments of a support label to
    every ind factor; the summand for an assignment ``xs`` is
    ``C(u, flat(xs)) (x) multiplicity spaces``.  Slot order: assignments in
    canonical order, then tree index, then multiplicity indices factor-major.
    """

    def __init__(self, category: FusionCategory, factors, mode: str = ALGEBRAIC):
        if mode not in (ALGEBRAIC, UNITARY):
            raise ValueError(f"unknown mode {mode!r}")
        self.category = category
        self.mode = mode
        fs = []
        for f in factors:
            if isinstance(f, IndObject):
                if f.category is not category:
                    raise ComposeError("factor from a different category")
                fs.append(f)
            else:
                fs.append(word(category, f))
        self.factors: tuple = tuple(fs)
        self._layout_cache: dict[str, list] = {}

    @property
    def ind_factors(self) -> list[IndObject]:
        return [f for f in self.factors if isinstance(f, IndObject)]

    def assignments(self):
        pools = [f.support for f in self.ind_factors]
        return list(itertools.product(*pools)) if pools else [()]

    def letters(self, xs: tuple[str, ...]):
        """Per-factor letter lists under the assignment (units stripped)."""
        out = []
        k = 0
        for f in self.factors:
            if isinstance(f, IndObject):
                out.append(() if xs[k] == self.category.unit else (xs[k],))
                k += 1
            else:
                out.append(f)
        return out

    def flat(self, xs: tuple[str, ...]) -> Word:
        return tuple(itertools.chain.from_iterable(self.letters(xs)))

    def mult_dims(self, xs: tuple[str, ...]) -> tuple[int, ...]:
        return tuple(f.m(x) for f, x in zip(self.ind_factors, xs))

    def layout(self, u: str):
        """Per-root layout: list of (xs, offset, ntrees, multdims)."""
        hit = self._layout_cache.get(u)
        if hit is not None:
            return hit
        out = []
        off = 0
        for xs in self.assignments():
            nt = self.category.tree_count(self.flat(xs), u)
            md = self.mult_dims(xs)
            block = nt * int(np.prod(md, dtype=np.int64))
            if block:
                out.append((xs, off, nt, md))
                off += block
        self._layout_cache[u] = out
        return out

    def layout_map(self, u: str):
        return {xs: (off, nt, md) for xs, off, nt, md in self.layout(u)}

    def dim(self, u: str) -> int:
        lay = self.layout(u)
        if not lay:
            return 0
        xs, off, nt, md = lay[-1]
        return off + nt * int(np.prod(md, dtype=np.int64))

    def to_ind(self) -> IndObject:
        return ind_object(self.category, {u: self.dim(u) for u in self.category.labels})

    def with_factors(self, factors) -> "Product":
        return Product(self.category, factors, self.mode)

    def __repr__(self):
        bits = [repr(f) if isinstance(f, IndObject) else (".".join(f) or "1") for f in self.factors]
        return f"Product[{' ox '.join(bits)}; {self.mode}]"


def _unit_word(cat: FusionCategory, x: str) -> Word:
    return (x,) if x != cat.unit else ()


def product_map(dom: Product, cod: Product, parts) -> IndMorphism:
    """Matrix of a structural morphism given by per-factor pieces.

    ``parts`` aligns the two factor lists left to right; each entry is either
    ``("ind", f_or_None)``, pairing one ind factor on each side (``None`` is
    the identity), or ``("mor", f, nd, nc)``, a word-level morphism consuming
    ``nd`` word factors of the domain and ``nc`` of the codomain.  Matrices
    come out in the products' canonical bases with the mode's normalisation.
    """
    if dom.mode != cod.mode or dom.category is not cod.category:
        raise ComposeError("products are not compatible")
    cat = dom.category
    _check_parts(parts, dom, cod)
    dom_inds = dom.ind_factors
    vi, vo = dom.to_ind(), cod.to_ind()
    blocks: dict[str, np.ndarray] = {}
    for xs in dom.assignments():
        mult_maps = []
        pieces = []
        k = 0
        dead = False
        for part in parts:
            if part[0] == "ind":
                f = part[1]
                x = xs[k]
                if f is None:
                    mm = np.eye(dom_inds[k].m(x), dtype=complex)
                else:
                    mm = f.blocks.get(x)
                    if mm is None or not mm.size:
                        dead = True
                        break
                mult_maps.append(mm)
                pieces.append(identity(cat, _unit_word(cat, x)))
                k += 1
            else:
                pieces.append(part[1])
        if dead:
            continue
        g = pieces[0]
        for piece in pieces[1:]:
            g = tensor(g, piece)
        # ind labels pass through unchanged, so the mode rescaling cancels
        # between the domain and codomain slots and no ratio is needed
        ratio = 1.0
        for u in cat.labels:
            gb = g.blocks.get(u)
            if gb is None or not gb.size:
                continue
            din = dom.layout_map(u).get(xs)
            cin = cod.layout_map(u).get(xs)
            if din is None or cin is None:
                continue
            mat = gb
            for mm in mult_maps:
                mat = np.kron(mat, mm)
            if u not in blocks:
                blocks[u] = np.zeros((vo.m(u), vi.m(u)), dtype=complex)
            blocks[u][cin[0]: cin[0] + mat.shape[0], din[0]: din[0] + mat.shape[1]] += ratio * mat
    return IndMorphism(vi, vo, {a: b for a, b in blocks.items() if np.any(b)})


def _check_parts(parts, dom: Product, cod: Product):
    di = ci = 0
    for part in parts:
        if part[0] == "ind":
            for prod, i in ((dom, di), (cod, ci)):
                if i >= len(prod.factors) or not isinstance(prod.factors[i], IndObject):
                    raise ComposeError("part alignment: expected an ind factor")
            f = part[1]
            if f is None and dom.factors[di] != cod.factors[ci]:
                raise ComposeError("identity ind part needs equal factors")
            if f is not None and (f.domain != dom.factors[di] or f.codomain != cod.factors[ci]):
                raise ComposeError("ind part does not match the factor objects")
            di += 1
            ci += 1
        elif part[0] == "mor":
            f, nd, nc = part[1], part[2], part[3]
            dws = dom.factors[di: di + nd]
            cws = cod.factors[ci: ci + nc]
            if any(isinstance(x, IndObject) for x in dws) or any(isinstance(x, IndObject) for x in cws):
                raise ComposeError("mor part must span word factors only")
            if sum(dws, ()) != f.domain or sum(cws, ()) != f.codomain:
                raise ComposeError("mor part words do not match the factor words")
            di += nd
            ci += nc
        else:
            raise ComposeError(f"unknown part kind {part[0]!r}")
    if di != len(dom.factors) or ci != len(cod.factors):
        raise ComposeError("parts do not cover all factors")


def _multi_indices(dims):
    return list(itertools.product(*(range(n) for n in dims))) if dims else [()]


def _mult_strides(dims):
    strides = []
    acc = 1
    for n in reversed(dims):
        strides.append(acc)
        acc *= n
    return tuple(reversed(strides)), acc


def expand_factor(prod: Product, k: int, inner: Product):
    """Unfold factor ``k`` (the collapse of ``inner``) into its own factors.

    Returns ``(expanded, iso)`` where ``expanded`` is the product with factor
    ``k`` replaced by ``inner.factors`` and ``iso`` maps coordinates in the
    nested basis to coordinates in the expanded basis (a unitary in either
    mode, built from F-moves via the attach primitive).
    """
    cat = prod.category
    if prod.mode != inner.mode:
        raise ComposeError("mode mismatch in expand_factor")
    if not isinstance(prod.factors[k], IndObject) or prod.factors[k] != inner.to_ind():
        raise ComposeError("factor k is not the collapse of the inner product")
    expanded = prod.with_factors(prod.factors[:k] + inner.factors + prod.factors[k + 1:])
    k_ind = sum(1 for f in prod.factors[:k] if isinstance(f, IndObject))
    n_inner_ind = len(inner.ind_factors)
    blocks: dict[str, np.ndarray] = {}
    for u in cat.labels:
        nd, nc = prod.dim(u), expanded.dim(u)
        if nd == 0 or nc == 0:
            continue
        mat = np.zeros((nc, nd), dtype=complex)
        exp_layout = expanded.layout_map(u)
        for xs, off_o, nt_o, md_o in prod.layout(u):
            z = xs[k_ind]
            lets = prod.letters(xs)
            pos = sum(len(w) for w in lets[:k])
            w_out = prod.flat(xs)
            trees_o = cat.trees(w_out, u)
            strides_o, tot_o = _mult_strides(md_o)
            for ys, off_i, nt_i, md_i in inner.layout(z):
                w_in = inner.flat(ys)
                xs_exp = xs[:k_ind] + ys + xs[k_ind + 1:]
                got = exp_layout.get(xs_exp)
                if got is None:
                    continue
                off_e, nt_e, md_e = got
                trees_in = cat.trees(w_in, z)
                strides_i, tot_i = _mult_strides(md_i)
                strides_e, tot_e = _mult_strides(md_e)
                eidx = cat.tree_index(expanded.flat(xs_exp), u)
                md_rest = md_o[:k_ind] + md_o[k_ind + 1:]
                for it_o, (chain_o, verts_o) in enumerate(trees_o):
                    for it_i, t_in in enumerate(trees_in):
                        for t_exp, coeff in _substitute(cat, (chain_o, verts_o), pos, z, w_in, t_in):
                            ie = eidx[t_exp]
                            for mi_r in _multi_indices(md_rest):
                                # the nested multiplicity at slot k_ind enumerates inner slots
                                for mi_i in _multi_indices(md_i):
                                    inner_idx = off_i + it_i * tot_i
                                    inner_idx += sum(s * m for s, m in zip(strides_i, mi_i))
                                    mo = mi_r[:k_ind] + (inner_idx,) + mi_r[k_ind:]
                                    nested = off_o + it_o * tot_o + sum(s * m for s, m in zip(strides_o, mo))
                                    me = mi_r[:k_ind] + mi_i + mi_r[k_ind:]
                                    expi = off_e + ie * tot_e + sum(s * m for s, m in zip(strides_e, me))
                                    mat[expi, nested] += coeff
        if np.any(mat):
            blocks[u] = mat
    return expanded, IndMorphism(prod.to_ind(), expanded.to_ind(), blocks)


def _substitute(cat: FusionCategory, tree_o, pos: int, z: str, w_in: Word, t_in):
    """Expand the substitution of an inner tree into letter slot ``pos``.

    Yields ``(tree, coeff)`` pairs over left-comb trees of the expanded word.
    ``z`` is the inner root; when ``z`` is the unit the outer tree has no
    letter at ``pos`` and the inner tree is spliced against a unit vertex.
    """
    chain_o, verts_o = tree_o
    chain_i, verts_i = t_in
    unit = cat.unit
    if pos == 0:
        if z != unit:
            yield (chain_i + chain_o[1:], verts_i + verts_o), 1.0
        elif not w_in:
            yield (chain_o, verts_o), 1.0
        elif not chain_o:
            yield (chain_i, verts_i), 1.0
        else:
            # unit-rooted inner tree spliced before the first letter
            yield (chain_i + chain_o, verts_i + (0,) + verts_o), 1.0
        return
    m_p = chain_o[pos - 1]
    if z != unit:
        e_target = chain_o[pos]
        kappa = verts_o[pos - 1]
        am = cat.attach_matrix(m_p, w_in, e_target)
        cols = cat.attach_slots(m_p, w_in, e_target)
        try:
            j = cols.index((z, cat.tree_index(w_in, z)[t_in], kappa))
        except ValueError:
            return
        rows = cat.trees((m_p,) + w_in, e_target)
        for i, (chain_s, verts_s) in enumerate(rows):
            coeff = am[i, j]
            if coeff == 0:
                continue
            yield (chain_o[:pos] + chain_s[1:] + chain_o[pos + 1:],
                   verts_o[:pos - 1] + verts_s + verts_o[pos:]), coeff
    else:
        if not w_in:
            yield (chain_o, verts_o), 1.0
            return
        am = cat.attach_matrix(m_p, w_in, m_p)
        cols = cat.attach_slots(m_p, w_in, m_p)
        try:
            j = cols.index((unit, cat.tree_index(w_in, unit)[t_in], 0))
        except ValueError:
            return
        rows = cat.trees((m_p,) + w_in, m_p)
        for i, (chain_s, verts_s) in enumerate(rows):
            coeff = am[i, j]
            if coeff == 0:
                continue
            yield (chain_o[:pos] + chain_s[1:] + chain_o[pos:],
                   verts_o[:pos - 1] + verts_s + verts_o[pos - 1:]), coeff


def factor_embedding(prod: Product, k: int, bigger: IndObject, offsets: dict[str, int]):
    """Inject factor ``k`` (an ind-object) into ``bigger`` with per-label offsets.

    Returns ``(new_product, iso)`` with ``iso`` the isometric inclusion of
    fiber bases.
    """
    cat = prod.category
    small = prod.factors[k]
    if not isinstance(small, IndObject):
        raise ComposeError("factor_embedding needs an ind factor")
    new = prod.with_factors(prod.factors[:k] + (bigger,) + prod.factors[k + 1:])
    k_ind = sum(1 for f in prod.factors[:k] if isinstance(f, IndObject))
    blocks: dict[str, np.ndarray] = {}
    for u in cat.labels:
        nd = prod.dim(u)
        if nd == 0:
            continue
        mat = np.zeros((new.dim(u), nd), dtype=complex)
        new_layout = new.layout_map(u)
        for xs, off_o, nt_o, md_o in prod.layout(u):
            got = new_layout.get(xs)
            if got is None:
                continue
            off_n, nt_n, md_n = got
            strides_o, tot_o = _mult_strides(md_o)
            strides_n, tot_n = _mult_strides(md_n)
            shift = offsets.get(xs[k_ind], 0)
            for it in range(nt_o):
                for mi in _multi_indices(md_o):
                    mn = list(mi)
                    mn[k_ind] = mi[k_ind] + shift
                    src = off_o + it * tot_o + sum(s * m for s, m in zip(strides_o, mi))
                    dst = off_n + it * tot_n + sum(s * m for s, m in zip(strides_n, mn))
                    mat[dst, src] = 1.0
        if np.any(mat):
            blocks[u] = mat
    return new, IndMorphism(prod.to_ind(), new.to_ind(), blocks)


def amplify_right(inner: IndMorphism, dom_p: Product, cod_p: Product, factor) -> IndMorphism:
    """Tensor a fiber map on the right with the identity of a word or ind-object."""
    cat = dom_p.category
    dom_e = dom_p.with_factors(dom_p.factors + (factor,))
    cod_e = cod_p.with_factors(cod_p.factors + (factor,))
    f_ind = isinstance(factor, IndObject)
    f_obj = factor if f_ind else word(cat, factor)
    vi, vo = dom_e.to_ind(), cod_e.to_ind()
    blocks: dict[str, np.ndarray] = {}
    for u in cat.labels:
        if dom_e.dim(u) == 0 or cod_e.dim(u) == 0:
            continue
        out = np.zeros((vo.m(u), vi.m(u)), dtype=complex)
        for m in cat.labels:
            ib = inner.blocks.get(m)
            if ib is None or not ib.size:
                continue
            tails = f_obj.support if f_ind else (None,)
            for t_lab in tails:
                w_t = _unit_word(cat, t_lab) if f_ind else f_obj
                n_t = f_obj.m(t_lab) if f_ind else 1
                paths = cat.trees((m,) + w_t, u)
                if not paths or n_t == 0:
                    continue
                dmap = _graft_index(cat, dom_p, dom_e, m, u, t_lab if f_ind else None, w_t, n_t)
                cmap = _graft_index(cat, cod_p, cod_e, m, u, t_lab if f_ind else None, w_t, n_t)
                for pi in range(len(paths)):
                    for mt in range(n_t):
                        di = dmap(pi, mt)
                        ci = cmap(pi, mt)
                        out[np.ix_(ci, di)] += ib
        if np.any(out):
            blocks[u] = out
    return IndMorphism(vi, vo, blocks)


def _graft_index(cat, base: Product, ext: Product, m: str, u: str, t_lab, w_t: Word, n_t: int):
    """Index arrays embedding base fibers at root m into extended fibers at u.

    The extension appends one factor whose letters are ``w_t`` (and, for an
    ind factor, support label ``t_lab`` with ``n_t`` multiplicities); grafting
    a suffix path onto a left comb is a pure reindexing.
    """
    paths = cat.trees((m,) + w_t, u)
    ext_layouts = ext.layout_map(u)
    base_layout = base.layout(m)

    def make(pi: int, mt: int):
        chain_p, verts_p = paths[pi]
        idx = np.empty(base.dim(m), dtype=np.int64)
        for xs, off_b, nt_b, md_b in base_layout:
            xs_e = xs + ((t_lab,) if t_lab is not None else ())
            off_e, nt_e, md_e = ext_layouts[xs_e]
            strides_b, tot_b = _mult_strides(md_b)
            strides_e, tot_e = _mult_strides(md_e)
            eidx = cat.tree_index(ext.flat(xs_e), u)
            trees_b = cat.trees(base.flat(xs), m)
            for it, (chain_b, verts_b) in enumerate(trees_b):
                if chain_b:
                    full = (chain_b + chain_p[1:], verts_b + verts_p)
                else:
                    # empty base word at the unit root: drop the leading unit leaf
                    full = (chain_p[1:], verts_p[1:])
                ie = eidx[full]
                for mi in _multi_indices(md_b):
                    src = off_b + it * tot_b + sum(s * q for s, q in zip(strides_b, mi))
                    me = mi + ((mt,) if t_lab is not None else ())
                    dst = off_e + ie * tot_e + sum(s * q for s, q in zip(strides_e, me))
                    idx[src] = dst
        return idx

    return make


def amplify_left(factor, inner: IndMorphism, dom_p: Product, cod_p: Product) -> IndMorphism:
    """Tensor a fiber map on the left with the identity of a word or ind-object."""
    cat = dom_p.category
    dom_e = dom_p.with_factors((factor,) + dom_p.factors)
    cod_e = cod_p.with_factors((factor,) + cod_p.factors)
    f_ind = isinstance(factor, IndObject)
    f_obj = factor if f_ind else word(cat, factor)
    vi, vo = dom_e.to_ind(), cod_e.to_ind()
    blocks: dict[str, np.ndarray] = {}
    for u in cat.labels:
        nd, nc = dom_e.dim(u), cod_e.dim(u)
        if nd == 0 or nc == 0:
            continue
        jd, cols_d = _left_join(cat, dom_p, dom_e, f_obj, f_ind, u)
        jc, cols_c = _left_join(cat, cod_p, cod_e, f_obj, f_ind, u)
        mid = np.zeros((len(cols_c), len(cols_d)), dtype=complex)
        ci = {s: i for i, s in enumerate(cols_c)}
        for jdx, (t_lab, p, it, mt, q, base_idx, kappa) in enumerate(cols_d):
            ib = inner.blocks.get(q)
            if ib is None or not ib.size:
                continue
            col = ib[:, base_idx]
            for row_base, val in enumerate(col):
                if val == 0:
                    continue
                pos = ci.get((t_lab, p, it, mt, q, row_base, kappa))
                if pos is not None:
                    mid[pos, jdx] += val
        m = jc @ mid @ jd.conj().T
        if np.any(m):
            blocks[u] = m
    return IndMorphism(vi, vo, blocks)


def _left_join(cat, base: Product, ext: Product, f_obj, f_ind: bool, u: str):
    """Unitary from (front root/tree/mult, base fiber at q, joining vertex) to ext fibers."""
    cols = []
    heads = f_obj.support if f_ind else (None,)
    for t_lab in heads:
        w_t = _unit_word(cat, t_lab) if f_ind else tuple(f_obj)
        n_t = f_obj.m(t_lab) if f_ind else 1
        for p in cat.labels:
            for it in range(cat.tree_count(w_t, p)):
                for mt in range(n_t):
                    for q in cat.labels:
                        nb = base.dim(q)
                        nk = cat.N(p, q, u)
                        if nb == 0 or nk == 0:
                            continue
                        for bi in range(nb):
                            for kappa in range(nk):
                                cols.append((t_lab, p, it, mt, q, bi, kappa))
    mat = np.zeros((ext.dim(u), len(cols)), dtype=complex)
    ext_layouts = ext.layout_map(u)
    for jdx, (t_lab, p, it, mt, q, bi, kappa) in enumerate(cols):
        w_t = _unit_word(cat, t_lab) if f_ind else tuple(f_obj)
        # locate the base slot holding fiber index bi at root q
        hit = None
        for xs, off_b, nt_b, md_b in base.layout(q):
            tot_b = int(np.prod(md_b, dtype=np.int64))
            if off_b <= bi < off_b + nt_b * tot_b:
                hit = (xs, off_b, nt_b, md_b, tot_b)
                break
        if hit is None:
            continue
        xs, off_b, nt_b, md_b, tot_b = hit
        it_b, mrest = divmod(bi - off_b, tot_b)
        strides_b, _ = _mult_strides(md_b)
        mi = []
        r = mrest
        for s in strides_b:
            mi.append(r // s)
            r %= s
        xs_e = ((t_lab,) if f_ind else ()) + xs
        got = ext_layouts.get(xs_e)
        if got is None:
            continue
        off_e, nt_e, md_e = got
        strides_e, tot_e = _mult_strides(md_e)
        me = ((mt,) if f_ind else ()) + tuple(mi)
        w_base = base.flat(xs)
        jm = cat.join_matrix(w_t, w_base, u)
        jslots = cat.join_slots(w_t, w_base, u)
        try:
            jcol = jslots.index((p, it, q, it_b, kappa))
        except ValueError:
            continue
        col = jm[:, jcol]
        for i_tree, val in enumerate(col):
            if val == 0:
                continue
            dst = off_e + i_tree * tot_e + sum(s * mm for s, mm in zip(strides_e, me))
            mat[dst, jdx] += val
    return mat, cols


def promote_word_factor(prod: Product, k: int, v: IndObject, label: str, m_index: int):
    """Reinterpret the single-letter word factor ``k`` as multiplicity slot
    ``m_index`` of the ind-object ``v`` at ``label``.

    Returns ``(new_product, iso)`` with ``iso`` an isometric inclusion of
    fiber bases (the flat words are unchanged).
    """
    cat = prod.category
    if not _is_word_factor(prod.factors[k]) or prod.factors[k] != _unit_word(cat, label):
        raise ComposeError("factor k must be the single-letter word of the label")
    if not (0 <= m_index < v.m(label)):
        raise ComposeError("multiplicity index out of range")
    new = prod.with_factors(prod.factors[:k] + (v,) + prod.factors[k + 1:])
    k_ind = sum(1 for f in prod.factors[:k] if isinstance(f, IndObject))
    blocks: dict[str, np.ndarray] = {}
    for u in cat.labels:
        nd = prod.dim(u)
        if nd == 0:
            continue
        mat = np.zeros((new.dim(u), nd), dtype=complex)
        new_layout = new.layout_map(u)
        for xs, off_o, nt_o, md_o in prod.layout(u):
            xs_n = xs[:k_ind] + (label,) + xs[k_ind:]
            got = new_layout.get(xs_n)
            if got is None:
                continue
            off_n, nt_n, md_n = got
            strides_o, tot_o = _mult_strides(md_o)
            strides_n, tot_n = _mult_strides(md_n)
            for it in range(nt_o):
                for mi in _multi_indices(md_o):
                    mn = mi[:k_ind] + (m_index,) + mi[k_ind:]
                    src = off_o + it * tot_o + sum(s * m for s, m in zip(strides_o, mi))
                    dst = off_n + it * tot_n + sum(s * m for s, m in zip(strides_n, mn))
                    mat[dst, src] = 1.0
        if np.any(mat):
            blocks[u] = mat
    return new, IndMorphism(prod.to_ind(), new.to_ind(), blocks)


def _is_word_factor(f) -> bool:
    return not isinstance(f, IndObject)


@dataclass
class TensorDecomposition:
    """A binary tensor product with its recorded slot decomposition."""

    product: Product
    total: IndObject

    def slots(self, u: str):
        """Slot descriptors (b, c, omega, i, j) at root ``u``, in basis order."""
        out = []
        for xs, off, nt, md in self.product.layout(u):
            b, c = xs
            for om in range(nt):
                for i in range(md[0]):
                    for j in range(md[1]):
                        out.append((b, c, om, i, j))
        return out


def tensor_ind(v1: IndObject, v2: IndObject, mode: str = ALGEBRAIC) -> TensorDecomposition:
    """Tensor product of ind-objects with the recorded (b, c, omega) slots."""
    if v1.category is not v2.category:
        raise ComposeError("tensor across categories")
    p = Product(v1.category, (v1, v2), mode)
    return TensorDecomposition(p, p.to_ind())


def hilb_inner_product(dec: TensorDecomposition, a: str, xi, eta) -> complex:
    """Inner product on the fiber at ``a`` with the (d_b d_c)^{-1} summand scaling.

    ``xi`` and ``eta`` are coordinate vectors in the recorded (raw) slot basis;
    the value is linear in ``xi`` and conjugate-linear in ``eta``.
    """
    cat = dec.product.category
    xi = np.asarray(xi, dtype=complex)
    eta = np.asarray(eta, dtype=complex)
    n = dec.product.dim(a)
    if xi.shape != (n,) or eta.shape != (n,):
        raise ComposeError(f"fiber at {a!r} has dimension {n}")
    total = 0.0 + 0.0j
    for xs, off, nt, md in dec.product.layout(a):
        b, c = xs
        w = 1.0 / (cat.qdim[b] * cat.qdim[c])
        block = nt * int(np.prod(md, dtype=np.int64))
        total += w * np.vdot(eta[off: off + block], xi[off: off + block])
    return complex(total)
