"""Skeletal unitary fusion categories and their diagrammatic morphism calculus.

A category is specified by its fusion multiplicities ``N[a][b][c] = dim C(c, a@b)``,
quantum dimensions, a dual involution and a unitary associator (F-symbols).
Morphisms between tensor words of simple labels are stored as coefficient
blocks in the left-comb fusion-tree pair basis; all recoupling is done by
F-moves.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "FusionDataError",
    "ComposeError",
    "FusionCategory",
    "Morphism",
    "ValidationReport",
    "word",
    "dual_word",
    "identity",
    "zero",
    "compose",
    "tensor",
    "onb",
    "cup",
    "cap",
    "cup_word",
    "cap_word",
    "frobenius_left",
    "frobenius_left_inv",
    "frobenius_right",
    "frobenius_right_inv",
    "dual_morphism",
    "validate",
]

Word = tuple[str, ...]

Tree = tuple[tuple[str, ...], tuple[int, ...]]
# A left-comb fusion tree of ``w`` with root ``r`` is a pair (chain, verts):
# chain[i] is the root of the prefix w[:i+1] (so chain[0] = w[0], chain[-1] = r),
# verts[i] indexes an orthonormal vertex in C(chain[i+1], chain[i] @ w[i+1]).


class FusionDataError(ValueError):
    """Structurally malformed fusion data (hard error, not a residual)."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


class ComposeError(ValueError):
    """Domain/codomain or category mismatch in a categorical operation."""


class FusionCategory:
    """Skeletal fusion category data: labels, duals, fusion rules, dims, F-symbols.

    Parameters
    ----------
    labels : sequence of str
        Simple labels in a fixed total order; all enumerations follow it.
    unit : str
        The tensor unit label.
    dual : mapping label -> label
        The conjugation involution.
    fusion : mapping (a, b, c) -> int
        Multiplicities ``N[a][b][c] = dim C(c, a@b)``; absent keys are zero.
    qdim : mapping label -> float
        Quantum dimensions (positive).
    fsymbols : mapping (a, b, c, d) -> ndarray
        Unitary F-matrix relating the two parenthesisations of ``C(d, a@b@c)``.
        Rows run over ``(e, alpha, beta)`` with ``alpha`` a vertex of
        ``C(e, a@b)`` and ``beta`` a vertex of ``C(d, e@c)``; columns over
        ``(f, mu, nu)`` with ``mu`` in ``C(f, b@c)`` and ``nu`` in ``C(d, a@f)``.
        The convention is ``(alpha ox id_c) o beta = sum F[(e,alpha,beta),(f,mu,nu)]
        (id_a ox mu) o nu``.  Entries with a unit argument are implied trivial
        and must not be supplied.
    name : str, optional
        Display name.
    """

    def __init__(self, labels, unit, dual, fusion, qdim, fsymbols, name="category"):
        self.labels: tuple[str, ...] = tuple(labels)
        self.unit: str = unit
        self.dual: dict[str, str] = dict(dual)
        self.qdim: dict[str, float] = {a: float(qdim[a]) for a in self.labels}
        self.name = name
        self._index = {a: i for i, a in enumerate(self.labels)}
        self._check_structure()
        self._N: dict[tuple[str, str, str], int] = {}
        for (a, b, c), n in fusion.items():
            n = int(n)
            if n < 0:
                raise FusionDataError("E_FUSION_MALFORMED", f"negative multiplicity at {(a, b, c)}")
            if n:
                self._N[(a, b, c)] = n
        self._enforce_unit_fusion()
        self._F: dict[tuple[str, str, str, str], np.ndarray] = {}
        for key, mat in fsymbols.items():
            a, b, c, d = key
            if self.unit in (a, b, c):
                raise FusionDataError("E_F_UNIT", f"F entry {key} involves the unit; unit F-moves are implied trivial")
            mat = np.asarray(mat, dtype=complex)
            want = (len(self.f_left_slots(a, b, c, d)), len(self.f_right_slots(a, b, c, d)))
            if mat.shape != want:
                raise FusionDataError("E_F_SHAPE", f"F{key} has shape {mat.shape}, expected {want}")
            self._F[key] = mat
        self._check_f_complete()
        self._cache: dict = {}
        self._cup_coeffs: dict[str, tuple[complex, complex]] | None = None

    # -- structural checks ---------------------------------------------------

    def _check_structure(self):
        if len(set(self.labels)) != len(self.labels):
            raise FusionDataError("E_LABEL_DUP", "duplicate labels")
        if self.unit not in self._index:
            raise FusionDataError("E_UNIT_MISSING", f"unit label {self.unit!r} not in label set")
        for a in self.labels:
            if self.dual.get(a) not in self._index:
                raise FusionDataError("E_DUAL_MISSING", f"no dual assigned to {a!r}")
            if self.dual[self.dual[a]] != a:
                raise FusionDataError("E_DUAL_NOT_INVOLUTIVE", f"dual(dual({a!r})) != {a!r}")
        if self.dual[self.unit] != self.unit:
            raise FusionDataError("E_DUAL_NOT_INVOLUTIVE", "dual(unit) != unit")
        for a in self.labels:
            if not (self.qdim[a] > 0):
                raise FusionDataError("E_DIM_INVALID", f"qdim({a!r}) must be positive")

    def _enforce_unit_fusion(self):
        e = self.unit
        for a in self.labels:
            for c in self.labels:
                want = 1 if a == c else 0
                if self._N.get((a, e, c), 0) != want or self._N.get((e, a, c), 0) != want:
                    raise FusionDataError("E_FUSION_MALFORMED", f"unit fusion rule violated at ({a}, {c})")
        for a in self.labels:
            if self.N(a, self.dual[a], e) != 1 or self.N(self.dual[a], a, e) != 1:
                raise FusionDataError("E_FUSION_MALFORMED", f"C(1, {a}@dual) must be one-dimensional")

    def _check_f_complete(self):
        e = self.unit
        for a, b, c in itertools.product(self.labels, repeat=3):
            if e in (a, b, c):
                continue
            for d in self.labels:
                n = len(self.f_left_slots(a, b, c, d))
                if n == 0:
                    continue
                if (a, b, c, d) not in self._F:
                    if self.is_pointed():
                        self._F[(a, b, c, d)] = np.eye(n, dtype=complex)
                    else:
                        raise FusionDataError("E_F_MISSING", f"missing F entry for {(a, b, c, d)}")

    # -- basic accessors -----------------------------------------------------

    def N(self, a: str, b: str, c: str) -> int:
        """Multiplicity dim C(c, a@b)."""
        return self._N.get((a, b, c), 0)

    def fusion_outcomes(self, a: str, b: str):
        return tuple(c for c in self.labels if self.N(a, b, c))

    def is_pointed(self) -> bool:
        """True when every product of simples is simple and all dims are 1."""
        if any(abs(self.qdim[a] - 1.0) > 1e-12 for a in self.labels):
            return False
        for a, b in itertools.product(self.labels, repeat=2):
            if sum(self.N(a, b, c) for c in self.labels) != 1:
                return False
        return True

    def global_dim(self) -> float:
        return sum(self.qdim[a] ** 2 for a in self.labels)

    def f_left_slots(self, a, b, c, d):
        """Slots (e, alpha, beta) of the left-parenthesised basis of C(d, a@b@c)."""
        out = []
        for e in self.labels:
            for alpha in range(self.N(a, b, e)):
                for beta in range(self.N(e, c, d)):
                    out.append((e, alpha, beta))
        return out

    def f_right_slots(self, a, b, c, d):
        out = []
        for f in self.labels:
            for mu in range(self.N(b, c, f)):
                for nu in range(self.N(a, f, d)):
                    out.append((f, mu, nu))
        return out

    def F(self, a, b, c, d) -> np.ndarray:
        """The F-matrix (unit arguments give identity on the shared slot set)."""
        nl = len(self.f_left_slots(a, b, c, d))
        if self.unit in (a, b, c):
            return np.eye(nl, dtype=complex)
        mat = self._F.get((a, b, c, d))
        if mat is None:
            return np.zeros((nl, len(self.f_right_slots(a, b, c, d))), dtype=complex)
        return mat

    def __repr__(self):
        return f"FusionCategory({self.name!r}, labels={list(self.labels)})"

    # -- fusion trees ----------------------------------------------------------

    def trees(self, w: Word, root: str) -> list[Tree]:
        """All left-comb fusion trees of the word ``w`` with the given root."""
        key = ("trees", w, root)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if len(w) == 0:
            out = [((), ())] if root == self.unit else []
        elif len(w) == 1:
            out = [((w[0],), ())] if root == w[0] else []
        else:
            out = []
            for m in self.labels:
                nv = self.N(m, w[-1], root)
                if nv == 0:
                    continue
                for chain, verts in self.trees(w[:-1], m):
                    for v in range(nv):
                        out.append((chain + (root,), verts + (v,)))
        self._cache[key] = out
        return out

    def tree_count(self, w: Word, root: str) -> int:
        return len(self.trees(w, root))

    def tree_index(self, w: Word, root: str):
        key = ("treeidx", w, root)
        hit = self._cache.get(key)
        if hit is None:
            hit = {t: i for i, t in enumerate(self.trees(w, root))}
            self._cache[key] = hit
        return hit

    # -- recoupling engine -----------------------------------------------------

    def attach_slots(self, p: str, B: Word, u: str):
        """Column slots (q, tB, kappa) of :meth:`attach_matrix`, in canonical order."""
        out = []
        for q in self.labels:
            tb = self.trees(B, q)
            nk = self.N(p, q, u)
            if nk == 0 or not tb:
                continue
            for ib in range(len(tb)):
                for k in range(nk):
                    out.append((q, ib, k))
        return out

    def attach_matrix(self, p: str, B: Word, u: str) -> np.ndarray:
        """Unitary expanding ``(id_p ox tB) o kappa`` in left-comb trees of (p,)+B.

        Rows run over ``trees((p,)+B, u)``; columns over :meth:`attach_slots`.
        This is the single recoupling primitive: substituting a tree into any
        non-leading slot of a left comb reduces to iterating it.
        """
        key = ("attach", p, B, u)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        rows = self.trees((p,) + B, u)
        cols = self.attach_slots(p, B, u)
        mat = np.zeros((len(rows), len(cols)), dtype=complex)
        if len(B) == 0:
            if u == p and rows and cols:
                mat[0, 0] = 1.0
        elif len(B) == 1:
            # (id_p ox id_b) o kappa is itself a comb tree; pure reindexing.
            ridx = self.tree_index((p,) + B, u)
            for j, (q, ib, k) in enumerate(cols):
                mat[ridx[((p, u), (k,))], j] = 1.0
        else:
            Bp, bl = B[:-1], B[-1]
            ridx = self.tree_index((p,) + B, u)
            sub_idx: dict[str, dict] = {}
            sub_mat: dict[str, np.ndarray] = {}
            sub_cols: dict[str, list] = {}
            for j, (q, ib, k) in enumerate(cols):
                chainB, vertsB = self.trees(B, q)[ib]
                qp, lam = chainB[-2], vertsB[-1]
                tBp = (chainB[:-1], vertsB[:-1])
                fmat = self.F(p, qp, bl, u)
                lslots = self.f_left_slots(p, qp, bl, u)
                rj = self.f_right_slots(p, qp, bl, u).index((q, lam, k))
                for i_l, (e, alpha, beta) in enumerate(lslots):
                    coeff = np.conj(fmat[i_l, rj])
                    if coeff == 0:
                        continue
                    if e not in sub_mat:
                        sub_mat[e] = self.attach_matrix(p, Bp, e)
                        sub_cols[e] = {s: i for i, s in enumerate(self.attach_slots(p, Bp, e))}
                        sub_idx[e] = self.tree_index((p,) + Bp, e)
                    jb = sub_cols[e].get((qp, self.tree_index(Bp, qp)[tBp], alpha))
                    if jb is None:
                        continue
                    col_vec = sub_mat[e][:, jb]
                    for tprime, i_t in sub_idx[e].items():
                        val = coeff * col_vec[i_t]
                        if val == 0:
                            continue
                        full = (tprime[0] + (u,), tprime[1] + (beta,))
                        mat[ridx[full], j] += val
        self._cache[key] = mat
        return mat

    def join_slots(self, A: Word, B: Word, u: str):
        """Slots (p, tA, q, tB, kappa) of the pairwise decomposition of A+B trees."""
        out = []
        for p in self.labels:
            ta = self.trees(A, p)
            if not ta:
                continue
            for ia in range(len(ta)):
                for (q, ib, k) in self.attach_slots(p, B, u):
                    out.append((p, ia, q, ib, k))
        return out

    def join_matrix(self, A: Word, B: Word, u: str) -> np.ndarray:
        """Unitary from the (tree of A, tree of B, joining vertex) basis to trees of A+B."""
        key = ("join", A, B, u)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        rows = self.trees(A + B, u)
        cols = self.join_slots(A, B, u)
        mat = np.zeros((len(rows), len(cols)), dtype=complex)
        ridx = self.tree_index(A + B, u)
        la = len(A)
        if la == 0:
            for j, (p, ia, q, ib, k) in enumerate(cols):
                mat[ridx[self.trees(B, q)[ib]], j] = 1.0
        elif len(B) == 0:
            for j, (p, ia, q, ib, k) in enumerate(cols):
                mat[ridx[self.trees(A, p)[ia]], j] = 1.0
        else:
            cidx = {s: j for j, s in enumerate(cols)}
            for p in self.labels:
                ta = self.trees(A, p)
                if not ta:
                    continue
                am = self.attach_matrix(p, B, u)
                acols = self.attach_slots(p, B, u)
                arows = self.trees((p,) + B, u)
                for ia, (chainA, vertsA) in enumerate(ta):
                    for i_s, (chainS, vertsS) in enumerate(arows):
                        # graft the A-tree onto the leading leaf p of the suffix comb
                        full = (chainA + chainS[1:], vertsA + vertsS)
                        for jc, (q, ib, k) in enumerate(acols):
                            val = am[i_s, jc]
                            if val == 0:
                                continue
                            mat[ridx[full], cidx[(p, ia, q, ib, k)]] += val
        self._cache[key] = mat
        return mat


def strip_unit_letters(cat: FusionCategory, w: Word, root: str) -> np.ndarray:
    """Index map from trees of a word containing unit letters to trees of the
    stripped word (a bijection; unit letters force their vertices)."""
    stripped = tuple(x for x in w if x != cat.unit)
    src = cat.trees(w, root)
    dst = cat.tree_index(stripped, root)
    out = np.empty(len(src), dtype=np.int64)
    for i, (chain, verts) in enumerate(src):
        ch: list[str] = []
        vs: list[int] = []
        for j, lbl in enumerate(w):
            if lbl == cat.unit:
                continue
            if ch:
                vs.append(verts[j - 1])
            ch.append(chain[j])
        out[i] = dst[(tuple(ch), tuple(vs))]
    return out


def word(cat: FusionCategory, letters) -> Word:
    """Normalised tensor word: a tuple of labels with unit letters removed."""
    if isinstance(letters, str):
        letters = (letters,)
    w = tuple(x for x in letters if x != cat.unit)
    for x in w:
        if x not in cat._index:
            raise FusionDataError("E_LABEL_UNKNOWN", f"unknown label {x!r}")
    return w


def dual_word(cat: FusionCategory, w: Word) -> Word:
    return tuple(cat.dual[x] for x in reversed(w))


@dataclass
class Morphism:
    """A morphism between tensor words, as coefficient blocks per simple root.

    ``blocks[s]`` has shape ``(tree_count(codomain, s), tree_count(domain, s))``;
    absent roots are zero.  The represented morphism is
    ``sum_s sum_{t2,t1} blocks[s][t2,t1] * t2 o dagger(t1)``.
    """

    category: FusionCategory
    domain: Word
    codomain: Word
    blocks: dict[str, np.ndarray] = field(default_factory=dict)

    def block(self, s: str) -> np.ndarray:
        b = self.blocks.get(s)
        if b is None:
            return np.zeros((self.category.tree_count(self.codomain, s),
                             self.category.tree_count(self.domain, s)), dtype=complex)
        return b

    def roots(self):
        c = self.category
        return [s for s in c.labels
                if c.tree_count(self.domain, s) and c.tree_count(self.codomain, s)]

    def dagger(self) -> "Morphism":
        return Morphism(self.category, self.codomain, self.domain,
                        {s: b.conj().T for s, b in self.blocks.items()})

    def norm(self) -> float:
        """C*-norm: the largest operator norm among the root blocks."""
        vals = [np.linalg.norm(b, 2) for b in self.blocks.values() if b.size]
        return max(vals, default=0.0)

    def coeff_norm(self) -> float:
        """Frobenius norm of all coefficients (vector 2-norm on hom space)."""
        return float(np.sqrt(sum(np.sum(np.abs(b) ** 2) for b in self.blocks.values())))

    def scalar(self) -> complex:
        """The scalar of an endomorphism of a simple-or-unit object."""
        if self.domain != self.codomain:
            raise ComposeError("scalar() needs an endomorphism")
        nz = [(s, b) for s, b in self.blocks.items() if b.size]
        if not nz:
            return 0.0 + 0.0j
        if len(nz) > 1 or nz[0][1].shape != (1, 1):
            raise ComposeError("endomorphism space is not one-dimensional")
        return complex(nz[0][1][0, 0])

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(np.max(np.abs(b)) <= tol for b in self.blocks.values()) if self.blocks else True

    def __add__(self, other: "Morphism") -> "Morphism":
        _check_parallel(self, other)
        out = {s: b.copy() for s, b in self.blocks.items()}
        for s, b in other.blocks.items():
            out[s] = out.get(s, 0) + b
        return Morphism(self.category, self.domain, self.codomain, out)

    def __sub__(self, other: "Morphism") -> "Morphism":
        return self + (-1.0) * other

    def __rmul__(self, c: complex) -> "Morphism":
        return Morphism(self.category, self.domain, self.codomain,
                        {s: c * b for s, b in self.blocks.items()})

    def __matmul__(self, other: "Morphism") -> "Morphism":
        return compose(self, other)

    def __repr__(self):
        return f"Morphism({'.'.join(self.domain) or '1'} -> {'.'.join(self.codomain) or '1'})"


def _check_parallel(f: Morphism, g: Morphism):
    if f.category is not g.category:
        raise ComposeError("morphisms live in different categories")
    if f.domain != g.domain or f.codomain != g.codomain:
        raise ComposeError(f"shape mismatch: {f!r} vs {g!r}")


def identity(cat: FusionCategory, w) -> Morphism:
    w = word(cat, w)
    blocks = {}
    for s in cat.labels:
        n = cat.tree_count(w, s)
        if n:
            blocks[s] = np.eye(n, dtype=complex)
    return Morphism(cat, w, w, blocks)


def zero(cat: FusionCategory, dom, cod) -> Morphism:
    return Morphism(cat, word(cat, dom), word(cat, cod), {})


def compose(g: Morphism, f: Morphism) -> Morphism:
    """g o f, by blockwise matrix product over shared roots."""
    if f.category is not g.category:
        raise ComposeError("morphisms live in different categories")
    if f.codomain != g.domain:
        raise ComposeError(f"cannot compose {g!r} after {f!r}")
    blocks = {}
    for s, fb in f.blocks.items():
        gb = g.blocks.get(s)
        if gb is not None and fb.size and gb.size:
            blocks[s] = gb @ fb
    return Morphism(f.category, f.domain, g.codomain, blocks)


def tensor(f: Morphism, g: Morphism) -> Morphism:
    """Horizontal composition f ox g, via join-matrix recoupling."""
    if f.category is not g.category:
        raise ComposeError("morphisms live in different categories")
    cat = f.category
    dom = f.domain + g.domain
    cod = f.codomain + g.codomain
    blocks = {}
    for u in cat.labels:
        nd = cat.tree_count(dom, u)
        nc = cat.tree_count(cod, u)
        if nd == 0 or nc == 0:
            continue
        jd = cat.join_matrix(f.domain, g.domain, u)
        jc = cat.join_matrix(f.codomain, g.codomain, u)
        cols_d = cat.join_slots(f.domain, g.domain, u)
        cols_c = cat.join_slots(f.codomain, g.codomain, u)
        mid = np.zeros((len(cols_c), len(cols_d)), dtype=complex)
        ci = {s: i for i, s in enumerate(cols_c)}
        for jdx, (p, ia, q, ib, k) in enumerate(cols_d):
            fb = f.blocks.get(p)
            gb = g.blocks.get(q)
            if fb is None or gb is None:
                continue
            for ia2 in range(fb.shape[0]):
                fv = fb[ia2, ia]
                if fv == 0:
                    continue
                for ib2 in range(gb.shape[0]):
                    gv = gb[ib2, ib]
                    if gv == 0:
                        continue
                    mid[ci[(p, ia2, q, ib2, k)], jdx] = fv * gv
        m = jc @ mid @ jd.conj().T
        if np.any(m):
            blocks[u] = m
    return Morphism(cat, dom, cod, blocks)


def onb(cat: FusionCategory, b: str, w) -> list[Morphism]:
    """Orthonormal basis of C(b, w): the left-comb tree morphisms."""
    w = word(cat, w)
    out = []
    n = cat.tree_count(w, b)
    for i in range(n):
        m = np.zeros((n, 1), dtype=complex)
        m[i, 0] = 1.0
        out.append(Morphism(cat, (b,) if b != cat.unit else (), w, {b: m}))
    return out


def _vertex_morphism(cat: FusionCategory, w2: Word, root: str) -> Morphism:
    """The unique tree morphism root -> w2 for a one-dimensional hom space."""
    assert cat.tree_count(w2, root) == 1
    dom = (root,) if root != cat.unit else ()
    return Morphism(cat, dom, w2, {root: np.array([[1.0 + 0.0j]])})


def _cup_coefficients(cat: FusionCategory) -> dict[str, tuple[complex, complex]]:
    """Coefficients (r, rbar) with R_a = r * v(dual a, a), Rbar_a = rbar * v(a, dual a).

    Solves the conjugate equations with the normalisation R* R = d_a; the
    relative phase is fixed by the zig-zag scalar of the unit-rooted vertices,
    and conjugate pairs share solutions so that R_{dual a} = Rbar_a.
    """
    coeffs: dict[str, tuple[complex, complex]] = {}
    done = set()
    for a in cat.labels:
        if a in done:
            continue
        if a == cat.unit:
            coeffs[a] = (1.0 + 0.0j, 1.0 + 0.0j)
            done.add(a)
            continue
        ab = cat.dual[a]
        d = cat.qdim[a]
        # v1 in C(1, dual(a) @ a), v2 in C(1, a @ dual(a)), hom-orthonormal vertices
        v1 = Morphism(cat, (), word(cat, (ab, a)), {cat.unit: np.array([[1.0 + 0.0j]])})
        v2 = Morphism(cat, (), word(cat, (a, ab)), {cat.unit: np.array([[1.0 + 0.0j]])})
        # zig-zag scalar z = (v2* ox id_a)(id_a ox v1) as an endomorphism of a
        zig = compose(tensor(v2.dagger(), identity(cat, a)), tensor(identity(cat, a), v1))
        z = zig.scalar()
        if abs(z) < 1e-14:
            raise FusionDataError("E_GAUGE", f"degenerate zig-zag for label {a!r}")
        r = complex(np.sqrt(d))
        rb = 1.0 / (np.sqrt(d) * np.conj(z))
        coeffs[a] = (r, rb)
        done.add(a)
        if ab != a:
            coeffs[ab] = (rb, r)
            done.add(ab)
    return coeffs


def cup(cat: FusionCategory, a: str) -> Morphism:
    """R_a in C(1, dual(a) @ a) with R* R = d_a and the zig-zag identities."""
    if a not in cat._index:
        raise FusionDataError("E_LABEL_UNKNOWN", f"unknown label {a!r}")
    if cat._cup_coeffs is None:
        cat._cup_coeffs = _cup_coefficients(cat)
    r, _ = cat._cup_coeffs[a]
    w = word(cat, (cat.dual[a], a))
    return Morphism(cat, (), w, {cat.unit: np.array([[r]], dtype=complex)})


def cap(cat: FusionCategory, a: str) -> Morphism:
    """Rbar_a in C(1, a @ dual(a)); equals R_{dual(a)} in this gauge."""
    if a not in cat._index:
        raise FusionDataError("E_LABEL_UNKNOWN", f"unknown label {a!r}")
    if cat._cup_coeffs is None:
        cat._cup_coeffs = _cup_coefficients(cat)
    _, rb = cat._cup_coeffs[a]
    w = word(cat, (a, cat.dual[a]))
    return Morphism(cat, (), w, {cat.unit: np.array([[rb]], dtype=complex)})


def cup_word(cat: FusionCategory, w) -> Morphism:
    """R_W in C(1, dual(W) @ W), built letterwise."""
    w = word(cat, w)
    if not w:
        return identity(cat, ())
    head, x = w[:-1], w[-1]
    inner = cup_word(cat, head)
    return compose(tensor(tensor(identity(cat, cat.dual[x]), inner), identity(cat, x)),
                   cup(cat, x))


def cap_word(cat: FusionCategory, w) -> Morphism:
    """Rbar_W in C(1, W @ dual(W)), built letterwise."""
    w = word(cat, w)
    if not w:
        return identity(cat, ())
    x, tail = w[0], w[1:]
    inner = cap_word(cat, tail)
    return compose(tensor(tensor(identity(cat, x), inner), identity(cat, cat.dual[x])),
                   cap(cat, x))


def frobenius_left(cat: FusionCategory, f: Morphism, U) -> Morphism:
    """Bend the left factor: C(U @ U1, U2) -> C(U1, dual(U) @ U2)."""
    U = word(cat, U)
    if f.domain[:len(U)] != U:
        raise ComposeError("frobenius_left: domain does not start with U")
    U1 = f.domain[len(U):]
    return compose(tensor(identity(cat, dual_word(cat, U)), f),
                   tensor(cup_word(cat, U), identity(cat, U1)))


def frobenius_left_inv(cat: FusionCategory, g: Morphism, U) -> Morphism:
    U = word(cat, U)
    ub = dual_word(cat, U)
    if g.codomain[:len(ub)] != ub:
        raise ComposeError("frobenius_left_inv: codomain does not start with dual(U)")
    U2 = g.codomain[len(ub):]
    return compose(tensor(cap_word(cat, U).dagger(), identity(cat, U2)),
                   tensor(identity(cat, U), g))


def frobenius_right(cat: FusionCategory, f: Morphism, U) -> Morphism:
    """Bend the right factor: C(U1 @ U, U2) -> C(U1, U2 @ dual(U))."""
    U = word(cat, U)
    if len(U) and f.domain[-len(U):] != U:
        raise ComposeError("frobenius_right: domain does not end with U")
    U1 = f.domain[:len(f.domain) - len(U)]
    return compose(tensor(f, identity(cat, dual_word(cat, U))),
                   tensor(identity(cat, U1), cap_word(cat, U)))


def frobenius_right_inv(cat: FusionCategory, g: Morphism, U) -> Morphism:
    U = word(cat, U)
    ub = dual_word(cat, U)
    if len(ub) and g.codomain[len(g.codomain) - len(ub):] != ub:
        raise ComposeError("frobenius_right_inv: codomain does not end with dual(U)")
    U2 = g.codomain[:len(g.codomain) - len(ub)]
    return compose(tensor(identity(cat, U2), cup_word(cat, U).dagger()),
                   tensor(g, identity(cat, U)))


def dual_morphism(cat: FusionCategory, f: Morphism) -> Morphism:
    """The transpose f^vee: dual(cod) -> dual(dom), by bending both sides."""
    u1, u2 = f.domain, f.codomain
    u1b, u2b = dual_word(cat, u1), dual_word(cat, u2)
    step = compose(tensor(tensor(identity(cat, u1b), f), identity(cat, u2b)),
                   tensor(cup_word(cat, u1), identity(cat, u2b)))
    return compose(tensor(identity(cat, u1b), cap_word(cat, u2).dagger()), step)


# -- validation ----------------------------------------------------------------


@dataclass
class ValidationReport:
    """Residuals of pentagon, F-unitarity, conjugate equations and dims."""

    category: str
    pentagon: float
    f_unitarity: float
    conjugate: float
    dims: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return max(self.pentagon, self.f_unitarity, self.conjugate, self.dims) < self.tolerance

    def records(self):
        return [
            ("pentagon", self.pentagon),
            ("f_unitarity", self.f_unitarity),
            ("conjugate_equations", self.conjugate),
            ("dimension_equation", self.dims),
        ]


def _pentagon_residual(cat: FusionCategory) -> float:
    """Max deviation between the two recoupling paths on four-letter trees."""
    worst = 0.0
    labels = [x for x in cat.labels if x != cat.unit]
    for a, b, c, d in itertools.product(labels, repeat=4):
        for e in cat.labels:
            b1 = [(x, al, y, be, ga)
                  for x in cat.labels for al in range(cat.N(a, b, x))
                  for y in cat.labels for be in range(cat.N(x, c, y))
                  for ga in range(cat.N(y, d, e))]
            if not b1:
                continue
            b2 = [(w, mu, y, nu, ga)
                  for w in cat.labels for mu in range(cat.N(b, c, w))
                  for y in cat.labels for nu in range(cat.N(a, w, y))
                  for ga in range(cat.N(y, d, e))]
            b3 = [(w, mu, z, rho, sg)
                  for w in cat.labels for mu in range(cat.N(b, c, w))
                  for z in cat.labels for rho in range(cat.N(w, d, z))
                  for sg in range(cat.N(a, z, e))]
            b4 = [(v, ka, z, rho, sg)
                  for v in cat.labels for ka in range(cat.N(c, d, v))
                  for z in cat.labels for rho in range(cat.N(b, v, z))
                  for sg in range(cat.N(a, z, e))]
            b5 = [(x, al, v, ka, de)
                  for x in cat.labels for al in range(cat.N(a, b, x))
                  for v in cat.labels for ka in range(cat.N(c, d, v))
                  for de in range(cat.N(x, v, e))]

            def expand(rows, cols, rule):
                m = np.zeros((len(rows), len(cols)), dtype=complex)
                ci = {s: i for i, s in enumerate(cols)}
                for i, r in enumerate(rows):
                    for s, val in rule(r):
                        m[i, ci[s]] += val
                return m

            def e12(r):
                x, al, y, be, ga = r
                fm = cat.F(a, b, c, y)
                li = cat.f_left_slots(a, b, c, y).index((x, al, be))
                for jr, (w, mu, nu) in enumerate(cat.f_right_slots(a, b, c, y)):
                    v = fm[li, jr]
                    if v:
                        yield (w, mu, y, nu, ga), v

            def e23(r):
                w, mu, y, nu, ga = r
                fm = cat.F(a, w, d, e)
                li = cat.f_left_slots(a, w, d, e).index((y, nu, ga))
                for jr, (z, rho, sg) in enumerate(cat.f_right_slots(a, w, d, e)):
                    v = fm[li, jr]
                    if v:
                        yield (w, mu, z, rho, sg), v

            def e34(r):
                w, mu, z, rho, sg = r
                fm = cat.F(b, c, d, z)
                li = cat.f_left_slots(b, c, d, z).index((w, mu, rho))
                for jr, (v_, ka, rho2) in enumerate(cat.f_right_slots(b, c, d, z)):
                    v = fm[li, jr]
                    if v:
                        yield (v_, ka, z, rho2, sg), v

            def e15(r):
                x, al, y, be, ga = r
                fm = cat.F(x, c, d, e)
                li = cat.f_left_slots(x, c, d, e).index((y, be, ga))
                for jr, (v_, ka, de) in enumerate(cat.f_right_slots(x, c, d, e)):
                    v = fm[li, jr]
                    if v:
                        yield (x, al, v_, ka, de), v

            def e54(r):
                x, al, v_, ka, de = r
                fm = cat.F(a, b, v_, e)
                li = cat.f_left_slots(a, b, v_, e).index((x, al, de))
                for jr, (z, rho, sg) in enumerate(cat.f_right_slots(a, b, v_, e)):
                    v = fm[li, jr]
                    if v:
                        yield (v_, ka, z, rho, sg), v

            m12 = expand(b1, b2, e12)
            m23 = expand(b2, b3, e23)
            m34 = expand(b3, b4, e34)
            m15 = expand(b1, b5, e15)
            m54 = expand(b5, b4, e54)
            lhs = m12 @ m23 @ m34
            rhs = m15 @ m54
            if lhs.size:
                worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def _f_unitarity_residual(cat: FusionCategory) -> float:
    worst = 0.0
    labels = [x for x in cat.labels if x != cat.unit]
    for a, b, c in itertools.product(labels, repeat=3):
        for d in cat.labels:
            nl = len(cat.f_left_slots(a, b, c, d))
            nr = len(cat.f_right_slots(a, b, c, d))
            if nl == 0 and nr == 0:
                continue
            if nl != nr:
                return float("inf")
            fm = cat.F(a, b, c, d)
            worst = max(worst, float(np.max(np.abs(fm @ fm.conj().T - np.eye(nl)))))
    return worst


def _conjugate_residual(cat: FusionCategory) -> float:
    worst = 0.0
    for a in cat.labels:
        r = cup(cat, a)
        rb = cap(cat, a)
        d = cat.qdim[a]
        ida = identity(cat, a)
        idab = identity(cat, cat.dual[a])
        zig1 = compose(tensor(rb.dagger(), ida), tensor(ida, r)) - ida
        zig2 = compose(tensor(r.dagger(), idab), tensor(idab, rb)) - idab
        worst = max(worst, zig1.norm(), zig2.norm())
        worst = max(worst, abs(compose(r.dagger(), r).scalar() - d))
        worst = max(worst, abs(compose(rb.dagger(), rb).scalar() - d))
    return worst


def _dim_residual(cat: FusionCategory) -> float:
    worst = abs(cat.qdim[cat.unit] - 1.0)
    for a in cat.labels:
        worst = max(worst, abs(cat.qdim[a] - cat.qdim[cat.dual[a]]))
    for a, b in itertools.product(cat.labels, repeat=2):
        s = sum(cat.N(a, b, c) * cat.qdim[c] for c in cat.labels)
        worst = max(worst, abs(cat.qdim[a] * cat.qdim[b] - s))
    return worst


def _check_fusion_coherence(cat: FusionCategory):
    """Integer-level checks: dual symmetry and associativity of the fusion ring."""
    for a, b, c in itertools.product(cat.labels, repeat=3):
        if cat.N(a, b, c) != cat.N(cat.dual[b], cat.dual[a], cat.dual[c]):
            raise FusionDataError("E_FUSION_DUAL", f"N({a},{b};{c}) breaks dual symmetry")
    for a, b, c, d in itertools.product(cat.labels, repeat=4):
        lhs = sum(cat.N(a, b, e) * cat.N(e, c, d) for e in cat.labels)
        rhs = sum(cat.N(b, c, f) * cat.N(a, f, d) for f in cat.labels)
        if lhs != rhs:
            raise FusionDataError("E_FUSION_ASSOC", f"fusion ring not associative at ({a},{b},{c};{d})")


def validate(cat: FusionCategory, tolerance: float = 1e-9) -> ValidationReport:
    """Certify pentagon, F-unitarity, conjugate equations and the dimension equation.

    Structural malformation raises :class:`FusionDataError`; numerical failures
    are reported as residuals in the returned report.
    """
    _check_fusion_coherence(cat)
    return ValidationReport(
        category=cat.name,
        pentagon=_pentagon_residual(cat),
        f_unitarity=_f_unitarity_residual(cat),
        conjugate=_conjugate_residual(cat),
        dims=_dim_residual(cat),
        tolerance=tolerance,
    )
