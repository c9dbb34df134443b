"""Fusion-data files: parsing, canonical serialisation, fingerprints, built-ins.

The on-disk format is a UTF-8 JSON object with fields ``labels``, ``unit``,
``dual``, ``dims``, ``fusion`` and ``F`` (see ``docs/fusion_data_schema.md``).
Parsing validates structure eagerly and reports distinct error codes with a
field locus; numerical certification is a separate step (``fusion.validate``).
"""

from __future__ import annotations

import hashlib
import json
from importlib import resources

import numpy as np

from .fusion import FusionCategory, FusionDataError

__all__ = [
    "parse_fusion_data",
    "load_fusion_data",
    "serialize_fusion_data",
    "fingerprint",
    "builtin",
    "BUILTIN_NAMES",
]

BUILTIN_NAMES = ("vec_z2", "vec_z3", "fib", "ising")


def _require(doc: dict, key: str, typ, code: str):
    if key not in doc:
        raise FusionDataError(code, f"missing required field {key!r}")
    val = doc[key]
    if not isinstance(val, typ):
        raise FusionDataError(code, f"field {key!r} has wrong type {type(val).__name__}")
    return val


def parse_fusion_data(text: str, name: str = "category") -> FusionCategory:
    """Parse and structurally validate a fusion-data document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FusionDataError("E_JSON_SYNTAX", f"line {exc.lineno} col {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise FusionDataError("E_JSON_SYNTAX", "top level must be an object")

    labels = _require(doc, "labels", list, "E_LABELS_MISSING")
    if not labels or not all(isinstance(x, str) for x in labels):
        raise FusionDataError("E_LABELS_MISSING", "labels must be a non-empty array of strings")
    unit = _require(doc, "unit", str, "E_UNIT_MISSING")
    dual = _require(doc, "dual", dict, "E_DUAL_MISSING")
    dims_raw = _require(doc, "dims", dict, "E_DIM_INVALID")
    dims = {}
    for a in labels:
        if a not in dims_raw:
            raise FusionDataError("E_DIM_INVALID", f"dims missing label {a!r}")
        try:
            dims[a] = float(dims_raw[a])
        except (TypeError, ValueError) as exc:
            raise FusionDataError("E_DIM_INVALID", f"dims[{a!r}] is not numeric") from exc

    fusion = {}
    for i, row in enumerate(_require(doc, "fusion", list, "E_FUSION_MALFORMED")):
        if not isinstance(row, dict) or not {"a", "b", "c", "N"} <= set(row):
            raise FusionDataError("E_FUSION_MALFORMED", f"fusion[{i}] must have fields a, b, c, N")
        key = (row["a"], row["b"], row["c"])
        if any(x not in labels for x in key):
            raise FusionDataError("E_LABEL_UNKNOWN", f"fusion[{i}] references unknown label")
        fusion[key] = int(row["N"])

    def slots_left(a, b, c, d):
        out = []
        for e in labels:
            for alpha in range(fusion.get((a, b, e), 0)):
                for beta in range(fusion.get((e, c, d), 0)):
                    out.append((e, alpha, beta))
        return out

    def slots_right(a, b, c, d):
        out = []
        for f in labels:
            for mu in range(fusion.get((b, c, f), 0)):
                for nu in range(fusion.get((a, f, d), 0)):
                    out.append((f, mu, nu))
        return out

    # unit entries of the fusion table are implied
    for a in labels:
        fusion.setdefault((a, unit, a), 1)
        fusion.setdefault((unit, a, a), 1)

    fmats: dict[tuple, np.ndarray] = {}
    for i, row in enumerate(doc.get("F", [])):
        need = {"a", "b", "c", "d", "e", "f", "alpha", "beta", "mu", "nu", "re"}
        if not isinstance(row, dict) or not need <= set(row):
            raise FusionDataError("E_F_MALFORMED", f"F[{i}] must carry fields {sorted(need)}")
        key = (row["a"], row["b"], row["c"], row["d"])
        if any(x not in labels for x in key + (row["e"], row["f"])):
            raise FusionDataError("E_LABEL_UNKNOWN", f"F[{i}] references unknown label")
        if key not in fmats:
            nl, nr = slots_left(*key), slots_right(*key)
            if not nl:
                raise FusionDataError("E_F_MALFORMED", f"F[{i}] addresses an empty recoupling space")
            fmats[key] = np.zeros((len(nl), len(nr)), dtype=complex)
        nl, nr = slots_left(*key), slots_right(*key)
        try:
            ri = nl.index((row["e"], int(row["alpha"]), int(row["beta"])))
            ci = nr.index((row["f"], int(row["mu"]), int(row["nu"])))
        except ValueError as exc:
            raise FusionDataError("E_F_MALFORMED", f"F[{i}] addresses an invalid vertex slot") from exc
        fmats[key][ri, ci] = float(row["re"]) + 1j * float(row.get("im", 0.0))

    return FusionCategory(labels, unit, dual, fusion, dims, fmats, name=name)


def load_fusion_data(path, name: str | None = None) -> FusionCategory:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if name is None:
        name = str(path).rsplit("/", 1)[-1].removesuffix(".json")
    return parse_fusion_data(text, name=name)


def _canonical_doc(cat: FusionCategory) -> dict:
    fusion_rows = []
    for a in cat.labels:
        for b in cat.labels:
            for c in cat.labels:
                if cat.unit in (a, b) or not cat.N(a, b, c):
                    continue
                fusion_rows.append({"a": a, "b": b, "c": c, "N": cat.N(a, b, c)})
    f_rows = []
    for (a, b, c, d), mat in sorted(cat._F.items()):
        nl = cat.f_left_slots(a, b, c, d)
        nr = cat.f_right_slots(a, b, c, d)
        for i, (e, alpha, beta) in enumerate(nl):
            for j, (f, mu, nu) in enumerate(nr):
                val = mat[i, j]
                if val == 0:
                    continue
                f_rows.append({"a": a, "b": b, "c": c, "d": d, "e": e, "f": f,
                               "alpha": alpha, "beta": beta, "mu": mu, "nu": nu,
                               "re": float(val.real), "im": float(val.imag)})
    return {
        "labels": list(cat.labels),
        "unit": cat.unit,
        "dual": {a: cat.dual[a] for a in cat.labels},
        "dims": {a: repr(cat.qdim[a]) for a in cat.labels},
        "fusion": fusion_rows,
        "F": f_rows,
    }


def serialize_fusion_data(cat: FusionCategory) -> str:
    """Canonical (byte-stable) fusion-data document for a category."""
    return json.dumps(_canonical_doc(cat), indent=2, sort_keys=True) + "\n"


def fingerprint(cat: FusionCategory) -> str:
    """Content hash of the normalised fusion data."""
    return hashlib.sha256(serialize_fusion_data(cat).encode("utf-8")).hexdigest()


def builtin(name: str) -> FusionCategory:
    """Load one of the built-in corpora: vec_z2, vec_z3, fib, ising."""
    if name not in BUILTIN_NAMES:
        raise FusionDataError("E_UNKNOWN_BUILTIN", f"no built-in category {name!r}")
    text = resources.files("centerkit.data").joinpath(f"{name}.json").read_text("utf-8")
    return parse_fusion_data(text, name=name)
