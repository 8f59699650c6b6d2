"""YAML model documents.

    base:
      kind: space_form        # product, symmetric_space, complex_projective,
      n: 3                    # surface, unimodular3, generic
      c: "1"
    bundle: {kind: atiyah, k: "1/2"}     # or tangent, or generic with S and D
    r: 1
    a: auto                   # r times the first fiber basis vector, or a list
    mode: float               # or exact
    tol: 1.0e-9

Rationals may be written as "p/q" strings.  Every error carries the line and
column of the offending node.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np
import yaml

from .algebra import ExactnessError, to_fraction
from .base_geometry import (ComplexProjective, Generic, ModelError, Product, SpaceForm,
                            Surface2D, SymmetricSpace, Unimodular3)
from .sphere_bundle import AtiyahBundle, GenericBundle, SphereBundleModel, TangentBundle


class DocumentError(ValueError):
    def __init__(self, msg, node=None, source="<document>", mark=None):
        self.line = self.column = None
        if mark is None and node is not None:
            mark = node.start_mark
        if mark is not None:
            self.line = mark.line + 1
            self.column = mark.column + 1
            msg = f"{source}:{self.line}:{self.column}: {msg}"
        else:
            msg = f"{source}: {msg}"
        super().__init__(msg)


class _Doc:
    """Walks a composed YAML node tree, keeping marks for error messages."""

    def __init__(self, text: str, source: str):
        self.source = source
        try:
            self.loader = yaml.SafeLoader(text)
            self.root = self.loader.get_single_node()
        except yaml.YAMLError as exc:
            mark = getattr(exc, "problem_mark", None)
            raise DocumentError(f"invalid YAML: {getattr(exc, 'problem', exc)}", None, source, mark) from None
        if self.root is None:
            raise DocumentError("empty document", None, source)

    def err(self, msg, node):
        return DocumentError(msg, node, self.source)

    def mapping(self, node, what="mapping"):
        if not isinstance(node, yaml.MappingNode):
            raise self.err(f"expected a {what}", node)
        out = {}
        for k, v in node.value:
            out[k.value] = v
        return out

    def get(self, mp, key, parent, required=True):
        if key not in mp:
            if required:
                raise self.err(f"missing field '{key}'", parent)
            return None
        return mp[key]

    def py(self, node):
        return self.loader.construct_object(node, deep=True)

    def scalar(self, node, exact):
        v = self.py(node)
        if isinstance(v, bool) or not isinstance(v, (int, float, str, Fraction)):
            raise self.err(f"expected a number, got {v!r}", node)
        try:
            q = to_fraction(v)
        except (ValueError, ZeroDivisionError):
            raise self.err(f"cannot read {v!r} as a number", node) from None
        return q if exact else float(q)

    def integer(self, node):
        v = self.py(node)
        if isinstance(v, bool) or not isinstance(v, int):
            raise self.err(f"expected an integer, got {v!r}", node)
        return v

    def array(self, node, exact, shape=None):
        v = self.py(node)
        try:
            arr = np.array(v, dtype=object)
            out = np.empty(arr.shape, dtype=object)
            for idx in np.ndindex(arr.shape):
                x = arr[idx]
                if isinstance(x, bool) or not isinstance(x, (int, float, str)):
                    raise ValueError(repr(x))
                out[idx] = to_fraction(x)
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise self.err(f"expected a numeric array ({exc})", node) from None
        if shape is not None and out.shape != tuple(shape):
            raise self.err(f"array has shape {out.shape}, expected {tuple(shape)}", node)
        return out if exact else out.astype(float)


BASE_KINDS = ("space_form", "product", "symmetric_space", "complex_projective", "surface", "unimodular3", "generic")


def _base(doc: _Doc, node, exact):
    mp = doc.mapping(node, "base mapping")
    kn = doc.get(mp, "kind", node)
    kind = doc.py(kn)
    try:
        if kind == "space_form":
            n = doc.integer(doc.get(mp, "n", node))
            if n < 1:
                raise doc.err("n must be positive", mp["n"])
            return SpaceForm(n, doc.scalar(doc.get(mp, "c", node), exact))
        if kind == "product":
            fn = doc.get(mp, "factors", node)
            if not isinstance(fn, yaml.SequenceNode) or not fn.value:
                raise doc.err("factors must be a non-empty list", fn)
            return Product(tuple(_base(doc, f, exact) for f in fn.value))
        if kind == "symmetric_space":
            if "preset" in mp:
                pn = doc.mapping(mp["preset"], "preset mapping")
                name = doc.py(doc.get(pn, "name", mp["preset"]))
                if name == "sphere":
                    return SymmetricSpace.sphere(doc.integer(doc.get(pn, "n", mp["preset"])),
                                                 float(doc.scalar(pn["c"], False)) if "c" in pn else 1.0)
                if name == "complex_projective":
                    return SymmetricSpace.complex_projective(doc.integer(doc.get(pn, "n", mp["preset"])))
                raise doc.err(f"unknown preset {name!r}", pn.get("name"))
            pp = doc.array(doc.get(mp, "pp", node), False)
            kp = doc.array(doc.get(mp, "kp", node), False)
            kk = doc.array(doc.get(mp, "kk", node), False)
            sp = SymmetricSpace(pp, kp, kk, str(doc.py(mp["name"])) if "name" in mp else "")
            errs = sp.validate()
            if errs:
                raise doc.err("; ".join(errs), node)
            return sp
        if kind == "complex_projective":
            n = doc.integer(doc.get(mp, "n", node))
            J = doc.array(mp["J"], exact, (2 * n, 2 * n)) if "J" in mp else None
            return ComplexProjective(n, J)
        if kind == "surface":
            C = doc.scalar(doc.get(mp, "C", node), exact)
            g = doc.array(mp["gradC"], exact, (2,)) if "gradC" in mp else np.zeros(2)
            h = doc.array(mp["hessC"], exact, (2, 2)) if "hessC" in mp else np.zeros((2, 2))
            return Surface2D(C, g, h)
        if kind == "unimodular3":
            return Unimodular3(*(doc.scalar(doc.get(mp, k, node), True) for k in ("m", "n", "p")))
        if kind == "generic":
            R = doc.array(doc.get(mp, "R", node), exact)
            n = R.shape[0] if R.ndim else 0
            dR = doc.array(mp["nablaR"], exact, (n,) * 5) if "nablaR" in mp else None
            ddR = doc.array(mp["nabla2R"], exact, (n,) * 6) if "nabla2R" in mp else None
            return Generic(R, dR, ddR)
    except ModelError as exc:
        raise doc.err(str(exc), node) from None
    raise doc.err(f"unknown base kind {kind!r} (expected one of {', '.join(BASE_KINDS)})", kn)


def _bundle(doc: _Doc, node, exact):
    mp = doc.mapping(node, "bundle mapping")
    kn = doc.get(mp, "kind", node)
    kind = doc.py(kn)
    if kind == "atiyah":
        k = doc.scalar(doc.get(mp, "k", node), exact)
        if k <= 0:
            raise doc.err("k must be positive", mp["k"])
        return AtiyahBundle(k)
    if kind == "tangent":
        return TangentBundle()
    if kind == "generic":
        S = doc.array(doc.get(mp, "S", node), exact)
        D = doc.array(mp["D"], exact) if "D" in mp else None
        return GenericBundle(S, D)
    raise doc.err(f"unknown bundle kind {kind!r} (expected atiyah, tangent or generic)", kn)


@dataclass
class ModelDocument:
    model: SphereBundleModel
    data: dict
    source: str


def parse_model(text: str, source: str = "<document>") -> ModelDocument:
    doc = _Doc(text, source)
    top = doc.mapping(doc.root, "top-level mapping")
    known = {"base", "bundle", "r", "a", "mode", "tol", "name", "notes"}
    for key, _ in doc.root.value:
        if key.value not in known:
            raise doc.err(f"unknown field '{key.value}'", key)
    mode = doc.py(top["mode"]) if "mode" in top else "float"
    if mode not in ("float", "exact"):
        raise doc.err("mode must be 'float' or 'exact'", top["mode"])
    exact = mode == "exact"
    tol = float(doc.scalar(top["tol"], False)) if "tol" in top else 1e-9
    base = _base(doc, doc.get(top, "base", doc.root), exact)
    bnode = doc.get(top, "bundle", doc.root)
    bundle = _bundle(doc, bnode, exact)
    r = doc.scalar(doc.get(top, "r", doc.root), exact)
    if r <= 0:
        raise doc.err("r must be positive", top["r"])
    an = top.get("a")
    try:
        probe = SphereBundleModel(base, bundle, r, _auto_a(base, bundle, r, exact), exact, tol)
    except ExactnessError as exc:
        raise doc.err(f"exact mode not possible: {exc}", bnode) from None
    except ModelError as exc:
        raise doc.err(str(exc), bnode) from None
    if an is None or doc.py(an) == "auto":
        model = probe
    else:
        a = doc.array(an, exact, (probe.m,))
        try:
            model = probe.with_point(a)
        except ModelError as exc:
            raise doc.err(str(exc), an) from None
    return ModelDocument(model, doc.py(doc.root), source)


def _auto_a(base, bundle, r, exact):
    if isinstance(bundle, AtiyahBundle):
        n = base.dim
        m = n + n * (n - 1) // 2
    elif isinstance(bundle, TangentBundle):
        m = base.dim
    else:
        m = np.shape(bundle.S)[-1]
    a = np.zeros(m, dtype=object if exact else float)
    a[:] = Fraction(0) if exact else 0.0
    a[0] = r
    return a


def load_model(path) -> ModelDocument:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise DocumentError(f"cannot read model file: {exc.strerror}", None, str(p)) from None
    return parse_model(text, str(p))


def builtin_model_paths() -> list[Path]:
    return sorted((Path(__file__).parent / "models").glob("*.yaml"))
