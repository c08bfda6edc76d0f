"""
JSON descriptor files.

    {"v": 1, "kind": "inner",
     "factors": [{"kind": "SL1", "n": 4, "d": 2}],
     "center_orders": [4], "embedding": [[1]]}

Kinds: torus, semisimple, inner, quasisplit, general. A torus (or a
coradical) is {"galois": G, "rank": r, "action": [matrix per generator]},
with G either {"cyclic": n} or {"degree": n, "generators": [[...], ...]}.
"""
import json
import logging
from typing import Any, List, Optional, Union

from glattice import GLattice, InvalidAction, MAX_RANK
from groups import MAX_DEGREE, DegreeCapExceeded, FiniteGroup, NotAPermutation, OrderCapExceeded, cyclic
from intlinalg import IntMatrix
from reductive import (
    FactorDescriptor,
    FactorKind,
    GeneralGroup,
    GroupDescriptor,
    Indivisible,
    InnerDescriptor,
    InnerGroup,
    QuasisplitGroup,
    SemisimpleGroup,
    ShapeError,
    TorusGroup,
)
from torus import TorusDescriptor

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
KINDS = ("torus", "semisimple", "inner", "quasisplit", "general")


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, col: int = 1):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, column {col}: {message}")


class ValidationError(ValueError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class DocumentReader:
    """Typed access to a decoded JSON document; errors carry the field path."""

    def __init__(self, max_group_order: Optional[int], max_rank: Optional[int]):
        self.max_group_order = max_group_order
        self.max_rank = MAX_RANK if max_rank is None else max_rank

    # ─── Scalars ───

    def obj(self, value: Any, path: str) -> dict:
        if not isinstance(value, dict):
            raise ValidationError(path, "expected an object")
        return value

    def field(self, doc: dict, key: str, path: str) -> Any:
        if key not in doc:
            raise ValidationError(f"{path}.{key}", "missing")
        return doc[key]

    def integer(self, value: Any, path: str, minimum: Optional[int] = None) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ValidationError(path, f"expected an integer, got {json.dumps(value)}")
        if minimum is not None and value < minimum:
            raise ValidationError(path, f"must be at least {minimum}")
        return value

    def sequence(self, value: Any, path: str) -> list:
        if not isinstance(value, list):
            raise ValidationError(path, "expected a list")
        return value

    def int_list(self, value: Any, path: str, minimum: Optional[int] = None) -> List[int]:
        return [self.integer(x, f"{path}[{i}]", minimum) for i, x in enumerate(self.sequence(value, path))]

    def matrix(self, value: Any, path: str, rows: int, cols: int) -> IntMatrix:
        lines = self.sequence(value, path)
        if len(lines) != rows:
            raise ValidationError(path, f"expected {rows} rows, got {len(lines)}")
        data = []
        for i, line in enumerate(lines):
            row = self.int_list(line, f"{path}[{i}]")
            if len(row) != cols:
                raise ValidationError(f"{path}[{i}]", f"expected {cols} entries, got {len(row)}")
            data.append(row)
        return IntMatrix.from_rows(data, cols)

    # ─── Structures ───

    def group(self, value: Any, path: str) -> FiniteGroup:
        doc = self.obj(value, path)
        try:
            if "cyclic" in doc:
                n = self.integer(doc["cyclic"], f"{path}.cyclic", 1)
                return cyclic(n, max_order=self.max_group_order)
            degree = self.integer(self.field(doc, "degree", path), f"{path}.degree", 1)
            if degree > MAX_DEGREE:
                raise ValidationError(f"{path}.degree", f"degree {degree} exceeds the cap of {MAX_DEGREE}")
            gens = [self.int_list(g, f"{path}.generators[{i}]")
                    for i, g in enumerate(self.sequence(self.field(doc, "generators", path), f"{path}.generators"))]
            return FiniteGroup.from_generators(degree, gens, max_order=self.max_group_order)
        except (NotAPermutation, OrderCapExceeded, DegreeCapExceeded) as e:
            raise ValidationError(path, str(e)) from None

    def torus(self, doc: dict, path: str) -> TorusDescriptor:
        G = self.group(self.field(doc, "galois", path), f"{path}.galois")
        r = self.integer(self.field(doc, "rank", path), f"{path}.rank", 0)
        if r > self.max_rank:
            raise ValidationError(f"{path}.rank", f"rank {r} exceeds the cap of {self.max_rank}")
        action = self.sequence(self.field(doc, "action", path), f"{path}.action")
        if len(action) != len(G.generators):
            raise ValidationError(f"{path}.action",
                                  f"{len(action)} matrices for {len(G.generators)} generators")
        mats = [self.matrix(a, f"{path}.action[{s}]", r, r) for s, a in enumerate(action)]
        try:
            M = GLattice(G, r, mats)
        except InvalidAction as e:
            raise ValidationError(f"{path}.action", str(e)) from None
        return TorusDescriptor(G, M)

    def factor(self, value: Any, path: str) -> FactorDescriptor:
        doc = self.obj(value, path)
        kind = self.field(doc, "kind", path)
        try:
            kind = FactorKind(kind)
        except ValueError:
            raise ValidationError(f"{path}.kind", f"unknown factor kind {json.dumps(kind)}") from None
        f = FactorDescriptor(
            kind=kind,
            n=self.integer(self.field(doc, "n", path), f"{path}.n"),
            index_d=self.integer(doc.get("d", 1), f"{path}.d"),
            extension_degree=self.integer(doc.get("ext", 1), f"{path}.ext"),
        )
        try:
            f.validate()
        except ShapeError as e:
            raise ValidationError(path, str(e)) from None
        return f

    def factors(self, doc: dict, path: str):
        items = self.sequence(self.field(doc, "factors", path), f"{path}.factors")
        return tuple(self.factor(f, f"{path}.factors[{i}]") for i, f in enumerate(items))

    def inner(self, doc: dict, path: str) -> InnerDescriptor:
        factors = self.factors(doc, path)
        orders = self.int_list(self.field(doc, "center_orders", path), f"{path}.center_orders", 1)
        s = sum(1 for f in factors if not f.is_split)
        embedding = self.matrix(doc.get("embedding", []), f"{path}.embedding", s, len(orders))
        try:
            desc = InnerDescriptor(factors, tuple(orders), embedding)
            desc.validate()
        except Indivisible as e:
            raise ValidationError(f"{path}.embedding[{e.row}][{e.col}]",
                                  f"center order m={e.modulus} must divide a*n = {e.value}") from None
        except ShapeError as e:
            raise ValidationError(path, str(e)) from None
        return desc


def parse_descriptor(text: Union[str, bytes], max_group_order: Optional[int] = None,
                     max_rank: Optional[int] = None) -> GroupDescriptor:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseError(f"not UTF-8: {e.reason}", 1, e.start + 1) from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None
    except RecursionError:
        raise ParseError("document nested too deeply") from None

    reader = DocumentReader(max_group_order, max_rank)
    doc = reader.obj(doc, "$")
    version = reader.field(doc, "v", "$")
    if type(version) is not int or version != FORMAT_VERSION:
        raise ValidationError("$.v", f"unsupported format version {json.dumps(version)}")
    kind = reader.field(doc, "kind", "$")
    if kind not in KINDS:
        raise ValidationError("$.kind", f"expected one of {', '.join(KINDS)}")
    logger.debug(f"descriptor of kind {kind}")

    if kind == "torus":
        return TorusGroup(reader.torus(doc, "$"))
    if kind == "semisimple":
        return SemisimpleGroup(reader.factors(doc, "$"))
    if kind == "inner":
        return InnerGroup(reader.inner(doc, "$"))
    factors = reader.factors(doc, "$")
    coradical = reader.torus(reader.obj(reader.field(doc, "coradical", "$"), "$.coradical"), "$.coradical")
    cls = QuasisplitGroup if kind == "quasisplit" else GeneralGroup
    return cls(factors, coradical)


# ─── Serialization ─────────────────────────────────────────────────────────

def _group_doc(G: FiniteGroup) -> dict:
    return {"degree": G.degree, "generators": [list(g) for g in G.generators]}


def _torus_doc(T: TorusDescriptor) -> dict:
    M = T.character_lattice
    return {"galois": _group_doc(T.galois), "rank": M.rank,
            "action": [a.to_lists() for a in M.generator_matrices]}


def _factor_doc(f: FactorDescriptor) -> dict:
    doc = {"kind": f.kind.value, "n": f.n}
    if f.index_d != 1:
        doc["d"] = f.index_d
    if f.extension_degree != 1:
        doc["ext"] = f.extension_degree
    return doc


def to_document(desc: GroupDescriptor) -> dict:
    if isinstance(desc, TorusGroup):
        return {"v": FORMAT_VERSION, "kind": "torus", **_torus_doc(desc.torus)}
    if isinstance(desc, SemisimpleGroup):
        return {"v": FORMAT_VERSION, "kind": "semisimple",
                "factors": [_factor_doc(f) for f in desc.factors]}
    if isinstance(desc, InnerGroup):
        inner = desc.inner
        return {"v": FORMAT_VERSION, "kind": "inner",
                "factors": [_factor_doc(f) for f in inner.factors],
                "center_orders": list(inner.center_orders),
                "embedding": inner.embedding.to_lists()}
    kind = "quasisplit" if isinstance(desc, QuasisplitGroup) else "general"
    return {"v": FORMAT_VERSION, "kind": kind,
            "factors": [_factor_doc(f) for f in desc.factors],
            "coradical": _torus_doc(desc.coradical)}


def serialize_descriptor(desc: GroupDescriptor) -> str:
    return json.dumps(to_document(desc), indent=2)


def describe(desc: GroupDescriptor) -> str:
    """One-line human label."""
    if isinstance(desc, TorusGroup):
        return f"torus of dimension {desc.torus.dimension}, split by a group of order {desc.torus.galois.order}"
    factors = desc.inner.factors if isinstance(desc, InnerGroup) else desc.factors
    names = " x ".join(f.label() for f in factors) or "trivial derived subgroup"
    kind = type(desc).__name__.replace("Group", "").lower()
    return f"{kind}: {names}"
