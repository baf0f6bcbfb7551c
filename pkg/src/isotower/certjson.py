"""Canonical JSON documents for systems, quaternions, algebras, and
certificates, plus the object-level verification entry points.

Certificates are self-contained: they embed the full tower recipe, so the
verifier needs no side data.  Verification always goes through the raw
document form in :mod:`isotower.verify`, which shares no code with the
constructors beyond the arithmetic kernel.
"""

from __future__ import annotations

from .csa import CorResult, CyclicExtensionData, StructureConstantAlgebra
from .errors import MalformedCertificate
from .quadforms import IsotropyCertificate, QFSystem, QuadraticForm
from .serialize import (
    element_from_json,
    element_to_json,
    gram_from_json,
    gram_to_json,
    tower_from_json,
    tower_to_json,
    vector_from_json,
    vector_to_json,
)
from .splitting import QuaternionAlgebra, SplitCertificate
from .tower import TowerField
from . import verify as _verify


# -- quadratic form systems ----------------------------------------------------


def system_doc(system: QFSystem) -> dict:
    if system.level != system.tower.height:
        raise ValueError("serialize systems at the top level of their tower")
    return {
        "forms": [gram_to_json(f.gram) for f in system.forms],
        "tower": tower_to_json(system.tower),
    }


def system_from_doc(doc: dict) -> QFSystem:
    if not isinstance(doc, dict) or "forms" not in doc or "tower" not in doc:
        raise MalformedCertificate("a system document needs 'forms' and 'tower'")
    tower = tower_from_json(doc["tower"])
    forms = tuple(
        QuadraticForm.from_gram(tower, tower.height, gram_from_json(tower, g))
        for g in doc["forms"]
    )
    return QFSystem(forms)


def isotropy_certificate_doc(system: QFSystem, cert: IsotropyCertificate) -> dict:
    doc = system_doc(system)
    doc["tower"] = tower_to_json(cert.tower)
    doc["witness"] = vector_to_json(cert.witness)
    doc["claimed_bound"] = cert.claimed_bound
    doc["actual_degree"] = cert.actual_degree
    return doc


def isotropy_certificate_from_doc(doc: dict) -> tuple[QFSystem, IsotropyCertificate]:
    tower = tower_from_json(doc["tower"])
    witness = vector_from_json(tower, doc["witness"])
    grams = [gram_from_json(tower, g) for g in doc["forms"]]
    if not grams:
        raise MalformedCertificate("certificate carries no forms")
    base_levels = grams[0][0][0].level if grams[0] else 0
    base = TowerField(tower.levels[:base_levels])
    forms = tuple(
        QuadraticForm.from_gram(base, base_levels, [[e.in_tower(base) for e in row] for row in g])
        for g in grams
    )
    cert = IsotropyCertificate(
        tower=tower,
        witness=witness,
        claimed_bound=int(doc["claimed_bound"]),
        actual_degree=int(doc["actual_degree"]),
        base_levels=base_levels,
    )
    return QFSystem(forms), cert


def verify_isotropy_certificate(system: QFSystem, cert: IsotropyCertificate) -> bool:
    """Re-check a certificate from scratch by exact arithmetic (the checking
    code never touches the constructors)."""
    ok, _reason = _verify.verify_isotropy(isotropy_certificate_doc(system, cert))
    return ok


# -- quaternions and split certificates ------------------------------------------


def quaternion_doc(q: QuaternionAlgebra) -> dict:
    doc = {"presentation": q.presentation, "field": tower_to_json(q.field)}
    if q.presentation == "standard":
        doc["u"] = element_to_json(q.x)
        doc["v"] = element_to_json(q.y)
    else:
        doc["a"] = element_to_json(q.x)
        doc["b"] = element_to_json(q.y)
    return doc


def quaternion_from_doc(doc: dict) -> QuaternionAlgebra:
    if not isinstance(doc, dict) or "presentation" not in doc or "field" not in doc:
        raise MalformedCertificate("a quaternion document needs 'presentation' and 'field'")
    tower = tower_from_json(doc["field"])
    pres = doc["presentation"]
    try:
        if pres == "standard":
            x = element_from_json(tower, doc["u"])
            y = element_from_json(tower, doc["v"])
        elif pres == "bracket":
            x = element_from_json(tower, doc["a"])
            y = element_from_json(tower, doc["b"])
        else:
            raise MalformedCertificate(f"unknown presentation {pres!r}")
    except KeyError as exc:
        raise MalformedCertificate(f"missing quaternion entry {exc}") from exc
    try:
        return QuaternionAlgebra(pres, x, y)
    except ValueError as exc:
        raise MalformedCertificate(str(exc)) from exc


def split_certificate_doc(cert: SplitCertificate) -> dict:
    return {
        "quaternion": quaternion_doc(cert.quaternion),
        "tower": tower_to_json(cert.tower),
        "two_tower": tower_to_json(cert.two_tower),
        "witness": vector_to_json(cert.witness),
        "claimed_bound": cert.claimed_bound,
        "degree_over_F": cert.degree_over_F,
    }


def split_certificate_from_doc(doc: dict) -> SplitCertificate:
    q = quaternion_from_doc(doc["quaternion"])
    tower = tower_from_json(doc["tower"])
    two_tower = tower_from_json(doc["two_tower"])
    witness = vector_from_json(tower, doc["witness"])
    return SplitCertificate(
        quaternion=q,
        tower=tower,
        two_tower=two_tower,
        witness=witness,
        degree_over_F=int(doc["degree_over_F"]),
        claimed_bound=int(doc["claimed_bound"]),
    )


def verify_split_certificate(q: QuaternionAlgebra, cert: SplitCertificate) -> bool:
    if quaternion_doc(q) != quaternion_doc(cert.quaternion):
        return False
    ok, _reason = _verify.verify_split(split_certificate_doc(cert))
    return ok


# -- structure constant algebras ---------------------------------------------------


def algebra_doc(a: StructureConstantAlgebra) -> dict:
    dense = a.dense_constants()
    return {
        "dim": a.dim,
        "constants": [
            [[element_to_json(c) for c in row] for row in plane] for plane in dense
        ],
        "unit": vector_to_json(a.unit),
        "field": tower_to_json(a.tower),
        "matrix_units": a.matrix_units,
    }


def algebra_from_doc(doc: dict) -> StructureConstantAlgebra:
    for key in ("dim", "constants", "unit", "field"):
        if key not in doc:
            raise MalformedCertificate(f"algebra document missing {key!r}")
    tower = tower_from_json(doc["field"])
    n = int(doc["dim"])
    constants = doc["constants"]
    if len(constants) != n:
        raise MalformedCertificate("constants array does not match dim")
    level = None
    parsed = []
    for plane in constants:
        rows = []
        for row in plane:
            entries = [element_from_json(tower, c) for c in row]
            for e in entries:
                level = e.level if level is None else max(level, e.level)
            rows.append(entries)
        parsed.append(rows)
    if level is None:
        raise MalformedCertificate("empty constants")
    unit = vector_from_json(tower, doc["unit"])
    return StructureConstantAlgebra.from_dense(
        tower, level, parsed, unit, bool(doc.get("matrix_units", False))
    )


def cyclic_doc(cyclic: CyclicExtensionData) -> dict:
    return {
        "k_level": cyclic.k_level,
        "order": cyclic.order,
        "sigma": [[element_to_json(x) for x in row] for row in cyclic.sigma],
    }


def cyclic_from_doc(tower: TowerField, doc: dict) -> CyclicExtensionData:
    for key in ("k_level", "order", "sigma"):
        if key not in doc:
            raise MalformedCertificate(f"cyclic document missing {key!r}")
    rows = [[element_from_json(tower, x) for x in row] for row in doc["sigma"]]
    return CyclicExtensionData.create(tower, int(doc["k_level"]), rows, int(doc["order"]))


def cor_result_doc(cor: CorResult, source: StructureConstantAlgebra) -> dict:
    doc = algebra_doc(cor.algebra)
    doc["fixed_basis"] = [vector_to_json(v) for v in cor.fixed_basis]
    doc["source"] = {
        "algebra": algebra_doc(source),
        "cyclic": cyclic_doc(cor.cyclic),
    }
    return doc


def verify_cor_result(doc: dict) -> bool:
    ok, _reason = _verify.verify_cor(doc)
    return ok


__all__ = [
    "system_doc",
    "system_from_doc",
    "isotropy_certificate_doc",
    "isotropy_certificate_from_doc",
    "verify_isotropy_certificate",
    "quaternion_doc",
    "quaternion_from_doc",
    "split_certificate_doc",
    "split_certificate_from_doc",
    "verify_split_certificate",
    "algebra_doc",
    "algebra_from_doc",
    "cyclic_doc",
    "cyclic_from_doc",
    "cor_result_doc",
    "verify_cor_result",
]
