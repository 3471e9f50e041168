"""JSON design files.

Coefficients are written as decimal strings with 17 significant digits,
which round-trips IEEE doubles bit-exactly.  Files are written to a
temporary sibling and renamed into place.
"""

from __future__ import annotations

import datetime as _dt
import json
import os
import tempfile
from dataclasses import dataclass

import numpy as np

from .cost import total_cost
from .errors import ModFrmError, SchemaError
from .firdesign import FilterSpec, Fir
from .frmcore import ModalConfig, ModalFilter, compose_modfrm
from .ifir import IfirPair

SCHEMA_VERSION = 1


def encode_array(a):
    return [format(float(x), ".17g") for x in np.asarray(a, dtype=float)]


def decode_array(items, what):
    if not isinstance(items, list) or not items:
        raise SchemaError(f"{what}: expected a non-empty list of decimal strings")
    try:
        return np.array([float(x) for x in items], dtype=float)
    except (TypeError, ValueError):
        raise SchemaError(f"{what}: coefficients must be decimal strings") from None


def _masker_dict(masker):
    if isinstance(masker, IfirPair):
        return {
            "l_ifir": masker.l_ifir,
            "prototype": encode_array(masker.prototype.coeffs),
            "image_suppressor": encode_array(masker.image_suppressor.coeffs),
        }
    return {"l_ifir": 1, "prototype": encode_array(masker.coeffs), "image_suppressor": ["1"]}


def design_to_dict(design, *, allocation=None, command=None):
    cfg, spec = design.config, design.spec
    return {
        "schema_version": SCHEMA_VERSION,
        "config": {"theta": cfg.theta, "phi": cfg.phi, "m": cfg.m, "L": cfg.L,
                   "case": cfg.case.value},
        "spec": None if spec is None else {
            "passband_edge": spec.passband_edge,
            "stopband_edge": spec.stopband_edge,
            "passband_ripple_db": spec.passband_ripple_db,
            "stopband_atten_db": spec.stopband_atten_db,
        },
        "modal": {"coeffs": encode_array(design.modal.coeffs),
                  "edge_offset": format(design.edge_offset, ".17g")},
        "hma": _masker_dict(design.hma),
        "hmc": _masker_dict(design.hmc),
        "masking_delay": design.masking_delay,
        "cost": total_cost(design).as_dict(),
        "allocation": None if allocation is None else [int(a) for a in allocation],
        "provenance": {
            "command": command,
            "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        },
    }


def atomic_write_text(path, text):
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_bytes(path, data):
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_design(path, design, *, allocation=None, command=None):
    doc = design_to_dict(design, allocation=allocation, command=command)
    atomic_write_text(path, json.dumps(doc, indent=1) + "\n")
    return doc


@dataclass(frozen=True)
class LoadedDesign:
    design: object
    allocation: tuple
    document: dict


def _masker_from(d, what):
    if not isinstance(d, dict):
        raise SchemaError(f"{what}: expected an object")
    try:
        l = int(d["l_ifir"])
        proto = Fir(decode_array(d["prototype"], f"{what}.prototype"))
        supp = Fir(decode_array(d["image_suppressor"], f"{what}.image_suppressor"))
    except KeyError as e:
        raise SchemaError(f"{what}: missing field {e}") from None
    return IfirPair(proto, supp, l)


def design_from_dict(doc):
    """Rebuild the design (recomposing the overall filter) from a document."""
    if not isinstance(doc, dict):
        raise SchemaError("design file must contain a JSON object")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema_version {doc.get('schema_version')!r}")
    try:
        c = doc["config"]
        config = ModalConfig(float(c["theta"]), float(c["phi"]), int(c["m"]), int(c["L"]), c["case"])
        s = doc.get("spec")
        spec = None if s is None else FilterSpec(
            float(s["passband_edge"]), float(s["stopband_edge"]),
            float(s["passband_ripple_db"]), float(s["stopband_atten_db"]))
        mod = doc["modal"]
        modal = ModalFilter(decode_array(mod["coeffs"], "modal.coeffs"),
                            edge_offset=float(mod.get("edge_offset", 0.0)))
        hma = _masker_from(doc["hma"], "hma")
        hmc = _masker_from(doc["hmc"], "hmc")
    except SchemaError:
        raise
    except KeyError as e:
        raise SchemaError(f"missing field {e}") from None
    except (TypeError, ValueError, ModFrmError) as e:
        raise SchemaError(f"invalid design file: {e}") from None
    design = compose_modfrm(config, modal, hma, hmc, spec=spec)
    if "masking_delay" in doc and int(doc["masking_delay"]) != design.masking_delay:
        raise SchemaError("masking_delay does not match the stored filters")
    alloc = doc.get("allocation")
    return LoadedDesign(design, None if alloc is None else tuple(int(a) for a in alloc), doc)


def read_design(path):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}: not valid JSON ({e.msg})") from None
    except UnicodeDecodeError:
        raise SchemaError(f"{path}: not UTF-8 text") from None
    return design_from_dict(doc)
