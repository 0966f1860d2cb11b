"""
Versioned artifact documents and their JSON, CSV and text renderings
"""
from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from config.config import Config
from hecke.barcanon import CanonicalBasisTable
from hecke.extweyl import Index, TwistedInvolution, blocks
from hecke.fforacle import FFReport
from hecke.heckemod import HeckeModule, ModuleVector
from hecke.rootdata import RootDatum, WeylElt, reduced_word
from hecke.suites import SuiteReport
from utils.logger import log


def word_json(d: RootDatum, w: WeylElt) -> List[int]:
    return reduced_word(d, w)


def word_label(d: RootDatum, w: WeylElt) -> str:
    word = reduced_word(d, w)
    return "".join(f"s{i}" for i in word) if word else "1"


def index_json(d: RootDatum, idx: Index) -> Dict[str, Any]:
    w, lam = idx
    return {"w": word_json(d, w), "lambda": lam.to_json()}


def index_label(d: RootDatum, idx: Index) -> str:
    w, lam = idx
    return f"a[{word_label(d, w)};{','.join(lam.to_json())}]"


def twisted_involution_json(d: RootDatum, ti: TwistedInvolution) -> Dict[str, Any]:
    return {
        "w": word_json(d, ti.w),
        "lambda": ti.lam.to_json(),
        "z": word_json(d, ti.z),
        "u": word_json(d, ti.u),
        "sign": ti.sign,
    }


def vector_json(d: RootDatum, xi: ModuleVector) -> List[Dict[str, Any]]:
    return [{"index": index_json(d, idx), "coeff": c.to_json()} for idx, c in xi.items()]


def vector_text(d: RootDatum, xi: ModuleVector) -> str:
    if xi.is_zero():
        return "0"
    return " + ".join(f"({c}){index_label(d, idx)}" for idx, c in xi.items())


def _header(command: str, module: Optional[HeckeModule] = None) -> Dict[str, Any]:
    doc: Dict[str, Any] = {"schema_version": Config.SCHEMA_VERSION, "command": command}
    if module is not None:
        doc.update({"type": str(module.datum.cartan_type), "m": module.m, "denominator": module.n})
    return doc


@dataclass
class Artifact:
    """A command result: a JSON document plus the flat rows used for CSV and text"""
    document: Dict[str, Any]
    columns: List[str]
    rows: List[Dict[str, Any]] = field(default_factory=list)
    summary: List[str] = field(default_factory=list)

    def render(self, output_format: str) -> str:
        if output_format == 'json':
            return json.dumps(self.document, indent=2, sort_keys=True) + "\n"
        if output_format == 'csv':
            buffer = io.StringIO()
            writer = csv.DictWriter(buffer, fieldnames=self.columns, lineterminator="\n")
            writer.writeheader()
            for row in self.rows:
                writer.writerow(row)
            return buffer.getvalue()
        return self._render_text()

    def _render_text(self) -> str:
        cells = [[str(row.get(c, "")) for c in self.columns] for row in self.rows]
        widths = [max([len(c)] + [len(r[k]) for r in cells]) for k, c in enumerate(self.columns)]
        lines = ["  ".join(c.ljust(widths[k]) for k, c in enumerate(self.columns)).rstrip()]
        lines.append("  ".join("-" * wd for wd in widths))
        lines.extend("  ".join(r[k].ljust(widths[k]) for k in range(len(r))).rstrip() for r in cells)
        lines.extend(self.summary)
        return "\n".join(lines) + "\n"


def enumerate_artifact(module: HeckeModule) -> Artifact:
    """Twisted involutions with their decompositions, the blocks and the count reconciliation"""
    d = module.datum
    block_list = blocks(d, module.m, module.n)
    total = sum(len(b.members) for b in block_list)
    doc = _header("enumerate", module)
    doc["twisted_involutions"] = [twisted_involution_json(d, ti) for ti in module.items]
    doc["blocks"] = [
        {"z": word_json(d, b.z), "lambda": b.lam.to_json(), "size": len(b.members)} for b in block_list
    ]
    doc["reconciliation"] = {"block_total": total, "twisted_involutions": len(module), "match": total == len(module)}
    rows = [
        {
            "w": word_label(d, ti.w),
            "lambda": " ".join(ti.lam.to_json()),
            "z": word_label(d, ti.z),
            "u": word_label(d, ti.u),
            "sign": ti.sign,
        }
        for ti in module.items
    ]
    summary = [f"{len(module)} twisted involutions in {len(block_list)} blocks; block total {total}"]
    return Artifact(doc, ["w", "lambda", "z", "u", "sign"], rows, summary)


def action_artifact(module: HeckeModule, generators: Sequence[int]) -> Artifact:
    """Tables of T_s on every basis element"""
    d = module.datum
    doc = _header("act", module)
    tables = {}
    rows = []
    for s in generators:
        entries = []
        for idx, image in module.action_table(s):
            entries.append({
                "source": index_json(d, idx),
                "image": [{"index": index_json(d, t), "coeff": c.to_json()} for t, c in image],
            })
            rows.append({
                "generator": f"s{s}",
                "source": index_label(d, idx),
                "image": " + ".join(f"({c}){index_label(d, t)}" for t, c in image),
            })
        tables[f"s{s}"] = entries
    doc["tables"] = tables
    return Artifact(doc, ["generator", "source", "image"], rows)


def canonical_artifact(module: HeckeModule, tables: Sequence[CanonicalBasisTable]) -> Artifact:
    d = module.datum
    doc = _header("canonical", module)
    basis = {}
    rows = []
    for table in tables:
        for idx in table.order:
            hat = table.vectors[idx]
            basis[index_label(d, idx)] = vector_json(d, hat)
            rows.append({"index": index_label(d, idx), "canonical": vector_text(d, hat)})
    doc["canonical_basis"] = basis
    return Artifact(doc, ["index", "canonical"], rows)


def verify_artifact(module: HeckeModule, reports: Sequence[SuiteReport]) -> Artifact:
    doc = _header("verify", module)
    doc["passed"] = all(r.passed for r in reports)
    # elapsed times are left out so that reruns produce identical bytes
    doc["suites"] = [
        {"name": r.name, "passed": r.passed, "checked": r.checked, "failure": r.failure} for r in reports
    ]
    rows = [
        {"suite": r.name, "status": "pass" if r.passed else "FAIL", "checked": r.checked, "failure": r.failure or ""}
        for r in reports
    ]
    summary = [f"overall: {'pass' if doc['passed'] else 'FAIL'}"]
    return Artifact(doc, ["suite", "status", "checked", "failure"], rows, summary)


def ffcheck_artifact(reports: Sequence[FFReport]) -> Artifact:
    doc = _header("ffcheck")
    doc["passed"] = all(r.passed for r in reports)
    doc["fields"] = [
        {
            "q": r.q,
            "modulus_r": r.r,
            "passed": r.passed,
            "frobenius": r.frobenius or "ok",
            "norm_equation": {
                "checked": r.norm_checked,
                "failures": len(r.norm_failures),
                "delta_form_disagreements": r.norm_delta_disagreements,
            },
            "semilinear_equation": {
                "checked": r.semilinear_checked,
                "failures": len(r.semilinear_failures),
                "non_cosets": r.semilinear_non_cosets,
            },
        }
        for r in reports
    ]
    rows = [
        {
            "q": r.q,
            "status": "pass" if r.passed else "FAIL",
            "norm_checked": r.norm_checked,
            "norm_failures": len(r.norm_failures),
            "norm_delta_disagreements": r.norm_delta_disagreements,
            "semilinear_checked": r.semilinear_checked,
            "semilinear_failures": len(r.semilinear_failures),
        }
        for r in reports
    ]
    columns = ["q", "status", "norm_checked", "norm_failures", "norm_delta_disagreements", "semilinear_checked", "semilinear_failures"]
    return Artifact(doc, columns, rows)


def write_atomic(path: Path, text: str) -> None:
    """Write text to path through a temporary file in the same directory"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = None
    try:
        with tempfile.NamedTemporaryFile(
            "w", encoding="utf-8", newline="\n", dir=path.parent,
            prefix=f".{path.name}.", suffix=".tmp", delete=False,
        ) as fh:
            tmp = Path(fh.name)
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except OSError as e:
        log.error(f"Failed to write {path}: {e}")
        if tmp is not None and tmp.exists():
            tmp.unlink()
        raise
    log.info(f"Wrote {path}")
