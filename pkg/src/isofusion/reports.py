"""Deterministic JSON reports and DOT lattice diagrams.

Reports embed the tool version, the exact command line and a content hash of
every input file, and are serialized with sorted keys so that identical
invocations produce byte-identical files.
"""
from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import BasedAlgebra, valency
from .engine import FusionOutcome
from .lattice import Fingerprint, FusionRecord, LatticeGraph

__all__ = [
    "TOOL_VERSION",
    "file_sha256",
    "provenance",
    "fusion_report",
    "records_report",
    "eigen_report",
    "validate_report",
    "emit_lattice_dot",
    "dump_json",
]

TOOL_VERSION = "0.1.0"


def file_sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def provenance(command_line: str, input_paths: Sequence[str]) -> dict:
    return {
        "tool": {"name": "isofusion", "version": TOOL_VERSION},
        "command": command_line,
        "inputs": [{"path": p, "sha256": file_sha256(p)} for p in input_paths],
    }


def _scalar(v) -> str:
    f = Fraction(v)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _tensor_entries(alg: BasedAlgebra) -> list[list]:
    return [[i, j, k, _scalar(v)] for i, j, k, v in alg.items()]


def _fingerprint_dict(fp: Fingerprint) -> dict:
    from .polynomials import Polynomial

    return {
        "rank": fp.rank,
        "pairs": [
            {
                "valency": None if val is None else _scalar(val),
                "minimal_polynomial": str(Polynomial(tuple(coeffs))),
            }
            for val, coeffs in fp.pairs
        ],
        "constants": [_scalar(c) for c in fp.constants],
        "hash": fp.short_hash(),
    }


def fusion_report(outcome: FusionOutcome, fp: Fingerprint | None, meta: dict) -> dict:
    report = dict(meta)
    report["status"] = outcome.status
    report["seed_preserved"] = outcome.seed_preserved
    report["blocks"] = [list(b) for b in outcome.partition.blocks]
    if outcome.failure is not None:
        report["failure"] = str(outcome.failure)
    if outcome.fused is not None:
        fused = outcome.fused
        report["rank"] = fused.rank
        report["fused_tensor"] = _tensor_entries(fused)
        report["identity_support"] = sorted(fused.identity_support)
        if fused.star is not None:
            report["star"] = list(fused.star)
            report["valencies"] = [_scalar(valency(fused, i)) for i in range(fused.rank)]
    if fp is not None:
        report["fingerprint"] = _fingerprint_dict(fp)
    return report


def records_report(alg: BasedAlgebra, records: Iterable[FusionRecord], meta: dict) -> dict:
    from .lattice import fingerprint

    report = dict(meta)
    report["fusions"] = [
        {
            "blocks": [list(b) for b in rec.partition.blocks],
            "rank": len(rec.partition),
            "status": rec.outcome.status,
            "seeds": [str(s) for s in rec.seeds],
            "fingerprint": _fingerprint_dict(fingerprint(alg, rec.partition)),
        }
        for rec in records
    ]
    return report


def eigen_report(entries: list[dict], meta: dict) -> dict:
    report = dict(meta)
    report["elements"] = entries
    return report


def validate_report(meta: dict, *, kind: str, ok: bool, detail: str, summary: dict) -> dict:
    report = dict(meta)
    report["kind"] = kind
    report["valid"] = ok
    report["detail"] = detail
    report["summary"] = summary
    return report


def emit_lattice_dot(graph: LatticeGraph) -> str:
    """DOT digraph with nodes labeled by rank and fingerprint hash.

    Node order and edge order are deterministic; edges point from the finer
    partition to the coarser one it covers.
    """
    lines = ["digraph fusion_lattice {"]
    for idx, (p, fp) in enumerate(graph.nodes):
        lines.append(f'  n{idx} [label="rank={len(p)} fp={fp.short_hash()}"];')
    for a, b in graph.edges:
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dump_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
