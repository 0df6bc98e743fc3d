"""Re-check every catalog entry against its recorded claims.

Each entry is independent, so entries are spread over worker processes; the
``NILALG_THREADS`` environment variable caps the pool size.
"""
from __future__ import annotations

import json
import os
import pathlib
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from ..cohomology import cocycle_space, coboundary_space
from ..errors import NilalgError
from ..extension import ExtensionSpec, extend, is_nonsplit, recover_parent
from ..identities import builtin, holds
from ..scalars import parse_field
from . import builtin_catalog, entry, instantiate, parse_single, unparse
from .claims import (claimed_cocycles, extension_claim, extension_claims, iso_claims, parent_algebra,
                     sample_assignments)

# Additional samples outside the entry's own field.
EXTRA_SAMPLES = {
    "CD4_87": (({"lambda": 1}, "Q(sqrt(-3))"),),
}


@dataclass
class EntryReport:
    name: str
    section: str
    samples: int = 0
    instances: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        text = f"{self.name:8s} [{self.section}] {status} ({self.samples} samples, {self.instances} identity instances)"
        return text + "".join(f"\n    {f}" for f in self.failures)


def _fmt(params) -> str:
    return ", ".join(f"{k}={v}" for k, v in params) or "no parameters"


def check_algebra(name: str, B, report: EntryReport) -> None:
    claim = extension_claim(name)
    where = f"{name}({_fmt(B.params)}), table of section {claim.section}"

    rep = holds(builtin("cd"), B)
    report.instances += rep.instances
    if not rep.all_hold:
        f = rep.first_failure()
        report.failures.append(f"{where}: {f.name} fails at basis tuple {f.counterexample}")
    for v in claim.varieties:
        r = holds(builtin(v), B)
        if not r.all_hold:
            report.failures.append(f"{where}: claimed {v} identity fails at {r.first_failure().counterexample}")

    try:
        _, index = B.power_series()
        if index < 3:
            report.failures.append(f"{where}: nilpotency index {index} < 3")
    except NilalgError as exc:
        report.failures.append(f"{where}: {exc}")

    ann = B.annihilator().dim
    if ann != claim.ann_dim:
        report.failures.append(f"{where}: annihilator dimension {ann}, expected {claim.ann_dim}")

    if not coboundary_space(B).is_subspace_of(cocycle_space(B)):
        report.failures.append(f"{where}: B^2 is not contained in Z^2")

    if claim.cocycles:
        P = parent_algebra(claim, B)
        forms = claimed_cocycles(claim, B, P)
        spec = ExtensionSpec(P, forms)
        try:
            E = extend(spec)
        except NilalgError as exc:
            report.failures.append(f"{where}: claimed cocycle rejected: {exc}")
        else:
            if E.table != B.table:
                shown = "; ".join(str(f) for f in forms)
                report.failures.append(f"{where}: extending {claim.parent} by {shown} does not give the table")
            if not is_nonsplit(spec):
                report.failures.append(f"{where}: claimed cocycle gives a split extension")

    try:
        R = recover_parent(B)
        back = extend(R.spec()).transport(R.split)
        if back.table != B.table:
            report.failures.append(f"{where}: recover_parent round trip differs")
    except NilalgError as exc:
        report.failures.append(f"{where}: recover_parent failed: {exc}")


def verify_entry(name: str, samples: int = 3) -> EntryReport:
    start = time.perf_counter()
    e = entry(name)
    report = EntryReport(name, e.section)
    tag = parse_field(e.field)
    cases = [(a, tag) for a in sample_assignments(e, samples)]
    cases += [(a, parse_field(f)) for a, f in EXTRA_SAMPLES.get(name, ())]
    for assignment, fld in cases:
        try:
            B = instantiate(e, assignment, field=fld)
        except NilalgError as exc:
            report.failures.append(f"{name} at {assignment}: cannot instantiate: {exc}")
            continue
        report.samples += 1
        check_algebra(name, B, report)
    if e.params and report.samples < min(samples, 3):
        report.failures.append(f"{name}: only {report.samples} admissible samples found")
    try:
        if parse_single(unparse(e)) != e:
            report.failures.append(f"{name}: serialization round trip changed the entry")
    except NilalgError as exc:
        report.failures.append(f"{name}: serialized form does not parse: {exc}")
    report.seconds = time.perf_counter() - start
    return report


def _workers() -> int:
    env = os.environ.get("NILALG_THREADS")
    if env:
        return max(1, int(env))
    return max(1, min(8, os.cpu_count() or 1))


def verify_catalog(sections=None, samples: int = 3, workers: int | None = None) -> list:
    names = [e.name for e in builtin_catalog()
             if not e.external and (not sections or e.section in sections)]
    workers = workers or _workers()
    if workers == 1 or len(names) < 2:
        return [verify_entry(n, samples) for n in names]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(verify_entry, names, [samples] * len(names)))


def coverage(sections=None) -> dict:
    """Entry counts per section, split into checked tables and external stubs."""
    out: dict = {}
    for e in builtin_catalog():
        if sections and e.section not in sections:
            continue
        slot = out.setdefault(e.section, {"tables": 0, "external": 0})
        slot["external" if e.external else "tables"] += 1
    return out


def export_catalog(directory) -> pathlib.Path:
    """Write one .alg file per entry and an index.json describing all of them."""
    root = pathlib.Path(directory)
    root.mkdir(parents=True, exist_ok=True)
    claims = {c.name: c for c in extension_claims()}
    isos: dict = {}
    for c in iso_claims():
        isos.setdefault(c.name, []).append({"left": {k: str(v) for k, v in c.left.items()},
                                             "right": {k: str(v) for k, v in c.right.items()},
                                             "field": c.field, "relation": c.relation,
                                             "witness": [list(r) for r in c.witness] if c.witness else None})
    index = []
    for e in builtin_catalog():
        (root / f"{e.name}.alg").write_text(unparse(e), encoding="utf-8")
        item = {"name": e.name, "file": f"{e.name}.alg", "dim": e.dim, "field": e.field, "section": e.section,
                "params": list(e.params), "derived": dict(e.derived), "constraints": list(e.constraints),
                "external": e.external}
        c = claims.get(e.name)
        if c is not None:
            d = asdict(c)
            d.pop("name")
            d.pop("section")
            d["parent_params"] = dict(c.parent_params)
            item["claims"] = d
        if e.name in isos:
            item["isomorphisms"] = isos[e.name]
        index.append(item)
    path = root / "index.json"
    path.write_text(json.dumps(index, indent=1) + "\n", encoding="utf-8")
    return path
