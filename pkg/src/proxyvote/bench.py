"""Operation-count and size benchmark against the published cost model.

The protocol's published efficiency analysis prices each phase in
exponentiations (E1 in the source group, E2 in the target group), pairings
(P) and opaque signature units (Sig/Vfy), per vote, plus per-message
communication sizes assuming 160-bit-order groups with 512-bit elements.
This module measures the same cells on a real instrumented election and
reports them side by side with two baselines:

* the implementation-derived expected table (EXPECTED_COSTS), which the
  measurement must match exactly, and
* the published reference expressions (REFERENCE_COSTS), with per-symbol
  deltas where the expression is fully defined.  The published proxy rows
  price an "S" term that the analysis never defines; those components are
  flagged not comparable rather than guessed at.  The published absolute
  millisecond figures come from 2007-era hardware and are reported for
  context only; wall-clock numbers from this run sit next to them.

Element sizes here come from the actual curve (BN254: 33-byte compressed
source-group points g-side, 65-byte h-side, 384-byte target group), so the
size columns differ from the published 64-byte-per-element assumption by
construction; both are shown.
"""

from __future__ import annotations

import json
import statistics
import time
from dataclasses import dataclass

from .groups import OpCounter
from .protocol import ElectionConfig
from .runner import all_cast_script, run_election

# (phase, entity) -> exact per-unit operation counts this implementation performs
EXPECTED_COSTS = {
    ("dispatch", "administrator"): OpCounter(exp_g=3, exp_gt=3, sigs=1),
    ("dispatch", "proxy"): OpCounter(exp_gt=2, pairings=4),
    ("cast", "voter"): OpCounter(exp_g=2, exp_gt=3, pairings=1, vfys=1),
    ("cast", "proxy"): OpCounter(exp_g=2, exp_gt=4, pairings=4),
    ("open", "candidate"): OpCounter(exp_gt=1),
}

# published per-vote cost expressions; None count means the symbol mix is
# not fully defined (the undefined "S" term)
REFERENCE_COSTS = {
    ("dispatch", "administrator"): {
        "expr": "3*E1 + 2*E2 + S + Sig",
        "counts": OpCounter(exp_g=3, exp_gt=2, sigs=1),
        "undefined": ["S"],
        "ms": "20.4 + time_S",
        "comm": "2|G| + |GT|",
        "comm_bits": 3 * 512,
    },
    ("dispatch", "proxy"): {
        "expr": "2*E2 + 3*S + 4*P",
        "counts": OpCounter(exp_gt=2, pairings=4),
        "undefined": ["3*S"],
        "ms": "24.9",
        "comm": "2|GT|",
        "comm_bits": 2 * 512,
    },
    ("cast", "voter"): {
        "expr": "E1 + 4*E2 + P + Vfy",
        "counts": OpCounter(exp_g=1, exp_gt=4, pairings=1, vfys=1),
        "undefined": [],
        "ms": "14.7 + time_V",
        "comm": "3|G| + 3|GT| + |Hash|",
        "comm_bits": 6 * 512 + 160,
    },
    ("cast", "proxy"): {
        "expr": "2*E1 + 3*E2 + 4*S + 4*P",
        "counts": OpCounter(exp_g=2, exp_gt=3, pairings=4),
        "undefined": ["4*S"],
        "ms": "38.3",
        "comm": "2|GT|",
        "comm_bits": 2 * 512,
    },
    ("open", "candidate"): {
        "expr": "E2",
        "counts": OpCounter(exp_gt=1),
        "undefined": [],
        "ms": "0.6",
        "comm": "|Zq|",
        "comm_bits": 160,
    },
}

DELTA_NOTES = {
    ("dispatch", "administrator"):
        "+1 E2: structured payloads ride in a KEM-DEM envelope because the "
        "scheme's plaintext space is the target group; the KEM secret costs "
        "one extra target-group exponentiation",
    ("dispatch", "proxy"): "exact match on the defined components",
    ("cast", "voter"):
        "+1 E1 / -1 E2: the construction's literal operation mix for ballot "
        "generation (two source-group and three target-group exponentiations) "
        "differs from the published accounting",
    ("cast", "proxy"):
        "+1 E2: the timestamp plaintext is encoded as a target-group marker "
        "so that decryption success is recognizable",
    ("open", "candidate"): "exact match",
}

_PROBE_FOR_CELL = {
    ("dispatch", "administrator"): ("issue-credential",),
    ("dispatch", "proxy"): ("dispatch-credential",),
    ("cast", "voter"): ("voter-unwrap", "make-ballot"),
    ("cast", "proxy"): ("process-ballot",),
    ("open", "candidate"): ("open-transaction",),
}


@dataclass
class BenchCell:
    phase: str
    entity: str
    measured: OpCounter
    expected: OpCounter
    reference_expr: str
    reference_counts: "OpCounter | None"
    undefined_terms: list
    reference_ms: str
    measured_ms: float
    matches_expected: bool
    deltas_vs_reference: dict
    note: str


@dataclass
class BenchReport:
    num_voters: int
    candidates: int
    seed: object
    cells: list
    sizes: dict            # message -> measured bytes
    reference_sizes: dict  # (phase, entity) -> (expr, bits)
    phase_wall_seconds: dict
    per_ballot_generation_ms: float
    per_transaction_opening_ms: float
    board_entries: int
    transactions: int
    all_cells_match: bool

    def to_json(self) -> str:
        return json.dumps({
            "num_voters": self.num_voters,
            "candidates": self.candidates,
            "seed": self.seed,
            "cells": [{
                "phase": c.phase,
                "entity": c.entity,
                "measured": c.measured.as_dict(),
                "expected": c.expected.as_dict(),
                "matches_expected": c.matches_expected,
                "reference_expr": c.reference_expr,
                "reference_counts": (c.reference_counts.as_dict()
                                     if c.reference_counts else None),
                "undefined_terms": c.undefined_terms,
                "reference_ms": c.reference_ms,
                "measured_ms": c.measured_ms,
                "deltas_vs_reference": c.deltas_vs_reference,
                "note": c.note,
            } for c in self.cells],
            "sizes_bytes": self.sizes,
            "reference_sizes": {f"{k[0]}/{k[1]}": {"expr": v[0], "bits": v[1]}
                                for k, v in self.reference_sizes.items()},
            "phase_wall_seconds": self.phase_wall_seconds,
            "per_ballot_generation_ms": self.per_ballot_generation_ms,
            "per_transaction_opening_ms": self.per_transaction_opening_ms,
            "board_entries": self.board_entries,
            "transactions": self.transactions,
            "all_cells_match": self.all_cells_match,
        }, indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [
            f"operation-count benchmark: {self.num_voters} voters, "
            f"{self.candidates} candidates, seed {self.seed}",
            "",
            f"{'phase/entity':24s} {'measured (per vote)':34s} "
            f"{'reference':28s} {'delta':18s}",
        ]
        for c in self.cells:
            measured = _fmt_counts(c.measured)
            delta = ", ".join(f"{k}{v:+d}" for k, v in c.deltas_vs_reference.items()
                              if v) or "match"
            flags = f" [{'; '.join(c.undefined_terms)} not comparable]" \
                if c.undefined_terms else ""
            lines.append(f"{c.phase + '/' + c.entity:24s} {measured:34s} "
                         f"{c.reference_expr:28s} {delta}{flags}")
            lines.append(f"{'':24s} expected-table match: "
                         f"{'yes' if c.matches_expected else 'NO'}; "
                         f"{c.measured_ms:.2f} ms here vs {c.reference_ms} ms published")
            if c.note:
                lines.append(f"{'':24s} note: {c.note}")
        lines.append("")
        lines.append("message sizes (measured bytes vs published bits at 512-bit elements):")
        ref_by_msg = {
            "credential-envelope-l2": ("dispatch", "administrator"),
            "credential-envelope-l1": ("dispatch", "proxy"),
            "ballot-message": ("cast", "voter"),
            "transaction": ("cast", "proxy"),
            "candidate-secret": ("open", "candidate"),
        }
        for name, nbytes in sorted(self.sizes.items()):
            ref = ref_by_msg.get(name)
            if ref and ref in self.reference_sizes:
                expr, bits = self.reference_sizes[ref]
                lines.append(f"  {name:26s} {nbytes:6d} B   published {expr} "
                             f"= {bits} bits ({bits // 8} B)")
            else:
                lines.append(f"  {name:26s} {nbytes:6d} B")
        lines.append("")
        lines.append(f"wall time per phase: " + ", ".join(
            f"{p}={t:.2f}s" for p, t in self.phase_wall_seconds.items()))
        lines.append(f"ballot generation: {self.per_ballot_generation_ms:.1f} ms per ballot")
        lines.append(f"transaction opening: {self.per_transaction_opening_ms:.2f} ms per transaction")
        lines.append(f"board entries: {self.board_entries} "
                     f"({self.transactions} transactions)")
        lines.append("published millisecond figures date from a 3.2 GHz Pentium 4 "
                     "cost model and are not reproducible; count comparison governs.")
        return "\n".join(lines)


def _fmt_counts(c: OpCounter) -> str:
    parts = []
    for sym, val in (("E1", c.exp_g), ("E2", c.exp_gt), ("P", c.pairings),
                     ("Sig", c.sigs), ("Vfy", c.vfys)):
        if val:
            parts.append(f"{val}*{sym}" if val != 1 else sym)
    return " + ".join(parts) if parts else "0"


def _sum_probe(probes, names):
    total = OpCounter()
    seconds = 0.0
    count = None
    for name in names:
        entries = probes.get(name, [])
        if count is None:
            count = len(entries)
        for e in entries:
            total = total + e["ops"]
            seconds += e["seconds"]
    if not count:
        return OpCounter(), 0.0, 0
    per = OpCounter(**{k: v // count for k, v in total.as_dict().items()})
    return per, seconds / count, count


def _deltas(measured: OpCounter, reference: "OpCounter | None") -> dict:
    if reference is None:
        return {}
    d = measured - reference
    return {"E1": d.exp_g, "E2": d.exp_gt, "P": d.pairings,
            "Sig": d.sigs, "Vfy": d.vfys}


def run_bench(num_voters: int, candidates, seed=None,
              mix_window: int = 4) -> BenchReport:
    """Instrument one full election and build the comparison report."""
    candidates = list(candidates)
    if num_voters == 0:
        # degenerate instrumentation request: nothing runs, all counters zero
        cells = [BenchCell(ph, ent, OpCounter(), OpCounter(),
                           REFERENCE_COSTS[(ph, ent)]["expr"],
                           REFERENCE_COSTS[(ph, ent)]["counts"],
                           REFERENCE_COSTS[(ph, ent)]["undefined"],
                           REFERENCE_COSTS[(ph, ent)]["ms"], 0.0, True, {},
                           "no voters, nothing measured")
                 for (ph, ent) in EXPECTED_COSTS]
        return BenchReport(0, len(candidates), seed, cells, {}, {
            k: (v["comm"], v["comm_bits"]) for k, v in REFERENCE_COSTS.items()},
            {}, 0.0, 0.0, 0, 0, True)

    cfg = ElectionConfig(num_voters=num_voters, candidates=candidates,
                         mix_window=mix_window)
    probes = {}
    result = run_election(cfg, all_cast_script(cfg, seed), seed=seed,
                          probes=probes)

    cells = []
    all_match = True
    for (phase, entity), expected in EXPECTED_COSTS.items():
        measured, avg_s, n = _sum_probe(probes, _PROBE_FOR_CELL[(phase, entity)])
        ref = REFERENCE_COSTS[(phase, entity)]
        matches = measured == expected and n > 0
        all_match = all_match and matches
        cells.append(BenchCell(
            phase, entity, measured, expected, ref["expr"], ref["counts"],
            ref["undefined"], ref["ms"], avg_s * 1000, matches,
            _deltas(measured, ref["counts"]), DELTA_NOTES[(phase, entity)]))

    gen = probes.get("make-ballot", [])
    opening = probes.get("open-transaction", [])
    return BenchReport(
        num_voters=num_voters,
        candidates=len(candidates),
        seed=seed,
        cells=cells,
        sizes=result.sizes,
        reference_sizes={k: (v["comm"], v["comm_bits"])
                         for k, v in REFERENCE_COSTS.items()},
        phase_wall_seconds=result.timings,
        per_ballot_generation_ms=(statistics.mean(e["seconds"] for e in gen) * 1000
                                  if gen else 0.0),
        per_transaction_opening_ms=(statistics.mean(e["seconds"] for e in opening) * 1000
                                    if opening else 0.0),
        board_entries=len(result.board),
        transactions=result.transactions,
        all_cells_match=all_match,
    )
