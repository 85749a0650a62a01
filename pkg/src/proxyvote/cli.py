"""Command-line harness: scripted elections, scenarios, verification, benchmark.

Subcommands:

    setup     write an election config file
    run       execute a full election, persist the board, print the tally
    scenario  run a scenario file (or a named built-in) and report pass/fail
    verify    chain-check a board file and reproduce its tally
    bench     operation-count benchmark against the published cost model
    audit     re-check the audit phase of a persisted board

Exit status is 0 only on pass/accept.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bulletin
from .bench import run_bench
from .protocol import Credential, ElectionConfig, VotingTransaction
from .runner import Action, run_election, verify_board
from .scenarios import (
    Scenario,
    builtin_scenarios,
    load_scenario,
    render_scenario,
    run_scenario,
)
from . import envelope as env

_CONFIG_HEADER = "pv-election v1"


def render_config(cfg: ElectionConfig) -> str:
    lines = [_CONFIG_HEADER,
             f"voters: {cfg.num_voters}",
             f"candidates: {' '.join(cfg.candidates)}",
             f"mix-window: {cfg.mix_window}",
             f"audit: {'on' if cfg.audit_enabled else 'off'}",
             f"credentials-per-voter: {cfg.credentials_per_voter}",
             f"ring-cap: {cfg.ring_cap if cfg.ring_cap is not None else 'none'}",
             f"tag: {cfg.security_tag}"]
    return "\n".join(lines) + "\n"


def parse_config(text: str) -> ElectionConfig:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0] != _CONFIG_HEADER:
        raise ValueError(f"expected config header {_CONFIG_HEADER!r}")
    meta = {}
    for ln in lines[1:]:
        key, _, value = ln.partition(":")
        meta[key.strip()] = value.strip()
    return ElectionConfig(
        num_voters=int(meta["voters"]),
        candidates=meta["candidates"].split(),
        audit_enabled=meta.get("audit", "off") in ("on", "yes", "true"),
        mix_window=int(meta.get("mix-window", "1")),
        credentials_per_voter=int(meta.get("credentials-per-voter", "1")),
        ring_cap=None if meta.get("ring-cap", "none") in ("none", "")
        else int(meta["ring-cap"]),
        security_tag=meta.get("tag", "pv-election-v1"),
    )


def _load_config(args) -> ElectionConfig:
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            return parse_config(fh.read())
    if not args.voters or not args.candidates:
        raise SystemExit("either --config or both --voters and --candidates required")
    return ElectionConfig(
        num_voters=args.voters,
        candidates=args.candidates.split(","),
        audit_enabled=args.audit,
        mix_window=args.mix_window,
        ring_cap=args.ring_cap,
    )


def _cmd_setup(args) -> int:
    cfg = ElectionConfig(
        num_voters=args.voters,
        candidates=args.candidates.split(","),
        audit_enabled=args.audit,
        mix_window=args.mix_window,
        ring_cap=args.ring_cap,
    )
    text = render_config(cfg)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote election config to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_run(args) -> int:
    cfg = _load_config(args)
    script = None
    if args.votes:
        script = []
        for i, choice in enumerate(args.votes.split(",")):
            choice = choice.strip()
            if choice and choice != "-":
                script.append(Action("cast", voter=i, candidate=choice))
    result = run_election(cfg, script, seed=args.seed, board_path=args.board,
                          concurrent_open=args.concurrent_open)
    print(f"tally: {json.dumps(result.report.counts, sort_keys=True)}")
    print(f"valid: {result.report.total_valid}  unopened: {result.report.unopened}  "
          f"rejected: {json.dumps(result.report.rejected, sort_keys=True)}")
    if result.verdicts is not None:
        verified = sum(1 for v in result.verdicts.values() if v == "verified")
        print(f"audit: {verified}/{len(result.verdicts)} voters verified, "
              f"{result.claims} claims")
    if args.board:
        print(f"board: {args.board} ({len(result.board)} entries, "
              f"head {result.head_hash.hex()[:16]}...)")
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(result.report.to_json() + "\n")
        print(f"report: {args.report}")
    if args.export_audit:
        bundle = {str(v): [c.to_bytes().hex() for c in creds]
                  for v, creds in result.participants.items()}
        with open(args.export_audit, "w", encoding="utf-8") as fh:
            json.dump(bundle, fh, sort_keys=True)
        print(f"audit bundle: {args.export_audit}")
    return 0


def _cmd_scenario(args) -> int:
    if args.list:
        for name in builtin_scenarios():
            print(name)
        return 0
    if args.file:
        scenario = load_scenario(args.file)
    elif args.builtin:
        library = builtin_scenarios()
        if args.builtin not in library:
            raise SystemExit(f"unknown builtin scenario {args.builtin!r}; "
                             f"try: {', '.join(library)}")
        scenario = library[args.builtin]
    else:
        raise SystemExit("one of --file, --builtin or --list required")
    if args.dump:
        sys.stdout.write(render_scenario(scenario))
        return 0
    passed, diffs, _result = run_scenario(scenario, seed=args.seed,
                                          board_path=args.board)
    if passed:
        print(f"scenario {scenario.name}: PASS")
        return 0
    print(f"scenario {scenario.name}: FAIL")
    for d in diffs:
        print(f"  {d}")
    return 1


def _cmd_verify(args) -> int:
    ok, detail = verify_board(args.board)
    print(("accept: " if ok else "reject: ") + detail)
    return 0 if ok else 1


def _cmd_bench(args) -> int:
    candidates = (args.candidates.split(",") if args.candidates
                  else [f"C{i + 1}" for i in range(args.num_candidates)])
    report = run_bench(args.voters, candidates, seed=args.seed,
                       mix_window=args.mix_window)
    print(report.to_text())
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(report.to_json() + "\n")
        print(f"\nmachine-readable report: {args.json}")
    return 0 if report.all_cells_match else 1


def _cmd_audit(args) -> int:
    try:
        board = bulletin.load(args.board)
    except bulletin.BulletinError as exc:
        print(f"reject: {exc}")
        return 1
    keys = board.query(kind="commit-key")
    if not keys:
        print("reject: board has no commit-key entry (audit phase missing)")
        return 1
    key = keys[-1].payload
    claims = board.query(kind="claim")
    print(f"commit key published: {key.hex()[:16]}...  claims on board: {len(claims)}")
    if not args.bundle:
        print("accept: audit records structurally sound "
              "(pass --bundle to recompute voter verdicts)")
        return 0 if not claims else 1
    with open(args.bundle, encoding="utf-8") as fh:
        bundle = json.load(fh)
    commitments = set()
    for entry in board.query(kind="transaction"):
        txn = VotingTransaction.from_bytes(entry.payload)
        if txn.commitment is not None:
            commitments.add(txn.commitment.digest)
    failures = 0
    for voter, creds in sorted(bundle.items(), key=lambda kv: int(kv[0])):
        for hexcred in creds:
            credential = Credential.from_bytes(bytes.fromhex(hexcred))
            expected = env.commit(key, credential.to_bytes())
            verdict = "verified" if expected.digest in commitments else "missing"
            if verdict == "missing":
                failures += 1
            print(f"voter {voter}: {verdict}")
    if failures:
        print(f"reject: {failures} ballot(s) unaccounted for")
        return 1
    print("accept: every bundled ballot is committed to on the board")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="proxyvote",
        description="receipt-free e-voting simulator on key-private proxy re-encryption")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("setup", help="write an election config file")
    p.add_argument("--voters", type=int, required=True)
    p.add_argument("--candidates", required=True, help="comma-separated ids")
    p.add_argument("--mix-window", type=int, default=4)
    p.add_argument("--audit", action="store_true")
    p.add_argument("--ring-cap", type=int, default=None)
    p.add_argument("--out", help="config file path (default: stdout)")
    p.set_defaults(func=_cmd_setup)

    p = sub.add_parser("run", help="run a full election")
    p.add_argument("--config", help="election config file")
    p.add_argument("--voters", type=int)
    p.add_argument("--candidates", help="comma-separated ids")
    p.add_argument("--mix-window", type=int, default=4)
    p.add_argument("--audit", action="store_true")
    p.add_argument("--ring-cap", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--board", help="persist the bulletin board here")
    p.add_argument("--report", help="write the tally report JSON here")
    p.add_argument("--votes", help="comma list of choices per voter, '-' to abstain")
    p.add_argument("--export-audit", help="write the voter credential bundle here")
    p.add_argument("--concurrent-open", action="store_true",
                   help="open transactions on one thread per candidate "
                        "(confinement exercise; timings not meaningful)")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("scenario", help="run an adversarial scenario")
    p.add_argument("--file", help="scenario file")
    p.add_argument("--builtin", help="built-in scenario name")
    p.add_argument("--list", action="store_true", help="list built-ins")
    p.add_argument("--dump", action="store_true", help="print the scenario file text")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--board", help="persist the scenario board here")
    p.set_defaults(func=_cmd_scenario)

    p = sub.add_parser("verify", help="verify a persisted board")
    p.add_argument("--board", required=True)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("bench", help="operation-count benchmark")
    p.add_argument("--voters", type=int, default=10)
    p.add_argument("--candidates", help="comma-separated ids")
    p.add_argument("--num-candidates", type=int, default=3)
    p.add_argument("--mix-window", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", help="write the machine-readable report here")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("audit", help="re-check the audit phase of a board")
    p.add_argument("--board", required=True)
    p.add_argument("--bundle", help="credential bundle from run --export-audit")
    p.set_defaults(func=_cmd_audit)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
