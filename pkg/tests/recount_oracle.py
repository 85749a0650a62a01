"""Independent brute-force recount: replays a vote script by its rules.

Deliberately crypto-free.  Given the action script that drove an election,
predict the tally by simulating credentials as plain tokens: each voter
slot holds one token per credential, a token counts the first time it is
submitted, forged tokens never count, suppressed submissions consume the
token without counting.  Used as the oracle against the real pipeline.
"""

from collections import Counter


def recount(cfg, script):
    """Expected (counts, rejected, suppressed) for a scripted election."""
    counts = Counter({cid: 0 for cid in cfg.candidates})
    rejected = Counter()
    spent_tokens = {}  # (voter, slot) -> True once counted or suppressed
    suppressed = 0

    def spend(voter, slot, candidate, suppress=False):
        nonlocal suppressed
        key = (voter, slot)
        if spent_tokens.get(key):
            rejected["reject-used-credential"] += 1
            return
        spent_tokens[key] = True
        if suppress:
            suppressed += 1
            return
        counts[candidate] += 1

    next_slot = Counter()

    def next_unspent(voter):
        slot = next_slot[voter]
        next_slot[voter] += 1
        return slot

    for action in script:
        kind = action.kind
        if kind == "cast":
            spend(action.voter, next_unspent(action.voter), action.candidate)
        elif kind == "double-cast":
            spend(action.voter, 0, action.candidate)
            spend(action.voter, 0, action.candidate)
        elif kind == "forge-cast":
            rejected["reject-unknown-credential"] += 1
        elif kind in ("coerce-forge", "randomization", "simulation"):
            rejected["reject-unknown-credential"] += 1
            spend(action.voter, next_unspent(action.voter), action.candidate)
        elif kind == "forced-abstention":
            spend(action.voter, next_unspent(action.voter), action.candidate)
        elif kind == "suppress":
            spend(action.voter, next_unspent(action.voter), action.candidate,
                  suppress=True)
        elif kind in ("abstain", "withhold-key", "tamper-board"):
            continue
    return dict(counts), dict(rejected), suppressed
