"""Redundant-role removal pass applied after mining.

A role is redundant when, for every user holding it, each of its permissions
is also available from some other catalog role that fits inside that user's
row.  Redundant roles are removed largest first and their users reassigned
greedily (largest fitting role first); the sweep repeats until no role can
be removed.  The pass never adds or merges roles, so the catalog can only
shrink and completeness and the cardinality bound are preserved by
construction.

The redundancy test is evaluated with per-row counters: for each distinct
row we track, per permission, how many live catalog roles fit inside the
row and contain it.  A role is removable iff every counter it touches for
its users' rows is at least two (itself plus one alternative).
"""

from __future__ import annotations

from .model import (
    AccessMatrix,
    ConstraintViolationError,
    Decomposition,
    IncompleteDecompositionError,
    is_complete,
    iter_bits,
    satisfies_constraint,
)


def lattice_reduce(upa: AccessMatrix, d: Decomposition, k: int) -> Decomposition:
    """Remove redundant roles; idempotent once a fixpoint is reached."""
    if not is_complete(upa, d):
        raise IncompleteDecompositionError(
            "lattice_reduce requires a complete decomposition"
        )
    if not satisfies_constraint(d, k):
        raise ConstraintViolationError(
            f"input decomposition violates the constraint k={k}"
        )
    if not d.roles:
        return d

    masks = {r.id: r.mask for r in d.roles}
    sort_key = {r.id: (-len(r.perms), r.sorted_perms()) for r in d.roles}
    user_roles = [set(s) for s in d.ua]
    role_users: dict[int, set[int]] = {r.id: set() for r in d.roles}
    for u, s in enumerate(user_roles):
        for rid in s:
            role_users[rid].add(u)

    # Distinct rows; everything below is evaluated per row, not per user.
    row_ids: dict[int, int] = {}
    row_of_user = []
    for m in upa.masks:
        rid = row_ids.setdefault(m, len(row_ids))
        row_of_user.append(rid)
    row_masks = list(row_ids)

    rows_with_perm: dict[int, list[int]] = {}
    for ri, rm in enumerate(row_masks):
        for p in iter_bits(rm):
            rows_with_perm.setdefault(p, []).append(ri)

    def rows_containing(mask: int) -> list[int]:
        rare = min(iter_bits(mask), key=lambda p: len(rows_with_perm.get(p, ())))
        return [
            ri for ri in rows_with_perm.get(rare, ()) if mask & ~row_masks[ri] == 0
        ]

    # counters[row][p]: live roles that fit in the row and contain p
    counters: list[dict[int, int]] = [dict() for _ in row_masks]
    for rid, m in masks.items():
        for ri in rows_containing(m):
            cnt = counters[ri]
            for p in iter_bits(m):
                cnt[p] = cnt.get(p, 0) + 1

    alive = set(masks)
    ordered = sorted(masks, key=lambda rid: sort_key[rid])

    changed = True
    while changed:
        changed = False
        for rid in ordered:
            if rid not in alive:
                continue
            m = masks[rid]
            touched_rows = {row_of_user[u] for u in role_users[rid]}
            if not all(
                counters[ri].get(p, 0) >= 2
                for ri in touched_rows
                for p in iter_bits(m)
            ):
                continue
            alive.discard(rid)
            for ri in rows_containing(m):
                cnt = counters[ri]
                for p in iter_bits(m):
                    cnt[p] -= 1
            for u in sorted(role_users[rid]):
                user_roles[u].discard(rid)
                still = 0
                for other in user_roles[u]:
                    still |= masks[other]
                remainder = m & ~still
                if not remainder:
                    continue
                row = upa.masks[u]
                for cand in ordered:
                    if cand not in alive or masks[cand] & ~row:
                        continue
                    if masks[cand] & remainder:
                        user_roles[u].add(cand)
                        role_users[cand].add(u)
                        remainder &= ~masks[cand]
                        if not remainder:
                            break
                assert remainder == 0, "redundancy test guaranteed a cover"
            del role_users[rid]
            changed = True

    kept = tuple(r for r in d.roles if r.id in alive)
    return Decomposition(roles=kept, ua=tuple(frozenset(s) for s in user_roles))
