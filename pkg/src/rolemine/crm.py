"""Constrained Role Miner baseline.

Greedy cover loop: cluster users by identical uncovered permission sets,
form one constraint-respecting candidate per cluster, take the candidate
whose cluster has the most users, and assign it to every user whose
uncovered set contains it.  Repeats until no uncovered cell remains, which
is guaranteed because each pick covers at least one cell.

Deterministic policies:
- oversized cluster sets keep the k permissions that are most frequent
  among all currently uncovered cells (ties: ascending permission index);
- selection ties on user count prefer the larger candidate, then the
  lexicographically smallest permission tuple.
"""

from __future__ import annotations

from .lattice import lattice_reduce
from .model import (
    AccessMatrix,
    Decomposition,
    MiningConfig,
    Role,
    iter_bits,
    mask_of,
    perm_tuple,
)


def mine_crm(
    upa: AccessMatrix, cfg: MiningConfig, *, lattice: bool = True
) -> Decomposition:
    k = cfg.max_perms_per_role
    uncovered = list(upa.masks)
    freq = [0] * upa.n_perms
    for m in uncovered:
        for p in iter_bits(m):
            freq[p] += 1

    role_masks: list[int] = []
    role_users: list[list[int]] = []
    seen_masks: set[int] = set()
    active = [u for u in range(upa.n_users) if uncovered[u]]

    while active:
        clusters: dict[int, list[int]] = {}
        for u in active:
            clusters.setdefault(uncovered[u], []).append(u)

        best_cand = -1
        best_count = -1
        best_size = -1
        best_tuple: tuple[int, ...] | None = None
        for cluster_mask, members in clusters.items():
            if cluster_mask.bit_count() <= k:
                cand = cluster_mask
            else:
                top = sorted(iter_bits(cluster_mask), key=lambda p: (-freq[p], p))[:k]
                cand = mask_of(top)
            count = len(members)
            size = cand.bit_count()
            if (count, size) < (best_count, best_size):
                continue
            if (count, size) > (best_count, best_size):
                best_cand, best_count, best_size = cand, count, size
                best_tuple = None
                continue
            if cand == best_cand:
                continue
            if best_tuple is None:
                best_tuple = perm_tuple(best_cand)
            cand_tuple = perm_tuple(cand)
            if cand_tuple < best_tuple:
                best_cand, best_tuple = cand, cand_tuple

        cand = best_cand
        assert cand > 0 and cand not in seen_masks
        seen_masks.add(cand)
        holders = []
        for u in active:
            if cand & ~uncovered[u] == 0:
                holders.append(u)
                uncovered[u] &= ~cand
                for p in iter_bits(cand):
                    freq[p] -= 1
        role_masks.append(cand)
        role_users.append(holders)
        active = [u for u in active if uncovered[u]]

    ua: list[set[int]] = [set() for _ in range(upa.n_users)]
    for rid, users in enumerate(role_users):
        for u in users:
            ua[u].add(rid)
    d = Decomposition(
        roles=tuple(
            Role(rid, frozenset(iter_bits(m))) for rid, m in enumerate(role_masks)
        ),
        ua=tuple(frozenset(s) for s in ua),
    )
    if lattice:
        d = lattice_reduce(upa, d, k)
    return d
