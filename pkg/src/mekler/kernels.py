"""Hot kernels for the centralizer-dimension scans.

The dichotomy and bound suites enumerate every support pattern of size up
to 3 with every exponent pattern; on the adequate fragments that is tens of
millions of elements, far too many for the generic sparse eliminator.  The
per-element computation factors exactly: in the commutation matrix of an
element supported on S, every column outside S is either killed by a
single-entry row (some support vertex non-adjacent to it) or entirely free
(adjacent to all of S), and the S columns are constrained by the tiny block
B of within-support rows.  So

    dim_group    = |S| + #common_neighbors(S) - rank(B)
    dim_subgroup = dim_group - 1, unless the functional vanishes on the
                   kernel: zero on every common neighbor and
                   rank([B; ell|S]) == rank(B).

Size-3 scans run either as numba @njit loops or as a vectorized pure-numpy
path (per-anchor boolean matmuls plus rank lookup tables built by the same
tiny eliminator); choose with the MEKLER_BACKEND env flag (numba | numpy,
default numba when importable).  Sizes 1 and 2 are cheap and always use the
vectorized path.  Agreement with the generic eliminator and with
brute-force coset counting is asserted in the test suite.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .graphs import Natural, Vertex
from .group import GroupContext
from .subgroup import DIM_THRESHOLD, PROVISION_PARTNERS, EdgeFunctional

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


_ENV_BACKEND = os.environ.get("MEKLER_BACKEND", "").strip().lower()
if _ENV_BACKEND not in ("", "numba", "numpy"):
    raise ValueError(f"MEKLER_BACKEND must be 'numba' or 'numpy', got {_ENV_BACKEND!r}")


def active_backend() -> str:
    if _ENV_BACKEND == "numpy":
        return "numpy"
    if _ENV_BACKEND == "numba":
        if not HAS_NUMBA:
            raise RuntimeError("MEKLER_BACKEND=numba but numba is not importable")
        return "numba"
    return "numba" if HAS_NUMBA else "numpy"


MODE_GROUP = 0
MODE_SUBGROUP = 1

KIND_GROUP_BOUND = 0  # non-single-natural support above the group bound
KIND_SUBGROUP_HIGH = 1  # subgroup member, not a lone natural, at/over threshold
KIND_SUBGROUP_LOW = 2  # provisioned lone natural below threshold

_VIOLATION_CAP = 200


def _ranks_small_py(rows: list[list[int]], ell_row: list[int], p: int) -> tuple[int, int]:
    """rank(B) and rank([B; ell]) for a block of at most 3 short rows."""
    ncols = len(ell_row)
    m = [list(r) for r in rows] + [list(ell_row)]
    nrows = len(rows)
    rank = 0
    for col in range(ncols):
        piv = -1
        for r in range(rank, nrows):
            if m[r][col] % p:
                piv = r
                break
        if piv < 0:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][col]
        for r in range(rank + 1, nrows + 1):
            f = m[r][col]
            if f % p:
                m[r] = [(m[r][c] * pv - f * m[rank][c]) % p for c in range(ncols)]
        rank += 1
    extra = 1 if any(v % p for v in m[nrows]) else 0
    return rank, rank + extra


def _block_rows(size: int, nonadj_bits: tuple[int, ...], exps: Sequence[int], p: int) -> list[list[int]]:
    """Rows of B in local support coordinates; pair (u, w) with u before w
    contributes a_w at column u and -a_u at column w."""
    rows = []
    if size == 2:
        if nonadj_bits[0]:
            rows.append([exps[1] % p, (-exps[0]) % p])
    elif size == 3:
        nij, nik, njk = nonadj_bits
        if nij:
            rows.append([exps[1] % p, (-exps[0]) % p, 0])
        if nik:
            rows.append([exps[2] % p, 0, (-exps[0]) % p])
        if njk:
            rows.append([0, exps[2] % p, (-exps[1]) % p])
    return rows


def element_dims(
    ctx: GroupContext,
    ell: EdgeFunctional | None,
    support: Sequence[Vertex],
    exps: Sequence[int],
) -> tuple[int, int, bool]:
    """Reference per-element computation: (dim_group, dim_subgroup, member).

    With ell None the subgroup entries degenerate to the group ones and
    member is True.  Exponents must be nonzero mod p.
    """
    p = ctx.p
    size = len(support)
    if size == 0 or size != len(exps):
        raise ValueError("support and exponents must be nonempty and aligned")
    if any(e % p == 0 for e in exps):
        raise ValueError("exponents must be nonzero mod p")
    adj = ctx.graph.adjacency
    sup_set = set(support)
    if len(sup_set) != size:
        raise ValueError("support vertices must be distinct")
    common = [
        v
        for v in ctx.vertex_order
        if v not in sup_set and all(v in adj[s] for s in support)
    ]
    values = {v: (ell.value(v) if ell else 0) for v in ctx.vertex_order}
    t = len(common)
    tl = sum(1 for v in common if values[v] % p)
    bits = []
    if size == 2:
        bits = (0 if support[1] in adj[support[0]] else 1,)
    elif size == 3:
        i, j, k = support
        bits = (
            0 if j in adj[i] else 1,
            0 if k in adj[i] else 1,
            0 if k in adj[j] else 1,
        )
    rows = _block_rows(size, tuple(bits), list(exps), p)
    ell_row = [values[s] % p for s in support]
    rank_b, rank_bl = _ranks_small_py(rows, ell_row, p)
    dim_group = size + t - rank_b
    member = sum(e * values[s] for e, s in zip(exps, support)) % p == 0
    vanish = (tl == 0) and (rank_bl == rank_b)
    dim_subgroup = dim_group - (0 if vanish else 1)
    if ell is None:
        return dim_group, dim_group, True
    return dim_group, dim_subgroup, member


# --- scan plumbing -----------------------------------------------------------


@dataclass
class ScanViolation:
    kind: int
    support: tuple[Vertex, ...]
    exps: tuple[int, ...]
    dim_group: int
    dim_subgroup: int


@dataclass
class ScanResult:
    mode: int
    backend: str
    max_support: int
    elements_checked: int
    members_checked: int
    violations: list[ScanViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def _context_arrays(ctx: GroupContext, ell: EdgeFunctional | None):
    adj = ctx.graph.adjacency_matrix().astype(np.uint8)
    if ell is None:
        ellv = np.zeros(len(ctx), dtype=np.int64)
    else:
        ellv = ell.values_array(ctx) % ctx.p
    nat = np.array([isinstance(v, Natural) for v in ctx.vertex_order], dtype=np.uint8)
    prov = np.zeros(len(ctx), dtype=np.uint8)
    g = ctx.graph
    for idx, v in enumerate(ctx.vertex_order):
        if isinstance(v, Natural) and len(g.gadget_partners(v.n)) >= PROVISION_PARTNERS:
            prov[idx] = 1
    return adj, ellv, nat, prov


def _exp_patterns(p: int, size: int) -> np.ndarray:
    return np.array(list(itertools.product(range(1, p), repeat=size)), dtype=np.int64)


def _decode_violations(ctx: GroupContext, raw: np.ndarray) -> list[ScanViolation]:
    out = []
    for row in raw:
        size = int(row[0])
        idxs = [int(row[1 + t]) for t in range(size)]
        exps = tuple(int(row[4 + t]) for t in range(size))
        out.append(
            ScanViolation(
                kind=int(row[9]),
                support=tuple(ctx.vertex_order[i] for i in idxs),
                exps=exps,
                dim_group=int(row[7]),
                dim_subgroup=int(row[8]),
            )
        )
    return out


# --- sizes 1 and 2: always vectorized numpy ----------------------------------


def _scan_size1(adj, ellv, nat, prov, p, mode, low, high):
    nverts = adj.shape[0]
    deg = adj.sum(axis=1).astype(np.int64)
    ellnz = (ellv % p != 0).astype(np.int64)
    degl = (adj * ellnz[None, :]).sum(axis=1).astype(np.int64)
    dim_g = 1 + deg
    vanish = (degl == 0) & (ellnz == 0)
    dim_s = dim_g - 1 + vanish.astype(np.int64)
    member = ellnz == 0  # e * ell(v) = 0 iff ell(v) = 0, any nonzero e
    records = []
    nexp = p - 1
    checked = nverts * nexp
    members = int(member.sum()) * nexp
    if mode == MODE_GROUP:
        bad = np.flatnonzero((nat == 0) & (dim_g > high))
        for v in bad:
            for e in range(1, p):
                records.append((1, v, -1, -1, e, 0, 0, int(dim_g[v]), -1, KIND_GROUP_BOUND))
    else:
        high_bad = np.flatnonzero(member & (nat == 0) & (dim_s >= low))
        low_bad = np.flatnonzero(member & (nat == 1) & (prov == 1) & (dim_s < low))
        for v in high_bad:
            for e in range(1, p):
                records.append((1, v, -1, -1, e, 0, 0, int(dim_g[v]), int(dim_s[v]), KIND_SUBGROUP_HIGH))
        for v in low_bad:
            for e in range(1, p):
                records.append((1, v, -1, -1, e, 0, 0, int(dim_g[v]), int(dim_s[v]), KIND_SUBGROUP_LOW))
    return checked, members, records


def _rank_tables(p: int, size: int):
    """Lookup tables over (non-adjacency pattern, exponent pattern, ell bits),
    built with the same tiny eliminator the reference path uses."""
    pats = list(itertools.product(range(1, p), repeat=size))
    nbits = 1 if size == 2 else 3
    rank_b = np.zeros((1 << nbits, len(pats)), dtype=np.int64)
    rank_bl = np.zeros((1 << nbits, len(pats), 1 << size), dtype=np.int64)
    memb = np.zeros((len(pats), 1 << size), dtype=bool)
    for na in range(1 << nbits):
        bits = tuple((na >> (nbits - 1 - t)) & 1 for t in range(nbits))
        for ci, exps in enumerate(pats):
            rows = _block_rows(size, bits, exps, p)
            for lp in range(1 << size):
                lrow = [(lp >> (size - 1 - t)) & 1 for t in range(size)]
                rb, rbl = _ranks_small_py(rows, lrow, p)
                rank_b[na, ci] = rb
                rank_bl[na, ci, lp] = rbl
                if na == 0:
                    memb[ci, lp] = sum(e * l for e, l in zip(exps, lrow)) % p == 0
    return rank_b, rank_bl, memb


def _scan_size2(adj, ellv, nat, prov, p, mode, low, high):
    nverts = adj.shape[0]
    if nverts < 2:
        return 0, 0, []
    adjb = adj.astype(bool)
    adjf = adj.astype(np.float32)
    ellnz = (ellv % p != 0)
    common = adjf @ adjf.T
    common_l = (adjf * ellnz.astype(np.float32)[None, :]) @ adjf.T
    jj, kk = np.triu_indices(nverts, k=1)
    t_all = common[jj, kk].astype(np.int64)
    tl_all = common_l[jj, kk].astype(np.int64)
    napat = (~adjb[jj, kk]).astype(np.int64)
    lpat = (ellv[jj] % p != 0).astype(np.int64) * 2 + (ellv[kk] % p != 0).astype(np.int64)
    rank_b, rank_bl, memb_t = _rank_tables(p, 2)
    pats = _exp_patterns(p, 2)
    records = []
    checked = 0
    members = 0
    for ci in range(len(pats)):
        rb = rank_b[napat, ci]
        dim_g = 2 + t_all - rb
        checked += t_all.size
        if mode == MODE_GROUP:
            bad = np.flatnonzero(dim_g > high)
            for t in bad:
                records.append(
                    (2, int(jj[t]), int(kk[t]), -1, int(pats[ci, 0]), int(pats[ci, 1]), 0, int(dim_g[t]), -1, KIND_GROUP_BOUND)
                )
        else:
            member = memb_t[ci, lpat]
            members += int(member.sum())
            rbl = rank_bl[napat, ci, lpat]
            vanish = (tl_all == 0) & (rbl == rb)
            dim_s = dim_g - 1 + vanish.astype(np.int64)
            bad = np.flatnonzero(member & (dim_s >= low))
            for t in bad:
                records.append(
                    (2, int(jj[t]), int(kk[t]), -1, int(pats[ci, 0]), int(pats[ci, 1]), 0, int(dim_g[t]), int(dim_s[t]), KIND_SUBGROUP_HIGH)
                )
    return checked, members, records


# --- size 3: numba kernel ----------------------------------------------------


@njit(cache=True)
def _scan3_numba_core(adj, ellv, p, mode, low, high, exp_pats, viol, cap):  # pragma: no cover - jit
    nverts = adj.shape[0]
    npat = exp_pats.shape[0]
    checked = 0
    members = 0
    nv = 0
    common = np.empty(nverts, dtype=np.int64)
    m = np.zeros((4, 3), dtype=np.int64)
    for i in range(nverts - 2):
        for j in range(i + 1, nverts - 1):
            nc = 0
            for v in range(nverts):
                if adj[i, v] != 0 and adj[j, v] != 0:
                    common[nc] = v
                    nc += 1
            nij = 1 - adj[i, j]
            for k in range(j + 1, nverts):
                t = 0
                tl = 0
                for c in range(nc):
                    v = common[c]
                    if adj[k, v] != 0:
                        t += 1
                        if ellv[v] % p != 0:
                            tl += 1
                nik = 1 - adj[i, k]
                njk = 1 - adj[j, k]
                li = ellv[i] % p
                lj = ellv[j] % p
                lk = ellv[k] % p
                for pi in range(npat):
                    e1 = exp_pats[pi, 0]
                    e2 = exp_pats[pi, 1]
                    e3 = exp_pats[pi, 2]
                    checked += 1
                    is_member = (e1 * li + e2 * lj + e3 * lk) % p == 0
                    if mode == 1:
                        if not is_member:
                            continue
                        members += 1
                    nr = 0
                    if nij != 0:
                        m[nr, 0] = e2
                        m[nr, 1] = (p - e1) % p
                        m[nr, 2] = 0
                        nr += 1
                    if nik != 0:
                        m[nr, 0] = e3
                        m[nr, 1] = 0
                        m[nr, 2] = (p - e1) % p
                        nr += 1
                    if njk != 0:
                        m[nr, 0] = 0
                        m[nr, 1] = e3
                        m[nr, 2] = (p - e2) % p
                        nr += 1
                    m[nr, 0] = li
                    m[nr, 1] = lj
                    m[nr, 2] = lk
                    rank = 0
                    for col in range(3):
                        piv = -1
                        for r in range(rank, nr):
                            if m[r, col] % p != 0:
                                piv = r
                                break
                        if piv < 0:
                            continue
                        for c in range(3):
                            tmp = m[rank, c]
                            m[rank, c] = m[piv, c]
                            m[piv, c] = tmp
                        pv = m[rank, col]
                        for r in range(rank + 1, nr + 1):
                            f = m[r, col]
                            if f % p != 0:
                                for c in range(3):
                                    m[r, c] = (m[r, c] * pv - f * m[rank, c]) % p
                        rank += 1
                    extra = 0
                    for c in range(3):
                        if m[nr, c] % p != 0:
                            extra = 1
                            break
                    dim_g = 3 + t - rank
                    if mode == 0:
                        if dim_g > high and nv < cap:
                            viol[nv, 0] = 3
                            viol[nv, 1] = i
                            viol[nv, 2] = j
                            viol[nv, 3] = k
                            viol[nv, 4] = e1
                            viol[nv, 5] = e2
                            viol[nv, 6] = e3
                            viol[nv, 7] = dim_g
                            viol[nv, 8] = -1
                            viol[nv, 9] = 0
                            nv += 1
                    else:
                        vanish = 1 if (tl == 0 and extra == 0) else 0
                        dim_s = dim_g - 1 + vanish
                        if dim_s >= low and nv < cap:
                            viol[nv, 0] = 3
                            viol[nv, 1] = i
                            viol[nv, 2] = j
                            viol[nv, 3] = k
                            viol[nv, 4] = e1
                            viol[nv, 5] = e2
                            viol[nv, 6] = e3
                            viol[nv, 7] = dim_g
                            viol[nv, 8] = dim_s
                            viol[nv, 9] = 1
                            nv += 1
    return checked, members, nv


def _scan_size3_numba(adj, ellv, nat, prov, p, mode, low, high):
    viol = np.zeros((_VIOLATION_CAP, 10), dtype=np.int64)
    pats = _exp_patterns(p, 3)
    checked, members, nv = _scan3_numba_core(
        adj.astype(np.uint8), ellv.astype(np.int64), p, mode, low, high, pats, viol, _VIOLATION_CAP
    )
    return checked, members, [tuple(int(x) for x in row) for row in viol[:nv]]


# --- size 3: pure-numpy vectorized path ---------------------------------------


def _scan_size3_numpy(adj, ellv, nat, prov, p, mode, low, high):
    nverts = adj.shape[0]
    if nverts < 3:
        return 0, 0, []
    adjb = adj.astype(bool)
    adjf = adj.astype(np.float32)
    ellnz = (ellv % p != 0)
    ellbit = ellnz.astype(np.int64)
    rank_b, rank_bl, memb_t = _rank_tables(p, 3)
    pats = _exp_patterns(p, 3)
    records = []
    checked = 0
    members = 0
    for i in range(nverts - 2):
        rest = nverts - i - 1
        if rest < 2:
            break
        wi = adjb & adjb[i][None, :]  # wi[j, v] = adj to both i and j
        wif = wi.astype(np.float32)
        t_all = wif @ adjf.T  # [j, k]: common neighbors of {i, j, k}
        tl_all = (wif * ellnz.astype(np.float32)[None, :]) @ adjf.T
        jr, kr = np.triu_indices(rest, k=1)
        jj = jr + i + 1
        kk = kr + i + 1
        t_v = t_all[jj, kk].astype(np.int64)
        tl_v = tl_all[jj, kk].astype(np.int64)
        napat = (
            (~adjb[i, jj]).astype(np.int64) * 4
            + (~adjb[i, kk]).astype(np.int64) * 2
            + (~adjb[jj, kk]).astype(np.int64)
        )
        lpat = ellbit[i] * 4 + ellbit[jj] * 2 + ellbit[kk]
        for ci in range(len(pats)):
            rb = rank_b[napat, ci]
            dim_g = 3 + t_v - rb
            checked += t_v.size
            if mode == MODE_GROUP:
                bad = np.flatnonzero(dim_g > high)
                for t in bad:
                    records.append(
                        (3, i, int(jj[t]), int(kk[t]), int(pats[ci, 0]), int(pats[ci, 1]), int(pats[ci, 2]), int(dim_g[t]), -1, KIND_GROUP_BOUND)
                    )
            else:
                member = memb_t[ci, lpat]
                members += int(member.sum())
                rbl = rank_bl[napat, ci, lpat]
                vanish = (tl_v == 0) & (rbl == rb)
                dim_s = dim_g - 1 + vanish.astype(np.int64)
                bad = np.flatnonzero(member & (dim_s >= low))
                for t in bad:
                    records.append(
                        (3, i, int(jj[t]), int(kk[t]), int(pats[ci, 0]), int(pats[ci, 1]), int(pats[ci, 2]), int(dim_g[t]), int(dim_s[t]), KIND_SUBGROUP_HIGH)
                    )
    return checked, members, records


def _run_scan(ctx, ell, mode, max_support, low, high, backend):
    if max_support < 1 or max_support > 3:
        raise ValueError("support budgets beyond 3 are not covered by the dichotomy statements")
    if backend is None:
        backend = active_backend()
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "numba" and not HAS_NUMBA:
        raise RuntimeError("numba backend requested but numba is not importable")
    adj, ellv, nat, prov = _context_arrays(ctx, ell)
    p = ctx.p
    checked = 0
    members = 0
    raw: list[tuple] = []
    c, m, r = _scan_size1(adj, ellv, nat, prov, p, mode, low, high)
    checked, members = checked + c, members + m
    raw.extend(r)
    if max_support >= 2:
        c, m, r = _scan_size2(adj, ellv, nat, prov, p, mode, low, high)
        checked, members = checked + c, members + m
        raw.extend(r)
    if max_support >= 3:
        size3 = _scan_size3_numba if backend == "numba" else _scan_size3_numpy
        c, m, r = size3(adj, ellv, nat, prov, p, mode, low, high)
        checked, members = checked + c, members + m
        raw.extend(r)
    result = ScanResult(
        mode=mode,
        backend=backend,
        max_support=max_support,
        elements_checked=checked,
        members_checked=members if mode == MODE_SUBGROUP else checked,
        violations=_decode_violations(ctx, np.array(raw, dtype=np.int64).reshape(-1, 10)),
    )
    return result


def scan_group_bound(ctx: GroupContext, max_support: int = 3, bound: int = 5, backend: str | None = None) -> ScanResult:
    """Exhaustively confirm dim_group <= bound for every support of size up
    to max_support that is not a lone natural."""
    return _run_scan(ctx, None, MODE_GROUP, max_support, low=DIM_THRESHOLD, high=bound, backend=backend)


def scan_subgroup_dichotomy(
    ctx: GroupContext,
    ell: EdgeFunctional,
    max_support: int = 3,
    backend: str | None = None,
) -> ScanResult:
    """Exhaustively confirm the subgroup dichotomy on small supports:
    provisioned lone naturals at or above the threshold, everything else
    strictly below it."""
    return _run_scan(ctx, ell, MODE_SUBGROUP, max_support, low=DIM_THRESHOLD, high=DIM_THRESHOLD - 1, backend=backend)
