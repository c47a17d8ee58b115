"""Grid scans for zeros and sign changes of phase-space functions.

A scan evaluates on a rectangular grid and flags cells that may contain a
zero: the phase winds around the cell, the real and imaginary parts both
change sign at its corners, or a corner is an interior local minimum of the
modulus below ``10 * zero_tol``.  Flagged cells are refined by damped Newton
iteration on (x, xi) -> (Re F, Im F).  A point is reported as a zero only if
Newton converged there (the last step is negligible) and ``|F| < zero_tol``.
Small values without convergence, such as deep in a Gaussian tail, never
count as zeros.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .core import PhaseSpacePoint
from .oracle import GridSpec

__all__ = ["ZeroReport", "SignScan", "scan", "sign_change_scan", "default_workers"]

NEWTON_MAX_ITER = 60
NEWTON_HALVINGS = 40


def default_workers() -> int:
    env = os.environ.get("TFZERO_THREADS")
    if env:
        n = int(env)
        if n < 1:
            raise ValueError("TFZERO_THREADS must be >= 1")
        return n
    return 1


@dataclass
class ZeroReport:
    zeros: list
    min_modulus: float
    argmin: PhaseSpacePoint
    grid: GridSpec
    refined: bool
    suspect_cells: list = field(default_factory=list)
    certificates: tuple = ()
    zero_tol: float = 0.0
    evaluations: int = 0

    def __post_init__(self):
        if self.min_modulus < 0:
            raise ValueError("min_modulus must be nonnegative")

    @property
    def zero_free(self) -> bool:
        return not self.zeros

    def to_dict(self) -> dict:
        return {
            "zeros": [{"x": z.x, "xi": z.xi, "residual": r} for z, r in self.zeros],
            "min_modulus": self.min_modulus,
            "argmin": {"x": self.argmin.x, "xi": self.argmin.xi},
            "grid": self.grid.to_dict(),
            "refined": self.refined,
            "suspect_cells": [{"x": x, "xi": k, "modulus": m} for x, k, m in self.suspect_cells],
            "certificates": list(self.certificates),
            "zero_tol": self.zero_tol,
            "evaluations": self.evaluations,
        }


def _vector_eval(fn, X, K, workers):
    """Evaluate on arrays, falling back to row-wise / pointwise calls."""
    try:
        out = np.asarray(fn(X, K), dtype=complex)
        if out.shape == X.shape:
            return out
    except Exception:  # noqa: BLE001 - evaluator might be scalar-only
        pass
    shape = X.shape
    X, K = np.atleast_2d(X), np.atleast_2d(K)

    def row(i):
        return [complex(fn(float(x), float(k))) for x, k in zip(X[i], K[i])]

    if workers > 1 and X.shape[0] > 1:
        with ThreadPoolExecutor(workers) as pool:
            rows = list(pool.map(row, range(X.shape[0])))
    else:
        rows = [row(i) for i in range(X.shape[0])]
    return np.array(rows, dtype=complex).reshape(shape)


def _flag_cells(F, M, zero_tol):
    c00, c01 = F[:-1, :-1], F[:-1, 1:]
    c11, c10 = F[1:, 1:], F[1:, :-1]
    corners = [c00, c01, c11, c10]
    wind = np.zeros(c00.shape)
    for p, q in zip(corners, corners[1:] + corners[:1]):
        with np.errstate(invalid="ignore", divide="ignore"):
            wind += np.angle(q / p)
    wind = np.round(wind / (2 * np.pi))
    exact_zero = np.zeros(c00.shape, dtype=bool)
    for c in corners:
        exact_zero |= c == 0
    re = np.stack([c.real for c in corners])
    im = np.stack([c.imag for c in corners])
    both = (re.min(0) <= 0) & (re.max(0) >= 0) & (im.min(0) <= 0) & (im.max(0) >= 0)
    flags = (np.nan_to_num(wind) != 0) | exact_zero | both
    # interior strict local minima of the modulus below 10 * zero_tol
    inner = M[1:-1, 1:-1]
    lm = inner < 10 * zero_tol
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di or dj:
                lm &= inner < M[1 + di:M.shape[0] - 1 + di, 1 + dj:M.shape[1] - 1 + dj]
    return flags, np.argwhere(lm) + 1


def _newton(fn, starts, zero_tol):
    """Damped Newton with pseudo-inverse of a central-difference Jacobian."""
    z = np.array(starts, dtype=float).reshape(-1, 2)
    n = len(z)
    if n == 0:
        return z, np.zeros(0), np.zeros(0, dtype=bool), 0

    def F(pts):
        v = np.asarray(fn(pts[:, 0], pts[:, 1]), dtype=complex)
        return np.stack([v.real, v.imag], axis=1)

    evals = 0
    fz = F(z)
    evals += n
    last_step = np.full(n, np.inf)
    active = np.ones(n, dtype=bool)
    for _ in range(NEWTON_MAX_ITER):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        za, fa = z[idx], fz[idx]
        h = 1e-6 * (1 + np.hypot(za[:, 0], za[:, 1]))
        J = np.empty((idx.size, 2, 2))
        for col in range(2):
            e = np.zeros_like(za)
            e[:, col] = h
            J[:, :, col] = (F(za + e) - F(za - e)) / (2 * h[:, None])
        evals += 4 * idx.size
        step = -np.einsum("nij,nj->ni", np.linalg.pinv(J), fa)
        norm0 = np.linalg.norm(fa, axis=1)
        lam = np.ones(idx.size)
        accepted = np.zeros(idx.size, dtype=bool)
        znew, fnew = za.copy(), fa.copy()
        for _h in range(NEWTON_HALVINGS + 1):
            todo = ~accepted
            if not todo.any():
                break
            cand = za[todo] + lam[todo, None] * step[todo]
            fc = F(cand)
            evals += int(todo.sum())
            ok = np.isfinite(fc).all(axis=1) & (np.linalg.norm(fc, axis=1) < norm0[todo])
            sub = np.flatnonzero(todo)[ok]
            znew[sub], fnew[sub] = cand[ok], fc[ok]
            accepted[sub] = True
            lam[todo] *= 0.5
        moved = lam * 2 * np.linalg.norm(step, axis=1)
        z[idx[accepted]] = znew[accepted]
        fz[idx[accepted]] = fnew[accepted]
        last_step[idx] = np.where(accepted, moved, np.inf)
        scale = 1e-10 * (1 + np.hypot(z[idx, 0], z[idx, 1]))
        res = np.linalg.norm(fz[idx], axis=1)
        done = (~accepted) | ((last_step[idx] < scale) & (res < zero_tol))
        done |= res == 0
        active[idx[done]] = False
    res = np.linalg.norm(fz, axis=1)
    scale = 1e-6 * (1 + np.hypot(z[:, 0], z[:, 1]))
    converged = (res < zero_tol) & ((last_step < scale) | (res == 0))
    return z, res, converged, evals


def _lexargmin(M, X, K):
    m = M.min()
    idx = np.flatnonzero(M.ravel() == m)
    pts = sorted((X.ravel()[i], K.ravel()[i]) for i in idx)
    return float(m), PhaseSpacePoint(float(pts[0][0]), float(pts[0][1]))


def scan(fn: Callable, grid: GridSpec, zero_tol: float = 1e-8,
         lower_bound: Optional[Callable] = None, workers: Optional[int] = None) -> ZeroReport:
    """Locate zeros of ``fn(x, xi)`` on ``grid`` or report the minimum modulus.

    ``fn`` should accept numpy arrays; scalar-only evaluators are called
    point by point (rows spread over ``workers`` threads).  ``lower_bound``
    is an optional analytic lower bound for ``|fn|``; when it is positive on
    the whole grid and consistent with the evaluated moduli the report
    carries the "analytic" certificate tag.
    """
    if not zero_tol > 0:
        raise ValueError("zero_tol must be positive")
    workers = default_workers() if workers is None else workers
    X, K = grid.mesh()
    F = _vector_eval(fn, X, K, workers)
    M = np.abs(F)
    evals = F.size
    flags, minima = _flag_cells(F, M, zero_tol)
    starts = []
    for i, j in np.argwhere(flags):
        block = M[i:i + 2, j:j + 2]
        bi, bj = np.unravel_index(np.argmin(block), block.shape)
        starts.append((X[i + bi, j + bj], K[i + bi, j + bj]))
    starts += [(X[i, j], K[i, j]) for i, j in minima]
    starts = sorted(set(starts))

    def vfn(x, k):
        return _vector_eval(fn, np.atleast_1d(x), np.atleast_1d(k), 1)

    zeros, suspects = [], []
    min_mod, argmin = _lexargmin(M, X, K)
    if starts:
        zs, res, conv, ne = _newton(vfn, starts, zero_tol)
        evals += ne
        hx = (grid.x_range[1] - grid.x_range[0]) / (grid.nx - 1)
        hk = (grid.xi_range[1] - grid.xi_range[0]) / (grid.nxi - 1)
        inside = ((zs[:, 0] >= grid.x_range[0] - hx) & (zs[:, 0] <= grid.x_range[1] + hx)
                  & (zs[:, 1] >= grid.xi_range[0] - hk) & (zs[:, 1] <= grid.xi_range[1] + hk))
        for (x0, k0), z, r, ok, ins in zip(starts, zs, res, conv, inside):
            # a zero Newton reached outside the rectangle is not evidence about it
            if ok and ins:
                if not any(abs(z[0] - p.x) < 1e-7 and abs(z[1] - p.xi) < 1e-7 for p, _ in zeros):
                    zeros.append((PhaseSpacePoint(float(z[0]), float(z[1])), float(r)))
                if r < min_mod or (r == min_mod and (z[0], z[1]) < (argmin.x, argmin.xi)):
                    min_mod, argmin = float(r), PhaseSpacePoint(float(z[0]), float(z[1]))
            else:
                suspects.append((float(x0), float(k0), float(np.abs(vfn(x0, k0))[0])))
        zeros.sort(key=lambda t: (t[0].x, t[0].xi))
    certs = ["grid-evidence"] if not zeros else []
    if lower_bound is not None and not zeros:
        lb = np.asarray(lower_bound(X, K), dtype=float)
        if np.all(lb > 0) and np.all(lb <= M * (1 + 1e-9) + 1e-300):
            certs.append("analytic")
    return ZeroReport(zeros, min_mod, argmin, grid, bool(starts), suspects, tuple(certs),
                      zero_tol, evals)


@dataclass
class SignScan:
    plus: Optional[PhaseSpacePoint]
    minus: Optional[PhaseSpacePoint]
    min_value: float
    max_value: float

    @property
    def both(self) -> bool:
        return self.plus is not None and self.minus is not None

    def as_tuple(self):
        return (self.plus, self.minus) if self.both else None


def sign_change_scan(fn: Callable, grid: GridSpec, workers: Optional[int] = None) -> SignScan:
    """Look for points where a real-valued ``fn`` is resolvably positive and negative.

    ``fn(x, xi)`` returns either a real value or ``(value, error_bound)``; a
    witness counts only when ``|value| > error_bound``.
    """
    workers = default_workers() if workers is None else workers
    X, K = grid.mesh()
    pts = list(zip(X.ravel(), K.ravel()))

    def one(p):
        r = fn(float(p[0]), float(p[1]))
        if isinstance(r, tuple):
            return float(np.real(r[0])), float(r[1])
        return float(np.real(r)), 0.0

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            vals = list(pool.map(one, pts))
    else:
        vals = [one(p) for p in pts]
    v = np.array([a for a, _ in vals])
    e = np.array([b for _, b in vals])
    plus = minus = None
    pos = np.flatnonzero(v > e)
    neg = np.flatnonzero(-v > e)
    if pos.size:
        i = pos[np.argmax(v[pos])]
        plus = PhaseSpacePoint(float(pts[i][0]), float(pts[i][1]))
    if neg.size:
        i = neg[np.argmin(v[neg])]
        minus = PhaseSpacePoint(float(pts[i][0]), float(pts[i][1]))
    return SignScan(plus, minus, float(v.min()), float(v.max()))
