"""Double-exponential quadrature rules shared by the numerical modules.

Two transforms are provided:

* ``tanhsinh`` for a finite interval with integrable endpoint
  singularities.  Nodes cluster double-exponentially at both ends, so
  kernels like ``s**-p`` (p < 1) are integrated at full accuracy without
  any analytic split.
* ``expsinh`` for a semi-infinite interval with a decaying integrand
  (optionally singular at the finite endpoint).

Both accept vectorized integrands (``f(ndarray) -> ndarray``) and refine
the mesh level-by-level until two successive estimates agree to the
requested tolerance.  Integrands singular at an endpoint other than 0
should be written with ``offsets=True``, in which case they are called as
``f(x, d_left, d_right)`` with exact distances to the interval ends
(plain ``b - x`` suffers catastrophic rounding at double-exponential
nodes).  The rules are pure functions and safe to call from any number of
threads.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import NonConvergence

_UMAX = 6.3  # beyond this the node offset 1/(1+exp(pi*sinh(u))) underflows


def _ts_nodes(level: int, first: bool) -> tuple[np.ndarray, np.ndarray]:
    """Offsets (as interval fractions) and weights for mesh 2**-level.

    When ``first`` is False only the odd-index nodes of the level are
    returned, so successive levels accumulate.  Nodes whose offset
    underflows to 0 are dropped; their summands are below double
    precision for any integrable singularity.
    """
    h = 2.0 ** (-level)
    if first:
        u = np.arange(0.0, _UMAX + h, h)
    else:
        u = np.arange(h, _UMAX + h, 2.0 * h)
    w_arg = 0.5 * np.pi * np.sinh(u)
    with np.errstate(over="ignore"):
        # distance from endpoint: (1 - tanh(w))/2 = 1/(1 + exp(2w))
        s = 1.0 / (1.0 + np.exp(2.0 * w_arg))
    ex = np.exp(-2.0 * w_arg)
    weight = 0.5 * np.pi * np.cosh(u) * 4.0 * ex / (1.0 + ex) ** 2
    keep = s > 0.0
    return s[keep], weight[keep]


def _eval(f, x, dl, dr, offsets):
    vals = f(x, dl, dr) if offsets else f(x)
    return np.where(np.isfinite(vals), vals, 0.0)


def tanhsinh(
    f: Callable[..., np.ndarray],
    a: float,
    b: float,
    *,
    rtol: float = 1e-12,
    atol: float = 0.0,
    max_level: int = 12,
    strict: bool = True,
    offsets: bool = False,
) -> float:
    """Integrate ``f`` over (a, b) by tanh-sinh quadrature.

    Non-finite integrand values (overflow in an endpoint cluster) are
    treated as 0, which is correct for integrable singularities whose
    weighted summand underflows there.
    """
    if not b > a:
        raise ValueError("tanhsinh requires b > a")
    length = b - a
    total = 0.0
    prev = np.inf
    for level in range(max_level + 1):
        s, w = _ts_nodes(level, first=(level == 0))
        d = length * s
        if level == 0:
            # u=0 (s=1/2) gives the midpoint once; mirror the rest
            dm, wm = d[1:], w[1:]
            x = np.concatenate(([a + d[0]], a + dm, b - dm))
            dl = np.concatenate(([d[0]], dm, length - dm))
            dr = np.concatenate(([d[0]], length - dm, dm))
            weights = np.concatenate(([w[0]], wm, wm))
        else:
            x = np.concatenate((a + d, b - d))
            dl = np.concatenate((d, length - d))
            dr = np.concatenate((length - d, d))
            weights = np.concatenate((w, w))
        contrib = float(np.sum(_eval(f, x, dl, dr, offsets) * weights))
        h = 2.0 ** (-level)
        piece = contrib * h * length / 2.0
        total = total / 2.0 + piece if level else piece
        if level >= 2:
            if abs(total - prev) <= max(atol, rtol * abs(total)):
                return float(total)
        prev = total
    if strict:
        raise NonConvergence(
            f"tanh-sinh did not reach rtol={rtol:g}/atol={atol:g} by level {max_level}"
        )
    return float(total)


def expsinh(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    *,
    scale: float = 1.0,
    rtol: float = 1e-12,
    atol: float = 0.0,
    max_level: int = 12,
    strict: bool = True,
) -> float:
    """Integrate ``f`` over (a, +inf) by exp-sinh quadrature.

    ``scale`` sets the node concentration point (roughly where the
    integrand mass sits); nodes are x = a + scale * exp((pi/2) sinh u).
    """
    if scale <= 0.0:
        raise ValueError("scale must be positive")
    total = 0.0
    prev = np.inf
    for level in range(max_level + 1):
        h = 2.0 ** (-level)
        if level == 0:
            u = np.arange(-_UMAX, _UMAX + h, h)
        else:
            u = np.arange(-_UMAX + h, _UMAX + h, 2.0 * h)
        t = 0.5 * np.pi * np.sinh(u)
        keep = np.abs(t) < 700.0  # avoid exp overflow; summands out there underflow
        t, u = t[keep], u[keep]
        x_off = scale * np.exp(t)
        w = 0.5 * np.pi * np.cosh(u) * x_off
        vals = f(a + x_off)
        contrib = float(np.sum(np.where(np.isfinite(vals), vals, 0.0) * w))
        piece = contrib * h
        total = total / 2.0 + piece if level else piece
        if level >= 2:
            if abs(total - prev) <= max(atol, rtol * abs(total)):
                return float(total)
        prev = total
    if strict:
        raise NonConvergence(
            f"exp-sinh did not reach rtol={rtol:g}/atol={atol:g} by level {max_level}"
        )
    return float(total)
