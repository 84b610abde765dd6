from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import InvalidArgumentError


@dataclass
class LineSearchResult:
    x: float
    value: float
    iterations: int
    evaluations: int
    path: list = field(default_factory=list)


def quasiconcave_line_search(f, lo: float, hi: float, step: float = 1.5, tol: float = 1e-4, x0=None,
                             max_iter: int = 60, fd_rel: float = 1e-3) -> LineSearchResult:
    """Multiplicative ascent for a unimodal scalar function on ``[lo, hi]``.

    Moves ``x -> step*x`` while a forward difference says ``f`` increases and
    ``x -> x/step`` otherwise; every sign flip halves the excess ``step - 1``.
    Stops once successive values differ by at most ``tol`` relative to the
    larger one.  Returns the best point evaluated.
    """
    if lo > hi:
        raise InvalidArgumentError(f"empty interval [{lo}, {hi}]")
    if not step > 1:
        raise InvalidArgumentError("step must exceed 1")
    cache = {}

    def ev(x):
        if x not in cache:
            cache[x] = f(x)
        return cache[x]

    def clamp(x):
        return min(max(x, lo), hi)

    x = clamp(lo if x0 is None else x0)
    if x <= 0:
        # the multiplicative moves need a positive start
        if hi <= 0:
            return LineSearchResult(lo, ev(lo), 0, len(cache), [lo])
        x = clamp(1e-2 * hi)
    fx = ev(x)
    best_x, best_f = x, fx
    path = [x]
    prev_up = None
    it = 0
    for it in range(1, max_iter + 1):
        h = fd_rel * x
        if x + h <= hi:
            up = ev(x + h) >= fx
        else:
            up = ev(x - h) <= fx
        if prev_up is not None and up != prev_up:
            step = 1.0 + (step - 1.0) / 2.0
        prev_up = up
        x_new = clamp(x * step if up else x / step)
        f_new = ev(x_new)
        path.append(x_new)
        if f_new > best_f:
            best_x, best_f = x_new, f_new
        done = abs(f_new - fx) <= tol * max(abs(f_new), abs(fx), 1e-300)
        x, fx = x_new, f_new
        if done:
            break
    return LineSearchResult(best_x, best_f, it, len(cache), path)
