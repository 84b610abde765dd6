"""Macro-cell RE at each alpha-bisection step (overlay)."""
from _run import run

if __name__ == "__main__":
    run("fig3_alpha.cfg", "fig3", __doc__)
