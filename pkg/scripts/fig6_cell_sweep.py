"""Underlay and overlay EE against the number of small cells."""
from _run import run

if __name__ == "__main__":
    run("cell_sweep.cfg", "fig6", __doc__)
