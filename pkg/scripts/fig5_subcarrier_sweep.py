"""Underlay and overlay EE against the number of subcarriers."""
from _run import run

if __name__ == "__main__":
    run("subcarrier_sweep.cfg", "fig5", __doc__)
