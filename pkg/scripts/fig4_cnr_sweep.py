"""Underlay and overlay EE against mean own-link CNR."""
from _run import run

if __name__ == "__main__":
    run("cnr_sweep.cfg", "fig4", __doc__)
