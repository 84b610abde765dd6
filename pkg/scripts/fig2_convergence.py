"""Best EE after each rotation iteration of the underlay optimizer."""
from _run import run

if __name__ == "__main__":
    run("fig2_convergence.cfg", "fig2", __doc__)
