"""Underlay optimizer against the brute-force oracle on tiny instances."""
from _run import run

if __name__ == "__main__":
    run("tiny.cfg", "oracle", __doc__)
