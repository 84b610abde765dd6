"""EE against the macro-cell rate for small-cell static power 1, 2 and 4 W."""
from _run import run

if __name__ == "__main__":
    for ps in (1.0, 2.0, 4.0):
        run("fig1_ee_vs_rate.cfg", f"fig1_ps{ps:g}", __doc__, params={"ps_small_w": ps})
