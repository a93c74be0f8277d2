"""Regenerate src/siftbound/data/envelope.csv (about five minutes)."""
import sys
import time

from siftbound.envelope import DATA_FILE, build_envelope, save_envelope

t0 = time.time()
step = float(sys.argv[1]) if len(sys.argv) > 1 else 0.001
table, last, err = build_envelope(step=step, progress=lambda b: None)
save_envelope(table)
print(f"{len(table)} pieces, M_g(e^21)/441 = {last / 441:.12f}, err {err:.3g}, "
      f"{time.time() - t0:.0f} s -> {DATA_FILE}")
