# Auto-generated companion script: plots the CSV artifacts written alongside.
# Requires matplotlib; this file is emitted as text and never executed here.
import csv
from pathlib import Path

import matplotlib.pyplot as plt

HERE = Path(__file__).parent
FILES = ['evolve_alpha0_r0_nbar0.1.csv', 'evolve_alpha0_r0_nbar1.csv', 'evolve_alpha1_r0.5_nbar0.1.csv', 'evolve_alpha1_r0.5_nbar1.csv']
KIND = 'evolve'

for name in FILES:
    rows = [r for r in csv.reader((HERE / name).open())
            if r and not r[0].startswith("#")]
    head, data = rows[0], rows[1:]
    cols = {k: [float(r[i]) for r in data] for i, k in enumerate(head)}
    if KIND == "evolve":
        plt.plot(cols["t"], cols["coherence_bits"], label=name)
    else:
        plt.tricontourf(cols["alpha"], cols["r"], cols["coherence_bits"])
        plt.colorbar(); plt.xlabel("alpha"); plt.ylabel("r")
        plt.title(name); plt.show()
if KIND == "evolve":
    plt.xlabel("t"); plt.ylabel("coherence (bits)"); plt.legend(); plt.show()
