#!/usr/bin/env python3
"""Convert the raw downloads used by the acceptance suite into the CSV
layouts it reads from the data directory.

  prepare_data.py igra  igra2-station-list.txt  data/igra2-station-list.csv
  prepare_data.py amygdala chung.2010.NI.mat    data/amygdala

The ozone file (toms881001.csv) is already CSV and is copied as is.
The amygdala conversion needs scipy.
"""

import csv
import pathlib
import sys


def igra(src, dst):
    # fixed-width station list: ID, LAT, LON, ELEV, STATE, NAME, FSTYEAR, LSTYEAR, NOBS
    cols = [(0, 11), (12, 20), (21, 30), (31, 37), (38, 40), (41, 71), (72, 76), (77, 81), (82, 88)]
    with open(src, encoding="latin-1") as fin, open(dst, "w", newline="") as fout:
        w = csv.writer(fout)
        for line in fin:
            if line.strip():
                w.writerow([line[a:b].strip() for a, b in cols])


def amygdala(src, outdir, people=(10, 13)):
    from scipy.io import loadmat

    surf = loadmat(src)["left_surf"]  # persons x points x 3
    out = pathlib.Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    for p in people:
        with open(out / f"left_p{p}.csv", "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["x", "y", "z"])
            for x, y, z in surf[p - 1]:
                w.writerow([repr(float(x)), repr(float(y)), repr(float(z))])


if __name__ == "__main__":
    if len(sys.argv) != 4 or sys.argv[1] not in ("igra", "amygdala"):
        sys.exit(__doc__)
    {"igra": igra, "amygdala": amygdala}[sys.argv[1]](sys.argv[2], sys.argv[3])
