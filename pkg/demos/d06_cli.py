"""
Driving the command-line tool
=============================

The same pipeline is available as ``maxsurf``.  Here it is called in-process
and the outputs are written to a temporary directory.
"""

from __future__ import annotations

import io
import tempfile
from pathlib import Path

import numpy as np

from maxsurf.cli import main
from maxsurf.families import snsn_matrix


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    mfile = tmp / "snsn.txt"
    np.savetxt(mfile, np.array(snsn_matrix(0.64, 0.64)), fmt="%.17g")
    print(run("matrix", "check", str(mfile))[1])

    code, _, err = run("sample", "--surface", "snsn", "--n", "32", "--out", str(tmp / "s.csv"), "--mesh", str(tmp / "s.obj"))
    print(err.strip())
    print((tmp / "s.csv").read_text().splitlines()[:3])

    print(run("singular", "--surface", "sinsin1", "--window", "0", "3.2", "0", "3.2")[1])
    print(run("verify", "tanh-scherk")[1])
