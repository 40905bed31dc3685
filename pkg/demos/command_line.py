"""
The command line front end
===========================

Problems are JSON files; results are exact rationals written as "p/q".
This script drives the same entry point the `intehrhart` executable uses.
"""

import json
import tempfile

from intehrhart.cli import run

problem = {"schema": 1, "simplex": [[1, 1], [1, 2], [2, 2]],
           "columns": [{"variant": "barvinok", "k": k} for k in (0, 1, 2)]}

with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
    json.dump(problem, fh)
    path = fh.name

code, text, _ = run(["ehrhart", "--input", path, "--eval", "1/2,1,3/2", "--oracle-check"])
print("exit", code)
print(json.loads(text)["text"])

# one column per patched sum, decimals for plotting
code, text, _ = run(["plotdata", "--input", path, "--grid", "0,1,1/4"])
print(text)
