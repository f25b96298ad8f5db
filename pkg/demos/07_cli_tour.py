"""The starlap command line, driven from Python.

The same calls work from a shell, e.g. ``starlap spectrum --n-plus 2 --n-minus 1``.
Run: python3 demos/07_cli_tour.py
"""
# %%
import json
import tempfile
from pathlib import Path

from starlap.cli import main

# %% Spectrum as CSV.
main(["spectrum", "--n-plus", "2", "--n-minus", "1", "--k-max", "2", "--format", "csv"])

# %% Recover the edge ratio from eta_1.
main(["recover", "--eta1", "4.7126832212116743684"])

# %% Plot data: the curves -cot(mu) and (n+/n-) coth(mu), their poles and crossings.
out = Path(tempfile.mkdtemp()) / "plot.json"
main(["plotdata", "--n-plus", "1", "--n-minus", "1", "--samples", "300", "-o", str(out)])
rows = json.loads(out.read_text())["rows"]
print("crossings:", [round(r["mu"], 5) for r in rows if r["kind"] == "intersection"])

# %% Verification suites; a status line per suite goes to stderr, the report to stdout.
code = main(["verify", "--suite", "green", "--suite", "krein", "--suite", "oracle"])
print("exit code:", code)
