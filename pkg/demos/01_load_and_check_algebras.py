"""Load the shipped algebras, run the axiom battery, and watch the
checker catch a broken structure.

Run with: python3 demos/01_load_and_check_algebras.py
"""

from cyclichodge import BUILTIN_NAMES, check_axioms, load_builtin, parse_algebra

# Every builtin passes all 25 structural axioms.
for name in BUILTIN_NAMES:
    alg = load_builtin(name)
    report = check_axioms(alg)
    failed = [c.name for c in report.failures]
    print(f"{name:10s} dim {alg.dim}  parity {list(alg.parity)}  "
          f"blocks {len(alg.blocks)}  "
          f"{'all axioms pass' if report.ok else failed}")

# Break associativity on purpose: declare t*t = c in the 6-dimensional
# block algebra. Then (t t) b = c b = t but t (t b) = 0.
print()
import json
from importlib import resources

obj = json.loads(resources.files("cyclichodge.data")
                 .joinpath("block6.json").read_text())
obj["product"].append([2, 2, 5, "1"])
broken = parse_algebra(obj, name="broken6")
report = check_axioms(broken)
print("broken6 failures:", [c.name for c in report.failures])
for line in report.summary_lines():
    if line.startswith("FAIL"):
        print(" ", line)
