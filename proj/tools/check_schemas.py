"""Validates sample specs and live CLI reports against docs/schemas."""

import json
import pathlib
import subprocess
import sys

import jsonschema

root = pathlib.Path(__file__).resolve().parent.parent / "docs" / "schemas"
cli = sys.argv[1]


def load(name):
    schema = json.loads((root / name).read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    return jsonschema.Draft202012Validator(schema)


fn, norm, reports = load("function_spec.schema.json"), load("norm_spec.schema.json"), load("reports.schema.json")

good_fns = [
    {"kind": "step", "pieces": [[3, 1], [1, 2]]},
    {"kind": "analytic-named", "name": "g", "p": 2, "Q": 3},
    {"kind": "dilated", "r": 2, "inner": {"kind": "step", "pieces": [[1, 1]]}},
    {"kind": "scaled", "scalar": 3, "inner": {"kind": "analytic-named", "name": "indicator", "t": 1}},
]
bad_fns = [
    {"kind": "analytic-named", "name": "nope"},
    {"kind": "step", "pieces": [[1, -1]]},
    {"kind": "analytic-named", "name": "g", "p": 2},
    {"kind": "step", "pieces": [], "extra": 1},
]
good_norms = [
    {"kind": "lorentz-doublestar", "p": 2, "q": 2},
    {"kind": "lorentz-star", "p": 2, "q": "inf"},
    {"kind": "orlicz-lorentz", "p": 2, "phi": "oscillating"},
    {"kind": "orlicz-lorentz", "p": 3, "phi": {"kind": "piecewise-power", "pieces": [[0, 2], [1, 3]]}},
    {"kind": "lambda", "q": 1, "weight": {"kind": "power", "beta": 0}},
    {"kind": "y-space", "p": 2},
    {"kind": "delta", "family": "g", "p": 2, "Q": 3, "N": 5},
]

failures = []
for x in good_fns:
    failures += [f"fn rejected: {x}: {e.message}" for e in fn.iter_errors(x)]
for x in bad_fns:
    if fn.is_valid(x):
        failures.append(f"fn accepted: {x}")
for x in good_norms:
    failures += [f"norm rejected: {x}: {e.message}" for e in norm.iter_errors(x)]

step = json.dumps(good_fns[0])
commands = [
    ["norm", "--norm", json.dumps(good_norms[0]), "--fn", step],
    ["homogeneity", "--norm", json.dumps(good_norms[0]), "--corpus", "3", "--points", "3"],
    ["scenario", "oscillating", "--q-list", "3,5"],
    ["delta", "--N", "3"],
]
for args in commands:
    out = subprocess.run([cli, *args], capture_output=True, text=True, check=True).stdout
    failures += [f"{args[0]} report: {e.message}" for e in reports.iter_errors(json.loads(out))]

for f in failures:
    print(f)
print("schemas:", "FAIL" if failures else "PASS")
sys.exit(1 if failures else 0)
