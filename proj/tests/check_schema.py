"""Runs the CLI over a set of commands and validates each report against the schema."""
import json
import subprocess
import sys

import jsonschema

cli, schema_path = sys.argv[1], sys.argv[2]
with open(schema_path) as f:
    schema = json.load(f)
validator = jsonschema.Draft202012Validator(schema)

commands = [
    ["series", "--preset", "family_a:2", "--terms", "12"],
    ["cf", "--preset", "family_a:2", "--max-degree", "10"],
    ["phi", "--preset", "family_c:+", "--up-to", "20"],
    ["gaps", "--preset", "family_b:1", "--scan", "20"],
    ["exponent", "--preset", "family_c:+"],
    ["exponent", "--preset", "family_a:1"],
    ["exponent", "--preset", "family_b:2"],
    ["exponent", "--preset", "family_a:2", "--preset", "family_c:-", "--jobs", "2"],
    ["hankel", "--preset", "family_c:+", "--n-max", "15"],
    ["cyclo", "decompose", "12", "4"],
    ["cyclo", "phi", "30"],
    ["verify", "--preset", "family_a:2", "--depth", "2,4", "--bits", "1024"],
    ["exponent", "--system", '{"A": ["1/2", 1, 1], "B": [1], "d": 3}', "--no-meta"],
]
bad = 0
for c in commands:
    p = subprocess.run([cli] + c, capture_output=True, text=True)
    if p.returncode not in (0, 2):
        print("exit", p.returncode, c, p.stderr)
        bad += 1
        continue
    errors = list(validator.iter_errors(json.loads(p.stdout)))
    for e in errors[:3]:
        print(" ".join(c), ":", e.json_path, e.message)
    bad += bool(errors)
# The schema must reject float exponents and bare-number coefficients.
good = json.loads(subprocess.run([cli, "exponent", "--preset", "family_c:+"], capture_output=True, text=True).stdout)
for mutate in (lambda j: j.update(mu=2.4), lambda j: j["system"].update(A=[1, 2, 1])):
    broken = json.loads(json.dumps(good))
    mutate(broken)
    if validator.is_valid(broken):
        print("schema accepted a malformed report")
        bad += 1
print(f"{len(commands) - bad}/{len(commands)} reports valid")
sys.exit(1 if bad else 0)
