"""Runs the CLI and validates its JSON output against the shipped schemas."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

tool, schema_dir = sys.argv[1], Path(sys.argv[2])


def schema(name):
    return json.loads((schema_dir / name).read_text())


def run(*args, expect=0):
    proc = subprocess.run([tool, *args], capture_output=True, text=True)
    if proc.returncode != expect:
        sys.exit(f"{' '.join(args)}: exit {proc.returncode}, expected {expect}\n{proc.stderr}")
    return proc.stdout


def check(doc, name):
    jsonschema.validate(doc, schema(name), cls=jsonschema.Draft202012Validator)


check(json.loads(run("beltrami", "check", "--A", "1", "--B", "0.5", "--C", "0")), "beltrami_check.schema.json")
check(json.loads(run("beltrami", "check", "--A", "1", "--B", "1", "--C", "0.5", expect=1)),
      "beltrami_check.schema.json")
check(json.loads(run("flow", "orbit", "--A", "1", "--B", "0.5", "--C", "0", "--section", "y=0", "--guess", "1.5,3.0")),
      "flow_orbit.schema.json")
with tempfile.TemporaryDirectory() as tmp:
    out = Path(tmp) / "surface.csv"
    check(json.loads(run("contact", "annulus", "--monodromy", "sin:-4,0.5", "--eps", "1", "--grid", "64x129",
                         "--out", str(out))), "contact_annulus.schema.json")
    assert out.read_text().startswith("theta,z,r\n")
lines = run("template", "knots", "--m", "0", "--n", "-1", "--max-len", "6").splitlines()
assert lines
for line in lines:
    check(json.loads(line), "knot_report.schema.json")
check(json.loads(run("tight", "reeb", "--point", "0.5,0.5,0.5,0.5")), "tight_reeb.schema.json")
print(f"validated {len(lines) + 5} documents")
