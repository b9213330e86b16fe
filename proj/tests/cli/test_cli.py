"""End-to-end checks of the khdetect command line: exit codes, key output, JSON schemas."""

import json
import os
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

BIN, SCHEMAS, DATA = sys.argv[1], Path(sys.argv[2]), Path(sys.argv[3])
CORPUS = SCHEMAS.parent.parent / "data" / "corpus.jsonl"

failures = []


def schema(name):
    with open(SCHEMAS / f"{name}.schema.json") as f:
        return json.load(f)


def run(*args, env=None):
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    p = subprocess.run([BIN, *args], capture_output=True, text=True, env=full_env, timeout=600)
    return p.returncode, p.stdout, p.stderr


def check(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


def expect(args, code, contains=(), schema_name=None, env=None):
    rc, out, err = run(*args, env=env)
    label = " ".join(args)
    check(rc == code, f"{label}: exit {rc}, want {code}" + (f" ({err.strip()})" if rc != code else ""))
    for s in contains:
        check(s in out + err, f"{label}: output contains {s!r}")
    doc = None
    if schema_name:
        try:
            doc = json.loads(out)
            jsonschema.validate(doc, schema(schema_name))
            check(True, f"{label}: validates against {schema_name}")
        except (json.JSONDecodeError, jsonschema.ValidationError) as e:
            check(False, f"{label}: schema {schema_name}: {str(e).splitlines()[0]}")
    return out, doc


# kh
_, doc = expect(["kh", "L7n1", "--field", "f2", "--json"], 0, schema_name="kh")
check(doc and doc["total"] == 12, "kh L7n1 total 12")
check(doc and doc["l_graded"] == {"4": 1, "6": 3, "7": 1, "8": 3, "9": 2, "10": 1, "11": 1}, "kh L7n1 l-graded table")
pd_hopf = "PD[X[1,3,2,4],X[3,1,4,2]]"
_, full = expect(["kh", pd_hopf, "--json"], 0, schema_name="kh")
_, red = expect(["kh", pd_hopf, "--reduced", "--basepoint", "1", "--json"], 0, schema_name="kh")
check(full and red and full["total"] == 2 * red["total"], "reduced Hopf is half the unreduced total")
_, doc = expect(["kh", "U2", "--field", "q", "--json"], 0, schema_name="kh")
check(doc and doc["total"] == 4, "kh U2 over Q total 4")
expect(["kh", "trefoil", "--reduced"], 4, ["BasepointRequired"])
expect(["kh", "PD[X[1,3,2,4],X[3,1"], 4, ["MalformedSyntax", "position"])
expect(["kh", "PD[X[1,3,2,4]]"], 4, ["EdgeUsedNotTwice"])

# alex
expect(["alex", "L2", "--torres", "1-x+x^2,1"], 0, ["PASS"])
_, doc = expect(["alex", "L2", "--torres", "1-x+x^2,1", "--json"], 0, schema_name="alex")
check(doc and doc["torres"]["verdict"] == "PASS", "alex L2 Torres PASS in JSON")
expect(["alex", "L7n1", "--torres", "1-x+x^2,2"], 0, ["PASS", "Delta(x,1): -1*x^3 - 1"])
expect(["alex", "L7n1", "--torres", "1-x+x^2,1"], 1, ["FAIL"])
_, doc = expect(["alex", "hopf", "--json"], 0, schema_name="alex")
check(doc and doc["alexander"] in ("1", "-1"), "alex hopf is a unit")
expect(["alex", pd_hopf], 4, ["UnknownInput"])

# hfl
_, doc = expect(["hfl", "L7n1", "--json"], 0, schema_name="hfl")
if doc:
    top = doc["components"][1]["top"]
    check(top["alex_doubled"] == 2 and top["dim_f2"] == 2 and top["q_certified"], "L1 axis top slice 2, certified")
    check(doc["total_f2"] == 10 and doc["chi_norm"] == 8 and not doc["q_certified_total"], "L1 total gap reported")
_, doc = expect(["hfl", "L2", "--json"], 0, schema_name="hfl")
if doc:
    check(doc["q_certified_total"] and doc["total_f2"] == 12, "L2 total certified at 12")
    check(doc["components"][1]["top"]["dim_f2"] == 6, "L2 meridian top slice 6")
expect(["hfl", "L7n1"], 0, ["gap, Q dimension not certified", "(Q-certified)"])
expect(["hfl", "L7n1"], 4, ["GridTooLarge"], env={"KHDETECT_MAX_GRID": "5"})

# detect
expect(["detect", "L7n1"], 0, ["MatchesL1"])
expect(["detect", "L2"], 0, ["MatchesL2"])
expect(["detect", "L6a3"], 1, ["RuledOut", "despite total rank 12"])
expect(["detect", "L4a1"], 1, ["RuledOut", "total rank 8"])
expect(["detect", "hopf"], 1, ["RuledOut"])
expect(["detect", "trefoil"], 3, ["NotTwoComponents"])
expect(["detect", "s1 s1 s1", "--axis"], 0, ["MatchesL1"])
# a diagram of L2 with no curated grid
expect(["detect", "PD[X-[1,4,2,5],X-[3,8,4,1],X-[5,2,6,3],X-[6,9,7,10],X-[10,7,9,8]]"], 2, ["Inconclusive"])

with tempfile.TemporaryDirectory() as tmp:
    for name in ["L7n1", "L2", "L6a3", "L4a1"]:
        out, doc = expect(["detect", name, "--json"], 0 if name in ("L7n1", "L2") else 1, schema_name="certificate")
        cert = Path(tmp) / f"{name}.json"
        cert.write_text(out)
        expect(["replay", str(cert)], 0, ["replay OK"])
        out2, _ = expect(["detect", name, "--json"], 0 if name in ("L7n1", "L2") else 1)
        check(out == out2, f"detect {name}: certificate is byte-identical across runs")
    doc = json.loads((Path(tmp) / "L7n1.json").read_text())
    doc["final"]["verdict"] = "MatchesL2"
    forged = Path(tmp) / "forged.json"
    forged.write_text(json.dumps(doc))
    expect(["replay", str(forged)], 1, ["replay FAILED", "final verdict"])
    bad = Path(tmp) / "bad.json"
    bad.write_text('{"input": 1}')
    expect(["replay", str(bad)], 4, ["SchemaViolation"])

# corpus
out1, _ = expect(["corpus", "verify", "--json"], 0, schema_name="verify")
out2, _ = expect(["corpus", "verify", "--json"], 0)
check(out1 == out2, "corpus verify is byte-stable")
expect(["corpus", "verify"], 0, ["corpus OK"])
expect(["corpus", "verify", "--file", str(DATA / "bad_total.jsonl")], 1, ["FAIL bogus_hopf kh_total"])
expect(["corpus", "verify", "--file", str(DATA / "no_diagram.jsonl")], 4, ["SchemaViolation", "line 2"])
expect(["corpus", "list"], 0, ["L7n1 L1", "L2 trefoil_meridian"])
expect(["kh", "bogus_hopf", "--corpus", str(DATA / "bad_total.jsonl")], 0, ["total 4"])

entry_schema = schema("corpus_entry")
for i, line in enumerate(CORPUS.read_text().splitlines(), 1):
    if not line.strip() or line.startswith("#"):
        continue
    try:
        jsonschema.validate(json.loads(line), entry_schema)
        check(True, f"corpus line {i} validates")
    except jsonschema.ValidationError as e:
        check(False, f"corpus line {i}: {e.message}")

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
