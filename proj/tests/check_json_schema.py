"""Run each CLI subcommand with --format json and validate against the schema."""
import json
import subprocess
import sys

import jsonschema

RUNS = [
    ["build", "--strings", "0(0),01(1),1(1)"],
    ["laws", "marginal", "--tree", "00,01,1"],
    ["laws", "kernel", "--tree", "0,1", "--target", "00,01,1"],
    ["harmonic", "--measure", "nu1", "--tree", "0,1"],
    ["harmonic", "--measure", '{"type":"bernoulli","p1":"1/3"}', "--tree", "0,1", "--split-depth", "4"],
    ["simulate", "--n", "5", "--replicas", "2"],
    ["bridge", "--tree", "00,01,1", "--replicas", "2"],
    ["killed", "--measure", "abcd", "--replicas", "3"],
    ["convergence", "--n", "20", "--replicas", "4"],
    ["recover", "--n", "200", "--replicas", "2", "--depth", "2"],
    ["enumerate", "--n", "3", "--depth-cap", "2"],
    ["verify", "--n", "2", "--depth-cap", "2", "--verbose"],
    ["counterexample", "--replicas", "100"],
]


def main():
    tool, schema_path = sys.argv[1], sys.argv[2]
    with open(schema_path) as f:
        schema = json.load(f)
    validator = jsonschema.Draft202012Validator(schema)
    failures = 0
    for args in RUNS:
        proc = subprocess.run([tool, *args, "--format", "json"], capture_output=True, text=True)
        if proc.returncode != 0:
            print(f"FAIL {' '.join(args)}: exit {proc.returncode}: {proc.stderr.strip()}")
            failures += 1
            continue
        errors = list(validator.iter_errors(json.loads(proc.stdout)))
        if errors:
            print(f"FAIL {' '.join(args)}: {errors[0].message}")
            failures += 1
        else:
            print(f"ok   {' '.join(args)}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
