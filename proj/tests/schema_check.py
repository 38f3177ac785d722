"""Normalized configs of every scenario validate against docs/config.schema.json."""
import json
import subprocess
import sys

import jsonschema

binary, schema_path = sys.argv[1], sys.argv[2]
schema = json.load(open(schema_path))
for name in ["degree-p", "defect-example", "improve", "tower", "pbasis", "valuation-basis"]:
    out = subprocess.run([binary, "--scenario", name], check=True, capture_output=True, text=True).stdout
    jsonschema.validate(json.loads(out)["config"], schema)
    print("ok", name)
for bad in [{"scenario": "degree-p", "bogus": 1}, {"scenario": "pbasis", "c": "1"}, {"scenario": "tower", "p": 4}]:
    try:
        jsonschema.validate(bad, schema)
    except jsonschema.ValidationError:
        continue
    sys.exit(f"schema accepts {bad}")
