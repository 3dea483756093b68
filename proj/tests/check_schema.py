"""Validates every bundled model file against the published schema."""
import json
import sys
from pathlib import Path

import jsonschema

schema = json.loads(Path(sys.argv[1]).read_text())
jsonschema.Draft202012Validator.check_schema(schema)
for path in sorted(Path(sys.argv[2]).glob("*.anp.json")):
    jsonschema.validate(json.loads(path.read_text()), schema)
    print("ok", path.name)
