"""Validates degdiff outputs (or, with --config, input configs) against the shipped schemas."""
import json
import sys
from pathlib import Path

import jsonschema


def main() -> int:
    args = sys.argv[1:]
    configs = args[0] == "--config"
    if configs:
        args = args[1:]
    schema_dir = Path(args[0])
    failures = 0
    for path in map(Path, args[1:]):
        doc = json.loads(path.read_text())
        if configs:
            schema_path = schema_dir / "config" / f"{doc['kind']}.schema.json"
        elif path.name == "error.json":
            schema_path = schema_dir / "error.schema.json"
        else:
            schema_path = schema_dir / "results" / f"{doc['kind']}.schema.json"
        schema = json.loads(schema_path.read_text())
        try:
            jsonschema.validate(doc, schema, cls=jsonschema.Draft202012Validator)
            print(f"valid: {path} against {schema_path.name}")
        except jsonschema.ValidationError as e:
            failures += 1
            print(f"INVALID: {path}: {e.message} at {list(e.absolute_path)}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
