import json
import pathlib
import sys

import jsonschema

schema = json.loads(pathlib.Path(sys.argv[1]).read_text())
bad = 0
for p in sorted(pathlib.Path(sys.argv[2]).glob("*.json")):
    errs = list(jsonschema.Draft202012Validator(schema).iter_errors(json.loads(p.read_text())))
    expect_invalid = p.name.startswith("bad_")
    if bool(errs) != expect_invalid:
        bad += 1
        print(f"{p.name}: {'unexpectedly invalid' if errs else 'expected a violation'}")
        for e in errs:
            print("   ", e.message)
    else:
        print(f"{p.name}: {'rejected' if errs else 'valid'}")
sys.exit(1 if bad else 0)
