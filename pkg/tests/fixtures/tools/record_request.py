import json
import sys

req = json.load(sys.stdin)
with open(sys.argv[1], "w") as fh:
    json.dump(req, fh)
print(sys.argv[2])
