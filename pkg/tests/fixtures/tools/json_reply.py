import json
import sys

sys.stdin.read()
print(json.dumps({"regex": sys.argv[1]}))
