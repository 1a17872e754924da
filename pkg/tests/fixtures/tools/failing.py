import sys

sys.stdin.read()
print("no luck", file=sys.stderr)
sys.exit(3)
