import sys

sys.stdin.read()
print()
print(sys.argv[1])
