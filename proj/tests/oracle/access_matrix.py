#!/usr/bin/env python3
"""Brute-force user x folder x {read,write} matrix for the world fixtures.

Independent of the C++ code: its own label reader and its own pair of
dominance checks per policy. Output is frozen into tests/data.
"""
import re
import sys
from pathlib import Path

LOW, NUM, HIGH = 0, 1, 2
ELEMENT = re.compile(r"^(\d+|low|high|equal)(?::([\d+]+))?$")


def element(text):
    m = ELEMENT.match(text)
    g, comps = m.group(1), m.group(2)
    s = frozenset(int(c) for c in comps.split("+")) if comps else frozenset()
    if g == "equal":
        return ("equal", None, s)
    if g == "low":
        return ("sent", (LOW, 0), s)
    if g == "high":
        return ("sent", (HIGH, 0), s)
    return ("num", (NUM, int(g)), s)


def effective(label):
    out = {}
    for part in label.split(","):
        name, qual = part.split("/", 1)
        out[name] = element(qual.split("(", 1)[0])
    return out


def dom(a, b):
    if a[0] == "equal" or b[0] == "equal":
        return True
    if a[1] < b[1]:
        return False
    if a[1][0] != b[1][0] and {a[1][0], b[1][0]} == {LOW, HIGH}:
        return True
    return b[2] <= a[2]


def allowed(policy, s, o, op):
    if policy == "biba":
        return dom(o, s) if op == "read" else dom(s, o)
    return dom(s, o) if op == "read" else dom(o, s)


def load(path):
    folders, users = [], []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].split()
        if not line:
            continue
        (folders if line[0] == "folder" else users).append((line[1], line[3]))
    return folders, users


def main(fixture_dir):
    for name in ("biba-org", "mls-org", "compart-org"):
        folders, users = load(Path(fixture_dir) / f"{name}.world")
        for user, ulabel in users:
            s = effective(ulabel)
            for folder, flabel in folders:
                o = effective(flabel)
                for op in ("read", "write"):
                    ok = all(allowed(p, s[p], o[p], op) for p in s)
                    print(f"{name}\t{user}\t{folder}\t{op}\t{'allow' if ok else 'deny'}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "fixtures")
