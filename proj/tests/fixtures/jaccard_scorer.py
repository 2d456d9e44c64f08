#!/usr/bin/env python3
# Similarity scorer speaking the length-prefixed line protocol:
#   request  "<len>:<a><len>:<b>\n"   (byte lengths)
#   reply    "<score>\n"
# Scores word-set Jaccard similarity.
import re
import sys


def read_field(stream):
    digits = b""
    while True:
        c = stream.read(1)
        if not c:
            return None
        if c == b":":
            break
        digits += c
    return stream.read(int(digits)).decode("utf-8")


def words(text):
    return set(re.findall(r"[a-z0-9']+", text.lower()))


def main():
    stdin = sys.stdin.buffer
    while True:
        a = read_field(stdin)
        if a is None:
            return
        b = read_field(stdin)
        stdin.read(1)  # newline
        wa, wb = words(a), words(b)
        union = wa | wb
        score = len(wa & wb) / len(union) if union else 1.0
        sys.stdout.write(f"{score!r}\n")
        sys.stdout.flush()


if __name__ == "__main__":
    main()
