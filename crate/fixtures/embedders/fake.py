"""Stand-in embedder for protocol tests.

Vectors are derived from sha256 of the text, so they are a pure function of
the input. Requests that arrive together are answered in reverse order.
Texts containing REJECT get an error reply; texts longer than 200 characters
are reported as truncated. With --wrong-dims every vector is one short.
"""
import hashlib
import json
import select
import sys

DIMS = 8
wrong = "--wrong-dims" in sys.argv


def vector(text):
    digest = hashlib.sha256(text.encode()).digest()
    values = [(b - 127.5) / 64.0 for b in digest[:DIMS]]
    return values[:-1] if wrong else values


def reply(msg):
    if msg["type"] == "embed":
        if "REJECT" in msg["text"]:
            return {"type": "error", "id": msg["id"], "message": "rejected by request"}
        out = {"type": "vector", "id": msg["id"], "values": vector(msg["text"])}
        if len(msg["text"]) > 200:
            out["truncated"] = True
        return out
    return {"type": "error", "message": "unexpected " + msg["type"]}


def main():
    print(json.dumps({"type": "hello", "embedder_id": "fake-sha-d8", "dims": DIMS}), flush=True)
    pending = []
    while True:
        line = sys.stdin.readline()
        if not line:
            break
        if line.strip():
            msg = json.loads(line)
            if msg["type"] == "bye":
                break
            pending.append(msg)
        ready, _, _ = select.select([sys.stdin], [], [], 0.02)
        if ready and len(pending) < 16:
            continue
        for msg in reversed(pending):
            print(json.dumps(reply(msg)))
        sys.stdout.flush()
        pending = []
    for msg in reversed(pending):
        print(json.dumps(reply(msg)))
    sys.stdout.flush()


main()
