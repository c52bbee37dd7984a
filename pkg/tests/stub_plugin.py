"""Scripted plugin for protocol tests.  Usage: stub_plugin.py [mode]."""
import json
import sys
import time

MODE = sys.argv[1] if len(sys.argv) > 1 else "ok"

STATEMENTS = {("How many seats did Party B win?", "89"): "Party B won 89 seats."}
PARAPHRASES = {
    "Party B won 89 out of 298 seats.": ["Out of a total of 298 available seats, Party B won 89."],
}


def reply(obj):
    sys.stdout.write(json.dumps(obj) + "\n")
    sys.stdout.flush()


def main():
    if MODE == "no-handshake":
        reply({"protocol": "something-else/9"})
        return
    reply({"protocol": "recast-plugin/1"})
    for n, line in enumerate(sys.stdin):
        req = json.loads(line)
        if MODE == "crash":
            sys.exit(1)
        if MODE == "bad-id":
            reply({"id": req["id"] + 100, "statement": "x"})
            continue
        if MODE == "garbage":
            sys.stdout.write("not json\n")
            sys.stdout.flush()
            continue
        if MODE == "slow-first" and n == 0:
            time.sleep(1.0)
        if req["kind"] == "qa2d":
            reply({"id": req["id"], "statement": STATEMENTS.get((req["question"], req["answer"]))})
        else:
            reply({"id": req["id"], "paraphrases": PARAPHRASES.get(req["text"], [])})


if __name__ == "__main__":
    main()
