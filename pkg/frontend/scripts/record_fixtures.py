"""Record HTTP and CLI fixtures for the explorer tests.

Replays the scripted 6-click session on the (4,6) preset against the real
service and the real CLI, and freezes every exchange as JSON.  The vitest
suite drives the TypeScript client against these recordings, so the parity
test compares genuine server output with genuine CLI output.

Run from the repository root:

    python3 frontend/scripts/record_fixtures.py
"""

import json
import subprocess
import sys
from pathlib import Path

from fastapi.testclient import TestClient

from specmut.service import app

SEQUENCE = [1, 2, 1, 2, 1, 2]
OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def record_http():
    client = TestClient(app)
    exchanges = []

    def call(method, path, body=None):
        res = client.post(path, json=body) if method == "POST" \
            else client.get(path)
        exchanges.append({
            "method": method,
            "path": path,
            "body": body,
            "status": res.status_code,
            "response": res.json(),
        })
        return res.json()

    created = call("POST", "/api/session",
                   {"family": [4, 6], "prime": 101, "trunc": 6, "seed": 0})
    sid = created["id"]
    base = f"/api/session/{sid}"
    call("GET", base)
    call("GET", f"{base}/potential")
    for k in SEQUENCE:
        call("POST", f"{base}/mutate", {"k": k})
    # error paths the client must surface
    call("POST", f"{base}/mutate", {"k": 0})
    call("POST", f"{base}/mutate", {"k": SEQUENCE[-1]})
    for _ in SEQUENCE:
        call("POST", f"{base}/undo")
    call("POST", f"{base}/undo")       # empty history -> 409
    call("GET", base)

    # session ids are random; rewrite to a stable placeholder
    text = json.dumps(exchanges, indent=1)
    text = text.replace(sid, "SESSION")
    (OUT / "http_session.json").write_text(text + "\n")
    return sid


def record_cli():
    res = subprocess.run(
        [sys.executable, "-m", "specmut.cli", "mutate", "--family", "4,6",
         "--seed", "0", "--trunc", "6",
         "--sequence", ",".join(str(k) for k in SEQUENCE)],
        capture_output=True, text=True, check=True)
    (OUT / "cli_trace.json").write_text(res.stdout)


if __name__ == "__main__":
    OUT.mkdir(parents=True, exist_ok=True)
    record_http()
    record_cli()
    print("fixtures written to", OUT)
