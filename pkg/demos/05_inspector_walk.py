"""A scripted walk through the inspector service, ending in a narrative.

This is the full loop the web UI drives over HTTP: open a session on a
root, evaluate a snippet in the pane's playground (bound to `self`), click
a row of a view to open the next pane, and export the whole walk as a
self-contained narrative document. Runs in-process via the test client; no
server needs to be up.

Run: python demos/05_inspector_walk.py
"""

import json

from fastapi.testclient import TestClient

from moldkit.service import create_app, validate_narrative

app = create_app()
with TestClient(app) as client:
    doc = client.post("/sessions", json={"root": "demo.ludo"}).json()
    sid = doc["session_id"]
    print(f"Session {sid}: "
          f"{[p['subject']['type_name'] for p in doc['panes']]}")

    print('\nEvaluating "self.auto_play(3)" in pane 0:')
    doc = client.post(f"/sessions/{sid}/panes/0/eval",
                      json={"source": "self.auto_play(3)"}).json()
    print(f"  outcome: {doc['outcome']['status']}, "
          f"chain: {[p['origin_step'] for p in doc['panes']]}")

    game_handle = doc["panes"][-1]["subject"]["handle_id"]
    moves = client.get(f"/objects/{game_handle}/views/moves").json()
    print(f"\nMoves view: {moves['total_count']} rows")
    for row in moves["rows"]:
        print("  " + " | ".join(row["cells"]))

    print("\nSelecting the first move row:")
    doc = client.post(
        f"/sessions/{sid}/panes/1/select",
        json={"view_id": "moves",
              "row_key": moves["rows"][0]["child"]["handle_id"]}).json()
    print(f"  chain types: "
          f"{[p['subject']['type_name'] for p in doc['panes']]}")

    narrative = client.get(f"/sessions/{sid}/narrative").json()
    validate_narrative(narrative)
    print(f"\nNarrative: {len(narrative['entries'])} entries, "
          f"schema-valid, replayable:")
    for entry in narrative["entries"]:
        print(f"  {entry['origin_step']:<24} {entry['type_name']:<10} "
              f"viewing {entry['selected_view']}")
    print("\nFirst entry snapshot:")
    print(json.dumps(narrative["entries"][0]["snapshot"], indent=2)[:400])
