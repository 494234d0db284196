import json

import pytest

from room_memory.cli import main
from room_memory.harness import CSV_FIELDS, read_csv


def test_episode_trace_and_dump(tmp_path, capsys):
    trace, dump = tmp_path / "trace.tsv", tmp_path / "stores.txt"
    main(["episode", "--policy", "h3", "--capacity", "8", "--seed", "4",
          "--set", "max_steps=50", "--trace", str(trace), "--dump", str(dump)])
    total = int(capsys.readouterr().out.strip())
    lines = trace.read_text().splitlines()
    assert len(lines) == 50
    assert sum(int(line.split("\t")[-1]) for line in lines) == total
    text = dump.read_text()
    assert text.startswith("# episodic\n") and "# semantic\n" in text


def test_episode_config_file(tmp_path, capsys):
    cfg = tmp_path / "env.json"
    cfg.write_text(json.dumps({"max_steps": 30, "n_people": 4}))
    trace = tmp_path / "t.tsv"
    main(["episode", "--policy", "h1", "--capacity", "4", "--config", str(cfg), "--trace", str(trace)])
    assert len(trace.read_text().splitlines()) == 30


def test_run_preset(tmp_path, capsys):
    out, summary = tmp_path / "r.csv", tmp_path / "s.json"
    main(["run", "--preset", "fig3", "--seeds", "2", "--out", str(out),
          "--summary", str(summary), "--set", "max_steps=40"])
    rows = read_csv(out)
    assert len(rows) == 8 * 2 and tuple(rows[0]) == CSV_FIELDS
    cells = json.loads(summary.read_text())["cells"]
    assert len(cells) == 8 and all(c["n"] == 2 for c in cells)


def test_bad_set(tmp_path):
    with pytest.raises(SystemExit):
        main(["episode", "--policy", "h1", "--capacity", "4", "--set", "max_steps"])
