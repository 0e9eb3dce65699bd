import hashlib
import json

import pytest

from pcspider.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    return tmp_path


def test_gen_transitive(capsys, files):
    code, out, err = run(capsys, "gen", "transitive", 5)
    assert code == 0 and "mono-C3-free" in err
    rows = [l for l in out.splitlines() if not l.startswith(("#", "n "))]
    assert len(rows) == 4


def test_gen_is_reproducible(capsys, files):
    a = run(capsys, "gen", "random", 50, "--seed", 1)[1]
    b = run(capsys, "gen", "random", 50, "--seed", 1)[1]
    assert a == b
    assert a != run(capsys, "gen", "random", 50, "--seed", 2)[1]


@pytest.mark.parametrize("argv", [["gen", "nosuch", 5], ["gen", "random", 0], ["gen", "random", 20, "--palette", 2],
                                  ["bogus"], []])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_check(capsys, files):
    p = files / "t.txt"
    run(capsys, "gen", "transitive", 8, "-o", p)
    code, out, _ = run(capsys, "check", p)
    assert code == 0 and "mono-C3-free" in out
    mono = files / "m.txt"
    mono.write_text("n 3\n0 0\n0\n")
    code, out, _ = run(capsys, "check", mono)
    assert code == 1 and "monochromatic triangle 0 1 2" in out
    bad = files / "b.txt"
    bad.write_text("n 3\n0 0\n")
    assert run(capsys, "check", bad)[0] == 2
    code, out, _ = run(capsys, "--json", "check", p)
    assert json.loads(out)["mono_triangle"] is None


def test_spider_transitive_301(capsys, files):
    p, c = files / "t.txt", files / "c.txt"
    run(capsys, "gen", "transitive", 301, "-o", p)
    code, _, err = run(capsys, "spider", p, "200,60,40", "-o", c)
    assert code == 0 and "branch" in err
    code, out, _ = run(capsys, "verify", p, c, "--legs", "200,60,40")
    assert code == 0 and out.strip() == "valid"
    assert run(capsys, "verify", p, c, "--legs", "100,160,40")[0] == 1


def test_spider_errors(capsys, files):
    p = files / "t.txt"
    run(capsys, "gen", "transitive", 10, "-o", p)
    assert run(capsys, "spider", p, "3,3,3,3")[0] == 2
    assert run(capsys, "spider", p, "a,b")[0] == 2
    # every pentagon vertex sees two colors: no 3-star to start from
    pent = files / "p.txt"
    pent.write_text("n 5\n0 1 1 0\n0 1 1\n0 1\n0\n")
    code, _, err = run(capsys, "spider", pent, "2,1,1")
    assert code == 1 and "not found" in err and "/" in err
    mono = files / "m.txt"
    mono.write_text("n 3\n0 0\n0\n")
    assert run(capsys, "spider", mono, "1,1")[0] == 1


def test_subdivide(capsys, files):
    p, c = files / "t.txt", files / "c.txt"
    run(capsys, "gen", "transitive", 30, "-o", p)
    assert run(capsys, "subdivide", p, "edge")[0] == 0
    assert run(capsys, "subdivide", p, "star:3", "-o", c)[0] == 0
    assert run(capsys, "verify", p, c)[0] == 0
    cyc = files / "cyc.txt"
    cyc.write_text("0-1 1-2 2-0\n")
    assert run(capsys, "subdivide", p, cyc)[0] == 2
    tree = files / "tree.txt"
    tree.write_text("0-1 1-2 1-3 3-4\n")
    assert run(capsys, "subdivide", p, tree)[0] == 0
    assert run(capsys, "subdivide", p, "star:40")[0] == 2


def test_ramsey(capsys):
    code, out, err = run(capsys, "ramsey", 2)
    assert code == 0 and "= 2" in out and "nodes=" in err
    code, out, _ = run(capsys, "--json", "ramsey", 2)
    data = json.loads(out)
    assert data["exact"] and data["lower"] == data["upper"] == 2 and data["witness"]["n"] == 2


def test_oracle(capsys, files):
    p, c = files / "k4.txt", files / "c.txt"
    p.write_text("n 4\n0 1 2\n2 1\n0\n")
    code, out, _ = run(capsys, "oracle", p, "1,1,1", "-o", c)
    assert code == 0 and out.startswith("found")
    assert run(capsys, "verify", p, c, "--legs", "1,1,1")[0] == 0
    pent = files / "p.txt"
    pent.write_text("n 5\n0 1 1 0\n0 1 1\n0 1\n0\n")
    assert run(capsys, "oracle", pent, "1,1,1,1")[0] == 1
    big = files / "big.txt"
    run(capsys, "gen", "transitive", 12, "-o", big)
    assert run(capsys, "oracle", big, "9,1,1")[0] == 2


def test_export_dot(capsys, files):
    p, c = files / "t.txt", files / "c.txt"
    run(capsys, "gen", "random", 40, "--seed", 1, "--palette", 8, "-o", p)
    assert run(capsys, "spider", p, "20,10,9", "-o", c)[0] == 0
    code, out, _ = run(capsys, "export-dot", p, "--cert", c)
    assert code == 0 and out.startswith("graph G {")
    assert {f'leg="{i}"' in out for i in range(3)} == {True}
    assert out == run(capsys, "export-dot", p, "--cert", c)[1]


def test_json_mirror(capsys, files):
    p, cj, ct = files / "t.json", files / "c.json", files / "c.txt"
    run(capsys, "--json", "gen", "random", 40, "--seed", 3, "-o", p)
    assert p.read_text().startswith("{")
    assert run(capsys, "--json", "spider", p, "20,10,9", "-o", cj)[0] == 0
    assert run(capsys, "spider", p, "20,10,9", "-o", ct)[0] == 0
    assert json.loads(cj.read_text())["kind"] == "spider"
    assert run(capsys, "verify", p, cj)[0] == 0 and run(capsys, "verify", p, ct)[0] == 0


def test_byte_identical_reruns(capsys, files):
    digests = set()
    for _ in range(3):
        p, c = files / "g.txt", files / "c.txt"
        run(capsys, "gen", "random", 60, "--seed", 5, "-o", p)
        run(capsys, "spider", p, "30,20,9", "-o", c)
        digests.add(hashlib.sha256(p.read_bytes() + c.read_bytes()).hexdigest())
    assert len(digests) == 1
