"""Integration tests for the gridpat command line.

usage: cli_test.py GRIDPAT_BINARY SCHEMA_DIR
"""

import json
import pathlib
import subprocess
import sys
import tempfile
import unittest

import jsonschema
from referencing import Registry, Resource

CLI = None
SCHEMAS = None


def run(*args, stdin=""):
    proc = subprocess.run([CLI, *map(str, args)], input=stdin, capture_output=True, text=True, timeout=300)
    return proc.returncode, proc.stdout, proc.stderr


def ok(*args):
    code, out, err = run(*args)
    if code != 0:
        raise AssertionError(f"gridpat {' '.join(map(str, args))} exited {code}: {err}")
    return out


def load_registry():
    resources = []
    for path in sorted(pathlib.Path(SCHEMAS).glob("*.json")):
        schema = json.loads(path.read_text())
        resources.append((schema["$id"], Resource.from_contents(schema)))
    return Registry().with_resources(resources)


class Base(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = pathlib.Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def write(self, name, text):
        path = self.dir / name
        path.write_text(text)
        return path


class CountTest(Base):
    def test_rectangle(self):
        rect = self.dir / "rect.txt"
        ok("construct", "rect", 5, 7, "--out", rect)
        self.assertEqual(ok("count", rect, "-k", 5).splitlines()[0], "patterns=13")

    def test_single_point(self):
        path = self.write("p.txt", "0 0\n")
        self.assertEqual(ok("count", path, "-k", 1), "patterns=4\nlength=1 count=4\n")

    def test_empty(self):
        path = self.write("e.txt", "")
        self.assertEqual(ok("count", path, "-k", 3), "patterns=0\n")

    def test_stdin(self):
        code, out, _ = run("count", "-", "-k", 2, stdin="0 0\n1 0\n")
        self.assertEqual((code, out.splitlines()[0]), (0, "patterns=1"))

    def test_parse_errors(self):
        code, _, err = run("count", self.write("bad.txt", "0 0\n1 x\n"), "-k", 1)
        self.assertEqual(code, 3)
        self.assertIn("line 2", err)
        code, _, err = run("count", self.write("dup.txt", "0 0\n# c\n0 0\n"), "-k", 1)
        self.assertEqual(code, 3)
        self.assertIn("line 3", err)
        code, _, _ = run("count", self.dir / "missing.txt", "-k", 1)
        self.assertEqual(code, 3)

    def test_usage(self):
        self.assertEqual(run()[0], 2)
        self.assertEqual(run("count", self.write("p.txt", "0 0\n"))[0], 2)
        self.assertEqual(run("count", self.write("q.txt", "0 0\n"), "-k", 1, "--format", "xml")[0], 2)
        self.assertEqual(run("bogus")[0], 2)
        self.assertEqual(run("--help")[0], 0)


class SolveTest(Base):
    def test_examples(self):
        out = ok("solve", "-k", 5, "-n", 3)
        self.assertIn("value=12\n", out)
        self.assertIn("status=Proven\n", out)
        self.assertIn("value=4\n", ok("solve", "-k", 4, "-n", 1))

    def test_bfile(self):
        # terms computed by the exhaustive solver; n = 4..6 are window-limited
        out = ok("solve", "-k", 4, "--n-max", 6, "--format", "bfile")
        self.assertEqual(out, "1 4\n2 7\n3 9\n4 11\n5 12\n6 12\n")
        for line in out.splitlines():
            self.assertEqual(line, line.rstrip())

    def test_witnesses_reverify(self):
        for k, n in [(2, 1), (3, 3), (4, 2), (5, 3), (3, 5), (2, 7), (1, 8)]:
            w = self.dir / f"w{k}_{n}.txt"
            ok("solve", "-k", k, "-n", n, "--witness", w)
            self.assertEqual(ok("count", w, "-k", k).splitlines()[0], f"patterns={n}")
        ok("solve", "-k", 3, "--n-max", 6, "--witness", self.dir / "t{n}.txt")
        for n in range(1, 7):
            self.assertEqual(ok("count", self.dir / f"t{n}.txt", "-k", 3).splitlines()[0], f"patterns={n}")
        self.assertEqual(run("solve", "-k", 3, "--n-max", 2, "--witness", self.dir / "x.txt")[0], 2)

    def test_exit_codes(self):
        self.assertEqual(run("solve", "-k", 4, "-n", 7, "--window", 16, "--budget", 3)[0], 5)
        self.assertEqual(run("solve", "-k", 2, "-n", 5, "--window", 4, "--max-points", 3)[0], 4)
        self.assertEqual(run("solve", "-k", 2, "-n", 1, "--window", 3)[0], 4)
        self.assertEqual(run("solve", "-k", 2)[0], 2)
        self.assertEqual(run("solve", "-k", 2, "-n", 1, "--n-max", 3)[0], 2)

    def test_cache(self):
        cache = self.dir / "cache.jsonl"
        first = ok("solve", "-k", 3, "-n", 5, "--format", "json", "--cache", cache)
        lines = cache.read_text().splitlines()
        self.assertEqual(len(lines), 1)
        self.assertEqual(json.loads(lines[0])["key"], {"k": 3, "n": 5, "window": 9, "budget": 0})
        self.assertEqual(ok("solve", "-k", 3, "-n", 5, "--format", "json", "--cache", cache), first)
        self.assertEqual(len(cache.read_text().splitlines()), 1)

        # a tampered witness is rejected and the instance solved again
        entry = json.loads(lines[0])
        entry["result"]["witness"]["points"] = entry["result"]["witness"]["points"][:-1]
        entry["result"]["value"] -= 1
        cache.write_text(json.dumps(entry) + "\n")
        code, out, err = run("solve", "-k", 3, "-n", 5, "--format", "json", "--cache", cache)
        self.assertEqual(code, 0)
        self.assertEqual(out, first)
        self.assertIn("fails verification", err)
        self.assertEqual(len(cache.read_text().splitlines()), 2)

        # tables go through the cache entry by entry
        table = ok("solve", "-k", 3, "--n-max", 5, "--format", "bfile", "--cache", cache)
        self.assertEqual(ok("solve", "-k", 3, "--n-max", 5, "--format", "bfile", "--cache", cache), table)


class QueensTest(Base):
    def test_empty_enumeration(self):
        self.assertEqual(run("queens", "-n", 4), (0, "empty (gcd(4,6)=2)\n", ""))

    def test_classes(self):
        self.assertEqual(ok("queens", "-n", 5, "--mode", "classes"), "n=5 classes=1\n0,2,4,1,3 size=10 linear\n")
        self.assertIn(" nonlinear\n", ok("queens", "-n", 13, "--mode", "classes"))

    def test_enum(self):
        self.assertEqual(len(ok("queens", "-n", 7).splitlines()), 28)

    def test_maxpartial(self):
        out = ok("queens", "-n", 6, "--mode", "maxpartial")
        self.assertTrue(out.startswith("n=6 queens=4 proven=yes\n"))
        self.assertIn("proven=no", ok("queens", "-n", 9, "--mode", "maxpartial", "--budget", 2))

    def test_cap(self):
        self.assertEqual(run("queens", "-n", 14)[0], 4)


class ConstructTest(Base):
    def test_counts(self):
        self.assertIn("points=35\n", ok("construct", "rect", 5, 7))
        self.assertIn("points=180\n", ok("construct", "lattice", "1,2", "2,-1", 15))
        self.assertIn("points=128\n", ok("construct", "monsky", 6, 12))
        out = ok("construct", "tile", "0,2,4,1,3", 25, "--ratio", 4)
        self.assertIn("# ratio=250/207 k=4 patterns=414\n", out)

    def test_stdout_is_a_points_file(self):
        pts = self.write("r.txt", ok("construct", "rect", 3, 4))
        self.assertEqual(ok("count", pts, "-k", 3).splitlines()[0], "patterns=8")

    def test_lattice_matches_tile(self):
        a = self.dir / "a.txt"
        b = self.dir / "b.txt"
        ok("construct", "lattice", "1,2", "2,-1", 15, "--out", a)
        ok("construct", "tile", "0,2,4,1,3", 15, "--out", b)
        self.assertEqual(a.read_text(), b.read_text())

    def test_hypotheses(self):
        code, _, err = run("construct", "tile", "0,1,2,3,4", 25)
        self.assertEqual(code, 4)
        self.assertIn("T_n", err)
        self.assertEqual(run("construct", "rect", 3, 2)[0], 4)
        self.assertEqual(run("construct", "lattice", "1,2", "2,4", 10)[0], 4)
        code, _, err = run("construct", "linear", 2, 6, 12)
        self.assertEqual(code, 4)
        self.assertIn("m+1=3", err)
        self.assertEqual(run("construct", "tile", "0,0,1", 5)[0], 4)
        self.assertEqual(run("construct", "rect", 5)[0], 2)
        self.assertEqual(run("construct", "circle", 5, 5)[0], 2)


class RenderTest(Base):
    def test_ascii(self):
        self.assertEqual(ok("render", self.write("p.txt", "3 4\n")), "●\n")
        rect = self.dir / "rect.txt"
        ok("construct", "rect", 2, 3, "--out", rect)
        self.assertEqual(ok("render", rect), "●●●\n●●●\n")
        self.assertEqual(ok("render", self.write("d.txt", "0 0\n1 1\n")), "·●\n●·\n")
        self.assertEqual(ok("render", self.write("e.txt", "")), "")

    def test_tile_figure(self):
        tile = self.dir / "tile.txt"
        ok("construct", "linear", 2, 13, 13, "--out", tile)
        self.assertEqual(ok("render", tile).count("●"), 156)
        self.assertEqual(ok("render", tile, "--format", "svg").count("<circle"), 156)

    def test_svg_orientation(self):
        svg = ok("render", self.write("d.txt", "0 0\n1 1\n"), "--format", "svg")
        self.assertIn('width="40" height="40"', svg)
        self.assertIn('<circle cx="10" cy="30"', svg)
        self.assertIn('<circle cx="30" cy="10"', svg)
        out = self.dir / "d.svg"
        self.assertEqual(ok("render", self.dir / "d.txt", "--format", "svg", "--out", out), "")
        self.assertEqual(out.read_text(), svg)


class BoundsTest(Base):
    def test_examples(self):
        self.assertEqual(ok("bounds", "-k", 4), "k lower upper rule near\n4 1 1 modular-queens -\n")
        self.assertEqual(ok("bounds", "-k", 1), "k lower upper rule near\n1 1/4 1/4 isolated-points -\n")

    def test_table(self):
        rows = ok("bounds", "--k-min", 2, "--k-max", 20).splitlines()[1:]
        self.assertEqual(len(rows), 19)
        self.assertTrue(rows[-1].endswith(" yes"))
        self.assertTrue(all(r.endswith(" -") for r in rows[:-1]))

    def test_check(self):
        out = ok("bounds", "-k", 4, "--check")
        self.assertIn("check k=4 sigma=0,2,4,1,3 ratios=25:250/207,50:125/114,100:2000/1911 ", out)
        self.assertIn("monotone=yes interior=yes", out)

    def test_usage(self):
        self.assertEqual(run("bounds")[0], 2)
        self.assertEqual(run("bounds", "-k", 3, "--k-min", 2)[0], 2)
        self.assertEqual(run("bounds", "--k-min", 5, "--k-max", 2)[0], 2)


class SchemaTest(Base):
    def validate(self, name, text):
        registry = load_registry()
        schema = registry.contents(f"https://gridpat.invalid/schemas/{name}.v1.json")
        jsonschema.Draft202012Validator(schema, registry=registry).validate(json.loads(text))

    def test_outputs(self):
        pts = self.write("p.txt", "0 0\n1 0\n2 0\n")
        self.validate("pattern_report", ok("count", pts, "-k", 3, "--format", "json"))
        self.validate("pattern_report", ok("count", self.write("e.txt", ""), "-k", 3, "--format", "json"))
        self.validate("solve_result", ok("solve", "-k", 5, "-n", 3, "--format", "json"))
        self.validate("solve_table", ok("solve", "-k", 2, "--n-max", 5, "--format", "json"))
        self.validate("queens_enum", ok("queens", "-n", 7, "--format", "json"))
        self.validate("queens_enum", ok("queens", "-n", 6, "--format", "json"))
        self.validate("class_report", ok("queens", "-n", 13, "--mode", "classes", "--format", "json"))
        self.validate("max_partial", ok("queens", "-n", 8, "--mode", "maxpartial", "--format", "json"))
        self.validate("bound_report", ok("bounds", "--k-min", 1, "--k-max", 25, "--check", "--format", "json"))
        self.validate("points", ok("construct", "tile", "0,2,4,1,3", 25, "--ratio", 4, "--format", "json"))
        self.validate("points", ok("construct", "rect", 2, 3, "--format", "json"))

    def test_rejects_bad_documents(self):
        bad = json.loads(ok("solve", "-k", 2, "-n", 1, "--format", "json"))
        bad["status"] = "Optimal"
        with self.assertRaises(jsonschema.ValidationError):
            self.validate("solve_result", json.dumps(bad))


if __name__ == "__main__":
    CLI, SCHEMAS = sys.argv[1], sys.argv[2]
    unittest.main(argv=[sys.argv[0], "-v"])
