import io
import json

import pytest

from toptheory import cli
from toptheory.cli import Options, ParseError, parse, run

CHAIN = """\
# the two-element chain a <= b
quantale B = builtin two
tcategory C over B theory identity {
  objects a b
  default = 0
  hom a a = 1; hom b b = 1; hom a b = 1
}
frame F = omega C
"""

METRIC = """\
quantale L = builtin lawvere-chain 4
tcategory M over L theory finite-ultrafilter {
  objects p q r
  row p = 0 1 2
  row q = 1 0 1
  row r = 2 1 0
}
"""

CORRUPT = """\
quantale P = table {
  elements 0 1; unit 1; leq 0 1
  tensor 0 0 = 1; tensor 0 1 = 0; tensor 1 0 = 0; tensor 1 1 = 1
}
"""


def invoke(capsys, tmp_path, text, *args):
    path = tmp_path / "input.tt"
    path.write_text(text)
    code = cli.main([args[0], str(path), *args[1:]])
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out and "--format" not in args else out.out), out.err


def test_parse_single_quantale():
    ws = parse("quantale Q = builtin two")
    assert list(ws.entities) == ["Q"]
    assert ws.entities["Q"].kind == "quantale"


def test_missing_entry_is_totality_error():
    text = "quantale B = builtin two\ntcategory X over B theory identity { objects a b; hom a a = 1; hom b b = 1; hom a b = 0 }"
    with pytest.raises(ParseError) as exc:
        parse(text)
    assert "totality" in str(exc.value)
    assert exc.value.line == 2 and exc.value.column > 1


@pytest.mark.parametrize("text, fragment", [
    ("quantale Q = builtin two\nquantale Q = builtin two", "duplicate"),
    ("tcategory X over Q theory identity { objects a }", "undefined"),
    ("quantale Q = builtin seven", "unknown builtin"),
    ("qantale Q = builtin two", "unknown declaration"),
    ("quantale Q = builtin two\ntcategory X over Q theory word { objects a }", "unknown theory"),
    ("quantale Q = builtin two\ntcategory X over Q theory identity { objects a; hom a a = 5 }",
     "not an element"),
    ("quantale Q = builtin two\ntcategory X over Q theory identity { objects a; hom a a = 1",
     "unterminated"),
    ("quantale Q = builtin goedel-chain x", "integer"),
    ("quantale Q = builtin two $", "unexpected"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(ParseError) as exc:
        parse(text)
    assert fragment in str(exc.value)


def test_metric_instance_loads_and_validates(capsys, tmp_path):
    code, doc, _ = invoke(capsys, tmp_path, METRIC, "validate")
    assert code == 0
    laws = {(e["entity"], e["law"]): e["verdict"] for e in doc["entries"]}
    assert laws[("M", "transitive")] == "holds"
    assert laws[("M", "reflexive")] == "holds"


def test_eta_on_chain(capsys, tmp_path):
    code, doc, _ = invoke(capsys, tmp_path, CHAIN, "eta")
    assert code == 0
    assert doc["data"]["C"]["surjective"] is True
    assert doc["data"]["C"]["injective"] is True


@pytest.mark.parametrize("command", ["validate", "omega", "points", "cauchy", "main-thm",
                                     "compact", "frm-check"])
def test_commands_succeed_on_chain(capsys, tmp_path, command):
    code, doc, _ = invoke(capsys, tmp_path, CHAIN, command, "--oracle")
    assert code == 0
    assert doc["schema"] == cli.SCHEMA and doc["status"] == "ok"
    assert doc["entries"]
    for e in doc["entries"]:
        assert {"entity", "law", "verdict"} <= set(e)
        assert e["verdict"] in ("holds", "fails", "unknown")


def test_corrupted_quantale_nonzero_with_witness(capsys, tmp_path):
    code, doc, _ = invoke(capsys, tmp_path, CORRUPT, "validate")
    assert code == 1
    failing = [e for e in doc["entries"] if e["verdict"] == "fails"]
    assert failing and all("witness" in e for e in failing)


def test_dependents_of_invalid_entity_are_skipped(capsys, tmp_path):
    text = CORRUPT + "tcategory X over P theory identity { objects a; hom a a = 1 }\n"
    code, doc, _ = invoke(capsys, tmp_path, text, "cauchy")
    assert code == 1
    skipped = [e for e in doc["entries"] if e["entity"] == "X"]
    assert skipped[0]["verdict"] == "unknown"


def test_violating_tcategory_reported(capsys, tmp_path):
    text = ("quantale L = builtin lawvere-chain 4\n"
            "tcategory M over L theory identity { objects p q r; default = 1\n"
            " hom p p = 0; hom q q = 0; hom r r = 0; hom p q = inf }\n")
    code, doc, _ = invoke(capsys, tmp_path, text, "main-thm")
    assert code == 1
    bad = [e for e in doc["entries"] if e["verdict"] == "fails"]
    assert bad[0]["entity"] == "M" and bad[0]["law"] == "transitive" and bad[0]["witness"]


def test_sweep_all_hold(capsys):
    code = cli.main(["sweep", "--max-objects", "3", "--quantale", "two"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 0 and doc["summary"]["fails"] == 0
    laws = {e["law"] for e in doc["entries"]}
    assert {"bijective", "triangle", "surjective-iff-cauchy-complete"} <= laws
    assert doc["data"]["identity/two/n=3"]["tcategories"] == 29


def test_sweep_other_quantale_and_theory(capsys):
    code = cli.main(["sweep", "--max-objects", "2", "--quantale", "goedel-chain:3",
                     "--theory", "finite-ultrafilter"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 0
    assert doc["data"]["finite-ultrafilter/goedel-chain(3)/n=2"]["tcategories"] == 9


def test_sweep_is_deterministic(capsys):
    cli.main(["sweep", "--max-objects", "2"])
    first = capsys.readouterr().out
    cli.main(["sweep", "--max-objects", "2"])
    assert capsys.readouterr().out == first


@pytest.mark.parametrize("argv", [["bogus"], ["eta"], ["sweep", "--quantale", "seven"],
                                  ["sweep", "--format", "xml"]])
def test_usage_errors_exit_two(capsys, argv):
    assert cli.main(argv) == 2


def test_parse_error_exits_two(capsys, tmp_path):
    code, _, err = invoke(capsys, tmp_path, "quantale Q = builtin\n", "validate")
    assert code == 2 and "input.tt:1:" in err


def test_unknown_target_exits_two(capsys, tmp_path):
    code, _, err = invoke(capsys, tmp_path, CHAIN, "eta", "--target", "nope")
    assert code == 2


def test_target_restricts_entities(capsys, tmp_path):
    text = CHAIN + "tcategory D over B theory identity { objects u; hom u u = 1 }\n"
    code, doc, _ = invoke(capsys, tmp_path, text, "cauchy", "--target", "D")
    assert code == 0
    assert {e["entity"] for e in doc["entries"]} == {"D"}


def test_text_format(capsys, tmp_path):
    code, out, _ = invoke(capsys, tmp_path, CHAIN, "eta", "--format", "text")
    assert code == 0
    assert out.startswith(cli.SCHEMA) and "holds" in out


def test_stdin_input(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO(CHAIN))
    assert cli.main(["cauchy", "-"]) == 0
    assert json.loads(capsys.readouterr().out)["input"] == "<stdin>"


def test_table_and_product_quantales():
    text = ("quantale P = table { elements 0 1; unit 1; leq 0 1\n"
            "  tensor 0 0 = 0; tensor 0 1 = 0; tensor 1 0 = 0; tensor 1 1 = 1 }\n"
            "quantale S = builtin product P P\n"
            "tcategory X over S theory identity { objects a; hom a a = (1,1) }\n"
            "tfunctor f : X -> X { a -> a }\n")
    ws = parse(text)
    assert ws.entities["S"].value.size == 4
    out = run(ws, "validate", Options())
    assert out.violations == 0


def test_tfunctor_checked(capsys, tmp_path):
    text = CHAIN + "tfunctor swap : C -> C { a -> b; b -> a }\n"
    code, doc, _ = invoke(capsys, tmp_path, text, "validate")
    assert code == 1
    bad = [e for e in doc["entries"] if e["verdict"] == "fails"]
    assert bad[0]["entity"] == "swap"
