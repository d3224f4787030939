import io
import json
import shutil
import subprocess
import sys
from pathlib import Path


from semistrict import errors
from semistrict.cli import COMMANDS, run

CORPUS = Path(__file__).resolve().parents[1] / "corpus"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, json.loads(out.getvalue()), err.getvalue()


def shell(*argv):
    exe = shutil.which("semistrict")
    cmd = [exe] if exe else [sys.executable, "-m", "semistrict"]
    return subprocess.run(cmd + [str(a) for a in argv], capture_output=True, text=True, timeout=120)


def test_pi_example():
    p = shell("pi", CORPUS / "k_z2_3.json")
    assert p.returncode == 0
    assert p.stdout.strip() == '{"pi1":"1","pi2":"1","pi3":"Z/2"}'


def test_validate_example():
    p = shell("validate", CORPUS / "bad_s3.json")
    assert p.returncode == 1
    assert "[ker d, ker t] ≠ 1" in p.stdout


def test_hcheck_example():
    p = shell("hcheck", CORPUS / "point.json")
    assert p.returncode == 0


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "semistrict", "pi", str(CORPUS / "k_z2_3.json")],
                       capture_output=True, text=True, timeout=120)
    assert p.returncode == 0 and "Z/2" in p.stdout


def test_parse_error_position(tmp_path):
    f = tmp_path / "broken.json"
    f.write_text('{"groups": {\n  "a": [1, 2,\n}', encoding="utf-8")
    code, body, err = call("validate", f)
    assert code == 2
    e = body["error"]
    assert e["code"] == "parse_error" and e["line"] == 3 and e["column"] >= 1
    assert "parse_error" in err


def test_unknown_name():
    code, body, _ = call("pi", CORPUS / "valid.json", "nope")
    assert code == 2 and body["error"]["code"] == "unknown_name"


def test_ambiguous_default_name():
    code, body, _ = call("pi", CORPUS / "valid.json")
    assert code == 2 and body["error"]["code"] == "unknown_name"
    assert body["error"]["candidates"]


def test_missing_file(tmp_path):
    code, body, _ = call("validate", tmp_path / "absent.json")
    assert code == 2 and body["error"]["code"] == "io_error"


def test_size_cap_surfaces():
    code, body, _ = call("nerve", CORPUS / "k_z2_3.json", "--levels", 4, "--cap", 100)
    assert code == 2 and body["error"]["code"] == "size_cap_exceeded"


def test_trunc_too_small():
    code, body, _ = call("pi", CORPUS / "k_z2_3.json", "--trunc", 1)
    assert code == 2


def test_k_z2_3_nerve_orders():
    code, body, _ = call("nerve", CORPUS / "k_z2_3.json")
    assert code == 0
    assert body["orders"][1][1] == 2 and body["orders"][0][0] == 1


def test_validate_valid_corpus():
    code, body, _ = call("validate", CORPUS / "valid.json")
    assert code == 0 and body["ok"]


def test_validate_invalid_corpus():
    code, body, _ = call("validate", CORPUS / "invalid.json")
    assert code == 1
    doc = json.loads((CORPUS / "invalid.json").read_text(encoding="utf-8"))
    structures = list(doc["cat1"]) + list(doc["cat2"])
    assert len(structures) == 6
    assert not any(body["results"][n]["ok"] for n in structures)
    assert all(body["results"][n]["ok"] for n in doc["groups"])


def test_weq_and_lemma_on_maps():
    code, body, _ = call("weq", CORPUS / "maps.json", "E3_pt")
    assert code == 1 and body["weak_equivalence"] is False
    code, body, _ = call("weq", CORPUS / "maps.json", "id_E3")
    assert code == 0
    code, body, _ = call("lemma51", CORPUS / "maps.json", "E3_pt")
    assert code == 0
    assert body["diagnostics"]["definitional"] is False and body["diagnostics"]["pi_criterion"] is False


def test_cat2_weq():
    assert call("weq", CORPUS / "cat2_maps.json", "id_E3_1")[0] == 0
    assert call("weq", CORPUS / "cat2_maps.json", "E3_1_to_pt")[0] == 1


def test_bar_monoids():
    code, body, _ = call("bar", CORPUS / "monoids.json", "z3_2cells")
    assert code == 0
    assert body["homotopy"] == {"pi1": "1", "pi2": "1", "pi3": "Z/3"}


def test_dsnerve_and_diag_agree():
    code, body, _ = call("dsnerve", CORPUS / "retractions.json", "K_Z_2_3", "--retraction", "r_K_Z_2_3")
    assert code == 0
    code, body, _ = call("diag-agree", CORPUS / "retractions.json", "K_Z_2_3", "r_K_Z_2_3")
    assert code == 0 and body["agree"]


def test_kcheck_on_strict_and_semistrict():
    assert call("kcheck", CORPUS / "point.json")[0] == 0
    assert call("kcheck", CORPUS / "monoids.json", "z3_2cells")[0] == 0


def test_segal_directions():
    for d in ("h", "v"):
        code, body, _ = call("segal", CORPUS / "k_z2_3.json", "--direction", d)
        assert code == 0 and body["direction"] == d


def test_report_cat1():
    code, body, _ = call("report", CORPUS / "valid.json", "E3")
    assert code == 0 and body["kind"] == "cat1"


def test_report_cat2():
    code, body, _ = call("report", CORPUS / "k_z2_3.json")
    assert code == 0 and "pi" in body["sections"]


def test_every_command_is_listed():
    assert set(COMMANDS) == {"validate", "pi", "nerve", "segal", "weq", "dsnerve", "hcheck", "kcheck",
                             "bar", "lemma51", "diag-agree", "report"}


def test_error_codes_are_distinct():
    classes = [c for c in vars(errors).values()
               if isinstance(c, type) and issubclass(c, errors.SemistrictError)]
    codes = [c.code for c in classes if c is not errors.SemistrictError]
    assert len(codes) == len(set(codes)) and len(codes) >= 10
