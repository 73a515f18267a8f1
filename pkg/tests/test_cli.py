import sys
from pathlib import Path

import pytest

from degreeplan.cli import EXIT_INFEASIBLE, EXIT_OK, EXIT_USER_ERROR, run

FIXTURES = Path(__file__).parent / "fixtures"
CATALOG = str(FIXTURES / "it")
FRESHMAN = str(FIXTURES / "empty_transcript.csv")
SOPHOMORE = str(FIXTURES / "sophomore_transcript.csv")
LP_SOLVER = str(Path(__file__).parent.parent / "tools" / "lp_solver.py")

RECORDS = "\n".join(
    ["student_id,code,grade"]
    + [f"s{i},ITC2088,3.7" for i in range(20)]
    + [f"s{i},ITC2197,3.3" for i in range(20)]
) + "\n"


class TestValidate:
    def test_clean_catalog(self, capsys):
        assert run(["validate", "--catalog", CATALOG]) == EXIT_OK
        assert "catalog ok" in capsys.readouterr().out

    def test_broken_catalog(self, tmp_path, capsys):
        cat = tmp_path / "cat"
        cat.mkdir()
        (cat / "calendar.cfg").write_text(
            "anchor = FA2022\nS_max = 4\nT_c = 3\nL_c = 0\nC_max = 9\nC_max_honors = 12\n"
        )
        (cat / "courses.csv").write_text(
            "id,code,synonyms,title,credits,difficulty,prereq,coreq,display_name,terms\n"
            "1,A,,A,3,0,B,,,FA2022\n"
            "2,B,,B,3,0,A,,,FA2022\n"
        )
        (cat / "groups.csv").write_text("name,mode,count,per_term,members\n")
        assert run(["validate", "--catalog", str(cat)]) == EXIT_USER_ERROR
        assert "cycle" in capsys.readouterr().out

    def test_missing_catalog_dir(self, capsys):
        assert run(["validate", "--catalog", "/nonexistent"]) == EXIT_USER_ERROR


class TestMine:
    def test_mine_writes_rules(self, tmp_path, capsys):
        records = tmp_path / "records.csv"
        records.write_text(RECORDS)
        out = tmp_path / "rules.csv"
        assert run(["mine", "--records", str(records), "--out", str(out)]) == EXIT_OK
        text = out.read_text()
        assert text.startswith("antecedents;consequent;support;confidence")
        assert "ITC2088>=3.7;ITC2197>=3.3" in text
        assert "mined" in capsys.readouterr().out

    def test_bad_records_header(self, tmp_path):
        records = tmp_path / "records.csv"
        records.write_text("who,what\n")
        assert run(["mine", "--records", str(records), "--out",
                    str(tmp_path / "o.csv")]) == EXIT_USER_ERROR


class TestPlan:
    def test_freshman_plan(self, capsys):
        assert run(["plan", "--catalog", CATALOG, "--transcript", FRESHMAN]) == EXIT_OK
        out = capsys.readouterr().out
        assert "FA2022" in out and "Total planned credits:" in out
        assert "[model:" in out

    def test_sophomore_with_rules_and_options(self, tmp_path, capsys):
        records = tmp_path / "records.csv"
        records.write_text(RECORDS)
        rules = tmp_path / "rules.csv"
        assert run(["mine", "--records", str(records), "--out", str(rules)]) == EXIT_OK
        code = run([
            "plan", "--catalog", CATALOG, "--transcript", SOPHOMORE,
            "--objective", "time", "--rules", str(rules),
            "--pin", "ITC2197=FA2023",
        ])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert "ITC2197" in out

    def test_infeasible_request(self, capsys):
        code = run([
            "plan", "--catalog", CATALOG, "--transcript", FRESHMAN,
            "--desire", "ITC3287", "--reject", "ITC2197", "ITC3234",
        ])
        assert code == EXIT_INFEASIBLE
        assert "infeasible" in capsys.readouterr().err

    def test_infeasible_by_construction(self, capsys):
        code = run([
            "plan", "--catalog", CATALOG, "--transcript", FRESHMAN,
            "--desire", "ITC3234", "--reject", "ITC3234",
        ])
        assert code == EXIT_INFEASIBLE
        assert "desired" in capsys.readouterr().err

    def test_unknown_pin_token(self, capsys):
        code = run([
            "plan", "--catalog", CATALOG, "--transcript", FRESHMAN,
            "--pin", "ITC2197=NOPE",
        ])
        assert code == EXIT_USER_ERROR

    def test_lp_out_and_byte_determinism(self, tmp_path):
        lp1, lp2 = tmp_path / "a.lp", tmp_path / "b.lp"
        base = ["plan", "--catalog", CATALOG, "--transcript", SOPHOMORE]
        assert run(base + ["--lp-out", str(lp1)]) == EXIT_OK
        assert run(base + ["--lp-out", str(lp2)]) == EXIT_OK
        assert lp1.read_bytes() == lp2.read_bytes()
        text = lp1.read_text()
        assert text.startswith("Minimize\n") and text.endswith("End\n")

    def test_external_solver_matches_internal(self, tmp_path, capsys):
        base = ["plan", "--catalog", CATALOG, "--transcript", SOPHOMORE]
        assert run(base) == EXIT_OK
        internal_out = capsys.readouterr().out
        code = run(base + [
            "--solver", "external",
            "--solver-command", f"{sys.executable} {LP_SOLVER} {{lp}} {{sol}}",
        ])
        assert code == EXIT_OK
        external_out = capsys.readouterr().out
        strip = lambda s: [ln for ln in s.splitlines() if not ln.startswith("[model:")]
        assert strip(internal_out) == strip(external_out)

    def test_external_without_command(self, capsys):
        code = run([
            "plan", "--catalog", CATALOG, "--transcript", FRESHMAN, "--solver", "external",
        ])
        assert code != EXIT_OK
