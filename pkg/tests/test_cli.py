"""Tests for the graphchem command line: exit codes, config echo lines,
output files and reproducibility."""

import json

from graphchem.chemistry import ruleset
from graphchem.cli import main
from graphchem.molecule import parse_mol

import pytest

IDENTITY_APP = "L e e t\nA t z r\n"


def mol_lines(captured: str) -> str:
    """Drop config-echo and summary lines, keep the mol payload."""
    keep = [l for l in captured.splitlines()
            if l and not l.startswith("#") and not l.startswith("steps=")]
    return "\n".join(keep)


def write_identity(tmp_path):
    path = tmp_path / "identity.mol"
    path.write_text(IDENTITY_APP)
    return path


class TestRun:
    def test_runs_to_death_and_writes_final(self, tmp_path, capsys):
        src = write_identity(tmp_path)
        out = tmp_path / "final.mol"
        code = main(["run", "--in", str(src), "--chemistry", "chemlambda",
                     "--algo", "older-first", "--out", str(out)])
        captured = capsys.readouterr().out
        assert code == 0
        assert captured.startswith("# run ")
        assert "steps=2 nodes=2 dead=true" in captured
        final = parse_mol(out.read_text())
        assert sorted(n.node_type for n in final.nodes.values()) == ["FRIN", "FROUT"]

    def test_zero_steps(self, tmp_path, capsys):
        src = write_identity(tmp_path)
        code = main(["run", "--in", str(src), "--chemistry", "chemlambda",
                     "--steps", "0"])
        assert code == 0
        assert "steps=0 nodes=4 dead=false" in capsys.readouterr().out

    def test_trace_csv(self, tmp_path):
        src = write_identity(tmp_path)
        trace = tmp_path / "trace.csv"
        code = main(["run", "--in", str(src), "--chemistry", "chemlambda",
                     "--algo", "older-first", "--trace", str(trace)])
        assert code == 0
        lines = trace.read_text().splitlines()
        assert lines[0].startswith("step,matches,applied,nodes")
        assert "A-L:0" in lines[1]

    def test_catalog_input_defaults_chemistry(self, capsys):
        code = main(["run", "--in", "catalog:identity-application",
                     "--algo", "older-first"])
        captured = capsys.readouterr().out
        assert code == 0
        assert "chemistry=chemlambda" in captured
        assert "dead=true" in captured

    def test_snapshots_directory(self, tmp_path):
        src = write_identity(tmp_path)
        snapdir = tmp_path / "snaps"
        out = tmp_path / "final.mol"
        code = main(["run", "--in", str(src), "--chemistry", "chemlambda",
                     "--algo", "older-first", "--snapshots", str(snapdir),
                     "--out", str(out)])
        assert code == 0
        names = sorted(p.name for p in snapdir.iterdir())
        assert names == ["step000000.mol", "step000001.mol", "step000002.mol"]
        assert parse_mol((snapdir / "step000000.mol").read_text()).node_count == 4
        assert (snapdir / "step000002.mol").read_text() == out.read_text()

    def test_input_file_untouched(self, tmp_path):
        src = write_identity(tmp_path)
        main(["run", "--in", str(src), "--chemistry", "chemlambda"])
        assert src.read_text() == IDENTITY_APP

    def test_same_seed_same_outputs(self, tmp_path):
        src = write_identity(tmp_path)
        outs = []
        for tag in ("a", "b"):
            out = tmp_path / f"{tag}.mol"
            trace = tmp_path / f"{tag}.csv"
            assert main(["run", "--in", str(src), "--chemistry", "chemlambda",
                         "--seed", "11", "--out", str(out),
                         "--trace", str(trace)]) == 0
            outs.append((out.read_text(), trace.read_text()))
        assert outs[0] == outs[1]

    def test_unknown_chemistry_is_usage_error(self, tmp_path):
        src = write_identity(tmp_path)
        with pytest.raises(SystemExit) as err:
            main(["run", "--in", str(src), "--chemistry", "alchemy"])
        assert err.value.code == 2

    def test_missing_input_file(self, tmp_path, capsys):
        code = main(["run", "--in", str(tmp_path / "absent.mol"),
                     "--chemistry", "chemlambda"])
        assert code == 1
        assert "error:" in capsys.readouterr().err


class TestQuineCheck:
    def test_quine_exits_zero(self, capsys):
        code = main(["quine-check", "--in", "catalog:chemlambda-quine-a"])
        captured = capsys.readouterr().out
        assert code == 0
        assert "quine preperiod=" in captured and "period=" in captured

    def test_dead_exits_two(self, tmp_path, capsys):
        src = write_identity(tmp_path)
        code = main(["quine-check", "--in", str(src), "--chemistry", "chemlambda"])
        assert code == 2
        assert "dead after 2 steps" in capsys.readouterr().out

    def test_zero_horizon_exits_three(self, capsys):
        code = main(["quine-check", "--in", "catalog:chemlambda-quine-a",
                     "--horizon", "0"])
        assert code == 3
        assert "aperiodic within horizon 0" in capsys.readouterr().out


class TestSearch:
    def run_search(self, tmp_path, tag, workers):
        out = tmp_path / f"search-{tag}.jsonl"
        code = main(["search", "--family", "ic", "--nodes", "4-8",
                     "--samples", "300", "--seed", "7", "--horizon", "50",
                     "--workers", str(workers), "--out", str(out)])
        assert code == 0
        return out.read_text()

    def test_finds_quines_and_summarizes(self, tmp_path, capsys):
        text = self.run_search(tmp_path, "one", 1)
        captured = capsys.readouterr()
        lines = text.splitlines()
        summary = json.loads(lines[-1])
        assert summary["samples"] == 300
        assert summary["quines"] + summary["dead"] + summary["aperiodic"] == 300
        assert summary["quines"] == len(lines) - 1 > 0
        found = json.loads(lines[0])
        assert {"index", "seed", "preperiod", "period", "nodes", "mol"} <= set(found)
        assert f"quines={summary['quines']}" in captured.err

    def test_worker_count_identical_output(self, tmp_path, capsys):
        a = self.run_search(tmp_path, "w1", 1)
        b = self.run_search(tmp_path, "w2", 2)
        assert a == b

    def test_reversed_node_range_rejected(self, tmp_path, capsys):
        code = main(["search", "--family", "ic", "--nodes", "8-2",
                     "--samples", "10"])
        assert code == 1
        assert "error:" in capsys.readouterr().err


class TestLambda:
    def test_translates_to_stdout(self, capsys):
        code = main(["lambda", "\\x.x"])
        captured = capsys.readouterr().out
        assert code == 0
        mol = parse_mol(mol_lines(captured))
        assert sorted(n.node_type for n in mol.nodes.values()) == ["FROUT", "L"]

    def test_reduce_reaches_wire(self, capsys):
        code = main(["lambda", "(\\x.x) z", "--reduce"])
        captured = capsys.readouterr().out
        assert code == 0
        assert "steps=2 nodes=2 dead=true" in captured
        mol = parse_mol(mol_lines(captured))
        assert sorted(n.node_type for n in mol.nodes.values()) == ["FRIN", "FROUT"]

    def test_reduce_under_diric(self, capsys):
        code = main(["lambda", "(\\x.x) z", "--reduce", "--chemistry", "diric"])
        captured = capsys.readouterr().out
        assert code == 0
        assert "dead=true" in captured

    def test_out_file(self, tmp_path, capsys):
        out = tmp_path / "term.mol"
        code = main(["lambda", "\\x.x x", "--out", str(out)])
        capsys.readouterr()
        assert code == 0
        assert parse_mol(out.read_text()).node_count == 4

    def test_syntax_error_exits_one(self, capsys):
        code = main(["lambda", "\\x."])
        captured = capsys.readouterr()
        assert code == 1
        assert "error:" in captured.err and "offset 3" in captured.err


class TestTranslate:
    def test_doubles_an_ic_molecule(self, tmp_path, capsys):
        src = tmp_path / "gg.mol"
        src.write_text("GAMMA x a1 a2\nGAMMA x b1 b2\n")
        out = tmp_path / "gg-diric.mol"
        code = main(["translate", "--from", "ic", "--to", "diric",
                     "--in", str(src), "--out", str(out)])
        captured = capsys.readouterr()
        assert code == 0
        assert "nodes=6 -> 12" in captured.err
        translated = parse_mol(out.read_text())
        assert translated.node_count == 12

    def test_empty_input(self, tmp_path, capsys):
        src = tmp_path / "empty.mol"
        src.write_text("")
        code = main(["translate", "--from", "ic", "--to", "diric", "--in", str(src)])
        captured = capsys.readouterr()
        assert code == 0
        assert "nodes=0 -> 0" in captured.err

    def test_unsupported_direction(self, tmp_path, capsys):
        src = tmp_path / "x.mol"
        src.write_text("")
        code = main(["translate", "--from", "diric", "--to", "ic", "--in", str(src)])
        assert code == 1
        assert "only ic -> diric" in capsys.readouterr().out


class TestListings:
    def test_rules_table_covers_every_rule(self, capsys):
        for chemistry in ("chemlambda", "diric", "ic"):
            code = main(["rules", "--chemistry", chemistry])
            captured = capsys.readouterr().out
            assert code == 0
            body = [l for l in captured.splitlines() if not l.startswith("#")]
            assert len(body) == len(ruleset(chemistry).rules)
        assert any(l.startswith("A-L") for l in body) is False  # ic has no A-L

    def test_catalog_listing(self, capsys):
        code = main(["catalog"])
        captured = capsys.readouterr().out
        assert code == 0
        body = [l for l in captured.splitlines() if not l.startswith("#")]
        names = {l.split()[0] for l in body}
        assert {"identity-application", "chemlambda-quine-a", "ic-quine-a",
                "diric-quine-a"} <= names

    def test_catalog_details(self, capsys):
        code = main(["catalog", "--details"])
        captured = capsys.readouterr().out
        assert code == 0
        assert "source:" in captured

    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["--version"])
        assert err.value.code == 0
        assert capsys.readouterr().out.strip()
