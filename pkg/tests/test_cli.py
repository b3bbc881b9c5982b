"""Command line interface: exit codes, documents, echo format."""

import pytest

from wss import engine, pages, ring
from wss.cli import main
from wss.formats import parse_result, parse_ring_table
from wss.ring import UnsupportedRingModel


@pytest.fixture(autouse=True)
def isolate_store():
    yield
    ring.set_store(None)
    pages.set_store(None)
    engine._ACTIVE = None
    engine._RANK_MEMO.clear()
    pages._IMAGE_MEMO.clear()
    pages.reset_image_stats()


class TestCompute:
    def test_point_table(self, capsys):
        rc = main(["compute", "-g", "1", "-n", "1", "--weights", "0..0"])
        assert rc == 0
        assert "gr_0 H^0 = 1" in capsys.readouterr().out

    def test_pull_dual_dims(self, capsys):
        rc = main(["compute", "-g", "0", "-n", "5", "--direction", "pull"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "gr_0 H_c^2 = 6" in out
        assert "gr_2 H_c^3 = 5" in out
        assert "gr_4 H_c^4 = 1" in out
        assert "structurally zero" in out

    def test_out_document(self, tmp_path, capsys):
        out = tmp_path / "res.txt"
        rc = main(["compute", "-g", "0", "-n", "5", "--out", str(out)])
        assert rc == 0
        doc = parse_result(out.read_text())
        lam = (1,) * 5
        assert doc.sectors == {(0, 0, lam): 1, (2, 1, lam): 5, (4, 2, lam): 6}

    def test_schur_echo(self, capsys):
        rc = main(["compute", "-g", "0", "-n", "4", "--lambda", "all"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "gr_0 H^0 = s[4]" in out
        assert "gr_2 H^1 = (s[2,2])*L^1" in out

    def test_unstable(self, capsys):
        assert main(["compute", "-g", "0", "-n", "2"]) == 3

    def test_ring_gate(self, capsys):
        assert main(["compute", "-g", "6", "-n", "1"]) == 3
        assert "2g+n" in capsys.readouterr().err

    def test_odd_weight_bounds(self, capsys):
        assert main(["compute", "-g", "0", "-n", "5", "--weights", "1..3"]) == 3

    def test_bad_partition(self, capsys):
        assert main(["compute", "-g", "0", "-n", "4", "--lambda", "3.2"]) == 3

    def test_usage_error_exit_code(self):
        with pytest.raises(SystemExit) as e:
            main(["compute", "-g", "0"])
        assert e.value.code == 3

    def test_worker_count_same_bytes(self, tmp_path):
        outs = []
        for workers, tag in (("1", "a"), ("2", "b")):
            out = tmp_path / f"{tag}.txt"
            rc = main(
                [
                    "compute", "-g", "0", "-n", "4",
                    "--workers", workers,
                    "--cache-dir", str(tmp_path / f"cache{tag}"),
                    "--out", str(out),
                ]
            )
            assert rc == 0
            outs.append(out.read_bytes())
            engine._ACTIVE = None
            ring.set_store(None)
            pages.set_store(None)
        assert outs[0] == outs[1]


class TestVerify:
    def make_doc(self, tmp_path, name="doc.txt"):
        path = tmp_path / name
        assert main(["compute", "-g", "0", "-n", "5", "--out", str(path)]) == 0
        return path

    def test_self_agreement(self, tmp_path, capsys):
        p = self.make_doc(tmp_path)
        rc = main(["verify", str(p), str(p)])
        assert rc == 0
        assert "verification passed" in capsys.readouterr().out

    def test_mismatch_located(self, tmp_path, capsys):
        p = self.make_doc(tmp_path)
        bad = tmp_path / "bad.txt"
        bad.write_text(p.read_text().replace("dim=5", "dim=7"))
        rc = main(["verify", str(p), str(bad)])
        assert rc == 2
        out = capsys.readouterr().out
        assert "q=2" in out and "7 != 5" in out

    def test_malformed(self, tmp_path, capsys):
        p = self.make_doc(tmp_path)
        junk = tmp_path / "junk.txt"
        junk.write_text("not a document\n")
        assert main(["verify", str(p), str(junk)]) == 3

    def test_missing_file(self, tmp_path):
        p = self.make_doc(tmp_path)
        assert main(["verify", str(p), str(tmp_path / "ghost.txt")]) == 3


class TestRing:
    def test_genus0_basis(self, capsys):
        rc = main(["ring", "-g", "0", "-n", "5", "-r", "1"])
        assert rc == 0
        doc = parse_ring_table(capsys.readouterr().out)
        assert doc.dimension == 5
        assert len(doc.basis) == 5
        assert len(doc.reduction_probe) == 5

    def test_fundamental_class(self, capsys):
        rc = main(["ring", "-g", "1", "-n", "1", "-r", "0"])
        assert rc == 0
        doc = parse_ring_table(capsys.readouterr().out)
        assert doc.dimension == 1
        s = doc.basis[0]
        assert s.graph.n_edges == 0 and s.kappa == ((),) and s.psi == ()

    def test_genus5_divisors(self, capsys):
        rc = main(["ring", "-g", "5", "-n", "0", "-r", "1"])
        assert rc == 0
        doc = parse_ring_table(capsys.readouterr().out)
        assert doc.dimension == 4
        assert len(doc.basis) == 4

    def test_symmetrized_sector(self, tmp_path, capsys):
        out = tmp_path / "ring.txt"
        rc = main(
            ["ring", "-g", "0", "-n", "5", "-r", "1", "--lambda", "5", "--out", str(out)]
        )
        assert rc == 0
        doc = parse_ring_table(out.read_text())
        assert doc.symmetry == "lambda=5"
        assert doc.dimension == 1

    def test_unsupported_space(self, capsys):
        assert main(["ring", "-g", "6", "-n", "2", "-r", "1"]) == 3

    def test_pairing_signal_exit(self, monkeypatch, capsys):
        def broken(*a, **k):
            raise UnsupportedRingModel("pairing rank 9 exceeds the known dimension 5")

        monkeypatch.setattr("wss.cli.basis", broken)
        assert main(["ring", "-g", "0", "-n", "5", "-r", "1"]) == 4
        assert "internal inconsistency" in capsys.readouterr().err
