import threading

from shinglesync import interior_qgrams
from shinglesync.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


class TestCheck:
    def test_katana(self, capsys):
        code, out = run_cli(capsys, "check", "katana")
        assert code == 1
        assert out == "NOT-UD cycle-intrusion at index 6\n"

    def test_axbxa(self, capsys):
        code, out = run_cli(capsys, "check", "axbxa")
        assert code == 0
        assert out == "UD\n"

    def test_axbxbax(self, capsys):
        code, out = run_cli(capsys, "check", "axbxbax")
        assert code == 1
        assert out == "NOT-UD communicating-parents at index 7\n"

    def test_q3(self, capsys):
        code, out = run_cli(capsys, "check", "katana", "--q", "3")
        assert code == 0 and out == "UD\n"

    def test_explicit_alphabet_rejects_foreign_symbols(self, capsys):
        code = main(["check", "xyz", "--alphabet", "ab"])
        capsys.readouterr()
        assert code == 2

    def test_at_file_input(self, capsys, tmp_path):
        path = tmp_path / "word.bin"
        path.write_bytes(b"katana")
        code, out = run_cli(capsys, "check", f"@{path}")
        assert code == 1 and "cycle-intrusion" in out


class TestShingle:
    def test_katana_golden(self, capsys):
        code, out = run_cli(capsys, "shingle", "katana", "--l", "2")
        assert code == 0
        assert out == "1\t$k\n1\ta$\n1\tan\n1\tat\n1\tka\n1\tna\n1\tta\n"
        assert len(out.splitlines()) == 7


class TestDecode:
    def test_unique_multiset(self, capsys, tmp_path):
        path = tmp_path / "ms.txt"
        path.write_text("1\t$k\n1\ta$\n1\tat\n1\tka\n1\ttana\n", encoding="utf-8")
        code, out = run_cli(capsys, "decode", str(path), "--l", "2")
        assert code == 0 and out == "katana\n"

    def test_ambiguous_multiset(self, capsys, tmp_path):
        path = tmp_path / "ms.txt"
        path.write_text("1\t$k\n1\ta$\n1\tan\n1\tat\n1\tka\n1\tna\n1\tta\n", encoding="utf-8")
        code, out = run_cli(capsys, "decode", str(path))
        assert code == 1
        assert out == "AMBIGUOUS count=2+ witnesses: kanata katana\n"

    def test_inconsistent_multiset(self, capsys, tmp_path):
        path = tmp_path / "ms.txt"
        path.write_text("1\t$a\n1\tb$\n", encoding="utf-8")
        code, out = run_cli(capsys, "decode", str(path))
        assert code == 2 and out.startswith("INCONSISTENT")

    def test_count_cap(self, capsys, tmp_path):
        path = tmp_path / "ms.txt"
        path.write_text("1\t$k\n1\ta$\n1\tan\n1\tat\n1\tka\n1\tna\n1\tta\n", encoding="utf-8")
        code, out = run_cli(capsys, "decode", str(path), "--count-cap", "5")
        assert code == 1
        assert out == "AMBIGUOUS count=2 witnesses: kanata katana\n"


class TestObstruct:
    def test_katana(self, capsys):
        code, out = run_cli(capsys, "obstruct", "katana")
        assert code == 1
        assert out.startswith("OBSTRUCTION x=")

    def test_axbxa(self, capsys):
        code, out = run_cli(capsys, "obstruct", "axbxa")
        assert code == 0 and out == "NO-OBSTRUCTION\n"


class TestGen:
    def test_deterministic_pair(self, capsys):
        _, out1 = run_cli(capsys, "gen", "pevzner", "--kind", "rotate", "--seed", "7")
        _, out2 = run_cli(capsys, "gen", "pevzner", "--kind", "rotate", "--seed", "7")
        assert out1 == out2
        x, xp = out1.splitlines()
        assert interior_qgrams(x, 2) == interior_qgrams(xp, 2)

    def test_transpose_pair_multisets_match(self, capsys):
        for seed in range(5):
            _, out = run_cli(capsys, "gen", "pevzner", "--kind", "transpose", "--seed", str(seed))
            x, xp = out.splitlines()
            assert interior_qgrams(x, 2) == interior_qgrams(xp, 2)


class TestBench:
    def test_small_run_reports_table(self, capsys):
        code, out = run_cli(capsys, "bench", "ud", "--n", "4000", "--sigma", "4", "--trials", "2")
        assert code == 0
        lines = out.splitlines()
        assert lines[0].startswith("n=4000") and lines[1].startswith("n=8000")
        assert lines[2].startswith("ratio=")


class TestReconcile:
    def test_socket_session(self, capsys, tmp_path):
        (tmp_path / "a.txt").write_bytes(b"katana")
        (tmp_path / "b.txt").write_bytes(b"katna")
        out_a = tmp_path / "got_a.txt"
        out_b = tmp_path / "got_b.txt"
        from shinglesync.transport import Listener

        listener = Listener("127.0.0.1", 0)
        addr = f"127.0.0.1:{listener.port}"
        listener.close()

        results = {}

        def serve():
            results["serve"] = main(
                ["reconcile", "serve", addr, "--input", f"@{tmp_path}/a.txt",
                 "--l", "2", "--mode", "fixed:16", "--output", str(out_b)]
            )

        thread = threading.Thread(target=serve)
        thread.start()
        import time

        time.sleep(0.3)
        code = main(
            ["reconcile", "connect", addr, "--input", f"@{tmp_path}/b.txt",
             "--l", "2", "--mode", "fixed:16", "--output", str(out_a)]
        )
        thread.join(timeout=30)
        capsys.readouterr()
        assert code == 0 and results["serve"] == 0
        assert out_a.read_bytes() == b"katana"
        assert out_b.read_bytes() == b"katna"
