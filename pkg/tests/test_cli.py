import io
import subprocess
import sys

import pytest

from cubepaths.cli import FormatError, main, read_decomposition, verify_file, write_decomposition
from cubepaths.decompose import decompose


def run(*argv):
    return main([str(a) for a in argv])


def test_check(capsys):
    assert run("check", "--m", 4, "--q", 5) == 0
    assert capsys.readouterr().out.startswith("yes")
    assert run("check", "--m", 5, "--q", 9) == 1
    assert "does not divide" in capsys.readouterr().out


def test_check_rejects_even_q():
    with pytest.raises(SystemExit) as exc:
        run("check", "--m", 2, "--q", 4)
    assert exc.value.code == 2


def test_round_trip(tmp_path, capsys):
    out = tmp_path / "d.hpd"
    assert run("decompose", "--m", 6, "--q", 9, "--out", out, "--verify") == 0
    text = out.read_text()
    assert text.startswith("HPD1 q=9 m=6 n=384\n")
    assert text.endswith("\n")
    assert len(text.splitlines()) == 385
    assert run("verify", out) == 0
    assert "ok" in capsys.readouterr().out

    with open(out) as fh:
        q, m, n, blocks = read_decomposition(fh)
        rows = sum(len(b) for b in blocks)
    assert (q, m, n, rows) == (9, 6, 384, 384)


def test_output_is_byte_identical(tmp_path):
    files = []
    for i in range(2):
        p = tmp_path / f"{i}.hpd"
        subprocess.run([sys.executable, "-m", "cubepaths", "decompose", "--m", "4", "--q", "9", "--out", str(p)],
                       check=True, capture_output=True)
        files.append(p.read_bytes())
    assert files[0] == files[1]


def test_stdout_matches_writer(capsys):
    assert run("decompose", "--m", 2, "--q", 3) == 0
    buf = io.StringIO()
    write_decomposition(decompose(2, 3), buf)
    assert capsys.readouterr().out == buf.getvalue()


def test_tampered_file_fails(tmp_path, capsys):
    out = tmp_path / "d.hpd"
    run("decompose", "--m", 3, "--q", 3, "--out", out)
    lines = out.read_text().splitlines(keepends=True)
    lines[1] = "0 1 3 6\n"
    out.write_text("".join(lines))
    capsys.readouterr()
    assert run("verify", out) == 1
    assert "NonPath" in capsys.readouterr().out


@pytest.mark.parametrize("body", [
    "HPD2 q=3 m=3 n=4\n",
    "HPD1 q=3 m=3 n=2\n0 1 3 7\n",
    "HPD1 q=3 m=3 n=1\n0 1 3 7",
    "HPD1 q=3 m=3 n=1\n0  1 3 7\n",
    "HPD1 q=3 m=3 n=1\n0 1 3 G\n",
    "HPD1 q=3 m=3 n=1\n 0 1 3 7\n",
])
def test_malformed_files(tmp_path, body, capsys):
    p = tmp_path / "bad.hpd"
    p.write_text(body)
    assert run("verify", p) == 1
    assert "malformed" in capsys.readouterr().out


def test_verify_file_raises_on_short_body():
    with pytest.raises(FormatError):
        verify_file(io.StringIO("HPD1 q=1 m=1 n=2\n0 1\n"))


def test_exit_codes(capsys):
    assert run("decompose", "--m", 5, "--q", 9) == 1
    assert run("dvop", "--r", 3, "--k", 5) == 2
    assert run("ham", "--r", 5) == 3
    assert run("--max-edges", 100, "decompose", "--m", 3, "--q", 9) == 3
    assert run("plan", "--m", 65536, "--q", 65537) == 0
    assert "PowerOfTwoBase" in capsys.readouterr().out


def test_ham_and_dvop_commands(capsys):
    assert run("ham", "--r", 2) == 0
    out = capsys.readouterr()
    assert out.out.count("# delta=") == 2
    assert "ok" in out.err
    assert run("dvop", "--r", 4, "--k", 7, "--show", 2) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("DVOP[7] on Q_16 (mid)") and len(lines) == 3


def test_oracle_command(capsys):
    assert run("oracle", "--q", 3, "--m", 2) == 0
    assert capsys.readouterr().out.startswith("witness: 6 paths")
    assert run("oracle", "--q", 3, "--m", 4) == 1
