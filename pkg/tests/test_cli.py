from char2forms.cli import main


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


IDENT_GF2 = """\
field: gf2
gram:
1 0 0 0
0 1 0 0
0 0 1 0
0 0 0 1
"""

H1_F2T = """\
field: ratfunc(gf2,t)
gram:
t 0 0 0
0 1 0 0
0 0 1 0
0 0 0 1
"""

H2_F2T = """\
field: ratfunc(gf2,t)
gram:
t 0 0 0
0 t 0 0
0 0 1 0
0 0 0 1
"""

DEFECT0 = """\
field: ratfunc(ratfunc(gf2,t),u)
gram:
1 0 0 0
0 t 0 0
0 0 u 0
0 0 0 tu
"""

SWAP_GF2 = """\
field: gf2
matrix:
0 1
1 0
"""

GOLDEN_ANALYZE_IDENT = """\
command: analyze
field: gf2
dimension: 4
alternating: no
degenerate: no
orthogonal basis columns:
  1 0 0 0
  0 1 0 0
  0 0 1 0
  0 0 0 1
diagonal: 1 1 1 1
range dimension: 1
defect: 3
kernel of q (rows):
  1 1 0 0
  1 0 1 0
  1 0 0 1
discriminant: 1 (square)
volume scale: 1
delta: 1
K algebra: split (local ring with nilpotents)
g gram over K, basis (1,2) (1,3) (1,4):
  1 0 0
  0 1 0
  0 0 1
"""

GOLDEN_DECOMPOSE_SWAP = """\
command: decompose
ring: gf2
input:
  0 1
  1 0
word: U(1) L(1) U(1)
product:
  0 1
  1 0
check word reproduces input: PASS
"""


def test_analyze_golden(tmp_path, capsys):
    path = _write(tmp_path, "ident.txt", IDENT_GF2)
    assert main(["analyze", path]) == 0
    assert capsys.readouterr().out == GOLDEN_ANALYZE_IDENT


def test_decompose_golden(tmp_path, capsys):
    path = _write(tmp_path, "swap.txt", SWAP_GF2)
    assert main(["decompose", path]) == 0
    assert capsys.readouterr().out == GOLDEN_DECOMPOSE_SWAP


def test_output_deterministic(tmp_path, capsys):
    path = _write(tmp_path, "h1.txt", H1_F2T)
    assert main(["analyze", path]) == 0
    first = capsys.readouterr().out
    assert main(["analyze", path]) == 0
    assert capsys.readouterr().out == first
    assert "defect: 2" in first
    assert "delta: t" in first
    assert "non-split" in first


def test_machine_mode(tmp_path, capsys):
    path = _write(tmp_path, "ident.txt", IDENT_GF2)
    assert main(["analyze", path, "--machine"]) == 0
    out = capsys.readouterr().out
    assert "defect=3" in out
    assert "delta=1" in out
    for line in out.strip().splitlines():
        assert "=" in line


def test_classify_gf2(tmp_path, capsys):
    path = _write(tmp_path, "ident.txt", IDENT_GF2)
    assert main(["classify", path]) == 0
    out = capsys.readouterr().out
    assert "case: defect3" in out
    assert "predicted order: 48" in out
    assert "generated order: 48" in out
    assert "oracle order (full_gl_scan): 48" in out
    assert "check oracle agrees with generated group: PASS" in out


def test_classify_h2(tmp_path, capsys):
    path = _write(tmp_path, "h2.txt", H2_F2T)
    assert main(["classify", path]) == 0
    out = capsys.readouterr().out
    assert "case: defect2_split" in out
    assert "(F^3, +)" in out


def test_classify_defect0(tmp_path, capsys):
    path = _write(tmp_path, "d0.txt", DEFECT0)
    assert main(["classify", path]) == 0
    out = capsys.readouterr().out
    assert "case: defect0" in out
    assert "trivial" in out
    assert "sharply transitive" in out


DEFECT1 = """\
field: ratfunc(ratfunc(gf2,t),u)
gram:
0 1 0 0
1 1 0 0
0 0 t 0
0 0 0 u
"""


def test_classify_defect1(tmp_path, capsys):
    path = _write(tmp_path, "d1.txt", DEFECT1)
    assert main(["classify", path]) == 0
    out = capsys.readouterr().out
    assert "case: defect1" in out
    assert "(F, +)" in out


def test_verify_passes(tmp_path, capsys):
    for doc in (IDENT_GF2, H1_F2T):
        path = _write(tmp_path, "form.txt", doc)
        assert main(["verify", path]) == 0
        out = capsys.readouterr().out
        assert "result: all checks passed" in out
        assert "FAIL" not in out


def test_verify_gf4_random_diagonal(tmp_path, capsys):
    doc = """\
field: gf2k:2:7
gram:
g 0 0 0
0 1 0 0
0 0 g+1 0
0 0 0 g
"""
    path = _write(tmp_path, "gf4.txt", doc)
    assert main(["verify", path]) == 0
    out = capsys.readouterr().out
    assert "result: all checks passed" in out


def test_verify_corrupted_j_fails(tmp_path, capsys):
    path = _write(tmp_path, "ident.txt", IDENT_GF2)
    assert main(["verify", path, "--corrupt-j"]) == 1
    out = capsys.readouterr().out
    assert "check J^2 = delta*id: FAIL" in out
    assert "check(s) failed" in out


def test_volume_scale_flag(tmp_path, capsys):
    path = _write(tmp_path, "h2.txt", H2_F2T)
    assert main(["analyze", path, "--volume-scale", "t"]) == 0
    out = capsys.readouterr().out
    assert "volume scale: t" in out
    assert "delta: 1" in out  # det = t^2 over b^2 = t^2


def test_parse_error_exit_2(tmp_path, capsys):
    doc = "field: ratfunc(gf2,t)\ngram:\nt^ 1\n1 0\n"
    path = _write(tmp_path, "bad.txt", doc)
    assert main(["analyze", path]) == 2
    err = capsys.readouterr().err
    assert "bad.txt:3" in err


def test_unknown_variable_exit_2(tmp_path, capsys):
    doc = "field: gf2\ngram:\nx 0\n0 1\n"
    path = _write(tmp_path, "bad.txt", doc)
    assert main(["analyze", path]) == 2


def test_decompose_rejects_det_not_one(tmp_path, capsys):
    doc = "field: gf2\nmatrix:\n1 1\n1 1\n"
    path = _write(tmp_path, "sing.txt", doc)
    assert main(["decompose", path]) == 2
    err = capsys.readouterr().err
    assert "determinant" in err


def test_decompose_over_split_k(tmp_path, capsys):
    # [[1+z, z], [z, 1+z]] with z = 1+j over the split algebra: 1+z = j
    doc = """\
field: gf2
ring: k(1)
matrix:
j 1+j
1+j j
"""
    path = _write(tmp_path, "kmat.txt", doc)
    assert main(["decompose", path]) == 0
    out = capsys.readouterr().out
    assert "check word reproduces input: PASS" in out
    assert out.startswith("command: decompose\nring: k(1) over gf2")
    # the (1,1) entry j is invertible, so the four-letter branch fires
    assert out.count("L(") + out.count("U(") == 4


def test_missing_file_exit_2(capsys):
    assert main(["analyze", "/nonexistent/nope.txt"]) == 2


def test_asymmetric_gram_rejected(tmp_path, capsys):
    doc = "field: gf2\ngram:\n1 1\n0 1\n"
    path = _write(tmp_path, "asym.txt", doc)
    assert main(["analyze", path]) == 2


def test_alternating_gram_rejected(tmp_path, capsys):
    doc = "field: gf2\ngram:\n0 1\n1 0\n"
    path = _write(tmp_path, "alt.txt", doc)
    assert main(["analyze", path]) == 2
    err = capsys.readouterr().err
    assert "alternating" in err
