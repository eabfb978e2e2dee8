import json


from spreadrank import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_decode(capsys):
    code, out, _ = run(capsys, "decode", "33825", "--q", "2", "--n", "4")
    assert code == 0
    assert out.splitlines()[0] == "1 0 0 0"


def test_encode(capsys):
    code, out, _ = run(capsys, "encode", "0100", "0010", "0001", "1100", "--q", "2")
    assert code == 0
    assert out.strip() == "14402"


def test_atlas_list(capsys):
    code, out, _ = run(capsys, "atlas", "list")
    assert code == 0
    assert "F16" in out and "GTF81" in out


def test_atlas_selfcheck(capsys):
    code, out, _ = run(capsys, "atlas", "selfcheck")
    assert code == 0
    assert "FAIL" not in out


def test_atlas_export_and_verify(capsys, tmp_path):
    spread = tmp_path / "f16.txt"
    decomp = tmp_path / "f16_decomp.txt"
    code, _, _ = run(
        capsys, "atlas", "export", "F16",
        "--output", str(spread), "--decomp-output", str(decomp),
    )
    assert code == 0
    code, out, _ = run(
        capsys, "verify", "--spreadset", str(spread), "--decomp", str(decomp),
        "--json",
    )
    assert code == 0
    assert json.loads(out)["verified"] is True


def test_verify_refuted_exit_code(capsys, tmp_path):
    spread = tmp_path / "f16.txt"
    run(capsys, "atlas", "export", "F16", "--output", str(spread))
    bad = tmp_path / "bad.txt"
    bad.write_text("2 4 2\n85\n8738\n")  # too few matrices to span
    code, out, _ = run(
        capsys, "verify", "--spreadset", str(spread), "--decomp", str(bad)
    )
    assert code == 1


def test_rank_small_field(capsys, tmp_path):
    spread = tmp_path / "f4.txt"
    spread.write_text("2 2\n9\n14\n")  # identity and companion of x^2+x+1
    code, out, _ = run(capsys, "rank", "--spreadset", str(spread))
    assert code == 0
    assert out.strip() == "3"


def test_codes_published(capsys):
    code, out, _ = run(capsys, "codes", "--g1-paper", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["G1"]["weight_distribution"] == [1, 0, 0, 0, 6, 24, 24, 12, 12, 2]
    assert data["G1"]["min_distance"] == 4
    assert data["G1~G2"] is True
    assert data["G1~G3"] is False


def test_equiv_atlas_pair(capsys):
    code, out, _ = run(capsys, "equiv", "--atlas", "F16", "S1")
    assert code == 1
    assert json.loads(out) == {"equivalent": False}
    code, out, _ = run(capsys, "equiv", "--atlas", "GTF81", "IX")
    assert code == 0
    assert json.loads(out)["equivalent"] is True


def test_disprove_small(capsys, tmp_path):
    spread = tmp_path / "f4.txt"
    spread.write_text("2 2\n9\n14\n")
    code, out, _ = run(capsys, "disprove", "--spreadset", str(spread),
                       "--rank", "3", "--json")
    assert code == 1  # witness found: rank 3 not disproved
    data = json.loads(out)
    assert data["outcome"] == "witness"


def test_search_small(capsys):
    code, out, _ = run(capsys, "search", "--q", "2", "--n", "2", "--max", "3",
                       "--json")
    assert code == 0
    data = json.loads(out)
    assert data["spread_set_classes"] == 1


def test_knuth_cli(capsys, tmp_path):
    spread = tmp_path / "f4.txt"
    spread.write_text("2 2\n9\n14\n")
    code, out, _ = run(capsys, "knuth", "--spreadset", str(spread))
    assert code == 0
    assert json.loads(out)["orbit_size"] == 1


def test_unknown_atlas_entry_usage_error(capsys):
    code, _, err = run(capsys, "rank", "--atlas", "NOPE")
    assert code == 2
    assert "error" in err


def test_bad_subcommand_exit_2(capsys):
    assert cli.main(["frobnicate"]) == 2
