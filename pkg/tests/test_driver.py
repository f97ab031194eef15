import json

import pytest

from vassiliev_ubr.driver import (
    TorsionVerdict,
    UbrConfig,
    census_row,
    output_upper,
    rho_bar,
    torsion_probe,
    write_report,
)
from vassiliev_ubr.linalg import load, rank_nullity
from vassiliev_ubr.series import KNOWN_PRIMITIVES


def test_config_validation():
    with pytest.raises(ValueError):
        UbrConfig("C", 5)
    with pytest.raises(ValueError):
        UbrConfig("B", 2)
    with pytest.raises(ValueError):
        UbrConfig("A", 5, characteristic=4)
    with pytest.raises(ValueError):
        UbrConfig("A", 5, block_width=0)
    assert UbrConfig("a", 5).algorithm == "A"


@pytest.mark.parametrize("alg,lo", [("A", 2), ("B", 3)])
def test_small_outputs_equal_primitive_ranks(alg, lo):
    for m in range(lo, 8):
        for p in (2, 3):
            assert output_upper(UbrConfig(alg, m, p)).output == KNOWN_PRIMITIVES[m]


@pytest.mark.parametrize("alg", ["A", "B"])
@pytest.mark.parametrize("m", [5, 6, 7])
def test_block_width_does_not_change_the_matrix(alg, m):
    ref, _, _ = rho_bar(alg, m, 2, None)
    for w in (8, 32, 64):
        mat, _, blocks = rho_bar(alg, m, 2, w)
        assert mat == ref
        assert blocks == max(1, -(-mat.cols // w))
        assert output_upper(UbrConfig(alg, m, 2, w)).output == KNOWN_PRIMITIVES[m]


def test_block_width_over_f3():
    ref, _, _ = rho_bar("B", 7, 3, None)
    mat, _, _ = rho_bar("B", 7, 3, 8)
    assert mat == ref


def test_report_and_export(tmp_path):
    path = tmp_path / "b6.ubrm"
    rep = output_upper(UbrConfig("B", 6, export=str(path)))
    assert (rep.universe, rep.irreducible, rep.output) == (870, 10, 5)
    assert rep.rank + rep.output == rep.irreducible
    back = load(path)
    assert rank_nullity(back) == (rep.rank, rep.output)
    out = tmp_path / "r.json"
    write_report(rep, str(out))
    doc = json.loads(out.read_text())
    assert doc["output"] == 5 and doc["moves"] == rep.moves


def test_census_row():
    assert census_row("a", 5) == {"algorithm": "A", "degree": 5, "universe": 24, "irreducible": 5}


def test_torsion_probe():
    (v2, v3) = torsion_probe("B", 6, primes=(2, 3))
    assert v2.torsion_free and v3.torsion_free
    assert v2.as_dict()["verdict"] == "no p-torsion"
    assert not TorsionVerdict(6, 2, 6, 5).torsion_free
    assert TorsionVerdict(6, 2, 6, 5).as_dict()["verdict"] == "inconclusive"
    with pytest.raises(ValueError):
        torsion_probe("A", 13)
