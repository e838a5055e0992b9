import json

import numpy as np
import pytest

from gradedlie.coeff import CoeffRing
from gradedlie.fixtures import (
    FROZEN_LIE,
    artin_fixtures,
    commuting_pair_rep,
    heisenberg,
    lie_fixtures,
    load_frozen_lie,
    load_frozen_rep,
    one_generator_rep,
)
from gradedlie.io import (
    FormatError,
    artin_from_dict,
    artin_to_dict,
    deformation_from_dict,
    deformation_to_dict,
    dumps,
    lie_from_dict,
    lie_to_dict,
    load,
    load_lie,
    rep_deformation_from_dict,
    rep_deformation_to_dict,
    rep_from_dict,
    rep_to_dict,
    save,
)

F3 = CoeffRing(3)


@pytest.mark.parametrize("p", [2, 3])
def test_lie_round_trip(p):
    for name, L in lie_fixtures(CoeffRing(p)).items():
        back = lie_from_dict(json.loads(dumps(lie_to_dict(L))))
        assert back.labels == L.labels and list(back.degrees) == list(L.degrees), name
        assert (back.structure_tensor == L.structure_tensor).all(), name


def test_lie_round_trip_over_z9():
    L = heisenberg(CoeffRing(3, 2))
    back = lie_from_dict(lie_to_dict(L))
    assert back.ring == L.ring and (back.structure_tensor == L.structure_tensor).all()


def test_artin_round_trip():
    for name, A in artin_fixtures(F3).items():
        back = artin_from_dict(artin_to_dict(A))
        assert back.labels == A.labels and (back.mult == A.mult).all(), name


def test_file_round_trip(tmp_path):
    L = heisenberg(F3)
    path = tmp_path / "heis.json"
    save(lie_to_dict(L), path)
    assert path.read_text(encoding="utf-8") == dumps(lie_to_dict(L))
    back = load_lie(path)
    assert back.name == "heis" and (back.structure_tensor == L.structure_tensor).all()


@pytest.mark.parametrize("name", FROZEN_LIE)
def test_frozen_deformations_round_trip(name):
    Lt, E = load_frozen_lie(name)
    doc = deformation_to_dict(Lt, E.total)
    Lt2, E2 = deformation_from_dict(json.loads(dumps(doc)))
    assert (Lt2.S == Lt.S).all()
    assert E2.total.labels == E.total.labels and (E2.total.mult == E.total.mult).all()


def test_rep_round_trips():
    for rho in (one_generator_rep(F3), commuting_pair_rep(F3)):
        back = rep_from_dict(rep_to_dict(rho))
        assert (back.matrix == rho.matrix).all()
    R, E = load_frozen_rep("obstructed_commuting_pair")
    R2, _ = rep_deformation_from_dict(rep_deformation_to_dict(R, E.total))
    assert (R2.images == R.images).all()


def _heis_doc():
    return lie_to_dict(heisenberg(F3))


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.pop("prime"),
        lambda d: d.pop("degrees"),
        lambda d: d["degrees"][0]["basis"].append("x"),
        lambda d: d["brackets"].append(["x", "q", [["z", 1]]]),
        lambda d: d["brackets"].append(["x", "z", [["y", 1]]]),  # wrong degree
        lambda d: d.__setitem__("brackets", [["x", "y", "z"]]),
    ],
)
def test_lie_format_errors(mutate):
    doc = _heis_doc()
    mutate(doc)
    with pytest.raises(FormatError):
        lie_from_dict(doc)


def test_artin_format_errors():
    doc = artin_to_dict(artin_fixtures(F3)["k[t]/t3"])
    doc["products"].append(["t", "t", [["1", 1]]])  # not local
    with pytest.raises(FormatError):
        artin_from_dict(doc)
    with pytest.raises(FormatError):
        artin_from_dict({"prime": 3, "basis": ["1", "t"], "products": [["t", "s", [["t", 1]]]]})


def test_deformation_format_errors():
    Lt, E = load_frozen_lie("liftable_heisenberg")
    doc = deformation_to_dict(Lt, E.total)
    bad = json.loads(dumps(doc))
    bad["brackets"] = [["x", "y", [["z", "1", 2]]]]  # does not reduce to the algebra
    with pytest.raises(FormatError):
        deformation_from_dict(bad)
    bad = json.loads(dumps(doc))
    bad["lift_base"]["basis"] = list(reversed(bad["lift_base"]["basis"]))
    with pytest.raises(FormatError):
        deformation_from_dict(bad)


def test_rep_format_errors():
    doc = rep_to_dict(one_generator_rep(F3))
    doc["images"]["s"] = [["z", 1]]  # degree 1 sent to degree 2
    with pytest.raises(FormatError):
        rep_from_dict(doc)
    doc = rep_to_dict(one_generator_rep(F3))
    doc["images"]["s"] = [["nope", 1]]
    with pytest.raises(FormatError):
        rep_from_dict(doc)


def test_invalid_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(FormatError):
        load(path)


def test_dumps_is_stable():
    a = dumps(lie_to_dict(heisenberg(F3)))
    b = dumps(lie_to_dict(heisenberg(F3)))
    assert a == b and a.endswith("\n")
    assert np.array_equal(lie_from_dict(json.loads(a)).structure_tensor, heisenberg(F3).structure_tensor)
