import copy
import json
from pathlib import Path

import pytest

from relmon.kan import lan_object
from relmon.specfile import SpecError, check_spec, load_spec

SPECS = Path(__file__).resolve().parent.parent / "specs"
BASE = {
    "schema": "relmon/1",
    "category": {"subuniverse": {"sizes": [0, 1, 2]}},
    "functors": {"J": {"inclusion": {}}, "F": {"endo": {"poly": [[1, 0], [1, 2]]}, "after": "J"}},
}


def test_bundled_specs_load_and_pass():
    for path in sorted(SPECS.glob("*.json")):
        spec = load_spec(path)
        assert check_spec(spec).ok, path.name


def test_functor_built_from_endo():
    spec = load_spec(copy.deepcopy(BASE))
    F = spec.functors["F"]
    assert [F.obj[x].size for x in spec.category.objects] == [1, 2, 5]
    assert lan_object(spec.functors["J"], F, 2).size == 5


@pytest.mark.parametrize(
    "mutate, pointer",
    [
        (lambda d: d.update(extra=1), "/"),
        (lambda d: d.update(schema="relmon/2"), "/schema"),
        (lambda d: d["functors"]["F"].update(after="G"), "/functors/F/after"),
        (lambda d: d["functors"].update(G={"endo": {"plus": 1}, "after": "G"}), "/functors/G/after"),
        (lambda d: d["category"]["subuniverse"].update(sizes=[1, "a"]), "/category/subuniverse/sizes/1"),
        (lambda d: d.update(relmon={"along": "K", "monad": "maybe"}), "/relmon/along"),
    ],
)
def test_errors_carry_json_pointers(mutate, pointer):
    doc = copy.deepcopy(BASE)
    mutate(doc)
    with pytest.raises(SpecError) as e:
        load_spec(doc)
    assert e.value.pointer == pointer


def test_table_functor_out_of_range():
    doc = json.loads((SPECS / "two_object_poset.json").read_text())
    doc["functors"]["F"]["table"]["arrows"][1]["maps"] = [[0, 5]]
    with pytest.raises(SpecError) as e:
        load_spec(doc)
    assert e.value.pointer == "/functors/F/table/arrows/1/maps"


def test_non_functorial_table_fails_law_check():
    doc = json.loads((SPECS / "two_object_poset.json").read_text())
    doc["functors"]["J"]["table"]["arrows"][2]["maps"] = [[1, 0]]
    spec = load_spec(doc)
    assert not check_spec(spec).ok


def test_explicit_relmon_payload():
    # the trivial relative monad on fin_skeleton(1) written out: T = J, η = id, k* = k
    doc = {
        "schema": "relmon/1",
        "category": {"subuniverse": {"sizes": [0, 1]}},
        "functors": {"J": {"inclusion": {}}},
        "relmon": {
            "along": "J",
            "T": {"0": 0, "1": 1},
            "unit": {"0": [], "1": [0]},
            "star": [
                {"src": "0", "tgt": "0", "tables": [[]]},
                {"src": "0", "tgt": "1", "tables": [[]]},
                {"src": "1", "tgt": "0", "tables": []},
                {"src": "1", "tgt": "1", "tables": [[0]]},
            ],
        },
    }
    spec = load_spec(doc)
    assert check_spec(spec).ok
    doc["relmon"]["unit"]["1"] = [1]
    with pytest.raises(SpecError):
        load_spec(doc)


def test_explicit_arrow_payload():
    from relmon.arrows import function_arrow

    spec = load_spec({"schema": "relmon/1", "category": {"subuniverse": {"sizes": [0, 1]}}, "arrow": {"builtin": "function"}})
    a = function_arrow(spec.category)
    doc = {
        "schema": "relmon/1",
        "category": {"subuniverse": {"sizes": [0, 1]}},
        "arrow": {
            "R": [{"src": str(x), "tgt": str(y), "size": a.R[(x, y)]} for x, y in spec.category.pairs()],
            "pure": [{"src": str(x), "tgt": str(y), "table": a.pure[(x, y)].tolist()} for x, y in spec.category.pairs()],
            "comp": [
                {"src": str(x), "mid": str(y), "tgt": str(z), "table": a.comp[(x, y, z)].tolist()}
                for (x, y, z) in a.comp
            ],
        },
    }
    assert check_spec(load_spec(doc)).ok
