# tests/test_instance.py
import pytest

from conftest import INSTANCES
from instance import list_instances, load_ideal_instance
from poly import PolySyntaxError, parse_poly


def _write(tmp_path, text, name="case.txt"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_corpus_loads():
    paths = list_instances(INSTANCES)
    assert [p.stem for p in paths] == sorted(p.stem for p in paths)
    assert len(paths) >= 7
    for path in paths:
        inst = load_ideal_instance(path)
        assert inst.generators
        assert all(g.ring.ngens == inst.nvars for g in inst.generators)


def test_cusp_instance():
    inst = load_ideal_instance(INSTANCES / "cusp_pair.txt")
    assert inst.name == "cusp_pair"
    assert inst.variables == ("z", "w")
    assert inst.generator_texts == ("z^2 - w^3", "w^2 - z^3")
    assert inst.generators[0] == parse_poly("z^2 - w^3", 2)


def test_three_variable_instance():
    inst = load_ideal_instance(INSTANCES / "three_vars.txt")
    assert inst.nvars == 3
    assert inst.variables == ("z1", "z2", "z3")


def test_name_defaults_to_stem_and_comments_are_ignored(tmp_path):
    path = _write(tmp_path, "# a comment\nvars : a, b\nIDEAL_SECTION\na^2 # trailing\nb^2\nEOF\n", "squares.txt")
    inst = load_ideal_instance(path)
    assert inst.name == "squares"
    assert inst.variables == ("a", "b")
    assert inst.generator_texts == ("a^2", "b^2")
    assert inst.generators[1] == parse_poly("w^2", 2)


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError, match="Instance not found"):
        load_ideal_instance(tmp_path / "nope.txt")


@pytest.mark.parametrize("text,message", [
    ("NAME : x\nIDEAL_SECTION\nz\nEOF\n", "Failed to parse VARS"),
    ("VARS : z\nz^2\nEOF\n", "No IDEAL_SECTION"),
    ("VARS : z\nIDEAL_SECTION\nEOF\n", "Empty IDEAL_SECTION"),
])
def test_malformed_headers(tmp_path, text, message):
    with pytest.raises(RuntimeError, match=message):
        load_ideal_instance(_write(tmp_path, text))


def test_bad_generator_reports_file_position(tmp_path):
    path = _write(tmp_path, "NAME : bad\nVARS : z, w\nIDEAL_SECTION\nz^2\nw^\nEOF\n", "bad.txt")
    with pytest.raises(PolySyntaxError) as exc:
        load_ideal_instance(path)
    assert "bad.txt line 5, column 3" in str(exc.value)
