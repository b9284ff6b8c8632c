import pytest

from siltingkit.verify import SECTIONS, run


def test_all_sections_pass_for_n4():
    checks = run(4)
    assert {c.section for c in checks} == set(SECTIONS)
    assert all(c.passed for c in checks), [c.to_dict() for c in checks if not c.passed]


@pytest.mark.parametrize("n", [2, 3, 5, 6])
def test_other_n(n):
    checks = run(n, ("algebra", "spherical", "hom-window", "homology", "serre"))
    assert all(c.passed for c in checks)


def test_guards():
    with pytest.raises(ValueError):
        run(7)
    with pytest.raises(ValueError):
        run(4, ("bogus",))
    notes = {c.note for c in run(2, ("homology",))}
    assert any("out of range" in note for note in notes)
