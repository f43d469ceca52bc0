import pytest

from pathgeom.specfile import SUITES, SpecError, expand_suites, load_spec, parse_spec

from conftest import FIXTURE_DIR

FRAMES = """\
[geometry]
mode = "frames"
n = 1
coords = ["t", "u", "v"]
E = ["1", "v", "0"]
V = [["0", "0", "1"]]

[scale]
scale = "1+t^2"
scale_change = "2"
"""


@pytest.mark.parametrize("name", ["flat", "quad", "lin", "sys5", "corrupted"])
def test_bundled_fixtures_load(name):
    spec = load_spec(FIXTURE_DIR / f"{name}.spec")
    assert spec.geometry().dim == 2 * spec.n + 1
    assert spec.source.endswith(f"{name}.spec")


def test_defaults():
    spec = parse_spec('[geometry]\nn = 1\nF = ["p^2"]\n')
    assert spec.mode == "ode"
    assert spec.scale == "1" and spec.scale_change == "1+x^2"
    assert spec.suites == SUITES
    assert not spec.expect_flat and spec.triples == 3


def test_flat_fixture_expects_flatness():
    assert load_spec(FIXTURE_DIR / "flat.spec").expect_flat


def test_frames_mode():
    spec = parse_spec(FRAMES)
    g = spec.geometry()
    assert g.chart.coords == ("t", "u", "v")
    assert spec.scale_obj().g == spec.expr("1+t^2")
    assert spec.gfac() == 2


def test_toml_syntax_error_has_line_and_column():
    with pytest.raises(SpecError) as info:
        parse_spec('[geometry]\nn = 1\nF = ["p^2"\n')
    assert info.value.line is not None and info.value.column is not None


def test_expression_error_located_in_file():
    text = '[geometry]\nn = 1\nF = ["p^2 + * x"]\n'
    with pytest.raises(SpecError) as info:
        parse_spec(text)
    err = info.value
    assert err.line == 3
    # column of the offending '*' in the file
    assert text.splitlines()[2][err.column - 1] == "*"


def test_unknown_identifier_in_frames_mode():
    with pytest.raises(SpecError) as info:
        parse_spec(FRAMES.replace('E = ["1", "v", "0"]', 'E = ["1", "w", "0"]'))
    assert info.value.line == 5
    assert "unknown identifier" in str(info.value)


@pytest.mark.parametrize(
    "text",
    [
        '[geometry]\nn = 2\nF = ["p1^2"]\n',
        '[geometry]\nmode = "frames"\nn = 1\ncoords = ["x", "y"]\nE = ["1", "0"]\nV = [["0", "1"]]\n',
        FRAMES.replace('V = [["0", "0", "1"]]', 'V = [["0", "1"]]'),
        FRAMES.replace('E = ["1", "v", "0"]', 'E = ["1", "v"]'),
    ],
)
def test_dimension_mismatch(text):
    with pytest.raises(SpecError):
        parse_spec(text)


@pytest.mark.parametrize("key", ["scale", "scale_change"])
def test_zero_scale_rejected(key):
    text = f'[geometry]\nn = 1\nF = ["0"]\n[scale]\n{key} = "x - x"\n'
    with pytest.raises(SpecError) as info:
        parse_spec(text)
    assert info.value.line == 5
    assert "nonzero" in str(info.value)


@pytest.mark.parametrize(
    "text",
    [
        '[geometry]\nn = 0\nF = []\n',
        '[geometry]\nmode = "pde"\nn = 1\n',
        '[geometry]\nn = 1\nF = ["0"]\nE = ["1", "p", "0"]\n',
        '[geometry]\nn = 1\nF = [3]\n',
        '[geometry]\nn = 1\nF = ["0"]\n[checks]\nsuites = ["nope"]\n',
        '[geometry]\nn = 1\nF = ["0"]\n[checks]\nexpect_flat = "yes"\n',
        '[geometry]\nn = 1\nF = ["0"]\n[extra]\na = 1\n',
        '[geometry]\nn = 1\nF = ["0"]\nfoo = 1\n',
        '[scale]\nscale = "1"\n',
        FRAMES.replace('coords = ["t", "u", "v"]', 'coords = ["t", "t", "v"]'),
    ],
)
def test_invalid_specs(text):
    with pytest.raises(SpecError):
        parse_spec(text)


def test_missing_file():
    with pytest.raises(OSError):
        load_spec(FIXTURE_DIR / "does-not-exist.spec")


def test_suite_expansion_keeps_declaration_order():
    assert expand_suites(["tractor", "validate"]) == ("validate", "tractor")
    assert expand_suites(["all"]) == SUITES
    with pytest.raises(ValueError):
        expand_suites(["weyl", "bogus"])
