import math
import pathlib

import numpy as np
import pytest

import pscurve as ps

DATA = pathlib.Path(__file__).resolve().parents[1] / "data"

HYPERBOLA = """n: 2
p: 1
interval: (-inf, inf)
x1 = cosh(t)
x2 = sinh(t)
"""


def boost(a):
    return np.array([[math.cosh(a), math.sinh(a)], [math.sinh(a), math.cosh(a)]])


def test_forms():
    sig = ps.Signature(3, 2)
    x = np.array([1, 2, 3], dtype=complex)
    assert ps.pseudo_form(x, x, sig) == -4
    assert np.allclose(ps.e_p_matrix(sig), np.diag([1, 1, -1]))
    h = ps.h_matrix(ps.Signature(2, 1))
    assert np.allclose(h, np.diag([1, 1j]))
    assert ps.membership_defect(boost(0.7), ps.Group("o", 2, 1)) < 1e-12


def test_parse_and_jet():
    x = ps.parse_path(HYPERBOLA)
    rows = x.jet(0.0, 2)
    assert np.allclose(rows[0], [1, 0])
    assert np.allclose(rows[1], [0, 1])
    assert np.allclose(rows[2], [1, 0])
    assert ps.parse_path(str(x)).components == x.components
    with pytest.raises(ps.ParseError):
        ps.load_path(str(DATA / "malformed.path"))


def test_invariants():
    x = ps.load_path(str(DATA / "hyperbola.path"))
    sig = ps.generator_signature(x, ps.Group("o", 2, 1), 0.4)
    assert np.allclose(sig, [1, -1])
    assert ps.signature_labels(ps.Group("so", 2, 1)) == ["g1", "det"]
    assert ps.is_strongly_regular(x, ps.default_grid(x.interval))["pass"]


def test_path_equivalence():
    x = ps.parse_path(HYPERBOLA)
    group = ps.Group("o", 2, 1)
    y = ps.apply(ps.GroupElement(boost(0.7)), x)
    v = ps.paths_equivalent(x, y, group)
    assert v and v.witness_valid
    assert np.allclose(v.witness.g, boost(0.7), atol=1e-10)

    reflected = ps.load_path(str(DATA / "hyperbola_reflected.path"))
    w = ps.paths_equivalent(x, reflected, ps.Group("so", 2, 1))
    assert not w
    assert any(f.identity == "det" for f in w.failures)


def test_sampling_is_deterministic():
    group = ps.Group("eso", 3, 1, "complex")
    a = ps.sample_group_element(group, 5)
    b = ps.sample_group_element(group, 5)
    assert np.array_equal(a.g, b.g)
    assert ps.membership_defect(a.g, group) < 1e-10
    e = a * a.inverse()
    assert np.allclose(e.g, np.eye(3)) and np.allclose(e.u, 0)


def test_arclength():
    x = ps.parse_path(HYPERBOLA)
    assert ps.speed(x, 1.3) == pytest.approx(1.0)
    typed = ps.classify_type(x)
    assert typed.type == ps.PathType.L4
    assert typed.a_I == 0.0
    assert ps.arc_param(x, typed, 1.5) == pytest.approx(1.5, rel=1e-12)
    assert ps.invert_param(x, typed, 0.7) == pytest.approx(0.7, rel=1e-12)
    unit = ps.load_path(str(DATA / "hyperbola_unit.path"))
    assert ps.classify_type(unit).B == pytest.approx(1.0, rel=1e-9)


def test_curves():
    x = ps.parse_path(HYPERBOLA)
    double = ps.load_path(str(DATA / "hyperbola_double.path"))
    group = ps.Group("o", 2, 1)
    assert not ps.paths_equivalent(x, double, group)
    v = ps.curves_equivalent(x, double, group)
    assert v.equivalent
    assert v.type_x == ps.PathType.L4

    phi = ps.random_reparam(x.interval, 3)
    assert ps.curves_equivalent(x, ps.compose(x, phi), group)


def test_cli():
    code, out, err = ps.run_cli(["validate", str(DATA / "hyperbola.path")])
    assert code == 0
    assert "strongly regular: yes; non-degenerate: yes" in out
    code, _, err = ps.run_cli(["validate", str(DATA / "malformed.path")])
    assert code == 1 and "line 3" in err
