import json
import math

import pytest

wqed = pytest.importorskip("wqed")


def test_dicke_superradiant_mode():
    vals, _ = wqed.eigenmodes(wqed.AtomChain.periodic(10, 0.0), wqed.Coupling(1.0))
    assert abs(vals[0] - (-10j)) < 1e-10


def test_dicke_resonant_transmission():
    r, t = wqed.dicke_rt(10, 0.0, wqed.Coupling(1.0, 0.1))
    assert abs(t) ** 2 == pytest.approx((0.1 / 10.1) ** 2, rel=1e-10)


def test_lossless_chain_conserves_flux():
    r, t = wqed.chain_rt(wqed.AtomChain([0.0, 0.7, 2.3]), wqed.Coupling(1.0), 0.4)
    assert abs(r) ** 2 + abs(t) ** 2 == pytest.approx(1.0, abs=1e-12)


def test_g2_fixed_points():
    assert wqed.g2_zero_resonant(1, 1.0, 0.3, "reflect") == 0.0
    assert wqed.g2_chain_chiral(1, 0.0) == pytest.approx(9.0)
    assert wqed.chiral_n_star(130.0) == pytest.approx(192.0, rel=0.01)


def test_lattice_rate():
    lamb, g2d = wqed.collective_params(0.3)
    assert g2d == pytest.approx(3.0 / (4.0 * math.pi * 0.09), rel=1e-9)


def test_protocols():
    _, p, f = wqed.run_ghz(4, "down")
    assert p == pytest.approx(0.5)
    assert f == pytest.approx(1.0)
    out = wqed.run_state_transfer(0.6, 0.8j)
    assert abs(abs(out[0]) ** 2 + abs(out[1]) ** 2 - 1.0) < 1e-12


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        wqed.g2_zero_resonant(0, 1.0, 0.0, "reflect")
    with pytest.raises(ValueError):
        wqed.run_config(json.dumps({"command": "modes", "params": {"n": -1, "phi": 0}}))


def test_run_config():
    text = wqed.run_config(json.dumps({"command": "modes", "params": {"n": 3, "phi": 0.0}}))
    assert text.startswith("# wqed ")
