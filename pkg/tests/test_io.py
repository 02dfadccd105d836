import json

import numpy as np

from bellscope import io
from bellscope.classify import classify_face
from bellscope.correlations import Behavior, random_ns_behavior, white_noise
from bellscope.geometry import Face
from bellscope.hardy import hardy_config, hardy_max_point
from bellscope.quantum import QutritConfig, behavior_from_qutrit


def test_behavior_round_trip(tmp_path, rng):
    for beh in (random_ns_behavior(rng), white_noise(3, 3), hardy_max_point()):
        io.write_behavior(beh, tmp_path / "b.json")
        back = io.read_behavior(tmp_path / "b.json")
        assert np.array_equal(back.p, beh.p)


def test_keyed_behavior_needs_every_entry():
    data = io.behavior_to_json(white_noise(3, 3))
    data["p"].pop("0,0|0,0")
    try:
        io.behavior_from_json(data)
    except ValueError:
        pass
    else:
        raise AssertionError("missing entry accepted")


def test_witness_round_trip(tmp_path, rng):
    face = Face({3, 6, 7})
    cfg = hardy_config()
    io.write_witness(tmp_path / "w.json", face, cfg, 0.18, hardy_max_point(), "hardy")
    data = io.read_witness(tmp_path / "w.json")
    assert data["mask"] == face.mask and data["zeroed"] == [3, 6, 7]
    assert np.array_equal(data["config"].state, cfg.state)
    assert np.array_equal(data["config"].axes, cfg.axes)
    assert np.array_equal(data["behavior"].p, hardy_max_point().p)
    dirs = rng.normal(size=(6, 3)) + 1j * rng.normal(size=(6, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    psi = rng.normal(size=9) + 1j * rng.normal(size=9)
    tcfg = QutritConfig(psi / np.linalg.norm(psi), dirs)
    io.write_witness(tmp_path / "t.json", face, tcfg, 0.2, behavior_from_qutrit(tcfg), "search")
    back = io.read_witness(tmp_path / "t.json")
    assert np.array_equal(back["config"].directions, tcfg.directions)
    assert isinstance(back["behavior"], Behavior)


def test_face_tables_round_trip(tmp_path):
    table = [classify_face(Face({6, 8})), classify_face(Face({3, 6, 7}))]
    io.write_faces_csv(table, tmp_path / "f.csv")
    io.write_faces_json(table, tmp_path / "f.json")
    rows_csv = io.read_faces_csv(tmp_path / "f.csv")
    rows_json = io.read_faces_json(tmp_path / "f.json")
    assert rows_csv == rows_json
    assert rows_csv[0] == {"mask": 160, "dim": 6, "verdict": "QuantumVoid",
                           "evidence_kind": "edge", "evidence_detail": "6-8"}


def test_summary_round_trip(tmp_path):
    counts = {0: (1, 1), 7: (8, 0)}
    io.write_summary(counts, tmp_path / "s.json")
    assert io.read_summary(tmp_path / "s.json") == counts
    assert json.loads((tmp_path / "s.json").read_text())["total_faces"] == 9


def test_float_tables_round_trip_exactly(tmp_path, rng):
    rows = [(5, "ml", float(v), bool(v < 0.5)) for v in rng.random(10)]
    io.write_principles_csv(rows, tmp_path / "p.csv")
    assert io.read_principles_csv(tmp_path / "p.csv") == rows
    pairs = [tuple(r) for r in rng.random((10, 3))]
    io.write_pairs_csv(pairs, tmp_path / "q.csv", ("a", "b", "c"))
    assert io.read_pairs_csv(tmp_path / "q.csv") == pairs


def test_entry_label():
    assert io.entry_label(9) == "p(0,0|0,0)"
