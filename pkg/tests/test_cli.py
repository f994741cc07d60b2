import csv
import json
import math

import numpy as np

from chainspectra.asymptotics import band_edge_match, inband_pattern
from chainspectra.cli import main
from chainspectra.eigensolver import ChainConfig
from chainspectra.extensions import TwoLayerConfig, two_layer_spectrum
from chainspectra.modes import analyze
from chainspectra.semi_infinite import count_edge_states_semi


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_spectrum_fig2_out_of_band(tmp_path):
    assert main(["spectrum", "--n", "50", "--k1", "1", "--k2", "2.3",
                 "--k31", "1.3", "--k32", "4.6", "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "spectrum.csv")
    assert len(rows) == 100
    assert sum(r["in_band"] == "false" for r in rows) <= 2
    modes = read_csv(tmp_path / "modes.csv")
    assert len(modes) == 100 * 100
    # Mode values round-trip as doubles.
    u0 = [float(r["value"]) for r in modes if r["index"] == "0"]
    assert abs(np.linalg.norm(u0) - 1) <= 1e-12


def test_spectrum_rigid_mode(tmp_path):
    assert main(["spectrum", "--n", "2", "--k1", "1", "--k2", "1",
                 "--k31", "0", "--k32", "0", "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "spectrum.csv")
    assert min(abs(float(r["omega2"])) for r in rows) <= 1e-12


def test_spectrum_json_round_trip(tmp_path):
    assert main(["spectrum", "--n", "8", "--k1", "1", "--k2", "2.3",
                 "--k31", "1.3", "--k32", "3.5", "--format", "json",
                 "--out", str(tmp_path)]) == 0
    with open(tmp_path / "spectrum.json") as fh:
        data = json.load(fh)
    assert len(data) == 16
    again = json.loads(json.dumps(data))
    assert again == data
    # Parsed floats reproduce the library values exactly.
    spec = analyze(ChainConfig(n=8, k1=1, k2=2.3, k31=1.3, k32=3.5))
    for row, ma in zip(data, spec.modes):
        assert row["omega2"] == ma.omega2
        assert row["label"] == ma.label


def test_determinism(tmp_path):
    args = ["spectrum", "--n", "30", "--k1", "1", "--k2", "2.3",
            "--k31", "1.3", "--k32", "3.5"]
    for sub in ("a", "b"):
        assert main(args + ["--out", str(tmp_path / sub)]) == 0
    for name in ("spectrum.csv", "modes.csv"):
        assert (tmp_path / "a" / name).read_bytes() == \
            (tmp_path / "b" / name).read_bytes()


def test_phase_diagram_counts(tmp_path, monkeypatch):
    args = ["phase-diagram", "--n", "20", "--k1", "1",
            "--k2-start", "0.5", "--k2-stop", "3", "--k2-count", "3",
            "--k31-start", "0", "--k31-stop", "4", "--k31-count", "3",
            "--k32", "0.7"]
    monkeypatch.setenv("CHAINSPECTRA_THREADS", "4")
    assert main(args + ["--out", str(tmp_path / "par")]) == 0
    rows = read_csv(tmp_path / "par" / "phase.csv")
    assert len(rows) == 9
    for r in rows[:4]:
        k2, k31 = float(r["k2"]), float(r["k31"])
        assert int(r["count_semi"]) == count_edge_states_semi(1.0, k2, k31)
        cfg = ChainConfig(n=20, k1=1.0, k2=k2, k31=k31, k32=0.7)
        assert int(r["count_finite"]) == analyze(cfg).out_of_band_count
    # Worker count must not affect output bytes or ordering.
    monkeypatch.setenv("CHAINSPECTRA_THREADS", "1")
    assert main(args + ["--out", str(tmp_path / "seq")]) == 0
    assert (tmp_path / "par" / "phase.csv").read_bytes() == \
        (tmp_path / "seq" / "phase.csv").read_bytes()


def test_phase_diagram_single_point(tmp_path):
    assert main(["phase-diagram", "--n", "10", "--k1", "1",
                 "--k2-start", "2", "--k2-stop", "2", "--k2-count", "1",
                 "--k31-start", "1", "--k31-stop", "1", "--k31-count", "1",
                 "--k32", "0.5", "--out", str(tmp_path)]) == 0
    assert len(read_csv(tmp_path / "phase.csv")) == 1


def test_sweep_k32_left_branch_constant(tmp_path):
    # 2n = 50, k1 = 1, k2 = 1.3, k31 = 1.6: one out-of-band frequency
    # stays pinned near the semi-infinite left-root value while the
    # right branch sweeps with k32.
    assert main(["sweep-k32", "--n", "25", "--k1", "1", "--k2", "1.3",
                 "--k31", "1.6", "--k32-start", "0.2", "--k32-stop", "3.0",
                 "--k32-count", "8", "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "sweep_k32.csv")
    predicted = {float(r["predicted_left_omega2"]) for r in rows}
    assert len(predicted) == 1
    left = predicted.pop()
    by_k32 = {}
    for r in rows:
        if r["omega2"]:
            by_k32.setdefault(r["k32"], []).append(float(r["omega2"]))
    assert len(by_k32) == 8
    for values in by_k32.values():
        assert min(abs(v - left) for v in values) <= 1e-3


def test_band_edge_sweep(tmp_path):
    assert main(["band-edge", "--k1", "1", "--k2", "1.7", "--k31", "1.6",
                 "--a", "-1", "--sigma", "1",
                 "--n-start", "50", "--n-stop", "200", "--n-count", "4",
                 "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "band_edge.csv")
    assert len(rows) == 4
    for r in rows:
        ref = band_edge_match(1.0, 1.7, 1.6, int(r["n"]), -1, 1)
        assert float(r["k32"]) == ref.k32
        assert float(r["k32_asymptotic"]) == ref.k32_asymptotic
        # Exact and asymptotic values agree to the expected 1/n^2 order.
        assert abs(float(r["k32"]) - float(r["k32_asymptotic"])) <= \
            1.0 / int(r["n"]) ** 2


def test_inband_rows_match_module(tmp_path):
    assert main(["inband", "--n", "50", "--k1", "1", "--k2", "2.3",
                 "--k31", "1.3", "--k32", "3.5", "--band", "Optical",
                 "--edge", "Lower", "--k-max", "5",
                 "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "inband.csv")
    est = inband_pattern(ChainConfig(n=50, k1=1, k2=2.3, k31=1.3, k32=3.5),
                         "Optical", "Lower", 5)
    assert len(rows) == len(est.omega2)
    for i, r in enumerate(rows):
        assert r["pattern"] == est.pattern
        assert float(r["omega2_estimate"]) == est.omega2[i]
        assert abs(float(r["omega2_exact"]) - est.omega2[i]) <= 0.01


def test_continue_branch_outputs(tmp_path):
    assert main(["continue", "--n", "50", "--k1", "1", "--k2", "2.3",
                 "--k31", "1.3", "--k32", "3.5", "--b", "1.0",
                 "--amp-start", "0.01", "--amp-stop", "0.6",
                 "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "branch.csv")
    assert len(rows) >= 3
    iprs = [float(r["ipr"]) for r in rows]
    assert all(b >= a - 1e-12 for a, b in zip(iprs, iprs[1:]))
    arc = [float(r["arclength"]) for r in rows]
    assert all(b > a for a, b in zip(arc, arc[1:]))
    with open(tmp_path / "branch_meta.json") as fh:
        meta = json.load(fh)
    assert meta["status"] in ("Completed", "StepUnderflow")
    assert meta["exit_event"]["edge_omega2"] == 4.6
    assert meta["exit_event"]["direction"] == -1


def test_two_layer_outputs(tmp_path):
    assert main(["two-layer", "--n", "20", "--k1", "1", "--k2", "1.9",
                 "--k5", "1.4", "--k6", "1.7", "--k31", "0", "--k32", "0",
                 "--k41", "1.6", "--k42", "1.6", "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "two_layer.csv")
    assert len(rows) == 80
    spec = two_layer_spectrum(TwoLayerConfig(
        n=20, k1=1, k2=1.9, k5=1.4, k6=1.7, k31=0, k32=0, k41=1.6, k42=1.6))
    for j, r in enumerate(rows):
        assert float(r["omega2"]) == float(spec.omega2[j])
        assert r["band_tag"] == spec.band_tags[j]
    with open(tmp_path / "two_layer_bands.json") as fh:
        bands = json.load(fh)
    assert bands["pair1"] == [list(iv) for iv in spec.bands.pair1]
    assert bands["pair2"] == [list(iv) for iv in spec.bands.pair2]


def test_lattice2d_outputs(tmp_path):
    assert main(["lattice2d", "--N", "12", "--k1", "1", "--k2", "1.9",
                 "--k4", "4.3", "--k5", "3.9", "--k6", "5.1",
                 "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "lattice2d.csv")
    assert len(rows) == 144
    edge_idx = {r["index"] for r in rows if r["label"] == "edge"}
    dumped = {r["index"] for r in read_csv(tmp_path / "lattice2d_modes.csv")}
    assert dumped == edge_idx
    with open(tmp_path / "lattice2d_band.json") as fh:
        band = json.load(fh)
    assert band["union"] == [0.0, 2 * 2 * (1 + 1.9)]


def test_config_file_and_override(tmp_path):
    cfgfile = tmp_path / "chain.json"
    cfgfile.write_text(json.dumps(
        {"n": 10, "k1": 1, "k2": 2.3, "k31": 1.3, "k32": 3.5}))
    assert main(["spectrum", "--config", str(cfgfile), "--k32", "4.6",
                 "--out", str(tmp_path / "o")]) == 0
    rows = read_csv(tmp_path / "o" / "spectrum.csv")
    # Flag override wins: the k32 = 4.6 spectrum differs from k32 = 3.5.
    top = max(float(r["omega2"]) for r in rows)
    ref = analyze(ChainConfig(n=10, k1=1, k2=2.3, k31=1.3, k32=4.6))
    assert math.isclose(top, float(ref.spectrum.omega2[-1]), rel_tol=1e-12)


def test_exit_codes(tmp_path):
    # Missing required parameter.
    assert main(["spectrum", "--n", "5", "--out", str(tmp_path)]) == 2
    # Invalid physical value.
    assert main(["spectrum", "--n", "5", "--k1", "-1", "--k2", "1",
                 "--k31", "0", "--k32", "0", "--out", str(tmp_path)]) == 2
    # Solver failure: Newton cannot reach an absurd starting amplitude.
    assert main(["continue", "--n", "10", "--k1", "1", "--k2", "2.3",
                 "--k31", "1.3", "--k32", "3.5", "--b", "1.0",
                 "--amp-start", "1e6", "--amp-stop", "2e6",
                 "--out", str(tmp_path)]) == 3
