import json
import xml.etree.ElementTree as ET

import pytest

from plankforge import serialize
from plankforge.cli import main, parse_region, parse_widths_spec


def read(path):
    return json.loads(path.read_text())


class TestSpecParsers:
    def test_const_widths(self):
        w = parse_widths_spec("const:0.5:9")
        assert w.tolist() == [0.5] * 9

    def test_harmonic_widths(self):
        w = parse_widths_spec("harmonic:18:3")
        assert w == pytest.approx([1 / 18, 1 / 19, 1 / 20])

    def test_csv_widths(self, tmp_path):
        p = tmp_path / "w.csv"
        p.write_text("0.5\n0.25\n# comment\n0.125\n")
        assert parse_widths_spec(str(p)).tolist() == [0.5, 0.25, 0.125]

    def test_region(self):
        box = parse_region("0:1,-1:2")
        assert box.low.tolist() == [0.0, -1.0]
        assert box.high.tolist() == [1.0, 2.0]


class TestCoverBall:
    def test_d1_pass(self, tmp_path):
        rc = main([
            "cover-ball", "--dim", "1", "--widths", "const:0.5:9",
            "--samples", "50000", "--seed", "1", "--out", str(tmp_path),
        ])
        assert rc == 0
        cover = read(tmp_path / "cover.json")
        assert cover["schema"] == "plankforge/1"
        assert len(cover["slabs"]) == 9
        report = read(tmp_path / "report.json")
        assert report["status"] == "pass"
        assert report["uncoveredCount"] == 0
        manifest = read(tmp_path / "manifest.json")
        assert manifest["command"] == "cover-ball"

    def test_single_wide_slab(self, tmp_path):
        rc = main([
            "cover-ball", "--dim", "2", "--widths", "const:1:1",
            "--samples", "5000", "--verify-samples", "5000",
            "--seed", "0", "--out", str(tmp_path),
        ])
        assert rc == 0

    def test_missing_dim_usage_error(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["cover-ball", "--widths", "const:0.5:9", "--out", str(tmp_path)])
        assert exc.value.code == 2

    def test_malformed_csv(self, tmp_path):
        bad = tmp_path / "w.csv"
        bad.write_text("0.5\nnot-a-number\n")
        rc = main([
            "cover-ball", "--dim", "1", "--widths", str(bad), "--out", str(tmp_path),
        ])
        assert rc == 2

    def test_manifest_replay_byte_identical(self, tmp_path):
        out1 = tmp_path / "a"
        out2 = tmp_path / "b"
        argv = [
            "cover-ball", "--dim", "2", "--widths", "const:0.5:12",
            "--samples", "20000", "--verify-samples", "5000", "--seed", "3",
        ]
        assert main(argv + ["--out", str(out1)]) == 0
        manifest = read(out1 / "manifest.json")
        # replay the manifest argv, swapping only the output directory
        idx = manifest["argv"].index("--out")
        replay = manifest["argv"][:idx] + ["--out", str(out2)]
        assert main(replay) == 0
        assert (out1 / "cover.json").read_bytes() == (out2 / "cover.json").read_bytes()
        assert (out1 / "report.json").read_bytes() == (out2 / "report.json").read_bytes()


class TestCoverRegion:
    def test_d1_constant(self, tmp_path):
        rc = main([
            "cover-region", "--region", "0:1", "--c", "0.5",
            "--widths", "const:0.02:1500", "--samples", "20000",
            "--verify-samples", "5000", "--grid", "101",
            "--seed", "2", "--out", str(tmp_path),
        ])
        assert rc == 0
        plan = read(tmp_path / "plan.json")
        assert len(plan["centers"]) == 12
        report = read(tmp_path / "report.json")
        assert report["status"] == "pass"

    def test_point_region(self, tmp_path):
        rc = main([
            "cover-region", "--region", "0.1:0.1,0.2:0.2", "--c", "0.5",
            "--widths", "const:0.02:300", "--samples", "5000",
            "--verify-samples", "2000", "--grid", "3",
            "--seed", "2", "--out", str(tmp_path),
        ])
        assert rc == 0
        plan = read(tmp_path / "plan.json")
        assert len(plan["centers"]) == 1

    def test_c_out_of_range(self, tmp_path):
        rc = main([
            "cover-region", "--region", "0:1", "--c", "1.5",
            "--widths", "const:0.02:100", "--out", str(tmp_path),
        ])
        assert rc == 2

    def test_insufficient_slabs_exit_3(self, tmp_path):
        rc = main([
            "cover-region", "--region", "0:1", "--c", "0.5",
            "--widths", "const:0.02:300", "--samples", "5000",
            "--verify-samples", "2000", "--seed", "2", "--out", str(tmp_path),
        ])
        assert rc == 3

    def test_svg_structure(self, tmp_path):
        svg_path = tmp_path / "cover.svg"
        # 0.1 x 0.1 region at c=0.5 tiles into 4x4 balls, 98 slabs each
        rc = main([
            "cover-region", "--region", "0:0.1,0:0.1", "--c", "0.5",
            "--widths", "const:0.02:1600", "--samples", "10000",
            "--verify-samples", "2000", "--grid", "21",
            "--seed", "4", "--out", str(tmp_path), "--svg", str(svg_path),
        ])
        assert rc == 0
        cover = read(tmp_path / "cover.json")
        plan = read(tmp_path / "plan.json")
        root = ET.fromstring(svg_path.read_text())
        ns = "{http://www.w3.org/2000/svg}"
        stripes = [e for e in root.iter(f"{ns}rect") if e.get("class") == "stripe"]
        balls = [e for e in root.iter(f"{ns}circle") if e.get("class") == "ball"]
        assert len(stripes) == len(cover["slabs"])
        assert len(balls) == len(plan["centers"])


class TestControl:
    def test_degree_one_pass(self, tmp_path):
        rc = main([
            "control", "--degree", "1", "--xs", "const:3:400", "--radius", "1",
            "--trials", "3000", "--seed", "5", "--out", str(tmp_path),
        ])
        assert rc == 0
        table = read(tmp_path / "control.json")
        assert table["schema"] == "plankforge/1"
        assert table["certBall"]["radius"] >= 1.0
        assert len(table["pairs"]) == 21
        report = read(tmp_path / "report.json")
        assert report["maxResidual"] <= 1.0 + 1e-9
        csv = (tmp_path / "control.csv").read_text().splitlines()
        assert csv[0] == "x,y"
        assert len(csv) == 22

    def test_degree_two_small_radius(self, tmp_path):
        rc = main([
            "control", "--degree", "2", "--xs", "const:3:300", "--radius", "0.25",
            "--trials", "2000", "--seed", "6", "--out", str(tmp_path),
        ])
        assert rc == 0

    def test_degree_zero_rejected(self, tmp_path):
        rc = main([
            "control", "--degree", "0", "--xs", "const:3:10", "--radius", "1",
            "--out", str(tmp_path),
        ])
        assert rc == 2

    def test_exhaustion_exit_3(self, tmp_path):
        rc = main([
            "control", "--degree", "1", "--xs", "const:3:3", "--radius", "1",
            "--out", str(tmp_path),
        ])
        assert rc == 3


class TestVerifyCommand:
    def make_cover(self, tmp_path):
        out = tmp_path / "mk"
        assert main([
            "cover-ball", "--dim", "1", "--widths", "const:0.5:9",
            "--samples", "20000", "--verify-samples", "5000",
            "--seed", "1", "--out", str(out),
        ]) == 0
        return out / "cover.json"

    def test_roundtrip_pass(self, tmp_path):
        cover = self.make_cover(tmp_path)
        rc = main([
            "verify", "--cover", str(cover), "--samples", "20000",
            "--seed", "9", "--out", str(tmp_path),
        ])
        assert rc == 0

    def test_deleted_slabs_impossible_with_witness(self, tmp_path):
        cover_path = self.make_cover(tmp_path)
        data = read(cover_path)
        data["slabs"] = data["slabs"][:1]  # total width 0.5 < claimed diameter 0.75
        trimmed = tmp_path / "trimmed.json"
        trimmed.write_text(json.dumps(data))
        rc = main([
            "verify", "--cover", str(trimmed), "--samples", "5000",
            "--budget", "20000", "--seed", "3", "--out", str(tmp_path),
        ])
        assert rc == 1
        report = read(tmp_path / "report.json")
        assert report["necessity"] == "impossible"
        assert report["witness"] is not None

    def test_corrupted_json(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        rc = main(["verify", "--cover", str(bad), "--out", str(tmp_path)])
        assert rc == 2

    def test_schema_mismatch(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"schema": "other/9", "kind": "covering"}))
        rc = main(["verify", "--cover", str(bad), "--out", str(tmp_path)])
        assert rc == 2


class TestSerializeRoundTrip:
    def test_covering_roundtrip(self, tmp_path):
        out = tmp_path / "o"
        assert main([
            "cover-ball", "--dim", "2", "--widths", "const:0.6:8",
            "--samples", "20000", "--verify-samples", "5000",
            "--seed", "8", "--out", str(out),
        ]) in (0, 1)
        obj = read(out / "cover.json")
        cov = serialize.covering_from_json(obj)
        assert serialize.covering_to_json(cov) == obj

    def test_table_roundtrip(self, tmp_path):
        out = tmp_path / "o"
        assert main([
            "control", "--degree", "1", "--xs", "const:3:400", "--radius", "1",
            "--trials", "500", "--seed", "2", "--out", str(out),
        ]) == 0
        obj = read(out / "control.json")
        table = serialize.table_from_json(obj)
        back = serialize.table_to_json(table)
        assert back["pairs"] == obj["pairs"]
        assert back["certBall"] == obj["certBall"]

    def test_backends_produce_identical_artifacts(self, tmp_path):
        # the greedy pipeline scores candidates on shared projections, so the
        # compiled and fallback kernels yield byte-identical coverings
        import os
        import subprocess
        import sys

        from plankforge.kernels import available_backends

        if "compiled" not in available_backends():
            pytest.skip("compiled kernels not built")
        outs = {}
        for backend in ("py", "c"):
            out = tmp_path / backend
            env = dict(os.environ, PLANKFORGE_KERNELS=backend)
            proc = subprocess.run(
                [sys.executable, "-m", "plankforge.cli", "cover-ball",
                 "--dim", "2", "--widths", "const:0.5:12",
                 "--samples", "20000", "--verify-samples", "5000",
                 "--seed", "3", "--out", str(out)],
                env=env, capture_output=True, text=True,
            )
            assert proc.returncode == 0, proc.stderr
            outs[backend] = (out / "cover.json").read_bytes()
        assert outs["py"] == outs["c"]

    def test_control_emits_coefficient_covering(self, tmp_path):
        out = tmp_path / "o"
        assert main([
            "control", "--degree", "1", "--xs", "const:3:400", "--radius", "1",
            "--trials", "200", "--seed", "2", "--out", str(out),
        ]) == 0
        obj = read(out / "cover.json")
        assert obj["provenance"] == "lemma3"
        cov = serialize.covering_from_json(obj)
        assert serialize.covering_to_json(cov) == obj
        assert len(cov.placed) == len(read(out / "control.json")["pairs"])
