"""Command-line behaviour of the vls executable: exit codes, flags and output files."""

import gzip
import os
import subprocess
import sys
import tempfile
import unittest
from pathlib import Path

from cli_fixture import write_fixture

VLS = sys.argv.pop(1) if len(sys.argv) > 1 else "vls"


def run(*args, env=None, cwd=None):
    return subprocess.run([VLS, *args], capture_output=True, text=True, env=env, cwd=cwd, timeout=300)


class CommandLine(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)
        self.survey = write_fixture(self.dir)

    def tearDown(self):
        self.tmp.cleanup()

    def test_no_arguments_is_a_usage_error(self):
        r = run()
        self.assertEqual(r.returncode, 2)
        self.assertIn("run", r.stderr)

    def test_unknown_flag_is_a_usage_error(self):
        r = run("run", str(self.survey), "--frobnicate")
        self.assertEqual(r.returncode, 2)
        self.assertIn("frobnicate", r.stderr)

    def test_missing_survey_fails(self):
        r = run("run", str(self.dir / "nope.xml"), "--output", str(self.dir / "o"))
        self.assertEqual(r.returncode, 1)
        self.assertIn("nope.xml", r.stderr)

    def test_las_and_waveform_outputs(self):
        out = self.dir / "out"
        r = run("run", str(self.survey), "--lasOutput", "--writeWaveform", "--output", str(out))
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertTrue((out / "points.las").stat().st_size > 227)
        self.assertFalse((out / "points.xyz").exists())
        rows = [l for l in (out / "fullwave.txt").read_text().splitlines() if l.strip()]
        self.assertGreater(len(rows), 0)
        self.assertIn("pulses 1000", r.stdout)
        self.assertEqual(len((out / "trajectory.txt").read_text().splitlines()), 1 + 6)

    def test_echo_width_flag_runs(self):
        out = self.dir / "ew"
        r = run("run", str(self.survey), "--calcEchowidth", "--output", str(out))
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertTrue((out / "points.xyz").exists())

    def test_deterministic_overrides_workers(self):
        out = self.dir / "det"
        r = run("run", str(self.survey), "--deterministic", "--workers", "4", "--output", str(out))
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertIn("1 worker", r.stderr)
        self.assertIn("workers 1", r.stdout)

    def test_seed_flag_changes_noise_and_repeats(self):
        outs = []
        for name, seed in (("a", "x"), ("b", "x"), ("c", "y")):
            out = self.dir / name
            r = run("run", str(self.survey), "--deterministic", "--seed", seed, "--output", str(out))
            self.assertEqual(r.returncode, 0, r.stderr)
            outs.append((out / "points.xyz").read_bytes())
        self.assertEqual(outs[0], outs[1])
        self.assertNotEqual(outs[0], outs[2])

    def test_zip_and_unzip(self):
        plain, zipped = self.dir / "plain", self.dir / "zipped"
        self.assertEqual(run("run", str(self.survey), "--deterministic", "--output", str(plain)).returncode, 0)
        r = run("run", str(self.survey), "--deterministic", "--zipOutput", "--output", str(zipped))
        self.assertEqual(r.returncode, 0, r.stderr)
        gz = zipped / "points.xyz.gz"
        self.assertEqual(gzip.decompress(gz.read_bytes()), (plain / "points.xyz").read_bytes())
        target = self.dir / "unzipped.xyz"
        self.assertEqual(run("--unzip", str(gz), str(target)).returncode, 0)
        self.assertEqual(target.read_bytes(), (plain / "points.xyz").read_bytes())

    def test_output_directory_from_environment(self):
        env = dict(os.environ, VLS_OUTPUT_DIR=str(self.dir / "envout"))
        r = run("run", str(self.survey), env=env)
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertTrue((self.dir / "envout" / "points.xyz").exists())


if __name__ == "__main__":
    unittest.main()
