"""End-to-end acceptance gate.

Each test prints one pass/fail line; tolerances are fixed here and
nowhere else.  Run with `pytest tests/test_acceptance.py -v -s`.
"""

import csv
import dataclasses
import json
import sys
import textwrap
import time

import numpy as np
import pytest

from quatpaint import cli, imaging
from quatpaint.depth import DepthProviderSpec
from quatpaint.imaging import gaussian_window
from quatpaint.lrqmc import SolverParams, project_mask, run_lrqmc
from quatpaint.pipeline import run_dlrqmc
from quatpaint.quat import (from_complex_adjoint, quat_frobenius,
                            quat_matmul, to_complex_adjoint)
from quatpaint.synth import make_layered_scene

from conftest import random_low_rank, random_quat_matrix
from test_imaging import naive_ssim


def report(criterion, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] criterion {criterion}: {detail}")
    assert ok, f"criterion {criterion} failed: {detail}"


class TestCriterion1Algebra:
    def test_algebra_properties(self):
        start = time.perf_counter()
        gen = np.random.default_rng(2024)
        n = 1000
        for _ in range(n):
            m, k, p = gen.integers(1, 6, size=3)
            a = random_quat_matrix(gen, m, k)
            b = random_quat_matrix(gen, k, p)

            fa, fb = to_complex_adjoint(a), to_complex_adjoint(b)
            prod = to_complex_adjoint(quat_matmul(a, b))
            assert np.linalg.norm(prod - fa @ fb) \
                <= 1e-10 * max(np.linalg.norm(fa @ fb), 1e-30)

            c = random_quat_matrix(gen, m, k)
            assert np.linalg.norm(to_complex_adjoint(a + c) - (fa +
                                  to_complex_adjoint(c))) \
                <= 1e-12 * max(np.linalg.norm(fa), 1e-30)

            herm = to_complex_adjoint(a.conj_transpose())
            assert np.linalg.norm(herm - fa.conj().T) \
                <= 1e-12 * max(np.linalg.norm(fa), 1e-30)

            assert from_complex_adjoint(fa).equal(a)

            norm_q = quat_frobenius(a)
            if norm_q > 0:
                assert abs(np.linalg.norm(fa) - np.sqrt(2) * norm_q) \
                    <= 1e-12 * norm_q
        elapsed = time.perf_counter() - start
        report(1, elapsed < 30.0,
               f"algebra properties on {n} instances in {elapsed:.1f}s")


class TestCriterion2SolverInvariants:
    def test_invariants_on_random_instances(self):
        start = time.perf_counter()
        gen = np.random.default_rng(7)
        for i in range(50):
            rows = int(gen.integers(8, 65))
            cols = int(gen.integers(8, 65))
            rank = int(gen.integers(1, 9))
            missing = float(gen.choice([0.1, 0.3, 0.5]))
            truth = random_quat_matrix(gen, rows, cols, 0, 255)
            mask = imaging.gen_mask(1000 + i, rows, cols, missing)
            y = project_mask(truth, mask)
            params = SolverParams(rank=rank, ridge=1.0, max_iters=12,
                                  rel_tol=0.0, seed=i)
            x, trace = run_lrqmc(y, mask, params)

            for prev, cur in zip(trace.objectives, trace.objectives[1:]):
                assert cur <= prev + 1e-9 * max(1.0, prev)
            assert max(trace.structure_devs) <= 1e-8
            assert quat_frobenius(project_mask(x - y, mask)) == 0.0
        elapsed = time.perf_counter() - start
        report(2, elapsed < 120.0,
               f"50 instances x 12 iterations in {elapsed:.1f}s")


class TestCriterion3ExactRecovery:
    def test_rank3_recovery(self):
        successes = 0
        worst = 0.0
        for seed in range(10):
            gen = np.random.default_rng(500 + seed)
            truth = random_low_rank(gen, 40, 40, 3)
            mask = imaging.gen_mask(seed, 40, 40, 0.2)
            y = project_mask(truth, mask)
            params = SolverParams(rank=3, ridge=1e-3, max_iters=500,
                                  rel_tol=1e-10, seed=seed)
            x, _ = run_lrqmc(y, mask, params)
            miss = mask == 0
            num = np.sqrt(sum(np.sum((a - b)[miss] ** 2) for a, b
                              in zip(x.planes(), truth.planes())))
            den = np.sqrt(sum(np.sum(b[miss] ** 2)
                              for b in truth.planes()))
            rel = num / den
            worst = max(worst, rel)
            successes += rel < 1e-2
        report(3, successes >= 9,
               f"{successes}/10 seeds below 1e-2 (worst {worst:.2e})")


class TestCriterion4DegeneracyEquality:
    def test_zero_depth_bit_identical(self, tmp_path):
        gen = np.random.default_rng(31)
        img = np.floor(gen.uniform(0, 255, size=(20, 20, 3)))
        mask = imaging.gen_mask(8, 20, 20, 0.3)
        y = project_mask(imaging.encode_image(img), mask)
        params = SolverParams(rank=4, max_iters=25, rel_tol=1e-6, seed=17)

        zero_png = tmp_path / "zero.png"
        imaging.save_gray(zero_png, np.zeros((20, 20)))
        spec = DepthProviderSpec(kind="file", path=str(zero_png))

        result = run_dlrqmc(y, mask, params, spec, reuse_seed=True)
        x_plain, _ = run_lrqmc(y, mask, params)
        same = result.xd.equal(x_plain) and np.array_equal(
            result.final_image, imaging.decode_image(x_plain))
        report(4, same, "zero-depth two-pass output bit-identical")


class TestCriterion5Metrics:
    def test_metric_checks(self):
        gen = np.random.default_rng(99)
        a = np.zeros((16, 16, 3))
        ok_psnr0 = abs(imaging.psnr(a, np.full_like(a, 255.0))) < 1e-12
        expect = 20 * np.log10(255.0 / 16.0)  # 24.04840 dB
        ok_psnr16 = abs(imaging.psnr(a, np.full_like(a, 16.0))
                        - expect) < 1e-3

        img = gen.uniform(0, 255, size=(16, 16, 3))
        ok_self = imaging.ssim(img, img) == 1.0

        ok_oracle = True
        for _ in range(20):
            x = gen.uniform(0, 255, size=(13, 14, 3))
            y = gen.uniform(0, 255, size=(13, 14, 3))
            if abs(imaging.ssim(x, y) - naive_ssim(x, y)) > 1e-6:
                ok_oracle = False
                break
        report(5, ok_psnr0 and ok_psnr16 and ok_self and ok_oracle,
               "PSNR closed forms, SSIM self-identity, SSIM oracle x20")


class TestCriterion6SyntheticCorpus:
    def test_depth_helps_on_layered_scenes(self, tmp_path):
        start = time.perf_counter()
        images = tmp_path / "images"
        depths = tmp_path / "depths"
        images.mkdir()
        depths.mkdir()
        n = 20
        for i in range(n):
            img, dmap = make_layered_scene(9000 + i)
            imaging.save_image(images / f"scene{i:02d}.png", img)
            imaging.save_gray(depths / f"scene{i:02d}.png", dmap.values)

        out = tmp_path / "bench"
        rc = cli.main(["benchmark", "--images", str(images),
                       "--depth-kind", "file", "--depth-dir", str(depths),
                       "--fraction", "0.3", "--rank", "16",
                       "--max-iters", "200", "--seed", "1",
                       "--output-dir", str(out)])
        assert rc == 0
        summary = json.loads((out / "summary.json").read_text())
        frac = summary["arms"]["white"]["delta_psnr_positive"]
        elapsed = time.perf_counter() - start
        ok = frac["count"] >= 0.7 * n and elapsed < 600.0
        report(6, ok, f"delta-PSNR positive for {frac['count']}/{n} "
                      f"scenes (ground-truth depth) in {elapsed:.0f}s")


class TestCriterion7BenchmarkContract:
    def test_csv_schema_with_external_depth_command(self, tmp_path):
        images = tmp_path / "images"
        images.mkdir()
        gen = np.random.default_rng(5)
        for i in range(2):
            imaging.save_image(
                images / f"img{i}.png",
                np.floor(gen.uniform(0, 255, size=(16, 16, 3))))

        stub = tmp_path / "depth_stub.py"
        stub.write_text(textwrap.dedent("""
            import sys
            import numpy as np
            from PIL import Image
            img = np.asarray(Image.open(sys.argv[1]).convert("L"))
            Image.fromarray(img).save(sys.argv[2])
        """))
        out = tmp_path / "bench"
        rc = cli.main(["benchmark", "--images", str(images),
                       "--depth-kind", "command",
                       "--depth-cmd", f"{sys.executable} {stub}",
                       "--fraction", "0.3", "--rank", "3",
                       "--max-iters", "10",
                       "--output-dir", str(out)])
        assert rc == 0
        with open(out / "benchmark.csv", newline="") as fh:
            rows = list(csv.reader(fh))
        golden = (__import__("pathlib").Path(__file__).parent / "data"
                  / "benchmark_schema.csv").read_text().strip().split(",")
        ok = rows[0] == golden and len(rows) == 7
        dl = [dict(zip(rows[0], r)) for r in rows[1:]
              if r[1] == "dlrqmc"]
        ok = ok and {d["polarity"] for d in dl} == {"white", "black"}
        ok = ok and all(d["delta_psnr"] and d["delta_ssim"] for d in dl)
        summary = json.loads((out / "summary.json").read_text())
        ok = ok and "best_of_two" in summary \
            and summary["depth_is_proxy"] is False
        report(7, ok, "CSV schema and both-polarity summary via "
                      "external depth command")
