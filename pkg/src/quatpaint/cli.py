"""Command-line surface: mask, inpaint, metrics, and benchmark.

All commands accept ``--config FILE`` (JSON) whose keys mirror the
flags; precedence is defaults < config file < explicit flags.  Reports
are JSON for single runs and CSV plus a JSON summary for benchmarks.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import depth as depth_mod
from . import imaging, pipeline
from .depth import DepthProviderSpec, Polarity
from .lrqmc import SolverParams, project_mask, run_lrqmc

CSV_COLUMNS = [
    "image", "mode", "polarity", "psnr", "ssim",
    "delta_psnr", "delta_ssim", "iterations",
    "seconds_pass1", "seconds_depth", "seconds_pass2",
]

_POLARITIES = {
    "white": Polarity.WHITE_BACKGROUND,
    "black": Polarity.BLACK_BACKGROUND,
}


@dataclass
class RunConfig:
    """Everything one run needs; round-trips through JSON."""

    input: str | None = None
    mask: str | None = None
    truth: str | None = None
    images: str | None = None
    output_dir: str = "out"
    mode: str = "lrqmc"              # lrqmc | dlrqmc
    missing_fraction: float = 0.3
    rank: int = 80
    ridge: float = 1.0
    max_iters: int = 200
    rel_tol: float = 1e-4
    seed: int = 0
    depth_kind: str | None = None    # file | command | heuristic
    depth_path: str | None = None
    depth_dir: str | None = None
    depth_cmd: str | None = None
    polarity: str = "white"
    reuse_seed: bool = False
    constrain_real: bool = False
    save_intermediates: bool = False

    def validate(self):
        if self.mode not in ("lrqmc", "dlrqmc"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.polarity not in _POLARITIES:
            raise ValueError(f"unknown polarity {self.polarity!r}")
        if not 0.0 <= self.missing_fraction <= 1.0:
            raise ValueError("missing_fraction must be in [0, 1]")
        # SolverParams re-validates rank/ridge/iteration fields
        self.solver_params()
        return self

    def solver_params(self) -> SolverParams:
        return SolverParams(rank=self.rank, ridge=self.ridge,
                            max_iters=self.max_iters, rel_tol=self.rel_tol,
                            seed=self.seed)

    def depth_spec(self, image_path: str | None = None) -> DepthProviderSpec:
        polarity = _POLARITIES[self.polarity]
        kind = self.depth_kind
        if kind is None:
            env = depth_mod.spec_from_env(polarity)
            if env is not None:
                return env
            kind = "heuristic"
        if kind == "file":
            path = self.depth_path
            if path is None and self.depth_dir and image_path:
                path = str(Path(self.depth_dir)
                           / (Path(image_path).stem + ".png"))
            return DepthProviderSpec(kind="file", path=path,
                                     polarity=polarity)
        if kind == "command":
            cmd = self.depth_cmd
            if cmd is None:
                env = depth_mod.spec_from_env(polarity)
                if env is None:
                    raise ValueError("depth_kind=command needs --depth-cmd "
                                     "or QUATPAINT_DEPTH_CMD")
                return env
            import shlex
            parts = shlex.split(cmd)
            return DepthProviderSpec(kind="command", program=parts[0],
                                     args=tuple(parts[1:]),
                                     polarity=polarity)
        return DepthProviderSpec(kind="heuristic", polarity=polarity)


def _merge_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        with open(args.config) as fh:
            loaded = json.load(fh)
        unknown = set(loaded) - {f.name for f in dataclasses.fields(RunConfig)}
        if unknown:
            raise SystemExit(f"unknown config keys: {sorted(unknown)}")
        cfg = dataclasses.replace(cfg, **loaded)
    overrides = {k: v for k, v in vars(args).items()
                 if v is not None and k in
                 {f.name for f in dataclasses.fields(RunConfig)}}
    return dataclasses.replace(cfg, **overrides).validate()


def _image_seed(global_seed: int, index: int) -> int:
    """Per-image seed: reproducible, distinct across images."""
    return int(np.random.SeedSequence([global_seed, index])
               .generate_state(1)[0])


def _fmt_score(v: float) -> str:
    return "inf" if v == float("inf") else f"{v:.6f}"


# ---------------------------------------------------------------------------
# commands

def cmd_mask(cfg: RunConfig) -> int:
    img = imaging.load_image(cfg.input)
    rows, cols = img.shape[:2]
    mask = imaging.gen_mask(cfg.seed, rows, cols, cfg.missing_fraction)
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    imaging.save_mask(out / "mask.png", mask)
    imaging.save_image(out / "masked.png", imaging.apply_mask(img, mask))
    zeros = int(np.sum(mask == 0))
    print(f"masked {zeros} of {rows * cols} pixels "
          f"-> {out / 'masked.png'}, {out / 'mask.png'}")
    return 0


def _score_against(truth_path, restored):
    truth = imaging.load_image(truth_path)
    return imaging.psnr(truth, restored), imaging.ssim(truth, restored)


def cmd_inpaint(cfg: RunConfig) -> int:
    img = imaging.load_image(cfg.input)
    mask = imaging.load_mask(cfg.mask)
    y = project_mask(imaging.encode_image(img), mask)
    params = cfg.solver_params()
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)

    report: dict = {
        "mode": cfg.mode,
        "params": dataclasses.asdict(params),
        "input": str(cfg.input),
        "mask": str(cfg.mask),
    }
    if cfg.mode == "lrqmc":
        x, trace = run_lrqmc(y, mask, params)
        restored = imaging.decode_image(x)
        report["trace"] = trace.as_dict()
    else:
        spec = cfg.depth_spec(cfg.input)
        result = pipeline.run_dlrqmc(
            y, mask, params, spec,
            polarity=_POLARITIES[cfg.polarity],
            reuse_seed=cfg.reuse_seed,
            constrain_real=cfg.constrain_real)
        restored = result.final_image
        report["depth_provider"] = spec.kind
        report["polarity"] = cfg.polarity
        report["depth_is_proxy"] = spec.kind == "heuristic"
        report["trace_pass1"] = result.trace_pass1.as_dict()
        report["trace_pass2"] = result.trace_pass2.as_dict()
        if cfg.save_intermediates:
            imaging.save_image(out / "pass1.png", result.x0_image)
            imaging.save_gray(out / "depth.png", result.depth.values)

    imaging.save_image(out / "restored.png", restored)
    if cfg.truth:
        p, s = _score_against(cfg.truth, restored)
        report["psnr"] = None if p == float("inf") else p
        report["psnr_infinite"] = p == float("inf")
        report["ssim"] = s
    with open(out / "report.json", "w") as fh:
        json.dump(report, fh, indent=2)
    print(f"restored -> {out / 'restored.png'}; report -> "
          f"{out / 'report.json'}")
    return 0


def cmd_metrics(args) -> int:
    ref = imaging.load_image(args.ref)
    test = imaging.load_image(args.test)
    p = imaging.psnr(ref, test)
    s = imaging.ssim(ref, test)
    print(f"psnr: {_fmt_score(p)}")
    print(f"ssim: {_fmt_score(s)}")
    return 0


def _benchmark_one(cfg: RunConfig, path: Path, index: int):
    """All three arms for one image; returns (records, scores)."""
    truth = imaging.load_image(path)
    rows, cols = truth.shape[:2]
    seed = _image_seed(cfg.seed, index)
    mask = imaging.gen_mask(seed, rows, cols, cfg.missing_fraction)
    y = project_mask(imaging.encode_image(truth), mask)
    params = dataclasses.replace(cfg.solver_params(), seed=seed)

    t0 = time.perf_counter()
    x0, trace1 = run_lrqmc(y, mask, params)
    t_pass1 = time.perf_counter() - t0
    x0_img = imaging.decode_image(x0)
    base = (imaging.psnr(truth, x0_img), imaging.ssim(truth, x0_img))

    records = [{
        "image": path.name, "mode": "lrqmc", "polarity": "",
        "psnr": _fmt_score(base[0]), "ssim": _fmt_score(base[1]),
        "delta_psnr": "", "delta_ssim": "",
        "iterations": trace1.iterations,
        "seconds_pass1": f"{t_pass1:.3f}", "seconds_depth": "",
        "seconds_pass2": "",
    }]

    t0 = time.perf_counter()
    est = depth_mod.estimate_depth(cfg.depth_spec(str(path)), x0_img)
    t_depth = time.perf_counter() - t0

    deltas = {}
    params2 = params if cfg.reuse_seed \
        else dataclasses.replace(params, seed=params.seed + 1)
    for name, polarity in _POLARITIES.items():
        arm_depth = depth_mod.apply_polarity(est, polarity)
        xr = pipeline.compose_xr(arm_depth, y)
        t0 = time.perf_counter()
        xd, trace2 = run_lrqmc(
            xr, mask, params2,
            fixed_real=arm_depth.values if cfg.constrain_real else None)
        t_pass2 = time.perf_counter() - t0
        final = pipeline.decode_final(xd)
        scores = (imaging.psnr(truth, final), imaging.ssim(truth, final))
        dp, ds = imaging.delta_scores(base, scores)
        deltas[name] = (dp, ds)
        records.append({
            "image": path.name, "mode": "dlrqmc", "polarity": name,
            "psnr": _fmt_score(scores[0]), "ssim": _fmt_score(scores[1]),
            "delta_psnr": f"{dp:.6f}", "delta_ssim": f"{ds:.6f}",
            "iterations": trace2.iterations,
            "seconds_pass1": f"{t_pass1:.3f}",
            "seconds_depth": f"{t_depth:.3f}",
            "seconds_pass2": f"{t_pass2:.3f}",
        })
    return records, deltas


def _fraction(count: int, total: int) -> dict:
    frac = Fraction(count, total) if total else Fraction(0)
    return {"count": count, "total": total,
            "fraction": f"{frac.numerator}/{frac.denominator}",
            "percent": float(100 * frac)}


def cmd_benchmark(cfg: RunConfig) -> int:
    image_dir = Path(cfg.images)
    paths = sorted(p for p in image_dir.iterdir()
                   if p.suffix.lower() in (".png", ".ppm"))
    if not paths:
        print(f"no images found in {image_dir}", file=sys.stderr)
        return 1
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)

    all_records = []
    per_image = {}
    failures = {}
    for index, path in enumerate(paths):
        try:
            records, deltas = _benchmark_one(cfg, path, index)
        except Exception as exc:
            failures[path.name] = str(exc)
            print(f"[fail] {path.name}: {exc}", file=sys.stderr)
            continue
        all_records.extend(records)
        per_image[path.name] = deltas
        line = " ".join(f"{k}: dPSNR {v[0]:+.3f} dSSIM {v[1]:+.4f}"
                        for k, v in deltas.items())
        print(f"[ok] {path.name} {line}")

    csv_path = out / "benchmark.csv"
    with open(csv_path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(all_records)

    n = len(per_image)
    summary = {
        "images": n,
        "failures": failures,
        "depth_is_proxy": cfg.depth_kind in (None, "heuristic")
        and depth_mod.spec_from_env() is None,
        "arms": {},
    }
    for name in _POLARITIES:
        dps = [d[name][0] for d in per_image.values()]
        dss = [d[name][1] for d in per_image.values()]
        summary["arms"][name] = {
            "delta_psnr_positive": _fraction(sum(d > 0 for d in dps), n),
            "delta_ssim_positive": _fraction(sum(d > 0 for d in dss), n),
        }
    best_dp = [max(d[name][0] for name in _POLARITIES)
               for d in per_image.values()]
    best_ds = [max(d[name][1] for name in _POLARITIES)
               for d in per_image.values()]
    summary["best_of_two"] = {
        "delta_psnr_positive": _fraction(sum(d > 0 for d in best_dp), n),
        "delta_ssim_positive": _fraction(sum(d > 0 for d in best_ds), n),
    }
    with open(out / "summary.json", "w") as fh:
        json.dump(summary, fh, indent=2)
    print(f"records -> {csv_path}; summary -> {out / 'summary.json'}")
    return 0 if not failures else 1


# ---------------------------------------------------------------------------
# argument parsing

def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON config file (flags override it)")
    p.add_argument("--output-dir", dest="output_dir")
    p.add_argument("--seed", type=int)


def _add_solver(p: argparse.ArgumentParser):
    p.add_argument("-K", "--rank", dest="rank", type=int)
    p.add_argument("--ridge", type=float,
                   help="ridge weight on the factor norms (default 1)")
    p.add_argument("--max-iters", dest="max_iters", type=int)
    p.add_argument("--rel-tol", dest="rel_tol", type=float)


def _add_depth(p: argparse.ArgumentParser):
    p.add_argument("--depth-kind", dest="depth_kind",
                   choices=["file", "command", "heuristic"])
    p.add_argument("--depth-path", dest="depth_path")
    p.add_argument("--depth-dir", dest="depth_dir",
                   help="directory of per-image depth PNGs named "
                        "<image-stem>.png")
    p.add_argument("--depth-cmd", dest="depth_cmd")
    p.add_argument("--polarity", choices=sorted(_POLARITIES))
    p.add_argument("--reuse-seed", dest="reuse_seed", action="store_true",
                   default=None)
    p.add_argument("--constrain-real", dest="constrain_real",
                   action="store_true", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quatpaint",
        description="quaternion-domain color image inpainting")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mask", help="mask random pixels of an image")
    _add_common(p)
    p.add_argument("--input", required=True)
    p.add_argument("--fraction", dest="missing_fraction", type=float)
    p.set_defaults(func=lambda a: cmd_mask(_merge_config(a)))

    p = sub.add_parser("inpaint", help="restore a masked image")
    _add_common(p)
    _add_solver(p)
    _add_depth(p)
    p.add_argument("--input", required=True, help="masked image")
    p.add_argument("--mask", required=True, help="mask PNG (0 = missing)")
    p.add_argument("--mode", choices=["lrqmc", "dlrqmc"])
    p.add_argument("--truth", help="ground truth for PSNR/SSIM scoring")
    p.add_argument("--save-intermediates", dest="save_intermediates",
                   action="store_true", default=None)
    p.set_defaults(func=lambda a: cmd_inpaint(_merge_config(a)))

    p = sub.add_parser("metrics", help="score a restored image")
    p.add_argument("--ref", required=True)
    p.add_argument("--test", required=True)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("benchmark",
                       help="run both methods over an image directory")
    _add_common(p)
    _add_solver(p)
    _add_depth(p)
    p.add_argument("--images", required=True,
                   help="directory of ground-truth images")
    p.add_argument("--fraction", dest="missing_fraction", type=float)
    p.set_defaults(func=lambda a: cmd_benchmark(_merge_config(a)))

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
