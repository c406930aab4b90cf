"""Walkthrough: run the full benchmark harness on a small synthetic corpus.

Generates scenes with ground-truth depth files, then calls the same code
path as `quatpaint benchmark` and prints where the CSV and summary land.

Run:  python3 demos/demo_benchmark.py [output_dir]
"""

import json
import sys
from pathlib import Path

from quatpaint import cli, imaging
from quatpaint.synth import make_layered_scene

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_bench")
images = out / "images"
depths = out / "depths"
images.mkdir(parents=True, exist_ok=True)
depths.mkdir(parents=True, exist_ok=True)

for i in range(6):
    img, dmap = make_layered_scene(100 + i)
    imaging.save_image(images / f"scene{i}.png", img)
    imaging.save_gray(depths / f"scene{i}.png", dmap.values)

cli.main(["benchmark",
          "--images", str(images),
          "--depth-kind", "file", "--depth-dir", str(depths),
          "--fraction", "0.3", "--rank", "16", "--seed", "1",
          "--output-dir", str(out / "results")])

summary = json.loads((out / "results" / "summary.json").read_text())
best = summary["best_of_two"]["delta_psnr_positive"]
print(f"\nbest-of-two polarity: delta-PSNR positive for "
      f"{best['fraction']} of images ({best['percent']:.0f}%)")
