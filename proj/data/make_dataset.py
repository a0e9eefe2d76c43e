#!/usr/bin/env python3
"""Rebuild the 8-bit grayscale benchmark set in data/benchmark/.

Sources (all redistributed test images from public packages):
  lena       npm `lena` 1.0.0 (512x512 RGB ndarray in lena.js)
  cameraman  npm `cameraman` 1.0.0 (cameraman.png, 256x256)
  baboon     npm `baboon-image` 2.1.0 (baboon.png)
  monarch    pip `sporco` 0.2.2 (sporco/data/monarch.png)
  barbara    pip `sporco` 0.2.2 (sporco/data/barbara.png)
  parrots    pip `sporco` 0.2.2 (sporco/data/kodim23.png)

Color sources are converted with Rec.601 luma, then the central 256x256
region is kept. Usage: make_dataset.py <npm_dir> <sporco_data_dir> <out_dir>
"""
import base64
import re
import sys
from pathlib import Path

import numpy as np
from PIL import Image


def luma(rgb):
    rgb = rgb.astype(np.float64)
    y = 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]
    return np.clip(np.floor(y + 0.5), 0, 255).astype(np.uint8)


def center_crop(img, size=256):
    h, w = img.shape
    r0, c0 = (h - size) // 2, (w - size) // 2
    return img[r0:r0 + size, c0:c0 + size]


def load_png(path):
    im = Image.open(path)
    if im.mode == "L":
        return np.asarray(im)
    return luma(np.asarray(im.convert("RGB")))


def load_lena(js_path):
    text = Path(js_path).read_text()
    payload = re.search(r"base64decode\(\s*'([^']+)'", text).group(1)
    flat = np.frombuffer(base64.b64decode(payload), dtype=np.uint8)
    # The packed buffer is column-major relative to the usual row layout.
    rgb = flat.reshape(512, 512, 3).transpose(1, 0, 2)
    return luma(rgb)


def write_pgm(path, img):
    h, w = img.shape
    with open(path, "wb") as f:
        f.write(b"P5\n%d %d\n255\n" % (w, h))
        f.write(np.ascontiguousarray(img).tobytes())


def main():
    npm_dir, sporco_dir, out_dir = map(Path, sys.argv[1:4])
    out_dir.mkdir(parents=True, exist_ok=True)
    images = {
        "lena": load_lena(npm_dir / "lena-1.0.0/package/lena.js"),
        "cameraman": load_png(npm_dir / "cameraman-1.0.0/package/cameraman.png"),
        "baboon": load_png(npm_dir / "baboon-image-2.1.0/package/baboon.png"),
        "monarch": load_png(sporco_dir / "monarch.png"),
        "barbara": load_png(sporco_dir / "barbara.png"),
        "parrots": load_png(sporco_dir / "kodim23.png"),
    }
    for name, img in images.items():
        img = center_crop(img)
        write_pgm(out_dir / f"{name}.pgm", img)
        print(name, img.shape)


if __name__ == "__main__":
    main()
