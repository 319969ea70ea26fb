"""Acceptance suite: one test per release criterion, one printed line each.

Run with `pytest -s tests/test_acceptance.py` to see the PASS/FAIL lines.
Every check is exact; no tolerances anywhere.
"""

import functools
import random
import subprocess
import sys

import numpy as np

from fakeweather.dataset import read_cifar_batch, write_cifar_batch
from fakeweather.image import ImageBuffer, decode_ppm, encode_ppm
from fakeweather.maskgen import (
    AttackConfig,
    ImageDims,
    below_v,
    gen_hail_mask,
    gen_mask,
    gen_rain_mask,
    gen_snow_mask,
    rain_mask_plan,
    read_mask,
    write_mask,
)
from fakeweather.metrics import PredictionRecord, compute_asr, compute_report
from fakeweather.patterns import (
    WeatherKind,
    agglomerate_pattern,
    hail_pattern,
    line_pattern,
    patch_pattern,
    snow_pattern,
)

RAIN = (208, 209, 214)
SNOW = (249, 242, 242)


def criterion(name):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"FAIL: {name}")
                raise
            print(f"PASS: {name}")
        return wrapper
    return deco


def random_config(rng, kind):
    return AttackConfig(
        kind=kind,
        seed=rng.randrange(2**64),
        p_agglomerate_below_v=rng.random(),
        p_patch_above_v=rng.random(),
        p_line_above_v=rng.random(),
        line_length_range=(rng.randrange(1, 4), rng.randrange(4, 9)),
        first_line_stride=rng.randrange(1, 6),
        p_hail=rng.random(),
    )


def random_dims(rng, lo=8, hi=40):
    return ImageDims(rng.randrange(lo, hi + 1), rng.randrange(lo, hi + 1))


@criterion("pattern oracle equivalence (agglomerate, patch, hail; 100 anchors)")
def test_pattern_oracle_equivalence():
    rng = random.Random(0xA11CE)
    for _ in range(100):
        x0, y0 = rng.randrange(-100, 100), rng.randrange(-100, 100)

        scan = {
            (x0 + i, y0 + j)
            for i in range(3)
            for j in range(3)
            if i + j == 0 or i + j == 2 or i + j == 4
        }
        assert agglomerate_pattern((x0, y0)).coords() == scan

        for t in (0, 1, 2):
            if t == 0:
                scan = {(x0, y0 + j) for j in range(2)}
            elif t == 1:
                scan = {(x0 + i, y0 + j) for i in range(2) for j in range(2) if i + j == 1}
            else:
                scan = {(x0, y0 + 2 * j) for j in range(2)}
            assert patch_pattern((x0, y0), t).coords() == scan

        scan = {
            (x0 + i, y0 + j)
            for i in range(4)
            for j in range(4)
            if (i == j and i < 2) or (i + j == 3) or (i == 2 and j != 2)
        }
        assert hail_pattern((x0, y0)).coords() == scan


@criterion("cardinalities (agglomerate 5, patch 2, line n, snow 1, hail 8)")
def test_cardinalities():
    rng = random.Random(0xCA5D)
    for _ in range(50):
        anchor = (rng.randrange(-30, 30), rng.randrange(-30, 30))
        assert len(agglomerate_pattern(anchor).pixels) == 5
        for t in (0, 1, 2):
            assert len(patch_pattern(anchor, t).pixels) == 2
        for n in range(1, 9):
            assert len(line_pattern(anchor, n).pixels) == n
        assert len(snow_pattern(anchor).pixels) == 1
        assert len(hail_pattern(anchor).pixels) == 8


@criterion("hail coordinate golden at the origin")
def test_hail_golden():
    assert hail_pattern((0, 0)).coords() == {
        (0, 0), (1, 1), (0, 3), (1, 2), (2, 0), (2, 1), (2, 3), (3, 0),
    }


@criterion("color purity (1,000 random masks per kind)")
def test_color_purity():
    rng = random.Random(0xC0108)
    for kind, color in ((WeatherKind.RAIN, RAIN), (WeatherKind.SNOW, SNOW),
                        (WeatherKind.HAIL, SNOW)):
        for _ in range(1000):
            mask = gen_mask(random_dims(rng), random_config(rng, kind))
            assert all(p.rgb == color for p in mask.pixels)


@criterion("determinism (50 regenerated mask files per kind; snow seed-free)")
def test_determinism():
    rng = random.Random(0xDE7)
    for kind in WeatherKind:
        for _ in range(50):
            dims = random_dims(rng)
            config = random_config(rng, kind)
            first = write_mask(gen_mask(dims, config))
            again = write_mask(gen_mask(dims, config))
            assert first == again

    # snow placement ignores the seed entirely
    for _ in range(50):
        dims = random_dims(rng)
        seeds = [rng.randrange(2**64) for _ in range(3)]
        masks = [
            gen_snow_mask(dims, AttackConfig(kind=WeatherKind.SNOW, seed=s))
            for s in seeds
        ]
        assert masks[0].coords() == masks[1].coords() == masks[2].coords()

    # and regeneration is stable across processes
    dims, config = ImageDims(32, 32), AttackConfig(kind=WeatherKind.RAIN, seed=99)
    script = (
        "from fakeweather.maskgen import AttackConfig, ImageDims, gen_rain_mask, write_mask\n"
        "from fakeweather.patterns import WeatherKind\n"
        "import sys\n"
        "mask = gen_rain_mask(ImageDims(32, 32), AttackConfig(kind=WeatherKind.RAIN, seed=99))\n"
        "sys.stdout.write(write_mask(mask))\n"
    )
    child = subprocess.run([sys.executable, "-c", script], capture_output=True, text=True)
    assert child.returncode == 0, child.stderr
    assert child.stdout == write_mask(gen_rain_mask(dims, config))


@criterion("rain V geometry and snow row layout")
def test_geometry():
    rng = random.Random(0x6E0)
    for _ in range(20):
        dims = ImageDims(rng.randrange(8, 65), rng.randrange(8, 65))
        config = random_config(rng, WeatherKind.RAIN)
        plan = rain_mask_plan(dims, config)
        for (i, j) in plan.dense_anchors:
            assert below_v(dims, i, j)
        for (i, j), _t in plan.patch_placements:
            assert not below_v(dims, i, j)
        for (i, j), _n in plan.line_placements:
            assert not below_v(dims, i, j)

    mask = gen_snow_mask(ImageDims(32, 32), AttackConfig(kind=WeatherKind.SNOW))
    rows = {}
    for p in mask.pixels:
        rows.setdefault(p.y, set()).add(p.x)
    assert rows[1] == {0, 3, 6, 9, 12, 15, 18, 21, 24, 27, 30}
    assert rows[3] == {0, 6, 12, 18, 24, 30}


@criterion("format round-trips (mask file, PPM, CIFAR batch; 100 each)")
def test_format_round_trips():
    rng = random.Random(0x707)
    kinds = list(WeatherKind)

    for k in range(100):
        mask = gen_mask(random_dims(rng, 8, 24), random_config(rng, kinds[k % 3]))
        text = write_mask(mask)
        assert write_mask(read_mask(text)) == text
        assert read_mask(text) == mask

    for _ in range(100):
        dims = ImageDims(rng.randrange(1, 12), rng.randrange(1, 12))
        img = ImageBuffer(dims, rng.randbytes(3 * dims.area))
        assert decode_ppm(encode_ppm(img)) == img

    np_rng = np.random.default_rng(0x707)
    for _ in range(100):
        n = int(np_rng.integers(0, 5))
        recs = np_rng.integers(0, 256, size=(n, 3073)).astype(np.uint8)
        if n:
            recs[:, 0] = np_rng.integers(0, 10, size=n).astype(np.uint8)
        data = recs.tobytes()
        assert write_cifar_batch(read_cifar_batch(data)) == data

    # synthetic batch with known planes: record k is label k with constant
    # channel values (10k, 10k+1, 10k+2)
    blob = bytearray()
    for k in range(4):
        blob.append(k)
        blob += bytes([10 * k] * 1024)
        blob += bytes([10 * k + 1] * 1024)
        blob += bytes([10 * k + 2] * 1024)
    records = read_cifar_batch(bytes(blob))
    assert [r.label for r in records] == [0, 1, 2, 3]
    for k, rec in enumerate(records):
        assert rec.image.data == bytes([10 * k, 10 * k + 1, 10 * k + 2]) * 1024

    # one lit byte in the green plane lands at row-major (col 2, row 1)
    single = bytearray(3073)
    single[1 + 1024 + 34] = 77
    rec = read_cifar_batch(bytes(single))[0]
    assert rec.image.pixel(2, 1) == (0, 77, 0)


@criterion("metrics arithmetic (72% crafted file; 1,000 recount-oracle sets)")
def test_metrics_arithmetic():
    records = []
    for i in range(200):
        true = i % 10
        adv = (true + 3) % 10 if i < 144 else true
        records.append(PredictionRecord(i, true, true, adv))
    assert compute_asr(records) == 0.72

    rng = random.Random(0x3C0)
    for _ in range(1000):
        n = rng.randrange(1, 40)
        recs = [
            PredictionRecord(i, rng.randrange(10), rng.randrange(10), rng.randrange(10))
            for i in range(n)
        ]
        report = compute_report(recs)

        adv_wrong = sum(1 for r in recs if r.adv_pred != r.true_label)
        clean_right = sum(1 for r in recs if r.clean_pred == r.true_label)
        flipped = sum(
            1 for r in recs if r.clean_pred == r.true_label and r.adv_pred != r.true_label
        )
        confusion = [[0] * 10 for _ in range(10)]
        for r in recs:
            confusion[r.true_label][r.adv_pred] += 1

        assert report.asr == adv_wrong / n
        assert report.clean_accuracy == clean_right / n
        if clean_right == 0:
            assert report.flip_rate == 0.0 and report.flip_rate_degenerate
        else:
            assert report.flip_rate == flipped / clean_right
        assert [list(row) for row in report.confusion] == confusion
