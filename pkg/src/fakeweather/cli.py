"""Command-line pipelines: mask generation, application, batch tooling, scoring.

Exit codes: 0 on success, 2 for usage errors (bad flags or flag values),
3 for malformed or inconsistent data files, 4 for I/O failures.  Every
subcommand is fully reproducible: identical flags and inputs yield
byte-identical outputs.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .dataset import CIFAR_DIMS, perturb_batch, read_cifar_batch, write_cifar_batch
from .errors import DimensionMismatch, FormatError
from .image import ImageFormat, apply_mask, decode_image, encode_image
from .maskgen import (
    AttackConfig,
    ImageDims,
    check_mask_dims,
    gen_mask,
    perturbation_budget,
    read_mask_file,
    write_mask_file,
)
from .metrics import compute_report, read_predictions_file, render_report_kv, render_report_table
from .patterns import WeatherKind

USAGE_EXIT = 2
FORMAT_EXIT = 3
IO_EXIT = 4


def _add_gen_mask(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("gen-mask", help="generate a weather mask from an image size")
    p.add_argument("--kind", required=True, choices=[k.value for k in WeatherKind])
    p.add_argument("--width", required=True, type=int, help="image width in pixels")
    p.add_argument("--height", required=True, type=int, help="image height in pixels")
    p.add_argument("--seed", type=int, default=0, help="64-bit seed for the sparse placements")
    p.add_argument("--p-agglomerate", type=float, default=0.15,
                   help="rain: per-anchor density of crosses below the V")
    p.add_argument("--p-patch", type=float, default=0.05,
                   help="rain: per-anchor patch probability above the V")
    p.add_argument("--p-line", type=float, default=0.02,
                   help="rain: per-anchor line probability above the V")
    p.add_argument("--line-min", type=int, default=2, help="rain: shortest line length")
    p.add_argument("--line-max", type=int, default=5, help="rain: longest line length")
    p.add_argument("--stride", type=int, default=3,
                   help="rain: anchor spacing of the solid bottom row of crosses")
    p.add_argument("--p-hail", type=float, default=0.04,
                   help="hail: per-anchor blob probability")
    p.add_argument("--out", required=True, help="mask file to write")
    p.set_defaults(func=_cmd_gen_mask)


def _cmd_gen_mask(args) -> int:
    dims = check_mask_dims(ImageDims(args.width, args.height))
    config = AttackConfig(
        kind=WeatherKind(args.kind),
        seed=args.seed,
        p_agglomerate_below_v=args.p_agglomerate,
        p_patch_above_v=args.p_patch,
        p_line_above_v=args.p_line,
        line_length_range=(args.line_min, args.line_max),
        first_line_stride=args.stride,
        p_hail=args.p_hail,
    )
    mask = gen_mask(dims, config)
    write_mask_file(mask, args.out)
    print(f"perturbation_budget={perturbation_budget(mask)!r}")
    return 0


def _add_apply(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("apply", help="apply a mask file to one image")
    p.add_argument("--mask", required=True, help="mask file")
    p.add_argument("--in", dest="infile", required=True, help="input image (PPM or PNG)")
    p.add_argument("--out", required=True, help="output image; format from extension")
    p.set_defaults(func=_cmd_apply)


def _image_format_for(path: str) -> ImageFormat:
    suffix = Path(path).suffix.lower()
    if suffix == ".ppm":
        return ImageFormat.PPM
    if suffix == ".png":
        return ImageFormat.PNG
    raise ValueError(f"cannot infer image format from {path!r}; use .ppm or .png")


def _cmd_apply(args) -> int:
    out_format = _image_format_for(args.out)
    mask = read_mask_file(args.mask)
    image = decode_image(Path(args.infile).read_bytes())
    Path(args.out).write_bytes(encode_image(apply_mask(image, mask), out_format))
    return 0


def _add_batch(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("batch", help="apply a mask across a CIFAR-10 binary batch")
    p.add_argument("--mask", required=True, help="mask file (32x32)")
    p.add_argument("--cifar-in", required=True, help="input batch file")
    p.add_argument("--cifar-out", required=True, help="output batch file")
    p.add_argument("--limit", type=int, default=None,
                   help="perturb only this many records (default: all)")
    p.add_argument("--offset", type=int, default=0,
                   help="skip this many records before perturbing")
    p.set_defaults(func=_cmd_batch)


def _cmd_batch(args) -> int:
    if args.limit is not None and args.limit < 0:
        raise ValueError(f"--limit must be >= 0, got {args.limit}")
    if args.offset < 0:
        raise ValueError(f"--offset must be >= 0, got {args.offset}")
    mask = read_mask_file(args.mask)
    records = read_cifar_batch(Path(args.cifar_in).read_bytes())
    out = perturb_batch(records, mask, limit=args.limit, offset=args.offset)
    Path(args.cifar_out).write_bytes(write_cifar_batch(out))
    return 0


def _add_augment(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser(
        "augment",
        help="extend a batch with one weather-perturbed copy per (kind, seed) pair",
    )
    p.add_argument("--kinds", required=True,
                   help="comma list drawn from rain,snow,hail")
    p.add_argument("--seeds", required=True, help="comma list of integer seeds")
    p.add_argument("--cifar-in", required=True, help="input batch file")
    p.add_argument("--cifar-out", required=True, help="output batch file")
    p.set_defaults(func=_cmd_augment)


def _cmd_augment(args) -> int:
    try:
        kinds = [WeatherKind(k) for k in args.kinds.split(",")]
    except ValueError:
        raise ValueError(f"--kinds must be a comma list drawn from rain,snow,hail, got {args.kinds!r}")
    try:
        seeds = [int(s) for s in args.seeds.split(",")]
    except ValueError:
        raise ValueError(f"--seeds must be a comma list of integers, got {args.seeds!r}")
    if not kinds or not seeds:
        raise ValueError("need at least one kind and one seed")

    records = read_cifar_batch(Path(args.cifar_in).read_bytes())
    out = list(records)
    for kind in kinds:
        for seed in seeds:
            mask = gen_mask(CIFAR_DIMS, AttackConfig(kind=kind, seed=seed))
            out.extend(perturb_batch(records, mask))
    Path(args.cifar_out).write_bytes(write_cifar_batch(out))
    return 0


def _add_score(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("score", help="score a prediction file")
    p.add_argument("--preds", required=True, help="prediction file")
    p.add_argument("--format", choices=["table", "kv"], default="table")
    p.set_defaults(func=_cmd_score)


def _cmd_score(args) -> int:
    records = read_predictions_file(args.preds)
    report = compute_report(records)
    render = render_report_kv if args.format == "kv" else render_report_table
    sys.stdout.write(render(report))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fakeweather",
        description="Generate, apply and score weather-streak pixel masks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    _add_gen_mask(sub)
    _add_apply(sub)
    _add_batch(sub)
    _add_augment(sub)
    _add_score(sub)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_EXIT

    try:
        return args.func(args)
    except (FormatError, DimensionMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FORMAT_EXIT
    except ValueError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return IO_EXIT


if __name__ == "__main__":
    sys.exit(main())
