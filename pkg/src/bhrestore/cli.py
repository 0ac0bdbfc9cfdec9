"""Command-line front end.

Subcommands: denoise, deblur, inpaint, metrics, synth, slice, sweep.
Exit codes: 0 success, 1 solver divergence, 2 usage error, 3 I/O error.
Results go to the files named by flags; metrics prints to stdout and all
error text goes to stderr.  ``BHRESTORE_THREADS`` caps sweep parallelism.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import imgio, synth
from .forward import CircularBlurOp, IdentityOp, MaskOp, gaussian_kernel
from .imgio import NetpbmParseError
from .quality import psnr, ssim
from .solver import VARIANTS, SolverConfig, SolverDivergenceError, solve_rgb

THREADS_ENV = "BHRESTORE_THREADS"


def _nonneg_float(text):
    value = float(text)
    if value < 0 or not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"must be a finite value >= 0: {text}")
    return value


def _pos_float(text):
    value = float(text)
    if value <= 0 or not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"must be a finite value > 0: {text}")
    return value


def _pos_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be an integer >= 1: {text}")
    return value


def _float_list(text):
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated floats: {text}")
    if not values:
        raise argparse.ArgumentTypeError("grid must not be empty")
    return values


def _noise_spec(text):
    kind, sep, level = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError("expected gaussian:VAR or impulse:DENSITY")
    try:
        return kind.lower(), float(level)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad noise level {level!r}")


def _add_solver_flags(sub):
    sub.add_argument("--alpha", type=_nonneg_float, required=True)
    sub.add_argument("--beta", type=_nonneg_float, default=0.0)
    sub.add_argument("--lambda", dest="lam", type=_pos_float, default=1.0)
    sub.add_argument("--iters", type=_pos_int, default=300)
    sub.add_argument("--tol", type=_nonneg_float, default=1e-4)
    sub.add_argument("--fidelity", choices=("l1", "l2"), default="l2")
    sub.add_argument("--reg", choices=("iso", "aniso"), default="iso")
    sub.add_argument(
        "--splitting", choices=("standard", "alternative"), default="standard"
    )
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--input", required=True)
    sub.add_argument("--output", required=True)
    sub.add_argument("--trace", help="write per-iteration diagnostics CSV here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bhrestore",
        description="First/second-order TV image restoration (split Bregman).",
    )
    cmds = parser.add_subparsers(dest="command", required=True)

    for name in ("denoise", "deblur", "inpaint"):
        sub = cmds.add_parser(name)
        _add_solver_flags(sub)
        if name == "deblur":
            sub.add_argument("--sigma", type=_pos_float, required=True)
            sub.add_argument("--radius", type=_pos_int)
        if name == "inpaint":
            sub.add_argument("--mask", required=True)
        sub.set_defaults(func=_run_solve, task=name)

    sub = cmds.add_parser("metrics")
    sub.add_argument("--ref", required=True)
    sub.add_argument("--test", required=True)
    sub.set_defaults(func=_run_metrics)

    sub = cmds.add_parser("synth")
    sub.add_argument(
        "--shape", choices=("geometric", "stripe", "stripe45"), required=True
    )
    sub.add_argument("--width", type=_pos_int, required=True)
    sub.add_argument("--height", type=_pos_int, required=True)
    sub.add_argument("--noise", type=_noise_spec)
    sub.add_argument("--gap-fraction", type=_pos_float, default=0.3)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--output", required=True)
    sub.add_argument("--mask-output", help="write the stripe inpainting mask here")
    sub.set_defaults(func=_run_synth)

    sub = cmds.add_parser("slice")
    sub.add_argument("--input", required=True)
    sub.add_argument("--row", default="middle", help="1-based row index or 'middle'")
    sub.add_argument("--output", required=True)
    sub.set_defaults(func=_run_slice)

    sub = cmds.add_parser("sweep")
    sub.add_argument("--alpha-grid", type=_float_list, required=True)
    sub.add_argument("--beta-grid", type=_float_list, required=True)
    sub.add_argument("--input", required=True, help="noisy image to denoise")
    sub.add_argument("--ref", required=True, help="clean reference for the metrics")
    sub.add_argument("--output", required=True)
    sub.add_argument("--lambda", dest="lam", type=_pos_float, default=1.0)
    sub.add_argument("--iters", type=_pos_int, default=300)
    sub.add_argument("--tol", type=_nonneg_float, default=1e-4)
    sub.add_argument("--fidelity", choices=("l1", "l2"), default="l2")
    sub.add_argument("--reg", choices=("iso", "aniso"), default="iso")
    sub.add_argument(
        "--splitting", choices=("standard", "alternative"), default="standard"
    )
    sub.add_argument("--seed", type=int, default=0)
    sub.set_defaults(func=_run_sweep)

    return parser


def _pick_solver(args):
    key = (args.fidelity, args.reg, args.splitting)
    solver = VARIANTS.get(key)
    if solver is None:
        raise ValueError(
            f"unsupported combination fidelity={args.fidelity} reg={args.reg} "
            f"splitting={args.splitting}"
        )
    return solver


def _write_trace(path, traces):
    lines = ["iter,rel_residual,gap1,gap2,energy"]
    for trace in traces:
        lines.extend(
            f"{k},{r!r},{g1!r},{g2!r},{e!r}" for k, r, g1, g2, e in trace.rows()
        )
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def _run_solve(args) -> int:
    solver = _pick_solver(args)
    cfg = SolverConfig(
        alpha=args.alpha,
        beta=args.beta,
        lam=args.lam,
        max_outer=args.iters,
        residual_tol=args.tol,
        seed=args.seed,
    )
    u0 = imgio.read_image(args.input)
    shape = u0.shape[-2:]
    if args.task == "denoise":
        op = IdentityOp()
    elif args.task == "deblur":
        op = CircularBlurOp(gaussian_kernel(args.sigma, args.radius))
    else:
        mask = imgio.load_mask(args.mask)
        if mask.shape != shape:
            raise ValueError(
                f"mask shape {mask.shape} does not match image shape {shape}"
            )
        op = MaskOp(mask)

    if u0.ndim == 3:
        result, traces = solve_rgb(u0, op, cfg, solver=solver)
    else:
        result, trace = solver(u0, op, cfg)
        traces = [trace]
    imgio.write_image(args.output, result)
    if args.trace:
        _write_trace(args.trace, traces)
    return 0


def _to_gray(img):
    return imgio.luma(img) if img.ndim == 3 else img


def _run_metrics(args) -> int:
    ref = _to_gray(imgio.read_image(args.ref))
    test = _to_gray(imgio.read_image(args.test))
    print(f"SSIM={ssim(test, ref):.6f} PSNR={psnr(test, ref):.6f}")
    return 0


def _run_synth(args) -> int:
    mask = None
    if args.shape == "geometric":
        img = synth.make_geometric(args.height, args.width)
    else:
        angle = 45 if args.shape == "stripe45" else 0
        img, mask = synth.make_stripe(
            args.height, args.width, angle=angle, gap_fraction=args.gap_fraction
        )
    if args.noise is not None:
        kind, level = args.noise
        img = synth.add_noise(img, synth.NoiseSpec(kind, level, args.seed))
    imgio.write_image(args.output, img)
    if args.mask_output:
        if mask is None:
            raise ValueError("--mask-output only applies to stripe shapes")
        imgio.write_image(args.mask_output, mask)
    return 0


def _run_slice(args) -> int:
    img = _to_gray(imgio.read_image(args.input))
    row = args.row if args.row == "middle" else int(args.row)
    imgio.export_slice(img, row, args.output)
    return 0


def _sweep_cell(payload):
    (alpha, beta, noisy, ref, key, lam, iters, tol, seed) = payload
    try:
        cfg = SolverConfig(
            alpha=alpha,
            beta=beta,
            lam=lam,
            max_outer=iters,
            residual_tol=tol,
            seed=seed,
        )
        restored, _ = VARIANTS[key](noisy, IdentityOp(), cfg)
        return ssim(restored, ref), psnr(restored, ref), None
    except Exception as exc:  # recorded as nan cells, sweep still succeeds
        return math.nan, math.nan, str(exc)


def _run_sweep(args) -> int:
    key = (args.fidelity, args.reg, args.splitting)
    if key not in VARIANTS:
        raise ValueError(
            f"unsupported combination fidelity={args.fidelity} reg={args.reg} "
            f"splitting={args.splitting}"
        )
    noisy = _to_gray(imgio.read_image(args.input))
    ref = _to_gray(imgio.read_image(args.ref))
    cells = [(a, b) for a in args.alpha_grid for b in args.beta_grid]
    payloads = [
        (a, b, noisy, ref, key, args.lam, args.iters, args.tol, args.seed)
        for a, b in cells
    ]
    workers = int(os.environ.get(THREADS_ENV, "1"))
    if workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(cells))) as pool:
            results = list(pool.map(_sweep_cell, payloads))
    else:
        results = [_sweep_cell(p) for p in payloads]

    warnings = 0
    lines = ["alpha,beta,ssim,psnr"]
    for (alpha, beta), (s, p, err) in zip(cells, results):
        lines.append(f"{alpha!r},{beta!r},{s!r},{p!r}")
        if err is not None:
            warnings += 1
            print(f"warning: cell alpha={alpha} beta={beta}: {err}", file=sys.stderr)
    with open(args.output, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
    if warnings:
        print(f"{warnings} cell(s) failed", file=sys.stderr)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except SolverDivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (NetpbmParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
