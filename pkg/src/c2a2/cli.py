"""Command-line surface.

Subcommands: calibrate, pseudolabel, map, sample, grid, losses eval, fed,
ere, smoothness, au-table. Data goes to --out (or stdout), diagnostics to
stderr. Exit codes: 0 success, 1 validation error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys

import numpy as np

from c2a2 import __version__
from c2a2.aus import category_to_aus, restrict_activation
from c2a2.categories import (
    BasicEmotion,
    CompoundEmotion,
    Space,
    display_name,
    is_representable,
    parse_category,
)
from c2a2.errors import C2A2Error
from c2a2.geometry import (
    AVPoint,
    AxisFrame,
    EmotionPoint,
    SampleMode,
    calibrate_axes,
    load_frame,
    nearest_emotion,
    sample_conditions,
    save_frame,
    frame_to_json,
)
from c2a2.losses import au_kl_loss_batch, av_loss_batch
from c2a2.metrics import SyntheticOracle, ere, fed, smoothness
from c2a2.pipeline import (
    CircleGridSpec,
    RayGridSpec,
    emit_condition_grid,
    format_au_table,
    join_labels,
    load_au_csv,
    load_av_csv,
    load_labels_csv,
    load_zhat_csv,
    pseudolabel,
    read_features_csv,
    write_au_table_csv,
    write_labels_csv,
)
from c2a2.regions import c2a2_region_label


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on usage problems; the contract wants 1.
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _load_frame_arg(args) -> AxisFrame:
    if not getattr(args, "frame", None):
        raise _UsageError("this command needs --frame <frame.json>")
    return load_frame(args.frame)


def _metric_json(metric: str, value: float, **extra) -> str:
    doc = {"metric": metric, "value": value}
    doc.update(extra)
    return json.dumps(doc)


def build_parser() -> _Parser:
    parser = _Parser(prog="c2a2", description=__doc__)
    parser.add_argument("--version", action="version", version=f"c2a2 {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed")
    common.add_argument("--frame", help="axis-frame JSON file")
    common.add_argument("--mode", choices=["2d", "3d"], default="3d", help="representation space")
    common.add_argument("--out", help="output file (default: stdout)")

    p = sub.add_parser("calibrate", parents=[common], help="calibrate axes from labelled AV rows")
    p.add_argument("--av", required=True, help="av_labels.csv with a category column")
    p.add_argument("--neutral-rho", type=float, default=0.1)

    p = sub.add_parser("pseudolabel", parents=[common], help="produce labels_out.csv")
    p.add_argument("--av", required=True)
    p.add_argument("--au", required=True)
    p.add_argument("--zhat")

    p = sub.add_parser("map", parents=[common], help="category or point lookups")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--category", help="emotion category name")
    group.add_argument("--point", help="comma-separated a,v,z")

    p = sub.add_parser("sample", parents=[common], help="draw condition samples")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--jitter-deg", type=float, default=10.0)

    p = sub.add_parser("grid", parents=[common], help="emit a conditioning grid")
    p.add_argument("--kind", choices=["circle", "ray"], default="circle")
    p.add_argument("--z-levels", default="0", help="comma-separated lifts (circle)")
    p.add_argument("--n-theta", type=int, default=10, help="angles per ring (circle)")
    p.add_argument("--radius", type=float, default=1.0, help="ring radius (circle)")
    p.add_argument("--categories", default="happy", help="comma-separated categories (ray)")
    p.add_argument("--steps", type=int, default=10, help="intensity steps (ray)")

    p = sub.add_parser("losses", help="loss evaluation commands")
    losses_sub = p.add_subparsers(dest="losses_command", metavar="SUBCOMMAND")
    pe = losses_sub.add_parser("eval", parents=[common], help="mean batch loss from CSV files")
    pe.add_argument("--kind", choices=["av", "au"], required=True)
    pe.add_argument("--pred", required=True, help="predictions CSV")
    pe.add_argument("--labels", help="av_labels.csv (kind=av)")
    pe.add_argument("--targets", help="labels_out.csv (kind=au)")

    p = sub.add_parser("fed", parents=[common], help="Fréchet distance between feature sets")
    p.add_argument("--real", required=True, help="features.csv of the reference set")
    p.add_argument("--gen", required=True, help="features.csv of the generated set")

    p = sub.add_parser("ere", parents=[common], help="reconstruction error via budgeted search")
    p.add_argument("--budget", type=int, default=500)
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--sharpness", type=float, default=10.0, help="synthetic-oracle sharpness")

    p = sub.add_parser("smoothness", parents=[common], help="output variation along intensity rays")
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--sharpness", type=float, default=10.0, help="synthetic-oracle sharpness")

    sub.add_parser("au-table", parents=[common], help="print the category/AU table")
    return parser


def _cmd_calibrate(args) -> None:
    records = load_av_csv(args.av)
    samples = []
    for rec in records:
        if rec.category is None:
            continue
        cat = parse_category(rec.category)
        if not isinstance(cat, BasicEmotion):
            raise _UsageError(f"calibration rows must carry basic emotions, got {rec.category!r}")
        samples.append((cat, AVPoint(rec.valence, rec.arousal)))
    if not samples:
        raise _UsageError(f"{args.av}: no rows carry a category column")
    frame = calibrate_axes(samples, neutral_rho=args.neutral_rho)
    if args.out:
        save_frame(frame, args.out)
    else:
        sys.stdout.write(frame_to_json(frame) + "\n")


def _cmd_pseudolabel(args) -> None:
    frame = _load_frame_arg(args)
    av = load_av_csv(args.av)
    au = load_au_csv(args.au)
    zhat = load_zhat_csv(args.zhat) if args.zhat else None
    if zhat is None and args.mode == "3d":
        logging.getLogger("c2a2").info("no --zhat file; falling back to the planar pipeline")
    rows, summary = join_labels(av, au, zhat)
    labels = pseudolabel(rows, frame)
    out = args.out or "labels_out.csv"
    write_labels_csv(labels, out)
    print(
        f"matched {summary.matched} rows; unmatched: av={len(summary.unmatched_av)}"
        f" au={len(summary.unmatched_au)} zhat={len(summary.unmatched_zhat)}",
        file=sys.stderr,
    )
    if summary.unmatched_av:
        print("unmatched av ids: " + ",".join(summary.unmatched_av), file=sys.stderr)
    if summary.unmatched_au:
        print("unmatched au ids: " + ",".join(summary.unmatched_au), file=sys.stderr)
    if summary.unmatched_zhat:
        print("unmatched zhat ids: " + ",".join(summary.unmatched_zhat), file=sys.stderr)


def _cmd_map(args) -> None:
    if args.category:
        cat = parse_category(args.category)
        if cat is BasicEmotion.NEUTRAL:
            doc = {"category": cat.value, "aus": [], "representable_2d": True, "representable_3d": True}
        else:
            aus = sorted(category_to_aus(cat))
            if isinstance(cat, CompoundEmotion):
                rep2, rep3 = is_representable(cat, Space.TWO_D), is_representable(cat, Space.THREE_D)
            else:
                rep2 = rep3 = True
            doc = {
                "category": cat.value,
                "aus": aus,
                "representable_2d": rep2,
                "representable_3d": rep3,
            }
        _emit(json.dumps(doc), args.out)
        return
    frame = _load_frame_arg(args)
    parts = [float(x) for x in args.point.split(",")]
    if len(parts) == 2:
        parts.append(0.0)
    if len(parts) != 3:
        raise _UsageError("--point wants a,v[,z]")
    point = EmotionPoint(*parts)
    region = c2a2_region_label(point, frame)
    nearest, intensity = nearest_emotion(point, frame)
    doc = {
        "point": parts,
        "region": region.value,
        "nearest": nearest.value,
        "intensity": intensity,
    }
    _emit(json.dumps(doc), args.out)


def _point_rows(points) -> str:
    lines = ["idx,theta,a,v,z"]
    for idx, p in enumerate(points):
        phi = math.atan2(p.v, p.a)
        theta = phi + 2.0 * math.pi if phi < 0.0 else phi
        lines.append(
            f"{idx},{format(theta, '.17g')},{format(p.a, '.17g')},"
            f"{format(p.v, '.17g')},{format(p.z, '.17g')}"
        )
    return "\n".join(lines) + "\n"


def _cmd_sample(args) -> None:
    frame = _load_frame_arg(args)
    mode = SampleMode.UNIFORM_2D if args.mode == "2d" else SampleMode.AXIS_PROXIMITY_3D
    points = sample_conditions(mode, args.n, args.seed, frame, jitter_deg=args.jitter_deg)
    _emit(_point_rows(points), args.out)


def _cmd_grid(args) -> None:
    frame = _load_frame_arg(args)
    if args.kind == "circle":
        z_levels = tuple(float(x) for x in args.z_levels.split(","))
        spec: CircleGridSpec | RayGridSpec = CircleGridSpec(z_levels, args.n_theta, args.radius)
    else:
        cats = tuple(parse_category(c) for c in args.categories.split(","))
        spec = RayGridSpec(cats, args.steps)
    out = args.out or "conditions.csv"
    count = emit_condition_grid(spec, frame, out)
    print(f"wrote {count} rows to {out}", file=sys.stderr)


def _read_av_pred_csv(path):
    # Prediction schema: image_id,a,v[,z]
    import csv

    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header[0].strip() != "image_id" or len(header) not in (3, 4):
            raise _UsageError(f"{path}: expected header image_id,a,v[,z]")
        ids, coords = [], []
        for row in reader:
            if not row:
                continue
            ids.append(row[0].strip())
            coords.append([float(x) for x in row[1:]])
    return ids, np.array(coords)


def _cmd_losses_eval(args) -> None:
    if args.kind == "av":
        if not args.labels:
            raise _UsageError("losses eval --kind av needs --labels av_labels.csv")
        pred_ids, pred = _read_av_pred_csv(args.pred)
        label_by_id = {r.image_id: r for r in load_av_csv(args.labels)}
        keep = [i for i, pid in enumerate(pred_ids) if pid in label_by_id]
        if not keep:
            raise _UsageError("no common image ids between predictions and labels")
        labels = np.array(
            [[label_by_id[pred_ids[i]].valence, label_by_id[pred_ids[i]].arousal] for i in keep]
        )
        values, _ = av_loss_batch(pred[keep], labels)
        _emit(_metric_json("av_loss", float(values.mean()), n=len(keep)), args.out)
        return
    if not args.targets:
        raise _UsageError("losses eval --kind au needs --targets labels_out.csv")
    au_by_id = {r.image_id: r for r in load_au_csv(args.pred)}
    targets = load_labels_csv(args.targets)
    pairs = [(au_by_id[t.image_id], t) for t in targets if t.image_id in au_by_id]
    if not pairs:
        raise _UsageError("no common image ids between predictions and targets")
    pred = restrict_activation(np.vstack([p.probs for p, _ in pairs]))
    tgt = np.vstack([t.au_target for _, t in pairs])
    values, _ = au_kl_loss_batch(pred, tgt)
    _emit(_metric_json("au_kl_loss", float(values.mean()), n=len(pairs)), args.out)


def _cmd_fed(args) -> None:
    _, real = read_features_csv(args.real)
    _, gen = read_features_csv(args.gen)
    value = fed(real, gen)
    _emit(
        _metric_json("fed", value, n=int(real.shape[0] + gen.shape[0]), seed=args.seed),
        args.out,
    )


def _cmd_ere(args) -> None:
    frame = _load_frame_arg(args)
    oracle = SyntheticOracle(frame, sharpness=args.sharpness)
    value = ere(
        oracle,
        budget=args.budget,
        runs=args.runs,
        seed=args.seed,
        frame=frame,
        mode=args.mode,
    )
    _emit(
        _metric_json(
            "ere", value, n=args.budget * args.runs * 6, seed=args.seed, budget=args.budget,
            runs=args.runs, mode=args.mode,
        ),
        args.out,
    )


def _cmd_smoothness(args) -> None:
    frame = _load_frame_arg(args)
    oracle = SyntheticOracle(frame, sharpness=args.sharpness)
    value = smoothness(oracle, frame, n_steps=args.steps)
    _emit(_metric_json("smoothness", value, n=args.steps * 6, seed=args.seed), args.out)


def _cmd_au_table(args) -> None:
    if args.out:
        write_au_table_csv(args.out)
    else:
        sys.stdout.write(format_au_table())


def cli_main(argv=None) -> int:
    """Run the CLI; returns the process exit code."""
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise _UsageError(parser.format_usage())
        if args.command == "losses" and getattr(args, "losses_command", None) is None:
            raise _UsageError("usage: c2a2 losses eval ...")
        handlers = {
            "calibrate": _cmd_calibrate,
            "pseudolabel": _cmd_pseudolabel,
            "map": _cmd_map,
            "sample": _cmd_sample,
            "grid": _cmd_grid,
            "losses": _cmd_losses_eval,
            "fed": _cmd_fed,
            "ere": _cmd_ere,
            "smoothness": _cmd_smoothness,
            "au-table": _cmd_au_table,
        }
        handlers[args.command](args)
        return 0
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except (C2A2Error, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
