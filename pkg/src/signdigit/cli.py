"""Operator CLI: train, evaluate, predict, serve, preview augmentation,
and generate the synthetic demo dataset.

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import dataset, imaging, metrics, model_io, nn, service, speech, synth
from .augment import AugmentPolicy, random_augment
from .train import TrainConfig, fit, history_to_csv, predict


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _fraction(text: str) -> float:
    value = float(text)
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError(f"must be in (0, 1), got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="signdigit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a model on a class-per-directory tree")
    p.add_argument("--data", required=True, help="dataset root (root/<digit>/*.pgm|*.ppm)")
    p.add_argument("--out", required=True, help="model file to write")
    p.add_argument("--epochs", type=_positive_int, default=100)
    p.add_argument("--batch", type=_positive_int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--augment", action="store_true")
    p.add_argument("--test-fraction", type=_fraction, default=70 / 320)
    p.add_argument("--report-dir", default=None, help="where history/report land (default: model dir)")

    p = sub.add_parser("eval", help="evaluate a model over a dataset tree")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out-dir", default="eval-report")

    p = sub.add_parser("predict", help="classify one netpbm image")
    p.add_argument("--model", required=True)
    p.add_argument("--image", required=True)
    p.add_argument("--speak", action="store_true", help="also write <image>.wav")

    p = sub.add_parser("serve", help="run the HTTP classification service")
    p.add_argument("--model", default=None)
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--host", default=None)
    p.add_argument("--static-dir", default=None)
    p.add_argument("--translator", default=None, help="'builtin' or an http endpoint")
    p.add_argument("--tts", default=None, help="'offline' or an http endpoint")

    p = sub.add_parser("augment-preview", help="emit augmented variants of one image")
    p.add_argument("--image", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--count", type=_positive_int, default=8)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("synth", help="write the synthetic glyph dataset tree")
    p.add_argument("--out", required=True)
    p.add_argument("--per-class", type=_positive_int, default=40)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _cmd_train(args) -> int:
    manifest = dataset.load_dataset(args.data)
    for path, reason in manifest.skipped:
        print(f"skipping {path}: {reason}", file=sys.stderr)
    train_idx, test_idx = dataset.stratified_split(
        manifest, dataset.SplitSpec(args.test_fraction, args.seed)
    )
    x, y = manifest.arrays()
    split = ((x[train_idx], y[train_idx]), (x[test_idx], y[test_idx]))

    spec = nn.default_architecture()
    config = TrainConfig(
        epochs=args.epochs,
        batch_size=args.batch,
        seed=args.seed,
        augment=args.augment,
        policy=AugmentPolicy(seed=args.seed),
    )
    params, history = fit(spec, split, config)

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    model_io.save_model(spec, params, out)

    report_dir = Path(args.report_dir) if args.report_dir else out.parent
    report_dir.mkdir(parents=True, exist_ok=True)
    (report_dir / "history.csv").write_text(history_to_csv(history))
    final = history[-1]
    report = {
        "epochs": config.epochs,
        "augment": config.augment,
        "parameter_count": spec.parameter_count(),
        "final_train_accuracy": final.train_acc,
        "final_val_accuracy": final.val_acc,
        "final_val_loss": final.val_loss,
    }
    (report_dir / "report.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    print(f"final_val_accuracy={final.val_acc:.4f}")
    return 0


def _cmd_eval(args) -> int:
    spec, params = model_io.load_model(args.model)
    manifest = dataset.load_dataset(args.data)
    x, y = manifest.arrays()
    preds = []
    scores = []
    for img in x:
        digit, probs = predict(spec, params, img)
        preds.append(digit)
        scores.append(probs)
    cm = metrics.confusion(preds, y)
    curves = {}
    for k in range(10):
        try:
            curves[k] = metrics.roc_one_vs_all(np.stack(scores), y, k)
        except metrics.ClassAbsentError:
            pass
    header_only = "epoch,train_loss,train_acc,val_loss,val_acc\n"
    written = metrics.export_report(cm, curves, header_only, args.out_dir)
    print(f"accuracy={metrics.accuracy(cm):.4f}")
    print(f"report: {', '.join(str(p) for p in written)}")
    return 0


def _cmd_predict(args) -> int:
    spec, params = model_io.load_model(args.model)
    raster = imaging.decode_netpbm(Path(args.image).read_bytes())
    gray = imaging.preprocess(raster)
    digit, probs = predict(spec, params, gray)
    bangla, clip = speech.speak_digit(digit)
    print(f"digit={digit} p={probs[digit]:.6f} bangla={bangla}")
    if args.speak:
        wav_path = Path(args.image + ".wav")
        wav_path.write_bytes(speech.wav_encode(clip))
        print(f"wrote {wav_path}", file=sys.stderr)
    return 0


def _cmd_serve(args) -> int:
    env_config = service.ServiceConfig.from_env()
    if env_config is None and args.model is None:
        print("serve needs --model or SIGNDIGIT_CONFIG", file=sys.stderr)
        return 2
    config = env_config or service.ServiceConfig(model_path=args.model)
    if args.model is not None:
        config.model_path = args.model
    if args.port is not None:
        config.port = args.port
    if args.host is not None:
        config.host = args.host
    if args.static_dir is not None:
        config.static_dir = args.static_dir
    if args.translator is not None:
        config.translator = (
            {"kind": "builtin-lexicon"}
            if args.translator == "builtin"
            else {"kind": "external-http", "endpoint": args.translator}
        )
    if args.tts is not None:
        config.tts = (
            {"kind": "offline-tone"}
            if args.tts == "offline"
            else {"kind": "external-http", "endpoint": args.tts}
        )
    service.serve(config)
    return 0


def _cmd_augment_preview(args) -> int:
    raster = imaging.decode_netpbm(Path(args.image).read_bytes())
    gray = imaging.preprocess(raster)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    policy = AugmentPolicy(seed=args.seed)
    for i in range(args.count):
        variant = random_augment(gray, policy, i)
        raster_out = imaging.RasterImage.from_array(
            np.floor(variant * 255.0 + 0.5).astype(np.uint8)
        )
        (out_dir / f"augment_{i:03d}.pgm").write_bytes(imaging.encode_netpbm(raster_out))
    print(f"wrote {args.count} previews to {out_dir}")
    return 0


def _cmd_synth(args) -> int:
    count = synth.write_dataset_tree(args.out, args.per_class, args.seed)
    print(f"wrote {count} images under {args.out}")
    return 0


_COMMANDS = {
    "train": _cmd_train,
    "eval": _cmd_eval,
    "predict": _cmd_predict,
    "serve": _cmd_serve,
    "augment-preview": _cmd_augment_preview,
    "synth": _cmd_synth,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
