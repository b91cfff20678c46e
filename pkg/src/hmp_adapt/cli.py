"""Command-line interface: hmp-adapt gen|retarget|train|eval|matrix."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .harness import (CONDITIONS, ExperimentConfig, generate_corpus, load_config,
                      load_corpus, make_matrix_configs, run_condition, run_matrix,
                      save_corpus, zero_velocity_errors)
from .metrics import write_report
from .motion_io import downsample, read_motion, remove_global, write_motion
from .predictor import load_model, save_model
from .retarget import scale_fit
from .skeleton import default_skeleton, load_skeleton


def _load_experiment(args) -> ExperimentConfig:
    config = load_config(args.config) if args.config else ExperimentConfig()
    if getattr(args, "seed", None) is not None:
        config = replace(config, seed=args.seed)
    if getattr(args, "action", None) is not None:
        config = replace(config, held_out_action=args.action)
    if getattr(args, "condition", None) is not None:
        config = replace(config, condition=args.condition)
    config.validate()
    return config


def _corpus_for(config: ExperimentConfig, args):
    if getattr(args, "data", None):
        return load_corpus(args.data, target_fps=config.corpus.target_fps)
    return generate_corpus(config)


def cmd_gen(args) -> int:
    config = _load_experiment(args)
    corpus_cfg = config.corpus
    if args.families is not None:
        corpus_cfg = replace(corpus_cfg, n_actions=args.families)
    if args.duration is not None:
        corpus_cfg = replace(corpus_cfg, duration_frames=args.duration)
    config = replace(config, corpus=corpus_cfg)
    subjects = None
    if args.subjects is not None:
        available = sorted(corpus_cfg.subject_scales)
        if not 1 <= args.subjects <= len(available):
            raise SystemExit(f"--subjects must be in 1..{len(available)} "
                             "(the configured subject-scale map)")
        subjects = available[:args.subjects]
    corpus = generate_corpus(config, subjects=subjects)
    paths = save_corpus(corpus, args.out)
    print(f"wrote {len(paths)} motion files to {args.out}")
    return 0


def cmd_retarget(args) -> int:
    skeleton = load_skeleton(args.skeleton) if args.skeleton else default_skeleton()
    motion = read_motion(args.input, skeleton)
    if args.fps is not None:
        motion = downsample(motion, args.fps)
    fitted = scale_fit(motion, skeleton)
    if args.normalize:
        mode = {"t": "translation", "tr": "translation+rotation"}[args.normalize]
        fitted = remove_global(fitted, skeleton, mode)
    write_motion(fitted, args.out)
    print(f"wrote {args.out}")
    return 0


def cmd_train(args) -> int:
    config = _load_experiment(args)
    if config.held_out_action is None:
        raise SystemExit("config must set held_out_action (or pass --action)")
    corpus = _corpus_for(config, args)
    outcome = run_condition(config, corpus)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for choice, model in sorted(outcome.models.items()):
        suffix = "" if len(outcome.models) == 1 else f"_{choice}"
        path = out_dir / f"model_{outcome.action}_{outcome.condition}{suffix}.json"
        save_model(model, path)
        print(f"wrote {path}")
    print(f"errors (mm): {outcome.errors}")
    return 0


def cmd_eval(args) -> int:
    config = _load_experiment(args)
    if config.held_out_action is None:
        raise SystemExit("config must set held_out_action (or pass --action)")
    corpus = _corpus_for(config, args)
    skeleton = default_skeleton()
    if args.model:
        from .harness import corpus_motion, evaluate_windows, evaluation_recording
        from .predictor import predict
        model = load_model(args.model)
        choices = ("A", "B") if config.recording_choice == "both-averaged" else (config.recording_choice,)
        per_choice = []
        for choice in choices:
            cfg = replace(config, recording_choice=choice)
            eval_motion = corpus_motion(corpus, config.held_out_action, config.test_subject,
                                   evaluation_recording(cfg))
            per_choice.append(evaluate_windows(
                lambda obs: predict(model, obs, config.train.predicted_frames),
                eval_motion, config.train.observed_frames, config.train.predicted_frames,
                config.horizons_ms, skeleton,
            ))
        errors = {h: sum(e[h] for e in per_choice) / len(per_choice) for h in config.horizons_ms}
        condition = config.condition
    else:
        errors = zero_velocity_errors(config, corpus, skeleton)
        condition = "zero_velocity"
    rows = [(config.held_out_action, h, errors[h], condition) for h in config.horizons_ms]
    write_report(rows, args.out)
    print(f"wrote {args.out}")
    for h in config.horizons_ms:
        print(f"  {h} ms: {errors[h]:.3f} mm")
    return 0


def cmd_matrix(args) -> int:
    config = _load_experiment(args)
    conditions = tuple(args.conditions.split(",")) if args.conditions else CONDITIONS
    for c in conditions:
        if c not in CONDITIONS:
            raise SystemExit(f"unknown condition {c!r}")
    configs = make_matrix_configs(config, conditions=conditions)
    table = run_matrix(configs, out_dir=args.out)
    for condition in table.conditions:
        avg = {h: round(table.average(condition, h), 3) for h in table.horizons_ms}
        print(f"{condition}: {avg}")
    print(f"artifacts in {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hmp-adapt",
        description="Scale-fitted pose retargeting and test-domain-aware "
                    "training of a small motion predictor.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate the synthetic motion corpus")
    p.add_argument("--config", help="experiment config JSON")
    p.add_argument("--families", type=int, help="number of motion families")
    p.add_argument("--subjects", type=int, help="number of subjects (uses the default scale map)")
    p.add_argument("--duration", type=int, help="frames per recording before downsampling")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True, help="output directory for motion CSVs")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("retarget", help="scale-fit a motion CSV to a skeleton")
    p.add_argument("--skeleton", help="skeleton JSON (default: built-in 17-joint humanoid)")
    p.add_argument("--in", dest="input", required=True, help="input motion CSV")
    p.add_argument("--out", required=True, help="output motion CSV")
    p.add_argument("--fps", type=int, help="downsample to this frame rate first")
    p.add_argument("--normalize", choices=["t", "tr"],
                   help="remove global translation (t) or translation+rotation (tr)")
    p.set_defaults(func=cmd_retarget)

    p = sub.add_parser("train", help="train one (action, condition) cell")
    p.add_argument("--config", help="experiment config JSON")
    p.add_argument("--action", help="held-out action (overrides config)")
    p.add_argument("--condition", choices=CONDITIONS)
    p.add_argument("--data", help="corpus directory (default: generate from config)")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="evaluate a model (or zero-velocity) on the held-out action")
    p.add_argument("--config", help="experiment config JSON")
    p.add_argument("--action", help="held-out action (overrides config)")
    p.add_argument("--condition", choices=CONDITIONS)
    p.add_argument("--model", help="model JSON; omitted: zero-velocity reference")
    p.add_argument("--data", help="corpus directory (default: generate from config)")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True, help="output report CSV")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("matrix", help="full leave-one-action-out sweep")
    p.add_argument("--config", help="experiment config JSON")
    p.add_argument("--conditions", help="comma-separated subset of conditions")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_matrix)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
