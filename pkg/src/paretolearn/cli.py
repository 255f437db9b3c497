"""Command-line entry points: run campaigns, baselines, exports, serving.

Commands::

    paretolearn run --problem F1 --seed 0 --out runs/f1
    paretolearn baseline --problem F1 --strategy sobol-random --out runs/f1-sobol
    paretolearn export-front --checkpoint runs/f1/final.ckpt --samples 1000
    paretolearn list-problems
    paretolearn serve --checkpoint runs/f1/final.ckpt --port 8765

Defaults match the standard campaign protocol (10 initial points, 20
iterations of batch 5, 1000 candidates, LCB beta 0.5).  All output files are
written temp-then-rename so a failed command leaves no partial artifacts.
"""

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import campaign, problems
from .checkpoint import CheckpointError
from .psmodel import TrainConfig


def _write_text_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _write_json_atomic(path: Path, obj) -> None:
    _write_text_atomic(path, json.dumps(obj, indent=2) + "\n")


def _config_from_flags(args) -> campaign.CampaignConfig:
    return campaign.CampaignConfig(
        problem=args.problem,
        n_init=args.init,
        n_iterations=args.iters,
        batch_size=args.batch,
        candidate_count=args.candidates,
        lcb_beta=args.beta,
        refine_candidates=getattr(args, "refine_candidates", True),
        seed=args.seed,
        train=TrainConfig(
            steps=args.train_steps,
            prefs_per_step=args.train_prefs,
            learning_rate=args.train_lr,
            lcb_beta=args.beta,
        ),
    )


def _add_budget_flags(p: argparse.ArgumentParser, problem_required=True) -> None:
    p.add_argument("--problem", required=problem_required,
                   help="registered problem name")
    p.add_argument("--seed", type=int, default=0, help="campaign seed (default 0)")
    p.add_argument("--init", type=int, default=10,
                   help="initial design size (default 10)")
    p.add_argument("--iters", type=int, default=20,
                   help="number of batched iterations (default 20)")
    p.add_argument("--batch", type=int, default=5,
                   help="evaluations per iteration (default 5)")
    p.add_argument("--candidates", type=int, default=1000,
                   help="candidate preferences per iteration (default 1000)")
    p.add_argument("--beta", type=float, default=0.5,
                   help="LCB coefficient (default 0.5)")
    p.add_argument("--train-steps", type=int, default=1000,
                   help="set-model training steps (default 1000)")
    p.add_argument("--train-prefs", type=int, default=10,
                   help="preferences per training step (default 10)")
    p.add_argument("--train-lr", type=float, default=1e-3,
                   help="set-model learning rate (default 1e-3)")
    p.add_argument("--out", default=None,
                   help="output directory (default runs/<problem>-seed<seed>)")


def _out_dir(args, suffix: str = "") -> Path:
    if args.out is not None:
        return Path(args.out)
    return Path("runs") / f"{args.problem}-seed{args.seed}{suffix}"


def _print_run_summary(runlog: dict) -> None:
    s = runlog["summary"]
    print(f"problem: {runlog['problem']}  strategy: {runlog['strategy']}  "
          f"seed: {runlog['seed']}")
    print(f"evaluations: {s['n_evaluations']}")
    print(f"final hypervolume: {s['final_hv']:.6f}")
    if s["final_log_hv_difference"] is not None:
        print(f"log hypervolume difference: {s['final_log_hv_difference']:.4f}")
    if s.get("relative_hv_difference") is not None:
        print(f"relative hypervolume difference: "
              f"{s['relative_hv_difference']:.3e}")


def cmd_run(args) -> int:
    if args.resume is None and args.problem is None:
        raise ValueError("--problem is required unless --resume is given")
    if args.resume is not None and args.out is None:
        # A resumed run continues in place next to its checkpoint.
        out = Path(args.resume).parent
    else:
        out = _out_dir(args)
    out.mkdir(parents=True, exist_ok=True)
    mid_ckpt = out / "campaign.ckpt"
    if args.resume is not None:
        result = campaign.run_campaign(
            config=None,
            resume_from=args.resume,
            checkpoint_every=args.checkpoint_every,
            checkpoint_path=mid_ckpt,
        )
    else:
        result = campaign.run_campaign(
            config=_config_from_flags(args),
            checkpoint_every=args.checkpoint_every,
            checkpoint_path=mid_ckpt,
        )
    _write_json_atomic(out / "runlog.json", result.runlog)
    campaign.save_final_checkpoint(result, out / "final.ckpt")
    _print_run_summary(result.runlog)
    print(f"wrote {out / 'runlog.json'} and {out / 'final.ckpt'}")
    return 0


def cmd_baseline(args) -> int:
    out = _out_dir(args, suffix=f"-{args.strategy}")
    out.mkdir(parents=True, exist_ok=True)
    result = campaign.run_baseline(_config_from_flags(args), args.strategy)
    _write_json_atomic(out / "runlog.json", result.runlog)
    _print_run_summary(result.runlog)
    print(f"wrote {out / 'runlog.json'}")
    return 0


def cmd_export_front(args) -> int:
    model, surrogates, _, _, problem, _ = campaign.load_final_checkpoint(
        args.checkpoint
    )
    report = campaign.export_front(model, surrogates, args.samples)
    out = Path(args.out) if args.out else Path(args.checkpoint).parent
    out.mkdir(parents=True, exist_ok=True)
    m, n = problem.m, problem.n
    header = (
        [f"lambda{i + 1}" for i in range(m)]
        + [f"x{i + 1}" for i in range(n)]
        + [f"f{i + 1}" for i in range(m)]
        + [f"std{i + 1}" for i in range(m)]
        + ["non_dominated"]
    )
    rows = [",".join(header)]
    for k in range(args.samples):
        vals = np.concatenate([
            report["preferences"][k], report["x"][k],
            report["mean"][k], report["std"][k],
        ])
        rows.append(
            ",".join(repr(float(v)) for v in vals)
            + f",{int(report['non_dominated'][k])}"
        )
    _write_text_atomic(out / "front.csv", "\n".join(rows) + "\n")
    summary = {
        "problem": problem.name,
        "samples": args.samples,
        "n_non_dominated": int(report["non_dominated"].sum()),
        "hv_predicted": report["hv_predicted"],
        "relative_hv_difference": report["relative_hv_difference"],
    }
    _write_json_atomic(out / "front_summary.json", summary)
    print(f"wrote {out / 'front.csv'} ({args.samples} rows) and "
          f"{out / 'front_summary.json'}")
    if summary["relative_hv_difference"] is not None:
        print(f"relative hypervolume difference: "
              f"{summary['relative_hv_difference']:.3e}")
    return 0


def cmd_list_problems(args) -> int:
    del args
    for name in problems.list_problems():
        p = problems.make_problem(name)
        front = "front available" if p.has_known_front else "front unknown"
        print(f"{name:12s} n={p.n:2d} m={p.m}  "
              f"reference={np.array2string(p.reference_point, separator=', ')}  "
              f"({front})")
    return 0


def cmd_serve(args) -> int:
    from . import server

    snapshot = server.load_snapshot(args.checkpoint)
    httpd = server.make_server(snapshot, args.host, args.port)
    host, port = httpd.server_address[:2]
    print(f"serving {snapshot.problem.name} model on http://{host}:{port}")
    try:
        httpd.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        httpd.server_close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paretolearn",
        description="Batched multi-objective Bayesian optimization with a "
                    "learned preference-to-solution model.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a full optimization campaign")
    _add_budget_flags(p_run, problem_required=False)
    p_run.add_argument("--refine-candidates", default=True,
                       action=argparse.BooleanOptionalAction,
                       help="locally refine each sampled candidate against "
                            "its own scalarization before batch selection "
                            "(default on)")
    p_run.add_argument("--checkpoint-every", type=int, default=None,
                       help="save a resumable checkpoint every N iterations")
    p_run.add_argument("--resume", default=None,
                       help="resume from a mid-run checkpoint (other "
                            "configuration flags are taken from the file)")
    p_run.set_defaults(fn=cmd_run)

    p_base = sub.add_parser("baseline", help="run a reference strategy")
    _add_budget_flags(p_base)
    p_base.add_argument(
        "--strategy", required=True,
        choices=["sobol-random", "scalarization-no-model"],
        help="which reference strategy to run",
    )
    p_base.set_defaults(fn=cmd_baseline)

    p_exp = sub.add_parser("export-front",
                           help="sample the learned front from a checkpoint")
    p_exp.add_argument("--checkpoint", required=True,
                       help="final checkpoint written by `run`")
    p_exp.add_argument("--samples", type=int, default=1000,
                       help="number of sampled preferences (default 1000)")
    p_exp.add_argument("--out", default=None,
                       help="output directory (default: checkpoint directory)")
    p_exp.set_defaults(fn=cmd_export_front)

    p_list = sub.add_parser("list-problems", help="list registered problems")
    p_list.set_defaults(fn=cmd_list_problems)

    p_srv = sub.add_parser("serve",
                           help="serve a trained model over local HTTP")
    p_srv.add_argument("--checkpoint", required=True,
                       help="final checkpoint written by `run`")
    p_srv.add_argument("--port", type=int, default=8765,
                       help="listen port (default 8765)")
    p_srv.add_argument("--host", default="127.0.0.1",
                       help="bind address (default 127.0.0.1)")
    p_srv.set_defaults(fn=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (problems.UnregisteredProblemError, problems.FrontUnavailableError,
            CheckpointError, FileNotFoundError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
