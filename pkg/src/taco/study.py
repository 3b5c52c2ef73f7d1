"""Paired visuotactile / vision-only comparison on the toy tasks.

For each seed: collect scripted demonstrations, train one policy per sensor
mode on identical data, then roll both out closed-loop on a shared evaluation
set. The report carries success rates split by the hidden condition and the
mean commanded grip force per condition, which is where a tactile policy's
adaptation shows up.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .data.episode import load_episode
from .data.normalize import compute_norm_stats
from .encoders.nets import ConvEncoderConfig
from .policy.config import PolicyConfig
from .policy.model import SENSOR_MODES, VISION_ONLY, VISUOTACTILE
from .rollout.collect import collect_demos
from .rollout.envs import make_env
from .rollout.runner import CheckpointPolicy, RolloutResult, run_receding_horizon
from .rollout.sensor_models import SyntheticSensorModel
from .seeding import derive_seed
from .training.checkpoint import load_checkpoint
from .training.pipeline import ChunkDataset, add_melspec_stats, infer_obs_spec
from .training.trainer import TrainConfig, train


def default_toy_policy(action_dim: int) -> PolicyConfig:
    return PolicyConfig.small(action_dim)


def default_toy_camera() -> ConvEncoderConfig:
    return ConvEncoderConfig.small()


def default_toy_train(seed: int, steps: int = 4000) -> TrainConfig:
    return TrainConfig(lr=1e-3, batch_size=8, steps=steps, seed=seed, ckpt_every=0)


def prepare_dataset(
    episodes_dir,
    sensor_mode: str,
    policy_cfg: PolicyConfig,
    tactile_variants: dict[str, str] | None = None,
    mlp_hidden: tuple[int, ...] = (256, 256),
) -> ChunkDataset:
    """Load demo episodes and freeze normalization stats for training."""
    dirs = sorted(p for p in Path(episodes_dir).iterdir() if p.is_dir())
    if not dirs:
        raise FileNotFoundError(f"no episode directories under {episodes_dir}")
    episodes = [load_episode(d) for d in dirs]
    stats = add_melspec_stats(compute_norm_stats(episodes), episodes)
    obs_spec = infer_obs_spec(
        episodes[0], policy_cfg.hidden_dim, tactile_variants, mlp_hidden
    )
    return ChunkDataset(
        episodes, stats, obs_spec, sensor_mode, chunk_len=policy_cfg.chunk_len
    )


@dataclass
class EvalSummary:
    n: int
    success_rate: float
    success_by_label: dict[str, float]
    grip_force_by_label: dict[str, float]
    success_vector: list[bool]

    @property
    def grip_force_gap(self) -> float:
        vals = list(self.grip_force_by_label.values())
        return abs(vals[0] - vals[1]) if len(vals) == 2 else 0.0


def _mean_grip_force(res: RolloutResult) -> float | None:
    forces = [row["force"] for row in res.trajectory if row.get("phase") == "grasped"]
    return float(np.mean(forces)) if forces else None


def evaluate_closed_loop(
    checkpoint,
    env_name: str,
    n_episodes: int,
    seed: int,
    max_ticks: int = 160,
    sensor_model: SyntheticSensorModel | None = None,
) -> EvalSummary:
    """Roll a checkpoint on alternating-condition episodes."""
    env = make_env(env_name)
    policy = CheckpointPolicy(
        checkpoint if not isinstance(checkpoint, (str, Path)) else load_checkpoint(checkpoint)
    )
    labels = env.condition_labels
    per_label_succ: dict[str, list[bool]] = {lab: [] for lab in labels}
    per_label_force: dict[str, list[float]] = {lab: [] for lab in labels}
    successes = []
    for i in range(n_episodes):
        label = labels[i % len(labels)]
        res = run_receding_horizon(
            policy, env, max_ticks=max_ticks, seed=derive_seed(seed, 900, i),
            label=label, sensor_model=sensor_model,
        )
        successes.append(res.success)
        per_label_succ[label].append(res.success)
        f = _mean_grip_force(res)
        if f is not None:
            per_label_force[label].append(f)
    return EvalSummary(
        n=n_episodes,
        success_rate=float(np.mean(successes)),
        success_by_label={k: float(np.mean(v)) if v else 0.0 for k, v in per_label_succ.items()},
        grip_force_by_label={
            k: float(np.mean(v)) if v else 0.0 for k, v in per_label_force.items()
        },
        success_vector=[bool(s) for s in successes],
    )


@dataclass
class SeedOutcome:
    seed: int
    eval_by_mode: dict[str, EvalSummary]
    checkpoints: dict[str, str]


@dataclass
class StudyReport:
    env_name: str
    seeds: list[int]
    outcomes: list[SeedOutcome] = field(default_factory=list)

    def mean_success(self, mode: str, label: str) -> float:
        return float(
            np.mean([o.eval_by_mode[mode].success_by_label[label] for o in self.outcomes])
        )

    def mean_force_gap(self, mode: str) -> float:
        return float(np.mean([o.eval_by_mode[mode].grip_force_gap for o in self.outcomes]))

    def to_dict(self) -> dict:
        return {
            "env": self.env_name,
            "seeds": self.seeds,
            "outcomes": [
                {
                    "seed": o.seed,
                    "checkpoints": o.checkpoints,
                    "eval": {m: asdict(s) for m, s in o.eval_by_mode.items()},
                }
                for o in self.outcomes
            ],
        }

    def save(self, path):
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, indent=2)


def run_comparison_study(
    out_dir,
    env_name: str = "pickplace",
    seeds: tuple[int, ...] = (0, 1, 2),
    n_demos: int = 60,
    n_eval: int = 40,
    steps: int = 4000,
    policy_cfg: PolicyConfig | None = None,
    camera_conv: ConvEncoderConfig | None = None,
    sensor_model: SyntheticSensorModel | None = None,
    max_ticks: int = 160,
) -> StudyReport:
    """Full study: per seed, fresh demos, one policy per mode, shared eval."""
    out_dir = Path(out_dir)
    env = make_env(env_name)
    policy_cfg = policy_cfg or default_toy_policy(env.action_dim)
    camera_conv = camera_conv or default_toy_camera()
    report = StudyReport(env_name=env_name, seeds=list(seeds))

    for seed in seeds:
        seed_dir = out_dir / f"seed_{seed}"
        demo_dir = seed_dir / "demos"
        if not demo_dir.exists():
            collect_demos(
                env_name, n_demos, demo_dir, seed=derive_seed(seed, 500),
                sensor_model=sensor_model,
            )
        evals: dict[str, EvalSummary] = {}
        ckpts: dict[str, str] = {}
        for mode in (VISUOTACTILE, VISION_ONLY):
            dataset = prepare_dataset(demo_dir, mode, policy_cfg)
            art = train(
                default_toy_train(seed=derive_seed(seed, 600), steps=steps),
                dataset,
                policy_cfg,
                mode,
                seed_dir / mode,
                camera_conv=camera_conv,
            )
            ckpts[mode] = str(art.final_checkpoint)
            evals[mode] = evaluate_closed_loop(
                art.final_checkpoint, env_name, n_eval,
                seed=derive_seed(seed, 700), max_ticks=max_ticks,
                sensor_model=sensor_model,
            )
        report.outcomes.append(SeedOutcome(seed=seed, eval_by_mode=evals, checkpoints=ckpts))
        report.save(out_dir / "study_report.json")
    return report
