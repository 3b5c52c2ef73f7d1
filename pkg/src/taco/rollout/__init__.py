from .collect import (
    DEFAULT_EPISODE_TICKS,
    collect_demos,
    episode_from_rollout,
    run_expert_episode,
)
from .envs import (
    ENVS,
    InsertionEnv,
    InsertionParams,
    InsertionState,
    PickPlaceEnv,
    PickPlaceParams,
    PickPlaceState,
    ReorientEnv,
    ReorientParams,
    ReorientState,
    StepRecord,
    make_env,
)
from .expert import (
    EXPERTS,
    InsertionExpert,
    PickPlaceExpert,
    ReorientExpert,
    make_expert,
)
from .observe import (
    ACTION_RATE_HZ,
    AUDIO_STREAM,
    IMAGE_STREAM,
    PROPRIO_STREAM,
    TACTILE_STREAM,
    ObservationRig,
)
from .runner import (
    CheckpointPolicy,
    RolloutResult,
    ScriptedChunkPolicy,
    expected_query_count,
    run_receding_horizon,
)
from .sensor_models import (
    SENSOR_KINDS,
    ContactForces,
    SensorSim,
    SyntheticSensorModel,
    synth_tactile,
)

__all__ = [
    "ACTION_RATE_HZ",
    "AUDIO_STREAM",
    "CheckpointPolicy",
    "ContactForces",
    "DEFAULT_EPISODE_TICKS",
    "ENVS",
    "EXPERTS",
    "IMAGE_STREAM",
    "InsertionEnv",
    "InsertionExpert",
    "InsertionParams",
    "InsertionState",
    "ObservationRig",
    "PROPRIO_STREAM",
    "PickPlaceEnv",
    "PickPlaceExpert",
    "PickPlaceParams",
    "PickPlaceState",
    "ReorientEnv",
    "ReorientExpert",
    "ReorientParams",
    "ReorientState",
    "RolloutResult",
    "SENSOR_KINDS",
    "ScriptedChunkPolicy",
    "SensorSim",
    "StepRecord",
    "SyntheticSensorModel",
    "TACTILE_STREAM",
    "collect_demos",
    "episode_from_rollout",
    "expected_query_count",
    "make_env",
    "make_expert",
    "run_expert_episode",
    "run_receding_horizon",
    "synth_tactile",
]
