"""Privileged scripted experts.

Experts read the true environment state (including latents like mass or
friction) but are written so that the *demonstrated* decision points happen
only after the corresponding signal has become visible to touch: the
pick-and-place expert grips every object with the same firm probe force,
micro-lifts, and only then relaxes or tightens per the (sensed) load. That
ordering is what lets a tactile policy imitate the adaptation.

Expert actions are pure functions of (seed, state), so they can be replayed
or rolled forward in simulation without hidden counters.
"""

from __future__ import annotations

import numpy as np

from ..seeding import derive_rng
from .envs import InsertionEnv, PickPlaceEnv, ReorientEnv


class PickPlaceExpert:
    """Approach, firm probe grasp, micro-lift, force set by mass, transport."""

    # grip forces: the probe exceeds the heavy slip threshold (~8.2) so
    # demos never slip; branch forces keep >1.2x margin to each threshold
    PROBE_FORCE = 8.8
    FORCE_HEAVY = 10.5
    FORCE_LIGHT = 2.2
    SENSE_TICKS = 12  # ticks between micro-lift and the force decision
    HOVER_Y = 0.16
    PROBE_Y = 0.09
    CARRY_Y = 0.22
    OPEN_W = 0.16

    def __init__(self, env: PickPlaceEnv, seed: int = 0, jitter: float = 0.002):
        self.env = env
        self.seed = seed
        self.jitter = jitter

    def _jit(self, state, k: int) -> float:
        if self.jitter <= 0:
            return 0.0
        return float(derive_rng(self.seed, state.t, k).normal(0.0, self.jitter))

    def action(self, state) -> np.ndarray:
        p = self.env.params
        grasp_y = p.object_height / 2.0
        grip_w = p.object_width - 0.01

        if state.phase == "grasped":
            since = state.t - (state.t_grasp or state.t)
            if since < 2:  # settle the grasp
                return np.array([state.object_x, grasp_y, grip_w, self.PROBE_FORCE])
            if since < 2 + self.SENSE_TICKS:  # micro-lift: load becomes sensible
                return np.array([state.object_x, self.PROBE_Y, grip_w, self.PROBE_FORCE])
            force = (
                self.FORCE_HEAVY if state.mass_label == "heavy" else self.FORCE_LIGHT
            )
            if abs(state.gripper_x - p.target_x) > 0.012:
                # carry at half the slew limit so corrections stay possible
                step = np.clip(p.target_x - state.gripper_x, -0.025, 0.025)
                return np.array(
                    [state.gripper_x + step + self._jit(state, 0), self.CARRY_Y, grip_w, force]
                )
            if state.gripper_y > grasp_y + 0.012:  # lower onto the target
                return np.array([p.target_x, grasp_y, grip_w, force])
            return np.array([p.target_x, grasp_y, self.OPEN_W, 0.0])  # release

        if state.placed_x is not None or state.dropped:
            # retreat and hold
            return np.array([state.gripper_x, self.HOVER_Y, self.OPEN_W, 0.0])

        dx = state.object_x - state.gripper_x
        if abs(dx) > 0.012:
            return np.array(
                [state.object_x + self._jit(state, 1), self.HOVER_Y, self.OPEN_W, 0.0]
            )
        if state.gripper_y > grasp_y + 0.012:
            return np.array([state.object_x, grasp_y, self.OPEN_W, 0.0])
        return np.array([state.object_x, grasp_y, grip_w, self.PROBE_FORCE])


class InsertionExpert:
    """Descend near the (occluded) slot, then scan under light contact."""

    PRESS_Z = -0.02
    APPROACH_Z = 0.16

    def __init__(self, env: InsertionEnv, seed: int = 0, visual_err_std: float = 0.015):
        self.env = env
        self.seed = seed
        # coarse visual estimate drawn once; fine alignment must come from touch
        err = float(derive_rng(seed, 31).normal(0.0, visual_err_std))
        self.visual_err = float(np.clip(err, -0.03, 0.03))

    def action(self, state) -> np.ndarray:
        p = self.env.params
        guess = state.slot_x + self.visual_err
        if state.peg_z <= -p.depth_full + 1e-6:
            return np.array([state.peg_x, -p.depth_full])  # hold inserted
        if state.peg_z < -0.004:  # dropping into the slot
            return np.array([state.peg_x, -p.depth_full])
        if abs(state.peg_x - guess) > 0.01 and state.peg_z > 0.01:
            return np.array([guess, self.APPROACH_Z])  # coarse align high up
        if state.pressing > 1e-6:
            # in contact off-slot: scan toward the true slot center
            step = np.clip(state.slot_x - state.peg_x, -0.012, 0.012)
            return np.array([state.peg_x + step, self.PRESS_Z])
        return np.array([state.peg_x, self.PRESS_Z])  # descend to contact


class ReorientExpert:
    """Probe the contact, then rotate at a force inside the latent window."""

    PROBE_FORCE = 4.0
    PROBE_TICKS = 5

    def __init__(self, env: ReorientEnv, seed: int = 0):
        self.env = env
        self.seed = seed

    def action(self, state) -> np.ndarray:
        p = self.env.params
        if state.t < self.PROBE_TICKS:
            return np.array([0.0, self.PROBE_FORCE])
        force = (p.lift_min + state.slide_max) / 2.0  # privileged window center
        return np.array([p.angle_target, force])


EXPERTS = {
    "pickplace": PickPlaceExpert,
    "insertion": InsertionExpert,
    "reorient": ReorientExpert,
}


def make_expert(env, seed: int = 0):
    try:
        return EXPERTS[env.name](env, seed)
    except KeyError:
        raise KeyError(f"no expert for env '{env.name}'") from None
