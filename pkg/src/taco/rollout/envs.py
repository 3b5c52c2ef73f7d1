"""Desk-scale closed-loop tasks with vision-ambiguous latents.

Three 2-D kinematic surrogates reproduce the information structure of the
benchmark tasks: a pick-and-place whose object mass is invisible to the
camera but revealed to touch as load force after lift-off, a peg insertion
whose contact region is occluded from the camera during descent, and an
in-place reorientation that requires keeping the applied force inside a
friction-dependent window.

Dynamics are deterministic given (seed, action sequence); all observation
noise lives in the synthetic sensors. Renders never draw latent quantities:
before contact, images are bit-identical across latent conditions.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from ..seeding import derive_rng
from .sensor_models import ContactForces

IMG_SIZE = 64
WORLD_X = (-0.5, 0.5)
WORLD_Y = (-0.05, 0.55)
GRAVITY = 9.81


def _to_px(x: float, y: float) -> tuple[int, int]:
    col = int((x - WORLD_X[0]) / (WORLD_X[1] - WORLD_X[0]) * (IMG_SIZE - 1))
    row = int((1.0 - (y - WORLD_Y[0]) / (WORLD_Y[1] - WORLD_Y[0])) * (IMG_SIZE - 1))
    return row, col


def _fill(img: np.ndarray, x0: float, x1: float, y0: float, y1: float, color):
    r1, c0 = _to_px(x0, y1)
    r0, c1 = _to_px(x1, y0)
    r0, r1 = sorted((max(0, min(IMG_SIZE - 1, r0)), max(0, min(IMG_SIZE - 1, r1))))
    c0, c1 = sorted((max(0, min(IMG_SIZE - 1, c0)), max(0, min(IMG_SIZE - 1, c1))))
    img[r1 : r0 + 1, c0 : c1 + 1] = color


def _canvas() -> np.ndarray:
    img = np.full((IMG_SIZE, IMG_SIZE, 3), 220, dtype=np.uint8)
    _fill(img, WORLD_X[0], WORLD_X[1], WORLD_Y[0], 0.0, (90, 70, 50))  # table
    return img


def _rate_limit(current: float, target: float, max_step: float) -> float:
    return current + np.clip(target - current, -max_step, max_step)


@dataclass(frozen=True)
class StepRecord:
    contact: ContactForces
    clipped: bool = False
    info: dict = field(default_factory=dict)


# --------------------------------------------------------------------------
# pick and place with hidden mass
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PickPlaceParams:
    dt: float = 0.1
    object_width: float = 0.08
    object_height: float = 0.06
    mass_light: float = 0.15
    mass_heavy: float = 1.0
    friction_mu: float = 0.3
    grip_coeff: float = 0.25  # slip threshold = grip_coeff * m * g / mu
    slip_budget: float = 0.5  # integrated deficit-seconds before a drop
    target_x: float = 0.35
    target_tol: float = 0.05
    start_x_range: tuple[float, float] = (-0.35, 0.05)
    move_step: float = 0.05
    width_step: float = 0.05
    force_max: float = 12.0

    def slip_threshold(self, mass: float) -> float:
        return self.grip_coeff * mass * GRAVITY / self.friction_mu


@dataclass(frozen=True)
class PickPlaceState:
    t: int
    object_x: float
    object_y: float
    mass: float
    mass_label: str
    gripper_x: float
    gripper_y: float
    width: float
    force: float
    phase: str  # pre_grasp | grasped | done
    slip_accum: float = 0.0
    dropped: bool = False
    placed_x: float | None = None
    t_grasp: int | None = None  # tick of the most recent grasp onset
    success: bool = False
    clip_events: int = 0


class PickPlaceEnv:
    """Grasp a visually identical object of unknown mass and place it."""

    name = "pickplace"
    action_dim = 4  # commanded [x, y, width, grip_force]
    proprio_dim = 3  # grip force is sensed through touch, not proprioception
    condition_labels = ("light", "heavy")

    def __init__(self, params: PickPlaceParams = PickPlaceParams()):
        self.params = params

    @property
    def dt(self) -> float:
        return self.params.dt

    def reset(self, seed: int, label: str | None = None) -> PickPlaceState:
        rng = derive_rng(seed, 101)
        if label is None:
            label = "heavy" if rng.integers(0, 2) else "light"
        if label not in self.condition_labels:
            raise ValueError(f"unknown mass label '{label}'")
        # the layout draw is independent of the label: identical scenes
        x0 = float(rng.uniform(*self.params.start_x_range))
        mass = self.params.mass_heavy if label == "heavy" else self.params.mass_light
        return PickPlaceState(
            t=0, object_x=x0, object_y=0.0, mass=mass, mass_label=label,
            gripper_x=-0.4, gripper_y=0.3, width=0.16, force=0.0, phase="pre_grasp",
        )

    def label_of(self, state: PickPlaceState) -> str:
        return state.mass_label

    def proprio(self, state: PickPlaceState) -> np.ndarray:
        return np.array(
            [state.gripper_x, state.gripper_y, state.width], dtype=np.float32
        )

    def step(self, state: PickPlaceState, action: np.ndarray) -> tuple[PickPlaceState, StepRecord]:
        p = self.params
        raw = np.asarray(action, dtype=np.float64).reshape(-1)
        if raw.shape[0] != self.action_dim:
            raise ValueError(f"action must have {self.action_dim} entries")
        lo = np.array([WORLD_X[0] + 0.05, 0.0, 0.0, 0.0])
        hi = np.array([WORLD_X[1] - 0.05, 0.45, 0.2, p.force_max])
        cmd = np.clip(raw, lo, hi)
        clipped = bool(np.any(cmd != raw))

        gx = _rate_limit(state.gripper_x, float(cmd[0]), p.move_step)
        gy = _rate_limit(state.gripper_y, float(cmd[1]), p.move_step)
        width = _rate_limit(state.width, float(cmd[2]), p.width_step)
        force = float(cmd[3])

        grasp_y = p.object_height / 2.0
        phase = state.phase
        ox, oy = state.object_x, state.object_y
        slip_accum = state.slip_accum
        dropped = state.dropped
        placed_x = state.placed_x
        t_grasp = state.t_grasp
        onset = False
        slipping = False

        if phase == "grasped":
            # object rides with the gripper
            ox = gx
            oy = max(gy - grasp_y, 0.0)
            released = force < 0.3 or width > p.object_width + 0.03
            if released:
                phase = "pre_grasp"
                oy = 0.0
                placed_x = ox
            else:
                lifted = oy > 0.005
                thresh = p.slip_threshold(state.mass)
                if lifted and force < thresh:
                    slipping = True
                    slip_accum += p.dt * (thresh - force) / thresh
                    if slip_accum > p.slip_budget:
                        phase = "pre_grasp"
                        oy = 0.0
                        dropped = True
        elif phase == "pre_grasp":
            near = (
                abs(gx - ox) <= p.object_width / 2.0
                and abs(gy - (oy + grasp_y)) <= 0.03
            )
            if near and width <= p.object_width - 0.005 and force >= 0.5:
                phase = "grasped"
                onset = True
                slip_accum = 0.0
                t_grasp = state.t + 1
                ox, oy = gx, max(gy - grasp_y, 0.0)

        success = (
            phase != "grasped"
            and placed_x is not None
            and not dropped
            and abs(ox - p.target_x) <= p.target_tol
        )

        new_state = replace(
            state,
            t=state.t + 1,
            object_x=ox,
            object_y=oy,
            gripper_x=gx,
            gripper_y=gy,
            width=width,
            force=force,
            phase=phase,
            slip_accum=slip_accum,
            dropped=dropped,
            placed_x=placed_x,
            t_grasp=t_grasp,
            success=state.success or success,
            clip_events=state.clip_events + int(clipped),
        )

        grasped = new_state.phase == "grasped"
        lifted = grasped and new_state.object_y > 0.005
        contact = ContactForces(
            normal=new_state.force if grasped else 0.0,
            tangential=new_state.mass * GRAVITY if lifted else 0.0,
            slipping=slipping,
            contact=grasped,
            contact_onset=onset,
        )
        return new_state, StepRecord(contact=contact, clipped=clipped, info={})

    def render(self, state: PickPlaceState) -> np.ndarray:
        # mass is deliberately not drawn anywhere
        p = self.params
        img = _canvas()
        _fill(img, p.target_x - 0.02, p.target_x + 0.02, 0.0, 0.012, (60, 170, 60))
        _fill(
            img,
            state.object_x - p.object_width / 2,
            state.object_x + p.object_width / 2,
            state.object_y,
            state.object_y + p.object_height,
            (50, 90, 200),
        )
        half = state.width / 2
        for fx in (state.gripper_x - half, state.gripper_x + half):
            _fill(img, fx - 0.008, fx + 0.008, state.gripper_y - 0.03, state.gripper_y + 0.03, (190, 40, 40))
        _fill(
            img,
            state.gripper_x - half - 0.008,
            state.gripper_x + half + 0.008,
            state.gripper_y + 0.03,
            state.gripper_y + 0.045,
            (190, 40, 40),
        )
        return img

    def is_success(self, state: PickPlaceState) -> bool:
        return state.success

    def is_partial(self, state: PickPlaceState) -> bool:
        return False

    def summary(self, state: PickPlaceState) -> dict:
        return {
            "phase": state.phase,
            "object_x": round(state.object_x, 4),
            "object_y": round(state.object_y, 4),
            "force": round(state.force, 4),
            "dropped": state.dropped,
            "label": state.mass_label,
        }


# --------------------------------------------------------------------------
# occluded peg insertion
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class InsertionParams:
    dt: float = 0.1
    slot_halfwidth: float = 0.025
    slot_range: tuple[float, float] = (-0.2, 0.2)
    depth_half: float = 0.03
    depth_full: float = 0.06
    occlude_below: float = 0.12
    move_step: float = 0.04
    press_stiffness: float = 120.0
    friction_mu: float = 0.5


@dataclass(frozen=True)
class InsertionState:
    t: int
    peg_x: float
    peg_z: float
    slot_x: float
    min_z: float = 1.0
    pressing: float = 0.0  # current normal force
    was_contact: bool = False
    success: bool = False
    clip_events: int = 0


class InsertionEnv:
    """Lower a peg into a slot whose surroundings are occluded during descent."""

    name = "insertion"
    action_dim = 2  # commanded [x, z]
    proprio_dim = 2
    condition_labels = ("default",)

    def __init__(self, params: InsertionParams = InsertionParams()):
        self.params = params

    @property
    def dt(self) -> float:
        return self.params.dt

    def reset(self, seed: int, label: str | None = None) -> InsertionState:
        rng = derive_rng(seed, 202)
        slot = float(rng.uniform(*self.params.slot_range))
        return InsertionState(t=0, peg_x=-0.35, peg_z=0.3, slot_x=slot)

    def label_of(self, state: InsertionState) -> str:
        return "default"

    def proprio(self, state: InsertionState) -> np.ndarray:
        return np.array([state.peg_x, state.peg_z], dtype=np.float32)

    def step(self, state: InsertionState, action: np.ndarray) -> tuple[InsertionState, StepRecord]:
        p = self.params
        raw = np.asarray(action, dtype=np.float64).reshape(-1)
        if raw.shape[0] != self.action_dim:
            raise ValueError(f"action must have {self.action_dim} entries")
        lo = np.array([WORLD_X[0] + 0.05, -p.depth_full])
        hi = np.array([WORLD_X[1] - 0.05, 0.4])
        cmd = np.clip(raw, lo, hi)
        clipped = bool(np.any(cmd != raw))

        x = _rate_limit(state.peg_x, float(cmd[0]), p.move_step)
        z_target = float(cmd[1])
        z = _rate_limit(state.peg_z, z_target, p.move_step)

        over_slot = abs(x - state.slot_x) <= p.slot_halfwidth
        force = 0.0
        if z < 0.0 and not over_slot:
            force = p.press_stiffness * min(0.0 - z, 0.02)
            z = 0.0
        in_contact = force > 1e-6
        scanning = in_contact and abs(x - state.peg_x) > 1e-6
        onset = in_contact and not state.was_contact

        min_z = min(state.min_z, z)
        success = z <= -p.depth_full + 1e-9

        new_state = replace(
            state,
            t=state.t + 1,
            peg_x=x,
            peg_z=z,
            min_z=min_z,
            pressing=force,
            was_contact=in_contact,
            success=state.success or success,
            clip_events=state.clip_events + int(clipped),
        )
        contact = ContactForces(
            normal=force,
            tangential=p.friction_mu * force if scanning else 0.0,
            slipping=scanning,
            contact=in_contact,
            contact_onset=onset,
        )
        return new_state, StepRecord(contact=contact, clipped=clipped, info={})

    def render(self, state: InsertionState) -> np.ndarray:
        img = _canvas()
        p = self.params
        occluded = state.peg_z < p.occlude_below
        if not occluded:
            # slot visible as a gap in the surface
            _fill(img, state.slot_x - p.slot_halfwidth, state.slot_x + p.slot_halfwidth,
                  WORLD_Y[0], 0.0, (220, 220, 220))
        else:
            # occluder band hides the contact region
            _fill(img, WORLD_X[0], WORLD_X[1], -0.02, p.occlude_below * 0.6, (140, 140, 140))
        _fill(img, state.peg_x - 0.012, state.peg_x + 0.012,
              max(state.peg_z, p.occlude_below * 0.6 if occluded else state.peg_z),
              max(state.peg_z, 0.0) + 0.12, (40, 40, 160))
        return img

    def is_success(self, state: InsertionState) -> bool:
        return state.success

    def is_partial(self, state: InsertionState) -> bool:
        return (not state.success) and state.min_z <= -self.params.depth_half

    def summary(self, state: InsertionState) -> dict:
        return {
            "peg_x": round(state.peg_x, 4),
            "peg_z": round(state.peg_z, 4),
            "min_z": round(state.min_z, 4),
            "force": round(state.pressing, 4),
            "label": "default",
        }


# --------------------------------------------------------------------------
# force-regulated reorientation
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ReorientParams:
    dt: float = 0.1
    angle_target: float = np.pi / 2
    angle_tol: float = 0.08
    lift_min: float = 3.0
    slide_max_low: float = 6.0
    slide_max_high: float = 10.0
    mu_low: float = 0.4
    mu_high: float = 0.9
    rotate_step: float = 0.12
    slide_budget: float = 0.4
    lift_budget: float = 1.0
    force_max: float = 12.0


@dataclass(frozen=True)
class ReorientState:
    t: int
    angle: float
    force: float
    friction_label: str
    mu: float
    slide_max: float
    slide_accum: float = 0.0
    lift_accum: float = 0.0
    failed: str | None = None  # slid_off | lifted
    success: bool = False
    clip_events: int = 0


class ReorientEnv:
    """Rotate an object in place while keeping contact force inside a window."""

    name = "reorient"
    action_dim = 2  # commanded [angle, force]
    proprio_dim = 1  # applied force is sensed through touch, not proprioception
    condition_labels = ("low_friction", "high_friction")

    def __init__(self, params: ReorientParams = ReorientParams()):
        self.params = params

    @property
    def dt(self) -> float:
        return self.params.dt

    def reset(self, seed: int, label: str | None = None) -> ReorientState:
        rng = derive_rng(seed, 303)
        if label is None:
            label = "high_friction" if rng.integers(0, 2) else "low_friction"
        if label not in self.condition_labels:
            raise ValueError(f"unknown friction label '{label}'")
        p = self.params
        high = label == "high_friction"
        return ReorientState(
            t=0, angle=0.0, force=0.0, friction_label=label,
            mu=p.mu_high if high else p.mu_low,
            slide_max=p.slide_max_high if high else p.slide_max_low,
        )

    def label_of(self, state: ReorientState) -> str:
        return state.friction_label

    def proprio(self, state: ReorientState) -> np.ndarray:
        return np.array([state.angle], dtype=np.float32)

    def step(self, state: ReorientState, action: np.ndarray) -> tuple[ReorientState, StepRecord]:
        p = self.params
        raw = np.asarray(action, dtype=np.float64).reshape(-1)
        if raw.shape[0] != self.action_dim:
            raise ValueError(f"action must have {self.action_dim} entries")
        cmd = np.clip(raw, [0.0, 0.0], [2.0, p.force_max])
        clipped = bool(np.any(cmd != raw))

        force = float(cmd[1])
        angle = state.angle
        slide_accum = state.slide_accum
        lift_accum = state.lift_accum
        failed = state.failed
        rotating = False

        in_contact = force > 0.2
        onset = in_contact and state.force <= 0.2
        if failed is None and in_contact:
            if force < p.lift_min:
                lift_accum += p.dt
                if lift_accum > p.lift_budget:
                    failed = "lifted"
            elif force > state.slide_max:
                slide_accum += p.dt * (force - state.slide_max) / state.slide_max
                if slide_accum > p.slide_budget:
                    failed = "slid_off"
            else:
                new_angle = _rate_limit(angle, float(cmd[0]), p.rotate_step)
                rotating = abs(new_angle - angle) > 1e-9
                angle = new_angle

        success = failed is None and abs(angle - p.angle_target) <= p.angle_tol

        new_state = replace(
            state,
            t=state.t + 1,
            angle=angle,
            force=force,
            slide_accum=slide_accum,
            lift_accum=lift_accum,
            failed=failed,
            success=state.success or success,
            clip_events=state.clip_events + int(clipped),
        )
        contact = ContactForces(
            normal=force if in_contact else 0.0,
            tangential=state.mu * force if rotating else 0.0,
            slipping=rotating,
            contact=in_contact,
            contact_onset=onset,
        )
        return new_state, StepRecord(contact=contact, clipped=clipped, info={})

    def render(self, state: ReorientState) -> np.ndarray:
        img = _canvas()
        cx, cy = 0.0, 0.15
        _fill(img, cx - 0.1, cx + 0.1, cy - 0.1, cy + 0.1, (200, 160, 60))
        # orientation mark; friction class is never drawn
        dx, dy = 0.09 * np.cos(state.angle), 0.09 * np.sin(state.angle)
        steps = 12
        for i in range(steps + 1):
            fx, fy = cx + dx * i / steps, cy + dy * i / steps
            _fill(img, fx - 0.006, fx + 0.006, fy - 0.006, fy + 0.006, (30, 30, 30))
        if state.failed == "slid_off":
            _fill(img, 0.25, 0.45, 0.0, 0.05, (200, 160, 60))
        return img

    def is_success(self, state: ReorientState) -> bool:
        return state.success

    def is_partial(self, state: ReorientState) -> bool:
        return False

    def summary(self, state: ReorientState) -> dict:
        return {
            "angle": round(state.angle, 4),
            "force": round(state.force, 4),
            "failed": state.failed,
            "label": state.friction_label,
        }


ENVS = {
    "pickplace": PickPlaceEnv,
    "insertion": InsertionEnv,
    "reorient": ReorientEnv,
}


def make_env(name: str, **kwargs):
    try:
        return ENVS[name](**kwargs) if kwargs else ENVS[name]()
    except KeyError:
        raise KeyError(f"unknown env '{name}'; known: {sorted(ENVS)}") from None
